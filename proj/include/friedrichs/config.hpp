#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "friedrichs/form_factor.hpp"
#include "friedrichs/grid.hpp"
#include "friedrichs/model.hpp"
#include "friedrichs/oracle.hpp"

namespace friedrichs {

enum class InitialStateKind { PureDiscrete, Superposition, CustomFile };
enum class TimeSpacing { Linear, Log };
enum class OutputFormat { Csv, StructuredText };

struct ModelSection {
  double m = 1.0;
  double lambda = 0.1;
  FormFactor form_factor = FormFactor::flat();
  std::size_t nodes = 2000;
  double cutoff = 2.0;
  QuadratureRule quadrature = QuadratureRule::Midpoint;
};

// pure-discrete: |1⟩. superposition: (|1⟩ + |ω_k⟩)/√2 at the node nearest
// `partner_energy`. custom-file: density matrix of dimension nodes + 1.
struct InitialStateSection {
  InitialStateKind kind = InitialStateKind::PureDiscrete;
  std::optional<double> partner_energy;  // defaults to m
  std::string path;
};

struct TimeSection {
  double start = 0.0;
  double stop = 100.0;
  std::size_t count = 201;
  TimeSpacing spacing = TimeSpacing::Linear;

  std::vector<double> samples() const;
};

struct OutputSection {
  std::string directory = "out";
  OutputFormat format = OutputFormat::Csv;
};

struct Thresholds {
  double sup_deviation = 0.05;
  double rate_error = 0.05;
  double offdiag_error = 0.10;
  double engine_trace_drift = 1e-10;
  double oracle_trace_drift = 1e-12;
  bool require_window = true;
};

struct SweepSection {
  std::vector<double> lambda;
  std::vector<std::size_t> nodes;
};

struct JobConfig {
  ModelSection model;
  InitialStateSection initial_state;
  TimeSection times;
  OutputSection outputs;
  Thresholds thresholds;
  SweepSection sweep;
  std::filesystem::path base_directory;  // custom-file paths resolve against it

  ModelConfig build_model() const;
  ModelConfig build_model(double lambda, std::size_t nodes) const;
  // Initial density matrix on the grid of `cfg`.
  DensityMatrix initial_density(const ModelConfig& cfg) const;
};

// Throws ConfigError naming the JSON path of the offending field.
JobConfig parse_job_config(const nlohmann::json& doc);
// Throws ConfigError carrying the parser's line and column on malformed input.
JobConfig parse_job_config_text(const std::string& text);
JobConfig load_job_config(const std::filesystem::path& path);

nlohmann::json to_json(const JobConfig& job);
// Resolved configuration as "# "-prefixed comment lines.
std::string config_header(const JobConfig& job);

std::string_view to_string(InitialStateKind kind);
std::string_view to_string(TimeSpacing spacing);
std::string_view to_string(OutputFormat format);
OutputFormat parse_output_format(std::string_view name);

}  // namespace friedrichs
