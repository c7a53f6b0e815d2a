#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "friedrichs/config.hpp"
#include "friedrichs/error.hpp"

using namespace friedrichs;

namespace {

std::string config_error(const std::string& text) {
  try {
    parse_job_config_text(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("config defaults") {
  const JobConfig job = parse_job_config_text("{}");
  CHECK(job.model.m == 1.0);
  CHECK(job.model.lambda == 0.1);
  CHECK(job.model.nodes == 2000);
  CHECK(job.model.cutoff == 2.0);
  CHECK(job.model.form_factor.family == FormFactorFamily::FlatCutoff);
  CHECK(job.model.quadrature == QuadratureRule::Midpoint);
  CHECK(job.initial_state.kind == InitialStateKind::PureDiscrete);
  CHECK(job.times.start == 0.0);
  CHECK(job.times.stop == 100.0);
  CHECK(job.times.count == 201);
  CHECK(job.outputs.format == OutputFormat::Csv);
  CHECK(job.thresholds.sup_deviation == 0.05);
}

TEST_CASE("config fields are read") {
  const JobConfig job = parse_job_config_text(R"({
    "model": { "m": 0.8, "lambda": 0.05, "nodes": 64, "cutoff": 3.0, "quadrature": "gauss-legendre",
               "form_factor": { "family": "gaussian-bump", "center": 1.2, "width": 0.5 } },
    "initial_state": { "kind": "superposition", "partner_energy": 1.1 },
    "times": { "start": 0.5, "stop": 50, "count": 3, "spacing": "log" },
    "outputs": { "directory": "results", "format": "structured-text" },
    "thresholds": { "rate_error": 0.1, "require_window": false },
    "sweep": { "lambda": [0.1, 0.2], "nodes": [32, 64] }
  })");
  CHECK(job.model.m == 0.8);
  CHECK(job.model.quadrature == QuadratureRule::GaussLegendre);
  CHECK(job.model.form_factor.family == FormFactorFamily::GaussianBump);
  CHECK(job.model.form_factor.width == 0.5);
  CHECK(job.initial_state.kind == InitialStateKind::Superposition);
  CHECK(*job.initial_state.partner_energy == 1.1);
  CHECK(job.times.spacing == TimeSpacing::Log);
  CHECK(job.outputs.directory == "results");
  CHECK(job.outputs.format == OutputFormat::StructuredText);
  CHECK(job.thresholds.rate_error == 0.1);
  CHECK_FALSE(job.thresholds.require_window);
  CHECK(job.sweep.lambda == std::vector<double>{0.1, 0.2});
  CHECK(job.sweep.nodes == std::vector<std::size_t>{32, 64});
}

TEST_CASE("config errors name the field") {
  CHECK(config_error(R"({"model": {"lamda": 0.1}})").find("model.lamda: unknown key") != std::string::npos);
  CHECK(config_error(R"({"modle": {}})").find("$.modle: unknown key") != std::string::npos);
  CHECK(config_error(R"({"model": {"form_factor": {"family": "flat-cutoff", "centre": 1}}})")
            .find("model.form_factor.centre") != std::string::npos);
  CHECK(config_error(R"({"model": {"nodes": 8}})").find("model.nodes") != std::string::npos);
  CHECK(config_error(R"({"model": {"nodes": -3}})").find("model.nodes") != std::string::npos);
  CHECK(config_error(R"({"model": {"m": 3}})").find("model.m") != std::string::npos);
  CHECK(config_error(R"({"model": {"lambda": "big"}})").find("model.lambda: expected a number") != std::string::npos);
  CHECK(config_error(R"({"model": {"quadrature": "simpson"}})").find("model.quadrature") != std::string::npos);
  CHECK(config_error(R"({"times": {"count": 1}})").find("times.count") != std::string::npos);
  CHECK(config_error(R"({"times": {"start": 5, "stop": 5}})").find("times.stop") != std::string::npos);
  CHECK(config_error(R"({"times": {"start": -1}})").find("times.start") != std::string::npos);
  CHECK(config_error(R"({"times": {"spacing": "log"}})").find("times.start") != std::string::npos);
  CHECK(config_error(R"({"initial_state": {"kind": "custom-file"}})").find("initial_state.path") != std::string::npos);
  CHECK(config_error(R"({"sweep": {"lambda": [0.1, "x"]}})").find("sweep.lambda[1]") != std::string::npos);
  CHECK(config_error(R"({"outputs": {"format": "xml"}})").find("outputs.format") != std::string::npos);
  CHECK(config_error("{\n  \"model\": {,}\n}").find("line 2") != std::string::npos);
  CHECK(config_error("[1, 2]").find("expected an object") != std::string::npos);
}

TEST_CASE("time samples") {
  TimeSection lin;
  const std::vector<double> t = lin.samples();
  REQUIRE(t.size() == 201);
  for (std::size_t i = 0; i < t.size(); ++i) CHECK(t[i] == doctest::Approx(0.5 * static_cast<double>(i)).epsilon(1e-15));
  CHECK(t.back() == 100.0);

  TimeSection log{1.0, 1000.0, 4, TimeSpacing::Log};
  const std::vector<double> s = log.samples();
  CHECK(s[0] == 1.0);
  CHECK(s[1] == doctest::Approx(10.0));
  CHECK(s[2] == doctest::Approx(100.0));
  CHECK(s[3] == 1000.0);
}

TEST_CASE("config serialization round trip") {
  JobConfig job = parse_job_config_text(R"({"model": {"lambda": 0.2, "nodes": 40,
      "form_factor": {"family": "lorentzian", "center": 1.0, "width": 0.3}},
      "initial_state": {"kind": "superposition"}, "sweep": {"nodes": [20, 40]}})");
  const JobConfig again = parse_job_config(to_json(job));
  CHECK(to_json(again) == to_json(job));
  const std::string header = config_header(job);
  CHECK(header.rfind("# {", 0) == 0);
  CHECK(header.find("\"lorentzian\"") != std::string::npos);
}

TEST_CASE("initial states") {
  JobConfig job = parse_job_config_text(R"({"model": {"nodes": 20}})");
  const ModelConfig cfg = job.build_model();
  const Eigen::Index dim = cfg.grid().ssize() + 1;
  const Eigen::MatrixXcd pure = job.initial_density(cfg).matrix();
  CHECK(pure.rows() == dim);
  CHECK(pure(0, 0) == Complex(1.0));
  CHECK(pure.norm() == 1.0);

  job.initial_state.kind = InitialStateKind::Superposition;
  const Eigen::MatrixXcd sup = job.initial_density(cfg).matrix();
  const Eigen::Index k = cfg.resonance_index() + 1;
  CHECK(sup(0, 0).real() == doctest::Approx(0.5));
  CHECK(sup(0, k).real() == doctest::Approx(0.5));
  CHECK(sup(k, k).real() == doctest::Approx(0.5));

  const auto dir = std::filesystem::temp_directory_path() / "friedrichs_config_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "rho.json");
    out.precision(17);
    out << "{\"real\": [";
    for (Eigen::Index r = 0; r < dim; ++r) {
      out << (r ? "," : "") << "[";
      for (Eigen::Index c = 0; c < dim; ++c) out << (c ? "," : "") << (r == c ? 1.0 / static_cast<double>(dim) : 0.0);
      out << "]";
    }
    out << "]}";
  }
  job.initial_state.kind = InitialStateKind::CustomFile;
  job.initial_state.path = "rho.json";
  job.base_directory = dir;
  CHECK(job.initial_density(cfg).matrix().trace().real() == doctest::Approx(1.0));
  job.initial_state.path = "missing.json";
  CHECK_THROWS_AS(job.initial_density(cfg), ConfigError);
  job.initial_state.path = "rho.json";
  CHECK_THROWS_AS(job.initial_density(JobConfig{}.build_model(0.1, 40)), ConfigError);
  std::filesystem::remove_all(dir);
}
