#include "runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <memory>
#include <numbers>
#include <optional>
#include <ostream>
#include <set>
#include <thread>

#include "CLI11.hpp"

#include "friedrichs/comparison.hpp"
#include "friedrichs/config.hpp"
#include "friedrichs/error.hpp"
#include "friedrichs/evolution.hpp"
#include "friedrichs/oracle.hpp"
#include "friedrichs/self_energy.hpp"
#include "friedrichs/spectral.hpp"

namespace friedrichs::cli {

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string config;
  std::optional<std::string> out;
  std::optional<std::string> format;
  unsigned workers = 0;
};

std::string exact(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Six decimals, trailing zeros and a negative zero dropped.
std::string display(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  std::string s = buf;
  s.erase(s.find_last_not_of('0') + 1);
  if (s.back() == '.') s.pop_back();
  if (s == "-0") s = "0";
  return s;
}

std::string fixed6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  std::string s = buf;
  if (s == "-0.000000") s = "0.000000";
  return s;
}

// Numbers are written with 17 significant digits; `rounded` cells use six
// decimals in structured text.
struct Cell {
  std::string text;
  std::optional<double> number;
  bool rounded = false;
};

Cell cell(double x) { return {"", x}; }
Cell rounded(double x) { return {"", x, true}; }
Cell cell(std::string s) { return {std::move(s), std::nullopt}; }
Cell cell(long long i) { return {std::to_string(i), std::nullopt}; }

class Table {
public:
  explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  void add(std::vector<Cell> row) {
    if (row.size() != columns_.size()) throw std::logic_error("table row width mismatch");
    rows_.push_back(std::move(row));
  }

  std::size_t size() const { return rows_.size(); }

  void write(const fs::path& path, const JobConfig& job, OutputFormat format) const {
    std::ofstream out(path);
    if (!out) throw std::ios_base::failure("cannot write '" + path.string() + "'");
    out << config_header(job);
    if (format == OutputFormat::Csv) {
      for (std::size_t c = 0; c < columns_.size(); ++c) out << (c ? "," : "") << columns_[c];
      out << '\n';
      for (const auto& row : rows_) {
        for (std::size_t c = 0; c < row.size(); ++c)
          out << (c ? "," : "") << (row[c].number ? exact(*row[c].number) : row[c].text);
        out << '\n';
      }
    } else {
      for (const auto& row : rows_) {
        for (std::size_t c = 0; c < row.size(); ++c)
          out << (c ? " " : "") << columns_[c] << '=' << render(row[c]);
        out << '\n';
      }
    }
    if (!out) throw std::ios_base::failure("write failed for '" + path.string() + "'");
  }

private:
  static std::string render(const Cell& c) {
    if (!c.number) return c.text;
    return c.rounded ? display(*c.number) : exact(*c.number);
  }

  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

struct Job {
  JobConfig config;
  fs::path out_dir;
  OutputFormat format;

  fs::path file(const std::string& stem) const {
    return out_dir / (stem + (format == OutputFormat::Csv ? ".csv" : ".txt"));
  }
};

Job resolve(const Options& opt) {
  Job job{load_job_config(opt.config), {}, OutputFormat::Csv};
  job.format = job.config.outputs.format;
  if (opt.format) job.format = parse_output_format(*opt.format);
  job.config.outputs.format = job.format;
  if (opt.out) {
    job.out_dir = *opt.out;
  } else if (const char* env = std::getenv(out_dir_variable); env && *env) {
    job.out_dir = env;
  } else {
    job.out_dir = job.config.outputs.directory;
  }
  job.config.outputs.directory = job.out_dir.string();
  std::error_code ec;
  fs::create_directories(job.out_dir, ec);
  if (ec || !fs::is_directory(job.out_dir))
    throw std::ios_base::failure("cannot create output directory '" + job.out_dir.string() + "'");
  return job;
}

// Every stride-th node plus the resonance node and any extra nodes.
std::vector<Eigen::Index> sampled_nodes(Eigen::Index n, Eigen::Index stride, const std::set<Eigen::Index>& extra) {
  std::set<Eigen::Index> nodes(extra.begin(), extra.end());
  for (Eigen::Index k = 0; k < n; k += stride) nodes.insert(k);
  return {nodes.begin(), nodes.end()};
}

Eigen::Index kernel_stride(Eigen::Index n) { return (n + 255) / 256; }

int cmd_beta(const Options& opt, std::ostream& out) {
  const Job job = resolve(opt);
  const ModelConfig cfg = job.config.build_model();
  const SelfEnergyBeta b = compute_beta(cfg);
  const double vm = cfg.coupling_at_resonance();
  const double im_check = -std::numbers::pi * vm * vm;
  out << "Re=" << fixed6(b.re_part) << " Im=" << fixed6(b.im_part) << '\n';
  out << "ImCheck=" << fixed6(im_check) << '\n';
  Table t({"Re", "Im", "ImCheck"});
  t.add({cell(b.re_part), cell(b.im_part), cell(im_check)});
  t.write(job.file("beta"), job.config, job.format);
  return exit_success;
}

int cmd_spectrum(const Options& opt, std::ostream& out) {
  const Job job = resolve(opt);
  const ModelConfig cfg = job.config.build_model();
  const SpectralDecomposition s(cfg);
  const Eigen::Index n = cfg.grid().ssize();
  const Eigen::Index stride = kernel_stride(n);
  Table t({"degree", "label", "Re", "Im"});
  const auto add = [&](std::size_t i) {
    const SpectralMode m = s.mode(i);
    t.add({cell(static_cast<long long>(m.degree)), cell(m.label()), rounded(m.z.real()), rounded(m.z.imag())});
  };
  const auto first_kernel = static_cast<std::size_t>(component_offset(Component::Kernel, n));
  for (std::size_t i = 0; i < first_kernel; ++i) add(i);
  for (Eigen::Index k = 0; k < n; k += stride)
    for (Eigen::Index l = 0; l < n; l += stride) add(first_kernel + static_cast<std::size_t>(k * n + l));

  const double bio = s.biorthogonality_residual();
  const double completeness = s.completeness_residual(2, 20240611);
  Table summary({"modes", "rows", "kernel_stride", "biorthogonality_residual", "completeness_residual"});
  summary.add({cell(static_cast<long long>(s.size())), cell(static_cast<long long>(t.size())),
               cell(static_cast<long long>(stride)), cell(bio), cell(completeness)});
  t.write(job.file("spectrum"), job.config, job.format);
  summary.write(job.file("spectrum_summary"), job.config, job.format);
  out << "modes=" << s.size() << " rows=" << t.size() << " kernel_stride=" << stride << '\n';
  out << "biorthogonality_residual=" << exact(bio) << " completeness_residual=" << exact(completeness) << '\n';
  return exit_success;
}

int cmd_evolve(const Options& opt, std::ostream& out, std::ostream& err) {
  const Job job = resolve(opt);
  const ModelConfig cfg = job.config.build_model();
  const GridPtr& grid = cfg.grid_ptr();
  const Eigen::Index n = grid->ssize();
  const StateFunctional rho0 = matrix_to_functional(job.config.initial_density(cfg), grid);
  const SpectralDecomposition spectrum(cfg);
  const std::vector<double> times = job.config.times.samples();

  std::set<Eigen::Index> support{cfg.resonance_index()};
  for (Eigen::Index k = 0; k < n; ++k)
    if (rho0.singular[k] != 0.0 || rho0.one_omega[k] != 0.0 || rho0.omega_one[k] != 0.0) support.insert(k);
  const std::vector<Eigen::Index> nodes = sampled_nodes(n, kernel_stride(n), support);
  std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
  for (Eigen::Index k : nodes)
    for (Eigen::Index l : nodes)
      if (rho0.kernel(k, l) != 0.0) pairs.emplace_back(k, l);

  Table discrete({"t", "re", "im"}), survival({"t", "survival"});
  Table singular({"t", "k", "omega", "re", "im"}), one_omega({"t", "k", "omega", "re", "im"}),
      omega_one({"t", "k", "omega", "re", "im"}), kernel({"t", "k", "l", "re", "im"});
  std::vector<std::string> warnings;
  for (const double t : times) {
    const StateFunctional r = evolve_lambda2t(spectrum, rho0, t, &warnings);
    discrete.add({cell(t), cell(r.discrete.real()), cell(r.discrete.imag())});
    survival.add({cell(t), cell(r.discrete.real())});
    for (Eigen::Index k : nodes) {
      const double w = grid->node(k);
      const auto kk = static_cast<long long>(k);
      singular.add({cell(t), cell(kk), cell(w), cell(r.singular[k].real()), cell(r.singular[k].imag())});
      one_omega.add({cell(t), cell(kk), cell(w), cell(r.one_omega[k].real()), cell(r.one_omega[k].imag())});
      omega_one.add({cell(t), cell(kk), cell(w), cell(r.omega_one[k].real()), cell(r.omega_one[k].imag())});
    }
    for (const auto& [k, l] : pairs)
      kernel.add({cell(t), cell(static_cast<long long>(k)), cell(static_cast<long long>(l)),
                  cell(r.kernel(k, l).real()), cell(r.kernel(k, l).imag())});
  }
  const std::pair<const char*, const Table*> files[] = {
      {"evolve_discrete", &discrete},   {"evolve_singular", &singular}, {"evolve_one_omega", &one_omega},
      {"evolve_omega_one", &omega_one}, {"evolve_kernel", &kernel},     {"evolve_survival", &survival}};
  for (const auto& [stem, table] : files) {
    table->write(job.file(stem), job.config, job.format);
    out << job.file(stem).string() << '\n';
  }
  std::set<std::string> seen;
  for (const auto& w : warnings)
    if (seen.insert(w).second) err << "warning: " << w << '\n';
  return exit_success;
}

struct Verdict {
  std::string name;
  bool pass;
  double value;
  double threshold;
};

std::vector<Verdict> judge(const ComparisonReport& r, const Thresholds& th) {
  std::vector<Verdict> v;
  v.push_back({"curve-agreement", r.sup_deviation.discrete <= th.sup_deviation, r.sup_deviation.discrete,
               th.sup_deviation});
  if (r.gamma_fit_available) v.push_back({"decay-rate", r.rate_error <= th.rate_error, r.rate_error, th.rate_error});
  else v.push_back({"decay-rate", false, std::nan(""), th.rate_error});
  if (r.offdiag_available)
    v.push_back({"offdiag-half-rate", r.offdiag_error <= th.offdiag_error, r.offdiag_error, th.offdiag_error});
  v.push_back({"engine-trace", r.engine_trace_drift <= th.engine_trace_drift, r.engine_trace_drift,
               th.engine_trace_drift});
  v.push_back({"oracle-trace", r.oracle_trace_drift <= th.oracle_trace_drift, r.oracle_trace_drift,
               th.oracle_trace_drift});
  if (th.require_window) v.push_back({"lambda2t-window", r.in_window, r.in_window ? 1.0 : 0.0, 1.0});
  return v;
}

int cmd_validate(const Options& opt, std::ostream& out, std::ostream& err) {
  const Job job = resolve(opt);
  const ModelConfig cfg = job.config.build_model();
  const ComparisonReport r = compare_evolutions(cfg, job.config.initial_density(cfg), job.config.times.samples());
  const std::vector<Verdict> verdicts = judge(r, job.config.thresholds);

  Table report({"key", "value"});
  const auto row = [&](const std::string& k, Cell c) { report.add({cell(k), std::move(c)}); };
  row("grid_nodes", cell(static_cast<long long>(r.grid_nodes)));
  row("time_samples", cell(static_cast<long long>(r.time_samples)));
  row("t_min", cell(r.t_min));
  row("t_max", cell(r.t_max));
  row("sup_deviation_discrete", cell(r.sup_deviation.discrete));
  row("sup_deviation_singular", cell(r.sup_deviation.singular));
  row("sup_deviation_one_omega", cell(r.sup_deviation.one_omega));
  row("sup_deviation_omega_one", cell(r.sup_deviation.omega_one));
  row("sup_deviation_kernel", cell(r.sup_deviation.kernel));
  row("gamma_theory", cell(r.gamma_theory));
  row("gamma_fit", r.gamma_fit_available ? cell(r.gamma_fit) : cell(std::string("unavailable")));
  row("rate_error", r.gamma_fit_available ? cell(r.rate_error) : cell(std::string("unavailable")));
  row("offdiag_node", cell(static_cast<long long>(r.offdiag_node)));
  row("offdiag_error", r.offdiag_available ? cell(r.offdiag_error) : cell(std::string("unavailable")));
  row("engine_trace_drift", cell(r.engine_trace_drift));
  row("oracle_trace_drift", cell(r.oracle_trace_drift));
  row("in_window", cell(std::string(r.in_window ? "true" : "false")));
  for (const auto& w : r.warnings) row("warning", cell("\"" + w + "\""));
  for (const auto& v : verdicts) row("criterion_" + v.name, cell(std::string(v.pass ? "pass" : "fail")));
  report.write(job.file("validate"), job.config, job.format);

  bool ok = true;
  for (const auto& v : verdicts) {
    out << (v.pass ? "PASS " : "FAIL ") << v.name << " value=" << exact(v.value) << " threshold=" << exact(v.threshold)
        << '\n';
    if (!v.pass) {
      err << "validation failed: " << v.name << '\n';
      ok = false;
    }
  }
  for (const auto& w : r.warnings) err << "warning: " << w << '\n';
  return ok ? exit_success : exit_validation_failure;
}

int cmd_sweep(const Options& opt, std::ostream& out) {
  const Job job = resolve(opt);
  const SweepSection& sw = job.config.sweep;
  if (sw.lambda.empty() && sw.nodes.empty()) throw ConfigError("sweep: empty range (set sweep.lambda and/or sweep.nodes)");
  std::vector<double> lambdas = sw.lambda.empty() ? std::vector<double>{job.config.model.lambda} : sw.lambda;
  std::vector<std::size_t> sizes = sw.nodes.empty() ? std::vector<std::size_t>{job.config.model.nodes} : sw.nodes;
  std::sort(lambdas.begin(), lambdas.end());
  std::sort(sizes.begin(), sizes.end());
  lambdas.erase(std::unique(lambdas.begin(), lambdas.end()), lambdas.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());

  std::vector<std::pair<double, std::size_t>> points;
  for (double l : lambdas)
    for (std::size_t n : sizes) points.emplace_back(l, n);

  const std::vector<double> times = job.config.times.samples();
  std::vector<std::optional<ComparisonReport>> reports(points.size());
  std::vector<std::exception_ptr> errors(points.size());
  std::atomic<std::size_t> next{0};
  const auto work = [&] {
    for (std::size_t i; (i = next++) < points.size();) {
      try {
        const ModelConfig cfg = job.config.build_model(points[i].first, points[i].second);
        reports[i] = compare_evolutions(cfg, job.config.initial_density(cfg), times);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  unsigned workers = opt.workers ? opt.workers : std::max(1u, std::min(4u, std::thread::hardware_concurrency()));
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, points.size()));
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  Table t({"lambda", "nodes", "grid_nodes", "gamma_theory", "gamma_fit", "rate_error", "sup_deviation", "in_window"});
  for (std::size_t i = 0; i < points.size(); ++i) {
    const ComparisonReport& r = *reports[i];
    t.add({cell(points[i].first), cell(static_cast<long long>(points[i].second)),
           cell(static_cast<long long>(r.grid_nodes)), cell(r.gamma_theory),
           r.gamma_fit_available ? cell(r.gamma_fit) : cell(std::string("nan")),
           r.gamma_fit_available ? cell(r.rate_error) : cell(std::string("nan")), cell(r.sup_deviation.discrete),
           cell(std::string(r.in_window ? "true" : "false"))});
  }
  t.write(job.file("sweep"), job.config, job.format);
  out << job.file("sweep").string() << '\n';
  return exit_success;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Friedrichs model subdynamics in the functional approach"};
  app.require_subcommand(1);
  app.fallthrough();
  Options opt;
  app.add_option("--out", opt.out, "output directory (overrides " + std::string(out_dir_variable) + ")");
  app.add_option("--format", opt.format, "csv or structured-text")->check(CLI::IsMember({"csv", "structured-text"}));
  app.add_option("--workers", opt.workers, "sweep worker threads")->check(CLI::Range(1u, 256u));

  const std::pair<const char*, const char*> commands[] = {
      {"beta", "self-energy beta"},
      {"spectrum", "eigenvalue table of the second-order generator"},
      {"evolve", "lambda^2 t evolution time series"},
      {"validate", "engine against the exact oracle"},
      {"sweep", "parameter sweep of the decay rate"},
  };
  for (const auto& [name, help] : commands)
    app.add_subcommand(name, help)->add_option("--config", opt.config, "job configuration (JSON)")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_success;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n' << app.help();
    return exit_config_error;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  const auto start = std::chrono::steady_clock::now();
  int code = exit_success;
  try {
    if (command == "beta") code = cmd_beta(opt, out);
    else if (command == "spectrum") code = cmd_spectrum(opt, out);
    else if (command == "evolve") code = cmd_evolve(opt, out, err);
    else if (command == "validate") code = cmd_validate(opt, out, err);
    else code = cmd_sweep(opt, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return exit_config_error;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return exit_config_error;
  } catch (const std::ios_base::failure& e) {
    err << "output error: " << e.what() << '\n';
    return exit_config_error;
  } catch (const std::exception& e) {
    err << "numeric error: " << e.what() << '\n';
    return exit_numeric_error;
  }
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  err << command << ": " << elapsed.count() << " s\n";
  return code;
}

}  // namespace friedrichs::cli
