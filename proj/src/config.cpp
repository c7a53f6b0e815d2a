#include "friedrichs/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <set>
#include <sstream>

#include "friedrichs/error.hpp"

namespace friedrichs {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

// Object reader that records consumed keys and rejects the rest.
class Section {
public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_, "expected an object");
  }

  std::string at(const std::string& key) const { return path_ + "." + key; }

  const json* get(const std::string& key) {
    seen_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  void number(const std::string& key, double& out) {
    if (const json* v = get(key)) {
      if (!v->is_number()) fail(at(key), "expected a number");
      out = v->get<double>();
      if (!std::isfinite(out)) fail(at(key), "must be finite");
    }
  }

  void count(const std::string& key, std::size_t& out) {
    if (const json* v = get(key)) out = as_count(*v, at(key));
  }

  void text(const std::string& key, std::string& out) {
    if (const json* v = get(key)) {
      if (!v->is_string()) fail(at(key), "expected a string");
      out = v->get<std::string>();
    }
  }

  void flag(const std::string& key, bool& out) {
    if (const json* v = get(key)) {
      if (!v->is_boolean()) fail(at(key), "expected true or false");
      out = v->get<bool>();
    }
  }

  template <class Parse>
  void choice(const std::string& key, Parse parse) {
    if (const json* v = get(key)) {
      if (!v->is_string()) fail(at(key), "expected a string");
      try {
        parse(v->get<std::string>());
      } catch (const std::invalid_argument& e) {
        fail(at(key), e.what());
      }
    }
  }

  void finish() const {
    for (const auto& [key, value] : j_.items())
      if (!seen_.contains(key)) fail(at(key), "unknown key");
  }

  static std::size_t as_count(const json& v, const std::string& path) {
    if (!v.is_number_integer() || v.get<long long>() < 0) fail(path, "expected a non-negative integer");
    return v.get<std::size_t>();
  }

private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void read_form_factor(const json& j, const std::string& path, FormFactor& f) {
  Section s(j, path);
  s.choice("family", [&](const std::string& name) { f.family = parse_form_factor_family(name); });
  s.number("amplitude", f.amplitude);
  s.number("center", f.center);
  s.number("width", f.width);
  s.number("exponent", f.exponent);
  s.finish();
}

void read_model(const json& j, ModelSection& m) {
  Section s(j, "model");
  s.number("m", m.m);
  s.number("lambda", m.lambda);
  if (const json* ff = s.get("form_factor")) read_form_factor(*ff, s.at("form_factor"), m.form_factor);
  s.count("nodes", m.nodes);
  s.number("cutoff", m.cutoff);
  s.choice("quadrature", [&](const std::string& name) { m.quadrature = parse_quadrature_rule(name); });
  s.finish();
  if (m.nodes < 16) fail("model.nodes", "must be at least 16");
  if (!(m.cutoff > 0.0)) fail("model.cutoff", "must be positive");
  if (!(m.m > 0.0 && m.m < m.cutoff)) fail("model.m", "must lie in (0, cutoff)");
  if (m.lambda < 0.0) fail("model.lambda", "must be non-negative");
  try {
    m.form_factor.validate(m.cutoff);
  } catch (const DomainError& e) {
    fail("model.form_factor", e.what());
  }
}

void read_initial_state(const json& j, InitialStateSection& st) {
  Section s(j, "initial_state");
  s.choice("kind", [&](const std::string& name) {
    if (name == "pure-discrete") st.kind = InitialStateKind::PureDiscrete;
    else if (name == "superposition") st.kind = InitialStateKind::Superposition;
    else if (name == "custom-file") st.kind = InitialStateKind::CustomFile;
    else throw std::invalid_argument("unknown initial state '" + name + "'");
  });
  double partner = std::numeric_limits<double>::quiet_NaN();
  s.number("partner_energy", partner);
  if (!std::isnan(partner)) st.partner_energy = partner;
  s.text("path", st.path);
  s.finish();
  if (st.kind == InitialStateKind::CustomFile && st.path.empty())
    fail("initial_state.path", "required for custom-file");
}

void read_times(const json& j, TimeSection& t) {
  Section s(j, "times");
  s.number("start", t.start);
  s.number("stop", t.stop);
  s.count("count", t.count);
  s.choice("spacing", [&](const std::string& name) {
    if (name == "linear") t.spacing = TimeSpacing::Linear;
    else if (name == "log") t.spacing = TimeSpacing::Log;
    else throw std::invalid_argument("unknown spacing '" + name + "'");
  });
  s.finish();
  if (t.count < 2) fail("times.count", "must be at least 2");
  if (t.start < 0.0) fail("times.start", "must be non-negative");
  if (!(t.stop > t.start)) fail("times.stop", "must exceed start");
  if (t.spacing == TimeSpacing::Log && !(t.start > 0.0)) fail("times.start", "log spacing needs start > 0");
}

void read_outputs(const json& j, OutputSection& o) {
  Section s(j, "outputs");
  s.text("directory", o.directory);
  s.choice("format", [&](const std::string& name) { o.format = parse_output_format(name); });
  s.finish();
}

void read_thresholds(const json& j, Thresholds& t) {
  Section s(j, "thresholds");
  s.number("sup_deviation", t.sup_deviation);
  s.number("rate_error", t.rate_error);
  s.number("offdiag_error", t.offdiag_error);
  s.number("engine_trace_drift", t.engine_trace_drift);
  s.number("oracle_trace_drift", t.oracle_trace_drift);
  s.flag("require_window", t.require_window);
  s.finish();
}

void read_sweep(const json& j, SweepSection& sw) {
  Section s(j, "sweep");
  if (const json* v = s.get("lambda")) {
    if (!v->is_array()) fail(s.at("lambda"), "expected an array");
    for (std::size_t i = 0; i < v->size(); ++i) {
      const std::string path = s.at("lambda") + "[" + std::to_string(i) + "]";
      if (!(*v)[i].is_number() || !((*v)[i].get<double>() >= 0.0)) fail(path, "expected a non-negative number");
      sw.lambda.push_back((*v)[i].get<double>());
    }
  }
  if (const json* v = s.get("nodes")) {
    if (!v->is_array()) fail(s.at("nodes"), "expected an array");
    for (std::size_t i = 0; i < v->size(); ++i) {
      const std::string path = s.at("nodes") + "[" + std::to_string(i) + "]";
      const std::size_t n = Section::as_count((*v)[i], path);
      if (n < 16) fail(path, "must be at least 16");
      sw.nodes.push_back(n);
    }
  }
  s.finish();
}

Eigen::MatrixXd read_matrix(const json& j, const std::string& path, Eigen::Index dim) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != dim)
    fail(path, "expected " + std::to_string(dim) + " rows");
  Eigen::MatrixXd m(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    const std::string rp = path + "[" + std::to_string(r) + "]";
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != dim)
      fail(rp, "expected " + std::to_string(dim) + " columns");
    for (Eigen::Index c = 0; c < dim; ++c) {
      const json& x = row[static_cast<std::size_t>(c)];
      if (!x.is_number()) fail(rp + "[" + std::to_string(c) + "]", "expected a number");
      m(r, c) = x.get<double>();
    }
  }
  return m;
}

}  // namespace

std::string_view to_string(InitialStateKind kind) {
  switch (kind) {
    case InitialStateKind::PureDiscrete: return "pure-discrete";
    case InitialStateKind::Superposition: return "superposition";
    case InitialStateKind::CustomFile: return "custom-file";
  }
  return "unknown";
}

std::string_view to_string(TimeSpacing spacing) { return spacing == TimeSpacing::Linear ? "linear" : "log"; }

std::string_view to_string(OutputFormat format) {
  return format == OutputFormat::Csv ? "csv" : "structured-text";
}

OutputFormat parse_output_format(std::string_view name) {
  if (name == "csv") return OutputFormat::Csv;
  if (name == "structured-text") return OutputFormat::StructuredText;
  throw std::invalid_argument("unknown output format '" + std::string(name) + "'");
}

std::vector<double> TimeSection::samples() const {
  std::vector<double> t(count);
  const double last = static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) {
    const double f = static_cast<double>(i) / last;
    t[i] = spacing == TimeSpacing::Linear ? start + (stop - start) * f : start * std::pow(stop / start, f);
  }
  t.back() = stop;
  return t;
}

ModelConfig JobConfig::build_model() const { return build_model(model.lambda, model.nodes); }

ModelConfig JobConfig::build_model(double lambda, std::size_t nodes) const {
  auto grid = std::make_shared<const FrequencyGrid>(
      FrequencyGrid::for_resonance(model.quadrature, model.cutoff, nodes, model.m));
  return ModelConfig(model.m, lambda, model.form_factor, std::move(grid));
}

DensityMatrix JobConfig::initial_density(const ModelConfig& cfg) const {
  const Eigen::Index dim = cfg.grid().ssize() + 1;
  switch (initial_state.kind) {
    case InitialStateKind::PureDiscrete:
      return DensityMatrix::pure(Eigen::VectorXcd::Unit(dim, 0));
    case InitialStateKind::Superposition: {
      const Eigen::Index k = cfg.grid().nearest_node(initial_state.partner_energy.value_or(cfg.m()));
      Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim);
      psi[0] = psi[k + 1] = 1.0 / std::sqrt(2.0);
      return DensityMatrix::pure(psi);
    }
    case InitialStateKind::CustomFile: break;
  }
  const std::filesystem::path file = base_directory / initial_state.path;
  std::ifstream in(file);
  if (!in) throw ConfigError("initial_state.path: cannot read '" + file.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(file.string() + ": " + e.what());
  }
  Section s(doc, file.string());
  const json* re = s.get("real");
  const json* im = s.get("imag");
  s.finish();
  if (!re) fail(file.string() + ".real", "missing");
  Eigen::MatrixXcd rho = read_matrix(*re, file.string() + ".real", dim).cast<Complex>();
  if (im) rho += Complex(0.0, 1.0) * read_matrix(*im, file.string() + ".imag", dim).cast<Complex>();
  try {
    return DensityMatrix(rho);
  } catch (const DomainError& e) {
    throw ConfigError(file.string() + ": " + e.what());
  }
}

JobConfig parse_job_config(const json& doc) {
  JobConfig job;
  Section s(doc, "$");
  if (const json* v = s.get("model")) read_model(*v, job.model);
  if (const json* v = s.get("initial_state")) read_initial_state(*v, job.initial_state);
  if (const json* v = s.get("times")) read_times(*v, job.times);
  if (const json* v = s.get("outputs")) read_outputs(*v, job.outputs);
  if (const json* v = s.get("thresholds")) read_thresholds(*v, job.thresholds);
  if (const json* v = s.get("sweep")) read_sweep(*v, job.sweep);
  s.finish();
  return job;
}

JobConfig parse_job_config_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(e.what());
  }
  return parse_job_config(doc);
}

JobConfig load_job_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  JobConfig job;
  try {
    job = parse_job_config_text(buffer.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  job.base_directory = path.parent_path();
  return job;
}

json to_json(const JobConfig& job) {
  const FormFactor& f = job.model.form_factor;
  json j;
  j["model"] = {{"m", job.model.m},
                {"lambda", job.model.lambda},
                {"form_factor",
                 {{"family", std::string(to_string(f.family))},
                  {"amplitude", f.amplitude},
                  {"center", f.center},
                  {"width", f.width},
                  {"exponent", f.exponent}}},
                {"nodes", job.model.nodes},
                {"cutoff", job.model.cutoff},
                {"quadrature", std::string(to_string(job.model.quadrature))}};
  j["initial_state"] = {{"kind", std::string(to_string(job.initial_state.kind))}};
  if (job.initial_state.partner_energy) j["initial_state"]["partner_energy"] = *job.initial_state.partner_energy;
  if (!job.initial_state.path.empty()) j["initial_state"]["path"] = job.initial_state.path;
  j["times"] = {{"start", job.times.start},
                {"stop", job.times.stop},
                {"count", job.times.count},
                {"spacing", std::string(to_string(job.times.spacing))}};
  j["outputs"] = {{"directory", job.outputs.directory}, {"format", std::string(to_string(job.outputs.format))}};
  j["thresholds"] = {{"sup_deviation", job.thresholds.sup_deviation},
                     {"rate_error", job.thresholds.rate_error},
                     {"offdiag_error", job.thresholds.offdiag_error},
                     {"engine_trace_drift", job.thresholds.engine_trace_drift},
                     {"oracle_trace_drift", job.thresholds.oracle_trace_drift},
                     {"require_window", job.thresholds.require_window}};
  j["sweep"] = {{"lambda", job.sweep.lambda}, {"nodes", job.sweep.nodes}};
  return j;
}

std::string config_header(const JobConfig& job) {
  std::istringstream lines(to_json(job).dump(2));
  std::string out, line;
  while (std::getline(lines, line)) out += "# " + line + "\n";
  return out;
}

}  // namespace friedrichs
