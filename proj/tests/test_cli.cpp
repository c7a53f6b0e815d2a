#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "friedrichs/config.hpp"
#include "friedrichs/self_energy.hpp"
#include "runner.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

class Workspace {
public:
  explicit Workspace(const std::string& name) : dir_(fs::temp_directory_path() / ("friedrichs_cli_" + name)) {
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  ~Workspace() { fs::remove_all(dir_); }

  fs::path config(const std::string& json, const std::string& name = "job.json") const {
    std::ofstream(dir_ / name) << json;
    return dir_ / name;
  }

  Result run(std::vector<std::string> args) const {
    std::ostringstream out, err;
    const int code = friedrichs::cli::run(args, out, err);
    return {code, out.str(), err.str()};
  }

  const fs::path& dir() const { return dir_; }

private:
  fs::path dir_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> data_lines(const fs::path& p) {
  std::istringstream in(slurp(p));
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);)
    if (!line.empty() && line[0] != '#') lines.push_back(line);
  return lines;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream s(line);
  for (std::string c; std::getline(s, c, ',');) cells.push_back(c);
  return cells;
}

}  // namespace

TEST_CASE("cli beta") {
  const Workspace ws("beta");
  const auto out = (ws.dir() / "out").string();
  Result r = ws.run({"beta", "--config", ws.config(R"({"model": {"lambda": 1.0, "nodes": 400}})").string(), "--out", out});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("Re=0.000000 Im=-3.141593\n", 0) == 0);
  CHECK(r.out.find("ImCheck=-3.141593") != std::string::npos);

  r = ws.run({"beta", "--config", ws.config(R"({"model": {"lambda": 0.0, "nodes": 400}})").string(), "--out", out});
  CHECK(r.out.rfind("Re=0.000000 Im=0.000000\n", 0) == 0);

  const std::string gaussian =
      R"({"model": {"lambda": 0.1, "nodes": 300, "cutoff": 4.0,
          "form_factor": {"family": "gaussian-bump", "center": 1.2, "width": 0.5}}})";
  r = ws.run({"beta", "--config", ws.config(gaussian).string(), "--out", out});
  REQUIRE(r.code == 0);
  const friedrichs::SelfEnergyBeta b =
      friedrichs::compute_beta(friedrichs::parse_job_config_text(gaussian).build_model());
  char expected[128];
  std::snprintf(expected, sizeof expected, "%.17g,%.17g", b.re_part, b.im_part);
  const std::vector<std::string> lines = data_lines(fs::path(out) / "beta.csv");
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == "Re,Im,ImCheck");
  CHECK(lines[1].rfind(expected, 0) == 0);
  CHECK(slurp(fs::path(out) / "beta.csv").rfind("# {", 0) == 0);
}

TEST_CASE("cli spectrum") {
  const Workspace ws("spectrum");
  const auto out = (ws.dir() / "out").string();
  const Result r = ws.run({"--format", "structured-text", "spectrum", "--config",
                           ws.config(R"({"model": {"lambda": 0.1, "nodes": 600}})").string(), "--out", out});
  REQUIRE(r.code == 0);
  const std::vector<std::string> rows = data_lines(fs::path(out) / "spectrum.txt");
  CHECK(rows.front() == "degree=0 label=1 Re=0 Im=0.062832");
  std::size_t kernel_rows = 0;
  for (const auto& row : rows)
    if (row.rfind("degree=2", 0) == 0) {
      ++kernel_rows;
      CHECK(row.substr(row.size() - 5) == " Im=0");
    }
  // 601 nodes, stride 3
  CHECK(kernel_rows == 201 * 201);
  const std::vector<std::string> summary = data_lines(fs::path(out) / "spectrum_summary.txt");
  REQUIRE(summary.size() == 1);
  const auto pos = summary[0].find("biorthogonality_residual=");
  REQUIRE(pos != std::string::npos);
  CHECK(std::stod(summary[0].substr(pos + 25)) <= 1e-8);
}

TEST_CASE("cli evolve") {
  const Workspace ws("evolve");
  const auto out = (ws.dir() / "out").string();
  const Result r = ws.run({"evolve", "--config",
                           ws.config(R"({"model": {"nodes": 100}, "times": {"stop": 20, "count": 41}})").string(),
                           "--out", out});
  REQUIRE(r.code == 0);
  const std::vector<std::string> rows = data_lines(fs::path(out) / "evolve_survival.csv");
  REQUIRE(rows.size() == 42);
  CHECK(rows[0] == "t,survival");
  CHECK(rows[1] == "0,1");
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::stod(split(rows[i])[0]) == 0.5 * static_cast<double>(i - 1));
  CHECK(std::stod(split(rows[21])[1]) == doctest::Approx(std::exp(-2.0 * std::numbers::pi * 0.01 * 10.0)).epsilon(1e-12));
  CHECK(std::stod(split(rows[21])[1]) == doctest::Approx(0.5335).epsilon(1e-3));
  for (const char* stem : {"evolve_discrete", "evolve_singular", "evolve_one_omega", "evolve_omega_one", "evolve_kernel"})
    CHECK(fs::exists(fs::path(out) / (std::string(stem) + ".csv")));
  CHECK(data_lines(fs::path(out) / "evolve_discrete.csv")[0] == "t,re,im");
}

TEST_CASE("cli validate") {
  const Workspace ws("validate");
  const auto out = (ws.dir() / "out").string();
  Result r = ws.run({"validate", "--config", ws.config(R"({"model": {"lambda": 0.0, "nodes": 100}})").string(), "--out", out});
  CHECK(r.code == 0);
  CHECK(r.err.find("validation failed") == std::string::npos);

  r = ws.run({"validate", "--config", ws.config(R"({"model": {"lambda": 0.8, "nodes": 100}})").string(), "--out", out});
  CHECK(r.code == 1);
  CHECK(r.err.find("validation failed: lambda2t-window") != std::string::npos);
  CHECK(slurp(fs::path(out) / "validate.csv").find("in_window,false") != std::string::npos);
}

TEST_CASE("cli sweep") {
  const Workspace ws("sweep");
  const auto out = (ws.dir() / "out").string();
  const auto cfg = ws.config(R"({"model": {"nodes": 200}, "sweep": {"lambda": [0.2, 0.05, 0.1]}})");
  const Result r = ws.run({"sweep", "--config", cfg.string(), "--out", out, "--workers", "2"});
  REQUIRE(r.code == 0);
  const std::string first = slurp(fs::path(out) / "sweep.csv");
  const std::vector<std::string> rows = data_lines(fs::path(out) / "sweep.csv");
  REQUIRE(rows.size() == 4);
  const double gamma[] = {0.0157, 0.0628, 0.2513};
  double previous = 1.0;
  for (std::size_t i = 0; i < 3; ++i) {
    const std::vector<std::string> c = split(rows[3 - i]);
    CHECK(std::stod(c[3]) == doctest::Approx(gamma[2 - i]).epsilon(1e-3));
    CHECK(std::stod(c[5]) < previous);
    previous = std::stod(c[5]);
  }
  CHECK(ws.run({"sweep", "--config", cfg.string(), "--out", out, "--workers", "1"}).code == 0);
  CHECK(slurp(fs::path(out) / "sweep.csv") == first);

  CHECK(ws.run({"sweep", "--config", ws.config("{}", "empty.json").string(), "--out", out}).code == 2);
}

TEST_CASE("cli exit codes and output directory") {
  const Workspace ws("exit");
  CHECK(ws.run({}).code == 2);
  CHECK(ws.run({"beta"}).code == 2);
  CHECK(ws.run({"frobnicate", "--config", "x"}).code == 2);
  CHECK(ws.run({"beta", "--config", (ws.dir() / "absent.json").string()}).code == 2);
  const Result bad = ws.run({"beta", "--config", ws.config(R"({"model": {"lamda": 0.1}})").string()});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("model.lamda") != std::string::npos);

  const auto cfg = ws.config(R"({"model": {"nodes": 50}})").string();
  ::setenv(friedrichs::cli::out_dir_variable, (ws.dir() / "from_env").c_str(), 1);
  CHECK(ws.run({"beta", "--config", cfg}).code == 0);
  CHECK(fs::exists(ws.dir() / "from_env" / "beta.csv"));
  CHECK(ws.run({"beta", "--config", cfg, "--out", (ws.dir() / "from_flag").string()}).code == 0);
  CHECK(fs::exists(ws.dir() / "from_flag" / "beta.csv"));
  ::unsetenv(friedrichs::cli::out_dir_variable);

  std::ofstream(ws.dir() / "blocker") << "x";
  CHECK(ws.run({"beta", "--config", cfg, "--out", (ws.dir() / "blocker" / "sub").string()}).code == 2);
}

TEST_CASE("cli runs are bit-identical") {
  const Workspace ws("determinism");
  const auto cfg = ws.config(R"({"model": {"nodes": 60}, "initial_state": {"kind": "superposition"},
                                 "times": {"stop": 10, "count": 11}})").string();
  for (const char* cmd : {"evolve", "validate", "spectrum"}) {
    const auto a = (ws.dir() / "a").string(), b = (ws.dir() / "b").string();
    ws.run({cmd, "--config", cfg, "--out", a});
    ws.run({cmd, "--config", cfg, "--out", b});
    for (const auto& entry : fs::directory_iterator(a)) {
      const std::string a_text = slurp(entry.path());
      std::string b_text = slurp(fs::path(b) / entry.path().filename());
      // the resolved output directory is part of the header
      const auto pos = b_text.find("/b\"");
      if (pos != std::string::npos) b_text.replace(pos, 3, "/a\"");
      CHECK(a_text == b_text);
    }
  }
}
