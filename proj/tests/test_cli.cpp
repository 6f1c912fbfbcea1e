#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <doctest.h>

#include "cli.hpp"

using namespace monolab;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::initializer_list<std::string> args) {
  std::vector<std::string> storage{"monolab"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : storage) argv.push_back(s.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string config(const char* name) { return std::string(MONOLAB_CONFIG_DIR) + "/" + name; }

class TempFile {
 public:
  explicit TempFile(const std::string& stem, const std::string& content = {})
      : path_(fs::temp_directory_path() / (stem + "_" + std::to_string(::getpid()))) {
    if (!content.empty()) std::ofstream(path_) << content;
  }
  ~TempFile() { fs::remove(path_); }
  std::string path() const { return path_.string(); }
  std::string read() const {
    std::ifstream in(path_, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

 private:
  fs::path path_;
};

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string f; std::getline(in, f, ',');) out.push_back(f);
  return out;
}

const char* kEuclid = R"(
[profile]
builtin = euclidean
n = 3
[params]
k = 3
)";

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("config parsing") {
  const auto cfg = cli::parse_config(kEuclid);
  CHECK(cfg.profile.name() == "euclidean");
  CHECK(cfg.params.k == 3.0);
  CHECK(cfg.params.l == 3.0);
  CHECK(cfg.numeric.grid_size == 256);
  CHECK(cfg.numeric.quad_tol == 1e-10);

  const auto custom = cli::parse_config(R"ini(
; comment
[profile]
n = 4
phi = "r/sqrt(1+r)"
f = "1-1/sqrt(1+r^2)"
r_max = 100
tail_a = 0.5
[params]
k = 5
l = 6
beta = 1.5
N = inf
[numeric]
grid_size = 32
quad_tol = 1e-9
)ini");
  CHECK(custom.profile.dimension() == 4);
  CHECK(custom.profile.tail().phi_growth_exponent == 0.5);
  CHECK(custom.params.l == 6.0);
  CHECK(std::isinf(custom.params.N));
  CHECK(custom.numeric.grid_size == 32);
  CHECK(custom.numeric.quad_tol == 1e-9);

  const auto file = cli::load_config(config("weighted_linear.ini"));
  CHECK(file.profile.name() == "euclidean_weighted_linear");
  CHECK(file.params.N == 1.0);
}

TEST_CASE("config errors") {
  const char* bad[] = {
      "[params]\nk = 3\n",
      "[profile]\nbuiltin = euclidean\nn = 3\n",
      "[profile]\nbuiltin = euclidean\nn = 3\n[params]\nk = 2\n",
      "[profile]\nbuiltin = euclidean\nn = 3\n[params]\nk = three\n",
      "[profile]\nbuiltin = euclidean\nn = 3\n[params]\nk = 3\nq = 1\n",
      "[profile]\nbuiltin = euclidean\nn = 3\n[params]\nk = 3\n[extra]\nx = 1\n",
      "[profile]\nbuiltin = sphere\nn = 3\n[params]\nk = 3\n",
      "[profile]\nbuiltin = euclidean\nn = 2\n[params]\nk = 3\n",
      "[profile]\nn = 3\nphi = \"r^2\"\nr_max = 10\ntail_a = 2\n[params]\nk = 3\n",
      "[profile]\nn = 3\nphi = \"r+\"\nr_max = 10\ntail_a = 1\n[params]\nk = 3\n",
      "[profile]\nn = 3\nphi = \"r\"\nr_max = 10\ntail_a = 0.1\n[params]\nk = 3\n",
      "[profile]\nbuiltin = euclidean\nn = 3\n[params]\nk = 3\n[numeric]\ngrid_size = 1\n",
      "[profile\nbuiltin = euclidean\n",
  };
  for (const char* text : bad) {
    INFO(text);
    CHECK_THROWS_AS(cli::parse_config(text), cli::ConfigError);
  }
  CHECK_THROWS_AS(cli::load_config("/nonexistent/config.ini"), cli::ConfigError);
}

TEST_CASE("profiles command") {
  const auto r = run({"profiles"});
  CHECK(r.code == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 3);
  CHECK(ls[0].rfind("bryant_surrogate", 0) == 0);
  CHECK(ls[1].rfind("euclidean ", 0) == 0);
  CHECK(ls[2].rfind("euclidean_weighted_linear", 0) == 0);
}

TEST_CASE("curves command") {
  TempFile csv("monolab_curves.csv");
  const auto r = run({"curves", "--config", config("euclidean.ini"), "--out", csv.path()});
  REQUIRE(r.code == 0);
  const std::string text = csv.read();
  CHECK(text.rfind("rho,r,A,V,dA,dV,Q,dQ,bulk,residual\n", 0) == 0);
  const auto ls = lines(text);
  REQUIRE(ls.size() == 257);
  double prev = 0.0;
  for (std::size_t i = 1; i < ls.size(); ++i) {
    const auto f = fields(ls[i]);
    REQUIRE(f.size() == 10);
    const double rho = std::stod(f[0]);
    CHECK(rho > prev);
    prev = rho;
    CHECK(std::abs(std::stod(f[7])) <= 1e-9);
    CHECK(std::abs(std::stod(f[2]) - 4 * M_PI) <= 1e-9);
  }
  // 17 significant digits
  const std::string a = fields(ls[1])[2];
  CHECK(std::count_if(a.begin(), a.end(), [](char ch) { return std::isdigit(ch); }) == 17);

  // deterministic and identical on standard output
  const auto again = run({"curves", "--config", config("euclidean.ini")});
  CHECK(again.code == 0);
  CHECK(again.out == text);

  TempFile small("monolab_small.ini",
                 std::string(kEuclid) + "[numeric]\ngrid_size = 17\n");
  const auto s = run({"curves", "--config", small.path()});
  CHECK(lines(s.out).size() == 18);

  // divergent V leaves nan columns
  TempFile div("monolab_div.ini", std::string(kEuclid) + "p = 3\n");
  const auto d = run({"curves", "--config", div.path()});
  CHECK(d.code == 0);
  CHECK(fields(lines(d.out)[1])[3] == "nan");
}

TEST_CASE("check command exit codes") {
  auto r = run({"check", "--config", config("euclidean.ini"), "--theorem", "thm-4.3"});
  CHECK(r.code == 0);
  CHECK(r.out.find("pass") != std::string::npos);

  r = run({"check", "--config", config("weighted_linear.ini"), "--theorem", "thm-1.2"});
  CHECK(r.code == 3);

  r = run({"check", "--config", config("euclidean.ini"), "--theorem", "thm-9.9"});
  CHECK(r.code == 2);
  CHECK(r.err.find("thm-9.9") != std::string::npos);

  r = run({"check", "--config", "/nonexistent.ini", "--theorem", "thm-4.3"});
  CHECK(r.code == 2);

  TempFile bad("monolab_bad.ini", "[profile]\nbuiltin = euclidean\nn = 3\n");
  r = run({"check", "--config", bad.path(), "--theorem", "thm-4.3"});
  CHECK(r.code == 2);
  CHECK_FALSE(r.err.empty());

  // lemma-4.1 on a profile converging only linearly at the pole
  TempFile lin("monolab_lin.ini",
               "[profile]\nbuiltin = bryant_surrogate\nn = 3\n[params]\nk = 3\n");
  r = run({"check", "--config", lin.path(), "--theorem", "lemma-4.1"});
  CHECK(r.code == 1);
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"curves"}).code == 2);
  CHECK(run({"bryant", "--n", "2"}).code == 2);
  CHECK(run({"bryant", "--n", "x"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("limits command") {
  const auto r = run({"limits", "--config", config("euclidean.ini")});
  CHECK(r.code == 0);
  CHECK(r.out.find("A limit = 12.566370614359172") != std::string::npos);
  CHECK(r.out.find("V limit = 4.1887902047863905") != std::string::npos);
}

TEST_CASE("bryant command") {
  TempFile csv("monolab_bryant.csv");
  const auto r = run({"bryant", "--n", "3", "--out", csv.path()});
  CHECK(r.code == 0);
  const auto ls = lines(csv.read());
  REQUIRE(ls.size() == 42);
  CHECK(ls[0] == "r,bracket");
  CHECK(std::stod(fields(ls.back())[1]) == doctest::Approx(1.0).epsilon(0.05));
  CHECK(r.out.find("closed_form_limit=1 ") != std::string::npos);
  CHECK(r.out.find("sign=positive (as expected)") != std::string::npos);

  const auto r4 = run({"bryant", "--n", "4"});
  CHECK(r4.out.find("indeterminate sign") != std::string::npos);
}

}  // TEST_SUITE
