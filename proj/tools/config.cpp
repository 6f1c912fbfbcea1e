#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "cli.hpp"
#include "monolab/expr.hpp"

namespace monolab::cli {

namespace pt = boost::property_tree;

namespace {

std::string unquote(std::string s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
  return s;
}

class Section {
 public:
  Section(const pt::ptree* tree, std::string name) : tree_(tree), name_(std::move(name)) {}

  bool has(const std::string& key) const { return tree_ && tree_->count(key) > 0; }

  std::string text(const std::string& key) const {
    if (!has(key)) throw ConfigError("[" + name_ + "] missing key '" + key + "'");
    return unquote(tree_->get<std::string>(key));
  }

  double number(const std::string& key) const {
    const std::string s = text(key);
    if (s == "inf" || s == "infinity" || s == "+inf") return kInfiniteN;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || s.empty() || !std::isfinite(v))
      throw ConfigError("[" + name_ + "] " + key + " = '" + s + "' is not a number");
    return v;
  }

  double number_or(const std::string& key, double fallback) const {
    return has(key) ? number(key) : fallback;
  }

  int integer(const std::string& key) const {
    const double v = number(key);
    if (v != std::floor(v) || std::abs(v) > 1e9)
      throw ConfigError("[" + name_ + "] " + key + " must be an integer");
    return static_cast<int>(v);
  }

  void only(const std::set<std::string>& allowed) const {
    if (!tree_) return;
    for (const auto& kv : *tree_)
      if (!allowed.count(kv.first))
        throw ConfigError("[" + name_ + "] unknown key '" + kv.first + "'");
  }

 private:
  const pt::ptree* tree_;
  std::string name_;
};

Section section(const pt::ptree& root, const std::string& name, bool required) {
  const auto child = root.get_child_optional(name);
  if (!child && required) throw ConfigError("missing section [" + name + "]");
  return Section(child ? &*child : nullptr, name);
}

Expr parse_expr(const Section& s, const std::string& key) {
  try {
    return Expr::parse(s.text(key));
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError("[profile] " + key + ": " + e.what());
  }
}

Profile read_profile(const Section& s) {
  if (s.has("builtin")) {
    s.only({"builtin", "n", "a", "r_max"});
    try {
      return builtin_profile(s.text("builtin"), s.integer("n"), s.number_or("a", 1.0),
                             s.number_or("r_max", 0.0));
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError(std::string("[profile] ") + e.what());
    }
  }
  s.only({"n", "phi", "f", "r_max", "tail_a", "tail_s", "name"});
  const int n = s.integer("n");
  if (n < 3) throw ConfigError("[profile] n must be at least 3");
  TailModel tail{s.number("tail_a"), s.number_or("tail_s", 0.0)};
  try {
    Profile p(n, parse_expr(s, "phi"), s.has("f") ? parse_expr(s, "f") : Expr::parse("0"),
              s.number("r_max"), tail, s.has("name") ? s.text("name") : "custom");
    const auto problems = validate_profile(p);
    if (!problems.empty()) throw ConfigError("[profile] " + problems.front());
    return p;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("[profile] ") + e.what());
  }
}

Params read_params(const Section& s) {
  s.only({"k", "l", "beta", "p", "N", "alpha", "c", "d"});
  Params p;
  p.k = s.number("k");
  p.l = s.number_or("l", p.k);
  p.beta = s.number_or("beta", p.beta);
  p.p = s.number_or("p", p.p);
  p.N = s.number_or("N", p.N);
  p.alpha = s.number_or("alpha", p.alpha);
  p.c = s.number_or("c", p.c);
  p.d = s.number_or("d", p.d);
  if (!(p.k > 2.0)) throw ConfigError("[params] k must exceed 2");
  if (!(p.N >= 0.0)) throw ConfigError("[params] N must be >= 0");
  return p;
}

NumericConfig read_numeric(const Section& s) {
  s.only({"quad_tol", "grid_size", "identity_tol", "inequality_tol"});
  NumericConfig c;
  c.quad_tol = s.number_or("quad_tol", c.quad_tol);
  if (s.has("grid_size")) {
    const int g = s.integer("grid_size");
    if (g < 2) throw ConfigError("[numeric] grid_size must be at least 2");
    c.grid_size = static_cast<std::size_t>(g);
  }
  c.identity_tol = s.number_or("identity_tol", c.identity_tol);
  c.inequality_tol = s.number_or("inequality_tol", c.inequality_tol);
  if (!(c.quad_tol > 0.0 && c.identity_tol > 0.0 && c.inequality_tol >= 0.0))
    throw ConfigError("[numeric] tolerances must be positive");
  return c;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  pt::ptree root;
  std::istringstream in(text);
  try {
    pt::read_ini(in, root);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.message() + " (line " +
                      std::to_string(e.line()) + ")");
  }
  for (const auto& kv : root)
    if (kv.first != "profile" && kv.first != "params" && kv.first != "numeric")
      throw ConfigError("unknown section [" + kv.first + "]");
  return RunConfig{read_profile(section(root, "profile", true)),
                   read_params(section(root, "params", true)),
                   read_numeric(section(root, "numeric", false))};
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace monolab::cli
