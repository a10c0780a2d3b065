#include "scenario.hpp"

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include <set>

namespace crdiscs::tool {
namespace {

int line_of(const YAML::Node& n) { return n.Mark().line >= 0 ? n.Mark().line + 1 : 0; }

void require_keys(const YAML::Node& map, const std::set<std::string>& allowed, const std::string& where) {
  if (!map.IsMap()) throw ConfigError(where + " must be a mapping", line_of(map));
  for (const auto& kv : map) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where, line_of(kv.first));
  }
}

template <class T>
T scalar(const YAML::Node& n, const std::string& what) {
  if (!n.IsScalar()) throw ConfigError(what + " must be a scalar", line_of(n));
  try {
    return n.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError("cannot parse " + what + " from '" + n.Scalar() + "'", line_of(n));
  }
}

template <class T>
void read(const YAML::Node& map, const char* key, T& out, const std::string& where) {
  if (const auto n = map[key]) out = scalar<T>(n, where + "." + key);
}

void read_polynomial(const YAML::Node& node, ScenarioConfig& cfg) {
  cfg.polynomial_line = line_of(node);
  if (node.IsNull()) return;
  if (!node.IsSequence()) throw ConfigError("polynomial must be a list of [j, k, re, im]", line_of(node));
  for (const auto& rec : node) {
    if (!rec.IsSequence() || (rec.size() != 3 && rec.size() != 4)) {
      throw ConfigError("polynomial record must be [j, k, re] or [j, k, re, im]", line_of(rec));
    }
    hypersurface::CoefficientRecord r;
    r.j = scalar<int>(rec[0], "j");
    r.k = scalar<int>(rec[1], "k");
    r.re = scalar<double>(rec[2], "re");
    r.im = rec.size() == 4 ? scalar<double>(rec[3], "im") : 0.0;
    cfg.polynomial.push_back(r);
  }
}

AttachBlock read_attach(const YAML::Node& node) {
  AttachBlock b;
  if (node.IsNull()) return b;
  require_keys(node, {"generator", "c", "solver", "u_term", "u_coefficient", "include_polynomial", "tol",
                      "max_iter", "damping"},
               "attach");
  if (const auto g = node["generator"]) {
    if (!g.IsSequence()) throw ConfigError("attach.generator must be a list of [k, re, im]", line_of(g));
    for (const auto& t : g) {
      if (!t.IsSequence() || (t.size() != 2 && t.size() != 3)) {
        throw ConfigError("generator term must be [k, re] or [k, re, im]", line_of(t));
      }
      const int k = scalar<int>(t[0], "k");
      const double re = scalar<double>(t[1], "re");
      const double im = t.size() == 3 ? scalar<double>(t[2], "im") : 0.0;
      b.generator.emplace_back(k, std::complex<double>(re, im));
    }
  }
  read(node, "c", b.c, "attach");
  read(node, "solver", b.solver, "attach");
  read(node, "u_term", b.u_term, "attach");
  read(node, "u_coefficient", b.u_coefficient, "attach");
  read(node, "include_polynomial", b.include_polynomial, "attach");
  read(node, "tol", b.tol, "attach");
  read(node, "max_iter", b.max_iter, "attach");
  read(node, "damping", b.damping, "attach");
  if (b.solver != "closed_form" && b.solver != "bishop") {
    throw ConfigError("attach.solver must be closed_form or bishop", line_of(node["solver"]));
  }
  if (b.u_term != "none" && b.u_term != "abs2" && b.u_term != "re_z") {
    throw ConfigError("attach.u_term must be none, abs2 or re_z", line_of(node["u_term"]));
  }
  if (b.solver == "closed_form" && b.u_term != "none") {
    throw ConfigError("closed_form attachment needs a rigid surface (u_term: none)", line_of(node));
  }
  return b;
}

FamilyBlock read_family(const YAML::Node& node) {
  FamilyBlock b;
  if (node.IsNull()) return b;
  require_keys(node, {"sector", "q_modulus", "beta", "n_max", "epsilon", "t1", "t2", "p_radius", "q_radius", "c"},
               "family");
  read(node, "sector", b.sector, "family");
  read(node, "q_modulus", b.q_modulus, "family");
  read(node, "beta", b.beta, "family");
  read(node, "n_max", b.n_max, "family");
  read(node, "epsilon", b.epsilon, "family");
  read(node, "t1", b.t1, "family");
  read(node, "t2", b.t2, "family");
  read(node, "p_radius", b.p_radius, "family");
  read(node, "q_radius", b.q_radius, "family");
  read(node, "c", b.c, "family");
  if (b.sector < 0) throw ConfigError("family.sector must be nonnegative", line_of(node["sector"]));
  if (!(b.q_modulus > 0.0)) throw ConfigError("family.q_modulus must be positive", line_of(node));
  if (!(b.epsilon >= 0.0)) throw ConfigError("family.epsilon must be nonnegative", line_of(node));
  return b;
}

}  // namespace

ScenarioConfig load_config(const std::string& path) {
  YAML::Node root;
  try {
    root = YAML::LoadFile(path);
  } catch (const YAML::BadFile&) {
    throw ConfigError("cannot open config file '" + path + "'", 0);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(e.msg, e.mark.line + 1);
  }
  if (!root.IsMap()) throw ConfigError("config must be a mapping", line_of(root));
  require_keys(root, {"polynomial", "grid", "classify", "attach", "family"}, "config");

  ScenarioConfig cfg;
  const auto poly = root["polynomial"];
  if (!poly) throw ConfigError("missing required key 'polynomial'", 1);
  read_polynomial(poly, cfg);
  if (const auto g = root["grid"]) {
    const int n = scalar<int>(g, "grid");
    if (n < 16 || (n & (n - 1)) != 0) throw ConfigError("grid must be a power of two >= 16", line_of(g));
    cfg.grid = static_cast<std::size_t>(n);
  }
  if (const auto c = root["classify"]) {
    ClassifyBlock b;
    if (!c.IsNull()) {
      require_keys(c, {"tolerance"}, "classify");
      if (const auto t = c["tolerance"]) b.tolerance = scalar<double>(t, "classify.tolerance");
    }
    cfg.classify = b;
  }
  if (const auto a = root["attach"]) cfg.attach = read_attach(a);
  if (const auto f = root["family"]) cfg.family = read_family(f);
  return cfg;
}

std::string echo_config(const ScenarioConfig& cfg) {
  std::string out = "polynomial:\n";
  for (const auto& r : cfg.polynomial) out += fmt::format("  - [{}, {}, {}, {}]\n", r.j, r.k, r.re, r.im);
  out += fmt::format("grid: {}\n", cfg.grid);
  if (cfg.classify) {
    out += "classify:\n";
    if (cfg.classify->tolerance) out += fmt::format("  tolerance: {}\n", *cfg.classify->tolerance);
    else out += "  tolerance: default\n";
  }
  if (cfg.attach) {
    const auto& a = *cfg.attach;
    out += "attach:\n  generator:\n";
    for (const auto& [k, v] : a.generator) out += fmt::format("    - [{}, {}, {}]\n", k, v.real(), v.imag());
    out += fmt::format("  c: {}\n  solver: {}\n  u_term: {}\n  u_coefficient: {}\n  include_polynomial: {}\n",
                       a.c, a.solver, a.u_term, a.u_coefficient, a.include_polynomial);
    out += fmt::format("  tol: {}\n  max_iter: {}\n  damping: {}\n", a.tol, a.max_iter, a.damping);
  }
  if (cfg.family) {
    const auto& f = *cfg.family;
    out += fmt::format("family:\n  sector: {}\n  q_modulus: {}\n  beta: {}\n  n_max: {}\n  epsilon: {}\n", f.sector,
                       f.q_modulus, f.beta, f.n_max, f.epsilon);
    out += fmt::format("  t1: {}\n  t2: {}\n  p_radius: {}\n  q_radius: {}\n  c: {}\n", f.t1, f.t2, f.p_radius,
                       f.q_radius, f.c);
  }
  return out;
}

}  // namespace crdiscs::tool
