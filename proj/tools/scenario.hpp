#pragma once

// Scenario configuration for the crdiscs tool: a single YAML file with a
// polynomial, a grid size and one block per command. Unknown keys are hard
// errors; every diagnostic carries the line of the offending node.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "crdiscs/hypersurface.hpp"

namespace crdiscs::tool {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

struct ClassifyBlock {
  std::optional<double> tolerance;
};

// rho(z, u) = P(z) + u_coefficient * u * g(z), g = |z|^2 or Re z.
struct AttachBlock {
  std::vector<std::pair<int, std::complex<double>>> generator;  // (k, a_k)
  double c = 0.0;
  std::string solver = "closed_form";  // closed_form | bishop
  std::string u_term = "none";         // none | abs2 | re_z
  double u_coefficient = 0.0;
  bool include_polynomial = true;
  double tol = 1e-12;
  int max_iter = 200;
  double damping = 1.0;
};

struct FamilyBlock {
  int sector = 0;          // index among the pseudoconvex sectors
  double q_modulus = 1.0;
  double beta = 0.4;
  int n_max = 24;
  double epsilon = 0.01;
  double t1 = 0.75 * 3.14159265358979323846;
  double t2 = -0.75 * 3.14159265358979323846;
  double p_radius = 0.1;
  double q_radius = 0.125;
  double c = 0.0;
};

struct ScenarioConfig {
  std::vector<hypersurface::CoefficientRecord> polynomial;
  int polynomial_line = 0;
  std::size_t grid = 4096;
  std::optional<ClassifyBlock> classify;
  std::optional<AttachBlock> attach;
  std::optional<FamilyBlock> family;
};

ScenarioConfig load_config(const std::string& path);

/// Effective configuration with defaults filled in, as YAML text.
std::string echo_config(const ScenarioConfig& cfg);

}  // namespace crdiscs::tool
