#pragma once

// Analytic discs A = (Z, W) attached to graph hypersurfaces v = rho(z, zbar, u).
//
// Rigid surfaces are handled in closed form: V = P(Z, Zbar) on the grid and
// W is the analytic completion of V. General graphs go through the
// fixed-point form of the Bishop equation U = -T_1(rho(Z, Zbar, U)) + c.

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "crdiscs/circle.hpp"
#include "crdiscs/error.hpp"
#include "crdiscs/hypersurface.hpp"

namespace crdiscs::discs {

using circle::BoundaryFunction;
using Complex = std::complex<double>;

inline constexpr double kGeneratorAnalyticityTol = 1e-9;
inline constexpr double kDiscAnalyticityTol = 1e-8;

/// Boundary values of the z-component of a disc.
class DiscGenerator {
 public:
  /// Validates that the negative-frequency energy is at most 1e-9 of the
  /// total (DomainError otherwise).
  explicit DiscGenerator(BoundaryFunction z);

  /// Samples an explicit map that is holomorphic in the open disc. The
  /// measured negative-frequency energy is recorded but not enforced: maps
  /// with boundary corners alias into negative bins on any finite grid.
  static DiscGenerator from_map(std::size_t n, const std::function<Complex(Complex)>& map);

  /// Wraps samples without enforcing the energy bound; the measured value
  /// is still recorded.
  static DiscGenerator unchecked(BoundaryFunction z);

  /// Z(zeta) = sum_k a_k zeta^k from a list of (k, a_k) with k >= 0.
  static DiscGenerator from_power_series(std::size_t n, const std::vector<std::pair<int, Complex>>& terms);

  const BoundaryFunction& samples() const noexcept { return z_; }
  std::size_t size() const noexcept { return z_.size(); }
  double negative_energy() const noexcept { return negative_energy_; }

  Complex at_one() const { return z_[0]; }
  Complex at_minus_one() const { return z_[z_.size() / 2]; }

 private:
  DiscGenerator(BoundaryFunction z, double negative_energy)
      : z_(std::move(z)), negative_energy_(negative_energy) {}

  BoundaryFunction z_;
  double negative_energy_ = 0.0;
};

/// A(zeta) = (Z(zeta), W(zeta)) with U = Re W, V = Im W, c = Re W(1).
class AnalyticDisc {
 public:
  AnalyticDisc(DiscGenerator z, BoundaryFunction w);

  const DiscGenerator& generator() const noexcept { return z_; }
  const BoundaryFunction& z() const noexcept { return z_.samples(); }
  const BoundaryFunction& w() const noexcept { return w_; }
  BoundaryFunction u() const { return w_.real_part(); }
  BoundaryFunction v() const { return w_.imag_part(); }
  double c() const { return w_[0].real(); }

  /// Negative-frequency energy fraction of W.
  double negative_energy() const noexcept { return negative_energy_; }
  bool is_analytic(double tol = kDiscAnalyticityTol) const { return negative_energy_ <= tol; }

 private:
  DiscGenerator z_;
  BoundaryFunction w_;
  double negative_energy_ = 0.0;
};

struct BishopOptions {
  double tol = 1e-12;
  int max_iter = 200;
  double damping = 1.0;

  void validate() const;
};

/// Result of the fixed-point solver together with its diagnostics.
struct BishopSolution {
  AnalyticDisc disc;
  int iterations = 0;
  std::vector<double> step_history;  // sup-norm of U^{m+1} - U^m
  double final_damping = 1.0;
  double negative_energy = 0.0;      // of W, audited rather than removed
};

/// Common payload of solver failures: last iterate of U plus the history.
class SolverFailure : public Error {
 public:
  SolverFailure(std::string name, const std::string& what, BoundaryFunction last_u,
                std::vector<double> history)
      : Error(std::move(name), what), last_iterate(std::move(last_u)),
        step_history(std::move(history)) {}

  BoundaryFunction last_iterate;
  std::vector<double> step_history;
};

class NonContraction : public SolverFailure {
 public:
  NonContraction(BoundaryFunction last_u, std::vector<double> history)
      : SolverFailure("NonContraction",
                      "Bishop iteration is not contracting: step norm failed to decrease for 5 "
                      "consecutive iterations",
                      std::move(last_u), std::move(history)) {}
};

class NoConvergence : public SolverFailure {
 public:
  NoConvergence(BoundaryFunction last_u, std::vector<double> history)
      : SolverFailure("NoConvergence", "Bishop iteration exceeded max_iter",
                      std::move(last_u), std::move(history)) {}
};

/// The analytic W with Im W = V on the grid and Re W(1) = c.
BoundaryFunction analytic_completion(const BoundaryFunction& v, double c);

/// Closed-form attached disc for the rigid surface v = P(z, zbar).
AnalyticDisc attach_disc(const hypersurface::RigidHypersurface& m, const DiscGenerator& z, double c);

/// Fixed-point Bishop solver, U^0 = c,
/// U^{m+1} = (1 - d) U^m + d (-T_1(rho(Z, Zbar, U^m)) + c).
///
/// The damping d is halved once, on the first step whose norm does not
/// decrease. Five consecutive non-decreasing steps raise NonContraction;
/// exhausting max_iter raises NoConvergence.
BishopSolution solve_bishop(const hypersurface::GraphHypersurface& m, const DiscGenerator& z,
                            double c, const BishopOptions& opts = {});

/// sup_j |Im W(theta_j) - rho(Z(theta_j), Re W(theta_j))|.
double attachment_residual(const AnalyticDisc& a, const hypersurface::GraphHypersurface& m);

/// (i dZ/dtheta(0), i dW/dtheta(0)) = -dA/dzeta(1).
std::pair<Complex, Complex> exit_vector(const AnalyticDisc& a);

/// d(Re W)/dtheta at theta = 0.
double du_dtheta(const AnalyticDisc& a);

}  // namespace crdiscs::discs
