#pragma once

// Egg-shaped disc families inside a pseudoconvex sector, the bump
// perturbation tau = chi * eps * |z|^2 and its exit-slope bound, and the
// translation experiment that moves each family vertex onto the origin.
//
// Slopes of the modified Hilbert transform at theta = 0 are reported in the
// kernel normalization of the split-integral formula,
//
//   S(f) = -1/2 * int f(t) / sin^2(t / 2) dt      (f vanishing near t = 0),
//
// which equals 2*pi * d/dtheta T_1 f(0). The uniform bound
// -(t2 - t1 + 2 pi) * floor / 2 is stated in the same normalization.

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "crdiscs/circle.hpp"
#include "crdiscs/discs.hpp"
#include "crdiscs/error.hpp"
#include "crdiscs/hypersurface.hpp"

namespace crdiscs::families {

using circle::BoundaryFunction;
using discs::DiscGenerator;
using Complex = std::complex<double>;

inline constexpr std::size_t kFamilyGrid = 4096;

class SectorOverflow : public Error {
 public:
  explicit SectorOverflow(const std::string& what) : Error("SectorOverflow", what) {}
};

class CalibrationFailure : public Error {
 public:
  explicit CalibrationFailure(const std::string& what) : Error("CalibrationFailure", what) {}
};

class InvalidRegions : public Error {
 public:
  explicit InvalidRegions(const std::string& what) : Error("InvalidRegions", what) {}
};

class SupportTouchesVertex : public Error {
 public:
  explicit SupportTouchesVertex(const std::string& what) : Error("SupportTouchesVertex", what) {}
};

/// One strongly pseudoconvex sector (theta_lo, theta_hi) and the anchor q
/// on its bisector.
struct SectorSpec {
  double theta_lo = 0.0;
  double theta_hi = 0.0;
  Complex q_point;

  double bisector() const { return 0.5 * (theta_lo + theta_hi); }
  double width() const { return theta_hi - theta_lo; }

  /// Anchor at distance `radius` on the bisector.
  static SectorSpec on_bisector(double theta_lo, double theta_hi, double radius = 1.0);

  void validate() const;
};

/// The `index`-th Pseudoconvex sector of a SectorMap (PreconditionError if
/// there is none).
SectorSpec pseudoconvex_sector(const hypersurface::SectorMap& map, std::size_t index = 0,
                               double radius = 1.0);

struct RoundDisc {
  Complex center;
  double radius = 0.0;

  bool contains(Complex z) const { return std::abs(z - center) <= radius; }
};

/// Lens map ((1+zeta)^b - (1-zeta)^b) / ((1+zeta)^b + (1-zeta)^b): the
/// unit disc onto a lens symmetric about the real axis with corners of
/// opening b*pi at -1 and 1.
Complex lens_map(Complex zeta, double beta);

/// (zeta - alpha) / (1 - alpha zeta) for real alpha; fixes +-1.
Complex mobius(Complex zeta, double alpha);

/// Z o phi_alpha sampled on the grid by spectral interpolation of Z.
DiscGenerator mobius_precompose(const DiscGenerator& z, double alpha);

/// Member n of the family: Z_n = A + B * L(phi_alpha(zeta)) with
/// Z_n(-1) = q and Z_n(1) = vertex.
struct EggMember {
  int n = 0;
  Complex vertex;
  Complex offset;  // A = (q + vertex) / 2
  Complex scale;   // B = (vertex - q) / 2
  double beta = 0.5;
  double alpha = 0.0;
  DiscGenerator z;

  Complex evaluate(Complex zeta) const;
  Complex at_angle(double t) const { return evaluate(std::polar(1.0, t)); }
};

struct EggOptions {
  std::size_t grid = kFamilyGrid;
  double t1 = 0.75 * 3.14159265358979323846;
  double t2 = -0.75 * 3.14159265358979323846;
  // Radii relative to |q|; the regions are concentric discs around q.
  double p_radius = 0.1;
  double q_radius = 0.125;
};

struct EggFamily {
  SectorSpec sector;
  double beta = 0.5;
  double t1 = 0.0;
  double t2 = 0.0;
  RoundDisc p_region;
  RoundDisc q_region;
  std::vector<EggMember> members;

  const EggMember& member(int n) const;
};

/// Builds members n = 1..n_max with vertices |v_n| = |q| / 2^n on the
/// bisector and Moebius parameters chosen so that [t1, pi) and (-pi, t2]
/// land in the P region while e^{+-i pi/2} land outside the Q region.
///
/// Throws SectorOverflow when beta * pi >= sector width and
/// CalibrationFailure when no |alpha| <= 0.99 achieves the arc property.
/// All family invariants are verified before returning.
EggFamily make_egg_family(const SectorSpec& sector, int n_max, double beta,
                          const EggOptions& options = {});

/// tau(z) = chi(z) * eps * |z|^2 with chi = 1 on P, 0 off Q.
class Perturbation {
 public:
  Perturbation(RoundDisc p_region, RoundDisc q_region, double epsilon);

  const RoundDisc& p_region() const noexcept { return p_; }
  const RoundDisc& q_region() const noexcept { return q_; }
  double epsilon() const noexcept { return epsilon_; }
  /// min of tau over the P region, eps * (|center| - r_P)^2.
  double floor() const noexcept { return floor_; }
  bool degenerate() const noexcept { return epsilon_ == 0.0; }

  double chi(Complex z) const;
  double operator()(Complex z) const { return chi(z) * epsilon_ * std::norm(z); }

  /// Laplacian of tau, analytic in the radial profile of chi.
  double laplacian(Complex z) const;

 private:
  RoundDisc p_;
  RoundDisc q_;
  double epsilon_;
  double floor_;
};

/// Validates P strictly inside Q, concentric, 0 outside Q, eps >= 0.
Perturbation make_perturbation(RoundDisc p_region, RoundDisc q_region, double epsilon);

/// exp(-1/x)-based smooth step: 0 for x <= 0, 1 for x >= 1.
double smooth_step(double x);

struct PvSplitCheck {
  double theta = 0.0;
  double full = 0.0;   // (1/2pi) p.v. integral by grid quadrature
  double split = 0.0;  // sum of the two nonsingular integrals by adaptive quadrature
};

struct PerturbationTrace {
  int n = 0;
  double delta = 0.0;        // tau_n = 0 on (-delta, delta_prime)
  double delta_prime = 0.0;
  double slope = 0.0;        // S(tau_n) through the grid multiplier |n|
  double slope_quadrature = 0.0;  // -(left + right) / 2 by adaptive quadrature
  double left_integral = 0.0;     // int_{-pi}^{-delta} tau_n / sin^2(t/2)
  double right_integral = 0.0;    // int_{delta'}^{pi} tau_n / sin^2(t/2)
  double bound = 0.0;        // -(t2 - t1 + 2 pi) * floor / 2
  double floor = 0.0;
  std::vector<PvSplitCheck> pv_checks;

  double route_gap() const { return std::abs(slope - slope_quadrature); }
  double normalized_slope() const;
};

inline constexpr double kRouteAgreement = 1e-5;
inline constexpr double kPvSplitAgreement = 1e-6;

PerturbationTrace perturbation_slope(const EggFamily& family, const Perturbation& tau, int n);

/// S(f) = 2 pi * d/dtheta T_1 f (0) on the grid.
double split_kernel_slope(const BoundaryFunction& f);

/// du/dtheta(0) of the rigid disc attached through each generator.
std::vector<double> exit_slopes(const hypersurface::RigidHypersurface& m,
                                std::span<const DiscGenerator> generators, double c);

/// exit_slopes over the family after checking every boundary sample lies
/// where M is strongly pseudoconvex (PreconditionError otherwise).
std::vector<double> family_exit_slopes(const hypersurface::RigidHypersurface& m,
                                       const EggFamily& family, double c);

struct TranslationRow {
  int n = 0;
  Complex translation;        // c_n = -Z_n(1)
  double abs_c = 0.0;
  double slope_original = 0.0;    // S(P o Z_n)
  double slope_translated = 0.0;  // S(P o (Z_n + c_n))
  double diff = 0.0;
  double ratio = 0.0;             // diff / |c_n|, 0 when c_n = 0
  double holder_difference = 0.0; // ||P(Z_n + c_n) - P(Z_n)||_{1,0.9}
};

struct TranslationReport {
  std::vector<TranslationRow> rows;
  double epsilon0 = 0.0;
  std::optional<int> n0;
  double fitted_kc = 0.0;   // least squares diff ~ K*C |c| over rows after the first
  double max_ratio = 0.0;

  bool linear_bound_holds(double slack = 0.25) const;
  bool diffs_decrease_after(int n_start) const;
};

class NoQualifyingIndex : public Error {
 public:
  NoQualifyingIndex(const std::string& what, TranslationReport report_)
      : Error("NoQualifyingIndex", what), report(std::move(report_)) {}

  TranslationReport report;
};

/// |S(P o (Z + c)) - S(P o Z)|.
double translation_diff(const hypersurface::RigidHypersurface& m, const DiscGenerator& z, Complex c);

/// Runs the translation over generic generators labeled 1..size.
TranslationReport translation_experiment(const hypersurface::RigidHypersurface& m,
                                         std::span<const DiscGenerator> generators,
                                         double epsilon0);

TranslationReport translation_experiment(const hypersurface::RigidHypersurface& m,
                                         const EggFamily& family, double epsilon0);

/// Empirical check that v = P + tau keeps the sign of the Laplacian on Q.
struct PseudoconvexityCheck {
  bool preserved = false;
  double worst_laplacian = 0.0;     // max over Q samples of Delta(P + tau)
  double epsilon_threshold = 0.0;   // largest eps keeping Delta(P + tau) < 0
};

PseudoconvexityCheck check_perturbed_pseudoconvexity(const hypersurface::RigidHypersurface& m,
                                                     const Perturbation& tau, int samples = 64);

}  // namespace crdiscs::families
