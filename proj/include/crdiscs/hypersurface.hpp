#pragma once

// Rigid hypersurfaces v = P(z, zbar) in C^2 with P a real homogeneous
// polynomial, general graph hypersurfaces v = rho(z, zbar, u), the Levi
// form, and the angular sector decomposition of Delta P.

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "crdiscs/error.hpp"

namespace crdiscs::hypersurface {

using Complex = std::complex<double>;

/// One input record (j, k, re a_jk, im a_jk) for the monomial a_jk z^j zbar^k.
struct CoefficientRecord {
  int j = 0;
  int k = 0;
  double re = 0.0;
  double im = 0.0;
};

class InvalidPolynomial : public Error {
 public:
  explicit InvalidPolynomial(const std::string& what) : Error("InvalidPolynomial", what) {}
};

/// P(z, zbar) = sum_{j+k=d} a_jk z^j zbar^k with a_kj = conj(a_jk).
class HomogeneousPolynomial {
 public:
  /// Builds P from records, completing the Hermitian partner of every
  /// coefficient. Throws InvalidPolynomial on an empty list, mixed degrees,
  /// negative exponents, non-real diagonal coefficients, or a record that
  /// contradicts the partner implied by another record.
  static HomogeneousPolynomial from_records(std::span<const CoefficientRecord> records);

  int degree() const noexcept { return degree_; }

  /// a_{j, d-j}.
  Complex coefficient(int j) const;

  /// Records with nonzero coefficients, Hermitian pairs included.
  std::vector<CoefficientRecord> records() const;

  /// Real value of P; the imaginary residue is checked and discarded.
  double operator()(Complex z) const;

  /// dP/dz as a Wirtinger derivative.
  Complex dz(Complex z) const;

  /// d^2 P / dz dzbar = Delta P / 4.
  double dz_dzbar(Complex z) const;

 private:
  HomogeneousPolynomial(int degree, std::vector<Complex> coeffs)
      : degree_(degree), coeffs_(std::move(coeffs)) {}

  int degree_;
  std::vector<Complex> coeffs_;  // coeffs_[j] = a_{j, d-j}
};

double eval_poly(const HomogeneousPolynomial& p, Complex z);

/// Delta P(z) = 4 sum j k a_jk z^{j-1} zbar^{k-1}.
double laplacian(const HomogeneousPolynomial& p, Complex z);

/// q(theta) = sum_m c_m e^{i m theta}, |m| <= degree, with c_{-m} = conj(c_m).
class TrigPolynomial {
 public:
  TrigPolynomial() = default;
  explicit TrigPolynomial(int degree);

  int degree() const noexcept { return degree_; }
  Complex coefficient(int m) const;
  void set_coefficient(int m, Complex c);

  double operator()(double theta) const;
  double derivative(double theta) const;
  double max_coefficient() const;
  bool is_zero() const;

 private:
  int degree_ = 0;
  std::vector<Complex> coeffs_{Complex(0.0)};  // index m + degree_
};

/// q with Delta P(r e^{i theta}) = r^{d-2} q(theta). Zero profile for d < 2.
TrigPolynomial angular_profile(const HomogeneousPolynomial& p);

enum class SectorLabel { Pseudoconvex, Pseudoconcave, Flat };

std::string to_string(SectorLabel label);

struct Sector {
  double theta_lo = 0.0;
  double theta_hi = 0.0;  // may exceed 2 pi for the sector wrapping through 0
  SectorLabel label = SectorLabel::Flat;

  double bisector() const { return 0.5 * (theta_lo + theta_hi); }
  double width() const { return theta_hi - theta_lo; }
};

/// Levi-flat rays and the labeled open sectors between them.
///
/// With rays r_0 < ... < r_{m-1} in [0, 2 pi), sector i spans
/// (r_i, r_{i+1}) and the last one spans (r_{m-1}, r_0 + 2 pi). Without rays
/// there is a single sector (0, 2 pi).
struct SectorMap {
  std::vector<double> flat_rays;
  std::vector<Sector> sectors;

  /// Label of the sector containing arg theta (Flat on a ray).
  SectorLabel label_at(double theta, double ray_tol = 1e-9) const;
  const Sector* sector_containing(double theta) const;
};

class AmbiguousProfile : public Error {
 public:
  AmbiguousProfile(const std::string& what, std::vector<double> offending)
      : Error("AmbiguousProfile", what), offending_midpoints(std::move(offending)) {}

  std::vector<double> offending_midpoints;
};

inline constexpr int kProfileSamples = 4096;

/// Zeros of q on [0, 2 pi) and the sign-labeled sectors between them.
///
/// Labels follow the convention pseudoconvex <=> Delta P <= 0: q < -tol is
/// Pseudoconvex, q > tol Pseudoconcave, anything else Flat. Without `tol`
/// the default 1e-9 * max |c_m| is used. A profile with all coefficients
/// exactly zero gives one Flat sector; a nonzero profile that never leaves
/// [-tol, tol] raises AmbiguousProfile.
SectorMap sector_decomposition(const HomogeneousPolynomial& p,
                               std::optional<double> tol = std::nullopt);

enum class PointClass { StronglyPseudoconvex, StronglyPseudoconcave, LeviFlat };

std::string to_string(PointClass cls);

/// Which side of a hypersurface a point lies on. Naming follows the side
/// rule: for pseudoconvex M, {v > rho} is the pseudoconvex side; for
/// pseudoconcave M, {v > rho} is the pseudoconcave side.
enum class Side { PseudoconvexSide, PseudoconcaveSide };

/// Side of the point with v - rho = `signed_height` for a hypersurface of
/// class `cls` (LeviFlat is treated as weakly pseudoconvex).
Side side_of(PointClass cls, double signed_height);

/// Wirtinger jet of a real defining function r(z, w) at a point.
struct DefiningJet {
  double value = 0.0;
  Complex r_z;        // dr/dz
  Complex r_w;        // dr/dw
  double r_zzbar = 0.0;
  double r_wwbar = 0.0;
  Complex r_zwbar;    // d^2 r / dz dwbar
};

using DefiningFunction = std::function<DefiningJet(Complex z, Complex w)>;

class DegeneratePoint : public Error {
 public:
  explicit DegeneratePoint(const std::string& what) : Error("DegeneratePoint", what) {}
};

/// r_zzbar |r_w|^2 - 2 Re{r_zwbar r_zbar r_w} + r_wwbar |r_z|^2.
///
/// Requires |r| <= 1e-8 at the point and a nonvanishing gradient.
double levi_form(const DefiningFunction& r, Complex z, Complex w);

/// Jet of rho(z, zbar, u) for a graph v = rho.
struct GraphJet {
  double rho = 0.0;
  Complex rho_z;       // d rho / dz
  double rho_u = 0.0;
  double rho_zzbar = 0.0;
  Complex rho_zu;      // d^2 rho / dz du
  double rho_uu = 0.0;
};

using GraphEvaluator = std::function<GraphJet(Complex z, double u)>;

class InconsistentDerivatives : public Error {
 public:
  explicit InconsistentDerivatives(const std::string& what)
      : Error("InconsistentDerivatives", what) {}
};

struct ProbeOptions {
  double radius = 0.5;     // probes in |z| <= radius, |u| <= radius
  int count = 16;
  double tolerance = 1e-5;  // relative to max(1, |quantity|)
  unsigned seed = 20140101u;
};

/// Graph hypersurface v = rho(z, zbar, u) with caller-supplied derivatives.
/// The derivatives are checked against centered finite differences at
/// construction (InconsistentDerivatives on mismatch).
class GraphHypersurface {
 public:
  explicit GraphHypersurface(GraphEvaluator evaluator, ProbeOptions probes = {},
                             bool depends_on_u = true);

  double rho(Complex z, double u) const { return evaluator_(z, u).rho; }
  GraphJet jet(Complex z, double u) const { return evaluator_(z, u); }

  /// False when rho is known not to depend on u (rigid surfaces).
  bool depends_on_u() const noexcept { return depends_on_u_; }

  /// Jet of r(z, w) = v - rho(z, zbar, u).
  DefiningJet defining_jet(Complex z, Complex w) const;
  DefiningFunction defining_function() const;

 private:
  GraphEvaluator evaluator_;
  bool depends_on_u_;
};

/// M = {v = P(z, zbar)}.
class RigidHypersurface {
 public:
  explicit RigidHypersurface(HomogeneousPolynomial p) : p_(std::move(p)) {}

  const HomogeneousPolynomial& polynomial() const noexcept { return p_; }

  /// r(z, w) = v - P(z, zbar).
  double defining(Complex z, Complex w) const { return w.imag() - p_(z); }

  GraphHypersurface as_graph() const;

 private:
  HomogeneousPolynomial p_;
};

/// Classification by Delta P: |Delta P| <= tol is LeviFlat, Delta P < -tol
/// StronglyPseudoconvex, Delta P > tol StronglyPseudoconcave.
PointClass classify_point(const RigidHypersurface& m, Complex z, double tol);

}  // namespace crdiscs::hypersurface
