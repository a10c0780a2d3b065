#include "crdiscs/families.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace crdiscs::families {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kAlphaLimit = 0.99;

double wrap_pi(double x) { return std::remainder(x, kTwoPi); }

// Bisection for a monotone predicate: ok(lo) false, ok(hi) true -> boundary.
double bisect(const std::function<bool(double)>& ok, double lo, double hi, int iters = 200) {
  for (int i = 0; i < iters && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++i) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

double lambda_of(double alpha) { return (1.0 - alpha) / (1.0 + alpha); }
double alpha_of(double lambda) { return (1.0 - lambda) / (1.0 + lambda); }

Complex member_value(Complex a, Complex b, double beta, double alpha, Complex zeta) {
  return a + b * lens_map(mobius(zeta, alpha), beta);
}

double integrate_smooth(const std::function<double(double)>& f, double a, double b) {
  if (!(b > a)) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 12, 1e-12);
}

// Endpoint b carries the corner cusp, tanh-sinh clusters nodes there.
double integrate_cusp(const std::function<double(double)>& f, double a, double b) {
  if (!(b > a)) return 0.0;
  boost::math::quadrature::tanh_sinh<double> integrator;
  return integrator.integrate(f, a, b, 1e-12);
}

// Preimage arc of the perturbation support on one side: the curve
// s -> Z(e^{i sign s}) leaves Q at s_q and enters P at s_p.
struct SideArc {
  double s_q = 0.0;
  double s_p = 0.0;
};

SideArc side_arc(const EggMember& m, const Perturbation& tau, double sign, double s_lo, double s_in) {
  const auto dist = [&](double s) { return std::abs(m.at_angle(sign * s) - tau.q_region().center); };
  SideArc arc;
  arc.s_q = bisect([&](double s) { return dist(s) < tau.q_region().radius; }, s_lo, s_in);
  arc.s_p = bisect([&](double s) { return dist(s) <= tau.p_region().radius; }, arc.s_q, s_in);
  return arc;
}

// Integral over s in [s_q, pi] of tau(Z(e^{i sign s})) * kernel(sign s).
double side_integral(const EggMember& m, const Perturbation& tau, double sign, const SideArc& arc,
                     const std::function<double(double)>& kernel) {
  const auto f = [&](double s) {
    const double t = sign * s;
    return tau(m.at_angle(t)) * kernel(t);
  };
  return integrate_smooth(f, arc.s_q, arc.s_p) + integrate_cusp(f, arc.s_p, kPi);
}

BoundaryFunction compose_real(const DiscGenerator& z, const std::function<double(Complex)>& f) {
  const auto& zs = z.samples();
  std::vector<double> out(zs.size());
  for (std::size_t j = 0; j < zs.size(); ++j) out[j] = f(zs[j]);
  return BoundaryFunction::from_real(out);
}

// Central differences of the smooth step; h is C-infinity with flat ends.
double smooth_step_d1(double s) {
  constexpr double e = 1e-4;
  return (smooth_step(s + e) - smooth_step(s - e)) / (2.0 * e);
}

double smooth_step_d2(double s) {
  constexpr double e = 1e-4;
  return (smooth_step(s + e) - 2.0 * smooth_step(s) + smooth_step(s - e)) / (e * e);
}

}  // namespace

// --- sectors -------------------------------------------------------------------

SectorSpec SectorSpec::on_bisector(double theta_lo, double theta_hi, double radius) {
  SectorSpec s{theta_lo, theta_hi, std::polar(radius, 0.5 * (theta_lo + theta_hi))};
  s.validate();
  return s;
}

void SectorSpec::validate() const {
  if (!(theta_lo < theta_hi)) throw DomainError("SectorSpec: theta_lo must be below theta_hi");
  if (!(width() < kPi)) throw DomainError("SectorSpec: sector must be narrower than pi");
  if (q_point == Complex(0.0)) throw DomainError("SectorSpec: q must be nonzero");
  if (std::abs(wrap_pi(std::arg(q_point) - bisector())) > 1e-12) {
    throw DomainError("SectorSpec: arg q must equal the bisector");
  }
}

SectorSpec pseudoconvex_sector(const hypersurface::SectorMap& map, std::size_t index, double radius) {
  std::size_t seen = 0;
  for (const auto& s : map.sectors) {
    if (s.label != hypersurface::SectorLabel::Pseudoconvex) continue;
    if (seen++ == index) return SectorSpec::on_bisector(s.theta_lo, s.theta_hi, radius);
  }
  throw PreconditionError("no pseudoconvex sector with index " + std::to_string(index));
}

// --- conformal pieces ------------------------------------------------------------

Complex lens_map(Complex zeta, double beta) {
  const Complex plus = 1.0 + zeta;
  const Complex minus = 1.0 - zeta;
  if (minus == Complex(0.0)) return 1.0;
  if (plus == Complex(0.0)) return -1.0;
  const Complex a = std::pow(plus, beta);
  const Complex b = std::pow(minus, beta);
  return (a - b) / (a + b);
}

Complex mobius(Complex zeta, double alpha) { return (zeta - alpha) / (1.0 - alpha * zeta); }

DiscGenerator mobius_precompose(const DiscGenerator& z, double alpha) {
  if (!(std::abs(alpha) < 1.0)) throw DomainError("mobius_precompose: |alpha| must be below 1");
  const auto& zs = z.samples();
  const std::size_t n = zs.size();
  if (alpha == 0.0) return z;
  const auto coeffs = circle::FourierCoefficients::of(zs);
  std::vector<Complex> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    out[j] = circle::interpolate(coeffs, std::arg(mobius(BoundaryFunction::grid_point(j, n), alpha)));
  }
  out[0] = zs[0];
  out[n / 2] = zs[n / 2];
  return DiscGenerator::unchecked(BoundaryFunction(std::move(out)));
}

// --- egg family ---------------------------------------------------------------------

Complex EggMember::evaluate(Complex zeta) const { return member_value(offset, scale, beta, alpha, zeta); }

const EggMember& EggFamily::member(int n) const {
  for (const auto& m : members) {
    if (m.n == n) return m;
  }
  throw DomainError("EggFamily: no member with index " + std::to_string(n));
}

EggFamily make_egg_family(const SectorSpec& sector, int n_max, double beta, const EggOptions& options) {
  sector.validate();
  if (n_max < 2) throw DomainError("make_egg_family: n_max must be at least 2");
  if (!(beta > 0.0 && beta < 1.0)) throw DomainError("make_egg_family: beta must lie in (0,1)");
  if (!(options.t1 > 0.5 * kPi && options.t1 < kPi)) throw DomainError("make_egg_family: t1 outside (pi/2, pi)");
  if (!(options.t2 > -kPi && options.t2 < -0.5 * kPi)) throw DomainError("make_egg_family: t2 outside (-pi, -pi/2)");
  if (!(options.p_radius > 0.0 && options.p_radius < options.q_radius && options.q_radius < 1.0)) {
    throw DomainError("make_egg_family: need 0 < p_radius < q_radius < 1");
  }
  if (!(beta * kPi < sector.width())) {
    throw SectorOverflow("corner opening beta*pi = " + std::to_string(beta * kPi) +
                         " does not fit the sector width " + std::to_string(sector.width()));
  }

  const Complex q = sector.q_point;
  const double rq = std::abs(q);
  const Complex dir = q / rq;

  EggFamily fam;
  fam.sector = sector;
  fam.beta = beta;
  fam.t1 = options.t1;
  fam.t2 = options.t2;
  fam.p_region = {q, options.p_radius * rq};
  fam.q_region = {q, options.q_radius * rq};

  // The arc [t1, pi) reaches P last at its start t1; likewise (-pi, t2].
  const double s_in = std::min(options.t1, -options.t2);

  for (int n = 1; n <= n_max; ++n) {
    const Complex v = dir * std::ldexp(rq, -n);
    const Complex a = 0.5 * (q + v);
    const Complex b = 0.5 * (v - q);
    const auto dist = [&](double alpha, double t) {
      return std::abs(member_value(a, b, beta, alpha, std::polar(1.0, t)) - q);
    };
    // Both distances shrink as alpha grows: the Moebius map pushes the
    // circle toward -1, hence the curve toward q.
    const auto in_p = [&](double alpha) { return dist(alpha, s_in) <= fam.p_region.radius; };
    const auto in_q = [&](double alpha) { return dist(alpha, 0.5 * kPi) <= fam.q_region.radius; };
    if (!in_p(kAlphaLimit) || in_q(-kAlphaLimit)) {
      throw CalibrationFailure("member " + std::to_string(n) + ": no |alpha| <= 0.99 satisfies the arc property");
    }
    const double alpha_in = in_p(-kAlphaLimit) ? -kAlphaLimit : bisect(in_p, -kAlphaLimit, kAlphaLimit);
    const double alpha_out = in_q(kAlphaLimit) ? bisect(in_q, -kAlphaLimit, kAlphaLimit) : kAlphaLimit;
    if (!(alpha_in < alpha_out)) {
      throw CalibrationFailure("member " + std::to_string(n) + ": P and Q constraints leave no alpha (" +
                               std::to_string(alpha_in) + " >= " + std::to_string(alpha_out) + ")");
    }
    // Middle of the feasible window in the dilation s -> lambda s seen by
    // the half-plane coordinate (1 + zeta) / (1 - zeta).
    const double alpha = alpha_of(std::sqrt(lambda_of(alpha_in) * lambda_of(alpha_out)));

    fam.members.push_back(EggMember{
        n, v, a, b, beta, alpha,
        DiscGenerator::from_map(options.grid,
                                [&](Complex zeta) { return member_value(a, b, beta, alpha, zeta); })});
  }

  // Family invariants.
  const double half_width = 0.5 * sector.width();
  const std::size_t grid = options.grid;
  double prev_abs = std::numeric_limits<double>::infinity();
  for (const auto& m : fam.members) {
    const std::string tag = "member " + std::to_string(m.n) + ": ";
    const auto& zs = m.z.samples();
    if (std::abs(m.z.at_minus_one() - q) > 1e-10) throw CalibrationFailure(tag + "Z(-1) != q");
    const double abs_v = std::abs(m.z.at_one());
    if (!(abs_v < prev_abs)) throw CalibrationFailure(tag + "|Z(1)| not strictly decreasing");
    prev_abs = abs_v;

    std::vector<double> dev(grid);
    for (std::size_t j = 0; j < grid; ++j) {
      if (zs[j] == Complex(0.0)) throw SectorOverflow(tag + "image touches the origin");
      dev[j] = std::arg(zs[j] / dir);
      if (std::abs(dev[j]) > half_width + 1e-12) throw SectorOverflow(tag + "image leaves the sector");
    }
    for (std::size_t j = 1; j < grid / 2; ++j) {
      if (std::abs(dev[j] + dev[grid - j]) > 1e-8) throw CalibrationFailure(tag + "image not symmetric");
    }
    for (std::size_t j = 1; j < grid; ++j) {
      const double t = BoundaryFunction::grid_angle(j, grid);
      const bool arc = (t >= fam.t1 && t <= kPi) || (t > kPi && t <= kTwoPi + fam.t2);
      if (arc && std::abs(zs[j] - q) > fam.p_region.radius + 1e-12) {
        throw CalibrationFailure(tag + "arc sample at t = " + std::to_string(t) + " lies outside P");
      }
    }
    for (double t : {0.5 * kPi, -0.5 * kPi}) {
      if (fam.q_region.contains(m.at_angle(t))) throw CalibrationFailure(tag + "Z(e^{+-i pi/2}) inside Q");
    }
  }
  return fam;
}

// --- perturbation -----------------------------------------------------------------------

double smooth_step(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double f = std::exp(-1.0 / x);
  const double g = std::exp(-1.0 / (1.0 - x));
  return f / (f + g);
}

Perturbation::Perturbation(RoundDisc p_region, RoundDisc q_region, double epsilon)
    : p_(p_region), q_(q_region), epsilon_(epsilon) {
  if (!(p_.radius > 0.0) || !(p_.radius < q_.radius)) {
    throw InvalidRegions("Perturbation: need 0 < r_P < r_Q");
  }
  const double scale = std::max(1.0, std::abs(q_.center));
  if (std::abs(p_.center - q_.center) > 1e-12 * scale) {
    throw InvalidRegions("Perturbation: P and Q must be concentric discs");
  }
  if (!(std::abs(q_.center) > q_.radius)) throw InvalidRegions("Perturbation: 0 must lie outside Q");
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw DomainError("Perturbation: epsilon must be finite and nonnegative");
  }
  const double near = std::abs(p_.center) - p_.radius;
  floor_ = epsilon_ * near * near;
}

double Perturbation::chi(Complex z) const {
  const double d = std::abs(z - q_.center);
  if (d <= p_.radius) return 1.0;
  if (d >= q_.radius) return 0.0;
  return smooth_step((q_.radius - d) / (q_.radius - p_.radius));
}

double Perturbation::laplacian(Complex z) const {
  const Complex rel = z - q_.center;
  const double d = std::abs(rel);
  if (d >= q_.radius) return 0.0;
  if (d <= p_.radius) return 4.0 * epsilon_;
  const double w = q_.radius - p_.radius;
  const double s = (q_.radius - d) / w;
  const double chi0 = smooth_step(s);
  const double chi1 = -smooth_step_d1(s) / w;
  const double chi2 = smooth_step_d2(s) / (w * w);
  const double lap_chi = chi2 + chi1 / d;
  const double grad_dot = 2.0 * chi1 * (std::conj(rel) * z).real() / d;
  return epsilon_ * (std::norm(z) * lap_chi + 2.0 * grad_dot + 4.0 * chi0);
}

Perturbation make_perturbation(RoundDisc p_region, RoundDisc q_region, double epsilon) {
  return Perturbation(p_region, q_region, epsilon);
}

// --- slopes ---------------------------------------------------------------------------------

double split_kernel_slope(const BoundaryFunction& f) { return kTwoPi * circle::hilbert_derivative_at_one(f); }

double PerturbationTrace::normalized_slope() const { return slope / kTwoPi; }

PerturbationTrace perturbation_slope(const EggFamily& family, const Perturbation& tau, int n) {
  const auto& m = family.member(n);
  const auto& zs = m.z.samples();
  const std::size_t grid = zs.size();
  const double h = kTwoPi / static_cast<double>(grid);

  PerturbationTrace tr;
  tr.n = n;
  tr.floor = tau.floor();
  tr.bound = tau.degenerate() ? 0.0 : -0.5 * (family.t2 - family.t1 + kTwoPi) * tau.floor();

  const auto tau_n = compose_real(m.z, [&](Complex z) { return tau(z); });
  const auto values = tau_n.real_values();

  // Support gap: last zero sample on each side before the support starts.
  std::size_t first_pos = grid / 2;
  std::size_t first_neg = grid / 2;
  for (std::size_t j = 1; j < grid / 2; ++j) {
    if (values[j] != 0.0) {
      first_pos = j;
      break;
    }
  }
  for (std::size_t j = 1; j < grid / 2; ++j) {
    if (values[grid - j] != 0.0) {
      first_neg = j;
      break;
    }
  }
  if (values[0] != 0.0 || first_pos < 3 || first_neg < 3) {
    throw SupportTouchesVertex("member " + std::to_string(n) + ": perturbation support reaches theta = 0");
  }
  tr.delta_prime = static_cast<double>(first_pos - 1) * h;
  tr.delta = static_cast<double>(first_neg - 1) * h;

  tr.slope = split_kernel_slope(tau_n);
  if (tau.degenerate()) return tr;

  const auto inv_sin2 = [](double t) {
    const double s = std::sin(0.5 * t);
    return 1.0 / (s * s);
  };
  const double s_in = std::min(family.t1, -family.t2);
  const SideArc right = side_arc(m, tau, 1.0, tr.delta_prime, s_in);
  const SideArc left = side_arc(m, tau, -1.0, tr.delta, s_in);
  tr.right_integral = side_integral(m, tau, 1.0, right, inv_sin2);
  tr.left_integral = side_integral(m, tau, -1.0, left, inv_sin2);
  tr.slope_quadrature = -0.5 * (tr.left_integral + tr.right_integral);

  // PV split at theta = 0 and at grid points inside the gap on both sides.
  const std::size_t inner = std::max<std::size_t>(1, std::min(first_pos, first_neg) / 2);
  for (std::size_t idx : {std::size_t{0}, inner, grid - inner}) {
    const double theta = wrap_pi(BoundaryFunction::grid_angle(idx, grid));
    const auto cot_kernel = [theta](double t) { return 1.0 / std::tan(0.5 * (theta - t)); };
    PvSplitCheck check;
    check.theta = theta;
    check.full = circle::pv_hilbert_at(tau_n, idx);
    check.split = (side_integral(m, tau, 1.0, right, cot_kernel) +
                   side_integral(m, tau, -1.0, left, cot_kernel)) / kTwoPi;
    tr.pv_checks.push_back(check);
  }
  return tr;
}

std::vector<double> exit_slopes(const hypersurface::RigidHypersurface& m,
                                std::span<const DiscGenerator> generators, double c) {
  std::vector<double> out;
  out.reserve(generators.size());
  for (const auto& z : generators) out.push_back(discs::du_dtheta(discs::attach_disc(m, z, c)));
  return out;
}

std::vector<double> family_exit_slopes(const hypersurface::RigidHypersurface& m,
                                       const EggFamily& family, double c) {
  const auto& p = m.polynomial();
  const double qmax = hypersurface::angular_profile(p).max_coefficient();
  const int d = p.degree();
  std::vector<DiscGenerator> gens;
  for (const auto& member : family.members) {
    for (const auto& z : member.z.samples().samples()) {
      const double tol = 1e-9 * qmax * std::pow(std::abs(z), d - 2);
      const auto cls = hypersurface::classify_point(m, z, tol);
      if (cls != hypersurface::PointClass::StronglyPseudoconvex) {
        throw PreconditionError("family_exit_slopes: member " + std::to_string(member.n) +
                                " has a boundary point classified " + hypersurface::to_string(cls));
      }
    }
    gens.push_back(member.z);
  }
  return exit_slopes(m, gens, c);
}

// --- translation ----------------------------------------------------------------------------

bool TranslationReport::linear_bound_holds(double slack) const {
  for (std::size_t k = 1; k < rows.size(); ++k) {
    if (rows[k].diff > fitted_kc * rows[k].abs_c * (1.0 + slack) + 1e-15) return false;
  }
  return true;
}

bool TranslationReport::diffs_decrease_after(int n_start) const {
  for (std::size_t k = 1; k < rows.size(); ++k) {
    if (rows[k - 1].n < n_start) continue;
    if (!(rows[k].diff <= rows[k - 1].diff)) return false;
  }
  return true;
}

double translation_diff(const hypersurface::RigidHypersurface& m, const DiscGenerator& z, Complex c) {
  const auto& p = m.polynomial();
  const double s0 = split_kernel_slope(compose_real(z, [&](Complex w) { return p(w); }));
  const double s1 = split_kernel_slope(compose_real(z, [&](Complex w) { return p(w + c); }));
  return std::abs(s1 - s0);
}

TranslationReport translation_experiment(const hypersurface::RigidHypersurface& m,
                                         std::span<const DiscGenerator> generators, double epsilon0) {
  if (!(epsilon0 > 0.0)) throw PreconditionError("translation_experiment: epsilon0 must be positive");
  const auto& p = m.polynomial();
  const circle::HolderIndex c190(1, 0.9);
  TranslationReport rep;
  rep.epsilon0 = epsilon0;
  int label = 0;
  for (const auto& z : generators) {
    TranslationRow row;
    row.n = ++label;
    row.translation = -z.at_one();
    row.abs_c = std::abs(row.translation);
    const auto before = compose_real(z, [&](Complex w) { return p(w); });
    const auto after = compose_real(z, [&](Complex w) { return p(w + row.translation); });
    row.slope_original = split_kernel_slope(before);
    row.slope_translated = split_kernel_slope(after);
    row.diff = std::abs(row.slope_translated - row.slope_original);
    row.ratio = row.abs_c > 0.0 ? row.diff / row.abs_c : 0.0;
    row.holder_difference = circle::holder_norm(after - before, c190);
    rep.rows.push_back(row);
  }

  double num = 0.0;
  double den = 0.0;
  for (std::size_t k = 1; k < rep.rows.size(); ++k) {
    num += rep.rows[k].diff * rep.rows[k].abs_c;
    den += rep.rows[k].abs_c * rep.rows[k].abs_c;
    rep.max_ratio = std::max(rep.max_ratio, rep.rows[k].ratio);
  }
  rep.fitted_kc = den > 0.0 ? num / den : 0.0;

  for (const auto& row : rep.rows) {
    if (row.diff <= 0.5 * epsilon0) {
      rep.n0 = row.n;
      break;
    }
  }
  if (!rep.n0) {
    throw NoQualifyingIndex("no member with slope difference <= epsilon0/2 = " + std::to_string(0.5 * epsilon0),
                            rep);
  }
  return rep;
}

TranslationReport translation_experiment(const hypersurface::RigidHypersurface& m,
                                         const EggFamily& family, double epsilon0) {
  std::vector<DiscGenerator> gens;
  for (const auto& member : family.members) gens.push_back(member.z);
  auto run = [&]() { return translation_experiment(m, gens, epsilon0); };
  auto relabel = [&](TranslationReport& rep) {
    for (std::size_t k = 0; k < rep.rows.size(); ++k) rep.rows[k].n = family.members[k].n;
    if (rep.n0) rep.n0 = family.members[static_cast<std::size_t>(*rep.n0 - 1)].n;
  };
  try {
    auto rep = run();
    relabel(rep);
    return rep;
  } catch (NoQualifyingIndex& e) {
    relabel(e.report);
    throw;
  }
}

// --- pseudoconvexity of the perturbed surface ------------------------------------------------

PseudoconvexityCheck check_perturbed_pseudoconvexity(const hypersurface::RigidHypersurface& m,
                                                     const Perturbation& tau, int samples) {
  if (samples < 2) throw DomainError("check_perturbed_pseudoconvexity: need at least 2 samples");
  const Perturbation unit(tau.p_region(), tau.q_region(), 1.0);
  const auto& q = tau.q_region();
  PseudoconvexityCheck out;
  out.worst_laplacian = -std::numeric_limits<double>::infinity();
  out.epsilon_threshold = std::numeric_limits<double>::infinity();
  for (int a = 0; a <= samples; ++a) {
    const double r = q.radius * static_cast<double>(a) / samples;
    const int spokes = a == 0 ? 1 : 4 * samples;
    for (int b = 0; b < spokes; ++b) {
      const Complex z = q.center + std::polar(r, kTwoPi * b / spokes);
      const double base = hypersurface::laplacian(m.polynomial(), z);
      const double bump = unit.laplacian(z);
      out.worst_laplacian = std::max(out.worst_laplacian, base + tau.epsilon() * bump);
      if (base >= 0.0) {
        out.epsilon_threshold = 0.0;
      } else if (bump > 0.0) {
        out.epsilon_threshold = std::min(out.epsilon_threshold, -base / bump);
      }
    }
  }
  out.preserved = out.worst_laplacian < 0.0;
  return out;
}

}  // namespace crdiscs::families
