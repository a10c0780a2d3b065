#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "crdiscs/families.hpp"

using namespace crdiscs;
using namespace crdiscs::families;
using hypersurface::CoefficientRecord;
using hypersurface::HomogeneousPolynomial;
using hypersurface::RigidHypersurface;
using std::numbers::pi;

namespace {

RigidHypersurface quartic() {
  const std::vector<CoefficientRecord> r{{3, 1, 0.5, 0.0}, {1, 3, 0.5, 0.0}};
  return RigidHypersurface(HomogeneousPolynomial::from_records(r));
}

const EggFamily& standard_family() {
  static const EggFamily fam = make_egg_family(SectorSpec::on_bisector(pi / 4, 3 * pi / 4), 8, 0.4);
  return fam;
}

}  // namespace

TEST_SUITE("families") {

TEST_CASE("sector specs") {
  const auto s = SectorSpec::on_bisector(0.0, pi / 2);
  CHECK(std::abs(s.q_point - std::polar(1.0, pi / 4)) < 1e-15);
  CHECK_THROWS_AS((SectorSpec{0.0, pi / 2, Complex(0.0)}.validate()), DomainError);
  CHECK_THROWS_AS((SectorSpec{0.0, pi / 2, Complex(1.0, 0.0)}.validate()), DomainError);
  CHECK_THROWS_AS(SectorSpec::on_bisector(0.0, 3.5), DomainError);
  const auto map = hypersurface::sector_decomposition(quartic().polynomial());
  const auto first = pseudoconvex_sector(map, 0);
  CHECK(first.theta_lo == doctest::Approx(pi / 4));
  CHECK(first.theta_hi == doctest::Approx(3 * pi / 4));
  CHECK(pseudoconvex_sector(map, 1).bisector() == doctest::Approx(3 * pi / 2));
  CHECK_THROWS_AS(pseudoconvex_sector(map, 2), PreconditionError);
}

TEST_CASE("lens and Moebius maps") {
  CHECK(lens_map(1.0, 0.4) == Complex(1.0));
  CHECK(lens_map(-1.0, 0.4) == Complex(-1.0));
  CHECK(std::abs(lens_map(0.0, 0.4)) < 1e-16);
  const Complex zeta = std::polar(0.7, 1.1);
  CHECK(std::abs(lens_map(-zeta, 0.4) + lens_map(zeta, 0.4)) < 1e-15);
  CHECK(std::abs(lens_map(std::conj(zeta), 0.4) - std::conj(lens_map(zeta, 0.4))) < 1e-15);
  CHECK(std::abs(mobius(1.0, 0.3) - 1.0) < 1e-16);
  CHECK(std::abs(mobius(-1.0, 0.3) + 1.0) < 1e-16);
  CHECK(std::abs(std::abs(mobius(std::polar(1.0, 2.0), 0.6)) - 1.0) < 1e-15);
  // Boundary corners: the image arc of the upper half circle leaves 1 at
  // angle beta * pi / 2 from the real axis.
  const Complex near_one = lens_map(std::polar(1.0, 1e-8), 0.5);
  CHECK(std::abs(std::arg(1.0 - near_one) + 0.25 * pi) < 1e-3);
}

TEST_CASE("Moebius precomposition") {
  const auto z = DiscGenerator::from_power_series(2048, {{1, 0.1}});
  const auto same = mobius_precompose(z, 0.0);
  CHECK((same.samples() - z.samples()).sup_norm() == 0.0);
  const auto moved = mobius_precompose(z, 0.5);
  CHECK(moved.at_one() == z.at_one());
  CHECK(moved.at_minus_one() == z.at_minus_one());
  CHECK_THROWS_AS(mobius_precompose(z, 1.0), DomainError);

  // Hausdorff distance between each sample set and the boundary curve
  // through the other one (its trigonometric interpolant).
  const auto a = mobius_precompose(z, 0.3);
  const auto& p = z.samples();
  const auto& q = a.samples();
  const auto curve_distance = [](const BoundaryFunction& pts, const BoundaryFunction& curve_samples) {
    const auto coeffs = circle::FourierCoefficients::of(curve_samples);
    const double h = curve_samples.spacing();
    double worst = 0.0;
    for (std::size_t i = 0; i < pts.size(); i += 8) {
      std::size_t best_j = 0;
      for (std::size_t j = 0; j < curve_samples.size(); ++j) {
        if (std::abs(curve_samples[j] - pts[i]) < std::abs(curve_samples[best_j] - pts[i])) best_j = j;
      }
      double lo = curve_samples.theta(best_j) - h, hi = curve_samples.theta(best_j) + h;
      for (int it = 0; it < 40; ++it) {
        const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
        if (std::abs(circle::interpolate(coeffs, m1) - pts[i]) < std::abs(circle::interpolate(coeffs, m2) - pts[i]))
          hi = m2;
        else
          lo = m1;
      }
      worst = std::max(worst, std::abs(circle::interpolate(coeffs, 0.5 * (lo + hi)) - pts[i]));
    }
    return worst;
  };
  const double haus = std::max(curve_distance(p, q), curve_distance(q, p));
  CHECK(haus <= 1e-6);
  // The composed samples follow the closed form 0.1 phi(zeta).
  for (std::size_t j = 0; j < q.size(); j += 97) {
    CHECK(std::abs(q[j] - 0.1 * mobius(BoundaryFunction::grid_point(j, 2048), 0.3)) < 1e-12);
  }
}

TEST_CASE("family in the first quadrant") {
  const auto sector = SectorSpec::on_bisector(0.0, pi / 2);
  const auto fam = make_egg_family(sector, 6, 0.4);
  REQUIRE(fam.members.size() == 6);
  double prev = 2.0;
  for (const auto& m : fam.members) {
    const auto& zs = m.z.samples();
    CHECK(std::abs(std::abs(m.z.at_one()) - std::ldexp(1.0, -m.n)) < 1e-14);
    CHECK(std::abs(m.z.at_minus_one() - sector.q_point) <= 1e-10);
    CHECK(std::abs(m.z.at_one()) < prev);
    prev = std::abs(m.z.at_one());
    // Containment in the closed quadrant, recomputed from the samples.
    for (std::size_t j = 0; j < zs.size(); ++j) {
      CHECK(zs[j].real() >= -1e-15);
      CHECK(zs[j].imag() >= -1e-15);
    }
    // Arc property on a dense set of parameters, closed form.
    for (double t = fam.t1; t < pi; t += 0.01) {
      CHECK(fam.p_region.contains(m.at_angle(t)));
      CHECK(fam.p_region.contains(m.at_angle(-t)));
    }
    CHECK_FALSE(fam.q_region.contains(m.at_angle(pi / 2)));
    CHECK_FALSE(fam.q_region.contains(m.at_angle(-pi / 2)));
    // Closed form and samples agree.
    CHECK(std::abs(m.evaluate(BoundaryFunction::grid_point(77, zs.size())) - zs[77]) < 1e-15);
  }
  CHECK(fam.member(3).n == 3);
  CHECK_THROWS_AS(fam.member(9), DomainError);
}

TEST_CASE("family construction errors") {
  const auto sector = SectorSpec::on_bisector(pi / 4, 3 * pi / 4);
  CHECK_THROWS_AS(make_egg_family(sector, 4, 0.5), SectorOverflow);
  CHECK_THROWS_AS(make_egg_family(sector, 4, 0.6), SectorOverflow);
  EggOptions wide;
  wide.q_radius = 0.3;
  CHECK_THROWS_AS(make_egg_family(sector, 4, 0.4, wide), CalibrationFailure);
  CHECK_THROWS_AS(make_egg_family(sector, 1, 0.4), DomainError);
  EggOptions bad_t;
  bad_t.t1 = 1.0;
  CHECK_THROWS_AS(make_egg_family(sector, 4, 0.4, bad_t), DomainError);
}

TEST_CASE("perturbation") {
  const RoundDisc p{std::polar(1.0, pi / 4), 0.1};
  const RoundDisc q{std::polar(1.0, pi / 4), 0.125};
  const auto tau = make_perturbation(p, q, 0.01);
  CHECK(tau.floor() == doctest::Approx(0.0081));
  const Complex inside = p.center + std::polar(0.05, 0.3);
  CHECK(tau(inside) == doctest::Approx(0.01 * std::norm(inside)));
  CHECK(tau(q.center + std::polar(0.13, 1.0)) == 0.0);
  CHECK(tau(0.0) == 0.0);
  const double mid = tau(q.center + std::polar(0.1125, 2.0));
  CHECK(mid > 0.0);
  CHECK(mid < 0.01 * std::norm(q.center + std::polar(0.1125, 2.0)));
  for (double r = 0.0; r <= 0.1; r += 0.01) {
    for (double a = 0.0; a < 2 * pi; a += 0.5) CHECK(tau(p.center + std::polar(r, a)) >= tau.floor() - 1e-16);
  }

  CHECK_THROWS_AS(make_perturbation(q, p, 0.01), InvalidRegions);
  CHECK_THROWS_AS(make_perturbation({Complex(0.9, 0.0), 0.1}, {Complex(1.0, 0.0), 0.2}, 0.01), InvalidRegions);
  CHECK_THROWS_AS(make_perturbation({Complex(0.1, 0.0), 0.05}, {Complex(0.1, 0.0), 0.2}, 0.01), InvalidRegions);
  CHECK_THROWS_AS(make_perturbation(p, q, -1.0), DomainError);
  CHECK(make_perturbation(p, q, 0.0).degenerate());
}

TEST_CASE("smooth step") {
  CHECK(smooth_step(-1.0) == 0.0);
  CHECK(smooth_step(0.0) == 0.0);
  CHECK(smooth_step(1.0) == 1.0);
  CHECK(smooth_step(0.5) == doctest::Approx(0.5));
  CHECK(smooth_step(0.3) + smooth_step(0.7) == doctest::Approx(1.0));
  for (double x = 0.0; x < 1.0; x += 0.01) CHECK(smooth_step(x + 0.01) >= smooth_step(x));
}

TEST_CASE("Laplacian of the bump against finite differences") {
  const RoundDisc p{Complex(0.0, 1.0), 0.1};
  const RoundDisc q{Complex(0.0, 1.0), 0.125};
  const auto tau = make_perturbation(p, q, 0.01);
  const double h = 1e-4;
  for (double r : {0.05, 0.105, 0.1125, 0.12, 0.13}) {
    for (double a : {0.0, 1.3, 3.0}) {
      const Complex z = q.center + std::polar(r, a);
      const double fd = (tau(z + h) + tau(z - h) + tau(z + Complex(0, h)) + tau(z - Complex(0, h)) - 4 * tau(z)) /
                        (h * h);
      CHECK(std::abs(tau.laplacian(z) - fd) < 1e-3 * std::max(1.0, std::abs(fd)));
    }
  }
}

TEST_CASE("perturbation slope in the standard scenario") {
  const auto& fam = standard_family();
  const auto tau = make_perturbation(fam.p_region, fam.q_region, 0.01);
  const auto tr = perturbation_slope(fam, tau, 3);
  CHECK(tr.bound == doctest::Approx(-0.5 * (pi / 2) * 0.0081).epsilon(1e-12));
  CHECK(tr.bound == doctest::Approx(-6.3617e-3).epsilon(1e-4));
  CHECK(tr.slope <= tr.bound);
  CHECK(tr.route_gap() <= kRouteAgreement);
  CHECK(tr.delta > tr.delta_prime * 0.99);
  CHECK(tr.delta_prime > 2 * pi / 4096);
  CHECK(tr.normalized_slope() == doctest::Approx(tr.slope / (2 * pi)));
  for (const auto& c : tr.pv_checks) CHECK(std::abs(c.full - c.split) <= kPvSplitAgreement);
  CHECK(tr.left_integral >= (fam.t2 + pi) * tau.floor());
  CHECK(tr.right_integral >= (pi - fam.t1) * tau.floor());

  // tau_n vanishes on the grid inside the measured gap.
  const auto& zs = fam.member(3).z.samples();
  for (std::size_t j = 0; j < zs.size(); ++j) {
    const double t = std::remainder(zs.theta(j), 2 * pi);
    if (t > -tr.delta && t < tr.delta_prime) CHECK(tau(zs[j]) == 0.0);
  }
}

TEST_CASE("degenerate and touching perturbations") {
  const auto& fam = standard_family();
  const auto zero = make_perturbation(fam.p_region, fam.q_region, 0.0);
  const auto tr = perturbation_slope(fam, zero, 2);
  CHECK(tr.slope == 0.0);
  CHECK(tr.bound == 0.0);
  // Regions around the first vertex, 0.5 i.
  const auto touch = make_perturbation({Complex(0.0, 0.5), 0.05}, {Complex(0.0, 0.5), 0.1}, 0.01);
  CHECK_THROWS_AS(perturbation_slope(fam, touch, 1), SupportTouchesVertex);
}

TEST_CASE("exit slopes") {
  const auto& fam = standard_family();
  const auto slopes = family_exit_slopes(quartic(), fam, 0.0);
  CHECK(slopes.size() == fam.members.size());
  for (double s : slopes) CHECK(std::isfinite(s));

  const std::vector<CoefficientRecord> ball{{1, 1, 1.0, 0.0}};
  const RigidHypersurface m_ball(HomogeneousPolynomial::from_records(ball));
  CHECK_THROWS_AS(family_exit_slopes(m_ball, fam, 0.0), PreconditionError);

  const std::vector<DiscGenerator> zero{DiscGenerator::from_power_series(256, {})};
  CHECK(exit_slopes(quartic(), zero, 0.0).front() == 0.0);
}

TEST_CASE("translation experiment") {
  const auto m = quartic();
  const auto& fam = standard_family();

  // Vertices already at the origin: nothing moves.
  std::vector<DiscGenerator> pinned;
  for (double s : {0.1, 0.2, 0.3}) pinned.push_back(DiscGenerator::from_power_series(256, {{0, -s}, {1, s}}));
  const auto rep0 = translation_experiment(m, pinned, 0.01);
  for (const auto& r : rep0.rows) CHECK(r.diff == 0.0);
  REQUIRE(rep0.n0);
  CHECK(*rep0.n0 == 1);

  const auto rep = [&] {
    try {
      return translation_experiment(m, fam, 1e-3);
    } catch (const NoQualifyingIndex& e) {
      return e.report;
    }
  }();
  REQUIRE(rep.rows.size() == 8);
  for (std::size_t k = 1; k < rep.rows.size(); ++k) CHECK(rep.rows[k].abs_c < rep.rows[k - 1].abs_c);
  CHECK(rep.diffs_decrease_after(3));
  CHECK(rep.linear_bound_holds());
  CHECK(rep.fitted_kc > 0.0);
  CHECK(rep.rows.front().translation == -fam.member(1).z.at_one());
  CHECK(rep.rows.back().holder_difference < rep.rows.front().holder_difference);
  CHECK_THROWS_AS(translation_experiment(m, fam, 1e-3), NoQualifyingIndex);
  CHECK_THROWS_AS(translation_experiment(m, fam, 0.0), PreconditionError);

  // Halving the translation at fixed shape halves the slope difference.
  const auto& z = fam.member(6).z;
  const Complex c = -z.at_one();
  const double full = translation_diff(m, z, c);
  const double half = translation_diff(m, z, 0.5 * c);
  CHECK(half / full == doctest::Approx(0.5).epsilon(0.25));
}

TEST_CASE("pseudoconvexity of the perturbed surface") {
  const auto m = quartic();
  const auto& fam = standard_family();
  const auto small = check_perturbed_pseudoconvexity(m, make_perturbation(fam.p_region, fam.q_region, 1e-5));
  CHECK(small.preserved);
  CHECK(small.epsilon_threshold > 1e-5);
  const auto big = check_perturbed_pseudoconvexity(m, make_perturbation(fam.p_region, fam.q_region, 0.01));
  CHECK(big.epsilon_threshold == doctest::Approx(small.epsilon_threshold));
  CHECK(big.preserved == (0.01 < big.epsilon_threshold));
}

}  // TEST_SUITE
