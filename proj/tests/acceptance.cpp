// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
// failure.
//
//   crdiscs_acceptance [--tool <crdiscs>] [--configs <dir>] [--scratch <dir>]

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "crdiscs/circle.hpp"
#include "crdiscs/discs.hpp"
#include "crdiscs/families.hpp"
#include "crdiscs/hypersurface.hpp"

using namespace crdiscs;
using circle::BoundaryFunction;
using hypersurface::CoefficientRecord;
using hypersurface::HomogeneousPolynomial;
using hypersurface::RigidHypersurface;
using std::numbers::pi;
namespace fs = std::filesystem;
using Complex = std::complex<double>;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(const char* name, const std::function<Outcome()>& check) {
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  std::printf("%s  %-28s %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

RigidHypersurface quartic() {
  const std::vector<CoefficientRecord> r{{3, 1, 0.5, 0.0}, {1, 3, 0.5, 0.0}};
  return RigidHypersurface(HomogeneousPolynomial::from_records(r));
}

Outcome hilbert_oracle() {
  const std::size_t n = 2048;
  const auto t0 = Clock::now();
  std::vector<BoundaryFunction> basis{BoundaryFunction::constant(n, 1.0),
                                      BoundaryFunction::sample(n, [](double t) { return std::exp(std::cos(t)); })};
  for (int k = 1; k <= 64; ++k) {
    basis.push_back(BoundaryFunction::sample(n, [k](double t) { return std::cos(k * t); }));
    basis.push_back(BoundaryFunction::sample(n, [k](double t) { return std::sin(k * t); }));
  }
  double worst = 0.0;
  for (const auto& u : basis) worst = std::max(worst, (circle::hilbert_transform(u) - circle::pv_hilbert(u)).sup_norm());
  const double secs = seconds_since(t0);
  return {worst <= 1e-6 && secs <= 5.0, fmt("max gap %.2e", worst) + fmt(" in %.2f s", secs)};
}

Outcome conjugate_identities() {
  const std::size_t n = 512;
  const double t_const = circle::hilbert_transform(BoundaryFunction::constant(n, 2.5)).sup_norm();
  const auto u = BoundaryFunction::sample(n, [](double t) { return std::exp(std::cos(t)) + std::sin(3 * t); });
  const auto h = circle::hilbert_transform(u);
  const double tt = (circle::hilbert_transform(h) + (u - BoundaryFunction::constant(n, u.mean()))).sup_norm();
  const double t1 = std::abs(circle::modified_hilbert(u)[0]);
  // Cauchy-Riemann for the harmonic extensions of (u, Tu) in polar form.
  double cr = 0.0;
  const double d = 1e-4;
  for (double r : {0.3, 0.6, 0.9}) {
    for (double t : {0.0, 1.0, 2.2, 4.1}) {
      const double ur = (circle::poisson_extend(u, r + d, t) - circle::poisson_extend(u, r - d, t)) / (2 * d);
      const double vt = (circle::poisson_extend(h, r, t + d) - circle::poisson_extend(h, r, t - d)) / (2 * d);
      const double ut = (circle::poisson_extend(u, r, t + d) - circle::poisson_extend(u, r, t - d)) / (2 * d);
      const double vr = (circle::poisson_extend(h, r + d, t) - circle::poisson_extend(h, r - d, t)) / (2 * d);
      cr = std::max({cr, std::abs(ur - vt / r), std::abs(vr + ut / r)});
    }
  }
  const bool ok = t_const <= 1e-12 && tt <= 1e-9 && t1 == 0.0 && cr <= 1e-5;
  return {ok, fmt("T1=%.1e", t_const) + fmt(" TT=%.1e", tt) + fmt(" T1u(1)=%.1e", t1) + fmt(" CR=%.1e", cr)};
}

hypersurface::GraphHypersurface u_abs2() {
  return hypersurface::GraphHypersurface([](Complex z, double u) {
    hypersurface::GraphJet j;
    j.rho = u * std::norm(z);
    j.rho_z = u * std::conj(z);
    j.rho_u = std::norm(z);
    j.rho_zzbar = u;
    j.rho_zu = std::conj(z);
    return j;
  });
}

Outcome bishop_consistency() {
  const std::vector<std::vector<CoefficientRecord>> fixtures{
      {{3, 1, 0.5, 0.0}, {1, 3, 0.5, 0.0}}, {{1, 1, 1.0, 0.0}}, {{2, 1, 0.3, -0.2}}, {{2, 2, 1.0, 0.0}, {4, 0, 0.2, 0.1}}};
  const std::vector<discs::DiscGenerator> gens{
      discs::DiscGenerator::from_power_series(1024, {{1, 0.3}}),
      discs::DiscGenerator::from_power_series(1024, {{0, Complex(0.2, 0.1)}, {1, 0.25}, {2, 0.05}})};
  double gap = 0.0, resid = 0.0, slowest = 0.0;
  for (const auto& rec : fixtures) {
    const RigidHypersurface m(HomogeneousPolynomial::from_records(rec));
    for (const auto& z : gens) {
      const auto t0 = Clock::now();
      const auto sol = discs::solve_bishop(m.as_graph(), z, 0.1);
      slowest = std::max(slowest, seconds_since(t0));
      gap = std::max(gap, (sol.disc.w() - discs::attach_disc(m, z, 0.1).w()).sup_norm());
      resid = std::max(resid, discs::attachment_residual(sol.disc, m.as_graph()));
    }
  }
  const auto g = u_abs2();
  const auto z = discs::DiscGenerator::from_power_series(1024, {{1, 0.3}, {2, 0.1}});
  const auto t0 = Clock::now();
  const auto sol = discs::solve_bishop(g, z, 0.2);
  slowest = std::max(slowest, seconds_since(t0));
  const double nr = discs::attachment_residual(sol.disc, g);
  // The fixed-point equation itself, U = -T_1 V + c.
  const auto rhs = -1.0 * circle::modified_hilbert(sol.disc.v()) + BoundaryFunction::constant(1024, 0.2);
  const double defect = (sol.disc.u() - rhs).sup_norm();
  const bool ok = gap <= 1e-10 && resid <= 1e-10 && nr <= 1e-8 && defect <= 1e-8 && sol.iterations <= 20 &&
                  slowest <= 2.0;
  return {ok, fmt("rigid gap %.1e", gap) + fmt(" nonrigid resid %.1e", std::max(nr, defect)) +
                  fmt(" iters %.0f", sol.iterations) + fmt(" slowest %.3f s", slowest)};
}

Outcome closed_form_disc() {
  const double eps = 0.1, c = 0.25;
  const auto d = discs::attach_disc(quartic(), discs::DiscGenerator::from_power_series(1024, {{1, eps}}), c);
  const auto expect = BoundaryFunction::sample(
      1024, [&](double t) { return Complex(0, std::pow(eps, 4)) * std::polar(1.0, 2 * t) + c; });
  const double gap = (d.w() - expect).sup_norm();
  const double slope = std::abs(discs::du_dtheta(d) + 2 * std::pow(eps, 4));
  return {gap <= 1e-10 && slope <= 1e-9, fmt("W gap %.1e", gap) + fmt(" du gap %.1e", slope)};
}

Outcome sectors_and_homogeneity() {
  const auto map = hypersurface::sector_decomposition(quartic().polynomial());
  bool ok = map.flat_rays.size() == 4 && map.sectors.size() == 4;
  double ray_gap = 0.0;
  if (ok) {
    for (int i = 0; i < 4; ++i) ray_gap = std::max(ray_gap, std::abs(map.flat_rays[i] - (pi / 4 + i * pi / 2)));
    for (int i = 0; i < 4; ++i) {
      const auto want = i % 2 == 0 ? hypersurface::SectorLabel::Pseudoconvex : hypersurface::SectorLabel::Pseudoconcave;
      ok = ok && map.sectors[i].label == want;
    }
  }
  std::mt19937 rng(5);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.1, 2.0);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const int d = 2 + k % 5;
    std::vector<CoefficientRecord> rec;
    for (int j = d; 2 * j >= d; --j) rec.push_back({j, d - j, g(rng), 2 * j == d ? 0.0 : g(rng)});
    const auto p = HomogeneousPolynomial::from_records(rec);
    const Complex z = std::polar(u(rng), 3 * u(rng));
    const double l = u(rng);
    const double rhs = std::pow(l, d - 2) * hypersurface::laplacian(p, z);
    worst = std::max(worst, std::abs(hypersurface::laplacian(p, l * z) - rhs) / std::max(1.0, std::abs(rhs)));
  }
  ok = ok && ray_gap <= 1e-6 && worst <= 1e-9;
  return {ok, fmt("rays %.0f", static_cast<double>(map.flat_rays.size())) + fmt(" ray gap %.1e", ray_gap) +
                  fmt(" homogeneity %.1e", worst)};
}

struct FamilyRun {
  families::EggFamily family;
  std::vector<families::PerturbationTrace> traces;
  double seconds = 0.0;
};

FamilyRun run_family(int n_max) {
  const auto t0 = Clock::now();
  const auto sector = families::pseudoconvex_sector(hypersurface::sector_decomposition(quartic().polynomial()));
  FamilyRun run{families::make_egg_family(sector, n_max, 0.4), {}, 0.0};
  const auto tau = families::make_perturbation(run.family.p_region, run.family.q_region, 0.01);
  for (const auto& m : run.family.members) run.traces.push_back(families::perturbation_slope(run.family, tau, m.n));
  run.seconds = seconds_since(t0);
  return run;
}

Outcome perturbation_bound(const FamilyRun& run) {
  bool ok = run.seconds <= 30.0;
  double worst_margin = -1e300, worst_gap = 0.0, bound = 0.0;
  for (const auto& t : run.traces) {
    bound = t.bound;
    ok = ok && t.bound < 0.0 && t.slope <= t.bound && t.route_gap() <= families::kRouteAgreement;
    worst_margin = std::max(worst_margin, t.slope - t.bound);
    worst_gap = std::max(worst_gap, t.route_gap());
  }
  return {ok, fmt("bound %.4e", bound) + fmt(" max slope-bound %.2e", worst_margin) + fmt(" route %.1e", worst_gap) +
                  fmt(" in %.2f s", run.seconds)};
}

Outcome pv_split(const std::vector<const FamilyRun*>& runs) {
  double worst = 0.0;
  std::size_t count = 0;
  for (const auto* run : runs) {
    for (const auto& t : run->traces) {
      for (const auto& c : t.pv_checks) {
        worst = std::max(worst, std::abs(c.full - c.split));
        ++count;
      }
    }
  }
  return {count > 0 && worst <= families::kPvSplitAgreement,
          fmt("checks %.0f", static_cast<double>(count)) + fmt(" max gap %.1e", worst)};
}

Outcome translation(const FamilyRun& run) {
  double max_slope = -1e300;
  for (const auto& t : run.traces) max_slope = std::max(max_slope, t.slope);
  const double eps0 = -max_slope;
  const auto rep = families::translation_experiment(quartic(), run.family, eps0);
  const bool ok = rep.n0.has_value() && rep.diffs_decrease_after(3) && rep.linear_bound_holds(0.25);
  return {ok, fmt("eps0 %.4e", eps0) + fmt(" n0 %.0f", rep.n0 ? *rep.n0 : -1.0) + fmt(" KC %.1f", rep.fitted_kc)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome determinism(const std::string& tool, const std::string& configs, const std::string& scratch) {
  if (tool.empty()) return {false, "no --tool given"};
  struct Case {
    const char* command;
    const char* config;
    int code;
  };
  const std::vector<Case> cases{{"classify", "classify_quartic.yaml", 0}, {"classify", "classify_ball.yaml", 0},
                                {"classify", "classify_empty.yaml", 2},   {"attach", "attach_rigid.yaml", 0},
                                {"attach", "attach_bishop.yaml", 0},      {"attach", "attach_noncontraction.yaml", 3},
                                {"family", "family_standard.yaml", 0},    {"family", "family_degenerate.yaml", 0},
                                {"family", "family_overflow.yaml", 4}};
  std::size_t compared = 0;
  for (const auto& c : cases) {
    std::vector<fs::path> dirs;
    for (int rep = 0; rep < 2; ++rep) {
      const fs::path out = fs::path(scratch) / (std::string(c.config) + "." + std::to_string(rep));
      fs::remove_all(out);
      fs::create_directories(out);
      const std::string cmd = "\"" + tool + "\" " + c.command + " --config \"" + configs + "/" + c.config +
                              "\" --out \"" + out.string() + "\" > /dev/null 2>&1";
      const int status = std::system(cmd.c_str());
      const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
      if (code != c.code) return {false, std::string(c.config) + " exit " + std::to_string(code)};
      dirs.push_back(out);
    }
    for (const auto& entry : fs::directory_iterator(dirs[0])) {
      if (entry.path().extension() != ".csv") continue;
      if (slurp(entry.path()) != slurp(dirs[1] / entry.path().filename()))
        return {false, std::string(c.config) + " differs in " + entry.path().filename().string()};
      ++compared;
    }
  }
  return {compared > 0, fmt("%.0f configs", static_cast<double>(cases.size())) +
                            fmt(", %.0f CSV pairs identical", static_cast<double>(compared))};
}

}  // namespace

int main(int argc, char** argv) {
  std::string tool, configs = "configs", scratch = "acceptance_runs";
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string key = argv[i];
    if (key == "--tool") tool = argv[i + 1];
    else if (key == "--configs") configs = argv[i + 1];
    else if (key == "--scratch") scratch = argv[i + 1];
    else {
      std::fprintf(stderr, "unknown option %s\n", key.c_str());
      return 2;
    }
  }

  report("hilbert oracle", hilbert_oracle);
  report("conjugate identities", conjugate_identities);
  report("bishop consistency", bishop_consistency);
  report("closed-form disc", closed_form_disc);
  report("sector decomposition", sectors_and_homogeneity);

  FamilyRun small, full;
  bool have_families = true;
  try {
    small = run_family(8);
    full = run_family(24);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "family construction failed: %s\n", e.what());
    have_families = false;
  }
  report("perturbation bound", [&] { return have_families ? perturbation_bound(small) : Outcome{false, "no family"}; });
  report("pv split identity", [&] { return have_families ? pv_split({&small, &full}) : Outcome{false, "no family"}; });
  report("translation lemma", [&] { return have_families ? translation(full) : Outcome{false, "no family"}; });
  report("cli determinism", [&] { return determinism(tool, configs, scratch); });

  std::printf("%s: %d failing\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
  return failures == 0 ? 0 : 1;
}
