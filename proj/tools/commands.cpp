#include "commands.hpp"

#include <fmt/format.h>
#include <fmt/os.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <utility>
#include <vector>

#include "crdiscs/discs.hpp"
#include "crdiscs/families.hpp"
#include "crdiscs/hypersurface.hpp"

namespace crdiscs::tool {
namespace {

namespace fs = std::filesystem;
using Complex = std::complex<double>;
using hypersurface::HomogeneousPolynomial;
using hypersurface::RigidHypersurface;

constexpr double kPi = std::numbers::pi;

std::string num(double x) { return fmt::format("{:.12e}", x); }

// Key/value record written as summary.txt. Insertion order is kept so the
// file is byte-stable for a fixed config.
class Summary {
 public:
  Summary(std::string command, const ScenarioConfig& cfg) : command_(std::move(command)), echo_(echo_config(cfg)) {}

  void result(const std::string& key, const std::string& value) { results_.emplace_back(key, value); }
  void result(const std::string& key, double value) { result(key, num(value)); }
  void audit(const std::string& key, bool ok) {
    audits_.emplace_back(key, ok);
    all_pass_ = all_pass_ && ok;
  }
  void note(const std::string& text) { notes_.push_back(text); }
  bool all_pass() const { return all_pass_; }

  void write(const fs::path& dir, const std::string& status) const {
    auto out = fmt::output_file((dir / "summary.txt").string());
    out.print("command: {}\nstatus: {}\n", command_, status);
    out.print("config:\n");
    std::size_t pos = 0;
    while (pos < echo_.size()) {
      const auto end = echo_.find('\n', pos);
      out.print("  {}\n", echo_.substr(pos, end - pos));
      pos = end + 1;
    }
    out.print("results:\n");
    for (const auto& [k, v] : results_) out.print("  {}: {}\n", k, v);
    out.print("audits:\n");
    for (const auto& [k, ok] : audits_) out.print("  {}: {}\n", k, ok ? "pass" : "fail");
    for (const auto& n : notes_) out.print("note: {}\n", n);
  }

 private:
  std::string command_;
  std::string echo_;
  std::vector<std::pair<std::string, std::string>> results_;
  std::vector<std::pair<std::string, bool>> audits_;
  std::vector<std::string> notes_;
  bool all_pass_ = true;
};

fs::path prepare_dir(const RunOptions& opts) {
  fs::path dir(opts.out_dir);
  fs::create_directories(dir);
  return dir;
}

HomogeneousPolynomial polynomial_of(const ScenarioConfig& cfg) {
  return HomogeneousPolynomial::from_records(cfg.polynomial);
}

// --- svg ---------------------------------------------------------------------------

void write_sign_plot(const fs::path& file, const hypersurface::TrigPolynomial& q) {
  auto out = fmt::output_file(file.string());
  out.print("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"400\" height=\"400\" viewBox=\"-200 -200 400 400\">\n");
  out.print("<circle cx=\"0\" cy=\"0\" r=\"150\" fill=\"none\" stroke=\"#999\"/>\n");
  constexpr int kSegments = 720;
  for (int i = 0; i < kSegments; ++i) {
    const double a = 2.0 * kPi * i / kSegments;
    const double b = 2.0 * kPi * (i + 1) / kSegments;
    const double v = q(0.5 * (a + b));
    const char* color = v < 0.0 ? "#2b6cb0" : (v > 0.0 ? "#c53030" : "#000");
    out.print("<path d=\"M0 0 L{:.3f} {:.3f} A150 150 0 0 0 {:.3f} {:.3f} Z\" fill=\"{}\" stroke=\"none\"/>\n",
              150 * std::cos(a), -150 * std::sin(a), 150 * std::cos(b), -150 * std::sin(b), color);
  }
  out.print("<text x=\"-190\" y=\"-180\" font-size=\"12\">blue: Delta P &lt; 0, red: Delta P &gt; 0</text>\n");
  out.print("</svg>\n");
}

void write_slope_plot(const fs::path& file, const std::vector<int>& ns, const std::vector<double>& slopes,
                      double bound) {
  auto out = fmt::output_file(file.string());
  const double lo = std::min(*std::min_element(slopes.begin(), slopes.end()), bound) * 1.1;
  const double hi = 0.0;
  const auto x = [&](int n) { return 40.0 + 520.0 * (n - ns.front()) / std::max(1, ns.back() - ns.front()); };
  const auto y = [&](double s) { return 20.0 + 260.0 * (hi - s) / (hi - lo); };
  out.print("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"600\" height=\"300\">\n");
  out.print("<line x1=\"40\" y1=\"{:.3f}\" x2=\"560\" y2=\"{:.3f}\" stroke=\"#c53030\" stroke-dasharray=\"4 3\"/>\n",
            y(bound), y(bound));
  out.print("<line x1=\"40\" y1=\"{:.3f}\" x2=\"560\" y2=\"{:.3f}\" stroke=\"#999\"/>\n", y(0.0), y(0.0));
  std::string pts;
  for (std::size_t i = 0; i < ns.size(); ++i) pts += fmt::format("{:.3f},{:.3f} ", x(ns[i]), y(slopes[i]));
  out.print("<polyline points=\"{}\" fill=\"none\" stroke=\"#2b6cb0\"/>\n", pts);
  out.print("<text x=\"40\" y=\"14\" font-size=\"12\">slope_n against n; dashed: bound</text>\n");
  out.print("</svg>\n");
}

// --- attach helpers ------------------------------------------------------------------

hypersurface::GraphHypersurface graph_of(const HomogeneousPolynomial& p, const AttachBlock& a) {
  const bool poly = a.include_polynomial;
  const double coef = a.u_term == "none" ? 0.0 : a.u_coefficient;
  const bool abs2 = a.u_term == "abs2";
  auto eval = [p, poly, coef, abs2](Complex z, double u) {
    hypersurface::GraphJet j;
    const double g = abs2 ? std::norm(z) : z.real();
    const Complex g_z = abs2 ? std::conj(z) : Complex(0.5);
    const double g_zzbar = abs2 ? 1.0 : 0.0;
    j.rho = (poly ? p(z) : 0.0) + coef * u * g;
    j.rho_z = (poly ? p.dz(z) : Complex(0.0)) + coef * u * g_z;
    j.rho_u = coef * g;
    j.rho_zzbar = (poly ? p.dz_dzbar(z) : 0.0) + coef * u * g_zzbar;
    j.rho_zu = coef * g_z;
    j.rho_uu = 0.0;
    return j;
  };
  return hypersurface::GraphHypersurface(eval, {}, coef != 0.0);
}

}  // namespace

// --- classify ---------------------------------------------------------------------------

int cmd_classify(const ScenarioConfig& cfg, const RunOptions& opts) {
  const auto dir = prepare_dir(opts);
  Summary summary("classify", cfg);
  const auto p = polynomial_of(cfg);
  const std::optional<double> tol = cfg.classify ? cfg.classify->tolerance : std::nullopt;
  const auto map = hypersurface::sector_decomposition(p, tol);

  {
    auto out = fmt::output_file((dir / "sectors.csv").string());
    out.print("theta_lo,theta_hi,label\n");
    for (const auto& s : map.sectors) {
      out.print("{},{},{}\n", num(s.theta_lo), num(s.theta_hi), hypersurface::to_string(s.label));
    }
  }
  {
    auto out = fmt::output_file((dir / "rays.csv").string());
    out.print("theta\n");
    for (double r : map.flat_rays) out.print("{}\n", num(r));
  }

  double covered = 0.0;
  bool alternating = true;
  for (std::size_t i = 0; i < map.sectors.size(); ++i) {
    covered += map.sectors[i].width();
    const auto& next = map.sectors[(i + 1) % map.sectors.size()];
    if (map.sectors.size() > 1 && next.label == map.sectors[i].label) alternating = false;
  }
  summary.result("degree", fmt::format("{}", p.degree()));
  summary.result("flat_rays", fmt::format("{}", map.flat_rays.size()));
  summary.result("sectors", fmt::format("{}", map.sectors.size()));
  summary.audit("sectors_cover_circle", std::abs(covered - 2.0 * kPi) <= 1e-12);
  summary.result("labels_alternate", alternating ? "yes" : "no");

  if (opts.svg) write_sign_plot(dir / "classify.svg", hypersurface::angular_profile(p));
  summary.write(dir, summary.all_pass() ? "ok" : "audit-failure");
  return summary.all_pass() ? kOk : kAuditFailure;
}

// --- attach -----------------------------------------------------------------------------------

int cmd_attach(const ScenarioConfig& cfg, const RunOptions& opts) {
  if (!cfg.attach) throw ConfigError("attach command needs an 'attach' block", 0);
  const auto& a = *cfg.attach;
  const auto dir = prepare_dir(opts);
  Summary summary("attach", cfg);
  const auto p = polynomial_of(cfg);
  const RigidHypersurface rigid(p);
  const auto z = discs::DiscGenerator::from_power_series(cfg.grid, a.generator);

  std::optional<discs::AnalyticDisc> disc;
  double residual = 0.0;
  if (a.solver == "closed_form") {
    disc = discs::attach_disc(rigid, z, a.c);
    residual = discs::attachment_residual(*disc, rigid.as_graph());
    summary.result("solver", "closed_form");
  } else {
    const auto graph = graph_of(p, a);
    discs::BishopOptions bo;
    bo.tol = a.tol;
    bo.max_iter = a.max_iter;
    bo.damping = a.damping;
    try {
      auto sol = discs::solve_bishop(graph, z, a.c, bo);
      summary.result("solver", "bishop");
      summary.result("iterations", fmt::format("{}", sol.iterations));
      summary.result("final_damping", sol.final_damping);
      residual = discs::attachment_residual(sol.disc, graph);
      disc = std::move(sol.disc);
    } catch (const discs::SolverFailure& e) {
      summary.result("solver", "bishop");
      summary.result("iterations", fmt::format("{}", e.step_history.size()));
      summary.result("last_step", e.step_history.empty() ? 0.0 : e.step_history.back());
      summary.write(dir, fmt::format("error {}", e.name()));
      throw;
    }
  }

  {
    auto out = fmt::output_file((dir / "disc.csv").string());
    out.print("theta,re_z,im_z,u,v\n");
    const auto& zs = disc->z();
    const auto& ws = disc->w();
    for (std::size_t j = 0; j < zs.size(); ++j) {
      out.print("{},{},{},{},{}\n", num(zs.theta(j)), num(zs[j].real()), num(zs[j].imag()), num(ws[j].real()),
                num(ws[j].imag()));
    }
  }
  const auto [ez, ew] = discs::exit_vector(*disc);
  summary.result("residual", residual);
  summary.result("exit_vector_z", fmt::format("({}, {})", num(ez.real()), num(ez.imag())));
  summary.result("exit_vector_w", fmt::format("({}, {})", num(ew.real()), num(ew.imag())));
  summary.result("du_dtheta", discs::du_dtheta(*disc));
  summary.result("generator_negative_energy", z.negative_energy());
  summary.result("disc_negative_energy", disc->negative_energy());
  summary.audit("residual_below_1e-8", residual <= 1e-8);
  summary.audit("disc_analytic", disc->is_analytic());
  summary.write(dir, summary.all_pass() ? "ok" : "audit-failure");
  return summary.all_pass() ? kOk : kAuditFailure;
}

// --- family -------------------------------------------------------------------------------------

int cmd_family(const ScenarioConfig& cfg, const RunOptions& opts) {
  if (!cfg.family) throw ConfigError("family command needs a 'family' block", 0);
  const auto& f = *cfg.family;
  const auto dir = prepare_dir(opts);
  Summary summary("family", cfg);
  const auto p = polynomial_of(cfg);
  const RigidHypersurface m(p);

  families::EggFamily fam;
  try {
    const auto map = hypersurface::sector_decomposition(p);
    const auto sector = families::pseudoconvex_sector(map, static_cast<std::size_t>(f.sector), f.q_modulus);
    summary.result("sector", fmt::format("({}, {})", num(sector.theta_lo), num(sector.theta_hi)));
    families::EggOptions eo;
    eo.grid = cfg.grid;
    eo.t1 = f.t1;
    eo.t2 = f.t2;
    eo.p_radius = f.p_radius;
    eo.q_radius = f.q_radius;
    fam = families::make_egg_family(sector, f.n_max, f.beta, eo);
  } catch (const Error& e) {
    summary.write(dir, fmt::format("error {}", e.name()));
    throw;
  }

  const auto tau = families::make_perturbation(fam.p_region, fam.q_region, f.epsilon);
  const bool degenerate = tau.degenerate();
  std::vector<families::PerturbationTrace> traces;
  for (const auto& member : fam.members) traces.push_back(families::perturbation_slope(fam, tau, member.n));

  double max_slope = -std::numeric_limits<double>::infinity();
  double worst_gap = 0.0;
  double worst_pv = 0.0;
  bool chain = true;
  const double floor = tau.floor();
  for (const auto& tr : traces) {
    max_slope = std::max(max_slope, tr.slope);
    if (degenerate) continue;
    worst_gap = std::max(worst_gap, tr.route_gap());
    for (const auto& c : tr.pv_checks) worst_pv = std::max(worst_pv, std::abs(c.full - c.split));
    chain = chain && tr.left_integral >= (fam.t2 + kPi) * floor && tr.right_integral >= (kPi - fam.t1) * floor;
  }
  const double epsilon0 = degenerate ? 0.0 : -max_slope;

  // Translation diffs; n0 only exists for a positive slope floor.
  std::vector<double> diffs;
  std::optional<families::TranslationReport> report;
  bool no_index = false;
  if (epsilon0 > 0.0) {
    try {
      report = families::translation_experiment(m, fam, epsilon0);
    } catch (const families::NoQualifyingIndex& e) {
      report = e.report;
      no_index = true;
    }
    for (const auto& r : report->rows) diffs.push_back(r.diff);
  } else {
    for (const auto& member : fam.members) diffs.push_back(families::translation_diff(m, member.z, -member.z.at_one()));
  }

  bool rows_pass = true;
  {
    auto out = fmt::output_file((dir / "family.csv").string());
    out.print("n,abs_c_n,slope_n,bound,diff_n,pass\n");
    for (std::size_t i = 0; i < traces.size(); ++i) {
      const auto& tr = traces[i];
      const auto& member = fam.members[i];
      bool ok;
      std::string bound_cell;
      if (degenerate) {
        ok = tr.slope == 0.0;
      } else {
        double pv = 0.0;
        for (const auto& c : tr.pv_checks) pv = std::max(pv, std::abs(c.full - c.split));
        ok = tr.slope <= tr.bound && tr.bound < 0.0 && tr.route_gap() <= families::kRouteAgreement &&
             pv <= families::kPvSplitAgreement;
        bound_cell = num(tr.bound);
      }
      rows_pass = rows_pass && ok;
      out.print("{},{},{},{},{},{}\n", member.n, num(std::abs(member.z.at_one())), num(tr.slope), bound_cell,
                num(diffs[i]), ok ? "true" : "false");
    }
  }

  const auto exit = families::family_exit_slopes(m, fam, f.c);
  const auto pc = families::check_perturbed_pseudoconvexity(m, tau);

  summary.result("members", fmt::format("{}", fam.members.size()));
  summary.result("alpha_first", fam.members.front().alpha);
  summary.result("alpha_last", fam.members.back().alpha);
  summary.result("floor", floor);
  if (degenerate) {
    summary.note("degenerate perturbation: epsilon = 0, bound rows omitted");
  } else {
    summary.result("bound", traces.front().bound);
    summary.result("max_route_gap", worst_gap);
    summary.result("max_pv_split_gap", worst_pv);
  }
  summary.result("epsilon0", epsilon0);
  summary.result("exit_slope_min", *std::min_element(exit.begin(), exit.end()));
  summary.result("exit_slope_max", *std::max_element(exit.begin(), exit.end()));
  if (report) {
    summary.result("n0", report->n0 ? fmt::format("{}", *report->n0) : std::string("none"));
    summary.result("fitted_kc", report->fitted_kc);
    summary.result("max_ratio", report->max_ratio);
  }
  summary.result("pseudoconvexity_preserved", pc.preserved ? "yes" : "no");
  summary.result("pseudoconvexity_epsilon_threshold", pc.epsilon_threshold);

  summary.audit("slopes_below_bound", rows_pass);
  if (!degenerate) {
    summary.audit("route_agreement", worst_gap <= families::kRouteAgreement);
    summary.audit("pv_split", worst_pv <= families::kPvSplitAgreement);
    summary.audit("bound_chain", chain);
  }
  if (report) {
    summary.audit("n0_found", !no_index);
    summary.audit("diffs_monotone_after_3", report->diffs_decrease_after(3));
    summary.audit("linear_bound", report->linear_bound_holds());
  }

  if (opts.svg && !degenerate) {
    std::vector<int> ns;
    std::vector<double> slopes;
    for (const auto& tr : traces) {
      ns.push_back(tr.n);
      slopes.push_back(tr.slope);
    }
    write_slope_plot(dir / "family.svg", ns, slopes, traces.front().bound);
  }
  summary.write(dir, summary.all_pass() ? "ok" : "audit-failure");
  return summary.all_pass() ? kOk : kAuditFailure;
}

}  // namespace crdiscs::tool
