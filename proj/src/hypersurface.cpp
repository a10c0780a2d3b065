#include "crdiscs/hypersurface.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <utility>

namespace crdiscs::hypersurface {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kRootTol = 1e-10;

std::vector<Complex> powers(Complex z, int n) {
  std::vector<Complex> out(static_cast<std::size_t>(std::max(n, 0)) + 1, Complex(1.0));
  for (int i = 1; i <= n; ++i) out[static_cast<std::size_t>(i)] = out[static_cast<std::size_t>(i - 1)] * z;
  return out;
}

double wrap_angle(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  return t;
}

// Bisection for a sign change of f on [a, b].
template <class F>
double bisect(F&& f, double a, double b) {
  double fa = f(a);
  for (int it = 0; it < 200 && b - a > kRootTol; ++it) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if (fm == 0.0) return m;
    if ((fm < 0.0) == (fa < 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

SectorLabel label_for(double value, double tol) {
  if (value < -tol) return SectorLabel::Pseudoconvex;
  if (value > tol) return SectorLabel::Pseudoconcave;
  return SectorLabel::Flat;
}

}  // namespace

// --- HomogeneousPolynomial -------------------------------------------------

HomogeneousPolynomial HomogeneousPolynomial::from_records(
    std::span<const CoefficientRecord> records) {
  if (records.empty()) throw InvalidPolynomial("empty polynomial");
  const int degree = records.front().j + records.front().k;
  std::map<std::pair<int, int>, Complex> given;
  for (const auto& rec : records) {
    if (rec.j < 0 || rec.k < 0) throw InvalidPolynomial("negative exponent in coefficient record");
    if (rec.j + rec.k != degree) {
      throw InvalidPolynomial("mixed degrees: expected j + k = " + std::to_string(degree) +
                              ", got (" + std::to_string(rec.j) + ", " + std::to_string(rec.k) +
                              ")");
    }
    const Complex a(rec.re, rec.im);
    auto key = std::make_pair(rec.j, rec.k);
    if (auto it = given.find(key); it != given.end() && std::abs(it->second - a) > 1e-12) {
      throw InvalidPolynomial("conflicting duplicate records for (" + std::to_string(rec.j) +
                              ", " + std::to_string(rec.k) + ")");
    }
    given[key] = a;
  }
  if (degree < 1) throw InvalidPolynomial("degree must be positive");

  std::vector<Complex> coeffs(static_cast<std::size_t>(degree) + 1);
  for (const auto& [key, a] : given) {
    const auto [j, k] = key;
    if (j == k && std::abs(a.imag()) > 1e-12) {
      throw InvalidPolynomial("diagonal coefficient (" + std::to_string(j) + ", " +
                              std::to_string(k) + ") must be real");
    }
    if (auto partner = given.find({k, j});
        partner != given.end() && std::abs(partner->second - std::conj(a)) > 1e-12) {
      throw InvalidPolynomial("records (" + std::to_string(j) + ", " + std::to_string(k) +
                              ") and (" + std::to_string(k) + ", " + std::to_string(j) +
                              ") are not conjugate");
    }
    coeffs[static_cast<std::size_t>(j)] = j == k ? Complex(a.real(), 0.0) : a;
    coeffs[static_cast<std::size_t>(k)] = j == k ? Complex(a.real(), 0.0) : std::conj(a);
  }
  return HomogeneousPolynomial(degree, std::move(coeffs));
}

Complex HomogeneousPolynomial::coefficient(int j) const {
  if (j < 0 || j > degree_) return 0.0;
  return coeffs_[static_cast<std::size_t>(j)];
}

std::vector<CoefficientRecord> HomogeneousPolynomial::records() const {
  std::vector<CoefficientRecord> out;
  for (int j = degree_; j >= 0; --j) {
    const Complex a = coeffs_[static_cast<std::size_t>(j)];
    if (a != Complex(0.0)) out.push_back({j, degree_ - j, a.real(), a.imag()});
  }
  return out;
}

double HomogeneousPolynomial::operator()(Complex z) const {
  const auto zp = powers(z, degree_);
  const auto zbp = powers(std::conj(z), degree_);
  Complex sum = 0.0;
  double scale = 0.0;
  for (int j = 0; j <= degree_; ++j) {
    const Complex term = coeffs_[static_cast<std::size_t>(j)] * zp[static_cast<std::size_t>(j)] *
                         zbp[static_cast<std::size_t>(degree_ - j)];
    sum += term;
    scale += std::abs(term);
  }
  if (std::abs(sum.imag()) > 1e-12 * std::max(1.0, scale)) {
    throw DomainError("HomogeneousPolynomial: evaluation is not real");
  }
  return sum.real();
}

Complex HomogeneousPolynomial::dz(Complex z) const {
  const auto zp = powers(z, degree_);
  const auto zbp = powers(std::conj(z), degree_);
  Complex sum = 0.0;
  for (int j = 1; j <= degree_; ++j) {
    sum += static_cast<double>(j) * coeffs_[static_cast<std::size_t>(j)] *
           zp[static_cast<std::size_t>(j - 1)] * zbp[static_cast<std::size_t>(degree_ - j)];
  }
  return sum;
}

double HomogeneousPolynomial::dz_dzbar(Complex z) const {
  const auto zp = powers(z, degree_);
  const auto zbp = powers(std::conj(z), degree_);
  Complex sum = 0.0;
  for (int j = 1; j < degree_; ++j) {
    const int k = degree_ - j;
    sum += static_cast<double>(j * k) * coeffs_[static_cast<std::size_t>(j)] *
           zp[static_cast<std::size_t>(j - 1)] * zbp[static_cast<std::size_t>(k - 1)];
  }
  return sum.real();
}

double eval_poly(const HomogeneousPolynomial& p, Complex z) { return p(z); }

double laplacian(const HomogeneousPolynomial& p, Complex z) { return 4.0 * p.dz_dzbar(z); }

// --- TrigPolynomial --------------------------------------------------------

TrigPolynomial::TrigPolynomial(int degree)
    : degree_(std::max(degree, 0)),
      coeffs_(static_cast<std::size_t>(2 * std::max(degree, 0) + 1), Complex(0.0)) {}

Complex TrigPolynomial::coefficient(int m) const {
  if (m < -degree_ || m > degree_) return 0.0;
  return coeffs_[static_cast<std::size_t>(m + degree_)];
}

void TrigPolynomial::set_coefficient(int m, Complex c) {
  if (m < -degree_ || m > degree_) throw DomainError("TrigPolynomial: frequency out of range");
  coeffs_[static_cast<std::size_t>(m + degree_)] = c;
}

double TrigPolynomial::operator()(double theta) const {
  Complex sum = 0.0;
  for (int m = -degree_; m <= degree_; ++m) sum += coefficient(m) * std::polar(1.0, m * theta);
  return sum.real();
}

double TrigPolynomial::derivative(double theta) const {
  Complex sum = 0.0;
  for (int m = -degree_; m <= degree_; ++m) {
    sum += Complex(0.0, m) * coefficient(m) * std::polar(1.0, m * theta);
  }
  return sum.real();
}

double TrigPolynomial::max_coefficient() const {
  double m = 0.0;
  for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

bool TrigPolynomial::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Complex& c) { return c == 0.0; });
}

TrigPolynomial angular_profile(const HomogeneousPolynomial& p) {
  const int d = p.degree();
  if (d < 2) return TrigPolynomial(0);
  TrigPolynomial q(d - 2);
  // z^{j-1} zbar^{k-1} = r^{d-2} e^{i (j-k) theta}.
  for (int j = 1; j < d; ++j) {
    const int k = d - j;
    q.set_coefficient(j - k, 4.0 * static_cast<double>(j * k) * p.coefficient(j));
  }
  return q;
}

// --- sectors -----------------------------------------------------------------

std::string to_string(SectorLabel label) {
  switch (label) {
    case SectorLabel::Pseudoconvex: return "Pseudoconvex";
    case SectorLabel::Pseudoconcave: return "Pseudoconcave";
    case SectorLabel::Flat: return "Flat";
  }
  return "Flat";
}

const Sector* SectorMap::sector_containing(double theta) const {
  const double t = wrap_angle(theta);
  for (const auto& s : sectors) {
    if ((t > s.theta_lo && t < s.theta_hi) || (t + kTwoPi > s.theta_lo && t + kTwoPi < s.theta_hi)) {
      return &s;
    }
  }
  return nullptr;
}

SectorLabel SectorMap::label_at(double theta, double ray_tol) const {
  const double t = wrap_angle(theta);
  for (double ray : flat_rays) {
    const double d = std::abs(t - ray);
    if (std::min(d, kTwoPi - d) <= ray_tol) return SectorLabel::Flat;
  }
  const Sector* s = sector_containing(t);
  return s ? s->label : SectorLabel::Flat;
}

SectorMap sector_decomposition(const HomogeneousPolynomial& p, std::optional<double> tol) {
  const TrigPolynomial q = angular_profile(p);
  SectorMap map;
  if (q.is_zero()) {
    map.sectors.push_back({0.0, kTwoPi, SectorLabel::Flat});
    return map;
  }
  const double eps = tol.value_or(1e-9 * q.max_coefficient());
  if (!(eps > 0.0)) throw DomainError("sector_decomposition: tolerance must be positive");

  const int n = kProfileSamples;
  std::vector<double> theta(n), value(n);
  for (int i = 0; i < n; ++i) {
    theta[i] = kTwoPi * i / n;
    value[i] = q(theta[i]);
  }
  if (std::all_of(value.begin(), value.end(), [eps](double v) { return std::abs(v) <= eps; })) {
    std::vector<double> offending;
    for (int i = 0; i < n; ++i) {
      if (value[i] != 0.0) offending.push_back(theta[i]);
    }
    throw AmbiguousProfile("angular profile lies within the flat tolerance but is not zero",
                           std::move(offending));
  }

  std::vector<double> rays;
  auto qf = [&q](double t) { return q(t); };
  auto dqf = [&q](double t) { return q.derivative(t); };
  for (int i = 0; i < n; ++i) {
    const int next = (i + 1) % n;
    const double a = theta[i];
    const double b = next == 0 ? kTwoPi : theta[next];
    if (value[i] == 0.0) {
      rays.push_back(a);
    } else if (value[next] != 0.0 && (value[i] < 0.0) != (value[next] < 0.0)) {
      rays.push_back(bisect(qf, a, b));
    }
    // Tangential zero: |q| dips below tol at a local minimum of |q| without a
    // sign change; locate it as the sign change of q'.
    const int prev = (i + n - 1) % n;
    const double av = std::abs(value[i]);
    if (value[i] != 0.0 && av <= eps && av <= std::abs(value[prev]) &&
        av <= std::abs(value[next]) && (value[prev] < 0.0) == (value[i] < 0.0) &&
        (value[next] < 0.0) == (value[i] < 0.0)) {
      const double lo = i == 0 ? -kTwoPi / n : theta[prev];
      const double hi = theta[i] + kTwoPi / n;
      const double dlo = dqf(lo);
      const double dhi = dqf(hi);
      rays.push_back((dlo < 0.0) != (dhi < 0.0) ? bisect(dqf, lo, hi) : theta[i]);
    }
  }
  for (auto& r : rays) r = wrap_angle(r);
  std::sort(rays.begin(), rays.end());
  std::vector<double> unique;
  for (double r : rays) {
    if (unique.empty() || r - unique.back() > 1e-8) unique.push_back(r);
  }
  if (unique.size() > 1 && unique.front() + kTwoPi - unique.back() <= 1e-8) unique.pop_back();
  map.flat_rays = unique;

  if (unique.empty()) {
    map.sectors.push_back({0.0, kTwoPi, label_for(q(std::numbers::pi), eps)});
    return map;
  }
  for (std::size_t i = 0; i < unique.size(); ++i) {
    const double lo = unique[i];
    const double hi = i + 1 < unique.size() ? unique[i + 1] : unique.front() + kTwoPi;
    map.sectors.push_back({lo, hi, label_for(q(0.5 * (lo + hi)), eps)});
  }
  return map;
}

// --- classification and Levi form -----------------------------------------

std::string to_string(PointClass cls) {
  switch (cls) {
    case PointClass::StronglyPseudoconvex: return "StronglyPseudoconvex";
    case PointClass::StronglyPseudoconcave: return "StronglyPseudoconcave";
    case PointClass::LeviFlat: return "LeviFlat";
  }
  return "LeviFlat";
}

Side side_of(PointClass cls, double signed_height) {
  const bool above = signed_height > 0.0;
  if (cls == PointClass::StronglyPseudoconcave) {
    return above ? Side::PseudoconcaveSide : Side::PseudoconvexSide;
  }
  return above ? Side::PseudoconvexSide : Side::PseudoconcaveSide;
}

PointClass classify_point(const RigidHypersurface& m, Complex z, double tol) {
  if (!(tol > 0.0)) throw DomainError("classify_point: tolerance must be positive");
  const double lap = laplacian(m.polynomial(), z);
  if (lap < -tol) return PointClass::StronglyPseudoconvex;
  if (lap > tol) return PointClass::StronglyPseudoconcave;
  return PointClass::LeviFlat;
}

double levi_form(const DefiningFunction& r, Complex z, Complex w) {
  const DefiningJet jet = r(z, w);
  if (std::abs(jet.value) > 1e-8) {
    throw PreconditionError("levi_form: point is not on the hypersurface");
  }
  if (std::norm(jet.r_z) + std::norm(jet.r_w) <= 1e-24) {
    throw DegeneratePoint("levi_form: defining function has vanishing gradient");
  }
  return jet.r_zzbar * std::norm(jet.r_w) -
         2.0 * (jet.r_zwbar * std::conj(jet.r_z) * jet.r_w).real() +
         jet.r_wwbar * std::norm(jet.r_z);
}

// --- graph hypersurfaces -----------------------------------------------------

GraphHypersurface::GraphHypersurface(GraphEvaluator evaluator, ProbeOptions probes,
                                     bool depends_on_u)
    : evaluator_(std::move(evaluator)), depends_on_u_(depends_on_u) {
  std::mt19937_64 rng(probes.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const double h = 1e-5;
  auto close = [&](Complex got, Complex want, const char* what) {
    const double scale = std::max(1.0, std::abs(want));
    if (std::abs(got - want) > probes.tolerance * scale) {
      throw InconsistentDerivatives(std::string("GraphHypersurface: supplied ") + what +
                                    " disagrees with finite differences");
    }
  };
  for (int i = 0; i < probes.count; ++i) {
    const Complex z(probes.radius * unit(rng), probes.radius * unit(rng));
    const double u = probes.radius * unit(rng);
    const GraphJet j = evaluator_(z, u);
    const auto at = [&](Complex dz, double du) { return evaluator_(z + dz, u + du); };
    const GraphJet xp = at(h, 0.0), xm = at(-h, 0.0);
    const GraphJet yp = at(Complex(0.0, h), 0.0), ym = at(Complex(0.0, -h), 0.0);
    const GraphJet up = at(0.0, h), um = at(0.0, -h);

    const double rho_x = (xp.rho - xm.rho) / (2 * h);
    const double rho_y = (yp.rho - ym.rho) / (2 * h);
    close(j.rho_z, 0.5 * Complex(rho_x, -rho_y), "rho_z");
    close(j.rho_u, (up.rho - um.rho) / (2 * h), "rho_u");
    // d/dzbar = (d/dx + i d/dy) / 2 applied to rho_z.
    const Complex rz_x = (xp.rho_z - xm.rho_z) / (2 * h);
    const Complex rz_y = (yp.rho_z - ym.rho_z) / (2 * h);
    close(j.rho_zzbar, 0.5 * (rz_x + Complex(0.0, 1.0) * rz_y), "rho_zzbar");
    close(j.rho_zu, (up.rho_z - um.rho_z) / (2 * h), "rho_zu");
    close(j.rho_uu, (up.rho_u - um.rho_u) / (2 * h), "rho_uu");
  }
}

DefiningJet GraphHypersurface::defining_jet(Complex z, Complex w) const {
  const GraphJet j = evaluator_(z, w.real());
  DefiningJet out;
  out.value = w.imag() - j.rho;
  out.r_z = -j.rho_z;
  out.r_w = -0.5 * Complex(j.rho_u, 1.0);
  out.r_zzbar = -j.rho_zzbar;
  out.r_wwbar = -0.25 * j.rho_uu;
  out.r_zwbar = -0.5 * j.rho_zu;
  return out;
}

DefiningFunction GraphHypersurface::defining_function() const {
  return [self = *this](Complex z, Complex w) { return self.defining_jet(z, w); };
}

GraphHypersurface RigidHypersurface::as_graph() const {
  auto p = p_;
  return GraphHypersurface(
      [p](Complex z, double) {
        GraphJet j;
        j.rho = p(z);
        j.rho_z = p.dz(z);
        j.rho_zzbar = p.dz_dzbar(z);
        return j;
      },
      ProbeOptions{}, false);
}

}  // namespace crdiscs::hypersurface
