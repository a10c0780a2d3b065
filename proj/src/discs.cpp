#include "crdiscs/discs.hpp"

#include <algorithm>
#include <cmath>

namespace crdiscs::discs {
namespace {

using circle::FourierCoefficients;

double negative_energy_of(const BoundaryFunction& f) {
  return FourierCoefficients::of(f).negative_energy_fraction();
}

BoundaryFunction rho_along(const hypersurface::GraphHypersurface& m, const BoundaryFunction& z,
                           std::span<const double> u) {
  std::vector<double> out(z.size());
  for (std::size_t j = 0; j < z.size(); ++j) out[j] = m.rho(z[j], u[j]);
  return BoundaryFunction::from_real(out);
}

}  // namespace

// --- DiscGenerator ----------------------------------------------------------

DiscGenerator::DiscGenerator(BoundaryFunction z)
    : z_(std::move(z)), negative_energy_(negative_energy_of(z_)) {
  if (negative_energy_ > kGeneratorAnalyticityTol) {
    throw DomainError("DiscGenerator: boundary data does not extend analytically (negative "
                      "frequency energy " + std::to_string(negative_energy_) + ")");
  }
}

DiscGenerator DiscGenerator::from_map(std::size_t n, const std::function<Complex(Complex)>& map) {
  std::vector<Complex> z(n);
  for (std::size_t j = 0; j < n; ++j) z[j] = map(BoundaryFunction::grid_point(j, n));
  return unchecked(BoundaryFunction(std::move(z)));
}

DiscGenerator DiscGenerator::unchecked(BoundaryFunction z) {
  const double energy = negative_energy_of(z);
  return DiscGenerator(std::move(z), energy);
}

DiscGenerator DiscGenerator::from_power_series(std::size_t n,
                                               const std::vector<std::pair<int, Complex>>& terms) {
  for (const auto& [k, a] : terms) {
    if (k < 0) throw DomainError("DiscGenerator: power series exponents must be nonnegative");
    if (k >= static_cast<int>(n / 2)) throw DomainError("DiscGenerator: exponent not resolved by grid");
  }
  auto z = BoundaryFunction::sample(n, [&terms](double theta) {
    Complex s = 0.0;
    for (const auto& [k, a] : terms) s += a * std::polar(1.0, k * theta);
    return s;
  });
  return DiscGenerator(std::move(z));
}

// --- AnalyticDisc -------------------------------------------------------------

AnalyticDisc::AnalyticDisc(DiscGenerator z, BoundaryFunction w)
    : z_(std::move(z)), w_(std::move(w)), negative_energy_(negative_energy_of(w_)) {
  if (w_.size() != z_.size()) throw DomainError("AnalyticDisc: Z and W grids differ");
}

void BishopOptions::validate() const {
  if (!(tol > 0.0)) throw DomainError("BishopOptions: tol must be positive");
  if (max_iter < 1) throw DomainError("BishopOptions: max_iter must be at least 1");
  if (!(damping > 0.0 && damping <= 1.0)) throw DomainError("BishopOptions: damping must lie in (0,1]");
}

// --- operations ------------------------------------------------------------------

BoundaryFunction analytic_completion(const BoundaryFunction& v, double c) {
  if (!v.is_real()) throw DomainError("analytic_completion: V must be real");
  const std::size_t n = v.size();
  const int half = static_cast<int>(n / 2);
  auto vhat = FourierCoefficients::of(v);
  auto what = FourierCoefficients::of(BoundaryFunction::zeros(n));
  const Complex i(0.0, 1.0);
  what.at(0) = i * vhat.at(0);
  for (int k = 1; k < half; ++k) what.at(k) = 2.0 * i * vhat.at(k);
  // The Nyquist mode is +-N/2 at once on the grid; i * vhat * (-1)^j has
  // imaginary part equal to V's Nyquist content.
  what.at(-half) = i * vhat.at(-half);

  auto raw = what.to_samples();
  const double shift = c - raw[0].real();
  const auto values = v.real_values();
  std::vector<Complex> w(n);
  for (std::size_t j = 0; j < n; ++j) w[j] = Complex(raw[j].real() + shift, values[j]);
  w[0] = Complex(c, values[0]);
  return BoundaryFunction(std::move(w));
}

AnalyticDisc attach_disc(const hypersurface::RigidHypersurface& m, const DiscGenerator& z, double c) {
  const auto& zs = z.samples();
  std::vector<double> v(zs.size());
  for (std::size_t j = 0; j < zs.size(); ++j) v[j] = m.polynomial()(zs[j]);
  return AnalyticDisc(z, analytic_completion(BoundaryFunction::from_real(v), c));
}

BishopSolution solve_bishop(const hypersurface::GraphHypersurface& m, const DiscGenerator& z,
                            double c, const BishopOptions& opts) {
  opts.validate();
  const auto& zs = z.samples();
  const std::size_t n = zs.size();
  std::vector<double> u(n, c);
  std::vector<double> history;
  double damping = opts.damping;
  bool reduced = false;
  int non_decreasing = 0;
  int iterations = 0;
  bool converged = false;

  for (int it = 1; it <= opts.max_iter; ++it) {
    const auto rho = rho_along(m, zs, u);
    const auto update = modified_hilbert(rho).real_values();
    double step = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double target = -update[j] + c;
      const double next = (1.0 - damping) * u[j] + damping * target;
      step = std::max(step, std::abs(next - u[j]));
      u[j] = next;
    }
    if (!std::isfinite(step)) {
      history.push_back(step);
      throw NonContraction(BoundaryFunction::from_real(u), history);
    }
    history.push_back(step);
    iterations = it;
    if (step < opts.tol) {
      converged = true;
      break;
    }
    if (history.size() >= 2 && step >= history[history.size() - 2]) {
      if (!reduced) {
        damping *= 0.5;
        reduced = true;
      }
      if (++non_decreasing >= 5) throw NonContraction(BoundaryFunction::from_real(u), history);
    } else {
      non_decreasing = 0;
    }
  }
  if (!converged) throw NoConvergence(BoundaryFunction::from_real(u), history);

  const auto v = rho_along(m, zs, u).real_values();
  std::vector<Complex> w(n);
  for (std::size_t j = 0; j < n; ++j) w[j] = Complex(u[j], v[j]);
  AnalyticDisc disc(z, BoundaryFunction(std::move(w)));
  const double energy = disc.negative_energy();
  return BishopSolution{std::move(disc), iterations, std::move(history), damping, energy};
}

double attachment_residual(const AnalyticDisc& a, const hypersurface::GraphHypersurface& m) {
  const auto& z = a.z();
  const auto& w = a.w();
  double worst = 0.0;
  for (std::size_t j = 0; j < z.size(); ++j) {
    worst = std::max(worst, std::abs(w[j].imag() - m.rho(z[j], w[j].real())));
  }
  return worst;
}

std::pair<Complex, Complex> exit_vector(const AnalyticDisc& a) {
  const Complex i(0.0, 1.0);
  const auto dz = circle::spectral_derivative(a.z());
  const auto dw = circle::spectral_derivative(a.w());
  return {i * dz[0], i * dw[0]};
}

double du_dtheta(const AnalyticDisc& a) { return circle::spectral_derivative(a.u())[0].real(); }

}  // namespace crdiscs::discs
