#include "crdiscs/circle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fft.hpp"

namespace crdiscs::circle {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void require_real(const BoundaryFunction& u, const char* op) {
  if (!u.is_real()) throw DomainError(std::string(op) + ": input is not real-valued");
}

// Signed frequency of FFT storage slot idx.
int frequency_of(std::size_t idx, std::size_t n) {
  return idx < n / 2 ? static_cast<int>(idx) : static_cast<int>(idx) - static_cast<int>(n);
}

BoundaryFunction apply_multiplier(const BoundaryFunction& u, auto&& multiplier) {
  const std::size_t n = u.size();
  auto coeffs = detail::forward_dft(u.samples());
  for (std::size_t idx = 0; idx < n; ++idx) coeffs[idx] *= multiplier(frequency_of(idx, n));
  return BoundaryFunction(detail::inverse_dft(coeffs));
}

BoundaryFunction strip_imaginary(const BoundaryFunction& u) { return u.real_part(); }

}  // namespace

// --- BoundaryFunction ------------------------------------------------------

BoundaryFunction::BoundaryFunction(std::vector<Complex> samples) : samples_(std::move(samples)) {
  if (samples_.size() < 16 || !is_power_of_two(samples_.size())) {
    throw DomainError("BoundaryFunction: grid size must be a power of two >= 16, got " +
                      std::to_string(samples_.size()));
  }
}

BoundaryFunction BoundaryFunction::from_real(std::span<const double> values) {
  return BoundaryFunction(std::vector<Complex>(values.begin(), values.end()));
}

BoundaryFunction BoundaryFunction::zeros(std::size_t n) {
  return BoundaryFunction(std::vector<Complex>(n));
}

BoundaryFunction BoundaryFunction::constant(std::size_t n, Complex value) {
  return BoundaryFunction(std::vector<Complex>(n, value));
}

double BoundaryFunction::grid_angle(std::size_t j, std::size_t n) {
  return kTwoPi * static_cast<double>(j) / static_cast<double>(n);
}

Complex BoundaryFunction::grid_point(std::size_t j, std::size_t n) {
  j %= n;
  if (n % 4 == 0) {
    if (j == 0) return {1.0, 0.0};
    if (j == n / 4) return {0.0, 1.0};
    if (j == n / 2) return {-1.0, 0.0};
    if (j == 3 * n / 4) return {0.0, -1.0};
  }
  return std::polar(1.0, grid_angle(j, n));
}

double BoundaryFunction::spacing() const { return kTwoPi / static_cast<double>(size()); }

bool BoundaryFunction::is_real(double tol) const {
  return std::all_of(samples_.begin(), samples_.end(),
                     [tol](const Complex& v) { return std::abs(v.imag()) <= tol; });
}

std::vector<double> BoundaryFunction::real_values() const {
  std::vector<double> out(size());
  std::transform(samples_.begin(), samples_.end(), out.begin(),
                 [](const Complex& v) { return v.real(); });
  return out;
}

std::vector<double> BoundaryFunction::imag_values() const {
  std::vector<double> out(size());
  std::transform(samples_.begin(), samples_.end(), out.begin(),
                 [](const Complex& v) { return v.imag(); });
  return out;
}

BoundaryFunction BoundaryFunction::real_part() const {
  auto values = real_values();
  return from_real(values);
}

BoundaryFunction BoundaryFunction::imag_part() const {
  auto values = imag_values();
  return from_real(values);
}

double BoundaryFunction::sup_norm() const {
  double m = 0.0;
  for (const auto& v : samples_) m = std::max(m, std::abs(v));
  return m;
}

Complex BoundaryFunction::mean() const {
  Complex s = 0.0;
  for (const auto& v : samples_) s += v;
  return s / static_cast<double>(size());
}

BoundaryFunction& BoundaryFunction::operator+=(const BoundaryFunction& other) {
  if (other.size() != size()) throw DomainError("BoundaryFunction: grid size mismatch");
  for (std::size_t j = 0; j < size(); ++j) samples_[j] += other.samples_[j];
  return *this;
}

BoundaryFunction& BoundaryFunction::operator-=(const BoundaryFunction& other) {
  if (other.size() != size()) throw DomainError("BoundaryFunction: grid size mismatch");
  for (std::size_t j = 0; j < size(); ++j) samples_[j] -= other.samples_[j];
  return *this;
}

BoundaryFunction& BoundaryFunction::operator*=(Complex scale) {
  for (auto& v : samples_) v *= scale;
  return *this;
}

// --- FourierCoefficients ---------------------------------------------------

FourierCoefficients FourierCoefficients::of(const BoundaryFunction& u) {
  return FourierCoefficients(detail::forward_dft(u.samples()));
}

Complex FourierCoefficients::at(int frequency) const {
  const int n = static_cast<int>(coeffs_.size());
  if (frequency < -n / 2 || frequency >= n / 2) throw DomainError("frequency out of range");
  return coeffs_[static_cast<std::size_t>(frequency < 0 ? frequency + n : frequency)];
}

Complex& FourierCoefficients::at(int frequency) {
  const int n = static_cast<int>(coeffs_.size());
  if (frequency < -n / 2 || frequency >= n / 2) throw DomainError("frequency out of range");
  return coeffs_[static_cast<std::size_t>(frequency < 0 ? frequency + n : frequency)];
}

BoundaryFunction FourierCoefficients::to_samples() const {
  return BoundaryFunction(detail::inverse_dft(coeffs_));
}

double FourierCoefficients::negative_energy_fraction() const {
  const std::size_t n = coeffs_.size();
  double total = 0.0;
  double negative = 0.0;
  for (std::size_t idx = 0; idx < n; ++idx) {
    const double e = std::norm(coeffs_[idx]);
    total += e;
    if (idx > n / 2) negative += e;
  }
  return total > 0.0 ? negative / total : 0.0;
}

HolderIndex::HolderIndex(int k_, double alpha_) : k(k_), alpha(alpha_) {
  if (k < 0) throw DomainError("HolderIndex: k must be nonnegative");
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("HolderIndex: alpha must lie in (0,1)");
}

// --- operators --------------------------------------------------------------

double hilbert_kernel(double r, double t) {
  if (!(r >= 0.0 && r < 1.0)) throw DomainError("hilbert_kernel: r must lie in [0,1)");
  return 2.0 * r * std::sin(t) / (1.0 - 2.0 * r * std::cos(t) + r * r);
}

BoundaryFunction hilbert_transform(const BoundaryFunction& u) {
  require_real(u, "hilbert_transform");
  const int nyquist = -static_cast<int>(u.size() / 2);
  auto out = apply_multiplier(u, [nyquist](int n) -> Complex {
    if (n == 0 || n == nyquist) return 0.0;
    return n > 0 ? Complex(0.0, -1.0) : Complex(0.0, 1.0);
  });
  return strip_imaginary(out);
}

double pv_hilbert_at(const BoundaryFunction& u, std::size_t i) {
  const std::size_t n = u.size();
  double sum = 0.0;
  // Pair the offsets j and N - j: cot is odd, so each pair contributes
  // (u(theta_i - t_j) - u(theta_i + t_j)) cot(t_j / 2).
  for (std::size_t j = 1; j < n / 2; j += 2) {
    const double t = BoundaryFunction::grid_angle(j, n);
    const double minus = u[(i + n - j) % n].real();
    const double plus = u[(i + j) % n].real();
    sum += (minus - plus) / std::tan(0.5 * t);
  }
  return 2.0 * sum / static_cast<double>(n);
}

BoundaryFunction pv_hilbert(const BoundaryFunction& u) {
  require_real(u, "pv_hilbert");
  const std::size_t n = u.size();
  std::vector<double> cot;
  for (std::size_t j = 1; j < n / 2; j += 2) cot.push_back(1.0 / std::tan(0.5 * BoundaryFunction::grid_angle(j, n)));
  const auto v = u.real_values();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t j = 1, c = 0; j < n / 2; j += 2, ++c) sum += (v[(i + n - j) % n] - v[(i + j) % n]) * cot[c];
    out[i] = 2.0 * sum / static_cast<double>(n);
  }
  return BoundaryFunction::from_real(out);
}

BoundaryFunction modified_hilbert(const BoundaryFunction& u) {
  auto t = hilbert_transform(u).real_values();
  const double at_one = t.front();
  for (auto& v : t) v -= at_one;
  t.front() = 0.0;
  return BoundaryFunction::from_real(t);
}

double poisson_extend(const BoundaryFunction& u, double r, double theta) {
  if (!(r >= 0.0 && r < 1.0)) throw DomainError("poisson_extend: r must lie in [0,1)");
  require_real(u, "poisson_extend");
  const auto coeffs = FourierCoefficients::of(u);
  const int half = static_cast<int>(u.size() / 2);
  double value = coeffs.at(0).real();
  double rn = 1.0;
  for (int n = 1; n < half; ++n) {
    rn *= r;
    if (rn == 0.0) break;
    // c_{-n} = conj(c_n) for real data.
    value += 2.0 * rn * (coeffs.at(n) * std::polar(1.0, n * theta)).real();
  }
  rn *= r;
  value += rn * (coeffs.at(-half) * std::cos(half * theta)).real();
  return value;
}

BoundaryFunction spectral_derivative(const BoundaryFunction& u) {
  const int nyquist = -static_cast<int>(u.size() / 2);
  auto out = apply_multiplier(u, [nyquist](int n) -> Complex {
    if (n == nyquist) return 0.0;
    return Complex(0.0, static_cast<double>(n));
  });
  return u.is_real() ? strip_imaginary(out) : out;
}

BoundaryFunction hilbert_derivative(const BoundaryFunction& u) {
  require_real(u, "hilbert_derivative");
  auto out = apply_multiplier(u, [](int n) -> Complex { return std::abs(n); });
  return strip_imaginary(out);
}

double hilbert_derivative_at_one(const BoundaryFunction& u) {
  require_real(u, "hilbert_derivative_at_one");
  const auto coeffs = detail::forward_dft(u.samples());
  const std::size_t n = u.size();
  double sum = 0.0;
  for (std::size_t idx = 1; idx < n; ++idx) {
    sum += std::abs(frequency_of(idx, n)) * coeffs[idx].real();
  }
  return sum;
}

double holder_seminorm(const BoundaryFunction& u, double alpha) {
  const std::size_t n = u.size();
  double best = 0.0;
  // The quotient depends only on the offset d = j - i; the circle distance
  // for offset d is min(d, N - d) * h.
  std::vector<double> weight(n / 2 + 1);
  for (std::size_t d = 1; d <= n / 2; ++d) {
    weight[d] = std::pow(BoundaryFunction::grid_angle(d, n), -alpha);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t d = 1; d <= n / 2; ++d) {
      const double diff = std::abs(u[(i + d) % n] - u[i]);
      best = std::max(best, diff * weight[d]);
    }
  }
  return best;
}

double holder_norm(const BoundaryFunction& u, const HolderIndex& idx) {
  double total = 0.0;
  BoundaryFunction derivative = u;
  for (int order = 0; order <= idx.k; ++order) {
    if (order > 0) derivative = spectral_derivative(derivative);
    total += derivative.sup_norm();
  }
  return total + holder_seminorm(derivative, idx.alpha);
}

Complex interpolate(const FourierCoefficients& coeffs, double phi) {
  const int half = static_cast<int>(coeffs.size() / 2);
  Complex value = coeffs.at(0);
  const Complex step = std::polar(1.0, phi);
  Complex rot = 1.0;
  for (int n = 1; n < half; ++n) {
    rot *= step;
    value += coeffs.at(n) * rot + coeffs.at(-n) * std::conj(rot);
  }
  // Split the Nyquist bin evenly between +N/2 and -N/2.
  value += coeffs.at(-half) * std::cos(half * phi);
  return value;
}

}  // namespace crdiscs::circle
