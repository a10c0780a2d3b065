#pragma once

// Functions on the unit circle sampled on a uniform grid, with the
// Fourier-side operators used throughout the library: classical and
// modified Hilbert transforms, a principal-value quadrature oracle,
// Poisson extension, spectral differentiation and discrete Hoelder norms.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "crdiscs/error.hpp"

namespace crdiscs::circle {

using Complex = std::complex<double>;

inline constexpr std::size_t kDefaultGrid = 1024;
inline constexpr double kRealTolerance = 1e-12;

/// Samples of a function on the unit circle at theta_j = 2*pi*j/N.
///
/// N must be a power of two with N >= 16. Sample 0 is the value at the
/// point 1 of the circle.
class BoundaryFunction {
 public:
  explicit BoundaryFunction(std::vector<Complex> samples);

  static BoundaryFunction from_real(std::span<const double> values);

  /// Samples f(theta_j) for a callable returning double or complex.
  template <class F>
  static BoundaryFunction sample(std::size_t n, F&& f) {
    std::vector<Complex> values(n);
    for (std::size_t j = 0; j < n; ++j) values[j] = Complex(f(grid_angle(j, n)));
    return BoundaryFunction(std::move(values));
  }

  static BoundaryFunction zeros(std::size_t n);
  static BoundaryFunction constant(std::size_t n, Complex value);

  static double grid_angle(std::size_t j, std::size_t n);
  /// e^{i theta_j}, exact at 1, i, -1, -i.
  static Complex grid_point(std::size_t j, std::size_t n);

  std::size_t size() const noexcept { return samples_.size(); }
  double theta(std::size_t j) const { return grid_angle(j, samples_.size()); }
  double spacing() const;

  const Complex& operator[](std::size_t j) const { return samples_[j]; }
  std::span<const Complex> samples() const noexcept { return samples_; }

  /// Value at the point 1 of the circle (sample 0).
  Complex at_one() const { return samples_.front(); }

  bool is_real(double tol = kRealTolerance) const;
  std::vector<double> real_values() const;
  std::vector<double> imag_values() const;
  BoundaryFunction real_part() const;
  BoundaryFunction imag_part() const;

  double sup_norm() const;
  Complex mean() const;

  BoundaryFunction& operator+=(const BoundaryFunction& other);
  BoundaryFunction& operator-=(const BoundaryFunction& other);
  BoundaryFunction& operator*=(Complex scale);

  friend BoundaryFunction operator+(BoundaryFunction a, const BoundaryFunction& b) {
    return a += b;
  }
  friend BoundaryFunction operator-(BoundaryFunction a, const BoundaryFunction& b) {
    return a -= b;
  }
  friend BoundaryFunction operator*(Complex s, BoundaryFunction a) { return a *= s; }
  friend BoundaryFunction operator*(BoundaryFunction a, Complex s) { return a *= s; }

 private:
  std::vector<Complex> samples_;
};

/// Discrete Fourier coefficients c_n, n in {-N/2, ..., N/2 - 1}, of a
/// BoundaryFunction, normalized so that u(theta_j) = sum_n c_n e^{i n theta_j}.
class FourierCoefficients {
 public:
  static FourierCoefficients of(const BoundaryFunction& u);

  std::size_t size() const noexcept { return coeffs_.size(); }
  int min_frequency() const { return -static_cast<int>(coeffs_.size() / 2); }
  int max_frequency() const { return static_cast<int>(coeffs_.size() / 2) - 1; }

  Complex at(int frequency) const;
  Complex& at(int frequency);

  /// Coefficients in FFT storage order.
  std::span<const Complex> raw() const noexcept { return coeffs_; }

  BoundaryFunction to_samples() const;

  /// Energy in frequencies -N/2 < n < 0 relative to the total energy. The
  /// Nyquist bin is excluded: on the grid it cannot be told apart from +N/2.
  double negative_energy_fraction() const;

 private:
  explicit FourierCoefficients(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs)) {}
  std::vector<Complex> coeffs_;
};

struct HolderIndex {
  int k = 0;
  double alpha = 0.5;

  HolderIndex(int k_, double alpha_);
};

/// 2 r sin t / (1 - 2 r cos t + r^2); throws DomainError unless 0 <= r < 1.
double hilbert_kernel(double r, double t);

/// Conjugate function: Fourier multiplier -i sgn(n), zero at n = 0 and at
/// the Nyquist bin. Input must be real.
BoundaryFunction hilbert_transform(const BoundaryFunction& u);

/// Principal-value quadrature of (1/2pi) p.v. int u(theta - t) cot(t/2) dt.
///
/// Trapezoid rule on the symmetric grid of odd offsets t = theta_j, j odd;
/// the singular node t = 0 never appears and the odd kernel cancels
/// pairwise. Computed by direct summation, O(N^2), independent of the FFT.
BoundaryFunction pv_hilbert(const BoundaryFunction& u);

/// Single-node version of pv_hilbert at theta_i.
double pv_hilbert_at(const BoundaryFunction& u, std::size_t i);

/// T u - T u(1); exactly zero at index 0.
BoundaryFunction modified_hilbert(const BoundaryFunction& u);

/// Poisson integral of real u at r e^{i theta}, summed spectrally.
double poisson_extend(const BoundaryFunction& u, double r, double theta);

/// d/dtheta via the multiplier i n (Nyquist bin dropped).
BoundaryFunction spectral_derivative(const BoundaryFunction& u);

/// d/dtheta of the Hilbert transform as a single multiplier |n|.
///
/// Unlike spectral_derivative(hilbert_transform(u)), the Nyquist bin is
/// kept: the real mode cos(N theta / 2) has conjugate sin(N theta / 2),
/// which vanishes on the grid while its derivative does not. Keeping it makes
/// the grid operator converge for data with corner-type singularities.
BoundaryFunction hilbert_derivative(const BoundaryFunction& u);

/// Value of hilbert_derivative(u) at theta = 0, without the inverse FFT.
double hilbert_derivative_at_one(const BoundaryFunction& u);

/// Discrete C^{k,alpha} norm: sup norms of the spectral derivatives of
/// order 0..k plus the grid alpha-Hoelder seminorm of the k-th derivative
/// (circle distance).
double holder_norm(const BoundaryFunction& u, const HolderIndex& idx);

/// Grid alpha-Hoelder seminorm of the samples themselves, O(N^2).
double holder_seminorm(const BoundaryFunction& u, double alpha);

/// Value of the trigonometric interpolant of u at e^{i phi}.
Complex interpolate(const FourierCoefficients& coeffs, double phi);

}  // namespace crdiscs::circle
