#pragma once

#include <complex>
#include <span>
#include <vector>

namespace crdiscs::detail {

// Normalized forward DFT: c_n = (1/N) sum_j x_j e^{-2 pi i n j / N},
// returned in FFT order (index n holds frequency n for n < N/2 and
// n - N otherwise).
std::vector<std::complex<double>> forward_dft(std::span<const std::complex<double>> x);

// Inverse of forward_dft: x_j = sum_n c_n e^{2 pi i n j / N}.
std::vector<std::complex<double>> inverse_dft(std::span<const std::complex<double>> c);

}  // namespace crdiscs::detail
