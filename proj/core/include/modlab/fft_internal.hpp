#pragma once

#include <complex>
#include <vector>

namespace modlab {

// Unnormalized complex DFT, any length. forward: sum e^{-2*pi*i jk/n},
// inverse: sum e^{+2*pi*i jk/n} (no 1/n factor either way).
void fft_inplace(std::vector<std::complex<double>>& data, bool inverse);

// Same, on an n x n row-major grid (transform along both axes).
void fft2_inplace(std::vector<std::complex<double>>& data, int n, bool inverse);

}  // namespace modlab
