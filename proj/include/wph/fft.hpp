#pragma once
#include <vector>

#include "wph/signal.hpp"

namespace wph {

// Unnormalized forward DFT of a complex array with the given 1D/2D shape.
cvec fft(const cvec& x, const std::vector<std::size_t>& shape);

// Inverse DFT including the 1/N^d factor, so ifft(fft(x)) == x.
cvec ifft(const cvec& X, const std::vector<std::size_t>& shape);

cvec fft_real(const std::vector<double>& x, const std::vector<std::size_t>& shape);

}  // namespace wph
