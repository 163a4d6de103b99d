#pragma once
#include <vector>

#include "wph/filterbank.hpp"
#include "wph/signal.hpp"

namespace wph {

// Complex band outputs z_c = x conv psi_c, one array per bank channel in bank
// order (low-pass last, carried like any other channel).
struct AnalyticCoefficients {
  std::vector<std::size_t> shape;
  std::vector<cvec> coeffs;

  std::size_t nch() const { return coeffs.size(); }
};

AnalyticCoefficients analyze(const Signal& x, const FilterBank& bank);

// Frame inversion sum_c Real(z_c conv dual_c); exact on the grid up to
// rounding for any hole-free bank.
Signal reconstruct_frame(const AnalyticCoefficients& wx, const FilterBank& bank);
Signal reconstruct_frame(const AnalyticCoefficients& wx, const FilterBank& bank,
                         const FilterBank& dual);

// Grid analytic extension of the spectrum of a real field: zero at DC and at
// all strictly negative frequencies, doubled on 0 < omega < pi, kept at the
// self-conjugate Nyquist bin. 1D only.
cvec analytic_extension(const cvec& spectrum, std::size_t N);

// Worst relative l2 gap, over band-pass channels, between fhat and the grid
// analytic extension of its real part's spectrum. Zero-mean one-sided filters
// pass at rounding level; DC or negative-frequency mass shows up as a large
// deviation (reported, not an error). The symmetric low-pass is exempt.
double analytic_pair_check(const FilterBank& bank);

// plain l2 energy of all channels, sum_c sum_u |z_c(u)|^2
double energy(const AnalyticCoefficients& wx);

// adjoint of analyze against per-channel cotangents: sum_c Re(ifft(fft(g_c) fhat_c))
Signal analyze_adjoint(const std::vector<cvec>& cot, const FilterBank& bank);

}  // namespace wph
