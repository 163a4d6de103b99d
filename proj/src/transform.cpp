#include "wph/transform.hpp"

#include <cmath>
#include <stdexcept>

#include "wph/fft.hpp"

namespace wph {

AnalyticCoefficients analyze(const Signal& x, const FilterBank& bank) {
  validate_signal(x);
  if (x.shape != bank.shape())
    throw std::invalid_argument("analyze: signal shape does not match bank grid");
  AnalyticCoefficients wx;
  wx.shape = x.shape;
  cvec xhat = fft_real(x.data, x.shape);
  std::size_t n = x.size();
  cvec prod(n);
  wx.coeffs.reserve(bank.nch());
  for (const auto& ch : bank.channels) {
    for (std::size_t p = 0; p < n; ++p) prod[p] = xhat[p] * ch.fhat[p];
    wx.coeffs.push_back(ifft(prod, x.shape));
  }
  return wx;
}

Signal reconstruct_frame(const AnalyticCoefficients& wx, const FilterBank& bank,
                         const FilterBank& dual) {
  if (wx.nch() != bank.nch())
    throw std::invalid_argument("reconstruct_frame: channel count mismatch");
  if (wx.shape != bank.shape())
    throw std::invalid_argument("reconstruct_frame: shape mismatch");
  std::size_t n = bank.bins();
  Signal out;
  out.shape = wx.shape;
  out.data.assign(n, 0.0);
  cvec prod(n);
  for (std::size_t c = 0; c < bank.nch(); ++c) {
    cvec zhat = fft(wx.coeffs[c], wx.shape);
    for (std::size_t p = 0; p < n; ++p) prod[p] = zhat[p] * dual.channels[c].fhat[p];
    cvec z = ifft(prod, wx.shape);
    for (std::size_t p = 0; p < n; ++p) out.data[p] += z[p].real();
  }
  return out;
}

Signal reconstruct_frame(const AnalyticCoefficients& wx, const FilterBank& bank) {
  return reconstruct_frame(wx, bank, dual_bank(bank));
}

cvec analytic_extension(const cvec& spectrum, std::size_t N) {
  if (spectrum.size() != N) throw std::invalid_argument("analytic_extension: size mismatch");
  cvec out(N, cplx{0.0, 0.0});
  for (std::size_t m = 1; m < N / 2; ++m) out[m] = 2.0 * spectrum[m];
  out[N / 2] = spectrum[N / 2];
  return out;
}

double analytic_pair_check(const FilterBank& bank) {
  if (bank.d != 1) throw std::invalid_argument("analytic_pair_check handles 1D banks");
  std::size_t N = bank.N;
  double worst = 0.0;
  for (const auto& ch : bank.channels) {
    if (ch.lowpass) continue;
    cvec fh(N);
    for (std::size_t m = 0; m < N; ++m) fh[m] = ch.fhat[m];
    cvec psi = ifft(fh, {N});
    cvec re(N);
    for (std::size_t u = 0; u < N; ++u) re[u] = psi[u].real();
    cvec rhat = fft(re, {N});
    cvec ext = analytic_extension(rhat, N);
    double num = 0.0, den = 0.0;
    for (std::size_t m = 0; m < N; ++m) {
      num += std::norm(ext[m] - fh[m]);
      den += std::norm(fh[m]);
    }
    if (den > 0.0) worst = std::max(worst, std::sqrt(num / den));
  }
  return worst;
}

double energy(const AnalyticCoefficients& wx) {
  double tot = 0.0;
  for (const auto& z : wx.coeffs)
    for (const auto& v : z) tot += std::norm(v);
  return tot;
}

Signal analyze_adjoint(const std::vector<cvec>& cot, const FilterBank& bank) {
  if (cot.size() != bank.nch())
    throw std::invalid_argument("analyze_adjoint: channel count mismatch");
  std::size_t n = bank.bins();
  auto shape = bank.shape();
  Signal out;
  out.shape = shape;
  out.data.assign(n, 0.0);
  cvec prod(n);
  for (std::size_t c = 0; c < bank.nch(); ++c) {
    cvec ghat = fft(cot[c], shape);
    for (std::size_t p = 0; p < n; ++p) prod[p] = ghat[p] * bank.channels[c].fhat[p];
    cvec g = ifft(prod, shape);
    for (std::size_t p = 0; p < n; ++p) out.data[p] += g[p].real();
  }
  return out;
}

}  // namespace wph
