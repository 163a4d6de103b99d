#include "wph/phase_harmonics.hpp"

#include <cmath>
#include <stdexcept>

#include "wph/fft.hpp"
#include "wph/filterbank.hpp"

namespace wph {

namespace {
// i^k for integer k (period 4)
cplx ipow(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}
}  // namespace

double PhaseFilter::norm() const {
  // |[z]^k| = |z| for every k, so the operator norm identity ||Hz|| = ||h|| |z|
  // holds with the untruncated series norm; the named kinds admit closed forms
  // via sum_{m>=1} (4m^2-1)^{-2} = pi^2/16 - 1/2.
  switch (kind) {
    case Kind::rectifier: return 0.5;
    case Kind::absolute: return 1.0 / std::sqrt(2.0);
    case Kind::identity: return 1.0 / std::sqrt(2.0);
    case Kind::custom: {
      double s = 0.0;
      for (const auto& v : hhat) s += std::norm(v);
      return std::sqrt(s);
    }
  }
  return 0.0;
}

PhaseFilter hhat_table(PhaseFilter::Kind kind, int kmax) {
  if (kmax < 1) throw std::invalid_argument("hhat_table: kmax must be >= 1");
  PhaseFilter h;
  h.kind = kind;
  h.kmax = kmax;
  h.hhat.assign(2 * static_cast<std::size_t>(kmax) + 1, cplx{0.0, 0.0});
  auto set = [&](int k, cplx v) { h.hhat[static_cast<std::size_t>(k + kmax)] = v; };
  switch (kind) {
    case PhaseFilter::Kind::rectifier:
      for (int k = -kmax; k <= kmax; ++k) {
        if (k == 1 || k == -1)
          set(k, {0.25, 0.0});
        else if (k % 2 == 0)
          set(k, -ipow(k) / (M_PI * (k - 1.0) * (k + 1.0)));
      }
      break;
    case PhaseFilter::Kind::absolute:
      for (int k = -kmax; k <= kmax; ++k)
        if (k % 2 == 0) set(k, -2.0 * ipow(k) / (M_PI * (k - 1.0) * (k + 1.0)));
      break;
    case PhaseFilter::Kind::identity:
      set(1, {0.5, 0.0});
      set(-1, {0.5, 0.0});
      break;
    case PhaseFilter::Kind::custom:
      break;  // caller fills the table
  }
  return h;
}

cplx phase_harmonic(cplx z, int k) {
  double a = std::abs(z);
  if (a == 0.0) return {0.0, 0.0};
  return std::polar(a, k * std::arg(z));
}

std::vector<cvec> harmonic_powers(const cvec& z, int smax) {
  std::size_t n = z.size();
  std::vector<cvec> out(static_cast<std::size_t>(smax) + 1, cvec(n));
  cvec unit(n);
  for (std::size_t u = 0; u < n; ++u) {
    double a = std::abs(z[u]);
    out[0][u] = a;
    unit[u] = a > 0.0 ? z[u] / a : cplx{0.0, 0.0};
  }
  cvec up(n, cplx{1.0, 0.0});
  for (int s = 1; s <= smax; ++s) {
    for (std::size_t u = 0; u < n; ++u) {
      up[u] *= unit[u];
      out[static_cast<std::size_t>(s)][u] = out[0][u].real() * up[u];
    }
  }
  return out;
}

PhaseProfile apply_U(const AnalyticCoefficients& wx, const PhaseFilter& h,
                     const std::vector<double>& alphas) {
  if (alphas.size() < 2 * static_cast<std::size_t>(h.kmax) + 1)
    throw std::invalid_argument("apply_U: phase grid too small for the harmonic range");
  PhaseProfile out;
  out.alphas = alphas;
  std::size_t n = wx.coeffs.empty() ? 0 : wx.coeffs[0].size();
  std::size_t A = alphas.size();
  out.values.assign(wx.nch(), std::vector<double>(A * n, 0.0));
  for (std::size_t c = 0; c < wx.nch(); ++c) {
    auto pows = harmonic_powers(wx.coeffs[c], h.kmax);
    for (std::size_t a = 0; a < A; ++a) {
      double* dst = out.values[c].data() + a * n;
      for (int k = -h.kmax; k <= h.kmax; ++k) {
        cplx hk = h.at(k);
        if (hk == cplx{0.0, 0.0}) continue;
        // hhat(k) e^{ik alpha} [z]^{-k}
        cplx rot = hk * std::polar(1.0, k * alphas[a]);
        const cvec& p = pows[static_cast<std::size_t>(std::abs(k))];
        if (k <= 0) {
          for (std::size_t u = 0; u < n; ++u) dst[u] += (rot * p[u]).real();
        } else {
          for (std::size_t u = 0; u < n; ++u) dst[u] += (rot * std::conj(p[u])).real();
        }
      }
    }
  }
  return out;
}

HarmonicField apply_U_hat(const AnalyticCoefficients& wx, const PhaseFilter& h,
                          const std::vector<int>& k_list) {
  for (int k : k_list)
    if (k < -h.kmax || k > h.kmax)
      throw std::invalid_argument("apply_U_hat: exponent outside the filter table");
  HarmonicField hf;
  hf.k_list = k_list;
  int smax = 0;
  for (int k : k_list) smax = std::max(smax, std::abs(k));
  hf.values.assign(wx.nch(), {});
  for (std::size_t c = 0; c < wx.nch(); ++c) {
    auto pows = harmonic_powers(wx.coeffs[c], smax);
    hf.values[c].reserve(k_list.size());
    for (int k : k_list) {
      const cvec& p = pows[static_cast<std::size_t>(std::abs(k))];
      cvec v(p.size());
      cplx hk = h.at(k);
      // [z]^{-k}: conjugate the positive power
      if (k > 0) {
        for (std::size_t u = 0; u < p.size(); ++u) v[u] = hk * std::conj(p[u]);
      } else {
        for (std::size_t u = 0; u < p.size(); ++u) v[u] = hk * p[u];
      }
      hf.values[c].push_back(std::move(v));
    }
  }
  return hf;
}

Signal invert_from_first_harmonic(const HarmonicField& hf, const FilterBank& bank,
                                  const PhaseFilter& h) {
  cplx h1 = h.at(1);
  if (std::abs(h1) == 0.0)
    throw std::invalid_argument("not invertible from first harmonic: hhat(1) = 0");
  std::size_t ki = hf.k_list.size();
  for (std::size_t i = 0; i < hf.k_list.size(); ++i)
    if (hf.k_list[i] == 1) ki = i;
  if (ki == hf.k_list.size())
    throw std::invalid_argument("invert_from_first_harmonic: k=1 field missing");
  if (hf.values.size() != bank.nch())
    throw std::invalid_argument("invert_from_first_harmonic: channel count mismatch");
  AnalyticCoefficients wx;
  wx.shape = bank.shape();
  cplx inv = 1.0 / std::conj(h1);
  for (std::size_t c = 0; c < bank.nch(); ++c) {
    cvec z(hf.values[c][ki].size());
    for (std::size_t u = 0; u < z.size(); ++u) z[u] = inv * std::conj(hf.values[c][ki][u]);
    wx.coeffs.push_back(std::move(z));
  }
  return reconstruct_frame(wx, bank);
}

SharpenResult sharpen_filter(const PhaseFilter& h, double epsilon) {
  if (h.kind != PhaseFilter::Kind::rectifier && h.kind != PhaseFilter::Kind::absolute)
    throw std::invalid_argument("sharpen_filter: base filter must be rectifier or absolute");
  if (!(epsilon > 0.0) || !(epsilon <= M_PI / 4.0))
    throw std::invalid_argument("sharpen_filter: epsilon must lie in (0, pi/4]");
  SharpenResult res;
  res.composed.kind = PhaseFilter::Kind::custom;
  res.composed.kmax = h.kmax;
  res.composed.hhat.assign(h.hhat.size(), cplx{0.0, 0.0});
  res.ghat.assign(h.hhat.size(), cplx{0.0, 0.0});
  for (int k = -h.kmax; k <= h.kmax; ++k) {
    if (k % 2 != 0) continue;  // odd harmonics of the composition vanish
    cplx ck;
    if (k == 0) {
      ck = {2.0, 0.0};
    } else {
      double t = k * epsilon / 4.0;
      double s = std::sin(t) / t;
      ck = {2.0 * s * s * s * s, 0.0};
    }
    res.composed.hhat[static_cast<std::size_t>(k + h.kmax)] = ck;
    res.ghat[static_cast<std::size_t>(k + h.kmax)] = ck / h.at(k);
  }
  return res;
}

double check_harmonic_lipschitz(const std::vector<LipschitzSample>& samples) {
  double worst = 0.0;
  for (const auto& s : samples) {
    double den = std::abs(s.z - s.zp);
    if (den == 0.0) throw std::invalid_argument("check_harmonic_lipschitz: z == z'");
    double num = std::abs(phase_harmonic(s.z, s.k) - phase_harmonic(s.zp, s.k));
    double ratio = num / (std::max(1.0, std::abs(static_cast<double>(s.k))) * den);
    worst = std::max(worst, ratio);
  }
  return worst;
}

BiLipschitzReport check_H_bilipschitz(const PhaseFilter& h,
                                      const std::vector<std::pair<cplx, cplx>>& samples) {
  BiLipschitzReport rep;
  rep.lo = 1e300;
  rep.hi = 0.0;
  for (const auto& [z, zp] : samples) {
    double den = std::abs(z - zp);
    if (den == 0.0) throw std::invalid_argument("check_H_bilipschitz: z == z'");
    double acc = 0.0;
    for (int k = -h.kmax; k <= h.kmax; ++k) {
      cplx hk = h.at(k);
      if (hk == cplx{0.0, 0.0}) continue;
      acc += std::norm(hk) * std::norm(phase_harmonic(z, -k) - phase_harmonic(zp, -k));
    }
    double ratio = std::sqrt(acc) / den;
    rep.lo = std::min(rep.lo, ratio);
    rep.hi = std::max(rep.hi, ratio);
  }
  return rep;
}

}  // namespace wph
