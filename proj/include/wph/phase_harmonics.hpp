#pragma once
#include <utility>
#include <vector>

#include "wph/signal.hpp"
#include "wph/transform.hpp"

namespace wph {

// Fourier coefficient table of a 2*pi-periodic phase profile h(alpha),
// h(alpha) = sum_k hhat(k) e^{i k alpha}, stored for |k| <= kmax.
struct PhaseFilter {
  enum class Kind { rectifier, absolute, identity, custom };
  Kind kind = Kind::custom;
  int kmax = 0;
  std::vector<cplx> hhat;  // index k + kmax

  cplx at(int k) const {
    if (k < -kmax || k > kmax) return {0.0, 0.0};
    return hhat[static_cast<std::size_t>(k + kmax)];
  }
  // Full-series l2 norm sqrt(sum over ALL k of |hhat(k)|^2), not just the
  // stored range: closed forms give exactly 1/2 (rectifier) and 1/sqrt(2)
  // (absolute, identity); custom tables fall back to the stored sum.
  double norm() const;
};

PhaseFilter hhat_table(PhaseFilter::Kind kind, int kmax);

// [z]^k = |z| e^{i k arg z}, with [0]^k = 0
cplx phase_harmonic(cplx z, int k);

// modulus and phase-harmonic stack for a whole field: out[s][u] = [z_u]^s for
// s = 0..smax (out[0] is the modulus); negative exponents are conjugates
std::vector<cvec> harmonic_powers(const cvec& z, int smax);

// windowed phase profiles on an explicit alpha grid, values[c][a*n + u]
struct PhaseProfile {
  std::vector<double> alphas;
  std::vector<std::vector<double>> values;
};

// U x(u, lam, alpha) = |z| h(alpha - arg z), evaluated from the Fourier table;
// needs at least 2*kmax+1 grid points to resolve every stored harmonic
PhaseProfile apply_U(const AnalyticCoefficients& wx, const PhaseFilter& h,
                     const std::vector<double>& alphas);

// harmonic-domain fields hhat(k) [z]^{-k}, one complex array per (channel, k)
struct HarmonicField {
  std::vector<int> k_list;
  std::vector<std::vector<cvec>> values;  // [channel][index into k_list]
};

HarmonicField apply_U_hat(const AnalyticCoefficients& wx, const PhaseFilter& h,
                          const std::vector<int>& k_list);

// x = sum_c Real( (1/hhat(1)^*) values[c, k=1]^* conv dual_c ); exact up to
// rounding because the k=1 field is hhat(1) conj(z), so the conjugate undoes
// the nonlinearity and the dual frame undoes the transform
Signal invert_from_first_harmonic(const HarmonicField& hf, const FilterBank& bank,
                                  const PhaseFilter& h);

// phase-sharpened window: compose h with the even cubic box-spline profile g
// concentrated on [-eps, eps] modulo pi; also reports ghat on even harmonics
struct SharpenResult {
  PhaseFilter composed;
  std::vector<cplx> ghat;  // same k + kmax indexing as composed.hhat
};

SharpenResult sharpen_filter(const PhaseFilter& h, double epsilon);

struct LipschitzSample {
  cplx z;
  cplx zp;
  int k = 1;
};

// max over samples of |[z]^k - [z']^k| / (max(1,|k|) |z - z'|); bound is 1
double check_harmonic_lipschitz(const std::vector<LipschitzSample>& samples);

struct BiLipschitzReport {
  double lo = 0.0;
  double hi = 0.0;
};

// extremal ratios of ||Hz - Hz'|| / |z - z'| with ||.|| summed over the
// stored table, H z = { hhat(k) [z]^{-k} }_k
BiLipschitzReport check_H_bilipschitz(const PhaseFilter& h,
                                      const std::vector<std::pair<cplx, cplx>>& samples);

}  // namespace wph
