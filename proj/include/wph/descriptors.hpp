#pragma once
#include <cstddef>
#include <string>
#include <vector>

#include "wph/filterbank.hpp"
#include "wph/phase_harmonics.hpp"
#include "wph/signal.hpp"
#include "wph/transform.hpp"

namespace wph {

// One correlation slot: mean of [z_ca]^{-k} * [z_cb]^{+kp} over the grid.
struct SelEntry {
  std::size_t ca = 0;
  int k = 0;
  std::size_t cb = 0;
  int kp = 0;
};

struct MeanEntry {
  std::size_t c = 0;
  int k = 0;
};

// Channel metadata frozen at selection time so a descriptor file stands alone.
struct ChannelLabel {
  int scale = 0;
  int q = 0;
  int ell = 0;
  bool lowpass = false;
  double lam = 0.0;
};

struct SelectionIndex {
  int delta = 4;
  double beta = 1.0;
  int kpmax = 16;
  bool include_lowpass = true;
  bool cross_angles = false;
  std::vector<ChannelLabel> chan;
  std::vector<MeanEntry> means;
  std::vector<SelEntry> corrs;

  std::size_t size() const { return means.size() + corrs.size(); }
  // largest harmonic order appearing in any slot, at least 1
  int max_harmonic() const;
};

// Frequency-proximity selection. Keeps pairs within delta octaves whose
// transposed centers stay close: |k*c_a - kp*c_b| <= beta*(|c_a| + |c_b|),
// with k in {0,1} on the first slot, |c_a| >= |c_b|, and kp capped at kpmax
// (at 1 when either side is the low-pass, whose coefficients are real).
// In 2D, pairs across scales keep a common orientation unless cross_angles.
// Mean slots (c, k in {0,1}) are appended for every channel.
SelectionIndex select_coefficients(const FilterBank& bank, int delta, double beta, int kpmax,
                                   bool include_lowpass = true, bool cross_angles = false);

struct DescriptorSet {
  SelectionIndex sel;
  std::vector<cplx> means;  // aligned with sel.means
  std::vector<cplx> corrs;  // aligned with sel.corrs
  // grid means of [z_c]^k for every channel and k = 0..max_harmonic; the
  // centering cache used by covariance() and the reconstruction objective
  std::vector<std::vector<cplx>> mean_table;
  std::size_t d = 1;
  std::size_t n = 0;  // samples per axis

  std::size_t size() const { return means.size() + corrs.size(); }
};

// grid means N^{-d} sum_u [z_c(u)]^k, one value per requested slot
std::vector<cplx> mean_vector(const AnalyticCoefficients& wx, const std::vector<MeanEntry>& means);

// N^{-d} sum_u [z_ca(u)]^{-k} [z_cb(u)]^{+kp} per entry
std::vector<cplx> correlation(const AnalyticCoefficients& wx, const std::vector<SelEntry>& ents);

DescriptorSet describe(const Signal& x, const FilterBank& bank, const SelectionIndex& sel);

// centered second moments: corrs[i] - mean(ca,k) * conj(mean(cb,kp))
std::vector<cplx> covariance(const DescriptorSet& desc);

// dense correlation over a phase grid, rows alpha, cols alpha':
//   sum_{k,kp} hhat(k) conj(hhat(kp)) Chat(k,kp) e^{i k a} e^{-i kp a'}
// The grid must resolve the window: alphas.size() >= 2*kmax + 1.
std::vector<cvec> phase_domain_matrix(const AnalyticCoefficients& wx, const PhaseFilter& h,
                                      std::size_t ca, std::size_t cb,
                                      const std::vector<double>& alphas);

// worst ratio |mean([z]^k)| / mean(|z|) over band-pass channels and k >= 1;
// channels with zero amplitude mean are skipped, 0 if nothing qualifies
double mean_flatness(const DescriptorSet& desc);

std::string descriptor_set_to_json(const DescriptorSet& desc);
DescriptorSet descriptor_set_from_json(const std::string& text);

}  // namespace wph
