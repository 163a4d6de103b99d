#pragma once
#include <optional>
#include <utility>
#include <vector>

#include "wph/descriptors.hpp"
#include "wph/filterbank.hpp"
#include "wph/rng.hpp"
#include "wph/signal.hpp"

namespace wph {

struct RecoveryConfig {
  int restarts = 10;
  int max_iters = 2000;
  int memory = 10;      // L-BFGS history length
  double c1 = 1e-4;     // sufficient-decrease constant
  double c2 = 0.9;      // curvature constant, c1 < c2 < 1
  double grad_tol = 1e-14;  // stop when |grad| / max(1, E) falls below
  RngSpec rng{0, 0};
  double init_scale = 1.0;  // multiplies the estimated target std for inits
};

struct RecoveryResult {
  Signal signal;                // best restart
  std::vector<double> losses;   // final loss per restart
  std::vector<int> iterations;  // iterations used per restart
  std::vector<double> trace;    // loss per iteration of the best restart
  std::size_t best_restart = 0;
  std::optional<double> psnr;   // aligned, present when a reference was given
  std::size_t M = 0;            // descriptor count
};

struct Alignment {
  std::vector<long> shift;  // circular shift applied to y, one entry per axis
  double psnr = 0.0;        // dB, capped at 300
  double err = 0.0;         // grid l2 norm of x - shifted y
};

struct SweepRow {
  int delta = 0;
  std::size_t M = 0;
  double psnr = 0.0;
  double err = 0.0;
  double loss = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::optional<double> chi;  // fitted decay exponent, absent for a single row
};

// covariance-matching objective:
//   sum over correlation entries |Khat_y - Khat_x + dM dM'^*|^2
//   plus sum over mean entries |Mhat_y - Mhat_x|^2
double loss(const DescriptorSet& desc, const Signal& y, const FilterBank& bank);

// the same objective with its analytic gradient in y (zero subgradient at
// samples where a channel amplitude vanishes)
std::pair<double, Signal> loss_gradient(const DescriptorSet& desc, const Signal& y,
                                        const FilterBank& bank);

// multi-restart L-BFGS with a strong Wolfe line search; deterministic in cfg.rng
RecoveryResult reconstruct(const DescriptorSet& desc, const FilterBank& bank,
                           const RecoveryConfig& cfg, const Signal* reference = nullptr);

// best integer circular alignment via FFT cross-correlation, then
// 20*log10(N^{d/2} max|x| / ||x - y_shifted||); error on x identically zero
Alignment align_and_psnr(const Signal& x, const Signal& y);

// reconstruct x from its own descriptors over an ascending list of octave
// windows; fits err ~ M^{-chi} when the sweep has at least two points
SweepResult decay_sweep(const Signal& x, const FilterBank& bank, const std::vector<int>& deltas,
                        const RecoveryConfig& cfg, double beta = 1.0, int kpmax = 16);

}  // namespace wph
