#pragma once
#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "wph/signal.hpp"

namespace wph {

// One frequency-domain window on the DFT grid. Band-pass channels are real,
// nonnegative, and one-sided (1D: zero for omega <= 0; 2D: supported in the
// half-plane around their orientation); the low-pass is symmetric.
struct Channel {
  std::vector<double> fhat;  // row-major over the DFT grid
  int j = 0;                 // octave
  int q = 0;                 // sub-octave position (1D, 0 <= q < Q)
  int ell = 0;               // angle index (2D)
  bool lowpass = false;
  int scale = 0;    // flat scale rank: 1D j*Q+q, 2D j; low-pass gets J*Q (resp. J)
  double lam = 0.0;  // center frequency magnitude, 0 for the low-pass
  std::array<double, 2> center{0.0, 0.0};       // nominal center frequency vector
  std::array<double, 2> center_meas{0.0, 0.0};  // mean frequency of |fhat|^2
};

struct FilterBank {
  int d = 1;
  std::size_t N = 0;  // samples per axis
  int J = 0;
  int Q = 1;  // 1D scales per octave
  int L = 0;  // 2D angle count
  double xi = 0.0;
  std::vector<Channel> channels;  // coarse-to-fine (2D: angle-major), low-pass last

  std::vector<std::size_t> shape() const;
  std::size_t bins() const;  // total grid points
  std::size_t nch() const { return channels.size(); }
  const Channel& lp() const { return channels.back(); }
};

struct FrameReport {
  double eta = 0.0;
  double min_sum = 0.0;
  double max_sum = 0.0;
  std::array<double, 2> worst_freq{0.0, 0.0};  // frequency attaining the eta-defining extremum
  std::size_t argmin_bin = 0;
  std::size_t argmax_bin = 0;
};

// smooth compactly supported window: exp(-w^2/(1-w^2)) on (-1,1), else 0
double bump_window(double w);

// DFT bin frequencies 2*pi*m/N mapped to (-pi, pi], Nyquist assigned +pi
std::vector<double> grid_omega(std::size_t N);

FilterBank build_bank_1d(std::size_t N, int J, int Q);
FilterBank build_bank_2d(std::size_t N, int J, int L);

// per-bin energy sum 0.5 * sum_c (fhat_c(w)^2 + fhat_c(-w)^2), low-pass included
std::vector<double> frame_sum(const FilterBank& bank);

FrameReport frame_report(const FilterBank& bank);

// Dual windows fhat / S with the symmetrized energy sum S as denominator, so
// the mixed sum 0.5*sum_c (fhat_c*dual_c(w) + fhat_c*dual_c(-w)) is exactly 1
// wherever any window is nonzero. Throws on a spectral hole inside a support.
FilterBank dual_bank(const FilterBank& bank);

// JSON metadata plus one raw float64 array per channel under dir/
void export_bank(const FilterBank& bank, const std::string& dir);

}  // namespace wph
