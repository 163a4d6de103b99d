#pragma once
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "wph/rng.hpp"

namespace wph {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;

// Real-valued array on a 1D or 2D power-of-two grid, row-major.
struct Signal {
  std::vector<std::size_t> shape;  // {n} or {rows, cols}
  std::vector<double> data;

  Signal() = default;
  explicit Signal(std::vector<std::size_t> s);

  std::size_t dim() const { return shape.size(); }
  std::size_t size() const { return data.size(); }
  double& operator[](std::size_t i) { return data[i]; }
  double operator[](std::size_t i) const { return data[i]; }
};

bool is_power_of_two(std::size_t n);

// throws std::invalid_argument when shape/data break the Signal contract
void validate_signal(const Signal& x);

// Raw format: little-endian float64 payload in C order at `path`, JSON sidecar
// {"shape":[...],"dtype":"f64le"} at `path` + ".json". Round-trips bit-exactly.
// Paths ending in .pgm use binary 8-bit PGM instead (P5, maxval 255); pixel
// values map to [0,1] by /255 on load and are clamped to [0,1] on save.
void save_signal(const Signal& x, const std::string& path);
Signal load_signal(const std::string& path);

// Cubic polynomial segments joined at `num_singularities` distinct random
// jump positions, rescaled to max |x| = 1. The segment cut at u=0 is not
// stitched, so the periodic extension generically jumps at the boundary too.
Signal gen_piecewise_regular(std::size_t n, std::size_t num_singularities, Rng& rng);
Signal gen_piecewise_regular(std::size_t n, std::size_t num_singularities, RngSpec spec);

// x(u) = (1 - cos(nu u)) cos(lam u); nu and lam in radians per sample and
// required to be exact DFT bin frequencies, 0 < nu < lam < pi.
Signal gen_modulated_cosine(std::size_t n, double nu, double lam);

// i.i.d. standard normal entries
Signal gen_white_noise(const std::vector<std::size_t>& shape, Rng& rng);
Signal gen_white_noise(const std::vector<std::size_t>& shape, RngSpec spec);

// Filled centered disk on an n-by-n grid, value `inside` within radius r
// (in samples), 0 outside; a one-pixel anti-aliased rim softens the edge.
Signal gen_disk(std::size_t n, double radius, double inside = 1.0);

}  // namespace wph
