#include "wph/filterbank.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace wph {

namespace {
constexpr double kXi = 0.85 * M_PI;

int log2_size(std::size_t n) {
  int k = 0;
  while ((std::size_t(1) << k) < n) ++k;
  return k;
}

void measure_center(Channel& ch, const std::vector<double>& om, std::size_t N, int d) {
  double tot = 0.0, mx = 0.0, my = 0.0;
  if (d == 1) {
    for (std::size_t m = 0; m < N; ++m) {
      double p = ch.fhat[m] * ch.fhat[m];
      tot += p;
      mx += om[m] * p;
    }
  } else {
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) {
        double p = ch.fhat[i * N + j];
        p *= p;
        tot += p;
        mx += om[i] * p;
        my += om[j] * p;
      }
  }
  if (tot > 0.0) {
    ch.center_meas = {mx / tot, my / tot};
  }
}
}  // namespace

std::vector<std::size_t> FilterBank::shape() const {
  return d == 1 ? std::vector<std::size_t>{N} : std::vector<std::size_t>{N, N};
}

std::size_t FilterBank::bins() const { return d == 1 ? N : N * N; }

double bump_window(double w) {
  if (!(std::abs(w) < 1.0)) return 0.0;
  return std::exp(-w * w / (1.0 - w * w));
}

std::vector<double> grid_omega(std::size_t N) {
  std::vector<double> om(N);
  for (std::size_t m = 0; m < N; ++m) {
    double w = 2.0 * M_PI * static_cast<double>(m) / static_cast<double>(N);
    if (w > M_PI) w -= 2.0 * M_PI;
    om[m] = w;
  }
  return om;
}

FilterBank build_bank_1d(std::size_t N, int J, int Q) {
  if (!is_power_of_two(N)) throw std::invalid_argument("grid size must be a power of two");
  if (Q < 1) throw std::invalid_argument("Q must be >= 1");
  if (J < 1 || J > log2_size(N))
    throw std::invalid_argument("J must lie in [1, log2 N]");
  FilterBank bank;
  bank.d = 1;
  bank.N = N;
  bank.J = J;
  bank.Q = Q;
  bank.L = 0;
  bank.xi = kXi;
  auto om = grid_omega(N);
  double c = 1.0 / (1.34 * std::sqrt(static_cast<double>(Q)) - 0.05);
  for (int s = J * Q - 1; s >= 0; --s) {
    Channel ch;
    ch.fhat.assign(N, 0.0);
    double dil = std::pow(2.0, static_cast<double>(s) / Q);
    for (std::size_t m = 0; m < N; ++m)
      if (om[m] > 0.0) ch.fhat[m] = c * bump_window((dil * om[m] - kXi) / kXi);
    ch.j = s / Q;
    ch.q = s % Q;
    ch.scale = s;
    ch.lam = kXi / dil;
    ch.center = {ch.lam, 0.0};
    measure_center(ch, om, N, 1);
    bank.channels.push_back(std::move(ch));
  }
  Channel lp;
  lp.fhat.assign(N, 0.0);
  double sigJ = std::pow(2.0, -0.550 / Q) * std::pow(2.0, static_cast<double>(-J + 1)) * kXi;
  for (std::size_t m = 0; m < N; ++m)
    lp.fhat[m] = std::exp(-om[m] * om[m] / (2.0 * sigJ * sigJ));
  lp.lowpass = true;
  lp.j = J;
  lp.scale = J * Q;
  lp.lam = 0.0;
  measure_center(lp, om, N, 1);
  bank.channels.push_back(std::move(lp));
  return bank;
}

FilterBank build_bank_2d(std::size_t N, int J, int L) {
  if (!is_power_of_two(N)) throw std::invalid_argument("grid size must be a power of two");
  if (L < 4 || L % 2 != 0) throw std::invalid_argument("L must be even and >= 4");
  if (J < 1 || J > log2_size(N))
    throw std::invalid_argument("J must lie in [1, log2 N]");
  FilterBank bank;
  bank.d = 2;
  bank.N = N;
  bank.J = J;
  bank.Q = 1;
  bank.L = L;
  bank.xi = kXi;
  auto om = grid_omega(N);
  double fact1 = 1.0, fact2 = 1.0;
  for (int i = 2; i <= L - 1; ++i) fact1 *= i;
  for (int i = 2; i <= 2 * L - 2; ++i) fact2 *= i;
  double AL = std::pow(2.0, L - 1) * fact1 / std::sqrt(L * fact2);
  double cL = AL / 1.29;
  // precompute radius and angle per grid point
  std::vector<double> rad(N * N), ang(N * N);
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) {
      rad[i * N + j] = std::hypot(om[i], om[j]);
      ang[i * N + j] = std::atan2(om[j], om[i]);
    }
  for (int ell = -L / 2 + 1; ell <= L / 2; ++ell) {
    double th = M_PI * ell / L;
    for (int j = J - 1; j >= 0; --j) {
      Channel ch;
      ch.fhat.assign(N * N, 0.0);
      double dil = std::pow(2.0, j);
      for (std::size_t p = 0; p < N * N; ++p) {
        if (rad[p] == 0.0) continue;
        double dth = std::fmod(ang[p] - th + M_PI, 2.0 * M_PI);
        if (dth < 0.0) dth += 2.0 * M_PI;
        dth -= M_PI;
        if (!(std::abs(dth) < M_PI / 2.0)) continue;
        double radial = cL * bump_window((dil * rad[p] - kXi) / kXi);
        ch.fhat[p] = radial * std::pow(std::cos(dth), L - 1);
      }
      ch.j = j;
      ch.ell = ell;
      ch.scale = j;
      ch.lam = kXi / dil;
      ch.center = {ch.lam * std::cos(th), ch.lam * std::sin(th)};
      measure_center(ch, om, N, 2);
      bank.channels.push_back(std::move(ch));
    }
  }
  Channel lp;
  lp.fhat.assign(N * N, 0.0);
  double sigJ = std::pow(2.0, -0.550) * std::pow(2.0, static_cast<double>(-J + 1)) * kXi;
  for (std::size_t p = 0; p < N * N; ++p)
    lp.fhat[p] = std::exp(-rad[p] * rad[p] / (2.0 * sigJ * sigJ));
  lp.lowpass = true;
  lp.j = J;
  lp.scale = J;
  lp.lam = 0.0;
  measure_center(lp, om, N, 2);
  bank.channels.push_back(std::move(lp));
  return bank;
}

namespace {
// flat index of -omega on the grid
std::size_t mirror_index(std::size_t p, std::size_t N, int d) {
  if (d == 1) return (N - p) % N;
  std::size_t i = p / N, j = p % N;
  return ((N - i) % N) * N + (N - j) % N;
}
}  // namespace

std::vector<double> frame_sum(const FilterBank& bank) {
  std::size_t n = bank.bins();
  std::vector<double> dsum(n, 0.0);
  for (const auto& ch : bank.channels)
    for (std::size_t p = 0; p < n; ++p) dsum[p] += ch.fhat[p] * ch.fhat[p];
  std::vector<double> out(n);
  for (std::size_t p = 0; p < n; ++p)
    out[p] = 0.5 * (dsum[p] + dsum[mirror_index(p, bank.N, bank.d)]);
  return out;
}

FrameReport frame_report(const FilterBank& bank) {
  auto s = frame_sum(bank);
  FrameReport rep;
  auto mn = std::min_element(s.begin(), s.end());
  auto mx = std::max_element(s.begin(), s.end());
  rep.min_sum = *mn;
  rep.max_sum = *mx;
  rep.argmin_bin = static_cast<std::size_t>(mn - s.begin());
  rep.argmax_bin = static_cast<std::size_t>(mx - s.begin());
  double lo = 1.0 - std::sqrt(rep.min_sum);
  double hi = std::sqrt(rep.max_sum) - 1.0;
  rep.eta = std::max(lo, hi);
  std::size_t wb = lo >= hi ? rep.argmin_bin : rep.argmax_bin;
  auto om = grid_omega(bank.N);
  if (bank.d == 1) {
    rep.worst_freq = {om[wb], 0.0};
  } else {
    rep.worst_freq = {om[wb / bank.N], om[wb % bank.N]};
  }
  return rep;
}

FilterBank dual_bank(const FilterBank& bank) {
  std::size_t n = bank.bins();
  auto sym = frame_sum(bank);
  double peak = *std::max_element(sym.begin(), sym.end());
  double tol = 1e-12 * peak;
  FilterBank dual = bank;
  for (std::size_t c = 0; c < bank.nch(); ++c) {
    const auto& src = bank.channels[c].fhat;
    auto& dst = dual.channels[c].fhat;
    for (std::size_t p = 0; p < n; ++p) {
      if (src[p] == 0.0) {
        dst[p] = 0.0;
        continue;
      }
      if (!(sym[p] > tol))
        throw std::runtime_error("dual_bank: spectral hole inside a filter support (frame violated)");
      dst[p] = src[p] / sym[p];
    }
  }
  return dual;
}

void export_bank(const FilterBank& bank, const std::string& dir) {
  std::filesystem::create_directories(dir);
  nlohmann::json meta;
  meta["d"] = bank.d;
  meta["n"] = bank.N;
  meta["j"] = bank.J;
  meta["q"] = bank.Q;
  meta["l"] = bank.L;
  meta["xi"] = bank.xi;
  auto rep = frame_report(bank);
  meta["frame"] = {{"eta", rep.eta}, {"min_sum", rep.min_sum}, {"max_sum", rep.max_sum}};
  nlohmann::json chans = nlohmann::json::array();
  for (std::size_t c = 0; c < bank.nch(); ++c) {
    const auto& ch = bank.channels[c];
    std::string file = "channel_" + std::to_string(c) + ".f64";
    nlohmann::json e;
    e["file"] = file;
    e["lowpass"] = ch.lowpass;
    e["j"] = ch.j;
    if (bank.d == 1)
      e["q"] = ch.q;
    else
      e["ell"] = ch.ell;
    e["lam"] = ch.lam;
    e["center"] = {ch.center[0], ch.center[1]};
    e["center_measured"] = {ch.center_meas[0], ch.center_meas[1]};
    chans.push_back(e);
    Signal arr;
    arr.shape = bank.shape();
    arr.data = ch.fhat;
    save_signal(arr, (std::filesystem::path(dir) / file).string());
  }
  meta["channels"] = chans;
  std::ofstream f(std::filesystem::path(dir) / "bank.json");
  if (!f) throw std::runtime_error("cannot write bank metadata in " + dir);
  f << meta.dump(2) << "\n";
}

}  // namespace wph
