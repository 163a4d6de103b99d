// Acceptance gate: eleven numbered criteria, one PASS/FAIL line each, every
// tolerance pinned in the source. Run with no arguments for the whole gate,
// with criterion numbers for a subset ("acceptance 9 10"), and with --full to
// switch criterion 11 to the offline 256x256 study that is not part of CI.
// Exit code is the number of failed criteria.
//
// Criteria 2 and 8 fail by measurement, not by accident; they are left red on
// purpose. Their diagnostic lines carry the measured numbers and the reason,
// and the README discusses both.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <utility>
#include <vector>

#include "wph/descriptors.hpp"
#include "wph/fft.hpp"
#include "wph/filterbank.hpp"
#include "wph/phase_harmonics.hpp"
#include "wph/recovery.hpp"
#include "wph/rng.hpp"
#include "wph/signal.hpp"
#include "wph/transform.hpp"

using namespace wph;
using clk = std::chrono::steady_clock;

namespace {

clk::time_point g_t0;

double toc() { return std::chrono::duration<double>(clk::now() - g_t0).count(); }

double rel_l2(const std::vector<double>& a, const std::vector<double>& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += b[i] * b[i];
  }
  return std::sqrt(num / den);
}

Signal roll(const Signal& x, long tau) {
  Signal y = x;
  long n = static_cast<long>(x.size());
  for (long u = 0; u < n; ++u)
    y.data[static_cast<std::size_t>(((u + tau) % n + n) % n)] =
        x.data[static_cast<std::size_t>(u)];
  return y;
}

double fit_decay(const std::vector<double>& logM, const std::vector<double>& logE) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  auto m = static_cast<double>(logM.size());
  for (std::size_t i = 0; i < logM.size(); ++i) {
    sx += logM[i];
    sy += logE[i];
    sxx += logM[i] * logM[i];
    sxy += logM[i] * logE[i];
  }
  return -(m * sxy - sx * sy) / (m * sxx - sx * sx);
}

// ----- 1. analytic phase-filter tables --------------------------------------
bool crit_1() {
  auto rect = hhat_table(PhaseFilter::Kind::rectifier, 8);
  auto ab = hhat_table(PhaseFilter::Kind::absolute, 8);
  auto id = hhat_table(PhaseFilter::Kind::identity, 4);
  double dev = 0.0;
  auto close = [&](cplx got, double want) {
    dev = std::max({dev, std::abs(got.real() - want), std::abs(got.imag())});
  };
  close(rect.at(0), 1.0 / M_PI);
  close(rect.at(1), 0.25);
  close(rect.at(-1), 0.25);
  close(rect.at(2), 1.0 / (3.0 * M_PI));
  close(rect.at(-2), 1.0 / (3.0 * M_PI));
  close(rect.at(3), 0.0);
  close(rect.at(4), -1.0 / (15.0 * M_PI));
  close(rect.at(5), 0.0);
  close(rect.at(6), 1.0 / (35.0 * M_PI));
  close(rect.at(7), 0.0);
  close(ab.at(0), 2.0 / M_PI);
  close(ab.at(1), 0.0);
  close(ab.at(-1), 0.0);
  close(ab.at(2), 2.0 / (3.0 * M_PI));
  close(id.at(1), 0.5);
  close(id.at(-1), 0.5);
  close(id.at(0), 0.0);
  close(id.at(2), 0.0);

  // cross-check every stored coefficient against a dense sampling of the
  // profile h(alpha) = rho(cos alpha); trapezoid error on the kinked profiles
  // is O(A^-2), well under the gate
  const std::size_t A = 4096;
  double samp_dev = 0.0;
  for (int which = 0; which < 2; ++which) {
    const PhaseFilter& h = which == 0 ? rect : ab;
    for (int k = -8; k <= 8; ++k) {
      cplx ck{0.0, 0.0};
      for (std::size_t j = 0; j < A; ++j) {
        double al = 2.0 * M_PI * static_cast<double>(j) / static_cast<double>(A);
        double t = std::cos(al);
        double rho = which == 0 ? std::max(t, 0.0) : std::abs(t);
        ck += rho * std::exp(cplx{0.0, -static_cast<double>(k) * al});
      }
      samp_dev = std::max(samp_dev, std::abs(ck / static_cast<double>(A) - h.at(k)));
    }
  }
  double el = toc();
  bool ok = dev <= 1e-14 && samp_dev <= 1e-6 && el < 1.0;
  std::printf("[%s]  1 analytic tables: closed-form dev %.2e (<= 1e-14), sampled cross-check dev "
              "%.2e (<= 1e-6), %.2f s (< 1 s)\n",
              ok ? "PASS" : "FAIL", dev, samp_dev, el);
  return ok;
}

// ----- 2. frame bounds -------------------------------------------------------
bool crit_2() {
  auto r1 = frame_report(build_bank_1d(1024, 10, 1));
  auto r2 = frame_report(build_bank_1d(1024, 10, 2));
  auto r4 = frame_report(build_bank_2d(256, 8, 4));
  auto r8 = frame_report(build_bank_2d(256, 8, 8));
  double gap = std::abs(r4.eta - r8.eta);
  double el = toc();
  bool ok = std::abs(r1.eta - 0.091) <= 0.005 && r2.eta <= 0.04 &&
            std::abs(r4.eta - 0.091) <= 0.005 && std::abs(r8.eta - 0.091) <= 0.005 &&
            gap <= 1e-3 && el < 5.0;
  std::printf("[%s]  2 frame bounds: eta Q=1 %.4f (0.091 +- 0.005), Q=2 %.4f (<= 0.04), 2D L=4 "
              "%.4f / L=8 %.4f (each 0.091 +- 0.005, gap %.1e <= 1e-3), %.2f s (< 5 s)\n",
              ok ? "PASS" : "FAIL", r1.eta, r2.eta, r4.eta, r8.eta, gap, el);
  std::printf("       every clause misses: the claimed 0.091 needs an amplitude that equalizes "
              "the two ripple extrema\n"
              "       of the window sum, while the pinned c = 1/(1.34 sqrt(Q) - 0.05) leaves a "
              "sag between the finest\n"
              "       channel and Nyquist (worst 1D bin at omega = %.4f, min sum %.3f vs max "
              "%.3f).\n",
              r1.worst_freq[0], r1.min_sum, r1.max_sum);
  std::printf("       continuum check: equalizing the extrema gives eta = 0.0909 at c = 0.7842 "
              "for Q=1, so the 0.091\n"
              "       figure itself is reachable, and eta = 0.0146 at c = 0.5507 for Q=2; the "
              "pinned constants stand as\n"
              "       published interface values, so the criterion is reported red rather than "
              "retuned.\n");
  return ok;
}

// ----- 3. exact inversions ---------------------------------------------------
bool crit_3() {
  auto h = hhat_table(PhaseFilter::Kind::rectifier, 8);
  double worst_frame = 0.0, worst_first = 0.0;
  for (int d = 1; d <= 2; ++d) {
    Signal x = d == 1 ? gen_white_noise({1024}, RngSpec{21, 0})
                      : gen_white_noise({64, 64}, RngSpec{22, 0});
    FilterBank bank = d == 1 ? build_bank_1d(1024, 10, 1) : build_bank_2d(64, 6, 8);
    auto wx = analyze(x, bank);
    worst_frame = std::max(worst_frame, rel_l2(reconstruct_frame(wx, bank).data, x.data));
    auto hf = apply_U_hat(wx, h, {1});
    worst_first =
        std::max(worst_first, rel_l2(invert_from_first_harmonic(hf, bank, h).data, x.data));
  }
  double el = toc();
  bool ok = worst_frame <= 1e-10 && worst_first <= 1e-10 && el < 5.0;
  std::printf("[%s]  3 exact inversions: frame round-trip %.2e, first-harmonic %.2e (both <= "
              "1e-10, 1D N=1024 and 2D 64x64), %.2f s (< 5 s)\n",
              ok ? "PASS" : "FAIL", worst_frame, worst_first, el);
  return ok;
}

// ----- 4. Lipschitz suites ---------------------------------------------------
bool crit_4() {
  std::vector<LipschitzSample> draws;
  draws.reserve(100000);
  Rng rng(31, 0);
  for (int t = 0; t < 100000; ++t) {
    cplx z(rng.normal(), rng.normal());
    cplx zp(rng.normal(), rng.normal());
    int k = static_cast<int>(rng.next_u64() % 17) - 8;
    if (std::abs(z - zp) == 0.0) continue;
    draws.push_back({z, zp, k});
  }
  double ratio = check_harmonic_lipschitz(draws);

  auto rect = hhat_table(PhaseFilter::Kind::rectifier, 64);
  std::vector<std::pair<cplx, cplx>> pairs;
  pairs.reserve(20001);
  Rng rng2(32, 0);
  for (int t = 0; t < 20000; ++t) {
    cplx z(rng2.normal(), rng2.normal());
    cplx zp(rng2.normal(), rng2.normal());
    if (std::abs(z - zp) == 0.0) continue;
    pairs.push_back({z, zp});
  }
  pairs.push_back({cplx{1.0, 0.0}, cplx{0.0, 0.0}});
  auto rep = check_H_bilipschitz(rect, pairs);
  const double kappa = std::sqrt(0.25 + 1.0 / (M_PI * M_PI));

  // norm identity ||Hz|| = |z|/2: the full-series norm is 1/2 in closed form;
  // the stored K_max=64 table realizes sqrt(sum |hhat|^2) = 1/2 - tail
  double norm_dev = std::abs(rect.norm() - 0.5);
  double table = 0.0;
  for (const auto& v : rect.hhat) table += std::norm(v);
  std::vector<std::pair<cplx, cplx>> zero_pair{{cplx{2.5, -1.0}, cplx{0.0, 0.0}}};
  double realized = check_H_bilipschitz(rect, zero_pair).lo;

  double el = toc();
  bool ok = ratio <= 1.0 + 1e-12 && rep.lo >= std::sqrt(2.0) / 4.0 - 1e-6 &&
            rep.hi <= kappa + 1e-6 && norm_dev <= 1e-8 && el < 10.0;
  std::printf("[%s]  4 Lipschitz: harmonic ratio %.12f (<= 1+1e-12, 1e5 draws), H ratios in "
              "[%.6f, %.6f] (bounds %.6f / %.6f), series-norm dev %.1e (<= 1e-8), %.2f s "
              "(< 10 s)\n",
              ok ? "PASS" : "FAIL", ratio, rep.lo, rep.hi, std::sqrt(2.0) / 4.0, kappa, norm_dev,
              el);
  std::printf("       the stored table realizes ||Hz||/|z| = %.9f; its gap to 1/2 is the "
              "analytic tail %.1e past k=64\n",
              realized, 0.5 - std::sqrt(table));
  return ok;
}

// ----- 5. phase sharpening ---------------------------------------------------
bool crit_5() {
  const double eps = 0.2;
  auto rect = hhat_table(PhaseFilter::Kind::rectifier, 1024);
  auto sharp = sharpen_filter(rect, eps);

  double spec_dev = 0.0, fact_dev = 0.0;
  for (int k = -1024; k <= 1024; ++k) {
    double want = 0.0;
    if (k == 0) {
      want = 2.0;
    } else if (k % 2 == 0) {
      double t = static_cast<double>(k) * eps / 4.0;
      double sc = std::sin(t) / t;
      want = 2.0 * sc * sc * sc * sc;
    }
    spec_dev = std::max(spec_dev, std::abs(sharp.composed.at(k) - cplx{want, 0.0}));
    if (k % 2 == 0) {
      cplx lhs = sharp.ghat[static_cast<std::size_t>(k + 1024)] * rect.at(k);
      fact_dev = std::max(fact_dev, std::abs(lhs - sharp.composed.at(k)));
    }
  }

  // alpha-domain mass of the composed window outside +-eps around 0 and pi
  const std::size_t A = 4096;
  cvec tab(A, cplx{0.0, 0.0});
  for (int k = -sharp.composed.kmax; k <= sharp.composed.kmax; ++k) {
    auto slot = static_cast<std::size_t>(((k % static_cast<int>(A)) + static_cast<int>(A)) %
                                         static_cast<int>(A));
    tab[slot] += sharp.composed.at(k) * static_cast<double>(A);
  }
  cvec prof = ifft(tab, {A});
  double inside = 0.0, total = 0.0;
  for (std::size_t a = 0; a < A; ++a) {
    double alpha = 2.0 * M_PI * static_cast<double>(a) / A;
    double d0 = std::abs(std::remainder(alpha, 2.0 * M_PI));
    double dpi = std::abs(std::remainder(alpha - M_PI, 2.0 * M_PI));
    double v = std::abs(prof[a].real());
    total += v;
    if (d0 <= eps || dpi <= eps) inside += v;
  }
  double out_frac = (total - inside) / total;

  double el = toc();
  bool ok = spec_dev <= 1e-13 && fact_dev <= 1e-13 && out_frac <= 1e-3 && el < 1.0;
  std::printf("[%s]  5 sharpening: spectrum dev %.2e and factorization dev %.2e (<= 1e-13, "
              "|k| <= 1024), mass outside +-%.1f mod pi %.2e (<= 1e-3, 4096 grid), %.2f s "
              "(< 1 s)\n",
              ok ? "PASS" : "FAIL", spec_dev, fact_dev, eps, out_frac, el);
  return ok;
}

// ----- 6. frequency transposition --------------------------------------------
bool crit_6() {
  Signal x = gen_white_noise({1024}, RngSpec{99, 0});
  auto bank = build_bank_1d(1024, 10, 1);
  auto wx = analyze(x, bank);
  std::size_t c = 0;
  while (bank.channels[c].scale != 3) ++c;  // mid-band: 3*lam stays under pi
  double lam = bank.channels[c].lam;
  auto om = grid_omega(1024);

  double worst = 0.0;
  for (int k = 1; k <= 3; ++k) {
    cvec y(1024);
    for (std::size_t u = 0; u < 1024; ++u) y[u] = phase_harmonic(wx.coeffs[c][u], k);
    auto Y = fft(y, {1024});
    double num = 0.0, den = 0.0;
    for (std::size_t m = 0; m < 1024; ++m) {
      double e = std::norm(Y[m]);
      num += om[m] * e;
      den += e;
    }
    double centroid = num / den;
    worst = std::max(worst, std::abs(centroid - k * lam) / (k * lam));
  }
  double el = toc();
  bool ok = worst <= 0.2 && el < 2.0;
  std::printf("[%s]  6 transposition: centroid of [x conv psi]^k within %.1f%% of k*lam for "
              "k=1..3 (<= 20%%, lam = %.3f), %.2f s (< 2 s)\n",
              ok ? "PASS" : "FAIL", 100.0 * worst, lam, el);
  return ok;
}

// ----- 7. gradient oracle ------------------------------------------------------
bool crit_7() {
  Signal x = gen_piecewise_regular(256, 5, RngSpec{11, 0});
  auto bank = build_bank_1d(256, 8, 1);
  auto desc = describe(x, bank, select_coefficients(bank, 3, 1.0, 16));
  double worst = 0.0;
  for (int p = 0; p < 5; ++p) {
    Signal y = x;
    Rng nr(100 + static_cast<std::uint64_t>(p), 0);
    for (auto& v : y.data) v += 0.3 * nr.normal();
    auto [E, g] = loss_gradient(desc, y, bank);
    (void)E;
    double yn = 0.0;
    for (double v : y.data) yn += v * v;
    double step = 1e-6 * std::sqrt(yn);
    double dev = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      Signal yp = y, ym = y;
      yp.data[i] += step;
      ym.data[i] -= step;
      double fd = (loss(desc, yp, bank) - loss(desc, ym, bank)) / (2.0 * step);
      dev = std::max(dev, std::abs(g.data[i] - fd));
      scale = std::max(scale, std::abs(fd));
    }
    worst = std::max(worst, dev / scale);
  }
  double el = toc();
  bool ok = worst <= 1e-4 && el < 30.0;
  std::printf("[%s]  7 gradient oracle: worst relative gap to central differences %.2e (<= 1e-4, "
              "5 perturbed points, N=256, window 3), %.2f s (< 30 s)\n",
              ok ? "PASS" : "FAIL", worst, el);
  return ok;
}

// ----- 8. descriptor invariance and mean flatness ------------------------------
bool crit_8() {
  Signal x = gen_piecewise_regular(1024, 6, RngSpec{0, 0});
  auto bank = build_bank_1d(1024, 10, 1);
  auto sel = select_coefficients(bank, 4, 1.0, 16);
  auto d0 = describe(x, bank, sel);

  Rng rng(77, 0);
  double inv_dev = 0.0;
  for (int t = 0; t < 10; ++t) {
    long tau = static_cast<long>(rng.next_u64() % 1024);
    auto dt = describe(roll(x, tau), bank, sel);
    for (std::size_t i = 0; i < d0.corrs.size(); ++i)
      inv_dev = std::max(inv_dev, std::abs(dt.corrs[i] - d0.corrs[i]));
    for (std::size_t i = 0; i < d0.means.size(); ++i)
      inv_dev = std::max(inv_dev, std::abs(dt.means[i] - d0.means[i]));
  }

  double flat = mean_flatness(d0);
  // replicate the flatness scan to name the extremal channel and harmonic,
  // and measure the same ratio with each harmonic weighted by the rectifier
  // coefficient |hhat(k)| / hhat(0)
  auto rect = hhat_table(PhaseFilter::Kind::rectifier, d0.sel.max_harmonic());
  double best = 0.0, weighted = 0.0;
  int arg_scale = -1, arg_k = -1;
  for (std::size_t c = 0; c < d0.mean_table.size(); ++c) {
    if (d0.sel.chan[c].lowpass) continue;
    double m0 = d0.mean_table[c][0].real();
    if (m0 <= 0.0) continue;
    for (std::size_t k = 1; k < d0.mean_table[c].size(); ++k) {
      double r = std::abs(d0.mean_table[c][k]) / m0;
      if (r > best) {
        best = r;
        arg_scale = d0.sel.chan[c].scale;
        arg_k = static_cast<int>(k);
      }
      double w = std::abs(rect.at(static_cast<int>(k))) / rect.at(0).real();
      weighted = std::max(weighted, w * r);
    }
  }

  double el = toc();
  bool ok = inv_dev <= 1e-12 && flat <= 0.05 && el < 5.0;
  std::printf("[%s]  8 descriptor invariance: shift dev %.2e (<= 1e-12, 10 random shifts), mean "
              "flatness %.4f (<= 0.05), %.2f s (< 5 s)\n",
              ok ? "PASS" : "FAIL", inv_dev, flat, el);
  std::printf("       the invariance half holds; flatness does not transfer to this generator. "
              "Its extremum sits at\n"
              "       channel scale %d, harmonic k=%d: each step edge of the piecewise target "
              "drops a localized phase\n"
              "       atom into every band it meets, and the grid mean of [z]^k over such an "
              "atom keeps a fixed\n"
              "       fraction of the k=0 mass instead of averaging out. Weighting each "
              "harmonic by the rectifier\n"
              "       coefficient |hhat(k)|/hhat(0) gives %.4f, %s the 0.05 gate, so the "
              "clause is reported red\n"
              "       rather than re-weighted.\n",
              arg_scale, arg_k, weighted, weighted > 0.05 ? "still above" : "below");
  return ok;
}

// ----- 9. compressive recovery, 1D headline ------------------------------------
bool crit_9() {
  Signal x = gen_piecewise_regular(1024, 6, RngSpec{0, 0});
  auto bank1 = build_bank_1d(1024, 10, 1);

  std::vector<double> logM, logE;
  double headline_q1 = 0.0;
  std::size_t m_q1 = 0;
  for (int d = 1; d <= 6; ++d) {
    auto desc = describe(x, bank1, select_coefficients(bank1, d, 1.0, 16));
    RecoveryConfig cfg;
    cfg.restarts = d == 6 ? 10 : 3;
    cfg.max_iters = d == 6 ? 800 : 600;
    cfg.rng = {4000, d == 6 ? 0ull : 1000ull * static_cast<std::uint64_t>(d)};
    auto res = reconstruct(desc, bank1, cfg, &x);
    auto al = align_and_psnr(x, res.signal);
    std::printf("       Q=1 window %d: M=%4zu psnr %6.2f dB err %.3e loss %.2e\n", d, desc.size(),
                al.psnr, al.err, res.losses[res.best_restart]);
    std::fflush(stdout);
    logM.push_back(std::log(static_cast<double>(desc.size())));
    logE.push_back(std::log(std::max(al.err, 1e-300)));
    if (d == 6) {
      headline_q1 = al.psnr;
      m_q1 = desc.size();
    }
  }
  double chi = fit_decay(logM, logE);

  auto bank2 = build_bank_1d(1024, 10, 2);
  {
    auto desc = describe(x, bank2, select_coefficients(bank2, 1, 1.0, 16));
    RecoveryConfig cfg;
    cfg.restarts = 3;
    cfg.max_iters = 600;
    cfg.rng = {5000, 1000};
    auto res = reconstruct(desc, bank2, cfg, &x);
    std::printf("       Q=2 window 1: M=%4zu psnr %6.2f dB loss %.2e\n", desc.size(), *res.psnr,
                res.losses[res.best_restart]);
    std::fflush(stdout);
  }
  double headline_q2 = 0.0;
  std::size_t m_q2 = 0;
  {
    auto desc = describe(x, bank2, select_coefficients(bank2, 2, 1.0, 16));
    RecoveryConfig cfg;
    cfg.restarts = 10;
    cfg.max_iters = 3000;
    cfg.rng = {3000, 0};
    auto res = reconstruct(desc, bank2, cfg, &x);
    headline_q2 = *res.psnr;
    m_q2 = desc.size();
    std::printf("       Q=2 window 2: M=%4zu psnr %6.2f dB loss %.2e (10 restarts)\n", desc.size(),
                *res.psnr, res.losses[res.best_restart]);
  }

  double el = toc();
  bool ok = headline_q1 >= 50.0 && headline_q2 >= 50.0 && chi >= 1.3 && chi <= 2.7 && el < 900.0;
  std::printf("[%s]  9 compressive recovery: Q=1 %.2f dB at M=%zu and Q=2 %.2f dB at M=%zu (>= 50 "
              "at M ~ N), decay exponent %.3f (in [1.3, 2.7]), %.0f s (<= 15 min)\n",
              ok ? "PASS" : "FAIL", headline_q1, m_q1, headline_q2, m_q2, chi, el);
  return ok;
}

// ----- 10. non-recoverable counterexample ---------------------------------------
bool crit_10() {
  double w = 2.0 * M_PI / 1024.0;
  Signal x = gen_modulated_cosine(1024, 4.0 * w, 256.0 * w);
  auto bank = build_bank_1d(1024, 10, 1);
  auto desc = describe(x, bank, select_coefficients(bank, 6, 1.0, 16));
  double best = 0.0;
  for (std::uint64_t r = 0; r < 10; ++r) {
    RecoveryConfig cfg;
    cfg.restarts = 1;
    cfg.max_iters = 800;
    cfg.rng = {5000, r};
    auto res = reconstruct(desc, bank, cfg, &x);
    std::printf("       restart %llu: psnr %5.2f dB loss %.2e\n",
                static_cast<unsigned long long>(r), *res.psnr, res.losses[0]);
    std::fflush(stdout);
    best = std::max(best, *res.psnr);
  }
  double el = toc();
  bool ok = best <= 25.0 && el < 900.0;
  std::printf("[%s] 10 counterexample: modulated cosine, best of 10 restarts %.2f dB (<= 25, "
              "M=%zu ~ N), %.0f s (<= 15 min)\n",
              ok ? "PASS" : "FAIL", best, desc.size(), el);
  return ok;
}

// ----- 11. 2D recovery at reduced scale -----------------------------------------
bool crit_11_ci() {
  Signal x = gen_disk(64, 16.0);
  auto bank = build_bank_2d(64, 6, 4);
  struct Pt {
    int delta;
    int iters;
  };
  std::vector<double> psnrs;
  std::size_t last_m = 0;
  for (Pt p : {Pt{2, 1200}, Pt{4, 2200}, Pt{6, 4000}}) {
    auto desc = describe(x, bank, select_coefficients(bank, p.delta, 1.0, 16));
    RecoveryConfig cfg;
    cfg.restarts = 1;
    cfg.max_iters = p.iters;
    cfg.rng = {2000, 0};
    auto res = reconstruct(desc, bank, cfg, &x);
    std::printf("       window %d: M=%4zu psnr %6.2f dB loss %.2e (%d iters)\n", p.delta,
                desc.size(), *res.psnr, res.losses[0], p.iters);
    std::fflush(stdout);
    psnrs.push_back(*res.psnr);
    last_m = desc.size();
  }
  bool mono = psnrs[0] <= psnrs[1] && psnrs[1] <= psnrs[2];
  double el = toc();
  bool ok = mono && psnrs.back() >= 35.0 && el < 1200.0;
  std::printf("[%s] 11 2D recovery (64x64 disk, L=4): psnr %.2f / %.2f / %.2f dB non-decreasing "
              "in the window (%s), %.2f dB at M=%zu (>= 35), %.0f s (<= 20 min)\n",
              ok ? "PASS" : "FAIL", psnrs[0], psnrs[1], psnrs[2], mono ? "yes" : "no",
              psnrs.back(), last_m, el);
  return ok;
}

bool crit_11_full() {
  Signal x = gen_disk(256, 64.0);
  auto bank = build_bank_2d(256, 8, 4);
  struct Pt {
    int delta;
    int iters;
  };
  std::vector<double> logM, logE, psnrs;
  for (Pt p : {Pt{2, 2500}, Pt{4, 3500}, Pt{6, 5000}}) {
    auto desc = describe(x, bank, select_coefficients(bank, p.delta, 1.0, 16));
    RecoveryConfig cfg;
    cfg.restarts = 1;
    cfg.max_iters = p.iters;
    cfg.rng = {2000, 0};
    auto res = reconstruct(desc, bank, cfg, &x);
    auto al = align_and_psnr(x, res.signal);
    std::printf("       window %d: M=%5zu psnr %6.2f dB err %.3e loss %.2e (%d iters)\n", p.delta,
                desc.size(), al.psnr, al.err, res.losses[0], p.iters);
    std::fflush(stdout);
    logM.push_back(std::log(static_cast<double>(desc.size())));
    logE.push_back(std::log(std::max(al.err, 1e-300)));
    psnrs.push_back(al.psnr);
  }
  double chi = fit_decay(logM, logE);
  double el = toc();
  bool ok = chi >= 0.6 && chi <= 1.4;
  std::printf("[%s] 11 2D recovery (256x256 offline study): decay exponent %.3f (in [0.6, 1.4]), "
              "top psnr %.2f dB, %.0f s\n",
              ok ? "PASS" : "FAIL", chi, psnrs.back(), el);
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  bool full = false;
  std::vector<int> which;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--full") == 0) {
      full = true;
      continue;
    }
    int n = std::atoi(argv[i]);
    if (n < 1 || n > 11) {
      std::fprintf(stderr, "usage: acceptance [--full] [criterion numbers 1..11]\n");
      return 64;
    }
    which.push_back(n);
  }
  if (which.empty())
    for (int n = 1; n <= 11; ++n) which.push_back(n);

  int failed = 0;
  for (int n : which) {
    g_t0 = clk::now();
    bool ok = true;
    switch (n) {
      case 1: ok = crit_1(); break;
      case 2: ok = crit_2(); break;
      case 3: ok = crit_3(); break;
      case 4: ok = crit_4(); break;
      case 5: ok = crit_5(); break;
      case 6: ok = crit_6(); break;
      case 7: ok = crit_7(); break;
      case 8: ok = crit_8(); break;
      case 9: ok = crit_9(); break;
      case 10: ok = crit_10(); break;
      case 11: ok = full ? crit_11_full() : crit_11_ci(); break;
    }
    std::fflush(stdout);
    if (!ok) ++failed;
  }
  if (which.size() > 1) std::printf("%d of %zu criteria failed\n", failed, which.size());
  return failed;
}
