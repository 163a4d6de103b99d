#include "wph/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <deque>
#include <limits>
#include <stdexcept>
#include <string>

#include "wph/fft.hpp"
#include "wph/phase_harmonics.hpp"
#include "wph/transform.hpp"

namespace wph {

namespace {

// Shared objective state: target statistics plus per-channel harmonic ranges.
struct Evaluator {
  const FilterBank& bank;
  const DescriptorSet& desc;
  std::vector<int> smax;  // per channel, largest |harmonic| it appears with
  std::size_t n = 0;      // grid points
  double inv = 0.0;

  Evaluator(const DescriptorSet& d, const FilterBank& b) : bank(b), desc(d) {
    if (d.sel.chan.size() != b.nch())
      throw std::invalid_argument("descriptor selection does not match the bank layout");
    if (d.n != b.N || d.d != static_cast<std::size_t>(b.d))
      throw std::invalid_argument("descriptor grid does not match the bank grid");
    for (std::size_t c = 0; c < b.nch(); ++c)
      if (d.sel.chan[c].scale != b.channels[c].scale ||
          d.sel.chan[c].lowpass != b.channels[c].lowpass)
        throw std::invalid_argument("descriptor selection does not match the bank layout");
    if (d.corrs.size() != d.sel.corrs.size() || d.means.size() != d.sel.means.size())
      throw std::invalid_argument("descriptor values misaligned with their selection");
    smax.assign(b.nch(), 1);
    auto bump_slot = [&](std::size_t c, int k) {
      if (c >= b.nch()) throw std::invalid_argument("descriptor entry references a missing channel");
      smax[c] = std::max(smax[c], std::abs(k));
    };
    for (const auto& e : d.sel.corrs) {
      bump_slot(e.ca, e.k);
      bump_slot(e.cb, e.kp);
    }
    for (const auto& m : d.sel.means) bump_slot(m.c, m.k);
    for (std::size_t c = 0; c < b.nch(); ++c)
      if (d.mean_table.size() <= c ||
          d.mean_table[c].size() <= static_cast<std::size_t>(smax[c]))
        throw std::invalid_argument("descriptor mean table too small for its selection");
    n = 1;
    for (int a = 0; a < b.d; ++a) n *= b.N;
    inv = 1.0 / static_cast<double>(n);
  }

  cplx target_mean(std::size_t c, int k) const {
    cplx v = desc.mean_table[c][static_cast<std::size_t>(std::abs(k))];
    return k >= 0 ? v : std::conj(v);
  }

  static cplx pw(const std::vector<cvec>& tab, int s, std::size_t u) {
    if (s >= 0) return tab[static_cast<std::size_t>(s)][u];
    return std::conj(tab[static_cast<std::size_t>(-s)][u]);
  }

  // accumulate c += a * (vector at signed power s), the entry-loop hot path
  static void axpy_pow(cvec& acc, cplx a, const std::vector<cvec>& tab, int s) {
    if (s >= 0) {
      const cvec& v = tab[static_cast<std::size_t>(s)];
      for (std::size_t u = 0; u < acc.size(); ++u) acc[u] += a * v[u];
    } else {
      const cvec& v = tab[static_cast<std::size_t>(-s)];
      for (std::size_t u = 0; u < acc.size(); ++u) acc[u] += a * std::conj(v[u]);
    }
  }

  double eval(const std::vector<double>& yv, std::vector<double>* grad) const {
    Signal y(std::vector<std::size_t>(static_cast<std::size_t>(bank.d), bank.N));
    y.data = yv;
    auto wx = analyze(y, bank);
    std::size_t nc = bank.nch();
    std::vector<std::vector<cvec>> tabs(nc);
    for (std::size_t c = 0; c < nc; ++c) tabs[c] = harmonic_powers(wx.coeffs[c], smax[c]);

    // grid means of [z]^k per channel, k = 0..smax
    std::vector<std::vector<cplx>> my(nc);
    for (std::size_t c = 0; c < nc; ++c) {
      my[c].resize(static_cast<std::size_t>(smax[c]) + 1);
      for (int k = 0; k <= smax[c]; ++k) {
        cplx acc{0.0, 0.0};
        const cvec& v = tabs[c][static_cast<std::size_t>(k)];
        for (const auto& e : v) acc += e;
        my[c][static_cast<std::size_t>(k)] = acc * inv;
      }
    }
    auto cur_mean = [&](std::size_t c, int k) {
      cplx v = my[c][static_cast<std::size_t>(std::abs(k))];
      return k >= 0 ? v : std::conj(v);
    };

    // signed-power cotangent slots per channel: a vector part and a constant part
    std::vector<std::vector<cvec>> cot_vec;
    std::vector<std::vector<cplx>> cot_sc;
    if (grad) {
      cot_vec.resize(nc);
      cot_sc.resize(nc);
      for (std::size_t c = 0; c < nc; ++c) {
        cot_vec[c].resize(2 * static_cast<std::size_t>(smax[c]) + 1);
        cot_sc[c].assign(2 * static_cast<std::size_t>(smax[c]) + 1, cplx{0.0, 0.0});
      }
    }
    auto vec_slot = [&](std::size_t c, int s) -> cvec& {
      auto& v = cot_vec[c][static_cast<std::size_t>(s + smax[c])];
      if (v.empty()) v.assign(n, cplx{0.0, 0.0});
      return v;
    };
    auto sc_slot = [&](std::size_t c, int s) -> cplx& {
      return cot_sc[c][static_cast<std::size_t>(s + smax[c])];
    };

    double E = 0.0;
    for (std::size_t i = 0; i < desc.sel.corrs.size(); ++i) {
      const auto& e = desc.sel.corrs[i];
      cplx cy{0.0, 0.0};
      for (std::size_t u = 0; u < n; ++u) cy += pw(tabs[e.ca], -e.k, u) * pw(tabs[e.cb], e.kp, u);
      cy *= inv;
      cplx mxa = target_mean(e.ca, e.k), mxb = target_mean(e.cb, e.kp);
      cplx mya = cur_mean(e.ca, e.k), myb = cur_mean(e.cb, e.kp);
      cplx T = (cy - desc.corrs[i]) - mya * std::conj(mxb) - mxa * std::conj(myb) +
               2.0 * mxa * std::conj(mxb);
      E += std::norm(T);
      if (grad) {
        cplx cT = std::conj(T);
        axpy_pow(vec_slot(e.ca, -e.k), cT * inv, tabs[e.cb], e.kp);
        axpy_pow(vec_slot(e.cb, -e.kp), std::conj(cT) * inv, tabs[e.ca], e.k);
        sc_slot(e.ca, e.k) += cT * (-std::conj(mxb));
        sc_slot(e.cb, e.kp) += T * (-std::conj(mxa));
      }
    }
    for (std::size_t i = 0; i < desc.sel.means.size(); ++i) {
      const auto& m = desc.sel.means[i];
      cplx dm = cur_mean(m.c, m.k) - desc.means[i];
      E += std::norm(dm);
      if (grad) sc_slot(m.c, m.k) += std::conj(dm);
    }
    if (!grad) return E;

    // back-propagate each [z]^s slot into a z cotangent, then through the bank
    std::vector<cvec> G(nc);
    for (std::size_t c = 0; c < nc; ++c) {
      cvec cz(n, cplx{0.0, 0.0});
      const cvec& z = wx.coeffs[c];
      for (int s = -smax[c]; s <= smax[c]; ++s) {
        const cvec& vpart = cot_vec[c][static_cast<std::size_t>(s + smax[c])];
        cplx spart = cot_sc[c][static_cast<std::size_t>(s + smax[c])] * inv;
        if (vpart.empty() && spart == cplx{0.0, 0.0}) continue;
        for (std::size_t u = 0; u < n; ++u) {
          double a = std::abs(z[u]);
          if (a == 0.0) continue;
          cplx cf = spart;
          if (!vpart.empty()) cf += vpart[u];
          if (cf == cplx{0.0, 0.0}) continue;
          cplx unit = z[u] / a;
          cplx cval = cf * (pw(tabs[c], s, u) / a);
          cplx q{cval.real(), s * cval.imag()};
          cz[u] += q * std::conj(unit);
        }
      }
      for (auto& v : cz) v = 2.0 * std::conj(v);
      G[c] = std::move(cz);
    }
    Signal gsig = analyze_adjoint(G, bank);
    *grad = std::move(gsig.data);
    return E;
  }
};

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double l2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

struct LbfgsOut {
  std::vector<double> y;
  double f = std::numeric_limits<double>::quiet_NaN();
  int iters = 0;
  std::vector<double> trace;
};

// cubic minimizer of a function with values/derivatives at two points,
// safeguarded into the open interval (Nocedal & Wright eq. 3.59)
double cubic_min(double a, double fa, double da, double b, double fb, double db) {
  double d1 = da + db - 3.0 * (fa - fb) / (a - b);
  double disc = d1 * d1 - da * db;
  if (disc < 0.0) return 0.5 * (a + b);
  double d2 = std::sqrt(disc) * (b > a ? 1.0 : -1.0);
  double t = b - (b - a) * (db + d2 - d1) / (db - da + 2.0 * d2);
  if (!std::isfinite(t)) return 0.5 * (a + b);
  double lo = std::min(a, b), hi = std::max(a, b);
  double margin = 0.1 * (hi - lo);
  return std::clamp(t, lo + margin, hi - margin);
}

LbfgsOut lbfgs_minimize(const Evaluator& ev, std::vector<double> y, const RecoveryConfig& cfg) {
  LbfgsOut out;
  std::size_t n = y.size();
  std::vector<double> g(n);
  double f = ev.eval(y, &g);
  out.trace.push_back(f);

  std::deque<std::vector<double>> sk, yk;
  std::deque<double> rho;
  double gamma = 1.0;

  std::vector<double> d(n), ycand(n), gcand(n);
  for (int iter = 1; iter <= cfg.max_iters; ++iter) {
    if (!std::isfinite(f)) break;
    double gn = l2(g);
    if (gn / std::max(1.0, f) <= cfg.grad_tol) break;

    // two-loop recursion for d = -H g
    d = g;
    std::vector<double> alpha(sk.size());
    for (std::size_t i = sk.size(); i-- > 0;) {
      alpha[i] = rho[i] * dot(sk[i], d);
      for (std::size_t u = 0; u < n; ++u) d[u] -= alpha[i] * yk[i][u];
    }
    for (auto& v : d) v *= gamma;
    for (std::size_t i = 0; i < sk.size(); ++i) {
      double beta = rho[i] * dot(yk[i], d);
      for (std::size_t u = 0; u < n; ++u) d[u] += (alpha[i] - beta) * sk[i][u];
    }
    for (auto& v : d) v = -v;

    double dphi0 = dot(g, d);
    if (dphi0 >= 0.0) {  // history lost descent: restart from steepest descent
      sk.clear();
      yk.clear();
      rho.clear();
      gamma = 1.0;
      for (std::size_t u = 0; u < n; ++u) d[u] = -g[u];
      dphi0 = -gn * gn;
      if (dphi0 == 0.0) break;
    }

    // strong Wolfe line search, bracket then zoom
    double f0 = f;
    auto phi = [&](double a) {
      for (std::size_t u = 0; u < n; ++u) ycand[u] = y[u] + a * d[u];
      return ev.eval(ycand, &gcand);
    };
    double lo = 0.0, flo = f0, dlo = dphi0;
    double hi = -1.0, fhi = 0.0, dhi = 0.0;
    double a = (iter == 1) ? std::min(1.0, 1.0 / std::max(gn, 1e-300)) : 1.0;
    double aprev = 0.0, fprev = f0, dprev = dphi0;
    bool have_bracket = false, accepted = false;
    double fa = 0.0, da = 0.0;
    for (int tries = 0; tries < 20 && !have_bracket && !accepted; ++tries) {
      fa = phi(a);
      da = dot(gcand, d);
      if (!std::isfinite(fa) || fa > f0 + cfg.c1 * a * dphi0 || (tries > 0 && fa >= fprev)) {
        lo = aprev;
        flo = fprev;
        dlo = dprev;
        hi = a;
        fhi = fa;
        dhi = da;
        have_bracket = true;
        break;
      }
      if (std::abs(da) <= -cfg.c2 * dphi0) {
        accepted = true;
        break;
      }
      if (da >= 0.0) {
        lo = a;
        flo = fa;
        dlo = da;
        hi = aprev;
        fhi = fprev;
        dhi = dprev;
        have_bracket = true;
        break;
      }
      aprev = a;
      fprev = fa;
      dprev = da;
      a *= 2.0;
      if (a > 1e10) break;
    }
    if (have_bracket && !accepted) {
      for (int zi = 0; zi < 30; ++zi) {
        if (!std::isfinite(fhi)) {  // shrink toward the finite end
          a = lo + 0.5 * (hi - lo);
        } else {
          a = cubic_min(lo, flo, dlo, hi, fhi, dhi);
        }
        fa = phi(a);
        da = dot(gcand, d);
        if (!std::isfinite(fa) || fa > f0 + cfg.c1 * a * dphi0 || fa >= flo) {
          hi = a;
          fhi = fa;
          dhi = da;
        } else {
          if (std::abs(da) <= -cfg.c2 * dphi0) {
            accepted = true;
            break;
          }
          if (da * (hi - lo) >= 0.0) {
            hi = lo;
            fhi = flo;
            dhi = dlo;
          }
          lo = a;
          flo = fa;
          dlo = da;
        }
        if (std::abs(hi - lo) < 1e-16 * std::max(1.0, std::abs(lo))) break;
      }
      // a sufficient-decrease point is still usable without curvature
      if (!accepted && std::isfinite(flo) && flo < f0 && lo > 0.0) {
        a = lo;
        fa = phi(a);
        da = dot(gcand, d);
        accepted = true;
      }
    }
    if (!accepted) break;  // line search exhausted: stationary for our purposes

    std::vector<double> step(n), dg(n);
    for (std::size_t u = 0; u < n; ++u) {
      step[u] = a * d[u];
      dg[u] = gcand[u] - g[u];
    }
    double sy = dot(step, dg);
    if (sy > 1e-10 * l2(step) * l2(dg)) {
      sk.push_back(step);
      yk.push_back(dg);
      rho.push_back(1.0 / sy);
      gamma = sy / dot(dg, dg);
      if (static_cast<int>(sk.size()) > cfg.memory) {
        sk.pop_front();
        yk.pop_front();
        rho.pop_front();
      }
    }
    for (std::size_t u = 0; u < n; ++u) y[u] += step[u];
    f = fa;
    g = gcand;
    out.iters = iter;
    out.trace.push_back(f);
  }
  out.y = std::move(y);
  out.f = f;
  return out;
}

void validate_config(const RecoveryConfig& cfg) {
  if (cfg.restarts < 1) throw std::invalid_argument("need at least one restart");
  if (!(cfg.c1 > 0.0 && cfg.c1 < cfg.c2 && cfg.c2 < 1.0))
    throw std::invalid_argument("line-search constants must satisfy 0 < c1 < c2 < 1");
  if (cfg.memory < 1) throw std::invalid_argument("history length must be positive");
  if (cfg.max_iters < 1) throw std::invalid_argument("iteration cap must be positive");
}

}  // namespace

double loss(const DescriptorSet& desc, const Signal& y, const FilterBank& bank) {
  Evaluator ev(desc, bank);
  if (y.size() != ev.n) throw std::invalid_argument("signal does not match the descriptor grid");
  return ev.eval(y.data, nullptr);
}

std::pair<double, Signal> loss_gradient(const DescriptorSet& desc, const Signal& y,
                                        const FilterBank& bank) {
  Evaluator ev(desc, bank);
  if (y.size() != ev.n) throw std::invalid_argument("signal does not match the descriptor grid");
  std::vector<double> g;
  double E = ev.eval(y.data, &g);
  Signal gs(y.shape);
  gs.data = std::move(g);
  return {E, gs};
}

RecoveryResult reconstruct(const DescriptorSet& desc, const FilterBank& bank,
                           const RecoveryConfig& cfg, const Signal* reference) {
  validate_config(cfg);
  Evaluator ev(desc, bank);

  // start restarts at the target's scale: total first-harmonic diagonal energy
  double var_est = 0.0;
  for (std::size_t i = 0; i < desc.sel.corrs.size(); ++i) {
    const auto& e = desc.sel.corrs[i];
    if (e.ca == e.cb && e.k == 1 && e.kp == 1) var_est += desc.corrs[i].real();
  }
  double std0 = cfg.init_scale * std::sqrt(std::max(var_est, 0.0));

  RecoveryResult res;
  res.M = desc.size();
  std::vector<LbfgsOut> runs;
  runs.reserve(static_cast<std::size_t>(cfg.restarts));
  for (int r = 0; r < cfg.restarts; ++r) {
    Rng rng(cfg.rng.seed, cfg.rng.stream + static_cast<std::uint64_t>(r));
    std::vector<double> y0(ev.n);
    for (auto& v : y0) v = std0 * rng.normal();
    runs.push_back(lbfgs_minimize(ev, std::move(y0), cfg));
    res.losses.push_back(runs.back().f);
    res.iterations.push_back(runs.back().iters);
  }
  std::size_t best = runs.size();
  for (std::size_t r = 0; r < runs.size(); ++r)
    if (std::isfinite(runs[r].f) && (best == runs.size() || runs[r].f < runs[best].f)) best = r;
  if (best == runs.size()) {
    std::string msg = "all restarts diverged; final losses:";
    for (double v : res.losses) msg += " " + std::to_string(v);
    throw std::runtime_error(msg);
  }
  res.best_restart = best;
  res.trace = runs[best].trace;
  res.signal = Signal(std::vector<std::size_t>(static_cast<std::size_t>(bank.d), bank.N));
  res.signal.data = std::move(runs[best].y);
  if (reference) res.psnr = align_and_psnr(*reference, res.signal).psnr;
  return res;
}

Alignment align_and_psnr(const Signal& x, const Signal& y) {
  if (x.shape != y.shape) throw std::invalid_argument("alignment needs matching shapes");
  double mx = 0.0;
  for (double v : x.data) mx = std::max(mx, std::abs(v));
  if (mx == 0.0) throw std::invalid_argument("PSNR is undefined against a zero reference");

  // corr[t] = sum_u y[u+t] x[u]; peak at t = s when y = x delayed by s
  auto xs = fft_real(x.data, x.shape);
  auto ys = fft_real(y.data, y.shape);
  for (std::size_t i = 0; i < ys.size(); ++i) ys[i] *= std::conj(xs[i]);
  auto corr = ifft(ys, x.shape);
  std::size_t arg = 0;
  for (std::size_t i = 1; i < corr.size(); ++i)
    if (corr[i].real() > corr[arg].real()) arg = i;

  Alignment out;
  std::size_t n = x.shape[0];
  std::vector<long> tau;
  if (x.dim() == 1) {
    tau = {static_cast<long>(arg)};
  } else {
    tau = {static_cast<long>(arg / x.shape[1]), static_cast<long>(arg % x.shape[1])};
  }
  out.shift = tau;

  double err2 = 0.0;
  if (x.dim() == 1) {
    long ln = static_cast<long>(n);
    for (long u = 0; u < ln; ++u) {
      double d = x.data[static_cast<std::size_t>(u)] -
                 y.data[static_cast<std::size_t>(((u + tau[0]) % ln + ln) % ln)];
      err2 += d * d;
    }
  } else {
    long rows = static_cast<long>(x.shape[0]), cols = static_cast<long>(x.shape[1]);
    for (long i = 0; i < rows; ++i)
      for (long j = 0; j < cols; ++j) {
        long si = ((i + tau[0]) % rows + rows) % rows;
        long sj = ((j + tau[1]) % cols + cols) % cols;
        double d = x.data[static_cast<std::size_t>(i * cols + j)] -
                   y.data[static_cast<std::size_t>(si * cols + sj)];
        err2 += d * d;
      }
  }
  out.err = std::sqrt(err2);
  if (out.err == 0.0) {
    out.psnr = 300.0;
  } else {
    double scale = std::sqrt(static_cast<double>(x.size())) * mx;
    out.psnr = std::min(300.0, 20.0 * std::log10(scale / out.err));
  }
  return out;
}

SweepResult decay_sweep(const Signal& x, const FilterBank& bank, const std::vector<int>& deltas,
                        const RecoveryConfig& cfg, double beta, int kpmax) {
  if (deltas.empty()) throw std::invalid_argument("sweep needs at least one octave window");
  for (std::size_t i = 1; i < deltas.size(); ++i)
    if (deltas[i] <= deltas[i - 1])
      throw std::invalid_argument("octave windows must be strictly ascending");

  SweepResult out;
  for (int delta : deltas) {
    auto sel = select_coefficients(bank, delta, beta, kpmax);
    auto desc = describe(x, bank, sel);
    auto res = reconstruct(desc, bank, cfg, nullptr);
    auto al = align_and_psnr(x, res.signal);
    out.rows.push_back({delta, desc.size(), al.psnr, al.err, res.losses[res.best_restart]});
  }
  if (out.rows.size() >= 2) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    double m = static_cast<double>(out.rows.size());
    for (const auto& r : out.rows) {
      double lx = std::log(static_cast<double>(r.M));
      double ly = std::log(std::max(r.err, 1e-300));
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
    }
    double denom = m * sxx - sx * sx;
    if (denom > 0.0) out.chi = -(m * sxy - sx * sy) / denom;
  }
  return out;
}

}  // namespace wph
