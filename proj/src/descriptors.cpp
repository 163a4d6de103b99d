#include "wph/descriptors.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <tuple>

#include <json.hpp>

namespace wph {

namespace {

using json = nlohmann::json;

// [z]^k for signed k from the nonnegative power table
cplx signed_power(const std::vector<cvec>& pows, int k, std::size_t u) {
  if (k >= 0) return pows[static_cast<std::size_t>(k)][u];
  return std::conj(pows[static_cast<std::size_t>(-k)][u]);
}

std::vector<std::vector<cvec>> power_tables(const AnalyticCoefficients& wx, int smax) {
  std::vector<std::vector<cvec>> tabs;
  tabs.reserve(wx.nch());
  for (const auto& z : wx.coeffs) tabs.push_back(harmonic_powers(z, smax));
  return tabs;
}

cplx table_mean(const cvec& v) {
  cplx acc{0.0, 0.0};
  for (const auto& x : v) acc += x;
  return acc / static_cast<double>(v.size());
}

void check_channel(std::size_t c, std::size_t nch) {
  if (c >= nch)
    throw std::invalid_argument("selection references channel " + std::to_string(c) +
                                " beyond the bank (" + std::to_string(nch) + " channels)");
}

}  // namespace

int SelectionIndex::max_harmonic() const {
  int smax = 1;
  for (const auto& m : means) smax = std::max(smax, std::abs(m.k));
  for (const auto& e : corrs) smax = std::max({smax, std::abs(e.k), std::abs(e.kp)});
  return smax;
}

SelectionIndex select_coefficients(const FilterBank& bank, int delta, double beta, int kpmax,
                                   bool include_lowpass, bool cross_angles) {
  if (beta <= 0.0) throw std::invalid_argument("beta must be positive");
  if (kpmax < 1) throw std::invalid_argument("kpmax must be at least 1");
  double lg = std::log2(static_cast<double>(bank.N));
  if (delta < 1 || static_cast<double>(delta) > lg)
    throw std::invalid_argument("octave window must satisfy 1 <= delta <= log2(N)");

  SelectionIndex sel;
  sel.delta = delta;
  sel.beta = beta;
  sel.kpmax = kpmax;
  sel.include_lowpass = include_lowpass;
  sel.cross_angles = cross_angles;
  sel.chan.reserve(bank.nch());
  for (const auto& ch : bank.channels)
    sel.chan.push_back({ch.scale, ch.q, ch.ell, ch.lowpass, ch.lam});

  const double tol = 1e-12;
  for (std::size_t ca = 0; ca < bank.nch(); ++ca) {
    const Channel& a = bank.channels[ca];
    if (a.lowpass && !include_lowpass) continue;
    for (std::size_t cb = 0; cb < bank.nch(); ++cb) {
      const Channel& b = bank.channels[cb];
      if (b.lowpass && !include_lowpass) continue;
      if (b.lam > a.lam) continue;
      if (std::abs(a.scale - b.scale) > delta * bank.Q) continue;
      if (bank.d == 2 && !a.lowpass && !b.lowpass && a.scale != b.scale &&
          a.ell != b.ell && !cross_angles)
        continue;
      int kp_hi = (a.lowpass || b.lowpass) ? 1 : kpmax;
      for (int k = 0; k <= 1; ++k) {
        for (int kp = 0; kp <= kp_hi; ++kp) {
          double dx = k * a.center[0] - kp * b.center[0];
          double dy = k * a.center[1] - kp * b.center[1];
          if (std::hypot(dx, dy) <= beta * (a.lam + b.lam) + tol)
            sel.corrs.push_back({ca, k, cb, kp});
        }
      }
    }
  }
  auto key = [&](const SelEntry& e) {
    const auto& a = sel.chan[e.ca];
    const auto& b = sel.chan[e.cb];
    return std::make_tuple(a.scale, a.ell, e.k, b.scale, b.ell, e.kp,
                           static_cast<int>(e.ca), static_cast<int>(e.cb));
  };
  std::stable_sort(sel.corrs.begin(), sel.corrs.end(),
                   [&](const SelEntry& x, const SelEntry& y) { return key(x) < key(y); });
  sel.corrs.erase(std::unique(sel.corrs.begin(), sel.corrs.end(),
                              [](const SelEntry& x, const SelEntry& y) {
                                return x.ca == y.ca && x.k == y.k && x.cb == y.cb && x.kp == y.kp;
                              }),
                  sel.corrs.end());

  std::vector<std::size_t> order(bank.nch());
  for (std::size_t c = 0; c < bank.nch(); ++c) order[c] = c;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return std::make_tuple(sel.chan[x].scale, sel.chan[x].ell) <
           std::make_tuple(sel.chan[y].scale, sel.chan[y].ell);
  });
  for (std::size_t c : order) {
    if (sel.chan[c].lowpass && !include_lowpass) continue;
    sel.means.push_back({c, 0});
    sel.means.push_back({c, 1});
  }
  return sel;
}

std::vector<cplx> mean_vector(const AnalyticCoefficients& wx, const std::vector<MeanEntry>& means) {
  int smax = 1;
  for (const auto& m : means) {
    check_channel(m.c, wx.nch());
    smax = std::max(smax, std::abs(m.k));
  }
  auto tabs = power_tables(wx, smax);
  std::vector<cplx> out;
  out.reserve(means.size());
  for (const auto& m : means) {
    cplx v = table_mean(tabs[m.c][static_cast<std::size_t>(std::abs(m.k))]);
    out.push_back(m.k >= 0 ? v : std::conj(v));
  }
  return out;
}

std::vector<cplx> correlation(const AnalyticCoefficients& wx, const std::vector<SelEntry>& ents) {
  int smax = 1;
  for (const auto& e : ents) {
    check_channel(e.ca, wx.nch());
    check_channel(e.cb, wx.nch());
    smax = std::max({smax, std::abs(e.k), std::abs(e.kp)});
  }
  auto tabs = power_tables(wx, smax);
  std::size_t n = wx.coeffs.empty() ? 0 : wx.coeffs[0].size();
  std::vector<cplx> out;
  out.reserve(ents.size());
  for (const auto& e : ents) {
    cplx acc{0.0, 0.0};
    for (std::size_t u = 0; u < n; ++u)
      acc += signed_power(tabs[e.ca], -e.k, u) * signed_power(tabs[e.cb], e.kp, u);
    out.push_back(acc / static_cast<double>(n));
  }
  return out;
}

DescriptorSet describe(const Signal& x, const FilterBank& bank, const SelectionIndex& sel) {
  if (sel.chan.size() != bank.nch())
    throw std::invalid_argument("selection was built for a different bank layout");
  DescriptorSet desc;
  desc.sel = sel;
  desc.d = static_cast<std::size_t>(bank.d);
  desc.n = bank.N;

  auto wx = analyze(x, bank);
  int smax = sel.max_harmonic();
  auto tabs = power_tables(wx, smax);
  std::size_t n = x.size();

  desc.mean_table.assign(bank.nch(), std::vector<cplx>(static_cast<std::size_t>(smax) + 1));
  for (std::size_t c = 0; c < bank.nch(); ++c)
    for (int k = 0; k <= smax; ++k)
      desc.mean_table[c][static_cast<std::size_t>(k)] = table_mean(tabs[c][static_cast<std::size_t>(k)]);

  desc.means.reserve(sel.means.size());
  for (const auto& m : sel.means) {
    cplx v = desc.mean_table[m.c][static_cast<std::size_t>(std::abs(m.k))];
    desc.means.push_back(m.k >= 0 ? v : std::conj(v));
  }
  desc.corrs.reserve(sel.corrs.size());
  for (const auto& e : sel.corrs) {
    cplx acc{0.0, 0.0};
    for (std::size_t u = 0; u < n; ++u)
      acc += signed_power(tabs[e.ca], -e.k, u) * signed_power(tabs[e.cb], e.kp, u);
    desc.corrs.push_back(acc / static_cast<double>(n));
  }
  return desc;
}

std::vector<cplx> covariance(const DescriptorSet& desc) {
  std::vector<cplx> out;
  out.reserve(desc.corrs.size());
  for (std::size_t i = 0; i < desc.corrs.size(); ++i) {
    const auto& e = desc.sel.corrs[i];
    cplx ma = desc.mean_table[e.ca][static_cast<std::size_t>(e.k)];
    cplx mb = desc.mean_table[e.cb][static_cast<std::size_t>(e.kp)];
    out.push_back(desc.corrs[i] - ma * std::conj(mb));
  }
  return out;
}

std::vector<cvec> phase_domain_matrix(const AnalyticCoefficients& wx, const PhaseFilter& h,
                                      std::size_t ca, std::size_t cb,
                                      const std::vector<double>& alphas) {
  check_channel(ca, wx.nch());
  check_channel(cb, wx.nch());
  const int K = h.kmax;
  const std::size_t A = alphas.size();
  if (A < 2 * static_cast<std::size_t>(K) + 1)
    throw std::invalid_argument("phase grid too coarse for the window: need at least 2*kmax+1 points");

  auto pa = harmonic_powers(wx.coeffs[ca], K);
  auto pb = harmonic_powers(wx.coeffs[cb], K);
  std::size_t n = wx.coeffs[ca].size();
  const std::size_t W = 2 * static_cast<std::size_t>(K) + 1;  // index k + K
  std::vector<cplx> chat(W * W);
  for (int k = -K; k <= K; ++k)
    for (int kp = -K; kp <= K; ++kp) {
      cplx acc{0.0, 0.0};
      for (std::size_t u = 0; u < n; ++u)
        acc += signed_power(pa, -k, u) * signed_power(pb, kp, u);
      chat[static_cast<std::size_t>(k + K) * W + static_cast<std::size_t>(kp + K)] =
          acc / static_cast<double>(n);
    }

  // fold the second axis first, then the first: O(W^2 A + W A^2)
  std::vector<cplx> half(W * A);
  for (int k = -K; k <= K; ++k)
    for (std::size_t j = 0; j < A; ++j) {
      cplx acc{0.0, 0.0};
      for (int kp = -K; kp <= K; ++kp)
        acc += std::conj(h.at(kp)) *
               chat[static_cast<std::size_t>(k + K) * W + static_cast<std::size_t>(kp + K)] *
               std::polar(1.0, -kp * alphas[j]);
      half[static_cast<std::size_t>(k + K) * A + j] = acc;
    }
  std::vector<cvec> out(A, cvec(A));
  for (std::size_t i = 0; i < A; ++i)
    for (std::size_t j = 0; j < A; ++j) {
      cplx acc{0.0, 0.0};
      for (int k = -K; k <= K; ++k)
        acc += h.at(k) * std::polar(1.0, k * alphas[i]) * half[static_cast<std::size_t>(k + K) * A + j];
      out[i][j] = acc;
    }
  return out;
}

double mean_flatness(const DescriptorSet& desc) {
  double worst = 0.0;
  for (std::size_t c = 0; c < desc.mean_table.size(); ++c) {
    if (desc.sel.chan[c].lowpass) continue;
    double m0 = desc.mean_table[c][0].real();
    if (m0 <= 0.0) continue;
    for (std::size_t k = 1; k < desc.mean_table[c].size(); ++k)
      worst = std::max(worst, std::abs(desc.mean_table[c][k]) / m0);
  }
  return worst;
}

std::string descriptor_set_to_json(const DescriptorSet& desc) {
  json j;
  j["params"] = {{"delta", desc.sel.delta},
                 {"beta", desc.sel.beta},
                 {"kpmax", desc.sel.kpmax},
                 {"include_lowpass", desc.sel.include_lowpass},
                 {"cross_angles", desc.sel.cross_angles}};
  j["grid"] = {{"n", desc.n}, {"d", desc.d}};
  j["channels"] = json::array();
  for (const auto& c : desc.sel.chan)
    j["channels"].push_back({{"scale", c.scale},
                             {"q", c.q},
                             {"ell", c.ell},
                             {"lowpass", c.lowpass},
                             {"lam", c.lam}});
  j["means"] = json::array();
  for (std::size_t i = 0; i < desc.sel.means.size(); ++i) {
    const auto& m = desc.sel.means[i];
    j["means"].push_back(
        {{"c", m.c}, {"k", m.k}, {"re", desc.means[i].real()}, {"im", desc.means[i].imag()}});
  }
  j["corrs"] = json::array();
  for (std::size_t i = 0; i < desc.sel.corrs.size(); ++i) {
    const auto& e = desc.sel.corrs[i];
    j["corrs"].push_back({{"ca", e.ca},
                          {"k", e.k},
                          {"cb", e.cb},
                          {"kp", e.kp},
                          {"re", desc.corrs[i].real()},
                          {"im", desc.corrs[i].imag()}});
  }
  j["mean_table"] = json::array();
  for (const auto& row : desc.mean_table) {
    json r = json::array();
    for (const auto& v : row) r.push_back({v.real(), v.imag()});
    j["mean_table"].push_back(r);
  }
  return j.dump(2);
}

DescriptorSet descriptor_set_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("descriptor file is not valid JSON: ") + e.what());
  }
  DescriptorSet desc;
  try {
    const auto& p = j.at("params");
    desc.sel.delta = p.at("delta").get<int>();
    desc.sel.beta = p.at("beta").get<double>();
    desc.sel.kpmax = p.at("kpmax").get<int>();
    desc.sel.include_lowpass = p.at("include_lowpass").get<bool>();
    desc.sel.cross_angles = p.at("cross_angles").get<bool>();
    desc.n = j.at("grid").at("n").get<std::size_t>();
    desc.d = j.at("grid").at("d").get<std::size_t>();
    for (const auto& c : j.at("channels"))
      desc.sel.chan.push_back({c.at("scale").get<int>(), c.at("q").get<int>(),
                               c.at("ell").get<int>(), c.at("lowpass").get<bool>(),
                               c.at("lam").get<double>()});
    for (const auto& m : j.at("means")) {
      desc.sel.means.push_back({m.at("c").get<std::size_t>(), m.at("k").get<int>()});
      desc.means.emplace_back(m.at("re").get<double>(), m.at("im").get<double>());
    }
    for (const auto& e : j.at("corrs")) {
      desc.sel.corrs.push_back({e.at("ca").get<std::size_t>(), e.at("k").get<int>(),
                                e.at("cb").get<std::size_t>(), e.at("kp").get<int>()});
      desc.corrs.emplace_back(e.at("re").get<double>(), e.at("im").get<double>());
    }
    for (const auto& row : j.at("mean_table")) {
      std::vector<cplx> r;
      for (const auto& v : row) r.emplace_back(v.at(0).get<double>(), v.at(1).get<double>());
      desc.mean_table.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("descriptor file missing fields: ") + e.what());
  }
  return desc;
}

}  // namespace wph
