// Command-line front end: signal generation, filter-bank verification,
// descriptor computation, reconstruction, decay sweeps, and the analytic
// phase-filter tables. Every report is JSON; sweeps emit CSV.
//
// Exit codes: 0 success, 2 validation error (bad flags or module
// preconditions), 1 runtime failure.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "wph/descriptors.hpp"
#include "wph/filterbank.hpp"
#include "wph/phase_harmonics.hpp"
#include "wph/recovery.hpp"
#include "wph/signal.hpp"

using nlohmann::json;
using namespace wph;

namespace {

void emit(const json& j, const std::string& path) {
  if (path.empty()) {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << j.dump(2) << "\n";
}

void emit_text(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << text;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct BankFlags {
  int j = -1;
  int q = 1;
  int l = 8;
};

void add_bank_flags(CLI::App* sub, BankFlags& bf) {
  sub->add_option("--j", bf.j, "number of octaves J")->required();
  sub->add_option("--q", bf.q, "channels per octave (1D)");
  sub->add_option("--l", bf.l, "number of orientations (2D)");
}

FilterBank bank_for_signal(const Signal& x, const BankFlags& bf) {
  if (x.dim() == 1) return build_bank_1d(x.shape[0], bf.j, bf.q);
  return build_bank_2d(x.shape[0], bf.j, bf.l);
}

// The descriptor JSON stores the grid and the per-channel labels, which pin
// the generating parameters of the bank they came from.
FilterBank bank_from_desc(const DescriptorSet& d) {
  if (d.sel.chan.empty()) throw std::invalid_argument("descriptor set has no channels");
  int nb = static_cast<int>(d.sel.chan.size()) - 1;
  if (d.d == 1) {
    int q = 0;  // labels carry the sub-octave position 0..Q-1
    for (const auto& c : d.sel.chan)
      if (!c.lowpass) q = std::max(q, c.q + 1);
    return build_bank_1d(d.n, nb / q, q);
  }
  int j = d.sel.chan.back().scale;
  return build_bank_2d(d.n, j, nb / j);
}

FilterBank bank_from_json_file(const std::string& path) {
  json j = json::parse(slurp(path));
  if (j.contains("params")) j = j.at("params");
  int d = j.at("d").get<int>();
  std::size_t n = j.at("n").get<std::size_t>();
  int jj = j.at("j").get<int>();
  if (d == 1) return build_bank_1d(n, jj, j.value("q", 1));
  if (d == 2) return build_bank_2d(n, jj, j.value("l", 8));
  throw std::invalid_argument("bank dimension must be 1 or 2");
}

PhaseFilter::Kind parse_kind(const std::string& s) {
  if (s == "rectifier") return PhaseFilter::Kind::rectifier;
  if (s == "absolute") return PhaseFilter::Kind::absolute;
  if (s == "identity") return PhaseFilter::Kind::identity;
  throw std::invalid_argument("unknown phase-filter kind: " + s);
}

// Plain key=value config support, shared by every subcommand. The file is
// expanded into trailing command-line tokens before parsing, skipping any key
// the command line already names, so explicit flags always win.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size();) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i) + 2);
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<long>(i));
    } else {
      ++i;
    }
  }
  if (path.empty()) return args;
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot open config file: " + path);
  std::string line;
  while (std::getline(f, line)) {
    auto h = line.find('#');
    if (h != std::string::npos) line.erase(h);
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      s.erase(0, s.find_first_not_of(" \t\r"));
      auto e = s.find_last_not_of(" \t\r");
      s.erase(e == std::string::npos ? 0 : e + 1);
      return s;
    };
    std::string key = "--" + trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key == "--" || val.empty()) continue;
    bool given = false;
    for (const auto& a : args)
      if (a == key || a.rfind(key + "=", 0) == 0) given = true;
    if (given) continue;
    args.push_back(key + "=" + val);  // single token so flags and options both work
  }
  return args;
}

json recovery_report(const RecoveryResult& res, double seconds) {
  json rep;
  rep["losses"] = res.losses;
  rep["iterations"] = res.iterations;
  rep["best_restart"] = res.best_restart;
  rep["best_loss"] = res.losses[res.best_restart];
  rep["M"] = res.M;
  rep["timing_seconds"] = seconds;
  if (res.psnr) rep["psnr_db"] = *res.psnr;
  return rep;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wavelet phase-harmonic analysis toolkit"};
  app.name("wph");
  app.require_subcommand(1);

  // gen-signal
  auto* gen = app.add_subcommand("gen-signal", "generate a test signal (raw f64 + JSON sidecar)");
  static std::string cfg_doc;
  auto add_config_doc = [&](CLI::App* sub) {
    sub->add_option("--config", cfg_doc, "plain key=value file; explicit flags win");
  };
  add_config_doc(gen);
  std::string g_kind, g_out;
  std::size_t g_n = 1024;
  int g_d = 1, g_jumps = 6;
  unsigned long long g_seed = 0, g_stream = 0;
  int g_nu_bin = 4, g_lam_bin = 256;
  double g_radius = 0.0, g_inside = 1.0;
  gen->add_option("--kind", g_kind, "piecewise | modcos | noise | disk")
      ->required()
      ->check(CLI::IsMember({"piecewise", "modcos", "noise", "disk"}));
  gen->add_option("--n", g_n, "grid side length");
  gen->add_option("--d", g_d, "dimension for noise (1 or 2)")->check(CLI::Range(1, 2));
  gen->add_option("--seed", g_seed, "RNG seed");
  gen->add_option("--stream", g_stream, "RNG stream");
  gen->add_option("--jumps", g_jumps, "singularities for piecewise");
  gen->add_option("--nu-bin", g_nu_bin, "envelope frequency as a DFT bin index");
  gen->add_option("--lam-bin", g_lam_bin, "carrier frequency as a DFT bin index");
  gen->add_option("--radius", g_radius, "disk radius in samples (default n/4)");
  gen->add_option("--inside", g_inside, "disk interior value");
  gen->add_option("--out", g_out, "output path")->required();
  gen->callback([&] {
    Signal x;
    if (g_kind == "piecewise") {
      x = gen_piecewise_regular(g_n, static_cast<std::size_t>(g_jumps), RngSpec{g_seed, g_stream});
    } else if (g_kind == "modcos") {
      double w = 2.0 * M_PI / static_cast<double>(g_n);
      x = gen_modulated_cosine(g_n, w * g_nu_bin, w * g_lam_bin);
    } else if (g_kind == "noise") {
      std::vector<std::size_t> shape(static_cast<std::size_t>(g_d), g_n);
      x = gen_white_noise(shape, RngSpec{g_seed, g_stream});
    } else {
      x = gen_disk(g_n, g_radius > 0.0 ? g_radius : static_cast<double>(g_n) / 4.0, g_inside);
    }
    save_signal(x, g_out);
  });

  // filterbank-check
  auto* fbc = app.add_subcommand("filterbank-check", "frame bounds and deviation of a filter bank");
  add_config_doc(fbc);
  int f_d = 1;
  std::size_t f_n = 1024;
  BankFlags f_bf;
  std::string f_out, f_export;
  fbc->add_option("--d", f_d, "dimension")->check(CLI::Range(1, 2));
  fbc->add_option("--n", f_n, "grid side length");
  add_bank_flags(fbc, f_bf);
  fbc->add_option("--out", f_out, "report path (stdout when omitted)");
  fbc->add_option("--export-dir", f_export, "also export all windows to this directory");
  fbc->callback([&] {
    FilterBank bank = f_d == 1 ? build_bank_1d(f_n, f_bf.j, f_bf.q) : build_bank_2d(f_n, f_bf.j, f_bf.l);
    FrameReport rep = frame_report(bank);
    json j{{"d", f_d},       {"n", f_n},
           {"j", f_bf.j},    {"eta", rep.eta},
           {"min_sum", rep.min_sum}, {"max_sum", rep.max_sum},
           {"worst_freq", rep.worst_freq}, {"channels", bank.nch()}};
    if (f_d == 1)
      j["q"] = f_bf.q;
    else
      j["l"] = f_bf.l;
    if (!f_export.empty()) export_bank(bank, f_export);
    emit(j, f_out);
  });

  // describe
  auto* dsc = app.add_subcommand("describe", "compute a descriptor set and store it as JSON");
  add_config_doc(dsc);
  std::string d_input, d_out;
  BankFlags d_bf;
  int d_delta = 0, d_kpmax = 16;
  double d_beta = 1.0;
  bool d_no_lowpass = false, d_cross_angles = false;
  dsc->add_option("--input", d_input, "signal path")->required();
  add_bank_flags(dsc, d_bf);
  dsc->add_option("--delta", d_delta, "octave window")->required();
  dsc->add_option("--beta", d_beta, "frequency-proximity slack");
  dsc->add_option("--kpmax", d_kpmax, "largest cross harmonic");
  dsc->add_flag("--no-lowpass", d_no_lowpass, "drop pairs involving the low-pass channel");
  dsc->add_flag("--cross-angles", d_cross_angles, "admit 2D pairs across orientations");
  dsc->add_option("--out", d_out, "descriptor JSON path")->required();
  dsc->callback([&] {
    Signal x = load_signal(d_input);
    FilterBank bank = bank_for_signal(x, d_bf);
    auto sel = select_coefficients(bank, d_delta, d_beta, d_kpmax, !d_no_lowpass, d_cross_angles);
    auto desc = describe(x, bank, sel);
    emit_text(descriptor_set_to_json(desc), d_out);
  });

  // reconstruct
  auto* rec = app.add_subcommand("reconstruct", "recover a signal from a stored descriptor set");
  add_config_doc(rec);
  std::string r_desc, r_bank, r_ref, r_out, r_report;
  RecoveryConfig r_cfg;
  rec->add_option("--desc", r_desc, "descriptor JSON path")->required();
  rec->add_option("--bank", r_bank, "bank parameter JSON (defaults to the descriptor's own grid)");
  rec->add_option("--restarts", r_cfg.restarts, "random restarts");
  rec->add_option("--max-iters", r_cfg.max_iters, "iteration cap per restart");
  rec->add_option("--memory", r_cfg.memory, "L-BFGS history length");
  rec->add_option("--grad-tol", r_cfg.grad_tol, "gradient stopping tolerance");
  rec->add_option("--init-scale", r_cfg.init_scale, "initialization amplitude factor");
  rec->add_option("--seed", r_cfg.rng.seed, "RNG seed");
  rec->add_option("--stream", r_cfg.rng.stream, "RNG stream");
  rec->add_option("--ref", r_ref, "reference signal for aligned PSNR");
  rec->add_option("--out", r_out, "write the reconstruction here");
  rec->add_option("--report", r_report, "write the JSON report here (stdout when omitted)");
  rec->callback([&] {
    DescriptorSet desc = descriptor_set_from_json(slurp(r_desc));
    FilterBank bank = r_bank.empty() ? bank_from_desc(desc) : bank_from_json_file(r_bank);
    Signal ref;
    bool have_ref = !r_ref.empty();
    if (have_ref) ref = load_signal(r_ref);
    auto t0 = std::chrono::steady_clock::now();
    RecoveryResult res = reconstruct(desc, bank, r_cfg, have_ref ? &ref : nullptr);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!r_out.empty()) save_signal(res.signal, r_out);
    emit(recovery_report(res, secs), r_report);
  });

  // sweep
  auto* swp = app.add_subcommand("sweep", "reconstruction quality across octave windows (CSV)");
  add_config_doc(swp);
  std::string s_input, s_out;
  BankFlags s_bf;
  std::vector<int> s_deltas;
  double s_beta = 1.0;
  int s_kpmax = 16;
  RecoveryConfig s_cfg;
  s_cfg.restarts = 3;
  s_cfg.max_iters = 800;
  swp->add_option("--input", s_input, "signal path")->required();
  add_bank_flags(swp, s_bf);
  swp->add_option("--delta", s_deltas, "ascending octave windows, comma separated")
      ->required()
      ->delimiter(',');
  swp->add_option("--beta", s_beta, "frequency-proximity slack");
  swp->add_option("--kpmax", s_kpmax, "largest cross harmonic");
  swp->add_option("--restarts", s_cfg.restarts, "random restarts per window");
  swp->add_option("--max-iters", s_cfg.max_iters, "iteration cap per restart");
  swp->add_option("--grad-tol", s_cfg.grad_tol, "gradient stopping tolerance");
  swp->add_option("--seed", s_cfg.rng.seed, "RNG seed");
  swp->add_option("--stream", s_cfg.rng.stream, "RNG stream");
  swp->add_option("--out", s_out, "CSV path (stdout when omitted)");
  swp->callback([&] {
    Signal x = load_signal(s_input);
    FilterBank bank = bank_for_signal(x, s_bf);
    SweepResult sw = decay_sweep(x, bank, s_deltas, s_cfg, s_beta, s_kpmax);
    std::ostringstream csv;
    csv << "delta,M,psnr_db,err,loss,chi_fit\n";
    char buf[256];
    for (const auto& r : sw.rows) {
      std::snprintf(buf, sizeof buf, "%d,%zu,%.6f,%.12e,%.12e,", r.delta, r.M, r.psnr, r.err,
                    r.loss);
      csv << buf;
      if (sw.chi) {
        std::snprintf(buf, sizeof buf, "%.6f", *sw.chi);
        csv << buf;
      }
      csv << "\n";
    }
    emit_text(csv.str(), s_out);
  });

  // hhat
  auto* hh = app.add_subcommand("hhat", "Fourier table of a phase filter");
  add_config_doc(hh);
  std::string h_kind, h_out;
  int h_kmax = 8;
  hh->add_option("--kind", h_kind, "rectifier | absolute | identity")
      ->required()
      ->check(CLI::IsMember({"rectifier", "absolute", "identity"}));
  hh->add_option("--kmax", h_kmax, "largest stored harmonic");
  hh->add_option("--out", h_out, "report path (stdout when omitted)");
  hh->callback([&] {
    PhaseFilter h = hhat_table(parse_kind(h_kind), h_kmax);
    json tab = json::object();
    for (int k = -h.kmax; k <= h.kmax; ++k) {
      cplx v = h.at(k);
      tab[std::to_string(k)] = {{"re", v.real()}, {"im", v.imag()}};
    }
    json j{{"kind", h_kind}, {"kmax", h.kmax}, {"norm", h.norm()}, {"h", tab}};
    emit(j, h_out);
  });

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = expand_config(std::move(args));
    std::reverse(args.begin(), args.end());  // the vector overload consumes back to front
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
