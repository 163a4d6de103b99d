#include "wph/signal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace wph {

Signal::Signal(std::vector<std::size_t> s) : shape(std::move(s)) {
  std::size_t n = 1;
  for (auto a : shape) n *= a;
  data.assign(n, 0.0);
}

bool is_power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

void validate_signal(const Signal& x) {
  if (x.dim() < 1 || x.dim() > 2)
    throw std::invalid_argument("signal must be 1D or 2D, got dim " + std::to_string(x.dim()));
  std::size_t n = 1;
  for (auto a : x.shape) {
    if (!is_power_of_two(a))
      throw std::invalid_argument("axis length " + std::to_string(a) + " is not a power of two");
    n *= a;
  }
  if (x.data.size() != n)
    throw std::invalid_argument("data size does not match shape");
  for (double v : x.data)
    if (!std::isfinite(v)) throw std::invalid_argument("signal contains a non-finite entry");
}

namespace {

bool ends_with(const std::string& s, const std::string& suf) {
  return s.size() >= suf.size() && s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
}

void save_pgm(const Signal& x, const std::string& path) {
  if (x.dim() != 2) throw std::invalid_argument("PGM output needs a 2D signal");
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << "P5\n" << x.shape[1] << " " << x.shape[0] << "\n255\n";
  std::vector<unsigned char> row(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    double v = std::clamp(x.data[i], 0.0, 1.0);
    row[i] = static_cast<unsigned char>(std::lround(v * 255.0));
  }
  f.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
  if (!f) throw std::runtime_error("write failed for " + path);
}

// skips whitespace and '#' comment lines between PGM header tokens
std::string pgm_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {}
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) return tok;
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
  if (tok.empty()) throw std::runtime_error("truncated PGM header");
  return tok;
}

Signal load_pgm(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  if (pgm_token(f) != "P5") throw std::runtime_error(path + ": not a binary PGM (P5) file");
  std::size_t w = std::stoull(pgm_token(f));
  std::size_t h = std::stoull(pgm_token(f));
  unsigned long maxv = std::stoul(pgm_token(f));
  if (maxv != 255) throw std::runtime_error(path + ": only maxval 255 PGM is supported");
  Signal x({h, w});
  std::vector<unsigned char> buf(w * h);
  f.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (f.gcount() != static_cast<std::streamsize>(buf.size()))
    throw std::runtime_error(path + ": truncated PGM payload");
  for (std::size_t i = 0; i < buf.size(); ++i) x.data[i] = buf[i] / 255.0;
  validate_signal(x);
  return x;
}

}  // namespace

void save_signal(const Signal& x, const std::string& path) {
  validate_signal(x);
  if (ends_with(path, ".pgm")) {
    save_pgm(x, path);
    return;
  }
  {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    static_assert(sizeof(double) == 8);
    f.write(reinterpret_cast<const char*>(x.data.data()),
            static_cast<std::streamsize>(x.data.size() * 8));
    if (!f) throw std::runtime_error("write failed for " + path);
  }
  nlohmann::json meta;
  meta["shape"] = x.shape;
  meta["dtype"] = "f64le";
  std::ofstream side(path + ".json");
  if (!side) throw std::runtime_error("cannot open " + path + ".json for writing");
  side << meta.dump() << "\n";
}

Signal load_signal(const std::string& path) {
  if (ends_with(path, ".pgm")) return load_pgm(path);
  std::ifstream side(path + ".json");
  if (!side) throw std::runtime_error("missing sidecar " + path + ".json");
  nlohmann::json meta;
  try {
    side >> meta;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("malformed sidecar " + path + ".json: " + e.what());
  }
  if (!meta.contains("shape") || !meta["shape"].is_array())
    throw std::runtime_error("sidecar " + path + ".json lacks a shape array");
  if (meta.value("dtype", "f64le") != "f64le")
    throw std::runtime_error("unsupported dtype in sidecar " + path + ".json");
  Signal x;
  for (const auto& a : meta["shape"]) x.shape.push_back(a.get<std::size_t>());
  std::size_t n = 1;
  for (auto a : x.shape) n *= a;
  x.data.resize(n);
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  f.read(reinterpret_cast<char*>(x.data.data()), static_cast<std::streamsize>(n * 8));
  if (f.gcount() != static_cast<std::streamsize>(n * 8))
    throw std::runtime_error(path + ": payload shorter than sidecar shape implies");
  validate_signal(x);
  return x;
}

Signal gen_piecewise_regular(std::size_t n, std::size_t num_singularities, Rng& rng) {
  if (!is_power_of_two(n)) throw std::invalid_argument("length must be a power of two");
  if (num_singularities < 1 || num_singularities > n / 8)
    throw std::invalid_argument("num_singularities must lie in [1, n/8]");
  std::vector<std::size_t> pos;
  while (pos.size() < num_singularities) {
    std::size_t p = static_cast<std::size_t>(rng.next_u64() % n);
    if (std::find(pos.begin(), pos.end(), p) == pos.end()) pos.push_back(p);
  }
  std::sort(pos.begin(), pos.end());
  std::vector<std::size_t> bounds;
  bounds.push_back(0);
  bounds.insert(bounds.end(), pos.begin(), pos.end());
  bounds.push_back(n);
  Signal x({n});
  for (std::size_t s = 0; s + 1 < bounds.size(); ++s) {
    std::size_t a = bounds[s], b = bounds[s + 1];
    if (a == b) continue;  // empty leading segment when a jump lands on 0
    double c0 = rng.normal(), c1 = rng.normal(), c2 = rng.normal(), c3 = rng.normal();
    double den = static_cast<double>(std::max<std::size_t>(b - a, 1));
    for (std::size_t u = a; u < b; ++u) {
      double t = static_cast<double>(u - a) / den;
      x.data[u] = c0 + t * (c1 + t * (c2 + t * c3));
    }
  }
  double m = 0.0;
  for (double v : x.data) m = std::max(m, std::abs(v));
  if (m == 0.0) m = 1.0;
  for (double& v : x.data) v /= m;
  return x;
}

Signal gen_piecewise_regular(std::size_t n, std::size_t num_singularities, RngSpec spec) {
  Rng rng(spec);
  return gen_piecewise_regular(n, num_singularities, rng);
}

Signal gen_modulated_cosine(std::size_t n, double nu, double lam) {
  if (!is_power_of_two(n)) throw std::invalid_argument("length must be a power of two");
  if (!(nu > 0.0) || !(nu < lam))
    throw std::invalid_argument("need 0 < nu < lam");
  if (!(lam < M_PI)) throw std::invalid_argument("lam must be below pi rad/sample");
  auto on_grid = [n](double w) {
    double bins = w * static_cast<double>(n) / (2.0 * M_PI);
    return std::abs(bins - std::round(bins)) <= 1e-9 * static_cast<double>(n);
  };
  if (!on_grid(nu) || !on_grid(lam))
    throw std::invalid_argument("frequencies must be integer multiples of 2*pi/n");
  Signal x({n});
  for (std::size_t u = 0; u < n; ++u) {
    double t = static_cast<double>(u);
    x.data[u] = (1.0 - std::cos(nu * t)) * std::cos(lam * t);
  }
  return x;
}

Signal gen_white_noise(const std::vector<std::size_t>& shape, Rng& rng) {
  Signal x(shape);
  validate_signal(x);
  for (double& v : x.data) v = rng.normal();
  return x;
}

Signal gen_white_noise(const std::vector<std::size_t>& shape, RngSpec spec) {
  Rng rng(spec);
  return gen_white_noise(shape, rng);
}

Signal gen_disk(std::size_t n, double radius, double inside) {
  if (!is_power_of_two(n)) throw std::invalid_argument("length must be a power of two");
  if (!(radius > 0.0)) throw std::invalid_argument("radius must be positive");
  Signal x({n, n});
  double c = static_cast<double>(n) / 2.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double r = std::hypot(static_cast<double>(i) - c, static_cast<double>(j) - c);
      x.data[i * n + j] = inside * std::clamp(radius + 0.5 - r, 0.0, 1.0);
    }
  return x;
}

}  // namespace wph
