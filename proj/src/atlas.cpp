#include "hcdyn/atlas.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <thread>

#include "hcdyn/dynamics.hpp"
#include "hcdyn/errors.hpp"
#include "hcdyn/serialize.hpp"

namespace hcdyn {

namespace {

std::vector<double> sorted_unique(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

template <typename T>
std::string opt_csv(const std::optional<T>& v) {
  if (!v) {
    return "";
  }
  if constexpr (std::is_same_v<T, double>) {
    return format_csv_number(*v);
  } else if constexpr (std::is_same_v<T, bool>) {
    return *v ? "true" : "false";
  } else {
    return std::to_string(*v);
  }
}

template <typename T>
nlohmann::json opt_json(const std::optional<T>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) {
    return s;
  }
  std::string out = "\"";
  for (char c : s) {
    out += c == '"' ? std::string("\"\"") : std::string(1, c);
  }
  return out + "\"";
}

}  // namespace

std::vector<double> linear_grid(double lo, double hi, std::size_t steps) {
  if (steps < 1 || !std::isfinite(lo) || !std::isfinite(hi) || hi < lo) {
    throw InvalidArgument("grid needs lo <= hi and at least one step");
  }
  if (steps == 1) {
    return {lo};
  }
  std::vector<double> g(steps);
  for (std::size_t i = 0; i < steps; ++i) {
    g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1);
  }
  g.back() = hi;
  return g;
}

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) {
    return requested;
  }
  if (const char* env = std::getenv("HCDYN_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) {
      return static_cast<unsigned>(n);
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

AtlasRow atlas_cell(double theta, double l, bool classify_only) {
  AtlasRow row;
  row.theta = theta;
  row.l = l;
  try {
    const Params p(theta, l);
    if (theta >= 17.0) {
      const LhatPair h = lhat_thresholds(theta);
      row.lhat1 = h.lhat1;
      row.lhat2 = h.lhat2;
    }
    row.contraction = contraction_certificate(p);
    row.region = classify_region(p);
    const std::vector<FixedPointRecord> fps = fixed_point_set(p);
    row.n_diagonal = static_cast<int>(
        std::count_if(fps.begin(), fps.end(), [](const auto& r) { return is_diagonal(r.family); }));
    row.n_offdiagonal = static_cast<int>(fps.size()) - *row.n_diagonal;
    if (!classify_only) {
      const OmegaBox box = omega_bound(p);
      row.omega_lo = box.lo;
      row.omega_hi = box.hi;
    }
  } catch (const Error& e) {
    row.error = e.what();
  }
  return row;
}

std::vector<AtlasRow> atlas_sweep(const AtlasConfig& cfg) {
  const std::vector<double> thetas = sorted_unique(cfg.thetas);
  const std::vector<double> ls = sorted_unique(cfg.ls);
  if (thetas.empty() || ls.empty()) {
    throw InvalidArgument("atlas grid needs at least one cell");
  }
  const std::size_t cells = thetas.size() * ls.size();
  std::vector<AtlasRow> rows(cells);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells; i = next++) {
      rows[i] = atlas_cell(thetas[i / ls.size()], ls[i % ls.size()], cfg.classify_only);
    }
  };
  const unsigned n = std::min<std::size_t>(resolve_threads(cfg.threads), cells);
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) {
    pool.emplace_back(worker);
  }
  worker();
  for (std::thread& t : pool) {
    t.join();
  }
  return rows;
}

std::string atlas_csv(const std::vector<AtlasRow>& rows) {
  std::ostringstream os;
  os << "theta,L,region,n_diagonal,n_offdiagonal,lhat1,lhat2,omega_lo,omega_hi,contraction,error\n";
  for (const AtlasRow& r : rows) {
    os << format_csv_number(r.theta) << ',' << format_csv_number(r.l) << ','
       << (r.region ? std::string(to_string(*r.region)) : "") << ',' << opt_csv(r.n_diagonal)
       << ',' << opt_csv(r.n_offdiagonal) << ',' << opt_csv(r.lhat1) << ',' << opt_csv(r.lhat2)
       << ',' << opt_csv(r.omega_lo) << ',' << opt_csv(r.omega_hi) << ','
       << opt_csv(r.contraction) << ',' << csv_escape(r.error) << '\n';
  }
  return os.str();
}

nlohmann::json atlas_json(const std::vector<AtlasRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const AtlasRow& r : rows) {
    arr.push_back({{"theta", r.theta},
                   {"L", r.l},
                   {"region", r.region ? nlohmann::json(std::string(to_string(*r.region)))
                                       : nlohmann::json(nullptr)},
                   {"n_diagonal", opt_json(r.n_diagonal)},
                   {"n_offdiagonal", opt_json(r.n_offdiagonal)},
                   {"lhat1", opt_json(r.lhat1)},
                   {"lhat2", opt_json(r.lhat2)},
                   {"omega_lo", opt_json(r.omega_lo)},
                   {"omega_hi", opt_json(r.omega_hi)},
                   {"contraction", opt_json(r.contraction)},
                   {"error", r.error}});
  }
  return arr;
}

std::string nullcline_csv(const AtlasConfig& cfg, std::size_t samples) {
  if (samples < 2) {
    throw InvalidArgument("nullcline sampling needs at least two points");
  }
  std::ostringstream os;
  os << "theta,L,x,psi\n";
  for (double theta : sorted_unique(cfg.thetas)) {
    for (double l : sorted_unique(cfg.ls)) {
      const Params p(theta, l);
      // Log-spaced on [1e-4 L, L]: psi blows up like x^(-1/2) near the axis.
      const double lo = std::log(1e-4 * l);
      const double hi = std::log(l);
      for (std::size_t i = 0; i < samples; ++i) {
        const double x = std::exp(lo + (hi - lo) * static_cast<double>(i) /
                                           static_cast<double>(samples - 1));
        os << format_csv_number(theta) << ',' << format_csv_number(l) << ','
           << format_csv_number(x) << ',' << format_csv_number(psi_nullcline(p, x)) << '\n';
      }
    }
  }
  return os.str();
}

}  // namespace hcdyn
