#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "hcdyn/fixed_points.hpp"

namespace hcdyn {

struct AtlasRow {
  double theta = 0.0;
  double l = 0.0;
  std::optional<RegionLabel> region;
  std::optional<int> n_diagonal;
  std::optional<int> n_offdiagonal;
  std::optional<double> lhat1;
  std::optional<double> lhat2;
  std::optional<double> omega_lo;
  std::optional<double> omega_hi;
  std::optional<bool> contraction;
  std::string error;
};

struct AtlasConfig {
  std::vector<double> thetas;
  std::vector<double> ls;
  bool classify_only = false;
  /// 0 picks HCDYN_THREADS, else the hardware concurrency.
  unsigned threads = 0;
};

/// lo, lo + h, ..., hi with `steps` points (steps == 1 gives {lo}).
std::vector<double> linear_grid(double lo, double hi, std::size_t steps);

unsigned resolve_threads(unsigned requested);

AtlasRow atlas_cell(double theta, double l, bool classify_only);

/// One row per (theta, L) pair, ordered by theta then L.
std::vector<AtlasRow> atlas_sweep(const AtlasConfig& cfg);

std::string atlas_csv(const std::vector<AtlasRow>& rows);
nlohmann::json atlas_json(const std::vector<AtlasRow>& rows);

/// Samples of y = psi(x) per grid cell; the curve x = psi(y) is the same set mirrored.
std::string nullcline_csv(const AtlasConfig& cfg, std::size_t samples);

}  // namespace hcdyn
