#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "hcdyn/core_map.hpp"
#include "hcdyn/fixed_points.hpp"

namespace hcdyn {

inline constexpr std::size_t kDefaultMaxIters = 1'000'000;
inline constexpr double kDefaultTol = 1e-12;
inline constexpr int kStallSteps = 10;
inline constexpr std::size_t kFullStorage = 10'000;

struct TrajectorySample {
  std::size_t step;
  Point2 point;
};

struct Trajectory {
  Point2 start;
  /// Every step up to kFullStorage, then one sample per decade stride; the final point is always kept.
  std::vector<TrajectorySample> points;
  std::size_t iterations = 0;
  /// Last iterate, kept even when store is false.
  Point2 final_point;
  bool converged = false;
  /// First step of the terminal run of small moves.
  std::optional<std::size_t> converged_at;
  std::optional<Point2> limit;
  /// ||W(v) - v||_inf at the final point.
  double residual = 0.0;
};

Trajectory iterate_trajectory(const Params& p, Point2 v0, std::size_t max_iters = kDefaultMaxIters,
                              double tol = kDefaultTol, bool store = true);

struct BracketSequence {
  std::vector<double> lower;
  std::vector<double> upper;
};

/// (l1, l2) iterated from (0, L); entry k is step k, k = 0..n.
BracketSequence bracketing_sequence(const Params& p, std::size_t n);

struct OmegaBox {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t iterations = 0;
  bool contains(Point2 v, double tol = 0.0) const noexcept {
    return v.x >= lo - tol && v.x <= hi + tol && v.y >= lo - tol && v.y <= hi + tol;
  }
};

OmegaBox omega_bound(const Params& p, double tol = kDefaultTol,
                     std::size_t max_iters = kDefaultMaxIters);

enum class PartitionLabel { se_lt, se_gt, ne_lt, ne_gt, on_fix };

std::string_view to_string(PartitionLabel l);
PartitionLabel nullcline_partition(const Params& p, Point2 v);

enum class BasinLabel { B_lt, B_gt, R_lt, R_gt, none };

std::string_view to_string(BasinLabel l);
BasinLabel basin_membership(const Params& p, Point2 fp, Point2 v);

enum class WedgeCase { c1, c2, c3a, c3b, c3c, c3a_, c3b_, c3c_, c4a, c4b, c4c, c4a_, c4b_, c4c_ };

/// Order relation asserted between W(v) and the fixed point.
enum class OrderClaim { image_se_leq_fp, fp_se_leq_image, image_ne_leq_fp, fp_ne_leq_image };

std::string_view to_string(WedgeCase c);
std::string_view to_string(OrderClaim c);

struct WedgeResult {
  WedgeCase which;
  OrderClaim claim;
  Point2 image;
};

bool claim_holds(OrderClaim claim, Point2 image, Point2 fp, double tol = 0.0) noexcept;

/// Empty when v lies in none of the listed cases. Throws ConsistencyError if
/// the asserted relation fails by more than kCoordTol.
std::optional<WedgeResult> wedge_relation(const Params& p, Point2 fp, Point2 v);

double period2_discriminant(const Params& p);

/// Points of [0, L] with f^period(x) = x (residual <= 1e-9) that are at least
/// 1e-6 away from every fixed point of f.
std::vector<double> search_periodic(const Params& p, int period, std::size_t grid = 10'000);

bool contraction_certificate(const Params& p);

enum class LimitRule {
  fixed_point,
  diagonal_unique,
  diagonal_double,
  diagonal_triple,
  region_a10,
  region_a12,
  basin_lower,
  basin_upper,
  repulsion_lower,
  repulsion_upper,
  box_only
};

std::string_view to_string(LimitRule r);

struct LimitVerdict {
  std::optional<Point2> limit;
  std::optional<Family> family;
  OmegaBox box;
  LimitRule rule = LimitRule::box_only;
  bool mirrored = false;
};

LimitVerdict classify_limit(const Params& p, Point2 v0);

}  // namespace hcdyn
