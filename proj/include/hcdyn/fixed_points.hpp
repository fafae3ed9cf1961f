#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string_view>
#include <vector>

#include "hcdyn/core_map.hpp"

namespace hcdyn {

/// Boundary tolerance for the parameter-plane predicates.
inline constexpr double kRegionTol = 1e-9;
/// 9 + 8*sqrt(2)
inline constexpr double kThetaS = 20.313708498984759;

enum class RegionLabel { A_1_0, A_1_2, A_2_2, A_1_4, A_3_2, A_2_4, A_3_4 };

struct RegionCounts {
  int diagonal;
  int offdiagonal;
};

RegionCounts counts_of(RegionLabel r) noexcept;
std::string_view to_string(RegionLabel r);
std::optional<RegionLabel> region_from_string(std::string_view s);

enum class Family { p1_star, p2_star, p3_star, p1, p2, p3, p4 };

bool is_diagonal(Family f) noexcept;
std::string_view to_string(Family f);
std::optional<Family> family_from_string(std::string_view s);

enum class Stability { attracting, repelling, saddle, non_hyperbolic };

std::string_view to_string(Stability s);
std::optional<Stability> stability_from_string(std::string_view s);

using EigenPair = std::array<std::complex<double>, 2>;

struct FixedPointRecord {
  Point2 location;
  Family family;
  EigenPair eigenvalues;
  Stability stability;
};

struct LhatPair {
  double lhat1;
  double lhat2;
};

struct XstarPair {
  double xstar1;
  double xstar2;
};

struct ScalarThresholds {
  std::optional<LhatPair> lhat;    // theta >= 17
  std::optional<XstarPair> xstar;  // theta in (0, 1] or theta >= 17
};

LhatPair lhat_thresholds(double theta);
XstarPair xstar_thresholds(double theta);
ScalarThresholds scalar_thresholds(double theta);

/// Number of diagonal fixed points decided from the thresholds.
int diagonal_root_count(const Params& p);
std::vector<double> diagonal_fixed_points(const Params& p);

struct OffDiagonalPoint {
  Point2 location;
  Family family;
};

std::vector<OffDiagonalPoint> offdiagonal_fixed_points(const Params& p);

RegionLabel classify_region(const Params& p);

/// Diagonal points first (ascending), then p1, p2, p3, p4 as present.
std::vector<FixedPointRecord> fixed_point_set(const Params& p);

double scalar_derivative(const Params& p, double x);

struct ScalarStability {
  double derivative;
  Stability stability;
};

ScalarStability scalar_stability(const Params& p, double xstar);

struct Jacobian {
  std::array<std::array<double, 2>, 2> m;
  EigenPair eigenvalues;  // ordered by descending real part
};

Jacobian jacobian_at(const Params& p, Point2 fp);
EigenPair eigenvalues_2x2(const std::array<std::array<double, 2>, 2>& m);
Stability classify_eigenvalues(const EigenPair& ev);

struct P2Eigenvalues {
  double t;
  double mu1;
  double mu2;
};

/// Closed-form eigenvalues at p2; requires L >= 4(theta - 1).
P2Eigenvalues p2_eigenvalues(const Params& p);

/// Fixed-point residual ||W(v) - v||_inf.
double fixed_point_residual(const Params& p, Point2 v);

namespace region {

// Tolerant comparisons shared by every parameter-plane predicate.
inline bool le(double a, double b) noexcept { return a <= b + kRegionTol; }
inline bool lt(double a, double b) noexcept { return a < b - kRegionTol; }
inline bool eq(double a, double b) noexcept { return a - b <= kRegionTol && b - a <= kRegionTol; }

inline double pitchfork(double theta) noexcept { return (theta + 3.0) * (theta + 3.0) / 4.0; }
inline double fold(double theta) noexcept { return 4.0 * (theta - 1.0); }

bool outer_pair_exists(double theta, double l) noexcept;
bool inner_pair_exists(double theta, double l) noexcept;

}  // namespace region

}  // namespace hcdyn
