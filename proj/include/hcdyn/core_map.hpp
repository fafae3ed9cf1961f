#pragma once

#include <string_view>

namespace hcdyn {

/// Coordinate equality tolerance (M0 membership, order ties).
inline constexpr double kCoordTol = 1e-12;
/// Acceptance threshold for ||W(v) - v||_inf at a computed fixed point.
inline constexpr double kResidualTol = 1e-9;

class Params {
 public:
  Params(double theta, double l);
  Params(double theta, double l1, double l2);

  double theta() const noexcept { return theta_; }
  double l1() const noexcept { return l1_; }
  double l2() const noexcept { return l2_; }
  bool symmetric() const noexcept;
  /// The common value L = L1 = L2; throws InvalidArgument otherwise.
  double l() const;

 private:
  double theta_;
  double l1_;
  double l2_;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point2&, const Point2&) = default;
};

struct StPoint {
  double s = 0.0;
  double t = 0.0;
};

enum class PlaneSector { minus, zero, plus };

std::string_view to_string(PlaneSector s);

Point2 apply_w(const Params& p, Point2 v);
double scalar_f(const Params& p, double x);
StPoint apply_w_hat(const Params& p, StPoint u);

StPoint to_st(Point2 v) noexcept;
Point2 from_st(StPoint u) noexcept;

bool se_leq(Point2 a, Point2 b) noexcept;
bool se_less(Point2 a, Point2 b) noexcept;
bool ne_leq(Point2 a, Point2 b) noexcept;
bool ne_less(Point2 a, Point2 b) noexcept;

PlaneSector sector_of(Point2 v, double tol = kCoordTol);

double psi_nullcline(const Params& p, double x);
double psi_contraction(double theta, double s);
double lambda_theta(double theta);
double lambda_argmax(double theta);

double linf_distance(Point2 a, Point2 b) noexcept;
Point2 mirror(Point2 v) noexcept;

namespace detail {

// Unchecked evaluation for inner loops. Both components share the
// denominator expression used by scalar_f.
inline Point2 w_raw(double theta, double l1, double l2, Point2 v) noexcept {
  const double d = 1.0 + theta + v.x + v.y;
  const double a = (1.0 + v.x) / d;
  const double b = (1.0 + v.y) / d;
  return {l1 * a * a, l2 * b * b};
}

}  // namespace detail

}  // namespace hcdyn
