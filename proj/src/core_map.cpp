#include "hcdyn/core_map.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hcdyn/errors.hpp"

namespace hcdyn {

namespace {

void require_positive(double value, const char* name) {
  if (!std::isfinite(value) || !(value > 0.0)) {
    throw InvalidArgument(std::string(name) + " must be finite and positive");
  }
}

void require_point(Point2 v) {
  if (!std::isfinite(v.x) || !std::isfinite(v.y)) {
    throw InvalidArgument("point has a non-finite coordinate");
  }
  if (v.x < 0.0 || v.y < 0.0) {
    throw InvalidArgument("point lies outside the closed positive quadrant");
  }
}

}  // namespace

Params::Params(double theta, double l) : Params(theta, l, l) {}

Params::Params(double theta, double l1, double l2) : theta_(theta), l1_(l1), l2_(l2) {
  require_positive(theta, "theta");
  require_positive(l1, "L1");
  require_positive(l2, "L2");
}

bool Params::symmetric() const noexcept {
  return std::abs(l1_ - l2_) <= 1e-12 * std::max(l1_, l2_);
}

double Params::l() const {
  if (!symmetric()) {
    throw InvalidArgument("analysis requires L1 = L2");
  }
  return l1_;
}

std::string_view to_string(PlaneSector s) {
  switch (s) {
    case PlaneSector::minus:
      return "M_minus";
    case PlaneSector::zero:
      return "M_zero";
    case PlaneSector::plus:
      return "M_plus";
  }
  return "?";
}

Point2 apply_w(const Params& p, Point2 v) {
  require_point(v);
  return detail::w_raw(p.theta(), p.l1(), p.l2(), v);
}

double scalar_f(const Params& p, double x) {
  const double l = p.l();
  require_point({x, x});
  return detail::w_raw(p.theta(), l, l, {x, x}).x;
}

StPoint apply_w_hat(const Params& p, StPoint u) {
  const double l = p.l();
  if (!std::isfinite(u.s) || !std::isfinite(u.t)) {
    throw InvalidArgument("(s, t) has a non-finite component");
  }
  if (u.s < 0.0 || std::abs(u.t) > u.s) {
    throw InvalidArgument("(s, t) must satisfy |t| <= s");
  }
  const double a = 2.0 + u.s;
  const double d = 1.0 + p.theta() + u.s;
  const double d2 = d * d;
  return {l * (a * a + u.t * u.t) / (2.0 * d2), l * a * u.t / d2};
}

StPoint to_st(Point2 v) noexcept { return {v.x + v.y, v.y - v.x}; }

Point2 from_st(StPoint u) noexcept { return {0.5 * (u.s - u.t), 0.5 * (u.s + u.t)}; }

bool se_leq(Point2 a, Point2 b) noexcept { return a.x <= b.x && a.y >= b.y; }
bool se_less(Point2 a, Point2 b) noexcept { return se_leq(a, b) && a != b; }
bool ne_leq(Point2 a, Point2 b) noexcept { return a.x <= b.x && a.y <= b.y; }
bool ne_less(Point2 a, Point2 b) noexcept { return ne_leq(a, b) && a != b; }

PlaneSector sector_of(Point2 v, double tol) {
  if (!(tol >= 0.0)) {
    throw InvalidArgument("sector tolerance must be non-negative");
  }
  const double d = v.y - v.x;
  if (std::abs(d) <= tol) {
    return PlaneSector::zero;
  }
  return d > 0.0 ? PlaneSector::minus : PlaneSector::plus;
}

double psi_nullcline(const Params& p, double x) {
  const double l = p.l();
  if (!std::isfinite(x) || !(x > 0.0)) {
    throw InvalidArgument("nullcline function needs x > 0");
  }
  const double r = std::sqrt(x);
  return std::sqrt(l) * (1.0 / r + r) - (1.0 + p.theta() + x);
}

double psi_contraction(double theta, double s) {
  const double d = 1.0 + theta + s;
  return (2.0 + s) / (d * d);
}

double lambda_theta(double theta) {
  require_positive(theta, "theta");
  if (theta > 3.0) {
    return 1.0 / (4.0 * (theta - 1.0));
  }
  return 2.0 / ((theta + 1.0) * (theta + 1.0));
}

double lambda_argmax(double theta) { return std::max(theta - 3.0, 0.0); }

double linf_distance(Point2 a, Point2 b) noexcept {
  return std::max(std::abs(a.x - b.x), std::abs(a.y - b.y));
}

Point2 mirror(Point2 v) noexcept { return {v.y, v.x}; }

}  // namespace hcdyn
