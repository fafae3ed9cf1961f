#include "hcdyn/l1_lift.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hcdyn/errors.hpp"

namespace hcdyn {

namespace {

void check_positive(const std::vector<double>& v, const char* what) {
  if (v.empty()) {
    throw InvalidArgument(std::string(what) + " must not be empty");
  }
  for (double e : v) {
    if (!std::isfinite(e) || !(e > 0.0)) {
      throw InvalidArgument(std::string(what) + " entries must be finite and positive");
    }
  }
}

bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

void check_matching(const Params& p, const WeightSeq& w) {
  if (!close_rel(p.l1(), w.l1(), 1e-12) || !close_rel(p.l2(), w.l2(), 1e-12)) {
    throw InvalidArgument("parameters do not carry the parity sums of the weights");
  }
}

constexpr const char* kLiftNames[] = {"P1", "P2", "P3", "P4", "P5", "P6", "P7"};

}  // namespace

WeightSeq::WeightSeq(std::vector<double> lambda) : lambda_(std::move(lambda)) {
  check_positive(lambda_, "weight sequence");
  if (lambda_.size() < 2) {
    throw InvalidArgument("weight sequence needs at least two entries");
  }
  const Point2 s = project_to_plane(lambda_);
  l1_ = s.x;
  l2_ = s.y;
}

WeightSeq WeightSeq::balanced(std::vector<double> lambda) {
  WeightSeq w(std::move(lambda));
  if (!close_rel(w.l1(), w.l2(), 1e-12)) {
    throw InvalidArgument("odd and even weight sums differ");
  }
  return w;
}

WeightSeq WeightSeq::geometric(double r, std::size_t n, double l) {
  if (!(r > 0.0) || !std::isfinite(r) || !(l > 0.0) || !std::isfinite(l) || n < 2) {
    throw InvalidArgument("geometric weights need r > 0, L > 0 and n >= 2");
  }
  std::vector<double> lambda(n);
  double v = 1.0;
  for (std::size_t j = 0; j < n; ++j) {
    v *= r;
    lambda[j] = v;
  }
  const Point2 s = project_to_plane(lambda);
  for (std::size_t j = 0; j < n; ++j) {
    lambda[j] *= l / (j % 2 == 0 ? s.x : s.y);
  }
  // Absorb rounding so the parity sums are equal to the last bit the sum allows.
  const Point2 t = project_to_plane(lambda);
  lambda[1] += l - t.y;
  lambda[0] += l - t.x;
  return balanced(std::move(lambda));
}

TruncatedVector::TruncatedVector(std::vector<double> entries) : entries_(std::move(entries)) {
  check_positive(entries_, "truncated vector");
}

double TruncatedVector::norm() const noexcept {
  return std::accumulate(entries_.begin(), entries_.end(), 0.0);
}

Point2 project_to_plane(const std::vector<double>& entries) noexcept {
  Point2 s;
  for (std::size_t j = 0; j < entries.size(); ++j) {
    (j % 2 == 0 ? s.x : s.y) += entries[j];
  }
  return s;
}

Point2 project_to_plane(const TruncatedVector& x) noexcept { return project_to_plane(x.entries()); }

Params lift_params(double theta, const WeightSeq& w) { return Params(theta, w.l1(), w.l2()); }

TruncatedVector apply_f(const Params& p, const WeightSeq& w, const TruncatedVector& x) {
  if (w.size() != x.size()) {
    throw InvalidArgument("weight and vector dimensions differ");
  }
  check_matching(p, w);
  const Point2 m = project_to_plane(x);
  const double d = 1.0 + p.theta() + m.x + m.y;
  const double a = (1.0 + m.x) / d;
  const double b = (1.0 + m.y) / d;
  const double odd = a * a;
  const double even = b * b;
  std::vector<double> out(x.size());
  const std::vector<double>& lambda = w.lambda();
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j] = lambda[j] * (j % 2 == 0 ? odd : even);
  }
  return TruncatedVector(std::move(out));
}

std::vector<double> lift_limit(const Params& p, const WeightSeq& w, Point2 ab) {
  check_matching(p, w);
  if (!std::isfinite(ab.x) || !std::isfinite(ab.y) || ab.x < 0.0 || ab.y < 0.0) {
    throw InvalidArgument("limit point must lie in the closed positive quadrant");
  }
  const double ca = ab.x / w.l1();
  const double cb = ab.y / w.l2();
  std::vector<double> out(w.size());
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j] = w.lambda()[j] * (j % 2 == 0 ? ca : cb);
  }
  return out;
}

std::vector<LiftedFixedPoint> lifted_fixed_points(const Params& p, const WeightSeq& w) {
  p.l();
  check_matching(p, w);
  std::vector<LiftedFixedPoint> out;
  for (const FixedPointRecord& r : fixed_point_set(p)) {
    TruncatedVector v(lift_limit(p, w, r.location));
    const TruncatedVector image = apply_f(p, w, v);
    double worst = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) {
      worst = std::max(worst, std::abs(image.entries()[j] - v.entries()[j]));
    }
    if (worst > kResidualTol) {
      throw ConsistencyError("lifted fixed point fails the residual test");
    }
    out.push_back({kLiftNames[static_cast<std::size_t>(r.family)], r.family, std::move(v)});
  }
  return out;
}

bool norm_preservation_check(const Params& p, const WeightSeq& w, const TruncatedVector& x,
                             std::size_t steps) {
  if (steps < 1) {
    throw InvalidArgument("steps must be at least 1");
  }
  // Every factor ((1 + M_i) / (1 + theta + |x|))^2 is below 1, so |F(x)| <= |lambda|.
  const double bound = w.norm() * (1.0 + 1e-12);
  TruncatedVector v = x;
  for (std::size_t k = 0; k < steps; ++k) {
    try {
      v = apply_f(p, w, v);
    } catch (const InvalidArgument&) {
      return false;
    }
    const double n = v.norm();
    if (!std::isfinite(n) || n > bound) {
      return false;
    }
  }
  return true;
}

double semiconjugacy_residual(const Params& p, const WeightSeq& w, const TruncatedVector& x) {
  const Point2 lhs = project_to_plane(apply_f(p, w, x));
  const Point2 rhs = apply_w(p, project_to_plane(x));
  return linf_distance(lhs, rhs) / std::max(1.0, std::max(rhs.x, rhs.y));
}

}  // namespace hcdyn
