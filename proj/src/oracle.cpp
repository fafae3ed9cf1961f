#include "hcdyn/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace hcdyn {

namespace {

struct Cubic {
  double theta;
  double sl;
  double g(double u) const { return ((2.0 * u - sl) * u + (1.0 + theta)) * u - sl; }
  double scale(double u) const {
    return 2.0 * std::abs(u * u * u) + sl * u * u + (1.0 + theta) * std::abs(u) + sl;
  }
};

// g is monotone on [a, b] and changes sign there.
double bisect(const Cubic& c, double a, double b) {
  double ga = c.g(a);
  for (int it = 0; it < 200; ++it) {
    const double m = 0.5 * (a + b);
    if (m <= a || m >= b) {
      break;
    }
    const double gm = c.g(m);
    if (gm == 0.0) {
      return m;
    }
    if ((gm < 0.0) == (ga < 0.0)) {
      a = m;
      ga = gm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

double residual(double theta, double l, Point2 v) {
  const Point2 w = detail::w_raw(theta, l, l, v);
  return std::max(std::abs(w.x - v.x), std::abs(w.y - v.y));
}

bool newton_2d(double theta, double l, Point2& v) {
  double r = residual(theta, l, v);
  for (int it = 0; it < 200 && r > 0.0; ++it) {
    const double d = 1.0 + theta + v.x + v.y;
    const double d3 = d * d * d;
    const Point2 w = detail::w_raw(theta, l, l, v);
    const double fx = w.x - v.x;
    const double fy = w.y - v.y;
    const double a = 2.0 * l * (1.0 + v.x) * (theta + v.y) / d3 - 1.0;
    const double b = -2.0 * l * (1.0 + v.x) * (1.0 + v.x) / d3;
    const double c = -2.0 * l * (1.0 + v.y) * (1.0 + v.y) / d3;
    const double e = 2.0 * l * (1.0 + v.y) * (theta + v.x) / d3 - 1.0;
    const double det = a * e - b * c;
    if (det == 0.0 || !std::isfinite(det)) {
      return false;
    }
    const double sx = -(e * fx - b * fy) / det;
    const double sy = -(a * fy - c * fx) / det;
    double lam = 1.0;
    Point2 next{};
    double rn = 0.0;
    for (;;) {
      next = {std::max(v.x + lam * sx, 0.0), std::max(v.y + lam * sy, 0.0)};
      rn = residual(theta, l, next);
      if (rn < r || lam < 1e-6) {
        break;
      }
      lam *= 0.5;
    }
    const double moved = std::max(std::abs(next.x - v.x), std::abs(next.y - v.y));
    v = next;
    r = rn;
    if (moved <= 1e-16 * (1.0 + std::max(v.x, v.y))) {
      break;
    }
  }
  return std::isfinite(r);
}

}  // namespace

std::vector<double> cubic_oracle_roots(const Params& p) {
  const double theta = p.theta();
  const double l = p.l();
  const Cubic c{theta, std::sqrt(l)};
  const double upper = 1.0 + std::max(c.sl / 2.0, (1.0 + theta) / 2.0) + c.sl;

  std::vector<double> knots = {0.0};
  std::vector<double> critical;
  const double disc = 4.0 * l - 24.0 * (1.0 + theta);
  if (disc >= 0.0) {
    const double r = std::sqrt(disc);
    for (double k : {(2.0 * c.sl - r) / 12.0, (2.0 * c.sl + r) / 12.0}) {
      if (k > 0.0 && k < upper) {
        knots.push_back(k);
        critical.push_back(k);
      }
    }
  }
  knots.push_back(upper);

  std::vector<double> us;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const double ga = c.g(knots[i]);
    const double gb = c.g(knots[i + 1]);
    if ((ga < 0.0 && gb > 0.0) || (ga > 0.0 && gb < 0.0)) {
      us.push_back(bisect(c, knots[i], knots[i + 1]));
    }
  }
  for (double k : critical) {
    if (std::abs(c.g(k)) <= 1e-13 * c.scale(k)) {
      us.push_back(k);
    }
  }
  std::sort(us.begin(), us.end());
  std::vector<double> xs;
  for (double u : us) {
    const double x = u * u;
    if (xs.empty() || x - xs.back() > 1e-12 * std::max(1.0, x)) {
      xs.push_back(x);
    }
  }
  return xs;
}

std::vector<Point2> oracle_fixed_points(const Params& p) {
  const double theta = p.theta();
  const double l = p.l();
  std::vector<Point2> out;
  for (double x : cubic_oracle_roots(p)) {
    out.push_back({x, x});
  }
  constexpr int kGrid = 32;
  std::vector<Point2> off;
  for (int i = 0; i < kGrid; ++i) {
    for (int j = 0; j < kGrid; ++j) {
      Point2 v{l * i / (kGrid - 1), l * j / (kGrid - 1)};
      if (!newton_2d(theta, l, v)) {
        continue;
      }
      if (residual(theta, l, v) > 1e-10 || std::abs(v.x - v.y) <= 1e-7) {
        continue;
      }
      const bool seen = std::any_of(off.begin(), off.end(), [&](Point2 q) {
        return std::abs(q.x - v.x) <= 1e-7 && std::abs(q.y - v.y) <= 1e-7;
      });
      if (!seen) {
        off.push_back(v);
      }
    }
  }
  std::sort(off.begin(), off.end(), [](Point2 a, Point2 b) { return a.x > b.x; });
  out.insert(out.end(), off.begin(), off.end());
  return out;
}

}  // namespace hcdyn
