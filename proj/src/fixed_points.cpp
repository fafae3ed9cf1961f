#include "hcdyn/fixed_points.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "hcdyn/errors.hpp"
#include "hcdyn/oracle.hpp"

namespace hcdyn {

namespace {

using cplx = std::complex<double>;

constexpr std::array<std::string_view, 7> kRegionNames = {"A_1_0", "A_1_2", "A_2_2", "A_1_4",
                                                          "A_3_2", "A_2_4", "A_3_4"};
constexpr std::array<std::string_view, 7> kFamilyNames = {"p1*", "p2*", "p3*", "p1",
                                                          "p2",  "p3",  "p4"};
constexpr std::array<std::string_view, 4> kStabilityNames = {"attracting", "repelling", "saddle",
                                                             "non_hyperbolic"};

std::string describe(const Params& p) {
  std::ostringstream os;
  os.precision(17);
  os << "theta=" << p.theta() << ", L=" << p.l1();
  return os.str();
}

// g(u) = 2u^3 - sqrt(L) u^2 + (1+theta) u - sqrt(L); x = u^2 is a diagonal fixed point.
double cubic_g(double u, double theta, double sl) {
  return ((2.0 * u - sl) * u + (1.0 + theta)) * u - sl;
}

double cubic_dg(double u, double theta, double sl) {
  return (6.0 * u - 2.0 * sl) * u + (1.0 + theta);
}

double newton_on_cubic(double u, double theta, double sl) {
  for (int it = 0; it < 100; ++it) {
    const double d = cubic_dg(u, theta, sl);
    if (d == 0.0) {
      break;
    }
    const double step = cubic_g(u, theta, sl) / d;
    if (!std::isfinite(step)) {
      break;
    }
    u -= step;
    if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(u)) {
      break;
    }
  }
  return u;
}

// A double root of g is a critical point of g: solve g'(u) = 0 directly.
double critical_point_near(double u, double theta, double sl) {
  const double disc = 4.0 * sl * sl - 24.0 * (1.0 + theta);
  const double r = std::sqrt(std::max(disc, 0.0));
  const double c1 = (2.0 * sl - r) / 12.0;
  const double c2 = (2.0 * sl + r) / 12.0;
  return std::abs(u - c1) <= std::abs(u - c2) ? c1 : c2;
}

std::array<cplx, 3> closed_form_u(double theta, double l) {
  const double sl = std::sqrt(l);
  const double inner = 216.0 + 648.0 * theta + 648.0 * theta * theta + 216.0 * theta * theta * theta +
                       (1917.0 - 1026.0 * theta - 27.0 * theta * theta + 108.0 * l) * l;
  const cplx radicand = cplx((45.0 - 9.0 * theta + l) * sl, 0.0) + std::sqrt(cplx(inner, 0.0));
  const cplx n = std::pow(radicand, 1.0 / 3.0);
  const double c = 6.0 + 6.0 * theta - l;
  if (std::abs(n) <= 1e-12 * (1.0 + std::abs(c))) {
    // Triple root: both N and 6 + 6 theta - L vanish.
    const cplx u(sl / 6.0, 0.0);
    return {u, u, u};
  }
  const cplx i_sqrt3(0.0, std::sqrt(3.0));
  const cplx u1 = sl / 6.0 - c / (6.0 * n) + n / 6.0;
  const cplx u2 = sl / 6.0 + (1.0 + i_sqrt3) * c / (12.0 * n) - (1.0 - i_sqrt3) * n / 12.0;
  const cplx u3 = sl / 6.0 + (1.0 - i_sqrt3) * c / (12.0 * n) - (1.0 + i_sqrt3) * n / 12.0;
  return {u1, u2, u3};
}

double sqrt_clamped(double v) { return std::sqrt(std::max(v, 0.0)); }

}  // namespace

RegionCounts counts_of(RegionLabel r) noexcept {
  switch (r) {
    case RegionLabel::A_1_0:
      return {1, 0};
    case RegionLabel::A_1_2:
      return {1, 2};
    case RegionLabel::A_2_2:
      return {2, 2};
    case RegionLabel::A_1_4:
      return {1, 4};
    case RegionLabel::A_3_2:
      return {3, 2};
    case RegionLabel::A_2_4:
      return {2, 4};
    case RegionLabel::A_3_4:
      return {3, 4};
  }
  return {0, 0};
}

std::string_view to_string(RegionLabel r) { return kRegionNames[static_cast<std::size_t>(r)]; }

std::optional<RegionLabel> region_from_string(std::string_view s) {
  for (std::size_t i = 0; i < kRegionNames.size(); ++i) {
    if (kRegionNames[i] == s) {
      return static_cast<RegionLabel>(i);
    }
  }
  return std::nullopt;
}

bool is_diagonal(Family f) noexcept {
  return f == Family::p1_star || f == Family::p2_star || f == Family::p3_star;
}

std::string_view to_string(Family f) { return kFamilyNames[static_cast<std::size_t>(f)]; }

std::optional<Family> family_from_string(std::string_view s) {
  for (std::size_t i = 0; i < kFamilyNames.size(); ++i) {
    if (kFamilyNames[i] == s) {
      return static_cast<Family>(i);
    }
  }
  return std::nullopt;
}

std::string_view to_string(Stability s) { return kStabilityNames[static_cast<std::size_t>(s)]; }

std::optional<Stability> stability_from_string(std::string_view s) {
  for (std::size_t i = 0; i < kStabilityNames.size(); ++i) {
    if (kStabilityNames[i] == s) {
      return static_cast<Stability>(i);
    }
  }
  return std::nullopt;
}

LhatPair lhat_thresholds(double theta) {
  if (!std::isfinite(theta) || theta < 17.0) {
    throw UndefinedThresholds("L-hat thresholds need theta >= 17");
  }
  const double r = sqrt_clamped(theta * theta - 18.0 * theta + 17.0);
  const double base = 2.0 * theta * theta + 76.0 * theta - 142.0;
  const double spread = (2.0 * theta - 34.0) * r;
  return {(base - spread) / 16.0, (base + spread) / 16.0};
}

XstarPair xstar_thresholds(double theta) {
  if (!std::isfinite(theta) || theta <= 0.0 || (theta > 1.0 && theta < 17.0)) {
    throw UndefinedThresholds("x* thresholds need theta in (0, 1] or theta >= 17");
  }
  const double r = sqrt_clamped(theta * theta - 18.0 * theta + 17.0);
  return {(theta - 5.0 - r) / 4.0, (theta - 5.0 + r) / 4.0};
}

ScalarThresholds scalar_thresholds(double theta) {
  ScalarThresholds out;
  if (theta >= 17.0) {
    out.lhat = lhat_thresholds(theta);
  }
  if ((theta > 0.0 && theta <= 1.0) || theta >= 17.0) {
    out.xstar = xstar_thresholds(theta);
  }
  return out;
}

namespace region {

bool outer_pair_exists(double theta, double l) noexcept {
  if (le(theta, 5.0)) {
    return lt(pitchfork(theta), l);
  }
  return le(fold(theta), l);
}

bool inner_pair_exists(double theta, double l) noexcept {
  return lt(5.0, theta) && lt(fold(theta), l) && lt(l, pitchfork(theta));
}

}  // namespace region

int diagonal_root_count(const Params& p) {
  using namespace region;
  const double theta = p.theta();
  const double l = p.l();
  if (le(theta, 17.0)) {
    return 1;
  }
  const LhatPair h = lhat_thresholds(theta);
  if (eq(l, h.lhat1) || eq(l, h.lhat2)) {
    return 2;
  }
  if (lt(h.lhat1, l) && lt(l, h.lhat2)) {
    return 3;
  }
  return 1;
}

std::vector<double> diagonal_fixed_points(const Params& p) {
  const double theta = p.theta();
  const double l = p.l();
  if (theta == 1.0) {
    return {l / 4.0};
  }
  const double sl = std::sqrt(l);
  const int count = diagonal_root_count(p);
  std::array<cplx, 3> u = closed_form_u(theta, l);

  std::vector<double> roots_u;
  std::vector<bool> simple;
  if (count == 1) {
    const auto best = std::min_element(u.begin(), u.end(), [](cplx a, cplx b) {
      return std::abs(a.imag()) < std::abs(b.imag());
    });
    roots_u.push_back(newton_on_cubic(best->real(), theta, sl));
    simple.push_back(true);
  } else if (count == 3) {
    for (const cplx& z : u) {
      roots_u.push_back(newton_on_cubic(z.real(), theta, sl));
      simple.push_back(true);
    }
  } else {
    // Two roots: merge the closest candidate pair into the double root.
    std::size_t a = 0;
    std::size_t b = 1;
    double best = std::abs(u[0] - u[1]);
    for (auto [i, j] : {std::pair<std::size_t, std::size_t>{0, 2}, {1, 2}}) {
      if (std::abs(u[i] - u[j]) < best) {
        best = std::abs(u[i] - u[j]);
        a = i;
        b = j;
      }
    }
    const std::size_t other = 3 - a - b;
    roots_u.push_back(critical_point_near(0.5 * (u[a] + u[b]).real(), theta, sl));
    simple.push_back(false);
    roots_u.push_back(newton_on_cubic(u[other].real(), theta, sl));
    simple.push_back(true);
  }

  std::vector<std::pair<double, bool>> xs;
  for (std::size_t k = 0; k < roots_u.size(); ++k) {
    xs.emplace_back(roots_u[k] * roots_u[k], simple[k]);
  }
  std::sort(xs.begin(), xs.end());
  for (std::size_t k = 1; k < xs.size(); ++k) {
    if (xs[k].first - xs[k - 1].first <= kCoordTol * std::max(1.0, xs[k].first)) {
      throw ConsistencyError("diagonal roots collapsed at " + describe(p));
    }
  }

  const std::vector<double> oracle = cubic_oracle_roots(p);
  std::vector<double> out;
  for (const auto& [x, is_simple] : xs) {
    if (!(x > 0.0) || !std::isfinite(x)) {
      throw ConsistencyError("non-positive diagonal root at " + describe(p));
    }
    if (std::abs(scalar_f(p, x) - x) > kResidualTol) {
      throw ConsistencyError("diagonal root fails the residual test at " + describe(p));
    }
    if (is_simple) {
      double nearest = std::numeric_limits<double>::infinity();
      for (double r : oracle) {
        nearest = std::min(nearest, std::abs(r - x));
      }
      if (nearest > 1e-8) {
        throw ConsistencyError("diagonal root disagrees with the cubic oracle at " + describe(p));
      }
    }
    out.push_back(x);
  }
  return out;
}

std::vector<OffDiagonalPoint> offdiagonal_fixed_points(const Params& p) {
  const double theta = p.theta();
  const double l = p.l();
  std::vector<OffDiagonalPoint> out;
  const bool outer = region::outer_pair_exists(theta, l);
  const bool inner = region::inner_pair_exists(theta, l);
  if (!outer && !inner) {
    return out;
  }
  const double sl = std::sqrt(l);
  const double a = sqrt_clamped(l - 4.0 * (theta - 1.0));
  const double root = sqrt_clamped(l * l - 4.0 * (theta - 1.0) * l);
  auto emit = [&](double sign, Family big_first, Family small_first) {
    const double r = sqrt_clamped(2.0 * l - 4.0 * theta - 12.0 + sign * 2.0 * root);
    const double m = sl + sign * a;
    const double ta = (m + r) * (m + r) / 16.0;
    const double tb = (m - r) * (m - r) / 16.0;
    const Point2 first{ta, tb};
    const Point2 second{tb, ta};
    if (fixed_point_residual(p, first) > kResidualTol ||
        fixed_point_residual(p, second) > kResidualTol) {
      throw ConsistencyError("off-diagonal point fails the residual test at " + describe(p));
    }
    if (!(ta > tb)) {
      throw ConsistencyError("off-diagonal pair degenerated onto the diagonal at " + describe(p));
    }
    out.push_back({first, big_first});
    out.push_back({second, small_first});
  };
  if (outer) {
    emit(1.0, Family::p1, Family::p2);
  }
  if (inner) {
    emit(-1.0, Family::p3, Family::p4);
  }
  return out;
}

RegionLabel classify_region(const Params& p) {
  using namespace region;
  const double theta = p.theta();
  const double l = p.l();
  const double q = pitchfork(theta);
  const double f4 = fold(theta);
  double h1 = std::numeric_limits<double>::quiet_NaN();
  double h2 = h1;
  const bool above17 = lt(17.0, theta);
  if (above17) {
    const LhatPair h = lhat_thresholds(theta);
    h1 = h.lhat1;
    h2 = h.lhat2;
  }
  const bool upto_s = le(theta, kThetaS);
  const bool below_s = lt(theta, kThetaS);
  const bool beyond_s = lt(kThetaS, theta);

  std::array<bool, 7> hit{};
  hit[0] = (le(l, q) && le(theta, 5.0)) || (lt(l, f4) && lt(5.0, theta));
  hit[1] = (lt(q, l) && le(theta, 17.0)) || (above17 && upto_s && le(q, l) && lt(l, h1)) ||
           (above17 && lt(h2, l)) || (eq(l, f4) && lt(5.0, theta));
  hit[2] = (above17 && eq(l, h2)) || (above17 && below_s && eq(l, h1));
  hit[3] = (lt(5.0, theta) && upto_s && lt(f4, l) && lt(l, q)) ||
           (beyond_s && lt(f4, l) && lt(l, h1));
  hit[4] = (above17 && upto_s && lt(h1, l) && lt(l, h2)) ||
           (beyond_s && lt(q, l) && lt(l, h2));
  hit[5] = beyond_s && eq(l, h1);
  hit[6] = beyond_s && lt(h1, l) && lt(l, q);

  const auto n = std::count(hit.begin(), hit.end(), true);
  if (n == 0) {
    throw ClassificationGap("no region contains " + describe(p));
  }
  if (n > 1) {
    throw ClassificationGap("several regions contain " + describe(p));
  }
  return static_cast<RegionLabel>(std::find(hit.begin(), hit.end(), true) - hit.begin());
}

std::vector<FixedPointRecord> fixed_point_set(const Params& p) {
  const std::vector<double> diag = diagonal_fixed_points(p);
  const std::vector<OffDiagonalPoint> off = offdiagonal_fixed_points(p);
  std::optional<RegionLabel> label;
  try {
    label = classify_region(p);
  } catch (const ClassificationGap&) {
  }
  if (label) {
    const RegionCounts c = counts_of(*label);
    if (c.diagonal != static_cast<int>(diag.size()) ||
        c.offdiagonal != static_cast<int>(off.size())) {
      throw ConsistencyError("fixed-point counts disagree with region " +
                             std::string(to_string(*label)) + " at " + describe(p));
    }
  }
  std::vector<FixedPointRecord> out;
  constexpr std::array<Family, 3> diag_families = {Family::p1_star, Family::p2_star, Family::p3_star};
  for (std::size_t k = 0; k < diag.size(); ++k) {
    const Point2 v{diag[k], diag[k]};
    const Jacobian j = jacobian_at(p, v);
    out.push_back({v, diag_families[k], j.eigenvalues, classify_eigenvalues(j.eigenvalues)});
  }
  for (const OffDiagonalPoint& o : off) {
    const Jacobian j = jacobian_at(p, o.location);
    out.push_back({o.location, o.family, j.eigenvalues, classify_eigenvalues(j.eigenvalues)});
  }
  return out;
}

double scalar_derivative(const Params& p, double x) {
  const double l = p.l();
  const double d = 1.0 + p.theta() + 2.0 * x;
  return 2.0 * l * (1.0 + x) * (p.theta() - 1.0) / (d * d * d);
}

ScalarStability scalar_stability(const Params& p, double xstar) {
  if (!std::isfinite(xstar) || !(xstar > 0.0)) {
    throw InvalidArgument("scalar fixed point must be positive");
  }
  if (std::abs(scalar_f(p, xstar) - xstar) > kResidualTol) {
    throw InvalidArgument("x is not a fixed point of f");
  }
  const double theta = p.theta();
  const double d = 2.0 * (theta - 1.0) * xstar / ((1.0 + xstar) * (1.0 + theta + 2.0 * xstar));
  const double m = std::abs(d);
  Stability s = Stability::attracting;
  if (std::abs(m - 1.0) <= 1e-9) {
    s = Stability::non_hyperbolic;
  } else if (m > 1.0) {
    s = Stability::repelling;
  }
  return {d, s};
}

EigenPair eigenvalues_2x2(const std::array<std::array<double, 2>, 2>& m) {
  const double half_tr = 0.5 * (m[0][0] + m[1][1]);
  const double det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
  const cplx r = std::sqrt(cplx(half_tr * half_tr - det, 0.0));
  EigenPair ev = {cplx(half_tr, 0.0) + r, cplx(half_tr, 0.0) - r};
  if (ev[0].real() < ev[1].real() ||
      (ev[0].real() == ev[1].real() && ev[0].imag() < ev[1].imag())) {
    std::swap(ev[0], ev[1]);
  }
  return ev;
}

Stability classify_eigenvalues(const EigenPair& ev) {
  const double m0 = std::abs(ev[0]);
  const double m1 = std::abs(ev[1]);
  if (std::abs(m0 - 1.0) <= 1e-9 || std::abs(m1 - 1.0) <= 1e-9) {
    return Stability::non_hyperbolic;
  }
  if (m0 < 1.0 && m1 < 1.0) {
    return Stability::attracting;
  }
  if (m0 > 1.0 && m1 > 1.0) {
    return Stability::repelling;
  }
  return Stability::saddle;
}

Jacobian jacobian_at(const Params& p, Point2 fp) {
  p.l();
  if (fixed_point_residual(p, fp) > kResidualTol) {
    throw InvalidArgument("Jacobian requested away from a fixed point");
  }
  const double theta = p.theta();
  const double u = fp.x;
  const double v = fp.y;
  const double d = 1.0 + theta + u + v;
  Jacobian j;
  j.m[0][0] = 2.0 * u * (theta + v) / (d * (1.0 + u));
  j.m[0][1] = -2.0 * u / d;
  j.m[1][0] = -2.0 * v / d;
  j.m[1][1] = 2.0 * v * (theta + u) / (d * (1.0 + v));
  j.eigenvalues = eigenvalues_2x2(j.m);
  return j;
}

P2Eigenvalues p2_eigenvalues(const Params& p) {
  const double theta = p.theta();
  const double l = p.l();
  if (!region::le(region::fold(theta), l)) {
    throw InvalidArgument("closed-form eigenvalues need L >= 4(theta - 1)");
  }
  const double t = 0.5 * (l - 2.0 - 2.0 * theta + sqrt_clamped(l * (l + 4.0 - 4.0 * theta)));
  const double tm1 = (theta - 1.0) * (theta - 1.0);
  const double r = std::sqrt(tm1 + 4.0 - 4.0 * tm1 / (2.0 + t));
  const double den = theta + 1.0 + t;
  return {t, (theta + 1.0 + r) / den, (theta + 1.0 - r) / den};
}

double fixed_point_residual(const Params& p, Point2 v) {
  return linf_distance(apply_w(p, v), v);
}

}  // namespace hcdyn
