#include "hcdyn/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "hcdyn/errors.hpp"

namespace hcdyn {

namespace {

bool keep_sample(std::size_t step) {
  if (step <= kFullStorage) {
    return true;
  }
  std::size_t stride = 1;
  for (std::size_t s = step; s >= kFullStorage; s /= 10) {
    stride *= 10;
  }
  return step % stride == 0;
}

void require_fixed(const Params& p, Point2 fp) {
  if (fixed_point_residual(p, fp) > kResidualTol) {
    throw InvalidArgument("reference point is not a fixed point of W");
  }
}

double f_raw(double theta, double l, double x) {
  return detail::w_raw(theta, l, l, {x, x}).x;
}

// f^period(x) - x and its derivative.
std::pair<double, double> periodic_defect(double theta, double l, int period, double x) {
  double y = x;
  double slope = 1.0;
  for (int k = 0; k < period; ++k) {
    const double d = 1.0 + theta + 2.0 * y;
    slope *= 2.0 * l * (1.0 + y) * (theta - 1.0) / (d * d * d);
    y = f_raw(theta, l, y);
  }
  return {y - x, slope - 1.0};
}

Family mirror_family(Family f) {
  switch (f) {
    case Family::p1:
      return Family::p2;
    case Family::p2:
      return Family::p1;
    case Family::p3:
      return Family::p4;
    case Family::p4:
      return Family::p3;
    default:
      return f;
  }
}

const FixedPointRecord* find_family(const std::vector<FixedPointRecord>& fps, Family f) {
  for (const FixedPointRecord& r : fps) {
    if (r.family == f) {
      return &r;
    }
  }
  return nullptr;
}

}  // namespace

Trajectory iterate_trajectory(const Params& p, Point2 v0, std::size_t max_iters, double tol,
                              bool store) {
  if (max_iters < 1) {
    throw InvalidArgument("max_iters must be at least 1");
  }
  if (!(tol > 0.0) || !std::isfinite(tol)) {
    throw InvalidArgument("tolerance must be positive");
  }
  apply_w(p, v0);
  const double theta = p.theta();
  const double l1 = p.l1();
  const double l2 = p.l2();

  Trajectory tr;
  tr.start = v0;
  if (store) {
    tr.points.push_back({0, v0});
  }
  Point2 v = v0;
  int streak = 0;
  for (std::size_t n = 0; n < max_iters; ++n) {
    const Point2 w = detail::w_raw(theta, l1, l2, v);
    if (!std::isfinite(w.x) || !std::isfinite(w.y)) {
      throw ConsistencyError("non-finite iterate at step " + std::to_string(n + 1));
    }
    const double d = linf_distance(w, v);
    v = w;
    tr.iterations = n + 1;
    if (store && keep_sample(n + 1)) {
      tr.points.push_back({n + 1, v});
    }
    if (d <= tol) {
      if (++streak == kStallSteps) {
        tr.converged = true;
        tr.converged_at = n + 1 - kStallSteps;
        break;
      }
    } else {
      streak = 0;
    }
  }
  if (store && tr.points.back().step != tr.iterations) {
    tr.points.push_back({tr.iterations, v});
  }
  tr.final_point = v;
  if (tr.converged) {
    tr.limit = v;
  }
  tr.residual = linf_distance(detail::w_raw(theta, l1, l2, v), v);
  return tr;
}

BracketSequence bracketing_sequence(const Params& p, std::size_t n) {
  const double l = p.l();
  BracketSequence b;
  b.lower.reserve(n + 1);
  b.upper.reserve(n + 1);
  Point2 v{0.0, l};
  b.lower.push_back(v.x);
  b.upper.push_back(v.y);
  for (std::size_t k = 0; k < n; ++k) {
    v = detail::w_raw(p.theta(), l, l, v);
    b.lower.push_back(v.x);
    b.upper.push_back(v.y);
  }
  return b;
}

OmegaBox omega_bound(const Params& p, double tol, std::size_t max_iters) {
  if (!(tol > 0.0)) {
    throw InvalidArgument("tolerance must be positive");
  }
  const double l = p.l();
  Point2 v{0.0, l};
  OmegaBox box;
  for (std::size_t k = 0; k < max_iters; ++k) {
    const Point2 w = detail::w_raw(p.theta(), l, l, v);
    const double d = linf_distance(w, v);
    v = w;
    box.iterations = k + 1;
    if (d <= tol) {
      break;
    }
  }
  box.lo = v.x;
  box.hi = v.y;
  return box;
}

std::string_view to_string(PartitionLabel l) {
  constexpr std::array<std::string_view, 5> names = {"A_se_lt", "A_se_gt", "A_ne_lt", "A_ne_gt",
                                                     "on_fix"};
  return names[static_cast<std::size_t>(l)];
}

PartitionLabel nullcline_partition(const Params& p, Point2 v) {
  if (!(v.x > 0.0) || !(v.y > 0.0)) {
    throw InvalidArgument("nullcline partition needs both coordinates positive");
  }
  const double a = v.x - psi_nullcline(p, v.y);
  const double b = v.y - psi_nullcline(p, v.x);
  if (std::abs(a) <= 1e-8 && std::abs(b) <= 1e-8) {
    return PartitionLabel::on_fix;
  }
  if (a >= 0.0 && b <= 0.0) {
    return PartitionLabel::se_lt;
  }
  if (a <= 0.0 && b >= 0.0) {
    return PartitionLabel::se_gt;
  }
  if (a <= 0.0 && b <= 0.0) {
    return PartitionLabel::ne_lt;
  }
  return PartitionLabel::ne_gt;
}

std::string_view to_string(BasinLabel l) {
  constexpr std::array<std::string_view, 5> names = {"B_lt", "B_gt", "R_lt", "R_gt", "none"};
  return names[static_cast<std::size_t>(l)];
}

BasinLabel basin_membership(const Params& p, Point2 fp, Point2 v) {
  p.l();
  if (sector_of(v, kCoordTol) != PlaneSector::minus) {
    throw InvalidArgument("basin sets are defined on M_minus only");
  }
  require_fixed(p, fp);
  const Point2 w = apply_w(p, v);
  if (se_less(v, w) && se_leq(w, fp)) {
    return BasinLabel::B_lt;
  }
  if (se_leq(fp, w) && se_less(w, v)) {
    return BasinLabel::B_gt;
  }
  if (se_less(w, v) && se_leq(v, fp)) {
    return BasinLabel::R_lt;
  }
  if (se_leq(fp, v) && se_less(v, w)) {
    return BasinLabel::R_gt;
  }
  return BasinLabel::none;
}

std::string_view to_string(WedgeCase c) {
  constexpr std::array<std::string_view, 14> names = {"1",  "2",   "3a",  "3b",  "3c",
                                                      "3a'", "3b'", "3c'", "4a",  "4b",
                                                      "4c",  "4a'", "4b'", "4c'"};
  return names[static_cast<std::size_t>(c)];
}

std::string_view to_string(OrderClaim c) {
  constexpr std::array<std::string_view, 4> names = {"W(v) <=se fp", "fp <=se W(v)",
                                                     "W(v) <=ne fp", "fp <=ne W(v)"};
  return names[static_cast<std::size_t>(c)];
}

bool claim_holds(OrderClaim claim, Point2 image, Point2 fp, double tol) noexcept {
  switch (claim) {
    case OrderClaim::image_se_leq_fp:
      return image.x <= fp.x + tol && image.y >= fp.y - tol;
    case OrderClaim::fp_se_leq_image:
      return fp.x <= image.x + tol && fp.y >= image.y - tol;
    case OrderClaim::image_ne_leq_fp:
      return image.x <= fp.x + tol && image.y <= fp.y + tol;
    case OrderClaim::fp_ne_leq_image:
      return fp.x <= image.x + tol && fp.y <= image.y + tol;
  }
  return false;
}

std::optional<WedgeResult> wedge_relation(const Params& p, Point2 fp, Point2 v) {
  const double theta = p.theta();
  p.l();
  require_fixed(p, fp);
  const Point2 image = apply_w(p, v);
  const double a = fp.x;
  const double b = fp.y;
  const double x = v.x;
  const double y = v.y;
  const double s1 = (theta + b) / (1.0 + a);
  const double s2 = (1.0 + b) / (theta + a);

  std::optional<std::pair<WedgeCase, OrderClaim>> hit;
  if (se_leq(v, fp)) {
    hit = {WedgeCase::c1, OrderClaim::image_se_leq_fp};
  } else if (se_leq(fp, v)) {
    hit = {WedgeCase::c2, OrderClaim::fp_se_leq_image};
  } else if (ne_leq(v, fp)) {
    // Below-left quadrant: the lines through fp with slopes s1, s2.
    const double y1 = b - s1 * (a - x);
    const double y2 = b - s2 * (a - x);
    if (theta >= 1.0) {
      if (y1 <= y && y <= y2) {
        hit = {WedgeCase::c3a, OrderClaim::image_ne_leq_fp};
      } else if (y <= y1) {
        hit = {WedgeCase::c3b, OrderClaim::fp_se_leq_image};
      } else if (y2 <= y) {
        hit = {WedgeCase::c3c, OrderClaim::image_se_leq_fp};
      }
    } else {
      if (y2 <= y && y <= y1) {
        hit = {WedgeCase::c4a, OrderClaim::fp_ne_leq_image};
      } else if (y <= y2) {
        hit = {WedgeCase::c4b, OrderClaim::fp_se_leq_image};
      } else if (y1 <= y) {
        hit = {WedgeCase::c4c, OrderClaim::image_se_leq_fp};
      }
    }
  } else if (ne_leq(fp, v)) {
    const double y1 = b + s1 * (x - a);
    const double y2 = b + s2 * (x - a);
    if (theta >= 1.0) {
      if (y2 <= y && y <= y1) {
        hit = {WedgeCase::c3a_, OrderClaim::fp_ne_leq_image};
      } else if (y <= y2) {
        hit = {WedgeCase::c3b_, OrderClaim::fp_se_leq_image};
      } else if (y1 <= y) {
        hit = {WedgeCase::c3c_, OrderClaim::image_se_leq_fp};
      }
    } else {
      if (y1 <= y && y <= y2) {
        hit = {WedgeCase::c4a_, OrderClaim::image_ne_leq_fp};
      } else if (y <= y1) {
        hit = {WedgeCase::c4b_, OrderClaim::fp_se_leq_image};
      } else if (y2 <= y) {
        hit = {WedgeCase::c4c_, OrderClaim::image_se_leq_fp};
      }
    }
  }
  if (!hit) {
    return std::nullopt;
  }
  if (!claim_holds(hit->second, image, fp, kCoordTol)) {
    throw ConsistencyError("wedge case " + std::string(to_string(hit->first)) +
                           " asserted " + std::string(to_string(hit->second)) +
                           " but direct evaluation disagrees");
  }
  return WedgeResult{hit->first, hit->second, image};
}

double period2_discriminant(const Params& p) {
  const double a = (1.0 + p.theta()) / 2.0;
  const double b = p.l() / 4.0;
  return -b * (a - 1.0) * (a - 1.0) *
         (4.0 * a * a * a + 3.0 * a * a * b + 6.0 * a * b + 4.0 * b * b - b);
}

std::vector<double> search_periodic(const Params& p, int period, std::size_t grid) {
  if (period < 1) {
    throw InvalidArgument("period must be at least 1");
  }
  if (grid < 2) {
    throw InvalidArgument("grid needs at least two points");
  }
  const double theta = p.theta();
  const double l = p.l();
  const std::vector<double> fixed = diagonal_fixed_points(p);

  std::vector<double> xs(grid);
  std::vector<double> hs(grid);
  for (std::size_t i = 0; i < grid; ++i) {
    xs[i] = l * static_cast<double>(i) / static_cast<double>(grid - 1);
    hs[i] = periodic_defect(theta, l, period, xs[i]).first;
  }

  std::vector<double> candidates;
  for (std::size_t i = 0; i + 1 < grid; ++i) {
    if (hs[i] == 0.0) {
      candidates.push_back(xs[i]);
    } else if ((hs[i] < 0.0) != (hs[i + 1] < 0.0) && hs[i + 1] != 0.0) {
      double lo = xs[i];
      double hi = xs[i + 1];
      const bool lo_neg = hs[i] < 0.0;
      for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
          break;
        }
        if ((periodic_defect(theta, l, period, mid).first < 0.0) == lo_neg) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      candidates.push_back(0.5 * (lo + hi));
    }
  }
  // Tangential zeros do not change sign: polish local minima of |h| with Newton.
  for (std::size_t i = 1; i + 1 < grid; ++i) {
    if (std::abs(hs[i]) < std::abs(hs[i - 1]) && std::abs(hs[i]) <= std::abs(hs[i + 1])) {
      double x = xs[i];
      for (int it = 0; it < 50; ++it) {
        const auto [h, dh] = periodic_defect(theta, l, period, x);
        if (dh == 0.0 || !std::isfinite(h / dh)) {
          break;
        }
        const double next = std::max(x - h / dh, 0.0);
        if (std::abs(next - x) <= 1e-15 * (1.0 + x)) {
          x = next;
          break;
        }
        x = next;
      }
      candidates.push_back(x);
    }
  }

  std::vector<double> out;
  for (double x : candidates) {
    if (!(x >= 0.0) || std::abs(periodic_defect(theta, l, period, x).first) > kResidualTol) {
      continue;
    }
    const bool near_fixed = std::any_of(fixed.begin(), fixed.end(),
                                        [&](double r) { return std::abs(r - x) <= 1e-6; });
    if (near_fixed) {
      continue;
    }
    const bool seen =
        std::any_of(out.begin(), out.end(), [&](double r) { return std::abs(r - x) <= 1e-9; });
    if (!seen) {
      out.push_back(x);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool contraction_certificate(const Params& p) { return p.l() * lambda_theta(p.theta()) < 1.0; }

std::string_view to_string(LimitRule r) {
  constexpr std::array<std::string_view, 11> names = {
      "fixed_point",   "diagonal_unique", "diagonal_double", "diagonal_triple",
      "region_a10",    "region_a12",      "basin_lower",     "basin_upper",
      "repulsion_lower", "repulsion_upper", "box_only"};
  return names[static_cast<std::size_t>(r)];
}

LimitVerdict classify_limit(const Params& p, Point2 v0) {
  p.l();
  apply_w(p, v0);
  LimitVerdict out;
  out.box = omega_bound(p);

  const std::vector<FixedPointRecord> fps = fixed_point_set(p);
  for (const FixedPointRecord& r : fps) {
    if (linf_distance(r.location, v0) <= kCoordTol) {
      out.limit = r.location;
      out.family = r.family;
      out.rule = LimitRule::fixed_point;
      return out;
    }
  }

  const PlaneSector sector = sector_of(v0, kCoordTol);
  if (sector == PlaneSector::zero) {
    std::vector<const FixedPointRecord*> diag;
    for (const FixedPointRecord& r : fps) {
      if (is_diagonal(r.family)) {
        diag.push_back(&r);
      }
    }
    const double x = 0.5 * (v0.x + v0.y);
    const FixedPointRecord* pick = nullptr;
    if (diag.size() == 1) {
      pick = diag[0];
      out.rule = LimitRule::diagonal_unique;
    } else if (diag.size() == 3) {
      const double x2 = diag[1]->location.x;
      if (std::abs(x - x2) <= kCoordTol) {
        pick = diag[1];
      } else {
        pick = x < x2 ? diag[0] : diag[2];
      }
      out.rule = LimitRule::diagonal_triple;
    } else if (diag.size() == 2) {
      // The double root is the one where f' touches 1.
      const double d0 = std::abs(std::abs(scalar_derivative(p, diag[0]->location.x)) - 1.0);
      const double d1 = std::abs(std::abs(scalar_derivative(p, diag[1]->location.x)) - 1.0);
      const double x1 = diag[0]->location.x;
      const double x2 = diag[1]->location.x;
      if (d1 <= d0) {
        pick = x < x2 - kCoordTol ? diag[0] : diag[1];
      } else {
        pick = x <= x1 + kCoordTol ? diag[0] : diag[1];
      }
      out.rule = LimitRule::diagonal_double;
    }
    if (pick != nullptr) {
      out.limit = pick->location;
      out.family = pick->family;
    }
    return out;
  }

  RegionLabel region{};
  try {
    region = classify_region(p);
  } catch (const ClassificationGap&) {
    return out;
  }
  if (region == RegionLabel::A_1_0) {
    const FixedPointRecord* r = find_family(fps, Family::p1_star);
    out.limit = r->location;
    out.family = r->family;
    out.rule = LimitRule::region_a10;
    return out;
  }

  const bool mirrored = sector == PlaneSector::plus;
  const Point2 v = mirrored ? mirror(v0) : v0;
  auto finish = [&](const FixedPointRecord& r, LimitRule rule) {
    out.rule = rule;
    out.mirrored = mirrored;
    out.family = mirrored ? mirror_family(r.family) : r.family;
    out.limit = mirrored ? mirror(r.location) : r.location;
    return out;
  };

  if (region == RegionLabel::A_1_2) {
    return finish(*find_family(fps, Family::p2), LimitRule::region_a12);
  }

  // Fixed points in the closure of M_minus are the only possible limits.
  std::vector<const FixedPointRecord*> lower;
  for (const FixedPointRecord& r : fps) {
    if (r.location.x <= r.location.y + kCoordTol) {
      lower.push_back(&r);
    }
  }
  auto unique_in = [&](auto&& inside) -> const FixedPointRecord* {
    const FixedPointRecord* found = nullptr;
    for (const FixedPointRecord* r : lower) {
      if (inside(r->location)) {
        if (found != nullptr) {
          return nullptr;
        }
        found = r;
      }
    }
    return found;
  };

  for (const FixedPointRecord* ref : lower) {
    const Point2 fp = ref->location;
    const FixedPointRecord* hit = nullptr;
    LimitRule rule = LimitRule::box_only;
    switch (basin_membership(p, fp, v)) {
      case BasinLabel::B_lt:
        hit = unique_in([&](Point2 q) { return se_leq(v, q) && se_leq(q, fp); });
        rule = LimitRule::basin_lower;
        break;
      case BasinLabel::B_gt:
        hit = unique_in([&](Point2 q) { return se_leq(fp, q) && se_leq(q, v); });
        rule = LimitRule::basin_upper;
        break;
      case BasinLabel::R_lt:
        hit = unique_in([&](Point2 q) { return se_leq(q, v); });
        rule = LimitRule::repulsion_lower;
        break;
      case BasinLabel::R_gt:
        hit = unique_in([&](Point2 q) { return se_leq(v, q); });
        rule = LimitRule::repulsion_upper;
        break;
      case BasinLabel::none:
        break;
    }
    if (hit != nullptr) {
      return finish(*hit, rule);
    }
  }
  out.mirrored = mirrored;
  return out;
}

}  // namespace hcdyn
