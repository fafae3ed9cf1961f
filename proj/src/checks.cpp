#include "hcdyn/checks.hpp"

#include <algorithm>
#include <array>
#include <cstdarg>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <random>
#include <sstream>

#include "hcdyn/core_map.hpp"
#include "hcdyn/dynamics.hpp"
#include "hcdyn/errors.hpp"
#include "hcdyn/fixed_points.hpp"
#include "hcdyn/l1_lift.hpp"
#include "hcdyn/oracle.hpp"

namespace hcdyn {

namespace {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(gen_); }
  double log_uniform(double a, double b) { return std::exp(uniform(std::log(a), std::log(b))); }
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(gen_); }
  bool coin() { return pick(2) == 1; }

 private:
  std::mt19937_64 gen_;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

template <typename Body>
CriterionResult timed(int id, std::string title, double budget, Body&& body) {
  CriterionResult r;
  r.id = id;
  r.title = std::move(title);
  r.budget_seconds = budget;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    r.correct = body(r.details);
  } catch (const std::exception& e) {
    r.correct = false;
    r.details.push_back(std::string("unexpected error: ") + e.what());
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::optional<RegionLabel> try_region(double theta, double l) {
  try {
    return classify_region(Params(theta, l));
  } catch (const ClassificationGap&) {
    return std::nullopt;
  }
}

const FixedPointRecord* family_in(const std::vector<FixedPointRecord>& fps, Family f) {
  for (const auto& r : fps) {
    if (r.family == f) {
      return &r;
    }
  }
  return nullptr;
}

// ---------------------------------------------------------------- criterion 4 helpers

struct LineTally {
  int params = 0;
  int points = 0;
  int predicted = 0;
  int predicted_ok = 0;
  int box_only = 0;
  int box_ok = 0;
  int literal_disagree = 0;
  double worst = 0.0;

  bool ok(int min_params) const {
    return params >= min_params && predicted_ok == predicted && box_ok == box_only && points > 0;
  }
  std::string line(const char* name) const {
    return fmt("%-34s params=%d points=%d predicted=%d/%d box-only=%d (inside box %d) worst=%.2e",
               name, params, points, predicted_ok, predicted, box_only, box_ok, worst);
  }
};

// Iterates v0 and scores the verdict of classify_limit against the observed limit.
void score(const Params& p, Point2 v0, std::optional<Point2> literal, LineTally& t) {
  const LimitVerdict verdict = classify_limit(p, v0);
  const Trajectory tr = iterate_trajectory(p, v0, kDefaultMaxIters, kDefaultTol, false);
  ++t.points;
  if (verdict.limit) {
    ++t.predicted;
    double err = linf_distance(tr.final_point, *verdict.limit);
    if (err > 1e-8 && tr.iterations < kDefaultMaxIters) {
      // The stall test stopped early; spend the whole step budget before judging.
      const Trajectory full = iterate_trajectory(p, v0, kDefaultMaxIters, 1e-300, false);
      err = linf_distance(full.final_point, *verdict.limit);
    }
    t.worst = std::max(t.worst, err);
    if (err <= 1e-8) {
      ++t.predicted_ok;
    }
  } else {
    ++t.box_only;
    if (tr.converged && verdict.box.contains(*tr.limit, 1e-9)) {
      ++t.box_ok;
    }
  }
  if (literal && tr.converged && linf_distance(*tr.limit, *literal) > 1e-8) {
    ++t.literal_disagree;
  }
}

// Random points of M_minus carrying one of the wanted basin labels with respect to `target`.
// Proposals are offsets into the SE quadrants of target, plus uniform draws over [0, L]^2.
std::vector<Point2> basin_members(const Params& p, Point2 target,
                                  const std::vector<BasinLabel>& wanted, int count, Rng& rng) {
  std::vector<Point2> out;
  const double scale = 1.0 + std::max(target.x, target.y);
  for (int attempt = 0; attempt < 20000 && static_cast<int>(out.size()) < count; ++attempt) {
    Point2 v{};
    if (attempt % 4 == 3) {
      v = {rng.uniform(0.0, p.l()), rng.uniform(0.0, p.l())};
    } else {
      const double r = rng.log_uniform(1e-4, 1.0) * scale;
      const double side = rng.coin() ? 1.0 : -1.0;
      v = {target.x + side * rng.uniform(0.0, 1.0) * r, target.y - side * rng.uniform(0.0, 1.0) * r};
    }
    if (v.x < 0.0 || v.y < 0.0 || sector_of(v) != PlaneSector::minus) {
      continue;
    }
    const BasinLabel b = basin_membership(p, target, v);
    if (std::find(wanted.begin(), wanted.end(), b) != wanted.end()) {
      out.push_back(v);
    }
  }
  return out;
}

Params sample_a10(Rng& rng) {
  for (;;) {
    const double theta = rng.uniform(0.3, 12.0);
    const double edge = theta <= 5.0 ? region::pitchfork(theta) : region::fold(theta);
    const double l = edge * rng.uniform(0.1, 0.85);
    if (try_region(theta, l) == RegionLabel::A_1_0) {
      return Params(theta, l);
    }
  }
}

Params sample_a12(Rng& rng) {
  for (;;) {
    double theta = 0.0;
    double l = 0.0;
    if (rng.pick(3) < 2) {
      theta = rng.uniform(0.3, 16.5);
      l = region::pitchfork(theta) * rng.uniform(1.15, 3.0);
    } else {
      theta = rng.uniform(17.5, 30.0);
      l = lhat_thresholds(theta).lhat2 + rng.uniform(2.0, 60.0);
    }
    if (try_region(theta, l) == RegionLabel::A_1_2) {
      return Params(theta, l);
    }
  }
}

Params sample_a14(Rng& rng) {
  for (;;) {
    const double theta = rng.uniform(5.5, 20.0);
    const double lo = region::fold(theta);
    const double hi = region::pitchfork(theta);
    const double l = lo + (hi - lo) * rng.uniform(0.15, 0.85);
    if (try_region(theta, l) == RegionLabel::A_1_4) {
      return Params(theta, l);
    }
  }
}

Params sample_three_diagonal(Rng& rng) {
  for (;;) {
    const double theta = rng.uniform(17.5, 30.0);
    const LhatPair h = lhat_thresholds(theta);
    const double l = h.lhat1 + (h.lhat2 - h.lhat1) * rng.uniform(0.15, 0.85);
    const auto r = try_region(theta, l);
    if (r == RegionLabel::A_3_2 || r == RegionLabel::A_3_4) {
      return Params(theta, l);
    }
  }
}

}  // namespace

// ------------------------------------------------------------------- criterion 1

CriterionResult check_special_values() {
  return timed(1, "special values at theta = 17", 1e-3, [](std::vector<std::string>& d) {
    const LhatPair h = lhat_thresholds(17.0);
    const XstarPair xs = xstar_thresholds(17.0);
    const Params p(17.0, 108.0);
    const std::vector<double> diag = diagonal_fixed_points(p);
    const bool one_root = diag.size() == 1;
    const double x = one_root ? diag[0] : std::numeric_limits<double>::quiet_NaN();
    const ScalarStability s = scalar_stability(p, x);
    const bool ok_h = std::abs(h.lhat1 - 108.0) <= 1e-9 && std::abs(h.lhat2 - 108.0) <= 1e-9;
    const bool ok_x = std::abs(xs.xstar1 - 3.0) <= 1e-9 && std::abs(xs.xstar2 - 3.0) <= 1e-9;
    const bool ok_root = one_root && std::abs(x - 3.0) <= 1e-9;
    const bool ok_d = std::abs(s.derivative - 1.0) <= 1e-9 && s.stability == Stability::non_hyperbolic;
    d.push_back(fmt("Lhat = (%.17g, %.17g)", h.lhat1, h.lhat2));
    d.push_back(fmt("x* = (%.17g, %.17g)", xs.xstar1, xs.xstar2));
    d.push_back(fmt("diagonal fixed point %.17g, f' = %.17g (%s)", x, s.derivative,
                    std::string(to_string(s.stability)).c_str()));
    return ok_h && ok_x && ok_root && ok_d;
  });
}

// ------------------------------------------------------------------- criterion 2

CriterionResult check_oracle_equivalence() {
  return timed(2, "closed forms vs oracle on 50x50 grid", 30.0, [](std::vector<std::string>& d) {
    int evaluated = 0;
    int banded = 0;
    int count_mismatch = 0;
    int point_mismatch = 0;
    int errors = 0;
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
      const double theta = 0.5 + 24.5 * i / 49.0;
      for (int j = 0; j < 50; ++j) {
        const double l = 0.5 + 199.5 * j / 49.0;
        const auto centre = try_region(theta, l);
        bool band = !centre.has_value();
        for (auto [dt, dl] : {std::pair{1e-6, 0.0}, {-1e-6, 0.0}, {0.0, 1e-6}, {0.0, -1e-6}}) {
          band = band || try_region(theta + dt, l + dl) != centre;
        }
        if (band) {
          ++banded;
          continue;
        }
        ++evaluated;
        try {
          const Params p(theta, l);
          const std::vector<FixedPointRecord> fps = fixed_point_set(p);
          const std::vector<Point2> oracle = oracle_fixed_points(p);
          const RegionCounts c = counts_of(*centre);
          const auto n_diag = std::count_if(fps.begin(), fps.end(),
                                            [](const auto& r) { return is_diagonal(r.family); });
          const auto o_diag = std::count_if(oracle.begin(), oracle.end(),
                                            [](Point2 v) { return v.x == v.y; });
          if (fps.size() != oracle.size() || n_diag != c.diagonal ||
              static_cast<int>(fps.size()) - n_diag != c.offdiagonal || o_diag != c.diagonal) {
            ++count_mismatch;
            if (count_mismatch <= 3) {
              d.push_back(fmt("count mismatch at theta=%.6g L=%.6g: closed %zu, oracle %zu, region %s",
                              theta, l, fps.size(), oracle.size(),
                              std::string(to_string(*centre)).c_str()));
            }
            continue;
          }
          auto nearest = [](Point2 v, auto&& pts, auto&& get) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& q : pts) {
              best = std::min(best, linf_distance(v, get(q)));
            }
            return best;
          };
          bool bad = false;
          for (const auto& r : fps) {
            const double e = nearest(r.location, oracle, [](Point2 q) { return q; });
            worst = std::max(worst, e);
            bad = bad || e > 1e-7;
          }
          for (Point2 v : oracle) {
            const double e = nearest(v, fps, [](const FixedPointRecord& r) { return r.location; });
            bad = bad || e > 1e-7;
          }
          if (bad) {
            ++point_mismatch;
          }
        } catch (const Error& e) {
          ++errors;
          if (errors <= 3) {
            d.push_back(fmt("error at theta=%.6g L=%.6g: %s", theta, l, e.what()));
          }
        }
      }
    }
    d.push_back(fmt("evaluated %d grid points, %d inside boundary bands", evaluated, banded));
    d.push_back(fmt("count mismatches %d, point mismatches %d, errors %d, worst distance %.2e",
                    count_mismatch, point_mismatch, errors, worst));
    return count_mismatch == 0 && point_mismatch == 0 && errors == 0 && evaluated > 0;
  });
}

// ------------------------------------------------------------------- criterion 3

CriterionResult check_invariance_suites(std::uint64_t seed) {
  return timed(3, "invariance suites", 10.0, [seed](std::vector<std::string>& d) {
    constexpr int kSamples = 10'000;
    Rng rng(seed);
    auto random_params = [&] { return Params(rng.uniform(0.2, 25.0), rng.uniform(0.5, 200.0)); };

    int sector_bad = 0;
    for (int k = 0; k < kSamples; ++k) {
      const Params p = random_params();
      const double l = p.l();
      double x = rng.uniform(0.0, 1.5 * l);
      double y = rng.uniform(0.0, 1.5 * l);
      const int eps = rng.pick(3);
      if (eps == 0) {
        y = x;
      } else if ((eps == 1) != (x < y)) {
        std::swap(x, y);
      }
      const Point2 v{x, y};
      if (sector_of(apply_w(p, v), 0.0) != sector_of(v, 0.0)) {
        ++sector_bad;
      }
    }
    d.push_back(fmt("sector invariance: %d violations in %d samples", sector_bad, kSamples));

    int mono_bad = 0;
    for (int k = 0; k < kSamples; ++k) {
      const Params p = random_params();
      const double l = p.l();
      const Point2 a{rng.uniform(0.0, 1.5 * l), rng.uniform(0.0, 1.5 * l)};
      const Point2 b{a.x + rng.uniform(0.0, 1.0) * l * (rng.pick(8) == 0 ? 0.0 : 1.0),
                     std::max(0.0, a.y - rng.uniform(0.0, 1.0) * l * (rng.pick(8) == 0 ? 0.0 : 1.0))};
      if (!se_leq(apply_w(p, a), apply_w(p, b))) {
        ++mono_bad;
      }
    }
    d.push_back(fmt("SE monotonicity: %d violations in %d pairs", mono_bad, kSamples));

    int env_bad = 0;
    for (int k = 0; k < kSamples; ++k) {
      const Params p = random_params();
      const double l = p.l();
      double x = rng.uniform(0.0, 1.5 * l);
      double y = rng.uniform(0.0, 1.5 * l);
      if (x > y) {
        std::swap(x, y);
      }
      constexpr std::size_t kSteps = 30;
      const BracketSequence br = bracketing_sequence(p, kSteps);
      Point2 v{x, y};
      for (std::size_t n = 0; n < kSteps; ++n) {
        v = apply_w(p, v);
        const double lo = br.lower[n] - 1e-12;
        const double hi = br.upper[n] + 1e-12;
        if (v.x < lo || v.x > hi || v.y < lo || v.y > hi) {
          ++env_bad;
          break;
        }
      }
    }
    d.push_back(fmt("bracketing envelope: %d violating trajectories in %d", env_bad, kSamples));

    std::array<int, 4> members{};
    int basin_bad = 0;
    int basin_total = 0;
    // Repelling sides only exist near saddles, so half the draws come from the
    // multi-fixed-point strips and offsets are drawn inside an SE quadrant of fp.
    auto rich_params = [&] {
      const double theta = rng.uniform(5.5, 25.0);
      double lo = region::fold(theta);
      double hi = region::pitchfork(theta);
      if (theta > 17.5 && rng.coin()) {
        const LhatPair h = lhat_thresholds(theta);
        lo = h.lhat1;
        hi = h.lhat2;
      }
      return Params(theta, lo + (hi - lo) * rng.uniform(0.02, 0.98));
    };
    for (int guard = 0; basin_total < kSamples && guard < 1'000'000; ++guard) {
      const Params p = rng.coin() ? random_params() : rich_params();
      std::vector<FixedPointRecord> fps;
      try {
        fps = fixed_point_set(p);
      } catch (const Error&) {
        continue;
      }
      std::vector<Point2> lower;
      std::vector<Point2> saddles;
      for (const auto& r : fps) {
        if (r.location.x <= r.location.y) {
          lower.push_back(r.location);
          if (r.stability != Stability::attracting) {
            saddles.push_back(r.location);
          }
        }
      }
      const auto& pool = !saddles.empty() && rng.coin() ? saddles : lower;
      const Point2 fp = pool[static_cast<std::size_t>(rng.pick(static_cast<int>(pool.size())))];
      const double scale = rng.log_uniform(1e-4, 1.0) * (1.0 + std::max(fp.x, fp.y));
      const double side = rng.coin() ? 1.0 : -1.0;
      const Point2 v{fp.x + side * rng.uniform(0.0, 1.0) * scale,
                     fp.y - side * rng.uniform(0.0, 1.0) * scale};
      if (v.x < 0.0 || v.y < 0.0 || v.y - v.x <= 1e-9) {
        continue;
      }
      const BasinLabel b = basin_membership(p, fp, v);
      if (b == BasinLabel::none) {
        continue;
      }
      auto& n = members[static_cast<std::size_t>(b)];
      if (n >= kSamples / 4) {
        continue;
      }
      ++n;
      ++basin_total;
      const Point2 w = apply_w(p, v);
      if (sector_of(w) != PlaneSector::minus || basin_membership(p, fp, w) != b) {
        ++basin_bad;
      }
    }
    d.push_back(fmt("basin invariance: %d violations in %d members (B_lt %d, B_gt %d, R_lt %d, R_gt %d)",
                    basin_bad, basin_total, members[0], members[1], members[2], members[3]));

    int wedge_bad = 0;
    int wedge_cases = 0;
    for (int k = 0; k < kSamples; ++k) {
      const Params p = random_params();
      std::vector<FixedPointRecord> fps;
      try {
        fps = fixed_point_set(p);
      } catch (const Error&) {
        --k;
        continue;
      }
      const Point2 fp = fps[static_cast<std::size_t>(rng.pick(static_cast<int>(fps.size())))].location;
      const double l = p.l();
      Point2 v{};
      if (rng.coin()) {
        v = {rng.uniform(0.0, 1.5 * l), rng.uniform(0.0, 1.5 * l)};
      } else {
        const double scale = rng.log_uniform(1e-3, 1.0) * (1.0 + std::max(fp.x, fp.y));
        v = {std::max(0.0, fp.x + rng.uniform(-1.0, 1.0) * scale),
             std::max(0.0, fp.y + rng.uniform(-1.0, 1.0) * scale)};
      }
      try {
        const auto res = wedge_relation(p, fp, v);
        if (res) {
          ++wedge_cases;
          if (!claim_holds(res->claim, res->image, fp, kCoordTol)) {
            ++wedge_bad;
          }
        }
      } catch (const ConsistencyError&) {
        ++wedge_bad;
      }
    }
    d.push_back(fmt("wedge soundness: %d violations in %d pairs (%d inside a listed case)",
                    wedge_bad, kSamples, wedge_cases));

    const bool basin_ok = basin_total == kSamples && basin_bad == 0;
    return sector_bad == 0 && mono_bad == 0 && env_bad == 0 && basin_ok && wedge_bad == 0;
  });
}

// ------------------------------------------------------------------- criterion 4

CriterionResult check_limit_theorems(std::uint64_t seed) {
  return timed(4, "limit theorems", 60.0, [seed](std::vector<std::string>& d) {
    constexpr int kParams = 24;
    Rng rng(seed ^ 0x4444ULL);
    bool all_ok = true;

    auto run_diagonal = [&](const Params& p, double x, LineTally& t) {
      score(p, {x, x}, std::nullopt, t);
    };

    // Diagonal case 1: a single fixed point on the diagonal.
    LineTally m1;
    while (m1.params < kParams) {
      double theta = 0.0;
      double l = 0.0;
      if (rng.coin()) {
        theta = rng.uniform(0.2, 16.5);
        l = rng.uniform(0.5, 200.0);
      } else {
        theta = rng.uniform(17.5, 30.0);
        const LhatPair h = lhat_thresholds(theta);
        l = rng.coin() ? rng.uniform(0.5, h.lhat1 - 2.0) : rng.uniform(h.lhat2 + 2.0, h.lhat2 + 100.0);
      }
      const Params p(theta, l);
      if (diagonal_root_count(p) != 1) {
        continue;
      }
      ++m1.params;
      for (int k = 0; k < 4; ++k) {
        run_diagonal(p, rng.uniform(0.0, 2.0 * l), m1);
      }
    }
    d.push_back(m1.line("diagonal, one fixed point"));
    all_ok = all_ok && m1.ok(20);

    // Diagonal case 2: L on a threshold, one simple and one double root.
    LineTally m2_simple;
    LineTally m2_double;
    for (int i = 0; i < kParams; ++i) {
      const double theta = rng.uniform(17.5, 30.0);
      const LhatPair h = lhat_thresholds(theta);
      const Params p(theta, i % 2 == 0 ? h.lhat1 : h.lhat2);
      const std::vector<double> xs = diagonal_fixed_points(p);
      if (xs.size() != 2) {
        all_ok = false;
        continue;
      }
      const bool upper_double = std::abs(std::abs(scalar_derivative(p, xs[1])) - 1.0) <
                                std::abs(std::abs(scalar_derivative(p, xs[0])) - 1.0);
      const double dbl = upper_double ? xs[1] : xs[0];
      const double simple = upper_double ? xs[0] : xs[1];
      ++m2_simple.params;
      ++m2_double.params;
      // Points on the side of the simple root flow to it; the other side creeps to the double root.
      for (int k = 0; k < 2; ++k) {
        const double toward_simple =
            upper_double ? rng.uniform(0.0, dbl - 0.05 * (dbl - simple))
                         : rng.uniform(dbl + 0.05 * (simple - dbl), 2.0 * p.l());
        run_diagonal(p, toward_simple, m2_simple);
        const double toward_double = upper_double ? rng.uniform(dbl * 1.05, 2.0 * p.l())
                                                  : rng.uniform(0.0, dbl * 0.95);
        run_diagonal(p, toward_double, m2_double);
      }
    }
    d.push_back(m2_simple.line("diagonal, threshold, simple side"));
    d.push_back(m2_double.line("diagonal, threshold, double side"));
    all_ok = all_ok && m2_simple.ok(20) && m2_double.ok(20);
    if (!m2_double.ok(20)) {
      d.push_back(
          "  note: the double root is non-hyperbolic (f' = 1); on its attracting side the error "
          "after n steps is 1/(|f''/2| n) to leading order, with |f''/2| between 0.01 and 0.12 "
          "here, so 1e-8 takes 1e9 to 1e10 steps against a budget of 1e6");
    }

    // Diagonal case 3: three fixed points.
    LineTally m3;
    for (int i = 0; i < kParams; ++i) {
      const Params p = sample_three_diagonal(rng);
      const std::vector<double> xs = diagonal_fixed_points(p);
      ++m3.params;
      run_diagonal(p, rng.uniform(0.0, xs[1]), m3);
      run_diagonal(p, xs[1], m3);
      run_diagonal(p, rng.uniform(xs[1], 2.0 * p.l()), m3);
    }
    d.push_back(m3.line("diagonal, three fixed points"));
    all_ok = all_ok && m3.ok(20);

    // Region A_1_0: everything off M_plus goes to the diagonal fixed point.
    LineTally a10;
    for (int i = 0; i < kParams; ++i) {
      const Params p = sample_a10(rng);
      const Point2 target = fixed_point_set(p)[0].location;
      ++a10.params;
      for (int k = 0; k < 4; ++k) {
        double x = rng.uniform(0.0, 1.5 * p.l());
        double y = rng.uniform(0.0, 1.5 * p.l());
        if (x > y) {
          std::swap(x, y);
        }
        score(p, {x, k == 0 ? x : y}, target, a10);
      }
    }
    d.push_back(a10.line("A_1_0, v0 off M_plus"));
    all_ok = all_ok && a10.ok(20);

    // Region A_1_2: every point of M_minus goes to p2.
    LineTally a12;
    for (int i = 0; i < kParams; ++i) {
      const Params p = sample_a12(rng);
      const Point2 target = family_in(fixed_point_set(p), Family::p2)->location;
      ++a12.params;
      for (int k = 0; k < 4; ++k) {
        double x = rng.uniform(0.0, 1.5 * p.l());
        double y = rng.uniform(0.0, 1.5 * p.l());
        if (x > y) {
          std::swap(x, y);
        }
        if (y - x <= 1e-9) {
          continue;
        }
        score(p, {x, y}, target, a12);
      }
    }
    d.push_back(a12.line("A_1_2, v0 in M_minus"));
    all_ok = all_ok && a12.ok(20);

    // Region A_1_4, basin of p2 and repulsion sets of p4, then the converse line.
    LineTally a14_p2;
    LineTally a14_p4;
    for (int i = 0; i < kParams; ++i) {
      const Params p = sample_a14(rng);
      const auto fps = fixed_point_set(p);
      const Point2 p2 = family_in(fps, Family::p2)->location;
      const Point2 p4 = family_in(fps, Family::p4)->location;
      auto from_p2 = basin_members(p, p2, {BasinLabel::B_lt, BasinLabel::B_gt}, 2, rng);
      auto from_p4 = basin_members(p, p4, {BasinLabel::R_lt, BasinLabel::R_gt}, 2, rng);
      if (!from_p2.empty() || !from_p4.empty()) {
        ++a14_p2.params;
      }
      for (Point2 v : from_p2) {
        score(p, v, p2, a14_p2);
      }
      for (Point2 v : from_p4) {
        score(p, v, p2, a14_p2);
      }
      auto b_p4 = basin_members(p, p4, {BasinLabel::B_lt, BasinLabel::B_gt}, 2, rng);
      auto r_p2 = basin_members(p, p2, {BasinLabel::R_lt, BasinLabel::R_gt}, 2, rng);
      if (!b_p4.empty() || !r_p2.empty()) {
        ++a14_p4.params;
      }
      for (Point2 v : b_p4) {
        score(p, v, p4, a14_p4);
      }
      for (Point2 v : r_p2) {
        score(p, v, p4, a14_p4);
      }
    }
    d.push_back(a14_p2.line("A_1_4, B(p2) and R(p4)"));
    d.push_back(a14_p4.line("A_1_4, B(p4) and R(p2)"));
    all_ok = all_ok && a14_p2.ok(20) && a14_p4.ok(20);

    // Three diagonal fixed points: basins of every fixed point in the closure of M_minus.
    LineTally a3;
    for (int i = 0; i < kParams; ++i) {
      const Params p = sample_three_diagonal(rng);
      bool any = false;
      for (const auto& r : fixed_point_set(p)) {
        if (r.location.x > r.location.y) {
          continue;
        }
        for (Point2 v : basin_members(p, r.location, {BasinLabel::B_lt, BasinLabel::B_gt}, 1, rng)) {
          score(p, v, r.location, a3);
          any = true;
        }
      }
      if (any) {
        ++a3.params;
      }
    }
    d.push_back(a3.line("three diagonal roots, B(p)"));
    all_ok = all_ok && a3.ok(20);

    d.push_back(fmt("  info: observed limits differing from the unconditional table claim: "
                    "A_1_4 B(p2)/R(p4) %d of %d, A_1_4 B(p4)/R(p2) %d of %d, B(p) %d of %d",
                    a14_p2.literal_disagree, a14_p2.points, a14_p4.literal_disagree, a14_p4.points,
                    a3.literal_disagree, a3.points));
    return all_ok;
  });
}

// ------------------------------------------------------------------- criterion 5

CriterionResult check_period_two() {
  return timed(5, "no 2-periodic points of f", 10.0, [](std::vector<std::string>& d) {
    int cells = 0;
    int positive = 0;
    int found = 0;
    int errors = 0;
    for (int i = 0; i < 50; ++i) {
      const double theta = 0.5 + 24.5 * i / 49.0;
      if (theta == 1.0) {
        continue;
      }
      for (int j = 0; j < 50; ++j) {
        const double l = 0.5 + 199.5 * j / 49.0;
        const Params p(theta, l);
        ++cells;
        if (!(period2_discriminant(p) < 0.0)) {
          ++positive;
        }
        try {
          if (!search_periodic(p, 2).empty()) {
            ++found;
          }
        } catch (const Error& e) {
          ++errors;
        }
      }
    }
    d.push_back(fmt("%d grid cells: D >= 0 at %d, 2-periodic orbits found at %d, errors %d", cells,
                    positive, found, errors));
    return positive == 0 && found == 0 && errors == 0;
  });
}

// ------------------------------------------------------------------- criterion 6

CriterionResult check_contraction(std::uint64_t seed) {
  return timed(6, "contraction towards the diagonal", 5.0, [seed](std::vector<std::string>& d) {
    Rng rng(seed ^ 0x6666ULL);
    int bad = 0;
    double worst_ratio = 0.0;
    for (int k = 0; k < 100; ++k) {
      const double theta = rng.uniform(0.2, 30.0);
      const double lam = lambda_theta(theta);
      const double l = rng.uniform(0.02, 0.999) / lam;
      const Params p(theta, l);
      if (!contraction_certificate(p)) {
        ++bad;
        continue;
      }
      const double q = l * lam;
      Point2 v{rng.uniform(0.0, 1.5 * l), rng.uniform(0.0, 1.5 * l)};
      const double t0 = std::abs(v.y - v.x);
      double envelope = t0;
      for (int n = 1; n <= 200; ++n) {
        v = apply_w(p, v);
        envelope *= q;
        const double tn = std::abs(v.y - v.x);
        if (tn > envelope + 1e-12) {
          ++bad;
          break;
        }
        if (envelope > 1e-9) {
          worst_ratio = std::max(worst_ratio, tn / envelope);
        }
      }
    }
    d.push_back(fmt("100 parameter pairs with L*Lambda < 1: %d envelope violations, max |t_n| / "
                    "envelope = %.6f",
                    bad, worst_ratio));
    return bad == 0;
  });
}

// ------------------------------------------------------------------- criterion 7

CriterionResult check_eigenvalues(std::uint64_t seed) {
  return timed(7, "eigenvalues at p2", 5.0, [seed](std::vector<std::string>& d) {
    Rng rng(seed ^ 0x7777ULL);
    int bad = 0;
    int samples = 0;
    double worst = 0.0;
    double worst_t = 0.0;
    while (samples < 100) {
      const double theta = rng.uniform(0.2, 30.0);
      double lo = region::fold(theta);
      if (theta <= 5.0) {
        lo = region::pitchfork(theta) * 1.001;
      }
      const double l = (samples % 10 == 0 && theta > 5.0) ? region::fold(theta)
                                                          : lo + rng.log_uniform(1e-3, 200.0);
      if (!(l > 0.0)) {
        continue;
      }
      const Params p(theta, l);
      std::vector<FixedPointRecord> fps;
      try {
        fps = fixed_point_set(p);
      } catch (const Error&) {
        continue;
      }
      const FixedPointRecord* p2 = family_in(fps, Family::p2);
      if (p2 == nullptr) {
        continue;
      }
      ++samples;
      const P2Eigenvalues mu = p2_eigenvalues(p);
      const Jacobian j = jacobian_at(p, p2->location);
      const double e = std::max({std::abs(j.eigenvalues[0] - mu.mu1), std::abs(j.eigenvalues[1] - mu.mu2)});
      worst = std::max(worst, e);
      worst_t = std::max(worst_t, std::abs(mu.t - (p2->location.x + p2->location.y)) / (1.0 + mu.t));
      if (e > 1e-9) {
        ++bad;
      }
    }
    d.push_back(fmt("%d samples: max |numeric - closed form| = %.2e, %d above 1e-9 "
                    "(t vs t1 + t2 relative gap %.1e)",
                    samples, worst, bad, worst_t));

    int edge_bad = 0;
    double edge_worst = 0.0;
    for (int k = 0; k < 20; ++k) {
      const double theta = rng.uniform(0.2, 4.9);
      const Params p(theta, region::pitchfork(theta));
      const P2Eigenvalues mu = p2_eigenvalues(p);
      const double expect = std::abs((theta - 1.0) / (theta + 3.0));
      const EigenPair num = jacobian_at(p, {1.0, 1.0}).eigenvalues;
      const double e = std::max({std::abs(mu.t - 2.0), std::abs(mu.mu1 - 1.0),
                                 std::abs(std::abs(mu.mu2) - expect), std::abs(num[0] - 1.0),
                                 std::abs(std::abs(num[1]) - expect)});
      edge_worst = std::max(edge_worst, e);
      if (e > 1e-8) {
        ++edge_bad;
      }
    }
    d.push_back(fmt("t = 2 boundary, 20 samples: max error %.2e, %d above 1e-8", edge_worst, edge_bad));
    return bad == 0 && edge_bad == 0;
  });
}

// ------------------------------------------------------------------- criterion 8

CriterionResult check_lift(std::uint64_t seed) {
  return timed(8, "l1 lift", 10.0, [seed](std::vector<std::string>& d) {
    Rng rng(seed ^ 0x8888ULL);
    constexpr std::size_t kDim = 64;

    double worst_conj = 0.0;
    for (int k = 0; k < 1000; ++k) {
      const double theta = rng.uniform(0.2, 25.0);
      const WeightSeq w = WeightSeq::geometric(rng.uniform(0.5, 0.99), kDim, rng.uniform(0.5, 200.0));
      const Params p = lift_params(theta, w);
      std::vector<double> x(kDim);
      for (double& e : x) {
        e = rng.log_uniform(1e-6, 10.0);
      }
      worst_conj = std::max(worst_conj, semiconjugacy_residual(p, w, TruncatedVector(x)));
    }
    d.push_back(fmt("semi-conjugacy over 1000 applications: max residual %.2e", worst_conj));

    int limits = 0;
    int limit_bad = 0;
    int skipped = 0;
    double worst_limit = 0.0;
    while (limits < 40) {
      const double theta = rng.uniform(0.2, 25.0);
      const WeightSeq w = WeightSeq::geometric(rng.uniform(0.5, 0.99), kDim, rng.uniform(0.5, 200.0));
      const Params p = lift_params(theta, w);
      std::vector<double> x(kDim);
      for (double& e : x) {
        e = rng.log_uniform(1e-6, 10.0);
      }
      TruncatedVector v(x);
      const Trajectory tr = iterate_trajectory(p, project_to_plane(v), kDefaultMaxIters, kDefaultTol, false);
      if (!tr.converged) {
        ++skipped;
        continue;
      }
      ++limits;
      int streak = 0;
      for (std::size_t n = 0; n < kDefaultMaxIters && streak < kStallSteps; ++n) {
        TruncatedVector next = apply_f(p, w, v);
        double change = 0.0;
        for (std::size_t j = 0; j < kDim; ++j) {
          change = std::max(change, std::abs(next.entries()[j] - v.entries()[j]));
        }
        v = std::move(next);
        streak = change <= 1e-14 ? streak + 1 : 0;
      }
      const std::vector<double> expect = lift_limit(p, w, *tr.limit);
      double e = 0.0;
      for (std::size_t j = 0; j < kDim; ++j) {
        e = std::max(e, std::abs(v.entries()[j] - expect[j]));
      }
      worst_limit = std::max(worst_limit, e);
      if (e > 1e-8) {
        ++limit_bad;
      }
    }
    d.push_back(fmt("lifted limits: %d runs, max entrywise error %.2e, %d above 1e-8 (%d starts "
                    "without a converged planar limit skipped)",
                    limits, worst_limit, limit_bad, skipped));

    struct Case {
      double theta;
      double l;
      std::vector<std::string> names;
    };
    const LhatPair h20 = lhat_thresholds(20.0);
    const LhatPair h22 = lhat_thresholds(22.0);
    const std::vector<Case> cases = {
        {6.0, 10.0, {"P1"}},
        {2.0, 9.0, {"P1", "P4", "P5"}},
        {20.0, h20.lhat2, {"P1", "P2", "P4", "P5"}},
        {10.0, 40.0, {"P1", "P4", "P5", "P6", "P7"}},
        {20.0, 136.0, {"P1", "P2", "P3", "P4", "P5"}},
        {22.0, h22.lhat1, {"P1", "P2", "P4", "P5", "P6", "P7"}},
        {22.0, 152.0, {"P1", "P2", "P3", "P4", "P5", "P6", "P7"}},
    };
    int count_bad = 0;
    for (const Case& c : cases) {
      const WeightSeq w = WeightSeq::geometric(0.9, kDim, c.l);
      const Params p = lift_params(c.theta, w);
      std::vector<std::string> names;
      for (const LiftedFixedPoint& f : lifted_fixed_points(p, w)) {
        names.push_back(f.name);
      }
      std::sort(names.begin(), names.end());
      if (names != c.names) {
        ++count_bad;
      }
    }
    d.push_back(fmt("lifted fixed-point sets for the seven regions: %d mismatches", count_bad));
    return worst_conj < 1e-12 && limit_bad == 0 && count_bad == 0;
  });
}

std::vector<CriterionResult> run_all_checks(std::uint64_t seed) {
  return {check_special_values(),     check_oracle_equivalence(), check_invariance_suites(seed),
          check_limit_theorems(seed), check_period_two(),         check_contraction(seed),
          check_eigenvalues(seed),    check_lift(seed)};
}

std::string format_result(const CriterionResult& r, bool with_details) {
  std::ostringstream os;
  os << (r.passed() ? "PASS" : "FAIL") << "  criterion " << r.id << "  " << r.title << "  ("
     << fmt("%.3f s, budget %g s", r.seconds, r.budget_seconds) << ")";
  if (r.correct && !r.within_budget()) {
    os << "  [over time budget]";
  }
  os << '\n';
  if (with_details) {
    for (const std::string& line : r.details) {
      os << "      " << line << '\n';
    }
  }
  return os.str();
}

}  // namespace hcdyn
