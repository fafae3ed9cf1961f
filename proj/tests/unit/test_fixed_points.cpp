#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"

#include "hcdyn/core_map.hpp"
#include "hcdyn/errors.hpp"
#include "hcdyn/fixed_points.hpp"
#include "hcdyn/oracle.hpp"

using namespace hcdyn;

namespace {

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

const FixedPointRecord& find(const std::vector<FixedPointRecord>& fps, Family f) {
  for (const auto& r : fps) {
    if (r.family == f) {
      return r;
    }
  }
  FAIL("family missing");
  return fps.front();
}

// Reference values come from 40-digit root finding.
constexpr double kX1_2_9 = 1.5784722691105627;
constexpr double kT1_2_9 = 4.6385157634655248;
constexpr double kT2_2_9 = 0.2155862027841597;

}  // namespace

TEST_CASE("thresholds at theta 17") {
  const LhatPair h = lhat_thresholds(17.0);
  CHECK(close(h.lhat1, 108.0, 1e-9));
  CHECK(close(h.lhat2, 108.0, 1e-9));
  const XstarPair x = xstar_thresholds(17.0);
  CHECK(close(x.xstar1, 3.0, 1e-9));
  CHECK(close(x.xstar2, 3.0, 1e-9));
}

TEST_CASE("lhat thresholds") {
  const LhatPair a = lhat_thresholds(20.0);
  CHECK(close(a.lhat1, 133.29381208677347, 1e-11));
  CHECK(close(a.lhat2, 138.95618791322653, 1e-11));
  const LhatPair b = lhat_thresholds(22.0);
  CHECK(close(b.lhat1, 149.72065577127525, 1e-11));
  CHECK(close(b.lhat2, 162.52934422872475, 1e-11));
  CHECK_THROWS_AS(lhat_thresholds(16.9), UndefinedThresholds);
  for (double t = 17.0; t < 60.0; t += 0.7) {
    const LhatPair h = lhat_thresholds(t);
    CHECK(h.lhat1 <= h.lhat2);
  }
}

TEST_CASE("xstar thresholds domain") {
  CHECK_NOTHROW(xstar_thresholds(0.5));
  CHECK_THROWS_AS(xstar_thresholds(5.0), UndefinedThresholds);
  const ScalarThresholds s = scalar_thresholds(5.0);
  CHECK_FALSE(s.lhat.has_value());
  CHECK_FALSE(s.xstar.has_value());
  const ScalarThresholds t = scalar_thresholds(20.0);
  CHECK(t.lhat.has_value());
  CHECK(t.xstar.has_value());
  CHECK(t.xstar->xstar1 <= t.xstar->xstar2);
}

TEST_CASE("diagonal fixed points") {
  const auto a = diagonal_fixed_points(Params(17.0, 108.0));
  REQUIRE(a.size() == 1);
  CHECK(close(a[0], 3.0, 1e-9));

  const auto b = diagonal_fixed_points(Params(2.0, 9.0));
  REQUIRE(b.size() == 1);
  CHECK(close(b[0], kX1_2_9, 1e-12));

  const auto c = diagonal_fixed_points(Params(20.0, 136.0));
  REQUIRE(c.size() == 3);
  CHECK(close(c[0], 1.2192235935955849, 1e-10));
  CHECK(close(c[1], 3.2807764064044151, 1e-10));
  CHECK(close(c[2], 8.5, 1e-10));

  const auto d = diagonal_fixed_points(Params(1.0, 5.0));
  REQUIRE(d.size() == 1);
  CHECK(d[0] == 1.25);
}

TEST_CASE("diagonal roots agree with the cubic oracle") {
  std::mt19937_64 gen(21);
  std::uniform_real_distribution<double> th(0.2, 40.0), l(0.2, 300.0);
  for (int k = 0; k < 500; ++k) {
    const Params p(th(gen), l(gen));
    std::vector<double> closed;
    try {
      closed = diagonal_fixed_points(p);
    } catch (const Error&) {
      continue;
    }
    const auto oracle = cubic_oracle_roots(p);
    REQUIRE(closed.size() == oracle.size());
    for (std::size_t i = 0; i < closed.size(); ++i) {
      CHECK(close(closed[i], oracle[i], 1e-8));
    }
    CHECK(static_cast<int>(closed.size()) == diagonal_root_count(p));
  }
}

TEST_CASE("two diagonal roots on the thresholds") {
  for (double theta : {18.0, 20.0, 25.0}) {
    const LhatPair h = lhat_thresholds(theta);
    CHECK(diagonal_root_count(Params(theta, h.lhat1)) == 2);
    CHECK(diagonal_root_count(Params(theta, h.lhat2)) == 2);
    CHECK(diagonal_fixed_points(Params(theta, h.lhat1)).size() == 2);
  }
}

TEST_CASE("off-diagonal fixed points") {
  const auto a = offdiagonal_fixed_points(Params(2.0, 9.0));
  REQUIRE(a.size() == 2);
  CHECK(a[0].family == Family::p1);
  CHECK(close(a[0].location.x, kT1_2_9, 1e-12));
  CHECK(close(a[0].location.y, kT2_2_9, 1e-12));
  CHECK(a[1].location == mirror(a[0].location));

  CHECK(offdiagonal_fixed_points(Params(6.0, 10.0)).empty());

  const auto c = offdiagonal_fixed_points(Params(10.0, 40.0));
  REQUIRE(c.size() == 4);
  CHECK(close(c[0].location.x, 15.259020313537349, 1e-10));
  CHECK(close(c[0].location.y, 0.065535006799409641, 1e-10));
  CHECK(close(c[2].location.x, 2.2262610607012213, 1e-10));
  CHECK(close(c[2].location.y, 0.44918361896202007, 1e-10));
  for (const auto& q : c) {
    CHECK(fixed_point_residual(Params(10.0, 40.0), q.location) <= 1e-9);
  }
}

TEST_CASE("region labels") {
  CHECK(classify_region(Params(2.0, 9.0)) == RegionLabel::A_1_2);
  CHECK(classify_region(Params(6.0, 10.0)) == RegionLabel::A_1_0);
  CHECK(classify_region(Params(22.0, 152.0)) == RegionLabel::A_3_4);
  CHECK(classify_region(Params(10.0, 40.0)) == RegionLabel::A_1_4);
  CHECK(classify_region(Params(20.0, 136.0)) == RegionLabel::A_3_2);
  CHECK(classify_region(Params(20.0, lhat_thresholds(20.0).lhat2)) == RegionLabel::A_2_2);
  CHECK(classify_region(Params(22.0, lhat_thresholds(22.0).lhat1)) == RegionLabel::A_2_4);
  // The fold line belongs to A_1_2 when theta > 5.
  CHECK(classify_region(Params(10.0, 36.0)) == RegionLabel::A_1_2);
  CHECK(classify_region(Params(17.0, 108.0)) == RegionLabel::A_1_2);
}

TEST_CASE("region names round trip") {
  for (RegionLabel r : {RegionLabel::A_1_0, RegionLabel::A_1_2, RegionLabel::A_2_2, RegionLabel::A_1_4,
                        RegionLabel::A_3_2, RegionLabel::A_2_4, RegionLabel::A_3_4}) {
    CHECK(region_from_string(to_string(r)) == r);
  }
  CHECK_FALSE(region_from_string("A_9_9").has_value());
}

TEST_CASE("pitchfork line between 5 and 17 is a gap") {
  CHECK_THROWS_AS(classify_region(Params(10.0, 42.25)), ClassificationGap);
}

TEST_CASE("fixed_point_set examples") {
  const auto a = fixed_point_set(Params(6.0, 10.0));
  REQUIRE(a.size() == 1);
  CHECK(a[0].family == Family::p1_star);
  CHECK(close(a[0].location.x, 0.28947188101642741, 1e-12));

  const auto b = fixed_point_set(Params(2.0, 9.0));
  REQUIRE(b.size() == 3);
  CHECK(b[0].family == Family::p1_star);
  CHECK(b[1].family == Family::p1);
  CHECK(b[2].family == Family::p2);
  CHECK(b[0].stability == Stability::saddle);
  CHECK(b[2].stability == Stability::attracting);

  const auto c = fixed_point_set(Params(22.0, 152.0));
  REQUIRE(c.size() == 7);
  CHECK(close(c[0].location.x, 0.86254139118231258, 1e-10));
  CHECK(close(c[1].location.x, 4.6374586088176874, 1e-10));
  CHECK(close(c[2].location.x, 9.5, 1e-10));
}

TEST_CASE("record invariants over random parameters") {
  std::mt19937_64 gen(22);
  std::uniform_real_distribution<double> th(0.2, 30.0), l(0.2, 250.0);
  int checked = 0;
  for (int k = 0; k < 400; ++k) {
    const Params p(th(gen), l(gen));
    std::vector<FixedPointRecord> fps;
    try {
      fps = fixed_point_set(p);
    } catch (const ClassificationGap&) {
      continue;
    }
    ++checked;
    const RegionCounts c = counts_of(classify_region(p));
    int diag = 0;
    for (const auto& r : fps) {
      CHECK(fixed_point_residual(p, r.location) <= 1e-9);
      if (is_diagonal(r.family)) {
        ++diag;
        CHECK(r.location.x == r.location.y);
      } else {
        CHECK(r.location.x != r.location.y);
        bool mirrored = false;
        for (const auto& q : fps) {
          mirrored = mirrored || linf_distance(q.location, mirror(r.location)) <= 1e-12;
        }
        CHECK(mirrored);
      }
      // Nullcline characterization.
      CHECK(std::abs(r.location.x - psi_nullcline(p, r.location.y)) <= 1e-8);
      CHECK(std::abs(r.location.y - psi_nullcline(p, r.location.x)) <= 1e-8);
    }
    CHECK(diag == c.diagonal);
    CHECK(static_cast<int>(fps.size()) - diag == c.offdiagonal);
  }
  CHECK(checked > 350);
}

TEST_CASE("scalar stability") {
  const ScalarStability a = scalar_stability(Params(17.0, 108.0), 3.0);
  CHECK(close(a.derivative, 1.0, 1e-9));
  CHECK(a.stability == Stability::non_hyperbolic);

  for (double l : {0.5, 5.0, 50.0}) {
    const Params p(0.5, l);
    const auto xs = diagonal_fixed_points(p);
    REQUIRE(xs.size() == 1);
    const ScalarStability s = scalar_stability(p, xs[0]);
    CHECK(std::abs(s.derivative) < 1.0);
    CHECK(s.stability == Stability::attracting);
  }

  const Params q(20.0, 136.0);
  const auto xs = diagonal_fixed_points(q);
  CHECK(scalar_stability(q, xs[0]).stability == Stability::attracting);
  CHECK(scalar_stability(q, xs[1]).stability == Stability::repelling);
  CHECK(scalar_stability(q, xs[2]).stability == Stability::attracting);
  CHECK(close(scalar_stability(q, xs[1]).derivative, 1.056656924, 1e-9));

  CHECK_THROWS_AS(scalar_stability(q, 5.0), InvalidArgument);
}

TEST_CASE("scalar derivative agrees with finite differences") {
  const Params p(7.0, 30.0);
  for (double x : {0.1, 1.0, 4.0, 20.0}) {
    const double h = 1e-6 * (1.0 + x);
    const double fd = (scalar_f(p, x + h) - scalar_f(p, x - h)) / (2.0 * h);
    CHECK(close(scalar_derivative(p, x), fd, 1e-7));
  }
}

TEST_CASE("jacobian at p2 for theta 2, L 9") {
  const Params p(2.0, 9.0);
  const auto& r = find(fixed_point_set(p), Family::p2);
  const Jacobian j = jacobian_at(p, r.location);
  CHECK(close(j.eigenvalues[0].real(), 0.64953640152001868, 1e-12));
  CHECK(close(j.eigenvalues[1].real(), 0.11439562098019162, 1e-12));
  CHECK(j.eigenvalues[0].imag() == 0.0);

  const P2Eigenvalues mu = p2_eigenvalues(p);
  CHECK(close(mu.t, 4.8541019662496845, 1e-12));
  CHECK(close(mu.mu1, 0.64953640152001868, 1e-12));
  CHECK(close(mu.mu2, 0.11439562098019162, 1e-12));
}

TEST_CASE("jacobian matches finite differences of W") {
  const Params p(10.0, 40.0);
  for (const auto& r : fixed_point_set(p)) {
    const Jacobian j = jacobian_at(p, r.location);
    const double h = 1e-6;
    for (int col = 0; col < 2; ++col) {
      Point2 a = r.location;
      Point2 b = r.location;
      (col == 0 ? a.x : a.y) += h;
      (col == 0 ? b.x : b.y) -= h;
      const Point2 wa = apply_w(p, a);
      const Point2 wb = apply_w(p, b);
      CHECK(close(j.m[0][col], (wa.x - wb.x) / (2 * h), 1e-6));
      CHECK(close(j.m[1][col], (wa.y - wb.y) / (2 * h), 1e-6));
    }
  }
}

TEST_CASE("jacobian on the diagonal is symmetric") {
  const Params p(2.0, 9.0);
  const Jacobian j = jacobian_at(p, {kX1_2_9, kX1_2_9});
  CHECK(close(j.m[0][0], j.m[1][1], 1e-15));
  CHECK(close(j.m[0][1], j.m[1][0], 1e-15));
  // Eigenvectors (1, 1) and (1, -1) give a + b and a - b.
  const double a = j.m[0][0];
  const double b = j.m[0][1];
  CHECK(close(j.eigenvalues[0].real(), std::max(a + b, a - b), 1e-12));
  CHECK(close(j.eigenvalues[1].real(), std::min(a + b, a - b), 1e-12));
  CHECK_THROWS_AS(jacobian_at(p, {1.0, 2.0}), InvalidArgument);
}

TEST_CASE("t = 2 boundary") {
  for (double theta : {0.5, 2.0, 4.0}) {
    const Params p(theta, (theta + 3) * (theta + 3) / 4);
    const P2Eigenvalues mu = p2_eigenvalues(p);
    CHECK(close(mu.t, 2.0, 1e-8));
    CHECK(close(mu.mu1, 1.0, 1e-8));
    CHECK(close(std::abs(mu.mu2), std::abs((theta - 1) / (theta + 3)), 1e-8));
  }
}

TEST_CASE("p2 stability regime") {
  std::mt19937_64 gen(23);
  std::uniform_real_distribution<double> th(5.5, 30.0), gap(0.01, 100.0);
  for (int k = 0; k < 200; ++k) {
    const double theta = th(gen);
    const Params p(theta, 4 * (theta - 1) + gap(gen));
    const P2Eigenvalues mu = p2_eigenvalues(p);
    if (mu.t > 2.0) {
      CHECK(mu.mu1 > 0.0);
      CHECK(mu.mu1 < 1.0);
      CHECK(std::abs(mu.mu2) < 1.0);
    }
  }
  for (double theta : {6.0, 10.0, 30.0}) {
    CHECK(close(p2_eigenvalues(Params(theta, 4 * (theta - 1))).mu1, 1.0, 1e-8));
  }
  CHECK_THROWS_AS(p2_eigenvalues(Params(10.0, 20.0)), InvalidArgument);
}

TEST_CASE("eigenvalue classification") {
  using C = std::complex<double>;
  CHECK(classify_eigenvalues({C(0.5), C(0.2)}) == Stability::attracting);
  CHECK(classify_eigenvalues({C(1.5), C(-1.2)}) == Stability::repelling);
  CHECK(classify_eigenvalues({C(1.5), C(0.2)}) == Stability::saddle);
  CHECK(classify_eigenvalues({C(1.0 + 1e-11), C(0.2)}) == Stability::non_hyperbolic);
  CHECK(classify_eigenvalues({C(0.6, 0.8), C(0.6, -0.8)}) == Stability::non_hyperbolic);
  const EigenPair ev = eigenvalues_2x2({{{0.0, -1.0}, {1.0, 0.0}}});
  CHECK(close(std::abs(ev[0]), 1.0, 1e-15));
  CHECK(close(std::abs(ev[0].imag()), 1.0, 1e-15));
}

TEST_CASE("oracle examples") {
  const auto a = oracle_fixed_points(Params(2.0, 9.0));
  REQUIRE(a.size() == 3);
  const auto b = oracle_fixed_points(Params(17.0, 108.0));
  const bool has3 = std::any_of(b.begin(), b.end(), [](Point2 v) {
    return std::abs(v.x - 3.0) <= 1e-6 && v.x == v.y;
  });
  CHECK(has3);
  const auto c = oracle_fixed_points(Params(6.0, 10.0));
  REQUIRE(c.size() == 1);
  CHECK(c[0].x == c[0].y);
}
