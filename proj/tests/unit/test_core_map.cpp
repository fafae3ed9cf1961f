#include <cmath>
#include <random>

#include "doctest.h"

#include "hcdyn/core_map.hpp"
#include "hcdyn/errors.hpp"

using namespace hcdyn;

namespace {

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace

TEST_CASE("params validation") {
  CHECK_THROWS_AS(Params(0.0, 9.0), InvalidArgument);
  CHECK_THROWS_AS(Params(2.0, -1.0), InvalidArgument);
  CHECK_THROWS_AS(Params(NAN, 9.0), InvalidArgument);
  CHECK_THROWS_AS(Params(2.0, INFINITY), InvalidArgument);
  const Params asym(2.0, 9.0, 8.0);
  CHECK_FALSE(asym.symmetric());
  CHECK_THROWS_AS(asym.l(), InvalidArgument);
  CHECK(Params(2.0, 9.0).l() == 9.0);
}

TEST_CASE("apply_w examples") {
  const Params p(2.0, 9.0);
  const Point2 a = apply_w(p, {0.0, 9.0});
  CHECK(close(a.x, 0.0625, 1e-15));
  CHECK(close(a.y, 6.25, 1e-14));

  const Point2 b = apply_w(p, {0.1, 5.0});
  CHECK(close(b.x, 0.16598079561042524, 1e-15));
  CHECK(close(b.y, 4.9382716049382716, 1e-14));

  const Point2 c = apply_w(p, {2.5, 2.5});
  CHECK(c.x == c.y);
}

TEST_CASE("apply_w rejects bad input") {
  const Params p(2.0, 9.0);
  CHECK_THROWS_AS(apply_w(p, {NAN, 1.0}), InvalidArgument);
  CHECK_THROWS_AS(apply_w(p, {1.0, INFINITY}), InvalidArgument);
  CHECK_THROWS_AS(apply_w(p, {-0.5, 1.0}), InvalidArgument);
}

TEST_CASE("apply_w accepts unequal weights") {
  const Params p(2.0, 9.0, 4.0);
  const Point2 w = apply_w(p, {1.0, 1.0});
  CHECK(close(w.x, 9.0 * 4.0 / 25.0, 1e-15));
  CHECK(close(w.y, 4.0 * 4.0 / 25.0, 1e-15));
}

TEST_CASE("scalar_f examples") {
  for (double l : {0.5, 9.0, 123.0}) {
    for (double x : {0.0, 0.3, 7.0, 1e4}) {
      CHECK(close(scalar_f(Params(1.0, l), x), l / 4.0, 1e-12 * l));
    }
  }
  CHECK(close(scalar_f(Params(17.0, 108.0), 3.0), 3.0, 1e-12));
  CHECK(close(scalar_f(Params(2.0, 9.0), 0.0), 1.0, 1e-15));
  CHECK_THROWS_AS(scalar_f(Params(2.0, 9.0), -1.0), InvalidArgument);
}

TEST_CASE("diagonal consistency of scalar_f") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> th(0.1, 30.0), l(0.1, 200.0), x(0.0, 300.0);
  for (int k = 0; k < 1000; ++k) {
    const Params p(th(gen), l(gen));
    const double v = x(gen);
    const Point2 w = apply_w(p, {v, v});
    const double f = scalar_f(p, v);
    CHECK(std::abs(w.x - f) <= 1e-15 * std::max(1.0, f));
    CHECK(std::abs(w.y - f) <= 1e-15 * std::max(1.0, f));
  }
}

TEST_CASE("apply_w_hat examples and conjugacy") {
  const Params p(2.0, 9.0);
  const StPoint u = apply_w_hat(p, {9.0, 9.0});
  CHECK(close(u.s, 6.3125, 1e-14));
  CHECK(close(u.t, 6.1875, 1e-14));
  CHECK(apply_w_hat(p, {4.0, 0.0}).t == 0.0);
  CHECK_THROWS_AS(apply_w_hat(p, {1.0, 2.0}), InvalidArgument);

  std::mt19937_64 gen(12);
  std::uniform_real_distribution<double> th(0.1, 30.0), l(0.1, 200.0), c(0.0, 300.0);
  for (int k = 0; k < 1000; ++k) {
    const Params q(th(gen), l(gen));
    const Point2 v{c(gen), c(gen)};
    const StPoint direct = to_st(apply_w(q, v));
    const StPoint hat = apply_w_hat(q, to_st(v));
    const double scale = std::max(1.0, std::abs(direct.s));
    CHECK(std::abs(direct.s - hat.s) <= 1e-12 * scale);
    CHECK(std::abs(direct.t - hat.t) <= 1e-12 * scale);
  }
}

TEST_CASE("st coordinates round trip") {
  const Point2 v{0.25, 3.5};
  const StPoint u = to_st(v);
  CHECK(u.s == 3.75);
  CHECK(u.t == 3.25);
  const Point2 back = from_st(u);
  CHECK(close(back.x, v.x, 1e-15));
  CHECK(close(back.y, v.y, 1e-15));
}

TEST_CASE("orders") {
  CHECK(se_leq({1, 5}, {2, 3}));
  CHECK_FALSE(se_leq({2, 3}, {1, 5}));
  CHECK(se_leq({1, 1}, {1, 1}));
  CHECK_FALSE(se_less({1, 1}, {1, 1}));
  CHECK(se_less({1, 5}, {1, 4}));
  CHECK(ne_leq({1, 2}, {3, 4}));
  CHECK_FALSE(ne_leq({1, 5}, {3, 4}));
  CHECK(ne_less({1, 2}, {1, 3}));
  CHECK_FALSE(ne_less({2, 2}, {2, 2}));
}

TEST_CASE("SE monotonicity at theta 2, L 9") {
  const Params p(2.0, 9.0);
  std::mt19937_64 gen(13);
  std::uniform_real_distribution<double> c(0.0, 12.0), d(0.0, 5.0);
  for (int k = 0; k < 2000; ++k) {
    const Point2 a{c(gen), c(gen)};
    const Point2 b{a.x + d(gen), std::max(0.0, a.y - d(gen))};
    REQUIRE(se_leq(a, b));
    CHECK(se_leq(apply_w(p, a), apply_w(p, b)));
  }
}

TEST_CASE("sector_of") {
  CHECK(sector_of({1, 1}, 0.0) == PlaneSector::zero);
  CHECK(sector_of({0.1, 5}, 1e-12) == PlaneSector::minus);
  CHECK(sector_of({5, 0.1}, 1e-12) == PlaneSector::plus);
  CHECK(sector_of({1.0, 1.0 + 1e-13}) == PlaneSector::zero);
  CHECK(to_string(PlaneSector::minus) == "M_minus");
  CHECK(to_string(PlaneSector::zero) == "M_zero");
  CHECK(to_string(PlaneSector::plus) == "M_plus");
}

TEST_CASE("sector invariance") {
  std::mt19937_64 gen(14);
  std::uniform_real_distribution<double> th(0.1, 30.0), l(0.1, 200.0), c(0.0, 300.0);
  for (int k = 0; k < 3000; ++k) {
    const Params p(th(gen), l(gen));
    Point2 v{c(gen), c(gen)};
    if (k % 3 == 0) {
      v.y = v.x;
    }
    CHECK(sector_of(apply_w(p, v), 0.0) == sector_of(v, 0.0));
  }
}

TEST_CASE("psi nullcline") {
  const Params p(2.0, 9.0);
  const double x1 = 1.5784722691105627;
  const double t1 = 4.6385157634655248;
  const double t2 = 0.2155862027841597;
  CHECK(close(psi_nullcline(p, x1), x1, 1e-12));
  CHECK(close(psi_nullcline(p, t2), t1, 1e-12));
  CHECK(close(psi_nullcline(p, t1), t2, 1e-12));
  CHECK_THROWS_AS(psi_nullcline(p, 0.0), InvalidArgument);
}

TEST_CASE("lambda_theta") {
  CHECK(close(lambda_theta(5.0), 0.0625, 1e-16));
  CHECK(close(lambda_theta(1.0), 0.5, 1e-16));
  CHECK(close(lambda_theta(3.0), 0.125, 1e-16));
  CHECK(close(1.0 / (4.0 * (3.0 - 1.0)), 2.0 / 16.0, 1e-16));
  CHECK_THROWS_AS(lambda_theta(0.0), InvalidArgument);
}

TEST_CASE("lambda bound is the supremum") {
  std::mt19937_64 gen(15);
  std::uniform_real_distribution<double> th(0.1, 30.0);
  std::uniform_real_distribution<double> ls(-6.0, 6.0);
  for (int k = 0; k < 2000; ++k) {
    const double theta = th(gen);
    const double lam = lambda_theta(theta);
    CHECK(psi_contraction(theta, std::pow(10.0, ls(gen))) <= lam * (1.0 + 1e-15));
  }
  for (double theta : {0.5, 2.0, 3.0, 4.0, 10.0, 25.0}) {
    const double s = lambda_argmax(theta);
    const double lam = lambda_theta(theta);
    if (s > 0.0) {
      CHECK(close(psi_contraction(theta, s), lam, 1e-8));
    } else {
      // Supremum approached as s -> 0+.
      CHECK(close(psi_contraction(theta, 1e-9), lam, 1e-8));
    }
  }
}

TEST_CASE("mirror and distance") {
  CHECK(mirror({1, 2}) == Point2{2, 1});
  CHECK(linf_distance({0, 0}, {1, -3}) == 3.0);
}
