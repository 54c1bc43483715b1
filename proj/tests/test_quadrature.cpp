#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cornerlab/geometry.hpp"
#include "cornerlab/quadrature.hpp"

using namespace cornerlab;
using Eigen::Vector2d;

TEST_CASE("polynomials integrate exactly in one cell") {
  Box2 box{{0, 0}, {1, 1}};
  auto q = integrate_adaptive(
      [](double x, double y) { return x * x * x * y * y; }, box, {}, 1e-12);
  CHECK(q.value == doctest::Approx(1.0 / 12.0).epsilon(1e-14));
  CHECK(q.cells == 1);
  CHECK(q.err_estimate <= 1e-12);
}

TEST_CASE("clipped cells use the triangle rule") {
  // lower-left triangle x + y <= 1 of the unit square
  std::vector<HalfPlane> tri = {{Vector2d(-1, -1), 1.0}};
  Box2 box{{0, 0}, {1, 1}};
  auto area = integrate_adaptive([](double, double) { return 1.0; }, box, tri,
                                 1e-12);
  CHECK(area.value == doctest::Approx(0.5).epsilon(1e-13));
  auto firstmom =
      integrate_adaptive([](double x, double) { return x; }, box, tri, 1e-12);
  CHECK(firstmom.value == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
  // fully clipped-away box contributes nothing
  Box2 outside{{2, 2}, {3, 3}};
  auto empty = integrate_adaptive([](double, double) { return 1.0; }, outside,
                                  tri, 1e-12);
  CHECK(empty.value == 0.0);
}

TEST_CASE("gaussian over the plane and the half plane") {
  Box2 box{{-6.5, -6.5}, {6.5, 6.5}};
  auto f = [](double x, double y) { return std::exp(-(x * x + y * y)); };
  auto whole = integrate_adaptive(f, box, {}, 1e-10);
  CHECK(std::fabs(whole.value - std::numbers::pi) < 1e-9);
  CHECK(whole.err_estimate <= 1e-10);

  std::vector<HalfPlane> right = {{Vector2d(1, 0), 0.0}};
  auto half = integrate_adaptive(f, box, right, 1e-10);
  CHECK(std::fabs(half.value - 0.5 * std::numbers::pi) < 1e-9);
}

TEST_CASE("vector integrands share one traversal and commute bitwise") {
  Box2 box{{0, 0}, {2, 2}};
  std::vector<HalfPlane> wedge = {{Vector2d(-1, -1), 3.0}};
  auto q = integrate_adaptive_n(
      [](double x, double y, double* out) {
        double a = std::exp(-x), b = std::cos(y);
        out[0] = a * b;
        out[1] = b * a;  // products commute bitwise in ieee arithmetic
        out[2] = 1.0;
      },
      3, box, wedge, 1e-11);
  CHECK(q.value[0] == q.value[1]);
  CHECK(q.value[2] == doctest::Approx(3.5).epsilon(1e-12));
}

TEST_CASE("discontinuous integrand refuses to converge") {
  Box2 box{{0, 0}, {1, 1}};
  auto step = [](double x, double) { return x < 0.3 ? 1.0 : 0.0; };
  CHECK_THROWS_AS((void)integrate_adaptive(step, box, {}, 1e-12, 10),
                  std::runtime_error);
}

TEST_CASE("deterministic reruns") {
  Box2 box{{-3, 0}, {3, 4}};
  std::vector<HalfPlane> planes = {{Vector2d(0, 1), 0.0},
                                   {Vector2d(-1, 2), 1.0}};
  auto f = [](double x, double y) {
    return std::exp(-0.7 * x * x - y) * std::sin(3 * x + y);
  };
  auto a = integrate_adaptive(f, box, planes, 1e-11);
  auto b = integrate_adaptive(f, box, planes, 1e-11);
  CHECK(a.value == b.value);
  CHECK(a.cells == b.cells);
  CHECK(a.err_estimate == b.err_estimate);
}

TEST_CASE("degenerate boxes integrate to zero") {
  Box2 box{{1, 1}, {1, 5}};
  auto q = integrate_adaptive([](double, double) { return 1.0; }, box, {}, 1e-10);
  CHECK(q.value == 0.0);
}
