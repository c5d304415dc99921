#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "reallines/chart.hpp"

using namespace reallines;

TEST_CASE("spanning points place pivots and params") {
  ChartedLine<double> line(4, {2, 3}, {1, 2, 3, 4});
  auto [P, Q] = line.spanning_points();
  CHECK(P == std::vector<double>{1, 3, 1, 0});
  CHECK(Q == std::vector<double>{2, 4, 0, 1});
  CHECK(line.non_pivots() == std::vector<int>{0, 1});
}

TEST_CASE("charted line validates its shape") {
  CHECK_THROWS_AS(ChartedLine<double>(4, {2, 2}, {1, 2, 3, 4}),
                  std::invalid_argument);
  CHECK_THROWS_AS(ChartedLine<double>(4, {2, 4}, {1, 2, 3, 4}),
                  std::invalid_argument);
  CHECK_THROWS_AS(ChartedLine<double>(4, {2, 3}, {1, 2}),
                  std::invalid_argument);
}

TEST_CASE("plucker coordinates are projective invariants") {
  std::vector<double> P{1, 0, 2, -1}, Q{0, 1, 3, 5};
  auto a = plucker_from_span(P, Q);
  // Any other spanning pair of the same plane gives the same normalized
  // coordinates.
  std::vector<double> P2(4), Q2(4);
  for (int i = 0; i < 4; ++i) {
    P2[i] = 2 * P[i] - Q[i];
    Q2[i] = P[i] + 3 * Q[i];
  }
  auto b = plucker_from_span(P2, Q2);
  CHECK(plucker_distance(a, b) < 1e-12);

  double norm = 0;
  for (double x : a.coords) norm += x * x;
  CHECK(norm == doctest::Approx(1.0));
}

TEST_CASE("plucker rejects degenerate spans") {
  std::vector<double> P{1, 2, 3, 4}, Q{2, 4, 6, 8};
  CHECK_THROWS_AS(plucker_from_span(P, Q), std::invalid_argument);
}

TEST_CASE("chart_from_span round trip") {
  ChartedLine<double> line(4, {2, 3}, {0.3, -1.2, 0.8, 2.5});
  auto [P, Q] = line.spanning_points();
  // Feed back a scrambled basis of the same plane.
  std::vector<double> A(4), B(4);
  for (int i = 0; i < 4; ++i) {
    A[i] = P[i] + 2 * Q[i];
    B[i] = -P[i] + Q[i];
  }
  auto back = chart_from_span(A, B, {2, 3});
  REQUIRE(back.has_value());
  for (int k = 0; k < 4; ++k)
    CHECK(back->params[k] == doctest::Approx(line.params[k]));

  // A line with no component in the pivot plane is invisible in the chart.
  std::vector<double> C{1, 0, 0, 0}, D{0, 1, 0, 0};
  CHECK_FALSE(chart_from_span(C, D, {2, 3}).has_value());
}

TEST_CASE("restrict_to_line") {
  // f = x2^2 x0: on the line (u p0 + v q0, ..., u, v) the restriction is
  // u^2 (u p0 + v q0).
  HomogeneousPolynomial<double> f(4, 3);
  f.add_term({1, 0, 2, 0}, 1.0);
  ChartedLine<double> line(4, {2, 3}, {0.5, -2.0, 0.0, 0.0});
  auto r = restrict_to_line(f, line);
  CHECK(r[0] == doctest::Approx(0.5));   // u^3
  CHECK(r[1] == doctest::Approx(-2.0));  // u^2 v
  CHECK(r[2] == doctest::Approx(0.0));
  CHECK(r[3] == doctest::Approx(0.0));

  // A line on the surface restricts to the zero form.
  HomogeneousPolynomial<double> g(4, 3);
  g.add_term({3, 0, 0, 0}, 1.0);
  g.add_term({0, 3, 0, 0}, 1.0);
  ChartedLine<double> on(4, {2, 3}, {1.0, 0.0, -1.0, 0.0});  // x0 = -x1 plane
  CHECK(restrict_to_line(g, on).max_coeff_magnitude() < 1e-14);
}

TEST_CASE("section_jacobian model normal forms") {
  // f = x2^2 x0 + x3^2 x1 at the axis line: the Jacobian is the identity.
  HomogeneousPolynomial<double> f(4, 3);
  f.add_term({1, 0, 2, 0}, 1.0);
  f.add_term({0, 1, 0, 2}, 1.0);
  ChartedLine<double> axis(4, {2, 3}, {0, 0, 0, 0});
  Eigen::MatrixXd J = section_jacobian(f, axis);
  CHECK((J - Eigen::MatrixXd::Identity(4, 4)).norm() < 1e-14);

  // f = x2^2 x0 + 2 x2 x3 x1 - x3^2 x0: determinant -4.
  HomogeneousPolynomial<double> g(4, 3);
  g.add_term({1, 0, 2, 0}, 1.0);
  g.add_term({0, 1, 1, 1}, 2.0);
  g.add_term({1, 0, 0, 2}, -1.0);
  Eigen::MatrixXd Jg = section_jacobian(g, axis);
  CHECK(Jg.determinant() == doctest::Approx(-4.0));
}

TEST_CASE("section_jacobian column structure") {
  // Columns interleave as (p_c, q_c): the q column is the p column shifted
  // one row down, since d/dq multiplies by v instead of u.
  HomogeneousPolynomial<double> f(4, 3);
  f.add_term({1, 1, 1, 0}, 2.0);
  f.add_term({2, 0, 0, 1}, -1.0);
  f.add_term({0, 0, 3, 0}, 0.7);
  ChartedLine<double> line(4, {2, 3}, {0.4, 1.1, -0.6, 0.2});
  Eigen::MatrixXd J = section_jacobian(f, line);
  REQUIRE(J.rows() == 4);
  REQUIRE(J.cols() == 4);
  for (int k = 0; k < 2; ++k) {
    CHECK(J(3, 2 * k) == doctest::Approx(0.0));
    CHECK(J(0, 2 * k + 1) == doctest::Approx(0.0));
    for (int r = 0; r < 3; ++r)
      CHECK(J(r + 1, 2 * k + 1) == doctest::Approx(J(r, 2 * k)));
  }
}

TEST_CASE("section_jacobian matches finite differences") {
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  const double eps = 1e-6;
  for (int trial = 0; trial < 100; ++trial) {
    HomogeneousPolynomial<double> f(4, 3);
    for (int a = 0; a <= 3; ++a)
      for (int b = 0; a + b <= 3; ++b)
        for (int c = 0; a + b + c <= 3; ++c)
          f.add_term({a, b, c, 3 - a - b - c}, coeff(rng));
    std::vector<double> params(4);
    for (auto& p : params) p = 2 * coeff(rng);
    ChartedLine<double> line(4, {2, 3}, params);
    Eigen::MatrixXd J = section_jacobian(f, line);
    for (int col = 0; col < 4; ++col) {
      auto lo = line, hi = line;
      lo.params[col] -= eps;
      hi.params[col] += eps;
      auto rlo = restrict_to_line(f, lo), rhi = restrict_to_line(f, hi);
      for (int r = 0; r <= 3; ++r) {
        double fd = (rhi[r] - rlo[r]) / (2 * eps);
        CHECK(J(r, col) == doctest::Approx(fd).epsilon(1e-6));
      }
    }
  }
}

TEST_CASE("apply_projective_change maps lines to lines") {
  HomogeneousPolynomial<double> f(4, 3);
  f.add_term({3, 0, 0, 0}, 1.0);
  f.add_term({0, 3, 0, 0}, 1.0);
  f.add_term({0, 0, 3, 0}, 1.0);
  f.add_term({0, 0, 0, 3}, 1.0);

  Eigen::MatrixXd M(4, 4);
  M << 1, 0.2, 0, -0.1, 0, 1, 0.3, 0, 0.5, 0, 1, 0, 0, 0, -0.2, 1;
  auto g = apply_projective_change(f, M);

  // A real line of the Fermat cubic: x0 = -x1, x2 = -x3.
  std::vector<double> P{1, -1, 0, 0}, Q{0, 0, 1, -1};
  // Pull back through M; spans of M^{-1}P, M^{-1}Q lie on g = 0.
  Eigen::Matrix4d Mi = M.inverse();
  std::vector<double> Pb(4), Qb(4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      Pb[i] += Mi(i, j) * P[j];
      Qb[i] += Mi(i, j) * Q[j];
    }
  for (double u : {0.3, -1.7})
    for (double v : {1.0, 0.25}) {
      std::vector<double> x(4);
      for (int i = 0; i < 4; ++i) x[i] = u * Pb[i] + v * Qb[i];
      CHECK(std::abs(g.evaluate(x)) < 1e-12);
    }
}
