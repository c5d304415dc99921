// Acceptance gate: one line per criterion, nonzero exit if any fail.
// Criterion 10 (quintic threefold, minutes of tracking) only runs when
// REALLINES_SLOW=1 is set.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "reallines/pipeline.hpp"
#include "reallines/schubert.hpp"
#include "reallines/surface_io.hpp"

namespace rl = reallines;
namespace sch = reallines::schubert;

namespace {

int g_failures = 0;

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void report(int criterion, bool pass, const std::string& what,
            double seconds) {
  if (!pass) ++g_failures;
  std::printf("criterion %2d: %s  %-55s (%.2fs)\n", criterion,
              pass ? "PASS" : "FAIL", what.c_str(), seconds);
}

void skip(int criterion, const std::string& why) {
  std::printf("criterion %2d: SKIP  %s\n", criterion, why.c_str());
}

// 1. Exact counts and the n=3 cross-engine agreement, under a second.
void criterion_1() {
  Timer t;
  bool ok = sch::n_complex(2) == 27 && sch::double_factorial(2) == 3 &&
            sch::n_complex(3) == 2875 &&
            sch::n_complex(3) == sch::n_complex_oracle(3);
  double s = t.seconds();
  report(1, ok && s < 1.0, "exact counts 27 / 3 / 2875", s);
}

// 2. Cross-engine equality for all n <= 50.
void criterion_2() {
  Timer t;
  bool ok = true;
  for (int n = 1; n <= 50; ++n)
    if (sch::n_complex(n) != sch::n_complex_oracle(n)) ok = false;
  double s = t.seconds();
  report(2, ok && s < 10.0, "schubert == oracle for n <= 50", s);
}

// 3. Congruences: mod-4 coincidence, mod-8 rotation patterns, periodicity.
void criterion_3() {
  Timer t;
  auto mod8 = sch::residue_table(64, 3);
  std::vector<std::uint64_t> nc, ne;
  for (const auto& r : mod8.rows) {
    nc.push_back(r.n_complex_mod);
    ne.push_back(r.n_euler_mod);
  }
  bool ok = mod8.mod4_coincide &&
            sch::matches_rotated_pattern(nc, {1, 1, 3, 3, 5, 5, 7, 7}) &&
            sch::matches_rotated_pattern(ne, {1, 1, 3, 7});
  for (int q = 1; q <= 4 && ok; ++q) {
    auto table = sch::residue_table(4 << q, q);
    ok = table.n_complex_periodic && table.n_euler_periodic;
  }
  report(3, ok, "mod-4 coincidence and mod-2^q periodicity", t.seconds());
}

// 4. Zagier trend: |log ratio| strictly decreasing, golden values frozen.
void criterion_4() {
  Timer t;
  double prev = 1e18;
  bool ok = true;
  for (int n : {5, 10, 20, 40}) {
    double v = std::abs(sch::zagier_asymptote(n).log_ratio);
    if (v >= prev) ok = false;
    prev = v;
  }
  auto near = [](double a, double b) { return std::abs(a - b) < 1e-8; };
  ok = ok && near(std::abs(sch::zagier_asymptote(5).log_ratio),
                  0.21583499137) &&
       near(std::abs(sch::zagier_asymptote(10).log_ratio), 0.109814030007) &&
       near(std::abs(sch::zagier_asymptote(20).log_ratio), 0.055519933717) &&
       near(std::abs(sch::zagier_asymptote(40).log_ratio), 0.0279344202992);
  report(4, ok, "zagier |log ratio| decreasing with frozen goldens",
         t.seconds());
}

// 5. Fermat cubic: 27 complex, 3 real hyperbolic lines of index +1.
void criterion_5() {
  Timer t;
  auto f = rl::surface_to_polynomial(rl::fixture_surface("fermat", 2, 0));
  auto rep = rl::run_pipeline(f, 42);
  bool ok = rep.n_complex_found == 27 && rep.n_real == 3 &&
            rep.signed_sum_abs == 3 && rep.h && *rep.h == 3 && *rep.e == 0;
  for (const auto& rec : rep.lines)
    if (rec.index != 1 || !rec.segre ||
        *rec.segre != rl::SegreType::hyperbolic)
      ok = false;
  double s = t.seconds();
  report(5, ok && s < 10.0, "fermat cubic 27 complex / 3 = 3 + 0", s);
}

// 6. Clebsch cubic: all 27 lines real, 15 hyperbolic + 12 elliptic.
void criterion_6() {
  Timer t;
  auto f = rl::surface_to_polynomial(rl::fixture_surface("clebsch", 2, 0));
  auto rep = rl::run_pipeline(f, 42);
  bool ok = rep.n_real == 27 && rep.signed_sum_abs == 3 && rep.h &&
            *rep.h == 15 && *rep.e == 12;
  double s = t.seconds();
  report(6, ok && s < 10.0, "clebsch cubic 27 = 15 + 12", s);
}

// 7. Twenty seeded random cubics obey every classical law.
void criterion_7() {
  Timer t;
  const std::set<int> allowed{3, 7, 15, 27};
  bool ok = true;
  for (std::uint64_t seed = 1; seed <= 20 && ok; ++seed) {
    auto f =
        rl::surface_to_polynomial(rl::fixture_surface("random", 2, seed));
    auto rep = rl::run_pipeline(f, 42);
    ok = allowed.count(rep.n_real) == 1 && rep.h && rep.e &&
         *rep.h - *rep.e == 3 && *rep.h == rep.n_plus &&
         *rep.e == rep.n_minus;
    // Index sign opposite to the Gram discriminant sign for every line.
    for (const auto& rec : rep.lines)
      if ((rec.jac_det > 0) != (*rec.segre == rl::SegreType::hyperbolic))
        ok = false;
  }
  double s = t.seconds();
  report(7, ok && s < 180.0, "20 random cubics: counts, magic, segre signs",
         s);
}

// 8. Projective invariance of (n_real, n_plus, n_minus) and Plucker sets.
void criterion_8() {
  Timer t;
  bool ok = true;
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) pairs.emplace_back(a, b);
  for (std::uint64_t seed = 31; seed <= 35 && ok; ++seed) {
    auto f =
        rl::surface_to_polynomial(rl::fixture_surface("random", 2, seed));
    auto rep = rl::run_pipeline(f, 42);
    auto M = rl::random_projective_change(4, seed * 91);
    auto rep2 = rl::run_pipeline(rl::apply_projective_change(f, M), 43);
    ok = rep2.n_real == rep.n_real && rep2.n_plus == rep.n_plus &&
         rep2.n_minus == rep.n_minus;
    // Push rep2's Plucker coordinates forward through M and match.
    for (const auto& rec2 : rep2.lines) {
      std::vector<double> w(6, 0.0);
      for (size_t r = 0; r < 6; ++r)
        for (size_t k = 0; k < 6; ++k) {
          auto [a, b] = pairs[r];
          auto [c, d] = pairs[k];
          w[r] += (M(a, c) * M(b, d) - M(a, d) * M(b, c)) *
                  rec2.plucker.coords[k];
        }
      double norm = 0;
      for (double x : w) norm += x * x;
      norm = std::sqrt(norm);
      for (double& x : w) x /= norm;
      for (double x : w)
        if (std::abs(x) > 1e-8) {
          if (x < 0)
            for (double& y : w) y = -y;
          break;
        }
      double best = 1e18;
      for (const auto& rec : rep.lines) {
        double dist = 0;
        for (size_t k = 0; k < 6; ++k) {
          double d = w[k] - rec.plucker.coords[k];
          dist += d * d;
        }
        best = std::min(best, std::sqrt(dist));
      }
      if (best > 1e-6) ok = false;
    }
  }
  report(8, ok, "projective invariance of counts and plucker sets",
         t.seconds());
}

// 9. Analytic Jacobian vs finite differences, plus the exact normal form.
void criterion_9() {
  Timer t;
  bool ok = true;
  std::mt19937_64 rng(2025);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  const double eps = 1e-6;
  for (int trial = 0; trial < 100 && ok; ++trial) {
    rl::HomogeneousPolynomial<double> f(4, 3);
    for (int a = 0; a <= 3; ++a)
      for (int b = 0; a + b <= 3; ++b)
        for (int c = 0; a + b + c <= 3; ++c)
          f.add_term({a, b, c, 3 - a - b - c}, coeff(rng));
    std::vector<double> params(4);
    for (auto& p : params) p = 2 * coeff(rng);
    rl::ChartedLine<double> line(4, {2, 3}, params);
    Eigen::MatrixXd J = rl::section_jacobian(f, line);
    for (int col = 0; col < 4 && ok; ++col) {
      auto lo = line, hi = line;
      lo.params[col] -= eps;
      hi.params[col] += eps;
      auto rlo = rl::restrict_to_line(f, lo);
      auto rhi = rl::restrict_to_line(f, hi);
      for (int r = 0; r <= 3; ++r) {
        double fd = (rhi[r] - rlo[r]) / (2 * eps);
        double scale = std::max({1.0, std::abs(fd), std::abs(J(r, col))});
        if (std::abs(J(r, col) - fd) > 1e-6 * scale) ok = false;
      }
    }
  }

  // Normal form: f = x0 (a x2^2 + 2b x2 x3 + c x3^2)
  //                + x1 (d x2^2 + 2e x2 x3 + g x3^2) at the axis line has
  // the classical Jacobi matrix, exactly.
  const double a = 2, b = -3, c = 5, d = 7, e = -11, g = 13;
  rl::HomogeneousPolynomial<double> nf(4, 3);
  nf.add_term({1, 0, 2, 0}, a);
  nf.add_term({1, 0, 1, 1}, 2 * b);
  nf.add_term({1, 0, 0, 2}, c);
  nf.add_term({0, 1, 2, 0}, d);
  nf.add_term({0, 1, 1, 1}, 2 * e);
  nf.add_term({0, 1, 0, 2}, g);
  rl::ChartedLine<double> axis(4, {2, 3}, {0, 0, 0, 0});
  Eigen::MatrixXd J = rl::section_jacobian(nf, axis);
  Eigen::MatrixXd expected(4, 4);
  expected << a, 0, d, 0, 2 * b, a, 2 * e, d, c, 2 * b, g, 2 * e, 0, c, 0, g;
  if ((J - expected).norm() != 0.0) ok = false;

  report(9, ok, "analytic jacobian vs finite differences + normal form",
         t.seconds());
}

// 10. Quintic threefold; minutes of tracking, opt-in.
void criterion_10() {
  const char* slow = std::getenv("REALLINES_SLOW");
  if (!slow || std::string(slow) != "1") {
    skip(10, "quintic threefold (set REALLINES_SLOW=1 to run)");
    return;
  }
  Timer t;
  auto f = rl::surface_to_polynomial(rl::fixture_surface("random", 3, 1));
  auto rep = rl::run_pipeline(f, 42);
  bool ok = rep.n_complex_found == 2875 && rep.signed_sum_abs == 15 &&
            rep.n_real >= 15;
  report(10, ok, "quintic threefold 2875 complex, |signed| = 15",
         t.seconds());
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  if (g_failures) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
