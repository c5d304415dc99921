#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "reallines/polynomial.hpp"

namespace reallines {

/// A line in P^{ambient_dim-1} visible in the affine chart where the two
/// pivot homogeneous coordinates take the values (1,0) and (0,1).
///
/// params are interleaved: for each non-pivot coordinate c, in increasing
/// order of c, the pair (p_c, q_c) where the spanning points are
///   P: p-values at non-pivot slots, 1 at pivots.first, 0 at pivots.second
///   Q: q-values at non-pivot slots, 0 at pivots.first, 1 at pivots.second
/// For lines in P^3 with pivots (2,3) this is the order x1, x2, y1, y2.
template <class Scalar>
struct ChartedLine {
  int ambient_dim = 0;
  std::pair<int, int> pivots{0, 1};
  std::vector<Scalar> params;

  ChartedLine() = default;
  ChartedLine(int dim, std::pair<int, int> piv, std::vector<Scalar> prm)
      : ambient_dim(dim), pivots(piv), params(std::move(prm)) {
    if (pivots.first == pivots.second || pivots.first < 0 ||
        pivots.second < 0 || pivots.first >= dim || pivots.second >= dim)
      throw std::invalid_argument("bad pivot pair");
    if (static_cast<int>(params.size()) != 2 * (dim - 2))
      throw std::invalid_argument("params length must be 2*(ambient_dim-2)");
  }

  std::vector<int> non_pivots() const {
    std::vector<int> out;
    for (int c = 0; c < ambient_dim; ++c)
      if (c != pivots.first && c != pivots.second) out.push_back(c);
    return out;
  }

  std::pair<std::vector<Scalar>, std::vector<Scalar>> spanning_points() const {
    std::vector<Scalar> P(ambient_dim, Scalar{}), Q(ambient_dim, Scalar{});
    P[pivots.first] = Scalar(1);
    Q[pivots.second] = Scalar(1);
    int k = 0;
    for (int c : non_pivots()) {
      P[c] = params[2 * k];
      Q[c] = params[2 * k + 1];
      ++k;
    }
    return {P, Q};
  }
};

/// Plucker coordinates of a line, one entry per index pair (a<b) in
/// lexicographic order, normalized to unit norm with the first
/// non-negligible entry rotated to positive real part.
template <class Scalar>
struct PluckerCoords {
  std::vector<Scalar> coords;
};

template <class Scalar>
PluckerCoords<Scalar> plucker_from_span(const std::vector<Scalar>& P,
                                        const std::vector<Scalar>& Q) {
  const int m = static_cast<int>(P.size());
  std::vector<Scalar> w;
  w.reserve(m * (m - 1) / 2);
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b) w.push_back(P[a] * Q[b] - P[b] * Q[a]);
  double norm = 0;
  for (const auto& x : w) norm += magnitude(x) * magnitude(x);
  norm = std::sqrt(norm);
  if (norm < 1e-12) throw std::invalid_argument("degenerate span");
  for (auto& x : w) x = x * Scalar(1.0 / norm);
  for (const auto& x : w) {
    if (magnitude(x) > 1e-8) {
      Scalar phase = x * Scalar(1.0 / magnitude(x));
      for (auto& y : w) y = y / phase;
      break;
    }
  }
  return {std::move(w)};
}

template <class Scalar>
PluckerCoords<Scalar> plucker(const ChartedLine<Scalar>& line) {
  auto [P, Q] = line.spanning_points();
  return plucker_from_span(P, Q);
}

template <class Scalar>
double plucker_distance(const PluckerCoords<Scalar>& a,
                        const PluckerCoords<Scalar>& b) {
  double d = 0;
  for (size_t k = 0; k < a.coords.size(); ++k) {
    double m = magnitude(a.coords[k] - b.coords[k]);
    d += m * m;
  }
  return std::sqrt(d);
}

/// Restriction of f to the line: the binary form f(u P + v Q).
template <class Scalar>
BinaryForm<Scalar> restrict_to_line(const HomogeneousPolynomial<Scalar>& f,
                                    const ChartedLine<Scalar>& line) {
  if (f.num_vars() != line.ambient_dim)
    throw std::invalid_argument("dimension mismatch");
  auto [P, Q] = line.spanning_points();
  const int d = f.degree();
  BinaryForm<Scalar> out(d);
  for (const auto& [e, c] : f.terms()) {
    std::vector<Scalar> cur{c};  // binary form coeffs, initially degree 0
    for (int i = 0; i < f.num_vars(); ++i) {
      for (int k = 0; k < e[i]; ++k) {
        std::vector<Scalar> next(cur.size() + 1, Scalar{});
        for (size_t r = 0; r < cur.size(); ++r) {
          next[r] += cur[r] * P[i];
          next[r + 1] += cur[r] * Q[i];
        }
        cur = std::move(next);
      }
    }
    for (int k = 0; k <= d; ++k) out[k] += cur[k];
  }
  return out;
}

/// Jacobian of the chart section: row r, column c is the derivative of the
/// u^{d-r} v^r coefficient of restrict_to_line with respect to params[c].
/// Columns follow the interleaved param order, rows the frame u^d, ..., v^d.
/// For cubic surfaces and pivots (2,3) this is the classical 4x4 matrix
/// with columns (l11,2l12,l22,0), (0,l11,2l12,l22), (m11,...), (0,m11,...).
template <class Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> section_jacobian(
    const HomogeneousPolynomial<Scalar>& f, const ChartedLine<Scalar>& line) {
  if (f.num_vars() != line.ambient_dim)
    throw std::invalid_argument("dimension mismatch");
  const int d = f.degree();
  const int ncols = 2 * (line.ambient_dim - 2);
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> J(d + 1, ncols);
  J.setZero();
  int k = 0;
  for (int c : line.non_pivots()) {
    // d/dp_c f(uP+vQ) = u * (df/dx_c)(uP+vQ); d/dq_c gives the v multiple.
    BinaryForm<Scalar> g = restrict_to_line(f.partial(c), line);
    for (int r = 0; r <= d; ++r) {
      if (r <= d - 1) J(r, 2 * k) = g[r];
      if (r >= 1) J(r, 2 * k + 1) = g[r - 1];
    }
    ++k;
  }
  return J;
}

/// f composed with the projective change M: (f.M)(x) = f(Mx). Lines of
/// {f.M = 0} map to lines of {f = 0} by applying M to spanning points.
template <class Scalar>
HomogeneousPolynomial<Scalar> apply_projective_change(
    const HomogeneousPolynomial<Scalar>& f,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& M) {
  return f.substitute_linear(M);
}

/// Express the span of (A, B) in the chart with the given pivots, if the
/// span is visible there.
template <class Scalar>
std::optional<ChartedLine<Scalar>> chart_from_span(
    const std::vector<Scalar>& A, const std::vector<Scalar>& B,
    std::pair<int, int> pivots, double min_pivot_det = 1e-10) {
  const int m = static_cast<int>(A.size());
  Eigen::Matrix<Scalar, 2, 2> W;
  W << A[pivots.first], A[pivots.second], B[pivots.first], B[pivots.second];
  Scalar det = W(0, 0) * W(1, 1) - W(0, 1) * W(1, 0);
  if (magnitude(det) < min_pivot_det) return std::nullopt;
  // P = alpha*A + beta*B with (P_i, P_j) = (1, 0); similarly Q -> (0, 1).
  Eigen::Matrix<Scalar, 2, 2> Winv;
  Winv << W(1, 1), -W(0, 1), -W(1, 0), W(0, 0);
  Winv /= det;
  std::vector<Scalar> params;
  params.reserve(2 * (m - 2));
  for (int c = 0; c < m; ++c) {
    if (c == pivots.first || c == pivots.second) continue;
    Scalar p = Winv(0, 0) * A[c] + Winv(0, 1) * B[c];
    Scalar q = Winv(1, 0) * A[c] + Winv(1, 1) * B[c];
    params.push_back(p);
    params.push_back(q);
  }
  return ChartedLine<Scalar>(m, pivots, std::move(params));
}

}  // namespace reallines
