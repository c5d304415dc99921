#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "reallines/chart.hpp"
#include "reallines/polynomial.hpp"

namespace reallines {

using cplx = std::complex<double>;

/// Square affine polynomial system with compiled term tables for fast
/// evaluation of values and Jacobians along homotopy paths.
template <class Scalar>
class PolySystemT {
 public:
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  explicit PolySystemT(std::vector<AffinePolynomial<Scalar>> equations)
      : eqs_(std::move(equations)) {
    if (eqs_.empty()) throw std::invalid_argument("empty system");
    num_vars_ = eqs_[0].num_vars();
    for (const auto& e : eqs_) {
      if (e.num_vars() != num_vars_)
        throw std::invalid_argument("inconsistent variable counts");
      degrees_.push_back(e.total_degree());
    }
    if (static_cast<int>(eqs_.size()) != num_vars_)
      throw std::invalid_argument("system must be square");
    compile();
  }

  int size() const { return num_vars_; }
  const std::vector<int>& degrees() const { return degrees_; }
  const std::vector<AffinePolynomial<Scalar>>& equations() const {
    return eqs_;
  }

  Vec eval(const Vec& x) const {
    powers(x);
    Vec out(num_vars_);
    for (int i = 0; i < num_vars_; ++i) out[i] = eval_compiled(values_[i]);
    return out;
  }

  Mat jacobian(const Vec& x) const {
    powers(x);
    Mat J(num_vars_, num_vars_);
    for (int i = 0; i < num_vars_; ++i)
      for (int j = 0; j < num_vars_; ++j)
        J(i, j) = eval_compiled(partials_[i][j]);
    return J;
  }

  void eval_and_jacobian(const Vec& x, Vec& F, Mat& J) const {
    powers(x);
    F.resize(num_vars_);
    J.resize(num_vars_, num_vars_);
    for (int i = 0; i < num_vars_; ++i) {
      F[i] = eval_compiled(values_[i]);
      for (int j = 0; j < num_vars_; ++j)
        J(i, j) = eval_compiled(partials_[i][j]);
    }
  }

 private:
  struct Compiled {
    std::vector<Scalar> coeffs;
    std::vector<int> exps;  // row-major, num_vars per term
  };

  Compiled compile_one(const AffinePolynomial<Scalar>& p) const {
    Compiled c;
    for (const auto& [e, coeff] : p.terms()) {
      c.coeffs.push_back(coeff);
      for (int k : e) {
        c.exps.push_back(k);
        max_exp_ = std::max(max_exp_, k);
      }
    }
    return c;
  }

  void compile() {
    max_exp_ = 1;
    for (const auto& e : eqs_) values_.push_back(compile_one(e));
    for (const auto& e : eqs_) {
      std::vector<Compiled> row;
      for (int j = 0; j < num_vars_; ++j)
        row.push_back(compile_one(e.partial(j)));
      partials_.push_back(std::move(row));
    }
    pw_.resize(num_vars_ * (max_exp_ + 1));
  }

  void powers(const Vec& x) const {
    for (int i = 0; i < num_vars_; ++i) {
      Scalar* row = pw_.data() + i * (max_exp_ + 1);
      row[0] = Scalar(1);
      for (int k = 1; k <= max_exp_; ++k) row[k] = row[k - 1] * x[i];
    }
  }

  Scalar eval_compiled(const Compiled& c) const {
    Scalar acc{};
    const int nv = num_vars_;
    for (size_t t = 0; t < c.coeffs.size(); ++t) {
      Scalar v = c.coeffs[t];
      const int* e = c.exps.data() + t * nv;
      for (int i = 0; i < nv; ++i)
        if (e[i]) v *= pw_[i * (max_exp_ + 1) + e[i]];
      acc += v;
    }
    return acc;
  }

  std::vector<AffinePolynomial<Scalar>> eqs_;
  std::vector<int> degrees_;
  int num_vars_ = 0;
  mutable int max_exp_ = 1;
  std::vector<Compiled> values_;
  std::vector<std::vector<Compiled>> partials_;
  mutable std::vector<Scalar> pw_;
};

using PolySystem = PolySystemT<cplx>;
using RealPolySystem = PolySystemT<double>;

/// The coefficient equations of restrict_to_line with symbolic chart
/// parameters: 2n equations (one per binary-form coefficient) in the 2n
/// interleaved chart unknowns.
template <class Scalar>
PolySystemT<Scalar> line_system(const HomogeneousPolynomial<Scalar>& f,
                                std::pair<int, int> pivots) {
  const int m = f.num_vars();
  const int d = f.degree();
  const int nu = 2 * (m - 2);
  using AP = AffinePolynomial<Scalar>;

  std::vector<int> non_pivots;
  for (int c = 0; c < m; ++c)
    if (c != pivots.first && c != pivots.second) non_pivots.push_back(c);

  // P_i, Q_i as affine polynomials in the chart parameters.
  std::vector<AP> P(m, AP::constant(nu, Scalar(0)));
  std::vector<AP> Q(m, AP::constant(nu, Scalar(0)));
  P[pivots.first] = AP::constant(nu, Scalar(1));
  Q[pivots.second] = AP::constant(nu, Scalar(1));
  for (size_t k = 0; k < non_pivots.size(); ++k) {
    P[non_pivots[k]] = AP::variable(nu, 2 * static_cast<int>(k));
    Q[non_pivots[k]] = AP::variable(nu, 2 * static_cast<int>(k) + 1);
  }

  std::vector<AP> eqs(d + 1, AP(nu));
  for (const auto& [e, c] : f.terms()) {
    std::vector<AP> cur{AP::constant(nu, c)};
    for (int i = 0; i < m; ++i) {
      for (int k = 0; k < e[i]; ++k) {
        std::vector<AP> next(cur.size() + 1, AP(nu));
        for (size_t r = 0; r < cur.size(); ++r) {
          next[r] = next[r] + cur[r] * P[i];
          next[r + 1] = next[r + 1] + cur[r] * Q[i];
        }
        cur = std::move(next);
      }
    }
    for (int k = 0; k <= d; ++k) eqs[k] = eqs[k] + cur[k];
  }
  return PolySystemT<Scalar>(std::move(eqs));
}

struct TrackSettings {
  double step_init = 0.05;
  // Path speed grows like cond(J)/(1-t) on the final approach, so the step
  // a convergent path needs can drop to ~1e-10; a larger floor makes nearly
  // every path of a badly conditioned system stall just short of t=1.
  double step_min = 1e-12;
  double step_max = 0.1;
  // Corrector success is a relative Newton-step test. The step cannot fall
  // below cond(J)*eps*|x|, and Jacobians of high-degree systems reach
  // condition numbers of 1e8-1e9 near t=1, so the tolerance must sit above
  // that floor; the target-system polish supplies the final accuracy.
  double corrector_tol = 1e-7;
  int max_corrector_iters = 4;
  double divergence_norm = 1e8;
  // Largest endpoint norm accepted as a finite solution. Beyond it the
  // normalized residual cannot distinguish a zero from cancellation noise;
  // a genuine line with chart parameters this large means an unlucky chart,
  // which the enumeration layer handles by redrawing the chart.
  double finite_norm_bound = 1e4;
  double endgame_start = 0.9;
  double endgame_step_max = 0.01;
  double final_newton_tol = 1e-12;
  int max_steps = 20000;
  int threads = 0;  // 0 = hardware concurrency
};

enum class EndpointStatus { finite, diverged, failed };

struct Endpoint {
  EndpointStatus status = EndpointStatus::failed;
  Eigen::VectorXcd point;
  // |f(point)| in the infinity norm, normalized by max(1, |point|_inf)^d so
  // the finite/failed verdict is meaningful for solutions of any size.
  double residual = 0;
  double newton_contraction = 0;
  // True when the tracker stalled before t=1 and the endpoint was recovered
  // by Newton on the target system alone. Such points are valid solutions
  // but say nothing about multiplicity, so deduplication ignores them when
  // sizing clusters.
  bool salvaged = false;
  // Norm of one extra Newton step taken from the final point. Bounded by
  // cond(J)*eps*|x| inside the basin of a zero; O(1) for a point that only
  // evaluates small through cancellation.
  double cert_step = 0;
  // Continuation parameter reached by the tracker (1.0 unless it stalled).
  double t_final = 0;
  int path_id = -1;
};

/// Unit-circle gamma with |Im| >= 0.1, drawn from the seeded RNG.
cplx random_gamma(std::uint64_t seed);

/// Start system g_i = x_i^{d_i} - 1 and all product-of-roots-of-unity
/// start points.
std::pair<PolySystem, std::vector<Eigen::VectorXcd>> total_degree_start(
    const std::vector<int>& degrees);

Endpoint track_path(const Eigen::VectorXcd& start, const PolySystem& g,
                    const PolySystem& f, cplx gamma,
                    const TrackSettings& settings, int path_id = 0);

/// Tracks every total-degree path, polishes finite endpoints with Newton,
/// and returns all endpoints in a canonical deterministic order.
std::vector<Endpoint> solve_all(const PolySystem& sys,
                                const TrackSettings& settings,
                                std::uint64_t seed);

struct DedupResult {
  std::vector<Endpoint> endpoints;
  int suspicious_clusters = 0;  // clusters larger than the degree bound
};

/// Clusters finite endpoints by the Plucker coordinates of the lines their
/// chart parameters describe; keeps the lowest-residual representative.
DedupResult deduplicate(const std::vector<Endpoint>& points, double radius,
                        int ambient_dim, std::pair<int, int> pivots,
                        int max_multiplicity);

}  // namespace reallines
