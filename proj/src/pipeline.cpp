#include "reallines/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "reallines/schubert.hpp"

namespace reallines {

namespace {

HomogeneousPolynomial<cplx> complexify(const HomogeneousPolynomial<double>& f) {
  HomogeneousPolynomial<cplx> out(f.num_vars(), f.degree());
  for (const auto& [e, c] : f.terms()) out.add_term(e, cplx(c, 0.0));
  return out;
}

double imag_norm(const Eigen::VectorXcd& v) {
  double s = 0;
  for (int i = 0; i < v.size(); ++i) s += v[i].imag() * v[i].imag();
  return std::sqrt(s);
}

std::vector<cplx> to_vec(const Eigen::VectorXcd& v) {
  return std::vector<cplx>(v.data(), v.data() + v.size());
}

std::vector<cplx> apply_change(const Eigen::MatrixXd& M,
                               const std::vector<cplx>& v) {
  std::vector<cplx> out(v.size(), cplx(0));
  for (size_t i = 0; i < v.size(); ++i)
    for (size_t j = 0; j < v.size(); ++j) out[i] += M(i, j) * v[j];
  return out;
}

// Endpoints of one solution can spread to ~1e-5 in normalized Plucker
// distance when its Jacobian is badly conditioned, while distinct lines of
// a generic surface sit at distances of 1e-2 and more, so the merge radius
// has plenty of room on both sides.
constexpr double kDedupRadius = 1e-4;
constexpr double kRealPolishTol = 1e-12;

}  // namespace

int pipeline_dimension(const HomogeneousPolynomial<double>& f) {
  const int n = f.num_vars() - 2;
  if (n < 2)
    throw std::invalid_argument("need at least 4 homogeneous coordinates");
  if (f.degree() != 2 * n - 1)
    throw std::invalid_argument("degree must be 2n-1 for P^{n+1}");
  return n;
}

Eigen::MatrixXd random_projective_change(int size, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0xc2b2ae3d27d4eb4fULL);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  for (;;) {
    Eigen::MatrixXd M(size, size);
    for (int i = 0; i < size; ++i)
      for (int j = 0; j < size; ++j) M(i, j) = coeff(rng);
    double det = M.determinant();
    if (std::abs(det) < 1e-2) continue;
    if (det < 0) M.row(0) *= -1.0;
    return M;
  }
}

ComplexLinesResult find_complex_lines(const HomogeneousPolynomial<double>& f,
                                      std::uint64_t seed,
                                      const TrackSettings& settings) {
  const int n = pipeline_dimension(f);
  const int m = n + 2;
  const int d = 2 * n - 1;
  const long expected =
      static_cast<long>(schubert::n_complex(n).convert_to<long long>());

  // The solving chart can be unlucky: a line almost parallel to the chart
  // boundary has huge parameters and a vanishing Newton basin. Retrying
  // with a fresh (still seed-determined) coordinate change fixes that
  // without giving up determinism; a genuinely non-generic surface fails
  // every attempt.
  const int kMaxAttempts = 5;
  ComplexLinesResult out{.n = n, .transformed = f, .change = {},
                         .pivots = {m - 2, m - 1}};
  long last_count = -1;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    std::uint64_t attempt_seed = seed + 0x6a09e667f3bcc909ULL * attempt;
    out = ComplexLinesResult{.n = n,
                             .transformed = f,
                             .change = random_projective_change(m, attempt_seed),
                             .pivots = {m - 2, m - 1}};
    out.transformed = apply_projective_change(f, Eigen::MatrixXd(out.change));
    auto sys = line_system(complexify(out.transformed), out.pivots);

    // The line system has real coefficients (the surface and the projective
    // change are real), so its solution set is closed under conjugation:
    // whenever a path loses one endpoint of a conjugate pair, the pair can
    // be completed for free. Augmented copies are marked salvaged so they
    // never inflate multiplicity counts in deduplicate.
    auto augment_conjugates = [](std::vector<Endpoint>& eps) {
      const std::size_t n_orig = eps.size();
      for (std::size_t i = 0; i < n_orig; ++i) {
        if (eps[i].status != EndpointStatus::finite) continue;
        Endpoint c = eps[i];
        c.point = eps[i].point.conjugate();
        c.salvaged = true;
        eps.push_back(std::move(c));
      }
    };

    auto endpoints = solve_all(sys, settings, seed);
    augment_conjugates(endpoints);
    auto dedup = deduplicate(endpoints, kDedupRadius, m, out.pivots, d);
    if (static_cast<long>(dedup.endpoints.size()) < expected) {
      // A handful of paths can be lost to ill-conditioned endpoints even
      // when the surface is generic. Paths depend on gamma, so a second
      // run with an independent gamma misses an (almost surely) disjoint
      // set; the union of both runs is deduplicated as one batch.
      auto more = solve_all(sys, settings, seed + 0x517cc1b727220a95ULL);
      augment_conjugates(more);
      endpoints.insert(endpoints.end(), more.begin(), more.end());
      dedup = deduplicate(endpoints, kDedupRadius, m, out.pivots, d);
    }
    out.failures = 0;
    for (const auto& ep : endpoints)
      if (ep.status == EndpointStatus::failed) out.failures += 1;
    last_count = static_cast<long>(dedup.endpoints.size());
    if (dedup.suspicious_clusters == 0 && last_count == expected) {
      out.endpoints = std::move(dedup.endpoints);
      break;
    }
    if (attempt + 1 == kMaxAttempts) {
      throw GenericityFailure(
          "found " + std::to_string(last_count) + " distinct lines, expected " +
          std::to_string(expected) +
          " (surface non-generic or tracking failed)");
    }
  }

  for (const auto& ep : out.endpoints) {
    ChartedLine<cplx> line(m, out.pivots, to_vec(ep.point));
    auto [P, Q] = line.spanning_points();
    out.plucker_original.push_back(
        plucker_from_span(apply_change(out.change, P),
                          apply_change(out.change, Q)));
  }
  return out;
}

std::vector<ChartedLine<double>> filter_real(const ComplexLinesResult& found,
                                             double tol_real) {
  if (tol_real <= 0) throw std::invalid_argument("tol_real must be positive");
  const int m = found.n + 2;

  std::vector<int> real_idx, complex_idx;
  for (size_t i = 0; i < found.endpoints.size(); ++i) {
    double im = imag_norm(found.endpoints[i].point);
    if (im < tol_real) {
      real_idx.push_back(static_cast<int>(i));
    } else if (im < 10 * tol_real) {
      throw AmbiguousReality("endpoint " + std::to_string(i) +
                             " has imaginary norm " + std::to_string(im) +
                             " in the ambiguous band");
    } else {
      complex_idx.push_back(static_cast<int>(i));
    }
  }

  // Non-real endpoints must pair up under conjugation.
  auto csys = line_system(complexify(found.transformed), found.pivots);
  for (int i : complex_idx) {
    ChartedLine<cplx> line(m, found.pivots, to_vec(found.endpoints[i].point));
    auto [P, Q] = line.spanning_points();
    for (auto& x : P) x = std::conj(x);
    for (auto& x : Q) x = std::conj(x);
    auto conj_pc = plucker_from_span(P, Q);
    bool paired = false;
    for (int j : complex_idx) {
      if (j == i) continue;
      ChartedLine<cplx> other(m, found.pivots,
                              to_vec(found.endpoints[j].point));
      if (plucker_distance(conj_pc, plucker(other)) < kDedupRadius) {
        paired = true;
        break;
      }
    }
    if (paired) continue;
    // An unpaired endpoint can still be a real line whose parameters carry
    // imaginary dust: near an ill-conditioned zero the polish cannot push
    // the point closer than about cond(J)*eps*|x|. Accept it as real only
    // if the dust is consistent with that floor; the real Newton polish
    // below then has to reconverge or the attempt fails anyway.
    const Eigen::VectorXcd& pt = found.endpoints[i].point;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(csys.jacobian(pt));
    double cond = svd.singularValues()(0) /
                  svd.singularValues()(svd.singularValues().size() - 1);
    double floor = cond * 2.2e-16 * std::max(1.0, pt.norm());
    if (imag_norm(pt) <= 1e4 * floor) {
      real_idx.push_back(i);
      continue;
    }
    throw GenericityFailure("non-real endpoint without conjugate partner");
  }

  // Real Newton polish kills residual imaginary dust before any Jacobian
  // sign is read.
  auto rsys = line_system(found.transformed, found.pivots);
  int dmax = 1;
  for (int deg : rsys.degrees()) dmax = std::max(dmax, deg);
  // Residuals are judged relative to the evaluation scale |x|^dmax: for a
  // line with chart parameters of size ~1e2 a degree-5 equation cannot
  // evaluate below ~eps*|x|^5 no matter how exact the zero is.
  auto rel_res = [&](const Eigen::VectorXd& p) {
    return rsys.eval(p).lpNorm<Eigen::Infinity>() /
           std::pow(std::max(1.0, p.lpNorm<Eigen::Infinity>()), dmax);
  };
  std::vector<ChartedLine<double>> lines;
  for (int i : real_idx) {
    Eigen::VectorXd x = found.endpoints[i].point.real();
    Eigen::VectorXd F;
    Eigen::MatrixXd J;
    Eigen::VectorXd x_best = x;
    double best = rel_res(x);
    for (int it = 0; it < 50; ++it) {
      rsys.eval_and_jacobian(x, F, J);
      double res = rel_res(x);
      if (res < best) {
        best = res;
        x_best = x;
      }
      if (res < kRealPolishTol) break;
      Eigen::VectorXd dx = Eigen::PartialPivLU<Eigen::MatrixXd>(J).solve(-F);
      if (!dx.allFinite()) break;
      x += dx;
    }
    if (rel_res(x) < best) x_best = x;
    x = x_best;
    if (rel_res(x) >= 1e-8)
      throw NonSimpleZero("real polish failed to converge on endpoint " +
                          std::to_string(i));
    lines.emplace_back(m, found.pivots,
                       std::vector<double>(x.data(), x.data() + x.size()));
  }
  return lines;
}

std::pair<int, double> line_index(const HomogeneousPolynomial<double>& f,
                                  const ChartedLine<double>& line) {
  Eigen::MatrixXd J = section_jacobian(f, line);
  if (J.rows() != J.cols())
    throw std::invalid_argument("section Jacobian is not square");
  double det = J.determinant();
  double scale = 1.0;
  for (int r = 0; r < J.rows(); ++r) scale *= J.row(r).norm();
  // The determinant of a simple but ill-conditioned zero can sit at
  // 1/cond(J) ~ 1e-12 of the Hadamard bound, while the rounding noise in
  // det is only ~n*eps*scale, so the degeneracy cut goes between the two.
  if (std::abs(det) <= 1e-13 * scale)
    throw NonSimpleZero("Jacobian determinant below degeneracy threshold");
  return {det > 0 ? 1 : -1, det};
}

SegreData segre_normal_form(const HomogeneousPolynomial<double>& f,
                            const ChartedLine<double>& line) {
  if (f.num_vars() != 4 || f.degree() != 3)
    throw std::invalid_argument("Segre species defined for cubic surfaces");

  auto [P, Q] = line.spanning_points();
  Eigen::Vector4d Pv(P[0], P[1], P[2], P[3]), Qv(Q[0], Q[1], Q[2], Q[3]);
  Pv.normalize();
  Qv.normalize();

  // Orthonormal completion of the span: coordinates where the line is x=y=0.
  Eigen::Matrix<double, 4, 2> S;
  S.col(0) = Pv;
  S.col(1) = Qv;
  Eigen::HouseholderQR<Eigen::Matrix<double, 4, 2>> qr(S);
  Eigen::Matrix4d full = qr.householderQ();
  Eigen::Matrix4d A;
  A.col(0) = full.col(2);
  A.col(1) = full.col(3);
  A.col(2) = Pv;
  A.col(3) = Qv;

  auto h = f.substitute_linear(Eigen::MatrixXd(A));
  ChartedLine<double> axis(4, {2, 3}, std::vector<double>(4, 0.0));

  auto gx = restrict_to_line(h.partial(0), axis);  // l11 u^2 + 2 l12 uv + l22 v^2
  auto gy = restrict_to_line(h.partial(1), axis);
  const double l11 = gx[0], l12 = gx[1] / 2, l22 = gx[2];
  const double m11 = gy[0], m12 = gy[1] / 2, m22 = gy[2];

  SegreData data;
  data.a = l12 * l12 - l11 * l22;
  data.b = 2 * l12 * m12 - l11 * m22 - m11 * l22;
  data.c = m12 * m12 - m11 * m22;
  data.gram_disc = data.a * data.c - data.b * data.b / 4;

  double scale = data.a * data.a + data.b * data.b + data.c * data.c;
  if (scale == 0 || std::abs(data.gram_disc) < 1e-10 * scale)
    throw DegenerateSpecies("quadratic form L12^2 - L11 L22 is degenerate");
  return data;
}

SegreType segre_type(const SegreData& data) {
  if (data.gram_disc == 0)
    throw DegenerateSpecies("zero Gram discriminant");
  return data.gram_disc > 0 ? SegreType::elliptic : SegreType::hyperbolic;
}

namespace {

EnumerationReport run_pipeline_once(const HomogeneousPolynomial<double>& f,
                                    std::uint64_t seed,
                                    const TrackSettings& settings) {
  auto found = find_complex_lines(f, seed, settings);
  auto real_lines = filter_real(found);

  EnumerationReport report;
  report.n = found.n;
  report.degree = 2 * found.n - 1;
  report.seed = seed;
  report.failures = found.failures;
  report.n_complex_expected =
      static_cast<long>(schubert::n_complex(found.n).convert_to<long long>());
  report.n_complex_found = static_cast<long>(found.endpoints.size());

  for (const auto& line : real_lines) {
    RealLineRecord rec;
    rec.line = line;
    auto [P, Q] = line.spanning_points();
    std::vector<double> Po(P.size(), 0), Qo(Q.size(), 0);
    for (size_t i = 0; i < P.size(); ++i)
      for (size_t j = 0; j < P.size(); ++j) {
        Po[i] += found.change(i, j) * P[j];
        Qo[i] += found.change(i, j) * Q[j];
      }
    rec.plucker = plucker_from_span(Po, Qo);
    auto [idx, det] = line_index(found.transformed, line);
    rec.index = idx;
    rec.jac_det = det;
    rec.residual =
        restrict_to_line(found.transformed, line).max_coeff_magnitude();
    if (found.n == 2)
      rec.segre = segre_type(segre_normal_form(found.transformed, line));
    report.lines.push_back(std::move(rec));
  }

  std::sort(report.lines.begin(), report.lines.end(),
            [](const RealLineRecord& a, const RealLineRecord& b) {
              for (size_t k = 0; k < a.plucker.coords.size(); ++k) {
                long ar = std::lround(a.plucker.coords[k] * 1e8);
                long br = std::lround(b.plucker.coords[k] * 1e8);
                if (ar != br) return ar < br;
              }
              return false;
            });

  report.n_real = static_cast<int>(report.lines.size());
  for (const auto& rec : report.lines)
    (rec.index > 0 ? report.n_plus : report.n_minus) += 1;
  report.signed_sum = report.n_plus - report.n_minus;
  report.signed_sum_abs = std::labs(report.signed_sum);
  if (found.n == 2) {
    int h = 0, e = 0;
    for (const auto& rec : report.lines)
      (rec.segre == SegreType::hyperbolic ? h : e) += 1;
    report.h = h;
    report.e = e;
  }

  const long expected_signed =
      static_cast<long>(schubert::double_factorial(found.n)
                            .convert_to<long long>());
  if (report.signed_sum_abs != expected_signed ||
      report.n_real < expected_signed)
    throw GenericityFailure("signed count " +
                            std::to_string(report.signed_sum) +
                            " does not match the invariant " +
                            std::to_string(expected_signed));
  return report;
}

}  // namespace

EnumerationReport run_pipeline(const HomogeneousPolynomial<double>& f,
                               std::uint64_t seed,
                               const TrackSettings& settings) {
  // Index and species computations can fail for numerical reasons when the
  // chosen chart puts a line at extreme coordinates, even though the surface
  // itself is generic. A different seed draws a different coordinate change,
  // so retry before declaring the surface degenerate.
  const int kMaxAttempts = 3;
  for (int attempt = 0;; ++attempt) {
    std::uint64_t attempt_seed = seed + 0x9e3779b97f4a7c15ULL * attempt;
    try {
      EnumerationReport report = run_pipeline_once(f, attempt_seed, settings);
      report.seed = seed;
      return report;
    } catch (const NonSimpleZero&) {
      if (attempt + 1 == kMaxAttempts) throw;
    } catch (const AmbiguousReality&) {
      if (attempt + 1 == kMaxAttempts) throw;
    } catch (const DegenerateSpecies&) {
      if (attempt + 1 == kMaxAttempts) throw;
    }
  }
}

}  // namespace reallines
