#include "reallines/homotopy.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

namespace reallines {

namespace {

using cplxl = std::complex<long double>;

template <class CT>
using VecX = Eigen::Matrix<CT, Eigen::Dynamic, 1>;
template <class CT>
using MatX = Eigen::Matrix<CT, Eigen::Dynamic, Eigen::Dynamic>;

template <class CT>
double inf_norm(const VecX<CT>& v) {
  double m = 0;
  for (int i = 0; i < v.size(); ++i)
    m = std::max(m, static_cast<double>(std::abs(v[i])));
  return m;
}

// Newton iteration on H(., t). Convergence is judged on the Newton step
// relative to |x|, which stays meaningful when paths wander to large norms
// where absolute residuals scale like |x|^d.
template <class CT>
bool correct(const PolySystemT<CT>& g, const PolySystemT<CT>& f, CT gamma,
             typename CT::value_type t, VecX<CT>& x, double tol,
             int max_iters) {
  VecX<CT> Fg, Ff;
  MatX<CT> Jg, Jf;
  const CT one(1);
  for (int it = 0; it < max_iters; ++it) {
    g.eval_and_jacobian(x, Fg, Jg);
    f.eval_and_jacobian(x, Ff, Jf);
    VecX<CT> H = (one - CT(t)) * gamma * Fg + CT(t) * Ff;
    MatX<CT> JH = (one - CT(t)) * gamma * Jg + CT(t) * Jf;
    Eigen::PartialPivLU<MatX<CT>> lu(JH);
    VecX<CT> dx = lu.solve(-H);
    if (!dx.allFinite()) return false;
    x += dx;
    if (static_cast<double>(dx.norm()) <
        tol * std::max(1.0, static_cast<double>(x.norm())))
      return true;
  }
  return false;
}

PolySystemT<cplxl> widen(const PolySystemT<cplx>& s) {
  std::vector<AffinePolynomial<cplxl>> eqs;
  for (const auto& e : s.equations()) {
    AffinePolynomial<cplxl> el(e.num_vars());
    for (const auto& [ex, c] : e.terms())
      el.add_term(ex, cplxl(c.real(), c.imag()));
    eqs.push_back(std::move(el));
  }
  return PolySystemT<cplxl>(std::move(eqs));
}

// Geometric endgame for stalled paths. A stall at 1-t ~ 1e-6 leaves x a
// distance of roughly cond(J)*(1-t) from the t=1 limit, which for badly
// conditioned endpoints is far outside the Newton basin of the target
// system. Halving 1-t with a few unconditional corrections per level walks
// x into that basin; paths that head to infinity just grow until the
// divergence check or the final polish rejects them. Returns false when x
// blows up along the way.
template <class CT>
bool ramp_endgame(const PolySystemT<CT>& g, const PolySystemT<CT>& f,
                  CT gamma, double t_stall, VecX<CT>& x,
                  const TrackSettings& s, double rem_floor) {
  using RT = typename CT::value_type;
  RT rem = RT(1) - RT(t_stall);
  for (int level = 0; level < 100 && static_cast<double>(rem) > rem_floor;
       ++level) {
    rem *= RT(0.5);
    correct(g, f, gamma, RT(1) - rem, x, s.corrector_tol, 3);
    if (!x.allFinite() ||
        static_cast<double>(x.norm()) > s.divergence_norm)
      return false;
  }
  return true;
}

template <class CT>
struct FinishResult {
  VecX<CT> x;
  double residual = std::numeric_limits<double>::infinity();
  double cert = std::numeric_limits<double>::infinity();
  double contraction = 0;
  bool diverged = false;
};

// Newton polish on the target system. The Jacobian at a simple zero can be
// badly conditioned, which puts a floor of cond(J)*eps*|x| on the Newton
// step and makes |F| non-monotone just before convergence, so the verdict
// rests on the best scale-normalized residual seen, not on step size or
// monotone descent. The cert field holds the norm of one extra Newton step
// from the accepted point: bounded by the same floor inside the basin of a
// zero, O(1) for a point that only evaluates small through cancellation.
template <class CT>
FinishResult<CT> polish(const PolySystemT<CT>& f, VecX<CT> x,
                        const TrackSettings& s) {
  int dmax = 1;
  for (int d : f.degrees()) dmax = std::max(dmax, d);
  auto norm_res = [&](const VecX<CT>& p) {
    double ps = 0;
    for (int i = 0; i < p.size(); ++i)
      ps = std::max(ps, static_cast<double>(std::abs(p[i])));
    return inf_norm<CT>(f.eval(p)) / std::pow(std::max(1.0, ps), dmax);
  };

  FinishResult<CT> out;
  VecX<CT> F;
  MatX<CT> J;
  double prev_step = -1;
  VecX<CT> x_best = x;
  double best_res = norm_res(x);
  int since_best = 0;
  for (int it = 0; it < 100; ++it) {
    double res = norm_res(x);
    if (res < best_res) {
      best_res = res;
      x_best = x;
      since_best = 0;
    } else if (++since_best > 30) {
      break;
    }
    if (res < 1e-2 * s.final_newton_tol) break;
    f.eval_and_jacobian(x, F, J);
    Eigen::PartialPivLU<MatX<CT>> lu(J);
    VecX<CT> dx = lu.solve(-F);
    if (!dx.allFinite()) break;
    // Damped step: back off until the residual drops, so a start far from
    // the solution cannot cycle. If no damping helps, take the full Newton
    // step anyway: near an ill-conditioned zero the residual rises for one
    // step before collapsing, and the best-iterate bookkeeping above limits
    // the harm if the step really was bad.
    auto fnorm = F.norm();
    typename CT::value_type lambda(1);
    VecX<CT> x_new = x + dx;
    bool decreased = false;
    for (int bt = 0; bt < 8; ++bt) {
      if (f.eval(x_new).norm() < fnorm) {
        decreased = true;
        break;
      }
      lambda *= typename CT::value_type(0.5);
      x_new = x + lambda * dx;
    }
    if (!decreased) x_new = x + dx;
    double step = static_cast<double>((x_new - x).norm());
    if (prev_step > 0) out.contraction = step / prev_step;
    prev_step = step;
    x = x_new;
    if (static_cast<double>(x.norm()) > s.divergence_norm) {
      out.x = x;
      out.diverged = true;
      return out;
    }
  }
  if (norm_res(x) < best_res) {
    best_res = norm_res(x);
    x_best = x;
  }
  out.x = x_best;
  out.residual = best_res;
  f.eval_and_jacobian(x_best, F, J);
  VecX<CT> dx = Eigen::PartialPivLU<MatX<CT>>(J).solve(-F);
  if (dx.allFinite()) out.cert = static_cast<double>(dx.norm());
  return out;
}

Eigen::VectorXcd davidenko_rhs(const PolySystem& g, const PolySystem& f,
                               cplx gamma, double t,
                               const Eigen::VectorXcd& x, bool& ok) {
  Eigen::VectorXcd Fg, Ff;
  Eigen::MatrixXcd Jg, Jf;
  g.eval_and_jacobian(x, Fg, Jg);
  f.eval_and_jacobian(x, Ff, Jf);
  Eigen::MatrixXcd JH = (1.0 - t) * gamma * Jg + t * Jf;
  Eigen::VectorXcd Ht = Ff - gamma * Fg;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(JH);
  Eigen::VectorXcd dx = lu.solve(-Ht);
  ok = dx.allFinite();
  return dx;
}

}  // namespace

cplx random_gamma(std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  for (;;) {
    double a = angle(rng);
    cplx gamma(std::cos(a), std::sin(a));
    if (std::abs(gamma.imag()) >= 0.1) return gamma;
  }
}

std::pair<PolySystem, std::vector<Eigen::VectorXcd>> total_degree_start(
    const std::vector<int>& degrees) {
  const int n = static_cast<int>(degrees.size());
  std::vector<AffinePolynomial<cplx>> eqs;
  for (int i = 0; i < n; ++i) {
    if (degrees[i] < 1) throw std::invalid_argument("degree must be >= 1");
    AffinePolynomial<cplx> e(n);
    Exponents mono(n, 0);
    mono[i] = degrees[i];
    e.add_term(mono, cplx(1));
    e.add_term(Exponents(n, 0), cplx(-1));
    eqs.push_back(std::move(e));
  }

  long total = 1;
  for (int d : degrees) total *= d;
  std::vector<Eigen::VectorXcd> starts;
  starts.reserve(total);
  std::vector<int> idx(n, 0);
  for (long p = 0; p < total; ++p) {
    Eigen::VectorXcd x(n);
    for (int i = 0; i < n; ++i) {
      double a = 2.0 * M_PI * idx[i] / degrees[i];
      x[i] = cplx(std::cos(a), std::sin(a));
    }
    starts.push_back(std::move(x));
    for (int i = 0; i < n; ++i) {
      if (++idx[i] < degrees[i]) break;
      idx[i] = 0;
    }
  }
  return {PolySystem(std::move(eqs)), std::move(starts)};
}

Endpoint track_path(const Eigen::VectorXcd& start, const PolySystem& g,
                    const PolySystem& f, cplx gamma,
                    const TrackSettings& s, int path_id) {
  Endpoint ep;
  ep.path_id = path_id;
  ep.point = start;

  Eigen::VectorXcd x = start;
  double t = 0;
  double dt = s.step_init;
  int consecutive_ok = 0;
  int steps = 0;
  bool stalled = false;

  while (t < 1.0) {
    if (++steps > s.max_steps) {
      stalled = true;
      break;
    }
    double step_cap = (t >= s.endgame_start) ? s.endgame_step_max : s.step_max;
    double h = std::min({dt, step_cap, 1.0 - t});

    // RK4 predictor on the Davidenko ODE.
    bool ok = true;
    Eigen::VectorXcd k1 = davidenko_rhs(g, f, gamma, t, x, ok);
    Eigen::VectorXcd k2, k3, k4;
    if (ok) k2 = davidenko_rhs(g, f, gamma, t + h / 2, x + (h / 2) * k1, ok);
    if (ok) k3 = davidenko_rhs(g, f, gamma, t + h / 2, x + (h / 2) * k2, ok);
    if (ok) k4 = davidenko_rhs(g, f, gamma, t + h, x + h * k3, ok);

    Eigen::VectorXcd xp;
    bool accepted = false;
    if (ok) {
      xp = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      accepted = correct(g, f, gamma, t + h, xp, s.corrector_tol,
                         s.max_corrector_iters);
    }

    if (accepted) {
      x = xp;
      t += h;
      if (++consecutive_ok >= 4) {
        dt = std::min(dt * 1.5, s.step_max);
        consecutive_ok = 0;
      }
    } else {
      dt *= 0.5;
      consecutive_ok = 0;
      if (dt < s.step_min) {
        // Step underflow: either the path heads to infinity, or the
        // tracker lost it near a solution. Let the target-system polish
        // below decide which.
        stalled = true;
        break;
      }
    }

    if (x.norm() > s.divergence_norm) {
      ep.status = EndpointStatus::diverged;
      ep.point = x;
      return ep;
    }
  }

  ep.t_final = t;
  const Eigen::VectorXcd x_stall = x;
  const double t_stall = t;

  if (stalled && t < 1.0) {
    if (!ramp_endgame<cplx>(g, f, gamma, t, x, s, 1e-14)) {
      ep.status = EndpointStatus::diverged;
      ep.point = x;
      return ep;
    }
  }

  // Past finite_norm_bound the scale-normalized residual of any point is
  // cancellation noise, so a small residual certifies nothing; such a point
  // is a path escaping the chart, not a solution on it.
  auto accepts = [&](double res, double cert, double xn) {
    return res < s.final_newton_tol &&
           cert < 1e-4 * std::max(1.0, xn) && xn <= s.finite_norm_bound;
  };

  auto fin = polish<cplx>(f, x, s);
  ep.point = fin.x;
  ep.residual = fin.residual;
  ep.newton_contraction = fin.contraction;
  ep.cert_step = fin.cert;
  if (fin.diverged) {
    ep.status = EndpointStatus::diverged;
    return ep;
  }
  if (accepts(fin.residual, fin.cert, fin.x.norm())) {
    ep.status = EndpointStatus::finite;
    ep.salvaged = stalled;
    return ep;
  }

  // Long-double fallback. When cond(J) at the endpoint climbs past ~1e11
  // the double-precision floors above are indistinguishable from rejection
  // thresholds and genuinely simple zeros get dropped. Redoing the endgame
  // ramp and polish in 80-bit arithmetic lowers every floor by roughly a
  // factor of a thousand, which is enough to certify those endpoints. Only
  // marginal endpoints pay for this; clear divergence is filtered first.
  if (x_stall.norm() <= s.finite_norm_bound) {
    PolySystemT<cplxl> gl = widen(g);
    PolySystemT<cplxl> fl = widen(f);
    VecX<cplxl> xl(x_stall.size());
    for (int i = 0; i < x_stall.size(); ++i)
      xl[i] = cplxl(x_stall[i].real(), x_stall[i].imag());
    bool ok = true;
    if (stalled && t_stall < 1.0) {
      cplxl gl_gamma(gamma.real(), gamma.imag());
      ok = ramp_endgame<cplxl>(gl, fl, gl_gamma, t_stall, xl, s, 1e-18);
    }
    if (ok) {
      auto finl = polish<cplxl>(fl, xl, s);
      double xn = static_cast<double>(finl.x.norm());
      if (!finl.diverged && accepts(finl.residual, finl.cert, xn)) {
        Eigen::VectorXcd xd(finl.x.size());
        for (int i = 0; i < finl.x.size(); ++i)
          xd[i] = cplx(static_cast<double>(finl.x[i].real()),
                       static_cast<double>(finl.x[i].imag()));
        ep.point = xd;
        ep.residual = finl.residual;
        ep.newton_contraction = finl.contraction;
        ep.cert_step = finl.cert;
        ep.status = EndpointStatus::finite;
        ep.salvaged = stalled;
        return ep;
      }
    }
  }

  if (ep.point.norm() > s.finite_norm_bound ||
      (stalled && x_stall.norm() > 1e3)) {
    ep.status = EndpointStatus::diverged;
  } else {
    ep.status = EndpointStatus::failed;
  }
  return ep;
}

namespace {

// Canonical ordering: finite endpoints first, then by rounded coordinates.
bool endpoint_less(const Endpoint& a, const Endpoint& b) {
  if (a.status != b.status) return a.status < b.status;
  const long scale = 100000000L;
  for (int i = 0; i < a.point.size(); ++i) {
    long ar = std::lround(a.point[i].real() * scale);
    long br = std::lround(b.point[i].real() * scale);
    if (ar != br) return ar < br;
    long ai = std::lround(a.point[i].imag() * scale);
    long bi = std::lround(b.point[i].imag() * scale);
    if (ai != bi) return ai < bi;
  }
  return a.path_id < b.path_id;
}

}  // namespace

std::vector<Endpoint> solve_all(const PolySystem& sys,
                                const TrackSettings& settings,
                                std::uint64_t seed) {
  cplx gamma = random_gamma(seed);
  auto [g, starts] = total_degree_start(sys.degrees());

  std::vector<Endpoint> results(starts.size());
  unsigned nthreads = settings.threads > 0
                          ? static_cast<unsigned>(settings.threads)
                          : std::max(1u, std::thread::hardware_concurrency());
  nthreads = std::min<unsigned>(nthreads, starts.size());

  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= starts.size()) return;
      results[i] = track_path(starts[i], g, sys, gamma, settings,
                              static_cast<int>(i));
    }
  };
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  // Retrack failures with a more conservative tracker before giving up.
  TrackSettings tight = settings;
  tight.step_init = settings.step_init / 10;
  tight.step_max = settings.step_max / 10;
  tight.endgame_step_max = settings.endgame_step_max / 10;
  tight.step_min = settings.step_min / 100;
  tight.max_corrector_iters = settings.max_corrector_iters + 2;
  tight.max_steps = settings.max_steps * 4;
  for (auto& ep : results) {
    if (ep.status != EndpointStatus::failed) continue;
    Endpoint retry = track_path(starts[ep.path_id], g, sys, gamma, tight,
                                ep.path_id);
    if (retry.status != EndpointStatus::failed) ep = retry;
  }

  std::sort(results.begin(), results.end(), endpoint_less);
  return results;
}

DedupResult deduplicate(const std::vector<Endpoint>& points, double radius,
                        int ambient_dim, std::pair<int, int> pivots,
                        int max_multiplicity) {
  if (radius <= 0) throw std::invalid_argument("radius must be positive");
  DedupResult out;
  std::vector<PluckerCoords<cplx>> reps;
  std::vector<int> cluster_sizes;
  for (const auto& ep : points) {
    if (ep.status != EndpointStatus::finite) continue;
    std::vector<cplx> params(ep.point.data(), ep.point.data() + ep.point.size());
    ChartedLine<cplx> line(ambient_dim, pivots, std::move(params));
    auto pc = plucker(line);
    bool merged = false;
    for (size_t k = 0; k < reps.size(); ++k) {
      if (plucker_distance(pc, reps[k]) < radius) {
        if (!ep.salvaged) cluster_sizes[k] += 1;
        if (ep.residual < out.endpoints[k].residual) out.endpoints[k] = ep;
        merged = true;
        break;
      }
    }
    if (!merged) {
      reps.push_back(std::move(pc));
      cluster_sizes.push_back(ep.salvaged ? 0 : 1);
      out.endpoints.push_back(ep);
    }
  }
  for (int sz : cluster_sizes)
    if (sz > max_multiplicity) out.suspicious_clusters += 1;
  return out;
}

}  // namespace reallines
