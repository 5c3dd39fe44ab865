//
// sparse-ellipsoid
// SPDX-License-Identifier: Apache-2.0
//

#include "sparse_ellipsoid/diagonal_relaxation.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sparse_ellipsoid/diag_exact.h"

namespace sparse_ellipsoid {

namespace {

constexpr double kShrink = 1.0 - 1e-9;

struct StartPoints {
  Eigen::VectorXd by_eigenvalue;
  Eigen::VectorXd by_diagonal;
};

std::optional<Eigen::MatrixXd> cap_factor(const Instance& inst,
                                          const Eigen::VectorXd& d) {
  Eigen::MatrixXd m = inst.q().matrix();
  m.diagonal() -= d;
  return cholesky(SymMatrix(m));
}

// Shrinks d until Q - D factors. Floating rounding can defeat the nominal
// 1e-9 slack on badly scaled inputs.
Eigen::VectorXd make_feasible(const Instance& inst, Eigen::VectorXd d) {
  for (int i = 0; i < 200 && !cap_factor(inst, d); ++i) d *= 0.5;
  return d;
}

StartPoints start_points(const Instance& inst) {
  const int n = inst.n();
  StartPoints sp;
  const double lmin = min_eigenvalue(inst.q());
  sp.by_eigenvalue = make_feasible(inst, Eigen::VectorXd::Constant(n, kShrink * lmin));
  const Eigen::VectorXd diag = inst.q().matrix().diagonal();
  const Eigen::VectorXd inv_sqrt = diag.array().rsqrt();
  const SymMatrix scaled(inv_sqrt.asDiagonal() * inst.q().matrix() * inv_sqrt.asDiagonal());
  const double alpha = min_eigenvalue(scaled);
  sp.by_diagonal = make_feasible(inst, kShrink * alpha * diag);
  return sp;
}

double objective_of(const Eigen::VectorXd& d, const Eigen::VectorXd& c2, int k) {
  return sum_k_smallest(Eigen::VectorXd(d.array() * c2.array()), k);
}

DiagonalCertificate better_start(const StartPoints& sp, const Eigen::VectorXd& c2,
                                 int k) {
  const double f1 = objective_of(sp.by_eigenvalue, c2, k);
  const double f2 = objective_of(sp.by_diagonal, c2, k);
  DiagonalCertificate cert;
  cert.k = k;
  if (f2 > f1) {
    cert.d = sp.by_diagonal;
    cert.objective = f2;
  } else {
    cert.d = sp.by_eigenvalue;
    cert.objective = f1;
  }
  cert.psd_margin = std::numeric_limits<double>::quiet_NaN();
  return cert;
}

double psd_margin(const Instance& inst, const Eigen::VectorXd& d) {
  Eigen::MatrixXd m = inst.q().matrix();
  m.diagonal() -= d;
  return min_eigenvalue(SymMatrix(m));
}

// Interior point for the lifted problem
//   maximize k t - sum s  s.t.  s >= 0, s >= t - c2 d, d > 0, D < Q,
// whose optimal value in (s, t) equals S_k(c2 d). Barrier terms:
//   log s_n, log r_n with r = s - t + c2 d, log d_n, log det(Q - D).
class BarrierSolver {
 public:
  BarrierSolver(const Instance& inst, const Eigen::VectorXd& c2, int k)
      : q_(inst.q().matrix()), c2_(c2), n_(inst.n()), k_(k) {}

  struct Point {
    Eigen::VectorXd d, s;
    double t = 0.0;
  };

  // Barrier-scaled objective psi = (k t - sum s) / mu + barrier. Returns
  // -inf outside the domain and fills the Cholesky factor of Q - D.
  double psi(const Point& x, double mu, Eigen::MatrixXd* factor) const {
    if ((x.d.array() <= 0.0).any() || (x.s.array() <= 0.0).any()) return -kInf;
    const Eigen::ArrayXd r = x.s.array() - x.t + c2_.array() * x.d.array();
    if ((r <= 0.0).any()) return -kInf;
    Eigen::MatrixXd m = q_;
    m.diagonal() -= x.d;
    auto l = cholesky(SymMatrix(m));
    if (!l) return -kInf;
    const double logdet = 2.0 * l->diagonal().array().log().sum();
    if (factor) *factor = std::move(*l);
    return (k_ * x.t - x.s.sum()) / mu + x.s.array().log().sum() + r.log().sum() +
           x.d.array().log().sum() + logdet;
  }

  // Newton direction for maximizing psi; returns the squared decrement.
  double newton(const Point& x, double mu, const Eigen::MatrixXd& factor,
                Point* dir, double* slope) const {
    const int n = n_;
    const int dim = 2 * n + 1;
    Eigen::MatrixXd w = Eigen::MatrixXd::Identity(n, n);
    factor.triangularView<Eigen::Lower>().solveInPlace(w);
    factor.triangularView<Eigen::Lower>().transpose().solveInPlace(w);

    const Eigen::ArrayXd r = x.s.array() - x.t + c2_.array() * x.d.array();
    const Eigen::ArrayXd ir = r.inverse();
    const Eigen::ArrayXd ir2 = ir.square();

    Eigen::VectorXd g(dim);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    // Layout: [d (n), s (n), t].
    g.head(n) = (c2_.array() * ir + x.d.array().inverse() - w.diagonal().array()).matrix();
    g.segment(n, n) = (-1.0 / mu + x.s.array().inverse() + ir).matrix();
    g[2 * n] = k_ / mu - ir.sum();

    h.topLeftCorner(n, n) = w.array().square().matrix();
    for (int i = 0; i < n; ++i) {
      h(i, i) += c2_[i] * c2_[i] * ir2[i] + 1.0 / (x.d[i] * x.d[i]);
      h(i, n + i) = h(n + i, i) = c2_[i] * ir2[i];
      h(i, 2 * n) = h(2 * n, i) = -c2_[i] * ir2[i];
      h(n + i, n + i) = 1.0 / (x.s[i] * x.s[i]) + ir2[i];
      h(n + i, 2 * n) = h(2 * n, n + i) = -ir2[i];
    }
    h(2 * n, 2 * n) = ir2.sum();

    Eigen::LDLT<Eigen::MatrixXd> ldlt(h);
    const Eigen::VectorXd step = ldlt.solve(g);
    dir->d = step.head(n);
    dir->s = step.segment(n, n);
    dir->t = step[2 * n];
    *slope = g.dot(step);
    return *slope;
  }

  double lifted_value(const Point& x) const { return k_ * x.t - x.s.sum(); }

 private:
  static constexpr double kInf = std::numeric_limits<double>::infinity();
  const Eigen::MatrixXd& q_;
  const Eigen::VectorXd& c2_;
  int n_;
  int k_;
};

DiagonalCertificate solve_from(const Instance& inst, const StartPoints& sp, int k,
                               const DiagSolveOptions& opt) {
  const int n = inst.n();
  const Eigen::VectorXd c2 = inst.c().array().square();
  DiagonalCertificate best = better_start(sp, c2, k);
  if (opt.warm_start) {
    const double fw = objective_of(*opt.warm_start, c2, k);
    if (fw > best.objective) {
      best.d = *opt.warm_start;
      best.objective = fw;
    }
  }
  const double gamma = inst.gamma();
  auto decided_above = [&]() {
    return opt.decide_against && best.objective > *opt.decide_against;
  };
  if (decided_above() || (c2.array() == 0.0).all()) return best;

  BarrierSolver solver(inst, c2, k);
  BarrierSolver::Point x;
  x.d = 0.5 * best.d;
  {
    const Eigen::VectorXd w = x.d.array() * c2.array();
    Eigen::VectorXd sorted = w;
    std::sort(sorted.data(), sorted.data() + n);
    x.t = sorted[k - 1];
    const double pad = 1e-2 * std::max(w.mean(), 1e-300);
    x.s = ((x.t - w.array()).max(0.0) + pad).matrix();
  }

  const double barrier_weight = 4.0 * n;
  double mu = 1e-2 * gamma;
  const double mu_floor = 1e-10 * gamma;
  constexpr int kMaxInner = 500;
  Eigen::MatrixXd factor;
  while (true) {
    double value = solver.psi(x, mu, &factor);
    for (int it = 0; it < kMaxInner; ++it) {
      BarrierSolver::Point dir;
      double slope = 0.0;
      const double dec = solver.newton(x, mu, factor, &dir, &slope);
      if (!(dec > 1e-10)) break;
      double alpha = 1.0;
      bool moved = false;
      BarrierSolver::Point trial;
      Eigen::MatrixXd trial_factor;
      for (int bt = 0; bt < 60; ++bt) {
        trial.d = x.d + alpha * dir.d;
        trial.s = x.s + alpha * dir.s;
        trial.t = x.t + alpha * dir.t;
        const double v = solver.psi(trial, mu, &trial_factor);
        if (v >= value + 0.25 * alpha * slope) {
          value = v;
          moved = true;
          break;
        }
        alpha *= 0.5;
      }
      if (!moved) break;
      x = std::move(trial);
      factor = std::move(trial_factor);
      const double f = objective_of(x.d, c2, k);
      if (f > best.objective) {
        best.d = x.d;
        best.objective = f;
        if (decided_above()) return best;
      }
      if (dec < 1e-9) break;
    }
    const double upper = solver.lifted_value(x) + barrier_weight * mu;
    if (opt.decide_against &&
        solver.lifted_value(x) + 2.0 * barrier_weight * mu < *opt.decide_against) {
      break;
    }
    if (upper - best.objective <= opt.tol * std::max(std::abs(best.objective), 1e-300)) break;
    if (mu <= mu_floor) break;
    mu *= 0.1;
  }
  return best;
}

}  // namespace

bool certificate_is_feasible(const Instance& inst, const Eigen::VectorXd& d) {
  if (d.size() != inst.n() || !(d.array() > 0.0).all()) return false;
  return cap_factor(inst, d).has_value();
}

DiagonalCertificate e_d_lower_start(const Instance& inst, int k) {
  if (k < 1 || k > inst.n()) throw std::out_of_range("e_d_lower_start: k out of range");
  const Eigen::VectorXd c2 = inst.c().array().square();
  DiagonalCertificate cert = better_start(start_points(inst), c2, k);
  cert.psd_margin = psd_margin(inst, cert.d);
  return cert;
}

DiagonalCertificate solve_e_d(const Instance& inst, int k, double tol) {
  DiagSolveOptions opt;
  opt.tol = tol;
  return solve_e_d(inst, k, opt);
}

DiagonalCertificate solve_e_d(const Instance& inst, int k,
                              const DiagSolveOptions& options) {
  if (k < 1 || k > inst.n()) throw std::out_of_range("solve_e_d: k out of range");
  DiagonalCertificate cert = solve_from(inst, start_points(inst), k, options);
  cert.psd_margin = options.compute_psd_margin
                        ? psd_margin(inst, cert.d)
                        : std::numeric_limits<double>::quiet_NaN();
  return cert;
}

DiagRelaxResult solve_relaxation(const Instance& inst, double tol) {
  DiagRelaxOptions opt;
  opt.tol = tol;
  return solve_relaxation(inst, opt);
}

DiagRelaxResult solve_relaxation(const Instance& inst,
                                 const DiagRelaxOptions& options) {
  const int n = inst.n();
  const double gamma = inst.gamma();
  const StartPoints sp = start_points(inst);
  DiagRelaxResult result;

  Eigen::VectorXd warm;
  auto evaluate = [&](int k) {
    DiagSolveOptions opt;
    opt.tol = options.tol;
    if (options.early_decision) opt.decide_against = gamma;
    if (warm.size() == n) opt.warm_start = &warm;
    DiagonalCertificate cert = solve_from(inst, sp, k, opt);
    result.e_d_trace.emplace_back(k, cert.objective);
    warm = cert.d;
    return cert;
  };

  DiagonalCertificate failing = evaluate(n);
  if (failing.objective > gamma) {
    int lo = 0;
    int hi = n;
    while (hi - lo > 1) {
      const int mid = lo + (hi - lo) / 2;
      DiagonalCertificate cert = evaluate(mid);
      if (cert.objective > gamma) {
        hi = mid;
        failing = std::move(cert);
      } else {
        lo = mid;
      }
    }
  }
  result.certificate = std::move(failing);
  result.certificate.psd_margin = psd_margin(inst, result.certificate.d);
  const DiagSolution exact =
      solve_diagonal({result.certificate.d, inst.c(), gamma});
  result.lower_bound = exact.min_cardinality;
  result.k_d = n - result.lower_bound;
  return result;
}

}  // namespace sparse_ellipsoid
