//
// sparse-ellipsoid
// SPDX-License-Identifier: Apache-2.0
//

#include "sparse_ellipsoid/bounds.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sparse_ellipsoid/diag_exact.h"

namespace sparse_ellipsoid {

const char* variant_name(BoundVariant v) {
  switch (v) {
    case BoundVariant::kEig: return "eig";
    case BoundVariant::kEigScaled: return "eig_scaled";
    case BoundVariant::kDiagDom: return "diag_dom";
    case BoundVariant::kNearAligned: return "near_aligned";
  }
  return "?";
}

const char* regime_name(ProbRegime r) {
  switch (r) {
    case ProbRegime::kQuadratic: return "quadratic";
    case ProbRegime::kLinear: return "linear";
    case ProbRegime::kCertain: return "certain";
  }
  return "?";
}

namespace {

bool within(double lhs, double gamma) { return lhs <= gamma * (1.0 + kPredicateSlack); }

// Prefix sums of values taken in ascending order (ties to lower index).
std::vector<double> sorted_prefix(const Eigen::VectorXd& values, std::vector<int>* order) {
  *order = ascending_order(values);
  std::vector<double> prefix(values.size() + 1, 0.0);
  for (size_t k = 0; k < order->size(); ++k) prefix[k + 1] = prefix[k] + values[(*order)[k]];
  return prefix;
}

// Largest k in [0, n] with factor * prefix[k] <= gamma.
int largest_k(const std::vector<double>& prefix, double factor, double gamma) {
  int best = 0;
  for (int k = 1; k < static_cast<int>(prefix.size()); ++k) {
    if (within(factor * prefix[k], gamma)) best = k;
  }
  return best;
}

std::optional<double> ratio_from(int k_under, int n, double scaled_next) {
  if (k_under == 0) return std::nullopt;
  if (k_under >= n) return 1.0;
  return (std::ceil(scaled_next) - 1.0) / k_under;
}

IndexSet first_k(const std::vector<int>& order, int k) {
  IndexSet z(order.begin(), order.begin() + k);
  std::sort(z.begin(), z.end());
  return z;
}

double schur_lambda_max(const SymMatrix& q, const std::vector<int>& order, int k) {
  const IndexSet z = first_k(order, k);
  const IndexSet y = complement(z, q.n());
  return max_eigenvalue(schur_complement(q, y));
}

}  // namespace

OrderingBounds eig_bounds(const Instance& inst_in, const std::optional<Eigen::VectorXd>& scale) {
  SymMatrix q = inst_in.q();
  Eigen::VectorXd c = inst_in.c();
  if (scale) {
    if (scale->size() != inst_in.n() || (scale->array() == 0.0).any()) {
      throw std::invalid_argument("eig_bounds: scale must be nonzero with length N");
    }
    const Eigen::VectorXd inv = scale->cwiseInverse();
    q = SymMatrix(inv.asDiagonal() * q.matrix() * inv.asDiagonal());
    c = scale->cwiseProduct(c);
  }
  const int n = q.n();
  const double gamma = inst_in.gamma();
  const Eigen::VectorXd c2 = c.array().square();
  std::vector<int> order;
  const std::vector<double> prefix = sorted_prefix(c2, &order);
  const double lmin = min_eigenvalue(q);

  OrderingBounds b;
  b.variant = scale ? BoundVariant::kEigScaled : BoundVariant::kEig;
  // Full scan: the predicate is not known to be monotone in general.
  std::vector<double> lmax(n + 1, 0.0);
  for (int k = 1; k <= n; ++k) {
    lmax[k] = schur_lambda_max(q, order, k);
    if (within(lmax[k] * prefix[k], gamma)) b.k_under = k;
  }
  b.k_over = largest_k(prefix, lmin, gamma);
  b.lower_factor = lmin;
  if (b.k_under >= 1 && b.k_under < n) {
    b.ratio_bound = ratio_from(b.k_under, n, (b.k_under + 1) * lmax[b.k_under + 1] / lmin);
  } else {
    b.ratio_bound = ratio_from(b.k_under, n, 0.0);
  }
  return b;
}

ProbBoundReport prob_bound(const Instance& inst, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("prob_bound: epsilon must be positive");
  const EigenDecomp ed = eig_sym(inst.q());
  const int n = inst.n();
  const Eigen::VectorXd& lam = ed.eigenvalues;
  ProbBoundReport r;
  r.epsilon = epsilon;
  r.eig_mean = lam.mean();
  r.eig_var = (lam.array() - r.eig_mean).square().mean();
  const double lmax = lam[n - 1];
  const double lmin = lam[0];
  r.eps_max = lmax / r.eig_mean - 1.0;
  const double gap = lmax - r.eig_mean;
  if (gap * gap > 8.0 * r.eig_var) {
    const double root =
        std::sqrt(r.eps_max * r.eps_max - 8.0 * r.eig_var / (r.eig_mean * r.eig_mean));
    r.interval_i = std::make_pair((r.eps_max - root) / 4.0, (r.eps_max + root) / 4.0);
  }
  const double m = r.eig_mean;
  if (epsilon >= r.eps_max) {
    r.regime = ProbRegime::kCertain;
    r.probability = 1.0;
  } else if (r.interval_i && epsilon > r.interval_i->first && epsilon < r.interval_i->second) {
    r.regime = ProbRegime::kLinear;
    // Chernoff exponent at the boundary point t = 1 / (4 delta_max).
    const double delta_max = lmax - (1.0 + epsilon) * m;
    r.probability = 1.0 - std::exp(-(n / 8.0) * epsilon * m / delta_max);
  } else {
    r.regime = ProbRegime::kQuadratic;
    const double e2 = epsilon * epsilon * m * m;
    r.probability = 1.0 - std::exp(-(n / 8.0) * e2 / (e2 + r.eig_var));
  }
  r.probability = std::clamp(r.probability, 0.0, 1.0);
  if (r.regime != ProbRegime::kCertain && r.probability >= 1.0) {
    r.probability = std::nextafter(1.0, 0.0);
  }
  const OrderingBounds eb = eig_bounds(inst);
  r.k_under = eb.k_under;
  if (eb.k_under >= 1) {
    r.ratio_bound = (std::ceil((eb.k_under + 1) * (1.0 + epsilon) * m / lmin) - 1.0) / eb.k_under;
  }
  return r;
}

double offdiag_row_sum(const SymMatrix& q) {
  const int n = q.n();
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j != i) s += std::abs(q(i, j)) / std::sqrt(q(i, i) * q(j, j));
    }
    worst = std::max(worst, s);
  }
  return worst;
}

OrderingBounds diag_dom_bounds(const Instance& inst) {
  const SymMatrix& q = inst.q();
  const int n = q.n();
  const double gamma = inst.gamma();
  const double global = offdiag_row_sum(q);
  if (!(global < 1.0)) {
    throw NotDiagonallyDominant("diag_dom_bounds: normalized off-diagonal row sum is " +
                                std::to_string(global) + " (must be < 1)");
  }
  const Eigen::VectorXd prod = q.matrix().diagonal().array() * inst.c().array().square();
  std::vector<int> order;
  const std::vector<double> prefix = sorted_prefix(prod, &order);

  // Row sums restricted to the first k entries of the order.
  std::vector<double> restricted(n + 1, 0.0);
  for (int k = 1; k <= n; ++k) {
    double worst = 0.0;
    for (int a = 0; a < k; ++a) {
      double s = 0.0;
      const int i = order[a];
      for (int b2 = 0; b2 < k; ++b2) {
        const int j = order[b2];
        if (j != i) s += std::abs(q(i, j)) / std::sqrt(q(i, i) * q(j, j));
      }
      worst = std::max(worst, s);
    }
    restricted[k] = worst;
  }

  OrderingBounds b;
  b.variant = BoundVariant::kDiagDom;
  for (int k = 1; k <= n; ++k) {
    if (within((1.0 + restricted[k]) * prefix[k], gamma)) b.k_under = k;
  }
  b.lower_factor = 1.0 - global;
  b.k_over = largest_k(prefix, b.lower_factor, gamma);
  if (b.k_under >= 1 && b.k_under < n) {
    b.upper_factor = 1.0 + restricted[b.k_under + 1];
    const double r_dd = b.upper_factor / b.lower_factor;
    b.ratio_bound = ratio_from(b.k_under, n, (b.k_under + 1) * r_dd);
  } else {
    b.ratio_bound = ratio_from(b.k_under, n, 0.0);
  }
  return b;
}

AlignmentOrdering default_alignment(const EigenDecomp& ed) {
  const int n = static_cast<int>(ed.eigenvalues.size());
  struct Entry {
    double mag;
    int row, col;
  };
  std::vector<Entry> entries;
  entries.reserve(n * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) entries.push_back({std::abs(ed.eigenvectors(i, j)), i, j});
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Entry& a, const Entry& b) { return a.mag > b.mag; });
  AlignmentOrdering ord;
  ord.column.assign(n, -1);
  ord.sign.assign(n, 1);
  std::vector<char> used(n, 0);
  for (const Entry& e : entries) {
    if (ord.column[e.row] >= 0 || used[e.col]) continue;
    ord.column[e.row] = e.col;
    ord.sign[e.row] = ed.eigenvectors(e.row, e.col) < 0 ? -1 : 1;
    used[e.col] = 1;
  }
  return ord;
}

AlignmentData alignment_data(const Instance& inst,
                             const std::optional<AlignmentOrdering>& ordering) {
  const int n = inst.n();
  const EigenDecomp ed = eig_sym(inst.q());
  const AlignmentOrdering ord = ordering ? *ordering : default_alignment(ed);
  if (static_cast<int>(ord.column.size()) != n || static_cast<int>(ord.sign.size()) != n) {
    throw std::invalid_argument("alignment ordering must have length N");
  }
  std::vector<int> check = ord.column;
  std::sort(check.begin(), check.end());
  for (int i = 0; i < n; ++i) {
    if (check[i] != i) throw std::invalid_argument("alignment ordering must be a permutation");
  }
  AlignmentData out;
  out.v.resize(n, n);
  out.lambda.resize(n);
  for (int i = 0; i < n; ++i) {
    out.v.col(i) = (ord.sign[i] < 0 ? -1.0 : 1.0) * ed.eigenvectors.col(ord.column[i]);
    out.lambda[i] = ed.eigenvalues[ord.column[i]];
  }
  out.kappa = ed.eigenvalues[n - 1] / ed.eigenvalues[0];
  const Eigen::MatrixXd delta = out.v - Eigen::MatrixXd::Identity(n, n);
  out.rho = std::sqrt(std::max(0.0, max_eigenvalue(SymMatrix(delta.transpose() * delta))));
  out.ratio_floor = 1.0 - out.kappa * out.rho;
  out.ratio_ceiling = 1.0 + out.kappa * (out.rho + out.rho * out.rho);
  return out;
}

OrderingBounds near_aligned_bounds(const Instance& inst,
                                   const std::optional<AlignmentOrdering>& ordering) {
  const AlignmentData al = alignment_data(inst, ordering);
  if (!(al.kappa * al.rho < 1.0)) {
    throw AlignmentTooWeak("near_aligned_bounds: kappa * rho = " +
                           std::to_string(al.kappa * al.rho) + " (must be < 1)");
  }
  const int n = inst.n();
  const Eigen::VectorXd prod = al.lambda.array() * inst.c().array().square();
  std::vector<int> order;
  const std::vector<double> prefix = sorted_prefix(prod, &order);
  OrderingBounds b;
  b.variant = BoundVariant::kNearAligned;
  b.kappa = al.kappa;
  b.rho = al.rho;
  b.lower_factor = al.ratio_floor;
  b.upper_factor = al.ratio_ceiling;
  b.k_under = largest_k(prefix, b.upper_factor, inst.gamma());
  b.k_over = largest_k(prefix, b.lower_factor, inst.gamma());
  b.ratio_bound = ratio_from(b.k_under, n, (b.k_under + 1) * b.upper_factor / b.lower_factor);
  return b;
}

}  // namespace sparse_ellipsoid
