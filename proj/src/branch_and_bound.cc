//
// sparse-ellipsoid
// SPDX-License-Identifier: Apache-2.0
//

#include "sparse_ellipsoid/branch_and_bound.h"

#include <algorithm>
#include <chrono>
#include <queue>

#include "sparse_ellipsoid/continuous_relaxation.h"
#include "sparse_ellipsoid/diag_exact.h"
#include "sparse_ellipsoid/diagonal_relaxation.h"

namespace sparse_ellipsoid {

const char* bound_mode_name(BoundMode mode) {
  switch (mode) {
    case BoundMode::kNone: return "none";
    case BoundMode::kContinuous: return "cont";
    case BoundMode::kDiagonal: return "diag";
  }
  return "?";
}

IndexSet greedy_zero_set(const Eigen::MatrixXd& a, const Eigen::VectorXd& c,
                         double gamma) {
  const int n = static_cast<int>(c.size());
  Eigen::MatrixXd m = a;
  Eigen::VectorXd r = c;
  std::vector<char> active(n, 1);
  IndexSet zeros;
  double e0 = 0.0;
  while (static_cast<int>(zeros.size()) < n) {
    int best = -1;
    double best_inc = 0.0;
    for (int i = 0; i < n; ++i) {
      if (!active[i]) continue;
      const double inc = r[i] * r[i] / m(i, i);
      if (best < 0 || inc < best_inc) {
        best = i;
        best_inc = inc;
      }
    }
    if (e0 + best_inc > gamma) break;
    e0 += best_inc;
    active[best] = 0;
    zeros.push_back(best);
    const Eigen::VectorXd col = m.col(best);
    const double pivot = m(best, best);
    r -= col * (r[best] / pivot);
    m -= col * col.transpose() / pivot;
  }
  std::sort(zeros.begin(), zeros.end());
  return zeros;
}

Eigen::VectorXd point_with_support(const Instance& inst, const IndexSet& support) {
  const int n = inst.n();
  const IndexSet z = complement(support, n);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  if (support.empty()) return x;
  if (z.empty()) return inst.c();
  const Eigen::MatrixXd a = inverse(inst.q()).matrix();
  const Eigen::MatrixXd azz = submatrix(a, z, z);
  const Eigen::VectorXd shift =
      submatrix(a, support, z) * azz.llt().solve(subvector(inst.c(), z));
  for (size_t i = 0; i < support.size(); ++i) {
    x[support[i]] = inst.c()[support[i]] - shift[i];
  }
  return x;
}

GreedyResult backward_greedy(const Instance& inst) {
  const Eigen::MatrixXd a = inverse(inst.q()).matrix();
  GreedyResult g;
  g.zero_set = greedy_zero_set(a, inst.c(), inst.gamma());
  g.cost = inst.n() - static_cast<int>(g.zero_set.size());
  g.x = point_with_support(inst, complement(g.zero_set, inst.n()));
  return g;
}

int branch_variable(const Subproblem& sub) {
  if (sub.f.empty() || !sub.reduced) {
    throw std::invalid_argument("branch_variable: no free index");
  }
  const MarginReport m = single_zero_margins(*sub.reduced);
  int best = 0;
  for (int i = 1; i < m.margins.size(); ++i) {
    if (m.margins[i] < m.margins[best]) best = i;
  }
  return sub.f[best];
}

namespace {

struct Node {
  IndexSet z;
  IndexSet u;
  int lower_bound = 0;
  int depth = 0;
  long seq = 0;
  bool from_zero_branch = false;
};

struct NodeOrder {
  // priority_queue pops the largest element, so "less" means worse.
  bool operator()(const Node& a, const Node& b) const {
    if (a.lower_bound != b.lower_bound) return a.lower_bound > b.lower_bound;
    if (a.depth != b.depth) return a.depth < b.depth;
    return a.seq > b.seq;
  }
};

// Reduced data in inverse form for a node: a = Q_eff^{-1} over the free set.
struct NodeState {
  IndexSet f;
  Eigen::MatrixXd a;
  Eigen::VectorXd c;
  double gamma = 0.0;
};

NodeState condition(const Eigen::MatrixXd& a_root, const Eigen::VectorXd& c_root,
                    double gamma, const IndexSet& z, const IndexSet& u) {
  IndexSet zu;
  std::set_union(z.begin(), z.end(), u.begin(), u.end(), std::back_inserter(zu));
  NodeState s;
  s.f = complement(zu, static_cast<int>(c_root.size()));
  s.a = submatrix(a_root, s.f, s.f);
  s.c = subvector(c_root, s.f);
  s.gamma = gamma;
  if (!z.empty()) {
    const Eigen::LLT<Eigen::MatrixXd> azz(submatrix(a_root, z, z));
    const Eigen::VectorXd cz = subvector(c_root, z);
    const Eigen::MatrixXd afz = submatrix(a_root, s.f, z);
    const Eigen::VectorXd w = azz.solve(cz);
    s.c -= afz * w;
    s.gamma -= cz.dot(w);
    s.a -= afz * azz.solve(afz.transpose());
    s.a = 0.5 * (s.a + s.a.transpose());
  }
  return s;
}

Eigen::VectorXd margins_of(const Eigen::MatrixXd& a, const Eigen::VectorXd& c,
                           double gamma) {
  return gamma - c.array().square() / a.diagonal().array();
}

bool is_diagonal(const Eigen::MatrixXd& a) {
  for (int j = 0; j < a.cols(); ++j)
    for (int i = 0; i < a.rows(); ++i)
      if (i != j && a(i, j) != 0.0) return false;
  return true;
}

IndexSet insert_sorted(IndexSet s, int v) {
  s.insert(std::upper_bound(s.begin(), s.end(), v), v);
  return s;
}

}  // namespace

BnbReport solve(const Instance& inst, const BnbConfig& cfg) {
  if (cfg.relax_min_dim < 1) throw std::invalid_argument("solve: relax_min_dim must be >= 1");
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  const int n = inst.n();
  const Eigen::MatrixXd a_root = inverse(inst.q()).matrix();
  const Eigen::VectorXd& c_root = inst.c();

  BnbReport rep;
  int incumbent = 0;
  IndexSet incumbent_support;
  for (int i = 0; i < n; ++i) {
    if (c_root[i] != 0.0) incumbent_support.push_back(i);
  }
  incumbent = static_cast<int>(incumbent_support.size());

  auto offer = [&](int cost, IndexSet support) {
    if (cost < incumbent) {
      incumbent = cost;
      incumbent_support = std::move(support);
      rep.incumbent_history.emplace_back(rep.nodes_explored, cost);
    }
  };

  std::priority_queue<Node, std::vector<Node>, NodeOrder> frontier;
  long seq = 0;
  frontier.push(Node{{}, {}, 0, 0, seq++, false});

  bool limit_hit = false;
  int limit_bound = std::numeric_limits<int>::max();
  while (!frontier.empty()) {
    Node node = frontier.top();
    frontier.pop();
    if (node.lower_bound >= incumbent) continue;
    const double elapsed = std::chrono::duration<double>(clock::now() - t0).count();
    if (rep.nodes_explored >= cfg.node_limit || elapsed >= cfg.time_limit_s) {
      limit_hit = true;
      limit_bound = node.lower_bound;
      break;
    }
    ++rep.nodes_explored;

    NodeState st = condition(a_root, c_root, inst.gamma(), node.z, node.u);
    if (st.gamma < 0.0) continue;

    // Variables that cannot be zeroed individually are moved to U. The
    // remaining margins are unchanged by dropping them.
    {
      const Eigen::VectorXd mg = margins_of(st.a, st.c, st.gamma);
      IndexSet keep_local, keep;
      for (size_t i = 0; i < st.f.size(); ++i) {
        if (mg[i] < 0.0) {
          node.u = insert_sorted(node.u, st.f[i]);
        } else {
          keep_local.push_back(static_cast<int>(i));
          keep.push_back(st.f[i]);
        }
      }
      if (keep.size() != st.f.size()) {
        st.a = submatrix(st.a, keep_local, keep_local);
        st.c = subvector(st.c, keep_local);
        st.f = std::move(keep);
      }
    }
    const int base = static_cast<int>(node.u.size());
    node.lower_bound = std::max(node.lower_bound, base);

    auto support_from = [&](const IndexSet& local_zeros) {
      IndexSet support = node.u;
      const IndexSet nz = complement(local_zeros, static_cast<int>(st.f.size()));
      for (int i : nz) support.push_back(st.f[i]);
      std::sort(support.begin(), support.end());
      return support;
    };

    if (st.f.empty()) {
      offer(base, node.u);
      continue;
    }
    if (st.gamma == 0.0) {
      IndexSet zeros;
      for (int i = 0; i < st.c.size(); ++i)
        if (st.c[i] == 0.0) zeros.push_back(i);
      offer(base + static_cast<int>(st.f.size() - zeros.size()), support_from(zeros));
      continue;
    }
    if (is_diagonal(st.a)) {
      const DiagSolution ds =
          solve_diagonal({st.a.diagonal().cwiseInverse(), st.c, st.gamma});
      offer(base + ds.min_cardinality, support_from(ds.zero_set));
      continue;
    }

    const IndexSet gz = greedy_zero_set(st.a, st.c, st.gamma);
    offer(base + static_cast<int>(st.f.size() - gz.size()), support_from(gz));
    if (node.lower_bound >= incumbent) continue;

    const int nf = static_cast<int>(st.f.size());
    if (cfg.bound_mode != BoundMode::kNone && nf >= cfg.relax_min_dim &&
        (node.from_zero_branch || !cfg.relax_on_zero_branch_only)) {
      const Instance reduced(inverse(SymMatrix(st.a)), st.c, st.gamma);
      int b = 0;
      if (cfg.bound_mode == BoundMode::kContinuous) {
        b = lower_bound(reduced);
      } else {
        b = solve_relaxation(reduced).lower_bound;
      }
      ++rep.relaxations_solved;
      node.lower_bound = std::max(node.lower_bound, base + b);
      if (node.lower_bound >= incumbent) {
        ++rep.relaxation_prunes;
        continue;
      }
    }

    const Eigen::VectorXd mg = margins_of(st.a, st.c, st.gamma);
    int br = 0;
    for (int i = 1; i < nf; ++i)
      if (mg[i] < mg[br]) br = i;
    const int var = st.f[br];

    // Zero child: rank-one downdate of the inverse-form data.
    {
      const Eigen::VectorXd col = st.a.col(br);
      const double pivot = st.a(br, br);
      const Eigen::VectorXd c2 = st.c - col * (st.c[br] / pivot);
      const double g2 = st.gamma - st.c[br] * st.c[br] / pivot;
      int forced = 0;
      for (int i = 0; i < nf; ++i) {
        if (i == br) continue;
        const double aii = st.a(i, i) - col[i] * col[i] / pivot;
        if (g2 - c2[i] * c2[i] / aii < 0.0) ++forced;
      }
      Node child{insert_sorted(node.z, var), node.u,
                 std::max(node.lower_bound, base + forced), node.depth + 1, seq++, true};
      if (child.lower_bound < incumbent) frontier.push(std::move(child));
    }
    {
      Node child{node.z, insert_sorted(node.u, var),
                 std::max(node.lower_bound, base + 1), node.depth + 1, seq++, false};
      if (child.lower_bound < incumbent) frontier.push(std::move(child));
    }
  }

  rep.optimal_cost = incumbent;
  rep.support = incumbent_support;
  rep.x = point_with_support(inst, incumbent_support);
  rep.proven_optimal = !limit_hit;
  if (limit_hit) {
    int lb = limit_bound;
    while (!frontier.empty()) {
      lb = std::min(lb, frontier.top().lower_bound);
      frontier.pop();
    }
    rep.best_lower_bound = std::min(lb, incumbent);
  } else {
    rep.best_lower_bound = incumbent;
  }
  rep.elapsed_s = std::chrono::duration<double>(clock::now() - t0).count();
  return rep;
}

BruteForceResult brute_force(const Instance& inst) {
  const int n = inst.n();
  if (n > 20) throw DimensionTooLarge("brute_force: N must be <= 20");
  for (int k = n; k >= 1; --k) {
    std::vector<int> z(k);
    for (int i = 0; i < k; ++i) z[i] = i;
    while (true) {
      if (zero_set_feasible(inst, z).feasible) {
        return {n - k, complement(z, n)};
      }
      int i = k - 1;
      while (i >= 0 && z[i] == n - k + i) --i;
      if (i < 0) break;
      ++z[i];
      for (int j = i + 1; j < k; ++j) z[j] = z[j - 1] + 1;
    }
  }
  IndexSet all(n);
  for (int i = 0; i < n; ++i) all[i] = i;
  return {n, all};
}

}  // namespace sparse_ellipsoid
