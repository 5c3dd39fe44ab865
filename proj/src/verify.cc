//
// sparse-ellipsoid
// SPDX-License-Identifier: Apache-2.0
//

#include "sparse_ellipsoid/verify.h"

#include <sstream>

#include "sparse_ellipsoid/bounds.h"
#include "sparse_ellipsoid/branch_and_bound.h"
#include "sparse_ellipsoid/continuous_relaxation.h"
#include "sparse_ellipsoid/diag_exact.h"
#include "sparse_ellipsoid/diagonal_relaxation.h"
#include "sparse_ellipsoid/instance_io.h"

namespace sparse_ellipsoid {

using nlohmann::json;

json relax_report(const Instance& inst, RelaxKind which) {
  const Subproblem sub = preprocess(inst);
  json out;
  out["which"] = which == RelaxKind::kContinuous ? "cont" : "diag";
  out["base_cost"] = sub.base_cost;
  out["free"] = sub.f;
  if (!sub.reduced) {
    out["bound"] = sub.base_cost;
    out["certificate"] = nullptr;
    return out;
  }
  if (which == RelaxKind::kContinuous) {
    const DualCertificate cert = solve_dual(*sub.reduced);
    out["bound"] = sub.base_cost + integer_bound(cert.objective);
    out["certificate"] = {{"mu", vector_to_json(cert.mu)},
                          {"objective", cert.objective},
                          {"capped", cert.capped},
                          {"iterations", cert.iterations}};
  } else {
    const DiagRelaxResult r = solve_relaxation(*sub.reduced);
    out["bound"] = sub.base_cost + r.lower_bound;
    out["k_d"] = r.k_d;
    json trace = json::array();
    for (const auto& [k, v] : r.e_d_trace) trace.push_back({k, v});
    out["e_d_trace"] = trace;
    out["certificate"] = {{"d", vector_to_json(r.certificate.d)},
                          {"k", r.certificate.k},
                          {"objective", r.certificate.objective},
                          {"psd_margin", r.certificate.psd_margin}};
  }
  return out;
}

CertificateCheck verify_continuous_certificate(const Instance& inst, const Eigen::VectorXd& mu) {
  CertificateCheck chk;
  if (mu.size() != inst.n()) {
    chk.reason = "mu has the wrong length";
    return chk;
  }
  const ContinuousDual dual(inst);
  if (!dual.in_box(mu)) {
    chk.reason = "mu is outside the dual box";
    return chk;
  }
  chk.ok = true;
  chk.bound = integer_bound(dual.objective(mu));
  return chk;
}

CertificateCheck verify_diagonal_certificate(const Instance& inst, const Eigen::VectorXd& d) {
  CertificateCheck chk;
  if (d.size() != inst.n() || !(d.array() > 0.0).all()) {
    chk.reason = "d must be positive with length N";
    return chk;
  }
  if (!certificate_is_feasible(inst, d)) {
    chk.reason = "Q - D is not positive definite";
    return chk;
  }
  chk.ok = true;
  chk.bound = solve_diagonal({d, inst.c(), inst.gamma()}).min_cardinality;
  return chk;
}

CertificateCheck verify_relax_report(const Instance& inst, const json& report) {
  CertificateCheck chk;
  try {
    const Subproblem sub = preprocess(inst);
    if (report.at("base_cost").get<int>() != sub.base_cost ||
        report.at("free").get<IndexSet>() != sub.f) {
      chk.reason = "preprocessing does not match the report";
      return chk;
    }
    const int claimed = report.at("bound").get<int>();
    if (!sub.reduced) {
      chk.ok = claimed == sub.base_cost;
      chk.bound = sub.base_cost;
      if (!chk.ok) chk.reason = "bound mismatch";
      return chk;
    }
    const json& cert = report.at("certificate");
    const std::string which = report.at("which").get<std::string>();
    if (which == "cont") {
      chk = verify_continuous_certificate(*sub.reduced, vector_from_json(cert.at("mu")));
    } else if (which == "diag") {
      chk = verify_diagonal_certificate(*sub.reduced, vector_from_json(cert.at("d")));
    } else {
      chk.reason = "unknown relaxation kind";
      return chk;
    }
    if (!chk.ok) return chk;
    chk.bound += sub.base_cost;
    if (chk.bound != claimed) {
      chk.ok = false;
      chk.reason = "recomputed bound " + std::to_string(chk.bound) + " != reported " +
                   std::to_string(claimed);
    }
  } catch (const std::exception& e) {
    chk.ok = false;
    chk.reason = std::string("malformed report: ") + e.what();
  }
  return chk;
}

VerifyReport run_verify(const VerifyOptions& options, std::ostream* log) {
  if (options.spec.n > 12) throw std::invalid_argument("verify: n must be <= 12");
  EnsembleSpec spec = options.spec;
  spec.count = options.trials;
  const std::vector<Instance> instances = generate(spec);
  VerifyReport rep;
  rep.trials = static_cast<int>(instances.size());

  for (size_t t = 0; t < instances.size(); ++t) {
    const Instance& inst = instances[t];
    std::vector<std::string> found;
    auto expect = [&](bool cond, const std::string& what) {
      if (!cond) found.push_back(what);
    };

    const BruteForceResult bf = brute_force(inst);
    const int opt = bf.optimal_cost;
    const int k_star = inst.n() - opt;

    for (BoundMode mode : {BoundMode::kNone, BoundMode::kContinuous, BoundMode::kDiagonal}) {
      BnbConfig cfg;
      cfg.bound_mode = mode;
      cfg.relax_min_dim = 1;
      BnbReport r = solve(inst, cfg);
      if (options.inject_fault && t == 0 && mode == BoundMode::kDiagonal) r.optimal_cost += 1;
      expect(r.proven_optimal && r.optimal_cost == opt,
             std::string("bnb(") + bound_mode_name(mode) + ") cost " +
                 std::to_string(r.optimal_cost) + " != brute force " + std::to_string(opt));
      expect(static_cast<int>(r.support.size()) == r.optimal_cost,
             "bnb support size differs from cost");
    }

    const Subproblem sub = preprocess(inst);
    const int heuristic = sub.base_cost + (sub.reduced ? backward_greedy(*sub.reduced).cost : 0);
    expect(heuristic >= opt, "greedy cost below the optimum");

    int k_d = inst.n();
    for (RelaxKind kind : {RelaxKind::kContinuous, RelaxKind::kDiagonal}) {
      const json report = relax_report(inst, kind);
      const int bound = report["bound"].get<int>();
      expect(bound <= opt, std::string(kind == RelaxKind::kContinuous ? "cont" : "diag") +
                               " bound " + std::to_string(bound) + " exceeds optimum");
      const CertificateCheck chk = verify_relax_report(inst, report);
      expect(chk.ok, "certificate re-verification failed: " + chk.reason);
      if (kind == RelaxKind::kDiagonal && sub.base_cost == 0) k_d = inst.n() - bound;
    }

    if (sub.base_cost == 0) {
      const OrderingBounds eb = eig_bounds(inst);
      expect(eb.k_under <= k_star && k_star <= k_d && k_d <= eb.k_over,
             "eigenvalue sandwich violated: " + std::to_string(eb.k_under) + " <= " +
                 std::to_string(k_star) + " <= " + std::to_string(k_d) + " <= " +
                 std::to_string(eb.k_over));
      if (eb.k_under >= 1 && eb.ratio_bound) {
        expect(double(eb.k_over) / eb.k_under <= *eb.ratio_bound + 1e-12,
               "eigenvalue ratio chain violated");
      }
      if (offdiag_row_sum(inst.q()) < 1.0) {
        const OrderingBounds db = diag_dom_bounds(inst);
        expect(db.k_under <= k_star && k_star <= k_d && k_d <= db.k_over,
               "diagonal dominance sandwich violated");
      }
    }

    if (!found.empty()) {
      rep.violations += static_cast<int>(found.size());
      for (const auto& f : found) {
        std::string msg = "trial " + std::to_string(t) + ": " + f;
        rep.messages.push_back(msg);
        if (log) *log << msg << "\n";
      }
      if (log) *log << instance_to_json(inst).dump() << "\n";
    }
  }
  return rep;
}

}  // namespace sparse_ellipsoid
