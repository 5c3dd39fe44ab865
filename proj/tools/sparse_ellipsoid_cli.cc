//
// sparse-ellipsoid
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: solve, relax, bounds, bench, verify, gen.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "sparse_ellipsoid/bench.h"
#include "sparse_ellipsoid/bounds.h"
#include "sparse_ellipsoid/branch_and_bound.h"
#include "sparse_ellipsoid/generators.h"
#include "sparse_ellipsoid/instance_io.h"
#include "sparse_ellipsoid/verify.h"

namespace se = sparse_ellipsoid;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kLimitReached = 2;
constexpr int kPrecondition = 3;
constexpr int kVerifyFailed = 4;

void emit(const json& j, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << j.dump(2) << "\n";
  } else {
    se::write_json_file(j, out);
  }
}

json bnb_to_json(const se::BnbReport& r, se::BoundMode mode) {
  json hist = json::array();
  for (const auto& [node, cost] : r.incumbent_history) hist.push_back({node, cost});
  return {{"bound_mode", se::bound_mode_name(mode)},
          {"optimal_cost", r.optimal_cost},
          {"support", r.support},
          {"x", se::vector_to_json(r.x)},
          {"nodes_explored", r.nodes_explored},
          {"relaxations_solved", r.relaxations_solved},
          {"relaxation_prunes", r.relaxation_prunes},
          {"incumbent_history", hist},
          {"proven_optimal", r.proven_optimal},
          {"best_lower_bound", r.best_lower_bound},
          {"elapsed_s", r.elapsed_s}};
}

json ordering_to_json(const se::OrderingBounds& b) {
  json j = {{"variant", se::variant_name(b.variant)},
            {"k_under", b.k_under},
            {"k_over", b.k_over},
            {"ratio_bound", b.ratio_bound ? json(*b.ratio_bound) : json(nullptr)}};
  if (b.variant == se::BoundVariant::kNearAligned) {
    j["kappa"] = b.kappa;
    j["rho"] = b.rho;
    j["ratio_floor"] = b.lower_factor;
    j["ratio_ceiling"] = b.upper_factor;
  }
  if (b.variant == se::BoundVariant::kDiagDom) {
    j["one_minus_row_sum"] = b.lower_factor;
  }
  return j;
}

json prob_to_json(const se::ProbBoundReport& r) {
  json j = {{"epsilon", r.epsilon},
            {"probability", r.probability},
            {"regime", se::regime_name(r.regime)},
            {"eig_mean", r.eig_mean},
            {"eig_var", r.eig_var},
            {"eps_max", r.eps_max},
            {"k_under", r.k_under},
            {"ratio_bound", r.ratio_bound ? json(*r.ratio_bound) : json(nullptr)}};
  j["interval_i"] = r.interval_i ? json{r.interval_i->first, r.interval_i->second} : json(nullptr);
  return j;
}

se::EnsembleSpec parse_spec_arg(const std::string& arg) {
  json j;
  if (!arg.empty() && arg.front() == '{') {
    try {
      j = json::parse(arg);
    } catch (const json::parse_error& e) {
      throw se::InputError(std::string("spec: malformed JSON: ") + e.what());
    }
  } else {
    j = se::read_json_file(arg);
  }
  if (j.contains("spec")) j = j["spec"];
  try {
    return se::spec_from_json(j);
  } catch (const std::invalid_argument& e) {
    throw se::InputError(e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cardinality minimization inside a positive definite ellipsoid"};
  app.require_subcommand(1);

  std::string instance_path, out_path, bound = "none", which, scale_path, spec_arg;
  int relax_min_dim = 20;
  long node_limit = std::numeric_limits<long>::max();
  double time_limit = std::numeric_limits<double>::infinity();
  double epsilon = 0.1;
  std::string mode = "ratios";
  bool with_bb = false;
  int trials = 100;
  bool inject_fault = false;
  int threads = 0;
  std::string out_dir;

  auto* solve_cmd = app.add_subcommand("solve", "Branch and bound");
  solve_cmd->add_option("--instance", instance_path)->required();
  solve_cmd->add_option("--bound", bound)->check(CLI::IsMember({"none", "cont", "diag"}));
  solve_cmd->add_option("--relax-min-dim", relax_min_dim)->check(CLI::PositiveNumber);
  solve_cmd->add_option("--node-limit", node_limit);
  solve_cmd->add_option("--time-limit", time_limit);
  solve_cmd->add_option("--out", out_path);

  auto* relax_cmd = app.add_subcommand("relax", "Relaxation bound with certificate");
  relax_cmd->add_option("--instance", instance_path)->required();
  relax_cmd->add_option("--which", which)->required()->check(CLI::IsMember({"cont", "diag"}));
  relax_cmd->add_option("--out", out_path);

  auto* bounds_cmd = app.add_subcommand("bounds", "Analytical ordering bounds");
  bounds_cmd->add_option("--instance", instance_path)->required();
  bounds_cmd->add_option("--which", which)->required()->check(
      CLI::IsMember({"eig", "dd", "naa", "prob"}));
  bounds_cmd->add_option("--scale", scale_path, "JSON array with the diagonal scaling");
  bounds_cmd->add_option("--epsilon", epsilon);
  bounds_cmd->add_option("--out", out_path);

  auto* bench_cmd = app.add_subcommand("bench", "Ensemble benchmark to CSV");
  bench_cmd->add_option("--spec", spec_arg, "manifest, spec file or inline JSON")->required();
  bench_cmd->add_option("--mode", mode)->check(CLI::IsMember({"ratios", "bnb"}));
  bench_cmd->add_flag("--with-bb", with_bb, "also run plain branch and bound");
  bench_cmd->add_option("--relax-min-dim", relax_min_dim)->check(CLI::PositiveNumber);
  bench_cmd->add_option("--node-limit", node_limit);
  bench_cmd->add_option("--time-limit", time_limit);
  bench_cmd->add_option("--threads", threads);
  bench_cmd->add_option("--out", out_path);

  auto* verify_cmd = app.add_subcommand("verify", "Oracle cross-check battery");
  verify_cmd->add_option("--spec", spec_arg);
  verify_cmd->add_option("--trials", trials)->check(CLI::NonNegativeNumber);
  verify_cmd->add_flag("--inject-fault", inject_fault, "test only: corrupt one answer");

  auto* gen_cmd = app.add_subcommand("gen", "Write an ensemble and its manifest");
  gen_cmd->add_option("--spec", spec_arg)->required();
  gen_cmd->add_option("--out-dir", out_dir)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kInputError;
  }

  try {
    if (*solve_cmd) {
      const se::Instance inst = se::load_instance(instance_path);
      se::BnbConfig cfg;
      cfg.bound_mode = bound == "cont"   ? se::BoundMode::kContinuous
                       : bound == "diag" ? se::BoundMode::kDiagonal
                                         : se::BoundMode::kNone;
      cfg.relax_min_dim = relax_min_dim;
      cfg.node_limit = node_limit;
      cfg.time_limit_s = time_limit;
      const se::BnbReport r = se::solve(inst, cfg);
      emit(bnb_to_json(r, cfg.bound_mode), out_path);
      return r.proven_optimal ? kOk : kLimitReached;
    }
    if (*relax_cmd) {
      const se::Instance inst = se::load_instance(instance_path);
      emit(se::relax_report(inst, which == "cont" ? se::RelaxKind::kContinuous
                                                  : se::RelaxKind::kDiagonal),
           out_path);
      return kOk;
    }
    if (*bounds_cmd) {
      const se::Instance inst = se::load_instance(instance_path);
      try {
        if (which == "eig") {
          std::optional<Eigen::VectorXd> scale;
          if (!scale_path.empty()) scale = se::vector_from_json(se::read_json_file(scale_path));
          emit(ordering_to_json(se::eig_bounds(inst, scale)), out_path);
        } else if (which == "dd") {
          emit(ordering_to_json(se::diag_dom_bounds(inst)), out_path);
        } else if (which == "naa") {
          emit(ordering_to_json(se::near_aligned_bounds(inst)), out_path);
        } else {
          emit(prob_to_json(se::prob_bound(inst, epsilon)), out_path);
        }
      } catch (const se::NotDiagonallyDominant& e) {
        std::cerr << e.what() << "\n";
        return kPrecondition;
      } catch (const se::AlignmentTooWeak& e) {
        std::cerr << e.what() << "\n";
        return kPrecondition;
      }
      return kOk;
    }
    if (*bench_cmd) {
      std::vector<se::BenchItem> items;
      bool is_manifest = false;
      if (!spec_arg.empty() && spec_arg.front() != '{') {
        is_manifest = se::read_json_file(spec_arg).contains("files");
      }
      items = is_manifest ? se::items_from_manifest(spec_arg)
                          : se::items_from_spec(parse_spec_arg(spec_arg));
      se::BenchOptions opt;
      opt.mode = mode == "bnb" ? se::BenchMode::kBnb : se::BenchMode::kRatios;
      opt.with_bb = with_bb;
      opt.bnb.relax_min_dim = relax_min_dim;
      opt.bnb.node_limit = node_limit;
      opt.bnb.time_limit_s = time_limit;
      opt.threads = threads;
      const se::BenchOutput res = se::run_bench(items, opt);
      if (out_path.empty() || out_path == "-") {
        se::write_csv(std::cout, res.records);
      } else {
        std::ofstream f(out_path);
        if (!f) throw se::InputError("cannot write " + out_path);
        se::write_csv(f, res.records);
      }
      for (const auto& id : res.failed_ids) std::cerr << "failed: " << id << "\n";
      return kOk;
    }
    if (*verify_cmd) {
      se::VerifyOptions opt;
      if (spec_arg.empty()) {
        opt.spec.cls = se::InstanceClass::kPowerlawInv;
        opt.spec.n = 8;
        opt.spec.kappa = 8.0;
        opt.spec.seed = 1;
      } else {
        opt.spec = parse_spec_arg(spec_arg);
      }
      if (opt.spec.n > 12) throw se::InputError("verify: spec n must be <= 12");
      opt.trials = trials;
      opt.inject_fault = inject_fault;
      const se::VerifyReport rep = se::run_verify(opt, &std::cerr);
      std::cout << "trials " << rep.trials << ", violations " << rep.violations << "\n";
      return rep.violations == 0 ? kOk : kVerifyFailed;
    }
    if (*gen_cmd) {
      const json manifest = se::write_ensemble(parse_spec_arg(spec_arg), out_dir);
      std::cout << manifest.dump(2) << "\n";
      return kOk;
    }
  } catch (const se::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kOk;
}
