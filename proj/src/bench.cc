//
// sparse-ellipsoid
// SPDX-License-Identifier: Apache-2.0
//

#include "sparse_ellipsoid/bench.h"

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include "sparse_ellipsoid/continuous_relaxation.h"
#include "sparse_ellipsoid/diagonal_relaxation.h"
#include "sparse_ellipsoid/instance_io.h"

namespace sparse_ellipsoid {

int worker_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("SPARSE_ELLIPSOID_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

namespace {

std::optional<double> spec_parameter(const EnsembleSpec& spec) {
  if (spec.cls == InstanceClass::kOffdiagUniform) return spec.a;
  return spec.kappa;
}

double ratio(double bound, double cost) { return cost > 0 ? bound / cost : 1.0; }

}  // namespace

std::vector<BenchItem> items_from_spec(const EnsembleSpec& spec) {
  std::vector<BenchItem> items;
  std::vector<Instance> instances = generate(spec);
  for (size_t i = 0; i < instances.size(); ++i) {
    items.push_back({instance_id(spec, static_cast<int>(i)), class_name(spec.cls),
                     spec_parameter(spec), std::move(instances[i])});
  }
  return items;
}

std::vector<BenchItem> items_from_manifest(const std::string& path) {
  const nlohmann::json m = read_json_file(path);
  if (!m.contains("spec") || !m.contains("files") || !m["files"].is_array()) {
    throw InputError("manifest: expected \"spec\" and \"files\"");
  }
  EnsembleSpec spec;
  try {
    spec = spec_from_json(m["spec"]);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  const std::filesystem::path dir = std::filesystem::path(path).parent_path();
  std::vector<BenchItem> items;
  for (const auto& f : m["files"]) {
    const std::string name = f.get<std::string>();
    items.push_back({std::filesystem::path(name).stem().string(), class_name(spec.cls),
                     spec_parameter(spec), load_instance((dir / name).string())});
  }
  return items;
}

int continuous_bound(const Instance& inst) {
  const Subproblem sub = preprocess(inst);
  if (!sub.reduced) return sub.base_cost;
  return sub.base_cost + lower_bound(*sub.reduced);
}

int diagonal_bound(const Instance& inst) {
  const Subproblem sub = preprocess(inst);
  if (!sub.reduced) return sub.base_cost;
  return sub.base_cost + solve_relaxation(*sub.reduced).lower_bound;
}

BenchRecord bench_one(const BenchItem& item, const BenchOptions& options) {
  BenchRecord r;
  r.instance_id = item.id;
  r.cls = item.cls;
  r.n = item.inst.n();
  r.kappa_or_a = item.kappa_or_a;
  const Subproblem sub = preprocess(item.inst);
  const int heuristic =
      sub.base_cost + (sub.reduced ? backward_greedy(*sub.reduced).cost : 0);
  r.heuristic_cost = heuristic;
  if (options.mode == BenchMode::kRatios) {
    const int bc = continuous_bound(item.inst);
    const int bd = diagonal_bound(item.inst);
    r.bound_cont = bc;
    r.bound_diag = bd;
    r.r_c = ratio(bc, heuristic);
    r.r_d = ratio(bd, heuristic);
    return r;
  }
  BnbConfig cfg = options.bnb;
  if (options.with_bb) {
    cfg.bound_mode = BoundMode::kNone;
    r.nodes_bb = static_cast<double>(solve(item.inst, cfg).nodes_explored);
  }
  cfg.bound_mode = BoundMode::kContinuous;
  const BnbReport c = solve(item.inst, cfg);
  cfg.bound_mode = BoundMode::kDiagonal;
  const BnbReport d = solve(item.inst, cfg);
  if (c.optimal_cost != d.optimal_cost && c.proven_optimal && d.proven_optimal) {
    throw std::logic_error("bench: BB-C and BB-D disagree on " + item.id);
  }
  r.nodes_bbc = static_cast<double>(c.nodes_explored);
  r.nodes_bbd = static_cast<double>(d.nodes_explored);
  r.time_bbc_s = c.elapsed_s;
  r.time_bbd_s = d.elapsed_s;
  return r;
}

BenchOutput run_bench(const std::vector<BenchItem>& items, const BenchOptions& options) {
  const int n_items = static_cast<int>(items.size());
  std::vector<std::optional<BenchRecord>> slots(n_items);
  std::vector<char> failed(n_items, 0);
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (int i = next++; i < n_items; i = next++) {
      try {
        slots[i] = bench_one(items[i], options);
      } catch (const std::exception&) {
        failed[i] = 1;
      }
    }
  };
  const int threads = std::max(1, std::min(worker_count(options.threads), n_items));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  BenchOutput out;
  for (int i = 0; i < n_items; ++i) {
    if (slots[i]) out.records.push_back(std::move(*slots[i]));
    if (failed[i]) out.failed_ids.push_back(items[i].id);
  }
  return out;
}

BenchRecord summarize(const std::vector<BenchRecord>& records) {
  BenchRecord s;
  s.instance_id = "summary";
  using Field = std::optional<double> BenchRecord::*;
  const Field fields[] = {&BenchRecord::kappa_or_a, &BenchRecord::heuristic_cost,
                          &BenchRecord::bound_cont, &BenchRecord::bound_diag,
                          &BenchRecord::r_c,        &BenchRecord::r_d,
                          &BenchRecord::nodes_bb,   &BenchRecord::nodes_bbc,
                          &BenchRecord::nodes_bbd,  &BenchRecord::time_bbc_s,
                          &BenchRecord::time_bbd_s};
  for (Field f : fields) {
    double sum = 0.0;
    int count = 0;
    for (const auto& r : records) {
      if (r.*f) {
        sum += *(r.*f);
        ++count;
      }
    }
    if (count > 0) s.*f = sum / count;
  }
  if (!records.empty()) {
    s.cls = records.front().cls;
    s.n = records.front().n;
  }
  return s;
}

void write_csv_header(std::ostream& out) { out << kCsvHeader << "\n"; }

namespace {

void put(std::ostream& out, const std::optional<double>& v) {
  out << ',';
  if (v) out << *v;
}

}  // namespace

void write_csv_row(std::ostream& out, const BenchRecord& r) {
  std::ostringstream line;
  line << std::setprecision(10);
  line << r.instance_id << ',' << r.cls << ',' << r.n;
  for (const auto* v : {&r.kappa_or_a, &r.heuristic_cost, &r.bound_cont, &r.bound_diag,
                        &r.r_c, &r.r_d, &r.nodes_bb, &r.nodes_bbc, &r.nodes_bbd,
                        &r.time_bbc_s, &r.time_bbd_s}) {
    put(line, *v);
  }
  out << line.str() << "\n";
}

void write_csv(std::ostream& out, const std::vector<BenchRecord>& records) {
  write_csv_header(out);
  for (const auto& r : records) write_csv_row(out, r);
  if (!records.empty()) write_csv_row(out, summarize(records));
  out.flush();
}

}  // namespace sparse_ellipsoid
