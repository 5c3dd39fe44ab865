//
// sparse-ellipsoid
// SPDX-License-Identifier: Apache-2.0
//

#ifndef SPARSE_ELLIPSOID_BENCH_H_
#define SPARSE_ELLIPSOID_BENCH_H_

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sparse_ellipsoid/branch_and_bound.h"
#include "sparse_ellipsoid/generators.h"
#include "sparse_ellipsoid/instance.h"

namespace sparse_ellipsoid {

inline constexpr const char* kCsvHeader =
    "instance_id,class,n,kappa_or_a,heuristic_cost,bound_cont,bound_diag,r_c,r_d,"
    "nodes_bb,nodes_bbc,nodes_bbd,time_bbc_s,time_bbd_s";

struct BenchItem {
  std::string id;
  std::string cls;
  std::optional<double> kappa_or_a;
  Instance inst;
};

struct BenchRecord {
  std::string instance_id;
  std::string cls;
  int n = 0;
  std::optional<double> kappa_or_a;
  std::optional<double> heuristic_cost;
  std::optional<double> bound_cont;
  std::optional<double> bound_diag;
  std::optional<double> r_c;
  std::optional<double> r_d;
  std::optional<double> nodes_bb;
  std::optional<double> nodes_bbc;
  std::optional<double> nodes_bbd;
  std::optional<double> time_bbc_s;
  std::optional<double> time_bbd_s;
};

enum class BenchMode { kRatios, kBnb };

struct BenchOptions {
  BenchMode mode = BenchMode::kRatios;
  bool with_bb = false;
  BnbConfig bnb;
  // 0 selects SPARSE_ELLIPSOID_THREADS or the hardware concurrency.
  int threads = 0;
};

struct BenchOutput {
  std::vector<BenchRecord> records;  // instance order, failures omitted
  std::vector<std::string> failed_ids;
};

int worker_count(int requested = 0);

std::vector<BenchItem> items_from_spec(const EnsembleSpec& spec);
// Reads a manifest written by write_ensemble; file names are relative to
// the manifest's directory.
std::vector<BenchItem> items_from_manifest(const std::string& path);

// Integer lower bounds of the two relaxations, preprocessing first.
int continuous_bound(const Instance& inst);
int diagonal_bound(const Instance& inst);

BenchRecord bench_one(const BenchItem& item, const BenchOptions& options);
BenchOutput run_bench(const std::vector<BenchItem>& items, const BenchOptions& options);

// Column-wise means over the records that carry a value.
BenchRecord summarize(const std::vector<BenchRecord>& records);

void write_csv_header(std::ostream& out);
void write_csv_row(std::ostream& out, const BenchRecord& r);
// Header, one row per record, then a row labeled "summary" unless empty.
void write_csv(std::ostream& out, const std::vector<BenchRecord>& records);

}  // namespace sparse_ellipsoid

#endif  // SPARSE_ELLIPSOID_BENCH_H_
