#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "factorprice/market.hpp"
#include "factorprice/rng.hpp"

namespace factorprice {

// ---- instance generators -------------------------------------------------

/// Symmetric, strictly diagonally dominant, nonpositive off-diagonals
/// (hence a positive definite M-matrix): off-diagonals -U[0, 1/n], diagonal
/// = row off-diagonal mass + U[0.5, 1.5].
Matrix gen_m_matrix(int n, Rng& rng);

/// As above with dominance weighted by w > 0: B_ii = sum_k |B_ik| w_k / w_i
/// + U[0.5, 1.5], so B w > 0 componentwise (still a symmetric M-matrix).
Matrix gen_m_matrix(int n, const Vector& weights, Rng& rng);

/// theta_j = x_j / sum x, x ~ U(0, 1].
std::vector<double> gen_weights(int m, Rng& rng);

/// Linear segments with a ~ U(0, 1]^n and B from gen_m_matrix.
MarketInstance gen_linear_instance(int n, int m, Rng& rng);

/// LC-MNL: a_ij = ln((1 -/+ sigma_i) v_ij / n) with the sign drawn per entry,
/// v_ij ~ U(0, 10], sigma_i ~ U[0, 1); b_ij symmetric triangular on (0, 2).
MarketInstance gen_lcmnl_instance(int n, int m, Rng& rng);

/// Utilities for bundle sizes 1..n: prefix sums of n positive increments
/// (the i-th drawn as U(0, 1] / i) sorted strictly decreasing, so u is
/// increasing with u_i / i decreasing.
Vector gen_concave_utilities(int n, Rng& rng);

/// Non-linear pricing of one item in bundle sizes 1..n: linear segments with
/// u from gen_concave_utilities, B = gen_m_matrix(n, u) and a = B u > 0.
MarketInstance gen_nonlinear_instance(int n, int m, Rng& rng);

// ---- experiments ---------------------------------------------------------

enum class Family { kLinear, kLinearCluster, kLcmnl, kLcmnlCluster, kNonlinear };

std::string to_string(Family family);
Family parse_family(const std::string& name);

/// Draws one instance of the family (cluster families use their base generator).
MarketInstance generate_instance(Family family, int n, int m, Rng& rng);

struct ExperimentConfig {
  Family family = Family::kLinear;
  std::vector<int> n_values;
  std::vector<int> m_values;
  int instances_per_cell = 20;
  std::uint64_t seed = 1;
  // Subset of: uniform, economic, robust, linear (non-linear family only),
  // nonpersonalized, clustered-economic, clustered-robust.
  std::vector<std::string> strategies;
  int K = 2;
  int grid_points = 2000;
  int threads = 1;
  int kmeans_max_iters = 100;
  bool kmeans_log_space = false;
  bool record_runtime = false;  // wall-clock times break byte-identical output
  std::string dump_dir;          // when set, every generated instance is written there as a market file
};

/// Throws ArgumentError on any invalid field.
void validate(const ExperimentConfig& config);

ExperimentConfig parse_experiment_config(const nlohmann::json& doc);
ExperimentConfig read_experiment_config(const std::filesystem::path& path);
nlohmann::json to_json(const ExperimentConfig& config);

/// Named configurations: linear, linear-cluster, lcmnl, lcmnl-cluster, nonlinear.
ExperimentConfig experiment_preset(const std::string& name);
std::vector<std::string> preset_names();

struct CellResult {
  int n = 0;
  int m = 0;
  std::string strategy;  // clustered strategies are split into -fpf and -kmeans rows
  double mean_pct = 0.0;
  double std_pct = 0.0;
  int instances = 0;  // successful instances
  int errors = 0;
  double runtime_ms = 0.0;  // mean per instance, only when record_runtime
  bool failed = false;      // more than 10% of the instances errored
};

struct ExperimentResult {
  std::vector<CellResult> cells;
  bool complete = true;  // false when cancelled
  int failed_cells = 0;
};

/// Runs every (n, m) cell. Instances use substream seeds derived from
/// (seed, cell index, instance index) and are reduced in that order, so the
/// output does not depend on the thread count.
ExperimentResult run_experiment(const ExperimentConfig& config, const std::atomic<bool>* cancel = nullptr);

/// family,n,m,strategy,mean_pct,std_pct,instances,errors,runtime_ms; a final
/// INCOMPLETE line marks a cancelled run.
void write_results_csv(std::ostream& out, const ExperimentConfig& config, const ExperimentResult& result);

/// `requested` capped by FACTOR_PRICE_THREADS when set. Throws ArgumentError
/// on a malformed value.
int cap_thread_count(int requested);

}  // namespace factorprice
