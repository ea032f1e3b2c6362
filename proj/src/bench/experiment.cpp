#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <cstdio>
#include <optional>
#include <ostream>
#include <thread>

#include "factorprice/bench.hpp"
#include "factorprice/clustering.hpp"
#include "factorprice/errors.hpp"
#include "factorprice/market_io.hpp"
#include "factorprice/pricing.hpp"

namespace factorprice {

using nlohmann::json;

namespace {

const std::vector<std::string> kStrategies = {"uniform",         "economic",           "robust",           "linear",
                                              "nonpersonalized", "clustered-economic", "clustered-robust"};

constexpr double kMaxErrorFraction = 0.10;

// One output row per column; clustered strategies expand into two.
std::vector<std::string> expand_columns(const std::vector<std::string>& strategies) {
  std::vector<std::string> out;
  for (const auto& s : strategies) {
    if (s.rfind("clustered-", 0) == 0) {
      out.push_back(s + "-fpf");
      out.push_back(s + "-kmeans");
    } else {
      out.push_back(s);
    }
  }
  return out;
}

struct InstanceOutcome {
  bool done = false;
  std::string error;
  std::vector<double> pct;
  std::vector<double> ms;
};

class InstanceRunner {
 public:
  InstanceRunner(const ExperimentConfig& config, int n, int m, std::uint64_t seed)
      : config_(config), rng_(seed), market_(generate_instance(config.family, n, m, rng_)),
        ps_(personalized_optimize(market_)), kmeans_seed_(rng_.next()) {}

  double profit(const std::string& column) {
    const FactorOptions options{.personalized = &ps_, .grid_points = config_.grid_points};
    if (column == "uniform") return factor_optimize(market_, Vector::Ones(market_.n()), options).profit;
    if (column == "economic") return factor_optimize(market_, economic_factor(ps_), options).profit;
    if (column == "robust") return factor_optimize(market_, robust_factor(ps_).f, options).profit;
    if (column == "linear") return factor_optimize(market_, linear_schedule_factor(market_.n()), options).profit;
    if (column == "nonpersonalized") {
      return nonpersonalized_heuristic(market_, {.grid_points = config_.grid_points}).profit;
    }
    const FactorKind kind = column.find("-economic-") != std::string::npos ? FactorKind::kEconomic : FactorKind::kRobust;
    const bool fpf = column.ends_with("-fpf");
    return clustered_factor_profit(market_, ps_, fpf ? fpf_partition() : kmeans_partition(), kind, config_.grid_points);
  }

  double personalized() const { return ps_.aggregate; }
  const MarketInstance& market() const { return market_; }

 private:
  int k() const { return std::min(config_.K, market_.m()); }

  const ClusterPartition& fpf_partition() {
    if (!fpf_) fpf_ = fpf_cluster(ps_, k());
    return *fpf_;
  }

  const ClusterPartition& kmeans_partition() {
    if (!kmeans_) {
      KMeansOptions options{.max_iters = config_.kmeans_max_iters, .seed = kmeans_seed_, .log_space = config_.kmeans_log_space};
      kmeans_ = kmeans_cluster(ps_, k(), options).partition;
    }
    return *kmeans_;
  }

  const ExperimentConfig& config_;
  Rng rng_;
  MarketInstance market_;
  PersonalizedSolution ps_;
  std::uint64_t kmeans_seed_;
  std::optional<ClusterPartition> fpf_;
  std::optional<ClusterPartition> kmeans_;
};

void dump_instance(const ExperimentConfig& config, const MarketInstance& market, std::size_t cell, std::size_t instance) {
  std::optional<BundleMarket> bundles;
  std::string kind = model_kind_of(market);
  if (config.family == Family::kNonlinear) {
    kind = "bundle";
    bundles = BundleMarket::size_indexed(market.n(), market);
  }
  const MarketDocument doc{kind, market, std::move(bundles)};
  char name[96];
  std::snprintf(name, sizeof name, "cell%03zu_n%d_m%d_i%03zu.json", cell, market.n(), market.m(), instance);
  write_market_file(std::filesystem::path(config.dump_dir) / name, doc);
}

InstanceOutcome run_instance(const ExperimentConfig& config, const std::vector<std::string>& columns, int n, int m,
                             std::size_t cell, std::size_t instance) {
  using Clock = std::chrono::steady_clock;
  InstanceOutcome out;
  try {
    InstanceRunner runner(config, n, m, derive_seed(config.seed, {cell, instance}));
    if (!config.dump_dir.empty()) dump_instance(config, runner.market(), cell, instance);
    const double best = runner.personalized();
    if (!(best > 0.0)) throw DegenerateMarketError("personalized profit is zero");
    for (const auto& column : columns) {
      const auto start = Clock::now();
      const double profit = runner.profit(column);
      const auto stop = Clock::now();
      out.pct.push_back(100.0 * profit / best);
      out.ms.push_back(std::chrono::duration<double, std::milli>(stop - start).count());
    }
  } catch (const std::exception& e) {
    out.error = e.what();
    out.pct.clear();
    out.ms.clear();
  }
  out.done = true;
  return out;
}

std::vector<int> int_list(const json& v, const std::string& field) {
  if (!v.is_array() || v.empty()) throw ArgumentError("config field " + field + ": expected a nonempty array");
  std::vector<int> out;
  for (const auto& x : v) {
    if (!x.is_number_integer()) throw ArgumentError("config field " + field + ": expected integers");
    out.push_back(x.get<int>());
  }
  return out;
}

}  // namespace

std::string to_string(Family family) {
  switch (family) {
    case Family::kLinear:
      return "linear";
    case Family::kLinearCluster:
      return "linear-cluster";
    case Family::kLcmnl:
      return "lcmnl";
    case Family::kLcmnlCluster:
      return "lcmnl-cluster";
    case Family::kNonlinear:
      return "nonlinear";
  }
  return "unknown";
}

Family parse_family(const std::string& name) {
  static const std::map<std::string, Family> kNames = {{"linear", Family::kLinear},
                                                       {"linear-cluster", Family::kLinearCluster},
                                                       {"lcmnl", Family::kLcmnl},
                                                       {"lcmnl-cluster", Family::kLcmnlCluster},
                                                       {"nonlinear", Family::kNonlinear}};
  auto it = kNames.find(name);
  if (it == kNames.end()) throw ArgumentError("unknown family \"" + name + "\"");
  return it->second;
}

MarketInstance generate_instance(Family family, int n, int m, Rng& rng) {
  switch (family) {
    case Family::kLinear:
    case Family::kLinearCluster:
      return gen_linear_instance(n, m, rng);
    case Family::kLcmnl:
    case Family::kLcmnlCluster:
      return gen_lcmnl_instance(n, m, rng);
    case Family::kNonlinear:
      return gen_nonlinear_instance(n, m, rng);
  }
  throw ArgumentError("unknown family");
}

void validate(const ExperimentConfig& config) {
  if (config.n_values.empty() || config.m_values.empty()) throw ArgumentError("config: n_values and m_values are required");
  for (int n : config.n_values) {
    if (n < 1) throw ArgumentError("config: every n must be at least 1");
  }
  for (int m : config.m_values) {
    if (m < 1) throw ArgumentError("config: every m must be at least 1");
  }
  if (config.instances_per_cell < 1) throw ArgumentError("config: instances_per_cell must be at least 1");
  if (config.strategies.empty()) throw ArgumentError("config: at least one strategy is required");
  for (const auto& s : config.strategies) {
    if (std::find(kStrategies.begin(), kStrategies.end(), s) == kStrategies.end()) {
      throw ArgumentError("config: unknown strategy \"" + s + "\"");
    }
    if (s == "linear" && config.family != Family::kNonlinear) {
      throw ArgumentError("config: strategy \"linear\" needs the nonlinear family");
    }
  }
  if (config.K < 1) throw ArgumentError("config: K must be at least 1");
  if (config.grid_points < 2) throw ArgumentError("config: grid_points must be at least 2");
  if (config.threads < 1) throw ArgumentError("config: threads must be at least 1");
  if (config.kmeans_max_iters < 1) throw ArgumentError("config: kmeans_max_iters must be at least 1");
}

ExperimentConfig parse_experiment_config(const json& doc) {
  if (!doc.is_object()) throw ArgumentError("config: expected a JSON object");
  static const std::vector<std::string> kKnown = {"family",  "n_values", "m_values",         "instances_per_cell",
                                                  "seed",    "strategies", "K",              "grid_points",
                                                  "threads", "kmeans_max_iters", "kmeans_log_space", "record_runtime",
                                                  "dump_dir"};
  for (const auto& [key, value] : doc.items()) {
    if (std::find(kKnown.begin(), kKnown.end(), key) == kKnown.end()) {
      throw ArgumentError("config: unknown field \"" + key + "\"");
    }
  }
  ExperimentConfig config;
  try {
    if (!doc.contains("family")) throw ArgumentError("config field family: missing");
    config.family = parse_family(doc.at("family").get<std::string>());
    config.n_values = int_list(doc.at("n_values"), "n_values");
    config.m_values = int_list(doc.at("m_values"), "m_values");
    if (doc.contains("instances_per_cell")) config.instances_per_cell = doc["instances_per_cell"].get<int>();
    if (doc.contains("seed")) config.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("strategies")) {
      config.strategies = doc["strategies"].get<std::vector<std::string>>();
    } else {
      config.strategies = experiment_preset(to_string(config.family)).strategies;
    }
    if (doc.contains("K")) config.K = doc["K"].get<int>();
    if (doc.contains("grid_points")) config.grid_points = doc["grid_points"].get<int>();
    if (doc.contains("threads")) config.threads = doc["threads"].get<int>();
    if (doc.contains("kmeans_max_iters")) config.kmeans_max_iters = doc["kmeans_max_iters"].get<int>();
    if (doc.contains("kmeans_log_space")) config.kmeans_log_space = doc["kmeans_log_space"].get<bool>();
    if (doc.contains("record_runtime")) config.record_runtime = doc["record_runtime"].get<bool>();
    if (doc.contains("dump_dir")) config.dump_dir = doc["dump_dir"].get<std::string>();
  } catch (const json::exception& e) {
    throw ArgumentError(std::string("config: ") + e.what());
  }
  validate(config);
  return config;
}

ExperimentConfig read_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open config file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ArgumentError(path.string() + ": " + e.what());
  }
  return parse_experiment_config(doc);
}

json to_json(const ExperimentConfig& config) {
  return json{{"family", to_string(config.family)},
              {"n_values", config.n_values},
              {"m_values", config.m_values},
              {"instances_per_cell", config.instances_per_cell},
              {"seed", config.seed},
              {"strategies", config.strategies},
              {"K", config.K},
              {"grid_points", config.grid_points},
              {"threads", config.threads},
              {"kmeans_max_iters", config.kmeans_max_iters},
              {"kmeans_log_space", config.kmeans_log_space},
              {"record_runtime", config.record_runtime},
              {"dump_dir", config.dump_dir}};
}

std::vector<std::string> preset_names() { return {"linear", "linear-cluster", "lcmnl", "lcmnl-cluster", "nonlinear"}; }

ExperimentConfig experiment_preset(const std::string& name) {
  ExperimentConfig c;
  c.family = parse_family(name);
  c.seed = 20210917;
  switch (c.family) {
    case Family::kLinear:
      c.n_values = {2, 5, 10};
      c.m_values = {2, 4, 6};
      c.strategies = {"uniform", "economic", "robust", "nonpersonalized"};
      break;
    case Family::kLinearCluster:
      c.n_values = {2, 5, 10};
      c.m_values = {6};
      c.strategies = {"economic", "robust", "clustered-economic", "clustered-robust"};
      break;
    case Family::kLcmnl:
      c.n_values = {5, 10, 20};
      c.m_values = {2, 4, 6};
      c.strategies = {"uniform", "economic", "robust"};
      break;
    case Family::kLcmnlCluster:
      c.n_values = {5, 10, 20};
      c.m_values = {6};
      c.strategies = {"economic", "robust", "clustered-economic", "clustered-robust"};
      break;
    case Family::kNonlinear:
      c.n_values = {10, 30, 50};
      c.m_values = {2, 4, 6};
      c.strategies = {"linear", "economic", "robust", "nonpersonalized"};
      break;
  }
  return c;
}

ExperimentResult run_experiment(const ExperimentConfig& config, const std::atomic<bool>* cancel) {
  validate(config);
  const auto columns = expand_columns(config.strategies);
  const auto cells = config.n_values.size() * config.m_values.size();
  const auto per_cell = static_cast<std::size_t>(config.instances_per_cell);
  const std::size_t tasks = cells * per_cell;

  if (!config.dump_dir.empty()) std::filesystem::create_directories(config.dump_dir);
  std::vector<InstanceOutcome> outcomes(tasks);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    while (true) {
      if (cancel != nullptr && cancel->load()) return;
      const std::size_t t = next.fetch_add(1);
      if (t >= tasks) return;
      const std::size_t cell = t / per_cell;
      const std::size_t instance = t % per_cell;
      const int n = config.n_values[cell / config.m_values.size()];
      const int m = config.m_values[cell % config.m_values.size()];
      outcomes[t] = run_instance(config, columns, n, m, cell, instance);
    }
  };
  const int threads = std::max(1, std::min<int>(config.threads, static_cast<int>(tasks)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int k = 0; k < threads; ++k) pool.emplace_back(worker);
  }

  ExperimentResult result;
  for (std::size_t cell = 0; cell < cells; ++cell) {
    const auto begin = outcomes.begin() + static_cast<std::ptrdiff_t>(cell * per_cell);
    const auto end = begin + static_cast<std::ptrdiff_t>(per_cell);
    if (!std::all_of(begin, end, [](const InstanceOutcome& o) { return o.done; })) {
      result.complete = false;
      break;
    }
    int errors = 0;
    for (auto it = begin; it != end; ++it) errors += it->error.empty() ? 0 : 1;
    const bool failed = errors > kMaxErrorFraction * static_cast<double>(per_cell);
    result.failed_cells += failed ? 1 : 0;
    for (std::size_t c = 0; c < columns.size(); ++c) {
      CellResult row;
      row.n = config.n_values[cell / config.m_values.size()];
      row.m = config.m_values[cell % config.m_values.size()];
      row.strategy = columns[c];
      row.errors = errors;
      row.failed = failed;
      double sum = 0.0;
      double ms = 0.0;
      for (auto it = begin; it != end; ++it) {
        if (!it->error.empty()) continue;
        ++row.instances;
        sum += it->pct[c];
        ms += it->ms[c];
      }
      if (row.instances > 0) {
        row.mean_pct = sum / row.instances;
        row.runtime_ms = ms / row.instances;
        double sq = 0.0;
        for (auto it = begin; it != end; ++it) {
          if (it->error.empty()) sq += (it->pct[c] - row.mean_pct) * (it->pct[c] - row.mean_pct);
        }
        row.std_pct = row.instances > 1 ? std::sqrt(sq / (row.instances - 1)) : 0.0;
      }
      result.cells.push_back(std::move(row));
    }
  }
  return result;
}

void write_results_csv(std::ostream& out, const ExperimentConfig& config, const ExperimentResult& result) {
  out << "family,n,m,strategy,mean_pct,std_pct,instances,errors,runtime_ms\n";
  char buf[64];
  for (const auto& row : result.cells) {
    out << to_string(config.family) << ',' << row.n << ',' << row.m << ',' << row.strategy << ',';
    if (row.failed || row.instances == 0) {
      out << "nan,nan,";
    } else {
      std::snprintf(buf, sizeof buf, "%.6f,%.6f,", row.mean_pct, row.std_pct);
      out << buf;
    }
    out << row.instances << ',' << row.errors << ',';
    if (config.record_runtime) {
      std::snprintf(buf, sizeof buf, "%.3f", row.runtime_ms);
      out << buf;
    } else {
      out << "NA";
    }
    out << '\n';
  }
  if (!result.complete) out << "INCOMPLETE\n";
}

int cap_thread_count(int requested) {
  const char* env = std::getenv("FACTOR_PRICE_THREADS");
  if (env == nullptr || *env == '\0') return requested;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || v < 1 || v > 1024) {
    throw ArgumentError(std::string("FACTOR_PRICE_THREADS must be an integer in [1, 1024], got '") + env + "'");
  }
  return std::min(requested, static_cast<int>(v));
}

}  // namespace factorprice
