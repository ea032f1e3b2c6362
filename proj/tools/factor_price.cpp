// Command-line front end: instance generation, pricing, bounds, assumption
// checks, clustering, the tightness oracle and batch experiments.

#include <atomic>
#include <csignal>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "factorprice/bench.hpp"
#include "factorprice/clustering.hpp"
#include "factorprice/errors.hpp"
#include "factorprice/guarantees.hpp"
#include "factorprice/market_io.hpp"
#include "factorprice/pricing.hpp"

namespace fp = factorprice;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitNumeric = 2;

std::atomic<bool> g_interrupted{false};

extern "C" void on_sigint(int) { g_interrupted.store(true); }

std::string join(const fp::Vector& v, const char* sep = ";") {
  std::ostringstream os;
  os << std::setprecision(10);
  for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? sep : "") << v(i);
  return os.str();
}

fp::Vector read_factor_file(const std::string& path, int n) {
  std::ifstream in(path);
  if (!in) throw fp::ModelError("cannot open factor file " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw fp::ModelError(path + ": " + e.what());
  }
  const json& arr = doc.is_object() ? doc.at("f") : doc;
  if (!arr.is_array() || static_cast<int>(arr.size()) != n) {
    throw fp::ModelError(path + ": field f: expected an array of " + std::to_string(n) + " numbers");
  }
  fp::Vector f(n);
  for (int i = 0; i < n; ++i) {
    if (!arr[static_cast<std::size_t>(i)].is_number()) {
      throw fp::ModelError(path + ": field f[" + std::to_string(i) + "]: expected a number");
    }
    f(i) = arr[static_cast<std::size_t>(i)].get<double>();
    if (!(f(i) > 0.0)) throw fp::ModelError(path + ": field f[" + std::to_string(i) + "]: must be positive");
  }
  return f;
}

void write_factor_file(const std::string& path, const fp::FactorResult& r) {
  std::ofstream out(path);
  if (!out) throw fp::ModelError("cannot write factor file " + path);
  json f = json::array();
  for (Eigen::Index i = 0; i < r.f.size(); ++i) f.push_back(r.f(i));
  out << json{{"f", f}, {"q_star", r.q_star}, {"profit", r.profit}}.dump(2) << '\n';
}

// Resolves a factor name against a market.
fp::Vector resolve_factor(const std::string& name, const std::string& factor_file, const fp::MarketDocument& doc,
                          const fp::PersonalizedSolution& ps) {
  const int n = doc.market.n();
  if (name == "e" || name == "uniform") return fp::Vector::Ones(n);
  if (name == "economic") return fp::economic_factor(ps);
  if (name == "robust") return fp::robust_factor(ps).f;
  if (name == "linear") {
    if (!doc.bundles) throw fp::ArgumentError("factor \"linear\" needs a bundle instance");
    return fp::bundle_size_factor(*doc.bundles, [](int s) { return static_cast<double>(s); });
  }
  if (name == "file" || name == "factor") {
    if (factor_file.empty()) throw fp::ArgumentError("--factor-file is required");
    return read_factor_file(factor_file, n);
  }
  throw fp::ArgumentError("unknown factor \"" + name + "\"");
}

struct Table {
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }

  void print(std::ostream& out) const {
    std::vector<std::size_t> width;
    for (const auto& r : rows) {
      width.resize(std::max(width.size(), r.size()), 0);
      for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
    }
    for (const auto& r : rows) {
      for (std::size_t c = 0; c < r.size(); ++c) {
        out << std::left << std::setw(static_cast<int>(width[c]) + (c + 1 < r.size() ? 2 : 0)) << r[c];
      }
      out << '\n';
    }
  }
};

std::string num(double v, int precision = 6) {
  std::ostringstream os;
  os << std::setprecision(precision) << v;
  return os.str();
}

// ---- subcommands -----------------------------------------------------------

struct GenerateArgs {
  std::string family = "linear";
  int n = 3;
  int m = 2;
  std::uint64_t seed = 1;
  std::string out;
};

int run_generate(const GenerateArgs& a) {
  fp::Rng rng(fp::derive_seed(a.seed, {static_cast<std::uint64_t>(a.n), static_cast<std::uint64_t>(a.m)}));
  const fp::Family family = fp::parse_family(a.family);
  fp::MarketInstance market = fp::generate_instance(family, a.n, a.m, rng);
  std::optional<fp::BundleMarket> bundles;
  std::string kind = fp::model_kind_of(market);
  if (family == fp::Family::kNonlinear) {
    kind = "bundle";
    bundles = fp::BundleMarket::size_indexed(a.n, market);
  }
  const fp::MarketDocument doc{kind, std::move(market), std::move(bundles)};
  if (a.out.empty()) {
    std::cout << fp::to_json(doc).dump(2) << '\n';
  } else {
    fp::write_market_file(a.out, doc);
    std::cout << "wrote " << a.out << '\n';
  }
  return kExitOk;
}

struct PriceArgs {
  std::string instance;
  std::string strategy = "personalized";
  std::string factor_file;
  std::optional<double> q_min;
  std::optional<double> q_max;
  int grid = 2000;
  std::string save_factor;
  bool csv = false;
};

int run_price(const PriceArgs& a) {
  const fp::MarketDocument doc = fp::read_market_file(a.instance);
  const fp::PersonalizedSolution ps = fp::personalized_optimize(doc.market);
  std::string strategy = a.strategy;
  if (!a.factor_file.empty() && strategy == "personalized") strategy = "factor";

  if (strategy == "personalized") {
    if (a.csv) {
      std::cout << "segment,theta,profit,prices\n";
      for (int j = 0; j < ps.m(); ++j) {
        std::cout << j << ',' << num(ps.thetas[j], 17) << ',' << num(ps.profits[j], 17) << ',' << join(ps.prices[j]) << '\n';
      }
      std::cout << "aggregate,1," << num(ps.aggregate, 17) << ",\n";
      return kExitOk;
    }
    Table t;
    t.add({"segment", "theta", "profit", "prices"});
    for (int j = 0; j < ps.m(); ++j) t.add({std::to_string(j), num(ps.thetas[j]), num(ps.profits[j]), join(ps.prices[j], " ")});
    t.print(std::cout);
    std::cout << "personalized profit " << num(ps.aggregate, 10) << '\n';
    return kExitOk;
  }

  if (strategy == "nonpersonalized") {
    const fp::HeuristicResult r = fp::nonpersonalized_heuristic(doc.market, {.grid_points = a.grid});
    if (a.csv) {
      std::cout << "strategy,profit,personalized_profit,pct,method,prices\n"
                << strategy << ',' << num(r.profit, 17) << ',' << num(ps.aggregate, 17) << ','
                << num(100.0 * r.profit / ps.aggregate, 10) << ',' << r.method << ',' << join(r.prices) << '\n';
      return kExitOk;
    }
    Table t;
    t.add({"strategy", strategy});
    t.add({"method", r.method});
    t.add({"prices", join(r.prices, " ")});
    t.add({"profit", num(r.profit, 10)});
    t.add({"personalized profit", num(ps.aggregate, 10)});
    t.add({"percent of personalized", num(100.0 * r.profit / ps.aggregate, 6)});
    t.print(std::cout);
    return kExitOk;
  }

  const fp::Vector f = resolve_factor(strategy, a.factor_file, doc, ps);
  fp::FactorOptions options{.personalized = &ps, .grid_points = a.grid};
  if (a.q_min || a.q_max) {
    if (!a.q_min || !a.q_max) throw fp::ArgumentError("--q-min and --q-max must be given together");
    options.q_range = fp::QRange{*a.q_min, *a.q_max};
  }
  const fp::FactorResult r = fp::factor_optimize(doc.market, f, options);
  if (!a.save_factor.empty()) write_factor_file(a.save_factor, r);
  if (a.csv) {
    std::cout << "strategy,q_star,profit,personalized_profit,pct,on_bracket_edge,factor,prices\n"
              << strategy << ',' << num(r.q_star, 17) << ',' << num(r.profit, 17) << ',' << num(ps.aggregate, 17) << ','
              << num(100.0 * r.profit / ps.aggregate, 10) << ',' << (r.on_bracket_edge ? 1 : 0) << ',' << join(r.f)
              << ',' << join(r.q_star * r.f) << '\n';
    return kExitOk;
  }
  Table t;
  t.add({"strategy", strategy});
  t.add({"factor", join(r.f, " ")});
  t.add({"q*", num(r.q_star, 10)});
  t.add({"prices", join(r.q_star * r.f, " ")});
  t.add({"profit", num(r.profit, 10)});
  t.add({"personalized profit", num(ps.aggregate, 10)});
  t.add({"percent of personalized", num(100.0 * r.profit / ps.aggregate, 6)});
  t.print(std::cout);
  if (r.on_bracket_edge) std::cout << "warning: optimum at the edge of the search bracket\n";
  return kExitOk;
}

struct BoundArgs {
  std::string instance;
  std::string factor = "e";
  std::string factor_file;
  int a1_grid = 2000;
  int grid = 2000;
  bool csv = false;
};

int run_bound(const BoundArgs& a) {
  const fp::MarketDocument doc = fp::read_market_file(a.instance);
  const fp::PersonalizedSolution ps = fp::personalized_optimize(doc.market);
  const fp::Vector f = resolve_factor(a.factor, a.factor_file, doc, ps);
  const fp::FactorResult r = fp::factor_optimize(doc.market, f, {.personalized = &ps, .grid_points = a.grid});
  fp::BoundReport report = fp::compute_bound(ps, f, r);
  if (a.a1_grid > 0) {
    report = fp::compute_bound(ps, f, r, fp::check_a1(doc.market, ps, f, {.grid_size = a.a1_grid}));
  }
  const std::string violation = report.a1_violation_q ? num(*report.a1_violation_q, 10) : "";
  if (a.csv) {
    std::cout << "factor,q_min,q_max,rho,beta,a1,a1_violation_q,personalized_profit,factor_profit,observed_ratio\n"
              << a.factor << ',' << num(report.q_min, 17) << ',' << num(report.q_max, 17) << ','
              << num(report.rho, 17) << ',' << num(report.beta, 17) << ',' << fp::to_string(report.a1) << ','
              << violation << ',' << num(report.personalized_profit, 17) << ',' << num(report.factor_profit, 17)
              << ',' << num(report.observed_ratio, 17) << '\n';
    return kExitOk;
  }
  Table t;
  t.add({"factor", a.factor});
  t.add({"q_min", num(report.q_min, 10)});
  t.add({"q_max", num(report.q_max, 10)});
  t.add({"rho", num(report.rho, 10)});
  t.add({"beta", num(report.beta, 10)});
  t.add({"A1", fp::to_string(report.a1) + (violation.empty() ? "" : " at q = " + violation)});
  t.add({"personalized profit", num(report.personalized_profit, 10)});
  t.add({"factor profit", num(report.factor_profit, 10)});
  t.add({"observed ratio", num(report.observed_ratio, 10)});
  t.print(std::cout);
  return kExitOk;
}

struct CheckArgs {
  std::string instance;
  std::string factor = "e";
  std::string factor_file;
  int grid = 2000;
  std::string dump_gh;
  bool csv = false;
};

int run_check(const CheckArgs& a) {
  const fp::MarketDocument doc = fp::read_market_file(a.instance);
  const fp::PersonalizedSolution ps = fp::personalized_optimize(doc.market);
  const fp::Vector f = resolve_factor(a.factor, a.factor_file, doc, ps);
  const fp::A1Profile profile = fp::check_a1(doc.market, ps, f, {.grid_size = a.grid});
  if (!a.dump_gh.empty()) {
    std::ofstream out(a.dump_gh);
    if (!out) throw fp::ModelError("cannot write " + a.dump_gh);
    fp::write_a1_csv(out, profile);
  }
  std::vector<fp::Vector> probes = ps.prices;
  const double q_min = price_ratio_spread(ps, f) > 0 ? fp::A1Evaluator(doc.market, ps, f).q_min() : 1.0;
  probes.push_back(q_min * f);
  const std::string violation = profile.violation ? num(*profile.violation, 10) : "";
  if (a.csv) {
    std::cout << "check,segment,result,detail\n";
    std::cout << "A1,all," << fp::to_string(profile.status()) << ',' << violation << '\n';
    for (int j = 0; j < doc.market.m(); ++j) {
      const auto r = fp::check_p1_p2(doc.market.segment(j).model, f, probes);
      std::cout << "P1," << j << ',' << (r.p1 ? "pass" : "fail") << ",\n";
      std::cout << "P2," << j << ',' << (r.p2 ? "pass" : "fail") << ',' << r.detail << '\n';
    }
    return kExitOk;
  }
  Table t;
  t.add({"check", "segment", "result", "detail"});
  t.add({"A1", "all", fp::to_string(profile.status()), violation.empty() ? profile.note : "first violation q = " + violation});
  for (int j = 0; j < doc.market.m(); ++j) {
    const auto r = fp::check_p1_p2(doc.market.segment(j).model, f, probes);
    t.add({"P1", std::to_string(j), r.p1 ? "pass" : "fail", ""});
    t.add({"P2", std::to_string(j), r.p2 ? "pass" : "fail", r.detail});
  }
  t.print(std::cout);
  return kExitOk;
}

struct ClusterArgs {
  std::string instance;
  int k = 2;
  std::string method = "fpf";
  std::uint64_t seed = 1;
  int max_iters = 100;
  bool log_space = false;
  std::string out;
  int grid = 2000;
  bool csv = false;
};

int run_cluster(const ClusterArgs& a) {
  const fp::MarketDocument doc = fp::read_market_file(a.instance);
  const fp::PersonalizedSolution ps = fp::personalized_optimize(doc.market);
  fp::ClusterPartition partition;
  if (a.method == "fpf") {
    partition = fp::fpf_cluster(ps, a.k);
  } else if (a.method == "kmeans") {
    partition = fp::kmeans_cluster(ps, a.k, {.max_iters = a.max_iters, .seed = a.seed, .log_space = a.log_space}).partition;
  } else {
    throw fp::ArgumentError("--method must be fpf or kmeans");
  }
  if (!a.out.empty()) {
    std::ofstream out(a.out);
    if (!out) throw fp::ModelError("cannot write " + a.out);
    fp::write_partition_csv(out, partition);
  }
  if (a.csv) {
    fp::write_partition_csv(std::cout, partition);
  } else {
    Table t;
    t.add({"cluster", "members", "weight", "rho*", "beta"});
    for (int c = 0; c < partition.k(); ++c) {
      const auto& cl = partition.clusters[static_cast<std::size_t>(c)];
      std::string members;
      for (int j : cl.members) members += (members.empty() ? "" : " ") + std::to_string(j);
      t.add({std::to_string(c), members, num(cl.weight), num(cl.rho_star), num(1.0 + std::log(cl.rho_star))});
    }
    t.print(std::cout);
    std::cout << "worst rho* " << num(partition.worst_rho, 10) << "  (beta " << num(1.0 + std::log(partition.worst_rho), 10)
              << ")\n";
  }
  Table profits;
  profits.add({"clustered factor", "profit", "percent of personalized"});
  for (auto kind : {fp::FactorKind::kEconomic, fp::FactorKind::kRobust, fp::FactorKind::kUniform}) {
    const double p = fp::clustered_factor_profit(doc.market, ps, partition, kind, a.grid);
    profits.add({fp::to_string(kind), num(p, 10), num(100.0 * p / ps.aggregate, 6)});
  }
  (a.csv ? std::cerr : std::cout) << '\n';
  profits.print(a.csv ? std::cerr : std::cout);
  return kExitOk;
}

struct TightnessArgs {
  double rho = 2.0;
  int steps = 100000;
  bool csv = false;
};

int run_tightness(const TightnessArgs& a) {
  const fp::TightnessResult r = fp::tightness_oracle(a.rho, a.steps);
  if (a.csv) {
    std::cout << "rho,personalized,uniform,ratio,density_integral\n"
              << num(a.rho, 17) << ',' << num(r.personalized, 17) << ',' << num(r.uniform, 17) << ','
              << num(r.ratio, 17) << ',' << num(r.density_integral, 17) << '\n';
    return kExitOk;
  }
  Table t;
  t.add({"rho", num(a.rho, 10)});
  t.add({"personalized", num(r.personalized, 10)});
  t.add({"uniform", num(r.uniform, 10)});
  t.add({"ratio", num(r.ratio, 10)});
  t.add({"1 + ln rho", num(1.0 + std::log(a.rho), 10)});
  t.add({"density integral", num(r.density_integral, 10)});
  t.print(std::cout);
  return kExitOk;
}

struct ExperimentArgs {
  std::string config;
  std::string preset;
  std::string out;
  std::optional<int> threads;
  std::optional<std::uint64_t> seed;
  std::optional<int> instances;
  bool timing = false;
  std::string dump_dir;
};

int run_experiment_cmd(const ExperimentArgs& a) {
  if (a.config.empty() == a.preset.empty()) throw fp::ArgumentError("exactly one of --config or --preset is required");
  fp::ExperimentConfig config = a.config.empty() ? fp::experiment_preset(a.preset) : fp::read_experiment_config(a.config);
  config.threads = fp::cap_thread_count(a.threads ? *a.threads : config.threads);
  if (a.seed) config.seed = *a.seed;
  if (a.instances) config.instances_per_cell = *a.instances;
  if (a.timing) config.record_runtime = true;
  if (!a.dump_dir.empty()) config.dump_dir = a.dump_dir;
  fp::validate(config);

  std::signal(SIGINT, on_sigint);
  const fp::ExperimentResult result = fp::run_experiment(config, &g_interrupted);
  if (a.out.empty()) {
    fp::write_results_csv(std::cout, config, result);
  } else {
    std::ofstream out(a.out);
    if (!out) throw fp::ModelError("cannot write " + a.out);
    fp::write_results_csv(out, config, result);
    std::cerr << "wrote " << a.out << '\n';
  }
  if (!result.complete) {
    std::cerr << "interrupted: partial results written\n";
    return kExitValidation;
  }
  if (result.failed_cells > 0) {
    std::cerr << result.failed_cells << " cell(s) failed: more than 10% of instances errored\n";
    return kExitNumeric;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Single-factor and personalized multi-product pricing"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Write a random market instance");
  generate->add_option("--family", gen.family, "linear | lcmnl | nonlinear")
      ->check(CLI::IsMember({"linear", "lcmnl", "nonlinear"}));
  generate->add_option("--n", gen.n, "Products (bundle sizes for nonlinear)")->check(CLI::PositiveNumber);
  generate->add_option("--m", gen.m, "Segments")->check(CLI::PositiveNumber);
  generate->add_option("--seed", gen.seed, "Random seed");
  generate->add_option("--out,-o", gen.out, "Output file (stdout if omitted)");

  PriceArgs price;
  auto* price_cmd = app.add_subcommand("price", "Optimal prices for a strategy");
  price_cmd->add_option("--instance,-i", price.instance, "Market instance file")->required();
  price_cmd->add_option("--strategy", price.strategy, "Pricing strategy")
      ->check(CLI::IsMember({"personalized", "uniform", "economic", "robust", "linear", "nonpersonalized", "factor"}));
  price_cmd->add_option("--factor-file", price.factor_file, "JSON factor: [..] or {\"f\": [..]}");
  price_cmd->add_option("--q-min", price.q_min, "Lower end of the q constraint box");
  price_cmd->add_option("--q-max", price.q_max, "Upper end of the q constraint box");
  price_cmd->add_option("--grid", price.grid, "Grid points of the q scan")->check(CLI::Range(2, 10000000));
  price_cmd->add_option("--save-factor", price.save_factor, "Write the factor and q* as JSON");
  price_cmd->add_flag("--csv", price.csv, "Machine-readable output");

  BoundArgs bound;
  auto* bound_cmd = app.add_subcommand("bound", "Performance guarantee of a factor");
  bound_cmd->add_option("--instance,-i", bound.instance, "Market instance file")->required();
  bound_cmd->add_option("--factor", bound.factor, "e | economic | robust | linear | file")
      ->check(CLI::IsMember({"e", "economic", "robust", "linear", "file"}));
  bound_cmd->add_option("--factor-file", bound.factor_file, "JSON factor for --factor file");
  bound_cmd->add_option("--a1-grid", bound.a1_grid, "A1 grid size (0 skips the check)")->check(CLI::NonNegativeNumber);
  bound_cmd->add_option("--grid", bound.grid, "Grid points of the q scan")->check(CLI::Range(2, 10000000));
  bound_cmd->add_flag("--csv", bound.csv, "Machine-readable output");

  CheckArgs check;
  auto* check_cmd = app.add_subcommand("check", "Check A1 on a grid and P1/P2 per segment");
  check_cmd->add_option("--instance,-i", check.instance, "Market instance file")->required();
  check_cmd->add_option("--factor", check.factor, "Factor to check")->check(CLI::IsMember({"e", "economic", "robust", "linear", "file"}));
  check_cmd->add_option("--factor-file", check.factor_file, "JSON factor for --factor file");
  check_cmd->add_option("--grid", check.grid, "A1 grid size")->check(CLI::Range(2, 10000000));
  check_cmd->add_option("--dump-gh", check.dump_gh, "Write q,G,H as CSV");
  check_cmd->add_flag("--csv", check.csv, "Machine-readable output");

  ClusterArgs cluster;
  auto* cluster_cmd = app.add_subcommand("cluster", "Partition segments and report per-cluster bounds");
  cluster_cmd->add_option("--instance,-i", cluster.instance, "Market instance file")->required();
  cluster_cmd->add_option("--k", cluster.k, "Cluster count")->check(CLI::PositiveNumber);
  cluster_cmd->add_option("--method", cluster.method, "Clustering algorithm")->check(CLI::IsMember({"fpf", "kmeans"}));
  cluster_cmd->add_option("--seed", cluster.seed, "k-means seed");
  cluster_cmd->add_option("--max-iters", cluster.max_iters, "k-means iteration cap")->check(CLI::PositiveNumber);
  cluster_cmd->add_flag("--log-space", cluster.log_space, "k-means on log prices");
  cluster_cmd->add_option("--out,-o", cluster.out, "Partition CSV file");
  cluster_cmd->add_option("--grid", cluster.grid, "Grid points of the q scan")->check(CLI::Range(2, 10000000));
  cluster_cmd->add_flag("--csv", cluster.csv, "Machine-readable output");

  TightnessArgs tight;
  auto* tight_cmd = app.add_subcommand("tightness", "Market where the guarantee holds with equality");
  tight_cmd->add_option("--rho", tight.rho, "Price spread (> 1)")->required();
  tight_cmd->add_option("--steps", tight.steps, "Trapezoid panels")->check(CLI::Range(2, 100000000));
  tight_cmd->add_flag("--csv", tight.csv, "Machine-readable output");

  ExperimentArgs exp;
  auto* exp_cmd = app.add_subcommand("experiment", "Run a randomized experiment and write CSV");
  exp_cmd->add_option("--config,-c", exp.config, "JSON experiment config");
  exp_cmd->add_option("--preset", exp.preset, "Built-in experiment")->check(CLI::IsMember(fp::preset_names()));
  exp_cmd->add_option("--out,-o", exp.out, "Results CSV (stdout if omitted)");
  exp_cmd->add_option("--threads", exp.threads, "Worker threads (default from config; FACTOR_PRICE_THREADS caps it)")
      ->check(CLI::PositiveNumber);
  exp_cmd->add_option("--seed", exp.seed, "Override the config seed");
  exp_cmd->add_option("--instances", exp.instances, "Instances per cell")->check(CLI::PositiveNumber);
  exp_cmd->add_flag("--timing", exp.timing, "Record runtime_ms (output is then not reproducible)");
  exp_cmd->add_option("--dump-dir", exp.dump_dir, "Write every generated instance to this directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitValidation;
  }

  try {
    if (*generate) return run_generate(gen);
    if (*price_cmd) return run_price(price);
    if (*bound_cmd) return run_bound(bound);
    if (*check_cmd) return run_check(check);
    if (*cluster_cmd) return run_cluster(cluster);
    if (*tight_cmd) return run_tightness(tight);
    if (*exp_cmd) return run_experiment_cmd(exp);
  } catch (const fp::ModelError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const fp::ArgumentError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const fp::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitValidation;
}
