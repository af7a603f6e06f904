#include "sbg/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "sbg/gp.hpp"

namespace sbg {

namespace {

constexpr std::uint64_t kInstanceStream = 0x1b873593ULL;

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

const std::vector<std::string> kKnownKeys = {
    "source",      "kernel",     "length_scale", "nu",
    "prior_variance", "n",       "m",            "instances",
    "game_file",   "algorithm",  "delta",        "epsilon",
    "lambda",      "round_cap",  "bt",           "runs",
    "base_seed",   "threads",    "out",          "k_list",
    "ref_points",  "smooth_a",   "smooth_b",     "spitfire_h_perp",
    "spitfire_h_f", "spitfire_v_a", "spitfire_v_d", "spitfire_ell"};

double to_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing junk");
    return v;
  } catch (const std::exception&) {
    throw parameter_error("config: bad number for " + key + ": " + value);
  }
}

long to_long(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing junk");
    return v;
  } catch (const std::exception&) {
    throw parameter_error("config: bad integer for " + key + ": " + value);
  }
}

std::vector<int> to_int_list(const std::string& key, const std::string& value) {
  std::vector<int> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(static_cast<int>(to_long(key, item)));
  }
  return out;
}

// Runs fn(0..total-1) on a small worker pool; task order is irrelevant for
// determinism because every task derives its own seed and writes its own
// output slot.
void parallel_for(int total, int threads, const std::function<void(int)>& fn) {
  if (threads <= 1 || total <= 1) {
    for (int i = 0; i < total; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (int i = next.fetch_add(1); i < total; i = next.fetch_add(1)) fn(i);
  };
  std::vector<std::thread> pool;
  const int width = std::min(threads, total);
  pool.reserve(static_cast<std::size_t>(width));
  for (int w = 0; w < width; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

KernelSpec kernel_from_config(const ExperimentConfig& config) {
  if (config.kernel == "se") {
    return KernelSpec::squared_exponential(config.length_scale,
                                           config.prior_variance);
  }
  if (config.kernel == "matern") {
    return KernelSpec::matern(config.length_scale, config.nu,
                              config.prior_variance);
  }
  throw parameter_error("config: unknown kernel " + config.kernel);
}

ProfileGrid rect_grid(int n, int m) {
  auto axis = [](int k) {
    std::vector<double> pts(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
      pts[static_cast<std::size_t>(i)] = static_cast<double>(i) / (k - 1);
    }
    return pts;
  };
  return ProfileGrid(axis(n), axis(m));
}

// Correctness follows the delta-PAC statement: the returned first-player
// strategy's true best-response value attains the maximin value.  The
// returned second-player index is not scored (the guarantee is about
// u(x_bar, y*(x_bar)), and near-tied cells inside the maximin row leave it
// undetermined at stopping time).
bool is_correct(const FiniteGame& truth, const MaximinResult& star,
                int x_index) {
  const double row_value = truth.u(x_index, best_response(truth, x_index));
  return std::abs(row_value - star.value) <= 1e-9;
}

SolverResult dispatch_solver(const ExperimentConfig& config,
                             const FiniteGame& truth, Simulator& sim,
                             std::uint64_t /*seed*/) {
  LucbOptions options;
  options.epsilon = config.epsilon;
  options.delta = config.delta;
  options.round_cap = config.round_cap;
  options.keep_query_log = false;
  if (config.bt == "corollary") {
    options.exploration = corollary_bt(truth.n(), truth.m(), config.delta);
  } else if (config.bt != "theorem") {
    throw parameter_error("config: unknown bt schedule " + config.bt);
  }

  if (config.algorithm == "m_gp_lucb") {
    return m_gp_lucb(sim, truth.grid, kernel_from_config(config), config.lambda,
                     options);
  }
  if (config.algorithm == "m_g_lucb") {
    return m_g_lucb(sim, truth.grid, config.lambda, config.prior_variance,
                    options);
  }
  if (config.algorithm == "m_lucb") {
    const double range = truth.table.max_value() - truth.table.min_value();
    return m_lucb(sim, truth.grid, range > 0.0 ? range : 1.0, options);
  }
  if (config.algorithm == "gp_se") {
    GpSeOptions se;
    se.keep_query_log = false;
    return gp_se(sim, truth.grid, kernel_from_config(config), config.lambda,
                 config.round_cap, se);
  }
  throw parameter_error("config: unknown algorithm " + config.algorithm);
}

}  // namespace

void ExperimentConfig::validate() const {
  if (source != "random_gp" && source != "spitfire" && source != "file") {
    throw parameter_error("config: unknown source " + source);
  }
  if (source == "file" && game_file.empty()) {
    throw parameter_error("config: source=file needs game_file");
  }
  if (algorithm != "m_gp_lucb" && algorithm != "gp_se" &&
      algorithm != "m_g_lucb" && algorithm != "m_lucb") {
    throw parameter_error("config: unknown algorithm " + algorithm);
  }
  kernel_from_config(*this).validate();
  if (n < 2 || m < 2) throw parameter_error("config: n, m must be >= 2");
  if (instances < 1) throw parameter_error("config: instances must be >= 1");
  if (runs < 1) throw parameter_error("config: runs must be >= 1");
  if (!(lambda > 0.0)) throw parameter_error("config: lambda must be positive");
  if (round_cap < 0) throw parameter_error("config: round_cap must be >= 0");
  if (ref_points < 2) throw parameter_error("config: ref_points must be >= 2");
  for (const int k : k_list) {
    if (k < 2) throw parameter_error("config: k_list entries must be >= 2");
  }
  if (threads < 1) throw parameter_error("config: threads must be >= 1");
  if (source == "spitfire") spitfire.validate();
}

ExperimentConfig parse_config(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw parameter_error("config: line " + std::to_string(line_no) +
                            " is not key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (std::find(kKnownKeys.begin(), kKnownKeys.end(), key) ==
        kKnownKeys.end()) {
      throw parameter_error("config: unknown key " + key);
    }
    kv[key] = value;
  }

  ExperimentConfig config;
  for (const auto& [key, value] : kv) {
    if (key == "source") config.source = value;
    else if (key == "kernel") config.kernel = value;
    else if (key == "length_scale") config.length_scale = to_double(key, value);
    else if (key == "nu") config.nu = to_double(key, value);
    else if (key == "prior_variance") config.prior_variance = to_double(key, value);
    else if (key == "n") config.n = static_cast<int>(to_long(key, value));
    else if (key == "m") config.m = static_cast<int>(to_long(key, value));
    else if (key == "instances") config.instances = static_cast<int>(to_long(key, value));
    else if (key == "game_file") config.game_file = value;
    else if (key == "algorithm") config.algorithm = value;
    else if (key == "delta") config.delta = to_double(key, value);
    else if (key == "epsilon") config.epsilon = to_double(key, value);
    else if (key == "lambda") config.lambda = to_double(key, value);
    else if (key == "round_cap") config.round_cap = to_long(key, value);
    else if (key == "bt") config.bt = value;
    else if (key == "runs") config.runs = static_cast<int>(to_long(key, value));
    else if (key == "base_seed") config.base_seed = static_cast<std::uint64_t>(to_long(key, value));
    else if (key == "threads") config.threads = static_cast<int>(to_long(key, value));
    else if (key == "out") config.out = value;
    else if (key == "k_list") config.k_list = to_int_list(key, value);
    else if (key == "ref_points") config.ref_points = static_cast<int>(to_long(key, value));
    else if (key == "smooth_a") config.smooth_a = to_double(key, value);
    else if (key == "smooth_b") config.smooth_b = to_double(key, value);
    else if (key == "spitfire_h_perp") config.spitfire.h_perp = to_double(key, value);
    else if (key == "spitfire_h_f") config.spitfire.h_f = to_double(key, value);
    else if (key == "spitfire_v_a") config.spitfire.v_a = to_double(key, value);
    else if (key == "spitfire_v_d") config.spitfire.v_d = to_double(key, value);
    else if (key == "spitfire_ell") config.spitfire.ell = to_double(key, value);
  }
  config.validate();
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parameter_error("cannot open config file: " + path);
  return parse_config(in);
}

FiniteGame sample_game_instance(const ExperimentConfig& config, int instance_id,
                                int* redraws) {
  const KernelSpec spec = kernel_from_config(config);
  const ProfileGrid grid = rect_grid(config.n, config.m);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const std::uint64_t seed =
        derive_seed(config.base_seed, kInstanceStream + static_cast<std::uint64_t>(instance_id),
                    static_cast<std::uint64_t>(attempt));
    FiniteGame game(grid, sample_utility(grid, spec, seed));
    if (is_nondegenerate(game)) {
      if (redraws != nullptr) *redraws = attempt;
      return game;
    }
    std::cerr << "instance " << instance_id
              << ": degenerate draw rejected (attempt " << attempt << ")\n";
  }
  throw numeric_error("could not sample a non-degenerate game instance");
}

FiniteGame true_game(const ExperimentConfig& config, int instance_id) {
  if (config.source == "random_gp") {
    return sample_game_instance(config, instance_id);
  }
  if (config.source == "spitfire") {
    const ProfileGrid grid = rect_grid(config.n, config.m);
    UtilityTable table(config.n, config.m);
    for (int i = 0; i < config.n; ++i) {
      for (int j = 0; j < config.m; ++j) {
        table.at(i, j) = expected_damage(config.spitfire, grid.x(i), grid.y(j));
      }
    }
    return FiniteGame(grid, std::move(table));
  }
  return load_game(config.game_file);
}

ExperimentOutput run_experiment(const ExperimentConfig& config) {
  config.validate();

  std::vector<FiniteGame> games;
  games.reserve(static_cast<std::size_t>(config.instances));
  for (int i = 0; i < config.instances; ++i) {
    games.push_back(true_game(config, i));
  }

  const int total = config.instances * config.runs;
  ExperimentOutput output;
  output.records.resize(static_cast<std::size_t>(total));

  parallel_for(total, config.threads, [&](int task) {
    const int instance = task / config.runs;
    const int run = task % config.runs;
    const FiniteGame& truth = games[static_cast<std::size_t>(instance)];
    const MaximinResult star = brute_force_maximin(truth);
    const std::uint64_t seed = derive_seed(
        config.base_seed, static_cast<std::uint64_t>(instance),
        static_cast<std::uint64_t>(run));

    RunRecord record;
    record.instance = instance;
    record.run = run;
    record.algorithm = config.algorithm;
    try {
      SolverResult result;
      if (config.source == "spitfire") {
        SpitfireSimulator sim(config.spitfire, seed);
        result = dispatch_solver(config, truth, sim, seed);
      } else {
        TableSimulator sim(truth, config.lambda, seed);
        result = dispatch_solver(config, truth, sim, seed);
      }
      record.rounds_used = result.rounds_used;
      record.terminated = result.terminated;
      record.x_index = result.x_index;
      record.y_index = result.y_index;
      record.correct = is_correct(truth, star, result.x_index);
      record.wall_seconds = result.wall_seconds;
    } catch (const std::exception& e) {
      record.failed = true;
      record.error = e.what();
    }
    output.records[static_cast<std::size_t>(task)] = std::move(record);
  });

  output.summary = summarize(output.records);
  return output;
}

EpsSweepOutput eps_sweep(const ExperimentConfig& config) {
  config.validate();
  if (config.k_list.empty()) {
    throw parameter_error("config: eps sweep needs a k_list");
  }

  // Reference (fine) game per instance.
  std::vector<FiniteGame> references;
  references.reserve(static_cast<std::size_t>(config.instances));
  for (int i = 0; i < config.instances; ++i) {
    if (config.source == "spitfire") {
      references.push_back(discretize(
          [&](double x, double y) {
            return expected_damage(config.spitfire, x, y);
          },
          config.ref_points));
    } else if (config.source == "random_gp") {
      ExperimentConfig fine = config;
      fine.n = config.ref_points;
      fine.m = config.ref_points;
      references.push_back(sample_game_instance(fine, i));
    } else {
      references.push_back(load_game(config.game_file));
    }
  }

  const int n_k = static_cast<int>(config.k_list.size());
  const int total = config.instances * n_k * config.runs;
  EpsSweepOutput output;
  output.records.resize(static_cast<std::size_t>(total));

  // Coarse truth tables.  Spitfire is genuinely continuous, so the coarse
  // grid evaluates the analytic oracle at its exact points (matching what
  // the simulator answers there); grid-backed sources only carry utilities
  // on the reference grid and use nearest-point lookup.
  std::vector<std::vector<FiniteGame>> coarse;
  coarse.reserve(references.size());
  for (const FiniteGame& ref : references) {
    std::vector<FiniteGame> per_k;
    per_k.reserve(static_cast<std::size_t>(n_k));
    for (const int k : config.k_list) {
      if (config.source == "spitfire") {
        per_k.push_back(discretize(
            [&config](double x, double y) {
              return expected_damage(config.spitfire, x, y);
            },
            k));
      } else {
        per_k.push_back(discretize(
            [&ref](double x, double y) {
              return ref.u(ref.grid.nearest_x(x), ref.grid.nearest_y(y));
            },
            k));
      }
    }
    coarse.push_back(std::move(per_k));
  }

  parallel_for(total, config.threads, [&](int task) {
    const int per_instance = n_k * config.runs;
    const int instance = task / per_instance;
    const int k_index = (task % per_instance) / config.runs;
    const int run = task % config.runs;
    const int k = config.k_list[static_cast<std::size_t>(k_index)];

    const FiniteGame& ref = references[static_cast<std::size_t>(instance)];
    const FiniteGame& truth =
        coarse[static_cast<std::size_t>(instance)][static_cast<std::size_t>(k_index)];
    const auto [dx, dy] = covering_distances(truth.grid.xs(), truth.grid.ys());

    EpsRunRecord record;
    record.instance = instance;
    record.k_eps = k;
    record.run = run;
    record.eps_theoretical = arbitrary_discretization_bound(
        config.delta, config.smooth_a, config.smooth_b, dx, dy);

    const std::uint64_t seed = derive_seed(
        config.base_seed,
        static_cast<std::uint64_t>(instance) * 1000 + static_cast<std::uint64_t>(k),
        static_cast<std::uint64_t>(run));
    try {
      SolverResult result;
      if (config.source == "spitfire") {
        SpitfireSimulator sim(config.spitfire, seed);
        result = dispatch_solver(config, truth, sim, seed);
      } else {
        TableSimulator sim(truth, config.lambda, seed);
        result = dispatch_solver(config, truth, sim, seed);
      }
      const MaximinResult star = brute_force_maximin(truth);
      record.rounds_used = result.rounds_used;
      record.terminated = result.terminated;
      record.correct = is_correct(truth, star, result.x_index);
      record.eps_hat = eps_hat(
          truth.grid.profile(result.x_index, result.y_index), ref);
    } catch (const std::exception&) {
      record.failed = true;
    }
    output.records[static_cast<std::size_t>(task)] = record;
  });

  for (int ki = 0; ki < n_k; ++ki) {
    EpsTableRow row;
    row.k_eps = config.k_list[static_cast<std::size_t>(ki)];
    double eps_sum = 0.0;
    long count = 0;
    for (const auto& record : output.records) {
      if (record.failed || record.k_eps != row.k_eps) continue;
      row.eps_theoretical = record.eps_theoretical;
      eps_sum += record.eps_hat;
      ++count;
    }
    row.eps_hat_mean = count > 0 ? eps_sum / static_cast<double>(count)
                                 : std::numeric_limits<double>::quiet_NaN();
    output.table.push_back(row);
  }
  return output;
}

std::vector<EpsTableRow> eps_table(const ExperimentConfig& config) {
  return eps_sweep(config).table;
}

ExperimentSummary summarize(const std::vector<RunRecord>& records) {
  ExperimentSummary summary;
  summary.n_runs = static_cast<long>(records.size());
  long ok = 0, ended = 0, with_correct = 0, correct = 0, with_eps = 0;
  double rounds_sum = 0.0, eps_sum = 0.0;
  for (const auto& record : records) {
    if (record.failed) {
      ++summary.n_failed;
      continue;
    }
    ++ok;
    if (record.terminated) {
      ++ended;
      rounds_sum += static_cast<double>(record.rounds_used);
    }
    if (record.correct.has_value()) {
      ++with_correct;
      if (*record.correct) ++correct;
    }
    if (record.eps_hat.has_value()) {
      ++with_eps;
      eps_sum += *record.eps_hat;
    }
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  summary.t_delta_mean = ended > 0 ? rounds_sum / static_cast<double>(ended) : nan;
  summary.pct_end = ok > 0 ? 100.0 * static_cast<double>(ended) / static_cast<double>(ok) : nan;
  summary.pct_opt = with_correct > 0
                        ? 100.0 * static_cast<double>(correct) / static_cast<double>(with_correct)
                        : nan;
  summary.eps_hat_mean = with_eps > 0 ? eps_sum / static_cast<double>(with_eps) : nan;
  return summary;
}

void write_records_csv(const std::vector<RunRecord>& records,
                       std::ostream& out) {
  out << "instance,run,algorithm,rounds_used,terminated,x_index,y_index,"
         "correct,eps_hat\n";
  for (const auto& r : records) {
    out << r.instance << ',' << r.run << ',' << r.algorithm << ','
        << r.rounds_used << ',' << (r.terminated ? 1 : 0) << ',' << r.x_index
        << ',' << r.y_index << ',';
    if (r.correct.has_value()) out << (*r.correct ? 1 : 0);
    out << ',';
    if (r.eps_hat.has_value()) out << format_double(*r.eps_hat);
    out << '\n';
  }
}

std::vector<RunRecord> read_records_csv(std::istream& in) {
  std::vector<RunRecord> records;
  std::string line;
  if (!std::getline(in, line)) return records;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    while (fields.size() < 9) fields.emplace_back("");
    RunRecord r;
    r.instance = static_cast<int>(to_long("instance", fields[0]));
    r.run = static_cast<int>(to_long("run", fields[1]));
    r.algorithm = fields[2];
    r.rounds_used = to_long("rounds_used", fields[3]);
    r.terminated = to_long("terminated", fields[4]) != 0;
    r.x_index = static_cast<int>(to_long("x_index", fields[5]));
    r.y_index = static_cast<int>(to_long("y_index", fields[6]));
    if (!fields[7].empty()) r.correct = to_long("correct", fields[7]) != 0;
    if (!fields[8].empty()) r.eps_hat = to_double("eps_hat", fields[8]);
    records.push_back(std::move(r));
  }
  return records;
}

std::string summary_to_json(const ExperimentSummary& summary) {
  nlohmann::json doc;
  const auto put = [&doc](const char* key, double value) {
    if (std::isfinite(value)) {
      doc[key] = value;
    } else {
      doc[key] = nullptr;
    }
  };
  put("t_delta_mean", summary.t_delta_mean);
  put("pct_end", summary.pct_end);
  put("pct_opt", summary.pct_opt);
  put("eps_hat_mean", summary.eps_hat_mean);
  doc["n_runs"] = summary.n_runs;
  doc["n_failed"] = summary.n_failed;
  return doc.dump(2);
}

void write_eps_csv(const std::vector<EpsTableRow>& rows, std::ostream& out) {
  out << "k_eps,eps,eps_hat\n";
  for (const auto& row : rows) {
    out << row.k_eps << ',' << format_double(row.eps_theoretical) << ','
        << format_double(row.eps_hat_mean) << '\n';
  }
}

void write_eps_run_csv(const std::vector<EpsRunRecord>& records,
                       std::ostream& out) {
  out << "run,k_eps,eps_theoretical,eps_hat,rounds,terminated\n";
  for (const auto& r : records) {
    out << r.run << ',' << r.k_eps << ',' << format_double(r.eps_theoretical)
        << ',' << format_double(r.eps_hat) << ',' << r.rounds_used << ','
        << (r.terminated ? 1 : 0) << '\n';
  }
}

void emit(const ExperimentOutput& output, const std::string& prefix) {
  const std::filesystem::path base(prefix);
  if (base.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(base.parent_path(), ec);
    if (ec) throw parameter_error("cannot create directory for " + prefix);
  }
  {
    std::ofstream csv(prefix + ".records.csv");
    if (!csv) throw parameter_error("cannot write " + prefix + ".records.csv");
    write_records_csv(output.records, csv);
  }
  {
    std::ofstream json(prefix + ".summary.json");
    if (!json) throw parameter_error("cannot write " + prefix + ".summary.json");
    json << summary_to_json(output.summary) << "\n";
  }
}

}  // namespace sbg
