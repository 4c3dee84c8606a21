#include "dynwalk/runner.hpp"

#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "dynwalk/analysis.hpp"
#include "dynwalk/core_process.hpp"
#include "dynwalk/dirichlet.hpp"
#include "dynwalk/estimators.hpp"
#include "dynwalk/events.hpp"
#include "dynwalk/rng.hpp"

namespace dynwalk {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add(std::vector<std::string> row) {
  if (row.size() != header_.size()) throw std::logic_error("CSV row width does not match header");
  rows_.push_back(std::move(row));
}

std::string CsvTable::str() const {
  std::string out;
  auto put = [&](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      const auto& f = row[i];
      if (f.find_first_of(",\"\r\n") == std::string::npos) {
        out += f;
      } else {
        out += '"';
        for (char c : f) {
          if (c == '"') out += '"';
          out += c;
        }
        out += '"';
      }
    }
    out += "\r\n";
  };
  put(header_);
  for (const auto& r : rows_) put(r);
  return out;
}

std::vector<std::pair<std::string, std::vector<std::string>>> output_schema(const std::string& command) {
  using H = std::vector<std::string>;
  if (command == "scan-exc")
    return {{"scan_exc.csv", H{"realization", "measure", "intervals", "events", "flips", "in_set_at_begin"}},
            {"scan_exc_intervals.csv", H{"realization", "begin", "end"}}};
  if (command == "estimate-return")
    return {{"estimate_return.csv", H{"k", "x1", "x2", "mean", "stderr", "n_samples", "ci_low", "ci_high"}}};
  if (command == "estimate-joint")
    return {{"estimate_joint.csv",
             H{"k", "x1", "x2", "y1", "y2", "t", "joint", "joint_stderr", "marginal_x", "marginal_x_stderr",
               "marginal_y", "marginal_y_stderr", "product_ratio", "n_samples"}}};
  if (command == "estimate-em")
    return {{"estimate_em.csv", H{"M", "mean", "stderr", "n_samples", "ci_low", "ci_high"}}};
  if (command == "estimate-ratio")
    return {{"estimate_ratio.csv", H{"t", "numerator", "numerator_stderr", "denominator", "denominator_stderr",
                                     "ratio", "ratio_stderr", "defined", "n_samples"}}};
  if (command == "check-summary")
    return {{"check_summary.csv", H{"t", "K", "k", "cond_single_n", "single", "single_stderr", "cond_joint_n", "joint",
                                    "joint_stderr", "joint_in_range", "insufficient", "single_bound_c",
                                    "joint_bound_c"}},
            {"check_summary_fit.csv", H{"t", "K", "fitted_c_single", "fitted_c_joint"}}};
  if (command == "hitting-prob")
    return {{"hitting_prob.csv", H{"n", "x1", "x2", "exact", "mc", "mc_stderr", "n_samples", "lawler_c", "method",
                                   "max_residual"}}};
  if (command == "second-moment")
    return {{"second_moment_samples.csv", H{"realization", "L"}},
            {"second_moment.csv", H{"n", "mean_L", "mean_L_stderr", "mean_L2", "bound", "bound_stderr",
                                    "p_positive", "p_positive_stderr", "p_em", "p_em_stderr", "window_length"}}};
  if (command == "escape-rate")
    return {{"escape_rate.csv", H{"realization", "t", "survived", "max_n"}},
            {"escape_rate_summary.csv", H{"realization", "grid_points", "surviving", "survived_at_0"}}};
  if (command == "dimension")
    return {{"dimension_counts.csv", H{"realization", "depth", "box_size", "count"}},
            {"dimension.csv", H{"realization", "measure", "slope", "r_squared", "empty"}}};
  throw std::invalid_argument("unknown subcommand '" + command + "'");
}

namespace {

using nlohmann::json;

std::string u64(std::uint64_t v) { return std::to_string(v); }
std::string i64(std::int64_t v) { return std::to_string(v); }
std::string flag(bool b) { return b ? "1" : "0"; }

std::string d(double v) { return format_double(v); }

struct Outputs {
  std::map<std::string, CsvTable> tables;
  std::vector<std::pair<std::string, std::string>> blobs;  // extra binary outputs
  bool runtime_failure = false;
  std::string failure;

  explicit Outputs(const std::string& command) {
    for (auto& [name, header] : output_schema(command)) tables.emplace(name, CsvTable(header));
  }
  CsvTable& operator[](const std::string& name) { return tables.at(name); }
};

std::string realization_bytes(const DynamicalWalkRealization& r) {
  std::ostringstream os(std::ios::binary);
  write_realization(os, r);
  return os.str();
}

void run_scan_exc(const ExperimentConfig& cfg, const Schedule& sched, std::uint64_t seed, const Execution& exec,
                  Outputs& out) {
  const std::size_t n = std::max<std::uint64_t>(cfg.N, sched.horizon());
  struct Result {
    PiecewiseIndicator ind;
    ScanStats stats;
    std::string dump;
  };
  const auto results = collect_samples<Result>(cfg.samples, exec, [&](std::size_t i) {
    const auto r = sample_realization(n, cfg.t_max, derive_seed(seed, streams::kRealization, i));
    Result res;
    res.ind = scan_E_M(r, sched, {0.0, cfg.t_max}, &res.stats);
    if (cfg.dump_realization) res.dump = realization_bytes(r);
    return res;
  });
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& res = results[i];
    out["scan_exc.csv"].add({u64(i), d(res.ind.measure()), u64(res.ind.intervals().size()), u64(res.stats.events),
                             u64(res.stats.flips), flag(res.ind.contains(0.0))});
    for (const auto& iv : res.ind.intervals()) out["scan_exc_intervals.csv"].add({u64(i), d(iv.begin), d(iv.end)});
    if (cfg.dump_realization) out.blobs.emplace_back("realization_" + u64(i) + ".dwrz", res.dump);
  }
}

void run_estimate_return(const ExperimentConfig& cfg, const Schedule& sched, std::uint64_t seed,
                         const Execution& exec, Outputs& out) {
  const auto r = estimate_return_prob(sched, cfg.k, cfg.x, cfg.samples, seed, exec);
  out["estimate_return.csv"].add({i64(cfg.k), i64(cfg.x.x1), i64(cfg.x.x2), d(r.mean), d(r.stderr_),
                                  u64(r.n_samples), d(r.ci_low), d(r.ci_high)});
}

void run_estimate_joint(const ExperimentConfig& cfg, const Schedule& sched, std::uint64_t seed,
                        const Execution& exec, Outputs& out) {
  const auto px = estimate_return_prob(sched, cfg.k, cfg.x, cfg.samples, seed, exec);
  // the second marginal uses its own seed so the product is of independent walks
  const auto py = estimate_return_prob(sched, cfg.k, cfg.y, cfg.samples, mix64(seed ^ 0x5bd1e995ull), exec);
  for (double t : cfg.t) {
    const auto j = estimate_joint_return(sched, cfg.k, cfg.x, cfg.y, t, cfg.samples, seed, exec);
    const double prod = px.mean * py.mean;
    out["estimate_joint.csv"].add({i64(cfg.k), i64(cfg.x.x1), i64(cfg.x.x2), i64(cfg.y.x1), i64(cfg.y.x2), d(t),
                                   d(j.mean), d(j.stderr_), d(px.mean), d(px.stderr_), d(py.mean), d(py.stderr_),
                                   d(prod > 0.0 ? j.mean / prod : 0.0), u64(j.n_samples)});
  }
}

void run_estimate_em(const ExperimentConfig& cfg, const Schedule& sched, std::uint64_t seed, const Execution& exec,
                     Outputs& out) {
  const auto r = estimate_E_M_prob(sched, cfg.samples, seed, exec);
  out["estimate_em.csv"].add(
      {i64(sched.levels()), d(r.mean), d(r.stderr_), u64(r.n_samples), d(r.ci_low), d(r.ci_high)});
}

void run_estimate_ratio(const ExperimentConfig& cfg, const Schedule& sched, std::uint64_t seed,
                        const Execution& exec, Outputs& out) {
  for (double t : cfg.t) {
    const auto f = estimate_f(sched, t, cfg.samples, seed, exec);
    out["estimate_ratio.csv"].add({d(t), d(f.numerator.mean), d(f.numerator.stderr_), d(f.denominator.mean),
                                   d(f.denominator.stderr_), d(f.ratio), d(f.stderr_), flag(f.defined),
                                   u64(cfg.samples)});
    if (!f.defined) {
      out.runtime_failure = true;
      out.failure = "ratio undefined at t = " + d(t) + ": P(E_M) is not resolved from zero";
    }
  }
}

void run_check_summary(const ExperimentConfig& cfg, const Schedule& sched, std::uint64_t seed,
                       const Execution& exec, Outputs& out) {
  for (double t : cfg.t) {
    const auto table = check_summary(sched, t, cfg.samples, seed, exec);
    const std::string k_text = t > 0.0 ? i64(table.level_K) : "inf";
    for (const auto& row : table.rows)
      out["check_summary.csv"].add({d(t), k_text, i64(row.k), u64(row.cond_single_n), d(row.single.mean),
                                    d(row.single.stderr_), u64(row.cond_joint_n), d(row.joint.mean),
                                    d(row.joint.stderr_), flag(row.joint_in_range), flag(row.insufficient),
                                    d(row.single_bound_c), d(row.joint_bound_c)});
    out["check_summary_fit.csv"].add({d(t), k_text, d(table.fitted_c_single), d(table.fitted_c_joint)});
  }
}

void run_hitting_prob(const ExperimentConfig& cfg, std::uint64_t seed, const Execution& exec, Outputs& out) {
  const auto n = static_cast<std::int64_t>(cfg.N);
  const auto field = solve_hitting_field(n);
  const double exact = field.at(cfg.x);
  const auto mc = hitting_prob_mc(n, cfg.x, cfg.samples, seed, exec);
  const LawlerPoint p{n, cfg.x, exact};
  const double c = fit_lawler_constant(std::span<const LawlerPoint>(&p, 1));
  out["hitting_prob.csv"].add({i64(n), i64(cfg.x.x1), i64(cfg.x.x2), d(exact), d(mc.mean), d(mc.stderr_),
                               u64(mc.n_samples), d(c),
                               field.method() == DirichletMethod::Direct ? "direct" : "multigrid",
                               d(field.max_residual())});
}

void run_second_moment(const ExperimentConfig& cfg, const Schedule& sched, std::uint64_t seed,
                       const Execution& exec, Outputs& out) {
  const auto ls = good_set_measures(sched, {0.0, cfg.t_max}, cfg.samples, seed, exec);
  for (std::size_t i = 0; i < ls.size(); ++i) out["second_moment_samples.csv"].add({u64(i), d(ls[i])});
  const auto rep = second_moment_report(ls, 1000, seed);
  // fixed-time probability for the Fubini check, on ten times as many walks
  const auto em = estimate_E_M_prob(sched, cfg.samples * 10, seed, exec);
  out["second_moment.csv"].add({u64(rep.n), d(rep.mean_L.mean), d(rep.mean_L.stderr_), d(rep.mean_L2), d(rep.bound),
                                d(rep.bound_stderr), d(rep.positive.mean), d(rep.positive.stderr_), d(em.mean),
                                d(em.stderr_), d(cfg.t_max)});
}

void run_escape_rate(const ExperimentConfig& cfg, const Schedule& sched, std::uint64_t seed, const Execution& exec,
                     Outputs& out) {
  const std::size_t n = std::max<std::uint64_t>(cfg.N, sched.horizon());
  const auto grid = uniform_grid(cfg.t_max, cfg.grid);
  const auto b = make_barrier(cfg);
  // realizations run one after another; the grid scan of each is parallel
  for (std::uint64_t i = 0; i < cfg.samples; ++i) {
    const auto r = sample_realization(n, cfg.t_max, derive_seed(seed, streams::kRealization, i));
    const auto rep = escape_rate_scan(r, sched, b, grid, exec);
    for (const auto& tr : rep.times)
      out["escape_rate.csv"].add({u64(i), d(tr.t), flag(tr.survived), u64(tr.max_n)});
    out["escape_rate_summary.csv"].add(
        {u64(i), u64(grid.size()), u64(rep.surviving), flag(!rep.times.empty() && rep.times.front().survived)});
  }
}

void run_dimension(const ExperimentConfig& cfg, const Schedule& sched, std::uint64_t seed, const Execution& exec,
                   Outputs& out) {
  const std::size_t n = std::max<std::uint64_t>(cfg.N, sched.horizon());
  const auto sets = collect_samples<PiecewiseIndicator>(cfg.samples, exec, [&](std::size_t i) {
    const auto r = sample_realization(n, cfg.t_max, derive_seed(seed, streams::kRealization, i));
    return scan_E_M(r, sched, {0.0, cfg.t_max});
  });
  for (std::size_t i = 0; i < sets.size(); ++i) {
    // rescale the window onto [0, 1]
    std::vector<Interval> unit;
    for (const auto& iv : sets[i].intervals()) unit.push_back({iv.begin / cfg.t_max, iv.end / cfg.t_max});
    const auto rep = box_count_dimension(unit, cfg.depths);
    for (std::size_t j = 0; j < rep.depths.size(); ++j)
      out["dimension_counts.csv"].add({u64(i), i64(rep.depths[j]), d(rep.box_sizes[j]), u64(rep.counts[j])});
    out["dimension.csv"].add({u64(i), d(sets[i].measure()), d(rep.slope), d(rep.r_squared), flag(rep.empty_set)});
  }
}

json schedule_json(const Schedule& s) {
  return {{"levels", s.levels()}, {"stops", s.stops()}, {"inner", s.inner_radii()}, {"outer", s.outer_radii()}};
}

std::string hex64(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
  return buf;
}

}  // namespace

int run(const ExperimentConfig& cfg_in, std::ostream& log, std::ostream& err) {
  const auto violations = validate(cfg_in);
  if (!violations.empty()) {
    for (const auto& v : violations) err << "config error: " << v << '\n';
    return kExitConfig;
  }
  ExperimentConfig cfg = cfg_in;
  if (!cfg.seed) cfg.seed = (std::uint64_t{std::random_device{}()} << 32) ^ std::random_device{}();
  const std::uint64_t seed = *cfg.seed;
  const Execution exec{cfg.workers};

  const auto start = std::chrono::steady_clock::now();
  Outputs out(cfg.command);
  std::optional<Schedule> sched;
  try {
    if (cfg.command != "hitting-prob") sched = parse_schedule(cfg.schedule, cfg.M);
    const std::string& c = cfg.command;
    if (c == "scan-exc") run_scan_exc(cfg, *sched, seed, exec, out);
    else if (c == "estimate-return") run_estimate_return(cfg, *sched, seed, exec, out);
    else if (c == "estimate-joint") run_estimate_joint(cfg, *sched, seed, exec, out);
    else if (c == "estimate-em") run_estimate_em(cfg, *sched, seed, exec, out);
    else if (c == "estimate-ratio") run_estimate_ratio(cfg, *sched, seed, exec, out);
    else if (c == "check-summary") run_check_summary(cfg, *sched, seed, exec, out);
    else if (c == "hitting-prob") run_hitting_prob(cfg, seed, exec, out);
    else if (c == "second-moment") run_second_moment(cfg, *sched, seed, exec, out);
    else if (c == "escape-rate") run_escape_rate(cfg, *sched, seed, exec, out);
    else if (c == "dimension") run_dimension(cfg, *sched, seed, exec, out);
  } catch (const std::exception& e) {
    err << "runtime error: " << e.what() << '\n';
    return kExitRuntime;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  namespace fs = std::filesystem;
  try {
    fs::create_directories(cfg.out);
    json files = json::array();
    auto emit = [&](const std::string& name, const std::string& bytes) {
      std::ofstream f(fs::path(cfg.out) / name, std::ios::binary);
      f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
      if (!f) throw std::runtime_error("cannot write " + name);
      files.push_back({{"file", name}, {"bytes", bytes.size()}, {"fnv1a64", hex64(fnv1a64(bytes))}});
      log << "wrote " << (fs::path(cfg.out) / name).string() << '\n';
    };
    for (const auto& [name, table] : out.tables) emit(name, table.str());
    for (const auto& [name, bytes] : out.blobs) emit(name, bytes);

    json manifest;
    manifest["command"] = cfg.command;
    manifest["config"] = json::parse(to_json_string(cfg));
    manifest["seed"] = seed;
    manifest["seed_generated"] = !cfg_in.seed.has_value();
    manifest["prng"] = {{"name", kRngName}, {"version", kRngVersion}};
    manifest["code_version"] = DYNWALK_VERSION;
    manifest["schedule"] = sched ? schedule_json(*sched) : json(nullptr);
    manifest["workers"] = cfg.workers;
    manifest["wall_time_seconds"] = wall;
    manifest["outputs"] = files;
    manifest["status"] = out.runtime_failure ? "failed" : "ok";
    if (out.runtime_failure) manifest["failure"] = out.failure;
    std::ofstream mf(fs::path(cfg.out) / "manifest.json");
    mf << manifest.dump(2) << '\n';
    if (!mf) throw std::runtime_error("cannot write manifest.json");
  } catch (const std::exception& e) {
    err << "runtime error: " << e.what() << '\n';
    return kExitRuntime;
  }
  if (out.runtime_failure) {
    err << "runtime error: " << out.failure << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

int cli_main(int argc, char** argv) {
  CLI::App app{"Dynamical random walk experiments"};
  app.set_version_flag("--version", std::string(DYNWALK_VERSION));
  std::string command, config_path, schedule, barrier_kind, out_dir;
  int m = 0, k = 0, workers = 0;
  std::uint64_t n = 0, seed = 0, samples = 0;
  double t_max = 0.0, eps = 0.0, grid = 0.0, alpha = 0.0;
  std::vector<double> ts;
  std::vector<std::int64_t> x, y;
  std::vector<int> depths;
  bool dump = false;

  app.add_option("command", command, "subcommand to run")->required();
  app.add_option("--config", config_path, "JSON config file; flags override its keys");
  auto* o_sched = app.add_option("--schedule", schedule, "'paper M', 'desk M rho lambda' or 'explicit s=.. r=.. R=..'");
  auto* o_m = app.add_option("--M", m, "level count override");
  auto* o_n = app.add_option("--N", n, "realization length, or disc radius for hitting-prob");
  auto* o_tmax = app.add_option("--t-max", t_max, "time horizon of realizations");
  auto* o_seed = app.add_option("--seed", seed, "64-bit run seed");
  auto* o_samples = app.add_option("--samples", samples, "MC samples or realizations");
  auto* o_t = app.add_option("--t", ts, "time or comma separated times")->delimiter(',');
  auto* o_eps = app.add_option("--eps", eps, "barrier epsilon");
  auto* o_barrier = app.add_option("--barrier", barrier_kind, "barrier family: log or power");
  auto* o_alpha = app.add_option("--alpha", alpha, "power barrier exponent");
  auto* o_k = app.add_option("--k", k, "level");
  auto* o_x = app.add_option("--x", x, "start point x1,x2")->delimiter(',')->expected(2);
  auto* o_y = app.add_option("--y", y, "second start point y1,y2")->delimiter(',')->expected(2);
  auto* o_depths = app.add_option("--depths", depths, "box counting depths")->delimiter(',');
  auto* o_grid = app.add_option("--grid", grid, "escape-rate grid spacing");
  auto* o_workers = app.add_option("--workers", workers, "OpenMP workers");
  auto* o_out = app.add_option("--out", out_dir, "output directory");
  auto* o_dump = app.add_flag("--dump-realization", dump, "also write scanned realizations (scan-exc)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  ExperimentConfig cfg;
  try {
    if (!config_path.empty()) cfg = load_config(config_path);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  cfg.command = command;
  if (*o_sched) cfg.schedule = schedule;
  if (*o_m) cfg.M = m;
  if (*o_n) cfg.N = n;
  if (*o_tmax) cfg.t_max = t_max;
  if (*o_seed) cfg.seed = seed;
  if (*o_samples) cfg.samples = samples;
  if (*o_t) cfg.t = ts;
  if (*o_eps) cfg.eps = eps;
  if (*o_barrier) cfg.barrier = barrier_kind;
  if (*o_alpha) cfg.alpha = alpha;
  if (*o_k) cfg.k = k;
  if (*o_x) cfg.x = {x[0], x[1]};
  if (*o_y) cfg.y = {y[0], y[1]};
  if (*o_depths) cfg.depths = depths;
  if (*o_grid) cfg.grid = grid;
  if (*o_workers) cfg.workers = workers;
  if (*o_out) cfg.out = out_dir;
  if (*o_dump) cfg.dump_realization = dump;
  return run(cfg, std::cout, std::cerr);
}

}  // namespace dynwalk
