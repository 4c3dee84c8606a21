#include "dynwalk/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace dynwalk {

namespace {

using nlohmann::json;

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) out.push_back(item);
  return out;
}

double parse_double(const std::string& s) {
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

std::uint64_t parse_u64(const std::string& s) {
  std::size_t used = 0;
  if (s.empty() || s[0] == '-') throw std::invalid_argument("not a non-negative integer: '" + s + "'");
  const auto v = std::stoull(s, &used);
  if (used != s.size()) throw std::invalid_argument("not a non-negative integer: '" + s + "'");
  return v;
}

int parse_int(const std::string& s) {
  std::size_t used = 0;
  const int v = std::stoi(s, &used);
  if (used != s.size()) throw std::invalid_argument("not an integer: '" + s + "'");
  return v;
}

bool uses_schedule(const std::string& cmd) { return cmd != "hitting-prob"; }

bool uses_realizations(const std::string& cmd) {
  return cmd == "scan-exc" || cmd == "second-moment" || cmd == "escape-rate" || cmd == "dimension";
}

}  // namespace

Schedule parse_schedule(const std::string& spec, int m_override) {
  std::istringstream is(spec);
  std::vector<std::string> tok;
  for (std::string w; is >> w;) tok.push_back(w);
  if (tok.empty()) throw std::invalid_argument("empty schedule spec");
  try {
    if (tok[0] == "paper") {
      if (tok.size() != 2) throw std::invalid_argument("expected 'paper M'");
      return paper_schedule(m_override > 0 ? m_override : parse_int(tok[1]));
    }
    if (tok[0] == "desk") {
      if (tok.size() != 4) throw std::invalid_argument("expected 'desk M rho lambda'");
      const int m = m_override > 0 ? m_override : parse_int(tok[1]);
      const double rho = parse_double(tok[2]);
      const double lambda = parse_double(tok[3]);
      if (!(rho >= 2.0)) throw std::invalid_argument("growth < 2");
      return desk_schedule(m, rho, lambda);
    }
    if (tok[0] == "explicit") {
      if (tok.size() != 4 || tok[1].rfind("s=", 0) != 0 || tok[2].rfind("r=", 0) != 0 || tok[3].rfind("R=", 0) != 0)
        throw std::invalid_argument("expected 'explicit s=... r=... R=...'");
      std::vector<std::uint64_t> s;
      std::vector<double> r, big_r;
      for (const auto& v : split(tok[1].substr(2), ',')) s.push_back(parse_u64(v));
      for (const auto& v : split(tok[2].substr(2), ',')) r.push_back(parse_double(v));
      for (const auto& v : split(tok[3].substr(2), ',')) big_r.push_back(parse_double(v));
      Schedule sched(std::move(s), std::move(r), std::move(big_r));
      return m_override > 0 ? sched.truncated(m_override) : sched;
    }
  } catch (const std::out_of_range& e) {
    throw std::invalid_argument(std::string("schedule value out of range: ") + e.what());
  } catch (const std::overflow_error& e) {
    throw std::invalid_argument(e.what());
  }
  throw std::invalid_argument("unknown schedule kind '" + tok[0] + "'");
}

Barrier make_barrier(const ExperimentConfig& cfg) {
  if (cfg.barrier == "power") return Barrier::power(cfg.alpha);
  if (cfg.barrier == "log") return Barrier::log_corrected(cfg.eps);
  throw std::invalid_argument("barrier must be 'log' or 'power'");
}

std::vector<std::string> validate(const ExperimentConfig& cfg) {
  std::vector<std::string> v;
  const auto& known = known_subcommands();
  if (std::find(known.begin(), known.end(), cfg.command) == known.end()) {
    v.push_back("unknown subcommand '" + cfg.command + "'");
    return v;
  }
  if (cfg.samples == 0) v.push_back("samples must be positive");
  if (cfg.workers < 1) v.push_back("workers must be at least 1");
  if (!(cfg.eps > 0.0)) v.push_back("eps must be positive");
  if (cfg.M < 0) v.push_back("M must be non-negative");

  std::optional<Schedule> sched;
  if (uses_schedule(cfg.command)) {
    try {
      sched = parse_schedule(cfg.schedule, cfg.M);
    } catch (const std::exception& e) {
      v.push_back(e.what());
    }
  }

  const std::string& c = cfg.command;
  if (c == "estimate-return" || c == "estimate-joint") {
    if (sched && (cfg.k < 1 || cfg.k > sched->levels())) v.push_back("k outside [1, M]");
    if (cfg.x.is_origin()) v.push_back("start at origin");
    if (c == "estimate-joint" && cfg.y.is_origin()) v.push_back("second start at origin");
  }
  if (c == "estimate-joint" || c == "estimate-ratio" || c == "check-summary") {
    if (cfg.t.empty()) v.push_back("t list is empty");
    for (double t : cfg.t)
      if (!(t >= 0.0) || !std::isfinite(t)) {
        v.push_back("t must be finite and non-negative");
        break;
      }
  }
  if (c == "hitting-prob") {
    if (cfg.N < 1) v.push_back("disc radius N must be at least 1");
    if (cfg.x.is_origin()) v.push_back("start at origin");
    else if (cfg.N >= 1 && cfg.x.norm2() >= static_cast<std::int64_t>(cfg.N) * static_cast<std::int64_t>(cfg.N))
      v.push_back("start outside the disc");
  }
  if (uses_realizations(c)) {
    if (!(cfg.t_max > 0.0) || !std::isfinite(cfg.t_max)) v.push_back("t_max must be positive");
    if (sched && cfg.N != 0 && cfg.N < sched->horizon()) v.push_back("N shorter than the schedule horizon");
    if (sched && sched->horizon() > (std::uint64_t{1} << 26)) v.push_back("schedule horizon too long for a stored realization");
  }
  if (c == "second-moment" && cfg.samples < 2) v.push_back("second-moment needs at least 2 realizations");
  if (c == "escape-rate") {
    if (!(cfg.grid > 0.0)) v.push_back("grid spacing must be positive");
    if (cfg.barrier != "log" && cfg.barrier != "power") v.push_back("barrier must be 'log' or 'power'");
    else if (cfg.barrier == "power" && !(cfg.alpha >= 0.0 && cfg.alpha < 0.5)) v.push_back("alpha outside [0, 1/2)");
  }
  if (c == "dimension") {
    if (cfg.depths.empty()) v.push_back("depths list is empty");
    for (int d : cfg.depths)
      if (d < 1 || d > 52) {
        v.push_back("depths must lie in [1, 52]");
        break;
      }
  }
  return v;
}

std::string to_json_string(const ExperimentConfig& cfg) {
  json j;
  j["command"] = cfg.command;
  j["schedule"] = cfg.schedule;
  j["M"] = cfg.M;
  j["N"] = cfg.N;
  j["t-max"] = cfg.t_max;
  j["seed"] = cfg.seed ? json(*cfg.seed) : json(nullptr);
  j["samples"] = cfg.samples;
  j["t"] = cfg.t;
  j["eps"] = cfg.eps;
  j["barrier"] = cfg.barrier;
  j["alpha"] = cfg.alpha;
  j["k"] = cfg.k;
  j["x"] = {cfg.x.x1, cfg.x.x2};
  j["y"] = {cfg.y.x1, cfg.y.x2};
  j["depths"] = cfg.depths;
  j["grid"] = cfg.grid;
  j["workers"] = cfg.workers;
  j["out"] = cfg.out;
  j["dump-realization"] = cfg.dump_realization;
  return j.dump(2);
}

ExperimentConfig config_from_json_string(const std::string& text) {
  const json j = json::parse(text);
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  ExperimentConfig cfg;
  auto point = [](const json& p) {
    if (!p.is_array() || p.size() != 2) throw std::invalid_argument("points are [x1, x2] arrays");
    return LatticePoint{p[0].get<std::int64_t>(), p[1].get<std::int64_t>()};
  };
  for (const auto& [key, val] : j.items()) {
    if (key == "command") cfg.command = val.get<std::string>();
    else if (key == "schedule") cfg.schedule = val.get<std::string>();
    else if (key == "M") cfg.M = val.get<int>();
    else if (key == "N") cfg.N = val.get<std::uint64_t>();
    else if (key == "t-max") cfg.t_max = val.get<double>();
    else if (key == "seed") cfg.seed = val.is_null() ? std::nullopt : std::optional(val.get<std::uint64_t>());
    else if (key == "samples") cfg.samples = val.get<std::uint64_t>();
    else if (key == "t") cfg.t = val.is_array() ? val.get<std::vector<double>>() : std::vector<double>{val.get<double>()};
    else if (key == "eps") cfg.eps = val.get<double>();
    else if (key == "barrier") cfg.barrier = val.get<std::string>();
    else if (key == "alpha") cfg.alpha = val.get<double>();
    else if (key == "k") cfg.k = val.get<int>();
    else if (key == "x") cfg.x = point(val);
    else if (key == "y") cfg.y = point(val);
    else if (key == "depths") cfg.depths = val.get<std::vector<int>>();
    else if (key == "grid") cfg.grid = val.get<double>();
    else if (key == "workers") cfg.workers = val.get<int>();
    else if (key == "out") cfg.out = val.get<std::string>();
    else if (key == "dump-realization") cfg.dump_realization = val.get<bool>();
    else throw std::invalid_argument("unknown config key '" + key + "'");
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return config_from_json_string(buf.str());
}

}  // namespace dynwalk
