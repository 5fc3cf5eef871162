// startail: batch front end over the library.
//
//   startail <subcommand> [--config FILE] [flags]
//
// Subcommands: sample, tail, bounds, peel, construct, iidsum, sweep, verify.
// A config file holds flat `key=value` lines naming long flags; flags on the
// command line win. Artifacts go to --out, else to $STARTAIL_OUT_DIR/<name>,
// else to stdout. Exit 0 on success, 1 on a failed assertion, 2 on usage.

#include "startail/acceptance.hpp"
#include "startail/bounds.hpp"
#include "startail/constructions.hpp"
#include "startail/graph.hpp"
#include "startail/iidsum.hpp"
#include "startail/montecarlo.hpp"
#include "startail/oracles.hpp"
#include "startail/peeling.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace startail;

namespace {

constexpr int kExitAssertion = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flags shared by every subcommand. Unset numeric values stay NaN so each
// subcommand can tell "absent" from a default.
struct RunConfig {
  std::string n;  // integer, or a comma list for sweep
  std::string p = "0.5";
  std::string r;
  std::string eps;
  double t = kNaN;
  double threshold = kNaN;
  std::uint64_t seed = 1;
  std::uint64_t reps = 10000;
  double gamma = kNaN;
  double beta = kNaN;
  double xi = 0.1;
  double D = 1.0;
  std::uint64_t x = 0;
  std::string variant = "T";
  std::string graph_file;
  std::string estimator = "auto";
  bool exact = false;
  unsigned workers = 1;
  std::string out;
  std::string format = "json";
  std::string config;
  UnspecifiedConstants constants;
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::uint64_t parse_count(const std::string& s, const char* what) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (s.empty() || used != s.size() || s[0] == '-')
    throw UsageError(std::string("--") + what + " expects a nonnegative integer, got '" + s + "'");
  return v;
}

std::uint64_t require_count(const std::string& s, const char* what) {
  if (s.empty()) throw UsageError(std::string("--") + what + " is required");
  return parse_count(s, what);
}

double parse_real(const std::string& s, const char* what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (s.empty() || used != s.size())
    throw UsageError(std::string("--") + what + " expects a number, got '" + s + "'");
  return v;
}

Probability parse_probability(const std::string& s) {
  try {
    return Probability::parse(s);
  } catch (const std::exception& e) {
    throw UsageError(std::string("--p: ") + e.what());
  }
}

std::uint64_t arms(const RunConfig& c) { return c.r.empty() ? 2 : parse_count(c.r, "r"); }

// Reads `key=value` lines into `--key value` tokens. Blank lines and lines
// starting with '#' are skipped.
std::vector<std::string> config_tokens(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file " + path);
  std::vector<std::string> tokens;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError(path + ":" + std::to_string(lineno) + ": expected key=value");
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw UsageError(path + ":" + std::to_string(lineno) + ": empty key");
    if (value == "true" || value == "false") {
      if (value == "true") tokens.push_back("--" + key);
    } else {
      tokens.push_back("--" + key);
      tokens.push_back(value);
    }
  }
  return tokens;
}

// Temporary file in the target directory, then rename: readers never see a
// partial artifact.
void write_atomic(const fs::path& path, const std::string& body) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << body;
    if (!out.flush()) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

// Returns true when the artifact went to a file.
bool emit(const RunConfig& c, const std::string& name, const std::string& body) {
  fs::path target;
  if (!c.out.empty()) {
    target = c.out;
  } else if (const char* dir = std::getenv("STARTAIL_OUT_DIR"); dir && *dir) {
    target = fs::path(dir) / (name + (c.format == "csv" ? ".csv" : ".json"));
  } else {
    std::cout << body;
    return false;
  }
  write_atomic(target, body);
  return true;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

const char* require_format(const RunConfig& c, std::initializer_list<const char*> allowed) {
  for (const char* f : allowed)
    if (c.format == f) return f;
  throw UsageError("--format " + c.format + " is not available for this subcommand");
}

// ---------------------------------------------------------------------------

int run_sample(const RunConfig& c) {
  require_format(c, {"json", "csv"});
  const auto n = require_count(c.n, "n");
  const auto p = parse_probability(c.p);
  const auto r = arms(c);
  const Graph g = sample_gnp(n, p, c.seed);
  if (c.format == "csv") {
    std::string body = "u,v\n";
    for (const auto& e : g.edges()) body += std::to_string(e.u) + "," + std::to_string(e.v) + "\n";
    emit(c, "sample", body);
    return 0;
  }
  json j{{"n", n},
         {"p", p.value()},
         {"seed", c.seed},
         {"r", r},
         {"edges", g.edge_count()},
         {"star_count", count_stars(g, r)},
         {"max_degree", g.max_degree()},
         {"edge_list", to_edge_list(g)}};
  emit(c, "sample", dump(j));
  return 0;
}

int run_tail(const RunConfig& c) {
  require_format(c, {"json"});
  const auto n = require_count(c.n, "n");
  const auto p = parse_probability(c.p);
  const auto r = arms(c);
  if (std::isnan(c.threshold)) throw UsageError("--threshold is required");
  json j{{"n", n}, {"p", p.value()}, {"r", r}, {"threshold", c.threshold}};
  double value = 0.0;
  if (c.exact) {
    const auto d = exact_star_distribution(n, p, r);
    value = d.tail(c.threshold);
    j["estimator"] = d.is_exact() ? "exact_rational" : "exact";
    j["tail"] = value;
    if (const auto q = d.exact_tail(c.threshold)) j["tail_rational"] = q->str();
    j["distribution"] = json::parse(d.to_json());
  } else {
    const auto est = mc_tail(n, p, r, c.threshold, c.reps, c.seed, c.workers);
    value = est.point;
    j["estimator"] = "mc";
    j["tail"] = est.point;
    j["hits"] = est.hits;
    j["replicates"] = est.replicates;
    j["seed"] = est.seed;
    j["ci95"] = {est.ci95.lo, est.ci95.hi};
    j["below_resolution"] = est.below_resolution();
  }
  // the number goes to stdout; the JSON record to a file when one is configured
  std::cout << format_real(value) << '\n';
  const char* dir = std::getenv("STARTAIL_OUT_DIR");
  if (!c.out.empty()) write_atomic(c.out, dump(j));
  else if (dir && *dir) write_atomic(fs::path(dir) / "tail.json", dump(j));
  return 0;
}

int run_bounds(const RunConfig& c) {
  require_format(c, {"json"});
  const auto n = require_count(c.n, "n");
  const auto p = parse_probability(c.p);
  const auto r = arms(c);
  const bool has_eps = !c.eps.empty();
  const bool has_t = !std::isnan(c.t);
  if (has_eps == has_t) throw UsageError("bounds needs exactly one of --eps or --t");
  json j;
  if (has_eps) {
    const double eps = parse_real(c.eps, "eps");
    j["report"] = pipeline_const_eps(n, p, r, eps, c.constants).to_json();
  } else {
    const double gamma = std::isnan(c.gamma) ? 1.0 / (16.0 * static_cast<double>(r)) : c.gamma;
    j["report"] = pipeline_general(n, p, r, c.t, gamma, c.constants).to_json();
    const double pv = p.value();
    if (pv > 0.0 && pv <= 1.0 - c.xi) {
      const auto reg = regime_simplify(n, pv, r, c.t, c.xi);
      j["regime"] = {{"t_sq_over_var", reg.t_sq_over_var},
                     {"phi_mu_sq_over_var", reg.phi_mu_sq_over_var},
                     {"phi_mu_sq_over_lambda", reg.phi_mu_sq_over_lambda},
                     {"m_log_e_over_p", reg.m_log_e_over_p},
                     {"bracket_lower", reg.bracket_lower},
                     {"bracket_upper", reg.bracket_upper},
                     {"small_deviation", reg.small_deviation},
                     {"large_deviation", reg.large_deviation},
                     {"t_bounded_below", reg.t_bounded_below}};
      j["lower_bounds"] = appendix_lower_bounds(n, pv, r, c.t, c.xi, c.constants).to_json();
    }
  }
  emit(c, "bounds", dump(j));
  return 0;
}

int run_peel(const RunConfig& c) {
  require_format(c, {"json"});
  Graph g;
  if (!c.graph_file.empty()) {
    std::ifstream in(c.graph_file);
    if (!in) throw UsageError("cannot read graph file " + c.graph_file);
    std::stringstream buf;
    buf << in.rdbuf();
    g = parse_edge_list(buf.str());
  } else {
    g = sample_gnp(require_count(c.n, "n"), parse_probability(c.p), c.seed);
  }
  EventVariant variant;
  if (c.variant == "T") variant = EventVariant::T;
  else if (c.variant == "Tplus" || c.variant == "T+") variant = EventVariant::Tplus;
  else throw UsageError("--variant must be T or Tplus");
  PeelingParams params;
  params.r = arms(c);
  params.D = c.D;
  params.t = std::isnan(c.t) ? 1.0 : c.t;
  params.beta = !std::isnan(c.beta) ? c.beta : variant == EventVariant::T ? 1.0 / 32.0 : 1.0 / 64.0;
  if (variant == EventVariant::Tplus) {
    params.gamma = std::isnan(c.gamma) ? 1.0 / (16.0 * static_cast<double>(params.r)) : c.gamma;
    params.p = parse_probability(c.p).value();
  }
  try {
    params.validate(variant);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  try {
    const auto rep = verify_sandwich(g, params, variant);
    emit(c, "peel", dump(rep.to_json()));
  } catch (const LemmaViolation& e) {
    std::cerr << "startail: assertion failed: " << e.what() << '\n';
    return kExitAssertion;
  }
  return 0;
}

int run_construct(const RunConfig& c) {
  require_format(c, {"json"});
  const auto n = require_count(c.n, "n");
  const auto r = arms(c);
  if (c.x == 0) throw UsageError("--x is required and must be positive");
  const auto f = build_cluster_graph(n, r, c.x);
  json j = f.to_json();
  const auto p = parse_probability(c.p);
  if (p.value() > 0.0) {
    const auto b = cluster_lower_bound(n, p, r, c.x);
    j["planting"] = {{"p", p.value()}, {"value", b.value}, {"log_value", b.log_value},
                     {"edges", b.edges}};
  }
  emit(c, "construct", dump(j));
  return 0;
}

int run_iidsum(const RunConfig& c) {
  require_format(c, {"json"});
  const IidSumModel model{require_count(c.n, "n"), parse_probability(c.p), arms(c)};
  model.validate();
  json j{{"n", model.n}, {"p", model.p.value()}, {"r", model.r}, {"mean", model.mean()}};
  if (!std::isnan(c.threshold)) {
    const auto tail = iid_exact_tail(model, c.threshold);
    j["threshold"] = c.threshold;
    if (tail) {
      j["tail"] = static_cast<double>(tail->value);
      j["log_tail"] = tail->log_value;
    } else {
      j["tail"] = nullptr;
      j["log_tail"] = nullptr;
    }
  }
  if (c.exact) j["distribution"] = json::parse(iid_exact_distribution(model).to_json());
  if (!c.eps.empty() || !std::isnan(c.t)) {
    if (!c.eps.empty() && !std::isnan(c.t)) throw UsageError("give at most one of --eps or --t");
    Deviation dev;
    if (!c.eps.empty()) {
      dev = {DeviationKind::eps, parse_real(c.eps, "eps"), 0.0};
    } else {
      dev = {DeviationKind::t, c.t, std::isnan(c.gamma) ? 0.0 : c.gamma};
    }
    j["report"] = iid_bound_transfer(model, dev, c.constants).to_json();
  }
  emit(c, "iidsum", dump(j));
  return 0;
}

int run_sweep_cmd(const RunConfig& c) {
  require_format(c, {"csv", "json"});
  SweepGrid grid;
  for (const auto& v : split_list(c.n)) grid.n.push_back(parse_count(v, "n"));
  for (const auto& v : split_list(c.p)) grid.p.push_back(parse_probability(v).value());
  if (!c.r.empty()) {
    grid.r.clear();
    for (const auto& v : split_list(c.r)) grid.r.push_back(parse_count(v, "r"));
  }
  if (!c.eps.empty()) {
    grid.eps.clear();
    for (const auto& v : split_list(c.eps)) grid.eps.push_back(parse_real(v, "eps"));
  }
  grid.replicates = c.reps;
  grid.seed = c.seed;
  grid.xi = c.xi;
  grid.constants = c.constants;
  try {
    grid.estimator = parse_estimator(c.estimator);
    grid.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const auto rows = run_sweep(grid, c.workers);
  const std::string csv = sweep_csv(rows);
  if (c.format == "csv") {
    emit(c, "sweep", csv);
    return 0;
  }
  // JSON: the same columns, one object per row, values as the CSV strings
  json arr = json::array();
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  const auto& header = sweep_header();
  while (std::getline(in, line)) {
    json row = json::object();
    std::stringstream cells(line);
    std::string cell;
    for (std::size_t k = 0; k < header.size() && std::getline(cells, cell, ','); ++k)
      row[header[k]] = cell;
    arr.push_back(row);
  }
  emit(c, "sweep", dump(arr));
  return 0;
}

int run_verify(const RunConfig& c) {
  require_format(c, {"json"});
  namespace acc = startail::acceptance;
  const auto results = acc::run_all({c.workers}, [](const acc::CriterionResult& r) {
    std::cerr << acc::format_line(r) << std::endl;
  });
  const std::string body = dump(acc::to_json(results));
  emit(c, "verify", body);
  return acc::all_passed(results) ? 0 : kExitAssertion;
}

void add_common(CLI::App* sub, RunConfig& c) {
  sub->add_option("--out", c.out, "artifact path (default: $STARTAIL_OUT_DIR/<name> or stdout)");
  sub->add_option("--format", c.format, "json, or csv for sample and sweep");
  sub->add_option("--config", c.config, "flat key=value file of flag defaults");
  sub->add_option("--workers", c.workers, "worker threads, 0 for all cores");
  sub->add_option("--seed", c.seed, "base seed");
  sub->add_option("--n", c.n, "vertex count (comma list for sweep)");
  sub->add_option("--p", c.p, "edge probability, decimal or a/b (comma list for sweep)");
  sub->add_option("--r", c.r, "star arm count (comma list for sweep)");
  sub->add_option("--eps", c.eps, "relative deviation (comma list for sweep)");
  sub->add_option("--t", c.t, "absolute deviation");
  sub->add_option("--threshold", c.threshold, "tail threshold x in Pr(X >= x)");
  sub->add_option("--reps", c.reps, "Monte Carlo replicates")->check(CLI::PositiveNumber);
  sub->add_option("--gamma", c.gamma, "gamma (default 1/(16r))")->check(CLI::PositiveNumber);
  sub->add_option("--beta", c.beta, "beta (default 1/32 for T, 1/64 for T+)")
      ->check(CLI::PositiveNumber);
  sub->add_option("--xi", c.xi, "upper margin for p in the regime and lower-bound checks");
  sub->add_option("--c", c.constants.c, "unspecified constant c")->check(CLI::PositiveNumber);
  sub->add_option("--d", c.constants.d, "unspecified constant d")->check(CLI::PositiveNumber);
  sub->add_option("--b", c.constants.b, "unspecified constant b")->check(CLI::PositiveNumber);
  sub->add_option("--n0", c.constants.n0, "unspecified threshold n0")->check(CLI::PositiveNumber);
  sub->add_option("--alpha", c.constants.alpha, "unspecified constant alpha")
      ->check(CLI::PositiveNumber);
  sub->add_option("--beta-edges", c.constants.beta_edges, "deviation ceiling of the edge bound")
      ->check(CLI::PositiveNumber);
}

// Splices config-file tokens in right after the subcommand name, so later
// command-line flags override them (every option keeps its last value).
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty() || args.empty()) return args;
  auto tokens = config_tokens(path);
  for (const auto& t : tokens)
    if (t == "--config") throw UsageError("config files cannot include other config files");
  std::vector<std::string> out{args[0]};
  out.insert(out.end(), tokens.begin(), tokens.end());
  out.insert(out.end(), args.begin() + 1, args.end());
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  CLI::App app{"Upper tails of star counts in G(n,p): oracles, bounds, peeling, sweeps"};
  app.name("startail");
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  auto* sample = app.add_subcommand("sample", "sample G(n,p) and report its star count");
  auto* tail = app.add_subcommand("tail", "Pr(X >= threshold), exact or Monte Carlo");
  auto* bounds = app.add_subcommand("bounds", "upper-bound pipeline report");
  auto* peel = app.add_subcommand("peel", "peeling trace and sandwich check");
  auto* construct = app.add_subcommand("construct", "clustering construction and planting bound");
  auto* iidsum = app.add_subcommand("iidsum", "sum of C(Y_i, r) for iid binomial Y_i");
  auto* sweep = app.add_subcommand("sweep", "grid sweep to CSV");
  auto* verify = app.add_subcommand("verify", "run the acceptance suite");
  for (auto* sub : {sample, tail, bounds, peel, construct, iidsum, sweep, verify})
    add_common(sub, cfg);
  tail->add_flag("--exact", cfg.exact, "use exhaustive enumeration (n <= 7)");
  iidsum->add_flag("--exact", cfg.exact, "include the full exact distribution");
  peel->add_option("--D", cfg.D, "base degree cap D")->check(CLI::PositiveNumber);
  peel->add_option("--variant", cfg.variant, "T or Tplus");
  peel->add_option("--graph", cfg.graph_file, "edge-list file instead of a sample");
  construct->add_option("--x", cfg.x, "star-count target");
  sweep->add_option("--estimator", cfg.estimator, "exact, mc or auto");

  try {
    auto args = expand_config(argc, argv);
    std::reverse(args.begin(), args.end());  // CLI11 takes a reversed vector
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "startail: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*sample) return run_sample(cfg);
    if (*tail) return run_tail(cfg);
    if (*bounds) return run_bounds(cfg);
    if (*peel) return run_peel(cfg);
    if (*construct) return run_construct(cfg);
    if (*iidsum) return run_iidsum(cfg);
    if (*sweep) return run_sweep_cmd(cfg);
    if (*verify) return run_verify(cfg);
  } catch (const UsageError& e) {
    std::cerr << "startail: " << e.what() << '\n';
    return kExitUsage;
  } catch (const BudgetExceeded& e) {
    std::cerr << "startail: beyond the exact-computation budget: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "startail: " << e.what() << '\n';
    return kExitUsage;
  } catch (const LemmaViolation& e) {
    std::cerr << "startail: assertion failed: " << e.what() << '\n';
    return kExitAssertion;
  } catch (const std::exception& e) {
    std::cerr << "startail: " << e.what() << '\n';
    return kExitAssertion;
  }
  return kExitUsage;
}
