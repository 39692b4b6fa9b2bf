// Command-line front end. Talks to the solver only through localdist.h.

#include <CLI11.hpp>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <mutex>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "localdist/localdist.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitInput = 2;
constexpr int kExitNotConverged = 3;
constexpr int kExitCap = 4;

int exit_code(ld_status s) {
  switch (s) {
    case LD_OK: return kExitOk;
    case LD_INVALID_ARGUMENT:
    case LD_VALIDATION:
    case LD_PARSE:
    case LD_DIMENSION_MISMATCH: return kExitInput;
    case LD_NOT_CONVERGED: return kExitNotConverged;
    case LD_CAP_EXCEEDED: return kExitCap;
    default: return kExitInternal;
  }
}

struct CliFailure {
  int code;
  std::string msg;
};

void check(ld_status s, const char* what) {
  if (s != LD_OK) throw CliFailure{exit_code(s), std::string(what) + ": " + ld_last_error()};
}

[[noreturn]] void bad_input(const std::string& msg) { throw CliFailure{kExitInput, msg}; }

struct BehaviorDeleter {
  void operator()(ld_behavior* p) const { ld_behavior_free(p); }
};
struct ReportDeleter {
  void operator()(ld_report* p) const { ld_report_free(p); }
};
using BehaviorPtr = std::unique_ptr<ld_behavior, BehaviorDeleter>;
using ReportPtr = std::unique_ptr<ld_report, ReportDeleter>;

std::string take_string(char* s) {
  std::string out(s ? s : "");
  ld_string_free(s);
  return out;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      bad_input("not a number: '" + item + "'");
    }
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (double v : parse_list(text)) {
    if (v != std::floor(v)) bad_input("expected integers in '" + text + "'");
    out.push_back(int(v));
  }
  return out;
}

// lo:hi[:step], inclusive of hi up to rounding.
std::vector<double> parse_range(const std::string& text, double default_step) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(parse_list(item).at(0));
  if (parts.size() < 2 || parts.size() > 3) bad_input("range must be lo:hi[:step]");
  const double lo = parts[0], hi = parts[1];
  const double step = parts.size() == 3 ? parts[2] : default_step;
  if (!(step > 0.0) || hi < lo) bad_input("range needs lo <= hi and step > 0");
  std::vector<double> out;
  const long n = long(std::floor((hi - lo) / step + 1e-9));
  for (long i = 0; i <= n; ++i) out.push_back(lo + double(i) * step);
  return out;
}

std::string read_file(const std::string& path) {
  if (path == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) bad_input("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw CliFailure{kExitInternal, "cannot write " + path};
  out << text;
}

// ---- behavior sources ----

struct GenSpec {
  std::string input;
  std::string gen;
  double gamma_state = 1.0;
  double p = 1.0;
  std::string plane = "xy";
  int planar = 2;
  std::string alice_angles;
  std::string bob_angles;
  std::optional<double> bob_offset;
  int k = 3;
  std::string dims = "2,2,2,2";
  std::string r;
  std::string s;
  std::uint64_t seed = 0;
};

void add_gen_options(CLI::App* cmd, GenSpec& g) {
  cmd->add_option("--input,-i", g.input, "Behavior JSON file ('-' for stdin)");
  cmd->add_option("--gen", g.gen, "Generator")
      ->check(CLI::IsMember({"pr-box", "pure", "werner", "local-mixture", "uniform", "vertex"}));
  cmd->add_option("--gamma-state", g.gamma_state, "Pure state parameter in [0,1]");
  cmd->add_option("--p", g.p, "Werner visibility in [0,1]");
  cmd->add_option("--plane", g.plane, "Measurement plane")->check(CLI::IsMember({"xy", "xz"}));
  cmd->add_option("--planar", g.planar, "Settings per party (k pi / M grid)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--alice-angles", g.alice_angles, "Comma separated angles (radians)");
  cmd->add_option("--bob-angles", g.bob_angles, "Comma separated angles (radians)");
  cmd->add_option("--bob-offset", g.bob_offset, "Bob grid offset (default pi/(2M))");
  cmd->add_option("--k", g.k, "Vertex count for local-mixture")->check(CLI::PositiveNumber);
  cmd->add_option("--dims", g.dims, "A,B,R,S for synthetic generators");
  cmd->add_option("--r", g.r, "Alice outcomes for --gen vertex");
  cmd->add_option("--s", g.s, "Bob outcomes for --gen vertex");
}

ld_plane plane_of(const std::string& p) { return p == "xz" ? LD_PLANE_XZ : LD_PLANE_XY; }

std::vector<double> grid(int M, double offset) {
  std::vector<double> out(M);
  check(ld_planar_angles(M, offset, out.data()), "angles");
  return out;
}

BehaviorPtr make_qubit(ld_state_kind kind, double param, const std::string& plane,
                       int M, const std::string& alice_list, const std::string& bob_list,
                       std::optional<double> bob_offset) {
  const auto alice = alice_list.empty() ? grid(M, 0.0) : parse_list(alice_list);
  const auto bob = bob_list.empty()
                       ? grid(M, bob_offset.value_or(ld_chained_offset(M)))
                       : parse_list(bob_list);
  if (alice.empty() || bob.empty()) bad_input("empty angle list");
  ld_behavior* out = nullptr;
  const auto pl = plane_of(plane);
  check(ld_behavior_qubit(kind, param, pl, alice.data(), int(alice.size()), pl, bob.data(),
                          int(bob.size()), &out),
        "generator");
  return BehaviorPtr(out);
}

BehaviorPtr load_behavior(const GenSpec& g) {
  if (!g.input.empty() && !g.gen.empty()) bad_input("use either --input or --gen");
  ld_behavior* out = nullptr;
  if (!g.input.empty()) {
    check(ld_behavior_from_json(read_file(g.input).c_str(), &out), "input");
    return BehaviorPtr(out);
  }
  if (g.gen.empty()) bad_input("no behavior given: pass --input or --gen");

  if (g.gen == "pure")
    return make_qubit(LD_STATE_PURE, g.gamma_state, g.plane, g.planar, g.alice_angles,
                      g.bob_angles, g.bob_offset);
  if (g.gen == "werner")
    return make_qubit(LD_STATE_WERNER, g.p, g.plane, g.planar, g.alice_angles, g.bob_angles,
                      g.bob_offset);
  if (g.gen == "pr-box") {
    check(ld_behavior_pr_box(&out), "generator");
    return BehaviorPtr(out);
  }

  const auto d = parse_int_list(g.dims);
  if (d.size() != 4) bad_input("--dims expects A,B,R,S");
  if (g.gen == "uniform") {
    check(ld_behavior_uniform(d[0], d[1], d[2], d[3], &out), "generator");
  } else if (g.gen == "local-mixture") {
    check(ld_behavior_local_mixture(d[0], d[1], d[2], d[3], g.k, g.seed, &out), "generator");
  } else {
    const auto r = parse_int_list(g.r);
    const auto s = parse_int_list(g.s);
    if (int(r.size()) != d[0] || int(s.size()) != d[1])
      bad_input("--r needs A entries and --s needs B entries");
    check(ld_behavior_vertex(d[0], d[1], d[2], d[3], r.data(), s.data(), &out), "generator");
  }
  return BehaviorPtr(out);
}

// ---- solver options ----

struct SolveFlags {
  double eps = 1e-5;
  double gamma = 0.5;
  std::string oracle = "heuristic";
  int trials = 0;
  int jobs = 1;
  int max_iter = 100000;
  std::uint64_t cap = 1ull << 24;
  bool strict = false;
};

void add_solve_options(CLI::App* cmd, SolveFlags& f, std::uint64_t& seed) {
  cmd->add_option("--eps", f.eps, "Target gap on F")->check(CLI::PositiveNumber);
  cmd->add_option("--gamma", f.gamma, "Strong stopping parameter in (0,1)");
  cmd->add_option("--oracle", f.oracle, "heuristic | exact | certify")
      ->check(CLI::IsMember({"heuristic", "exact", "certify"}));
  cmd->add_option("--trials", f.trials, "Oracle restarts (0: d_NS)");
  cmd->add_option("--jobs", f.jobs, "Worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--max-iter", f.max_iter, "Outer iteration cap")->check(CLI::PositiveNumber);
  cmd->add_option("--enum-cap", f.cap, "Brute-force cap on R^A");
  cmd->add_option("--seed", seed, "RNG seed");
  cmd->add_flag("--strict-cleanup", f.strict, "Also drop vertices certified to carry zero weight");
}

ld_solve_options to_options(const SolveFlags& f, std::uint64_t seed, int oracle_threads) {
  ld_solve_options o;
  ld_solve_options_init(&o);
  o.epsilon = f.eps;
  o.gamma = f.gamma;
  o.oracle_mode = f.oracle == "exact"     ? LD_ORACLE_EXACT
                  : f.oracle == "certify" ? LD_ORACLE_CERTIFY
                                          : LD_ORACLE_HEURISTIC;
  o.oracle_trials = f.trials;
  o.oracle_threads = oracle_threads;
  o.seed = seed;
  o.enumeration_cap = f.cap;
  o.max_outer_iterations = f.max_iter;
  o.strict_cleanup = f.strict ? 1 : 0;
  return o;
}

// Returns the status so callers can map LD_NOT_CONVERGED after printing.
ld_status solve(const ld_behavior* P, const ld_solve_options& o, ReportPtr& out) {
  ld_report* rep = nullptr;
  const ld_status s = ld_compute_distance(P, &o, &rep);
  out.reset(rep);
  if (s != LD_OK && s != LD_NOT_CONVERGED) check(s, "solve");
  return s;
}

// Runs fn(i) for i in [0,n) on up to `jobs` threads.
template <class Fn>
void run_pool(std::size_t n, int jobs, Fn fn) {
  std::atomic<std::size_t> next{0};
  std::mutex err_mu;
  std::optional<CliFailure> err;
  auto worker = [&] {
    for (std::size_t i; (i = next++) < n;) {
      try {
        fn(i);
      } catch (const CliFailure& e) {
        std::lock_guard lock(err_mu);
        if (!err) err = e;
      }
    }
  };
  const int workers = std::max(1, std::min<int>(jobs, int(n)));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (err) throw *err;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distance of bipartite correlations from the local cone"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ld_version()));

  // distance
  GenSpec dist_gen;
  SolveFlags dist_flags;
  std::string dist_trace;
  auto* distance = app.add_subcommand("distance", "Compute the distance; JSON report on stdout");
  add_gen_options(distance, dist_gen);
  add_solve_options(distance, dist_flags, dist_gen.seed);
  distance->add_option("--trace-csv", dist_trace, "Also write the iteration trace as CSV");

  // scan
  std::string scan_state = "pure", scan_plane = "xy", scan_range = "0:1:0.05";
  int scan_M = 10;
  std::optional<double> scan_offset;
  SolveFlags scan_flags;
  std::uint64_t scan_seed = 0;
  auto* scan = app.add_subcommand("scan", "Distance versus state parameter, CSV on stdout");
  scan->add_option("--state", scan_state, "pure | werner")->check(CLI::IsMember({"pure", "werner"}));
  scan->add_option("--plane", scan_plane)->check(CLI::IsMember({"xy", "xz"}));
  scan->add_option("--gamma-range", scan_range, "lo:hi:step over the state parameter");
  scan->add_option("--M", scan_M, "Settings per party")->check(CLI::PositiveNumber);
  scan->add_option("--bob-offset", scan_offset, "Bob grid offset (default pi/(2M))");
  add_solve_options(scan, scan_flags, scan_seed);

  // bench
  std::string bench_state = "pure", bench_plane = "xy", bench_range, bench_list;
  double bench_param = 1.0;
  SolveFlags bench_flags;
  bench_flags.eps = 1e-3;
  std::uint64_t bench_seed = 0;
  auto* bench = app.add_subcommand("bench", "Solver time versus measurement count, CSV on stdout");
  bench->add_option("--state", bench_state)->check(CLI::IsMember({"pure", "werner"}));
  bench->add_option("--gamma-state", bench_param, "State parameter (gamma or p)");
  bench->add_option("--plane", bench_plane)->check(CLI::IsMember({"xy", "xz"}));
  auto* range_opt = bench->add_option("--M-range", bench_range, "lo:hi[:step]");
  bench->add_option("--M-list", bench_list, "Comma separated M values")->excludes(range_opt);
  add_solve_options(bench, bench_flags, bench_seed);

  // verify
  GenSpec ver_gen;
  SolveFlags ver_flags;
  std::uint64_t ver_cap = 1000000;
  auto* verify = app.add_subcommand("verify", "Compare against the dense reference solve");
  add_gen_options(verify, ver_gen);
  add_solve_options(verify, ver_flags, ver_gen.seed);
  verify->add_option("--max-vertices", ver_cap, "Cap on R^A * S^B for the reference");

  // oracle
  GenSpec or_gen;
  bool or_exact = false;
  int or_trials = 0, or_sweeps = 100;
  std::uint64_t or_cap = 1ull << 24;
  auto* oracle = app.add_subcommand("oracle", "Maximize sum g(r_a,s_b;a,b) W over strategies");
  add_gen_options(oracle, or_gen);
  oracle->add_flag("--exact", or_exact, "Brute force instead of multistart");
  oracle->add_option("--trials", or_trials, "Restarts (0: d_NS)");
  oracle->add_option("--sweep-limit", or_sweeps)->check(CLI::PositiveNumber);
  oracle->add_option("--enum-cap", or_cap);
  oracle->add_option("--seed", or_gen.seed);

  // gen
  GenSpec gen_gen;
  auto* gen = app.add_subcommand("gen", "Emit behavior JSON");
  add_gen_options(gen, gen_gen);
  gen->add_option("--seed", gen_gen.seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInput;
  }

  try {
    if (*distance) {
      auto P = load_behavior(dist_gen);
      ReportPtr rep;
      const auto s = solve(P.get(), to_options(dist_flags, dist_gen.seed, dist_flags.jobs), rep);
      char* json = nullptr;
      check(ld_report_to_json(rep.get(), &json), "report");
      std::cout << take_string(json) << "\n";
      if (!dist_trace.empty()) {
        char* csv = nullptr;
        check(ld_report_trace_csv(rep.get(), &csv), "trace");
        write_text(dist_trace, take_string(csv));
      }
      if (s == LD_NOT_CONVERGED) {
        std::cerr << "error: " << ld_last_error() << "\n";
        return kExitNotConverged;
      }
      return kExitOk;
    }

    if (*scan) {
      const auto params = parse_range(scan_range, 0.05);
      const ld_state_kind kind = scan_state == "werner" ? LD_STATE_WERNER : LD_STATE_PURE;
      struct Row {
        double distance = 0.0, millis = 0.0;
        int iterations = 0;
        bool converged = true;
      };
      std::vector<Row> rows(params.size());
      const auto opts = to_options(scan_flags, scan_seed, 1);
      run_pool(params.size(), scan_flags.jobs, [&](std::size_t i) {
        auto P = make_qubit(kind, params[i], scan_plane, scan_M, "", "", scan_offset);
        ReportPtr rep;
        const auto s = solve(P.get(), opts, rep);
        rows[i] = {ld_report_distance(rep.get()), ld_report_millis(rep.get()),
                   ld_report_iterations(rep.get()), s == LD_OK};
      });
      bool all = true;
      std::printf("gamma,distance,iterations,millis\n");
      for (std::size_t i = 0; i < rows.size(); ++i) {
        std::printf("%.6g,%.10e,%d,%.3f\n", params[i], rows[i].distance, rows[i].iterations,
                    rows[i].millis);
        all = all && rows[i].converged;
      }
      return all ? kExitOk : kExitNotConverged;
    }

    if (*bench) {
      std::vector<int> Ms;
      if (!bench_list.empty()) {
        Ms = parse_int_list(bench_list);
      } else if (!bench_range.empty()) {
        for (double m : parse_range(bench_range, 1.0)) Ms.push_back(int(std::lround(m)));
      } else {
        bad_input("bench needs --M-range or --M-list");
      }
      const ld_state_kind kind = bench_state == "werner" ? LD_STATE_WERNER : LD_STATE_PURE;
      const auto opts = to_options(bench_flags, bench_seed, bench_flags.jobs);
      bool all = true;
      std::printf("M,millis,iterations,oracle_calls\n");
      for (int M : Ms) {
        if (M < 1) bad_input("M must be >= 1");
        auto P = make_qubit(kind, bench_param, bench_plane, M, "", "", std::nullopt);
        ReportPtr rep;
        const auto s = solve(P.get(), opts, rep);
        all = all && s == LD_OK;
        std::printf("%d,%.3f,%d,%d\n", M, ld_report_millis(rep.get()),
                    ld_report_iterations(rep.get()), ld_report_oracle_calls(rep.get()));
        std::fflush(stdout);
      }
      return all ? kExitOk : kExitNotConverged;
    }

    if (*verify) {
      auto P = load_behavior(ver_gen);
      double f_ref = 0.0;
      check(ld_reference_f_min(P.get(), ver_cap, &f_ref), "reference");
      ReportPtr rep;
      const auto s = solve(P.get(), to_options(ver_flags, ver_gen.seed, ver_flags.jobs), rep);
      const double f_plus = ld_report_f_plus(rep.get());

      ld_behavior* gq = nullptr;
      check(ld_report_final_query(rep.get(), &gq), "final query");
      BehaviorPtr g(gq);
      double v_heur = 0.0, v_exact = 0.0;
      check(ld_oracle_query(g.get(), 0, ver_flags.trials, 100, ver_gen.seed, 0, &v_heur, nullptr),
            "oracle");
      check(ld_oracle_query(g.get(), 1, 0, 100, 0, ver_flags.cap, &v_exact, nullptr), "oracle");

      const double diff = std::abs(f_plus - f_ref);
      const bool ok = diff <= 10.0 * ver_flags.eps && v_heur <= v_exact + 1e-12;
      std::printf(
          "{\n  \"F_plus\": %.17g,\n  \"F_reference\": %.17g,\n  \"abs_diff\": %.17g,\n"
          "  \"distance\": %.17g,\n  \"distance_reference\": %.17g,\n"
          "  \"oracle_multistart\": %.17g,\n  \"oracle_brute_force\": %.17g,\n"
          "  \"tolerance\": %.17g,\n  \"match\": %s\n}\n",
          f_plus, f_ref, diff, ld_report_distance(rep.get()),
          std::sqrt(2.0 * std::max(0.0, f_ref)), v_heur, v_exact, 10.0 * ver_flags.eps,
          ok ? "true" : "false");
      if (s == LD_NOT_CONVERGED) return kExitNotConverged;
      return ok ? kExitOk : kExitInternal;
    }

    if (*oracle) {
      auto g = load_behavior(or_gen);
      char* json = nullptr;
      check(ld_oracle_query(g.get(), or_exact ? 1 : 0, or_trials, or_sweeps, or_gen.seed, or_cap,
                            nullptr, &json),
            "oracle");
      std::cout << take_string(json) << "\n";
      return kExitOk;
    }

    if (*gen) {
      auto P = load_behavior(gen_gen);
      char* json = nullptr;
      check(ld_behavior_to_json(P.get(), &json), "gen");
      std::cout << take_string(json) << "\n";
      return kExitOk;
    }
  } catch (const CliFailure& e) {
    std::cerr << "error: " << e.msg << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitOk;
}
