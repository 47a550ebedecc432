#include "stelim/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <sstream>

#include "stelim/eliminate.hpp"
#include "stelim/expression.hpp"
#include "stelim/families.hpp"
#include "stelim/format.hpp"
#include "stelim/incremental.hpp"
#include "stelim/oracle.hpp"

namespace stelim {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A model or diff problem tied to an input file.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <typename F>
auto with_file(const std::string &path, F &&f) -> decltype(f(std::string())) {
  const std::string text = read_file(path);
  try {
    return f(text);
  } catch (const ParseError &e) {
    throw InputError(path + ":" + e.what());
  } catch (const ModelError &e) {
    throw InputError(path + ": " + e.what());
  }
}

Vpmc load_model(const std::string &path) {
  return with_file(path, [](const std::string &text) { return preprocess(parse_model(text)); });
}

OrderHeuristic parse_heuristic(const std::string &s) {
  if (s == "input") return OrderHeuristic::kInputOrder;
  if (s == "min-degree") return OrderHeuristic::kMinDegree;
  throw UsageError("unknown order '" + s + "' (expected input or min-degree)");
}

RewardFactor parse_factor(const std::string &s) {
  if (s == "visits") return RewardFactor::kExpectedVisits;
  if (s == "printed") return RewardFactor::kPrintedSelfTransitions;
  throw UsageError("unknown reward factor '" + s + "' (expected visits or printed)");
}

Rational parse_rational(const std::string &text) {
  RationalFunction f;
  try {
    f = parse_expression(text, {});
  } catch (const ParseError &e) {
    throw UsageError("invalid number '" + text + "': " + e.message());
  }
  if (!f.is_constant()) throw UsageError("invalid number '" + text + "'");
  return f.evaluate({});
}

/// name=value pairs to a valuation over `params`; every parameter must be set.
std::vector<Rational> parse_valuation(const std::vector<std::string> &assignments,
                                      const std::vector<std::string> &params) {
  std::vector<std::optional<Rational>> values(params.size());
  for (const auto &a : assignments) {
    const auto eq = a.find('=');
    if (eq == std::string::npos) throw UsageError("expected name=value but got '" + a + "'");
    const std::string name = a.substr(0, eq);
    auto it = std::find(params.begin(), params.end(), name);
    if (it == params.end()) throw UsageError("unknown parameter '" + name + "'");
    values[static_cast<std::size_t>(it - params.begin())] = parse_rational(a.substr(eq + 1));
  }
  std::vector<Rational> out;
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (!values[i]) throw UsageError("no value for parameter '" + params[i] + "'");
    out.push_back(*values[i]);
  }
  return out;
}

struct SolveArgs {
  std::string model;
  bool reward = false;
  bool stats = false;
  std::string order = "input";
  std::string factor = "visits";
};

int cmd_validate(const std::string &path, std::ostream &out) {
  const ModelInput input = with_file(path, [](const std::string &text) { return parse_model(text); });
  const Pmc &pmc = input.pmc;
  const auto &names = pmc.params();
  std::size_t warnings = 0;
  for (const StateReport &r : validate(pmc)) {
    if (pmc.successors(r.state).empty()) continue;
    if (!r.stochastic) {
      ++warnings;
      out << "warning: row of " << pmc.name(r.state) << " sums to " << r.row_sum.to_string(names) << "\n";
    }
  }
  const Vpmc pre = with_file(path, [&](const std::string &) { return preprocess(input); });
  out << "states " << pmc.num_states() << ", transitions " << pmc.num_transitions() << ", warnings " << warnings
      << "\n";
  out << "after preprocessing: states " << pre.pmc.num_states() << ", transitions " << pre.pmc.num_transitions()
      << ", volatile " << pre.volatile_states.size() << "\n";
  return kExitOk;
}

int cmd_solve(const SolveArgs &a, std::ostream &out, std::ostream &err) {
  const Vpmc model = load_model(a.model);
  const auto &names = model.pmc.params();
  const EliminationOrder order = make_order(model, parse_heuristic(a.order));
  const RewardFactor factor = parse_factor(a.factor);
  MetricsCounter counter;
  MetricsScope scope(counter);
  Pmc work = model.pmc;
  const EliminationOptions options{a.reward, factor};
  for (StateId s : order.sequence()) eliminate_state(work, s, options);
  out << work.at(model.initial(), model.target).to_string(names) << "\n";
  if (a.reward) out << work.reward(model.initial()).to_string(names) << "\n";
  if (a.stats)
    err << "eliminations " << order.size() << ", operations " << counter.total() << " (add " << counter.counts().adds
        << ", sub " << counter.counts().subs << ", mul " << counter.counts().muls << ", div "
        << counter.counts().divs << ")\n";
  return kExitOk;
}

int cmd_incremental(const SolveArgs &a, const std::vector<std::string> &diff_paths, bool emit_cache,
                    std::ostream &out, std::ostream &err) {
  Vpmc current = load_model(a.model);
  const auto names = current.pmc.params();
  IncrementalOptions options;
  options.elimination = EliminationOptions{a.reward, parse_factor(a.factor)};
  options.heuristic = parse_heuristic(a.order);
  MetricsCounter counter;
  MetricsScope scope(counter);

  auto report = [&](const RationalFunction &p, const RationalFunction &r, const EliminationCache &cache,
                    const Pmc &pmc, std::size_t step, bool rebuilt) {
    out << p.to_string(names) << "\n";
    if (a.reward) out << r.to_string(names) << "\n";
    if (emit_cache) {
      out << "# cache after step " << step << (rebuilt ? " (rebuilt)" : "") << "\n";
      std::istringstream lines(print_cache(cache, pmc));
      for (std::string line; std::getline(lines, line);) out << "#   " << line << "\n";
    }
    if (a.stats) err << "step " << step << ": operations " << counter.total() << " cumulative\n";
  };

  VpmcResult first = parametric_reachability_vpmc(current, make_order(current, options.heuristic), options.elimination);
  EliminationCache cache = std::move(first.cache);
  report(first.probability, first.reward, cache, current.pmc, 0, false);
  for (std::size_t i = 0; i < diff_paths.size(); ++i) {
    Vpmc next;
    {
      UncountedScope quiet;
      next = with_file(diff_paths[i], [&](const std::string &text) {
        return apply_diff(current, parse_diff(text, names));
      });
    }
    ReconfigurationResult r = reconfigured_reachability(current, next, cache, options);
    cache = std::move(r.cache);
    current = std::move(next);
    report(r.probability, r.reward, cache, current.pmc, i + 1, r.cache_rebuilt);
  }
  return kExitOk;
}

int cmd_eval(const std::string &path, const std::vector<std::string> &assignments, unsigned digits, bool reward,
             std::ostream &out) {
  const Vpmc model = load_model(path);
  const std::vector<Rational> v = parse_valuation(assignments, model.pmc.params());
  try {
    instantiate(model, v);
  } catch (const NotGraphPreserving &e) {
    throw InputError(std::string("valuation is not graph-preserving: ") + e.what());
  }
  const EliminationOrder order = make_order(model);
  const RationalFunction f = reward ? solve_expected_reward(model, order) : solve_reachability(model, order);
  Rational value;
  try {
    value = f.evaluate(v);
  } catch (const UndefinedAt &e) {
    throw InputError(std::string("the result is undefined at this valuation: ") + e.what());
  }
  out << value.get_str() << " ~ " << to_decimal(value, digits) << "\n";
  return kExitOk;
}

std::optional<Rational> parse_mu(const std::string &mu) {
  if (mu == "mu" || mu == "symbolic") return std::nullopt;
  return parse_rational(mu);
}

}  // namespace

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
  CLI::App app{"Parametric Markov chain state elimination with incremental re-solving", "stelim"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  auto *validate_cmd = app.add_subcommand("validate", "Parse a model and report row sums");
  std::string validate_path;
  validate_cmd->add_option("model", validate_path, "Model file")->required();

  auto add_solve_options = [&](CLI::App *cmd) {
    cmd->add_option("model", solve_args.model, "Model file")->required();
    cmd->add_flag("--reward", solve_args.reward, "Also compute the expected accumulated reward");
    cmd->add_option("--order", solve_args.order, "Elimination order: input or min-degree")->capture_default_str();
    cmd->add_option("--factor", solve_args.factor, "Reward factor: visits or printed")->capture_default_str();
    cmd->add_flag("--stats", solve_args.stats, "Print operation counts to stderr");
  };
  auto *solve_cmd = app.add_subcommand("solve", "Solve a model from scratch");
  add_solve_options(solve_cmd);

  auto *incr_cmd = app.add_subcommand("incremental", "Solve a model, then re-solve after each diff");
  add_solve_options(incr_cmd);
  std::vector<std::string> diff_paths;
  bool emit_cache = false;
  incr_cmd->add_option("diffs", diff_paths, "Diff files, applied in sequence");
  incr_cmd->add_flag("--emit-cache", emit_cache, "Print the cache after each step");

  auto *eval_cmd = app.add_subcommand("eval", "Evaluate the solution at a valuation");
  std::string eval_path;
  std::vector<std::string> assignments;
  unsigned eval_digits = 10;
  bool eval_reward = false;
  eval_cmd->add_option("model", eval_path, "Model file")->required();
  eval_cmd->add_option("-p,--param", assignments, "name=value (repeatable)");
  eval_cmd->add_option("--digits", eval_digits, "Digits of the decimal approximation")->capture_default_str();
  eval_cmd->add_flag("--reward", eval_reward, "Evaluate the expected reward instead");

  auto *bench_cmd = app.add_subcommand("bench", "Incremental versus from-scratch sweep as CSV");
  bench_cmd->require_subcommand(1);
  std::optional<unsigned> decimal;
  std::vector<std::string> probe;
  std::string order = "input";
  auto add_bench_common = [&](CLI::App *cmd) {
    cmd->add_option("--decimal", decimal, "Render numbers with this many digits");
    cmd->add_option("--probe", probe, "Probe valuation name=value (repeatable)");
    cmd->add_option("--order", order, "Elimination order: input or min-degree")->capture_default_str();
  };
  auto *bench_zc = bench_cmd->add_subcommand("zeroconf", "Zeroconf sweep n = 1..n-max");
  unsigned n_max = 20;
  bench_zc->add_option("--n-max", n_max, "Largest n")->capture_default_str();
  add_bench_common(bench_zc);
  auto *bench_osc = bench_cmd->add_subcommand("osc", "Oscillator sweep R = 1..r-max");
  OscillatorSpec osc;
  std::string eps = "1/10", mu = "mu";
  std::optional<unsigned> r_max;
  auto add_osc_options = [&](CLI::App *cmd) {
    cmd->add_option("--N", osc.N, "Number of nodes")->capture_default_str();
    cmd->add_option("--T", osc.T, "Phases per cycle")->capture_default_str();
    cmd->add_option("--eps", eps, "Coupling strength")->capture_default_str();
    cmd->add_option("--mu", mu, "Message loss: a number, or mu for symbolic")->capture_default_str();
  };
  add_osc_options(bench_osc);
  bench_osc->add_option("--r-max", r_max, "Largest refractory length (default T)");
  add_bench_common(bench_osc);

  auto *gen_cmd = app.add_subcommand("gen", "Print a generated model or diff");
  gen_cmd->require_subcommand(1);
  bool gen_diff = false;
  auto *gen_zc = gen_cmd->add_subcommand("zeroconf", "Zeroconf model for n");
  unsigned gen_n = 1;
  gen_zc->add_option("--n", gen_n, "Number of probes")->capture_default_str();
  gen_zc->add_flag("--diff", gen_diff, "Print the diff to n + 1 instead");
  auto *gen_osc = gen_cmd->add_subcommand("osc", "Oscillator model for R");
  add_osc_options(gen_osc);
  gen_osc->add_option("--R", osc.R, "Refractory length")->capture_default_str();
  gen_osc->add_flag("--diff", gen_diff, "Print the diff to R + 1 instead");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (validate_cmd->parsed()) return cmd_validate(validate_path, out);
    if (solve_cmd->parsed()) return cmd_solve(solve_args, out, err);
    if (incr_cmd->parsed()) return cmd_incremental(solve_args, diff_paths, emit_cache, out, err);
    if (eval_cmd->parsed()) return cmd_eval(eval_path, assignments, eval_digits, eval_reward, out);
    SweepOptions sweep;
    sweep.incremental.heuristic = parse_heuristic(order);
    if (bench_zc->parsed()) {
      if (n_max < 1) throw UsageError("--n-max must be at least 1");
      const std::vector<std::string> params{"p", "q"};
      const auto v = parse_valuation(probe.empty() ? std::vector<std::string>{"p=1/2", "q=1/2"} : probe, params);
      out << bench_csv(bench_zeroconf(n_max, v, sweep), decimal);
      return kExitOk;
    }
    if (bench_osc->parsed() || gen_osc->parsed()) {
      osc.eps = parse_rational(eps);
      osc.mu = parse_mu(mu);
    }
    if (bench_osc->parsed()) {
      const unsigned top = r_max.value_or(osc.T);
      std::vector<std::string> params;
      if (!osc.mu) params.push_back("mu");
      if (probe.empty() && !osc.mu) probe.push_back("mu=1/2");
      const auto v = parse_valuation(probe, params);
      out << bench_csv(bench_oscillator(osc, top, v, sweep), decimal);
      return kExitOk;
    }
    if (gen_zc->parsed()) {
      if (gen_n < 1) throw UsageError("--n must be at least 1");
      const ZeroconfInstance z = gen_zeroconf(gen_n);
      out << (gen_diff ? print_diff(z.next, z.model.pmc.params()) : print_model(z.model));
      return kExitOk;
    }
    if (gen_osc->parsed()) {
      const OscillatorInstance o = gen_oscillator(osc);
      out << (gen_diff ? print_diff(o.next, o.model.pmc.params()) : print_model(o.model));
      return kExitOk;
    }
  } catch (const UsageError &e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument &e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InputError &e) {
    err << "error: " << e.what() << "\n";
    return kExitModel;
  } catch (const ModelError &e) {
    err << "error: " << e.what() << "\n";
    return kExitModel;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
    return kExitModel;
  }
  return kExitUsage;
}

}  // namespace stelim
