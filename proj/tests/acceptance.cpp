// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "stelim/cli.hpp"
#include "stelim/eliminate.hpp"
#include "stelim/expression.hpp"
#include "stelim/families.hpp"
#include "stelim/format.hpp"
#include "stelim/incremental.hpp"
#include "stelim/oracle.hpp"
#include "support/random_models.hpp"

using namespace stelim;
using namespace stelim::testing;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool ok = true;
  std::string detail;
  void fail(const std::string &why) {
    if (ok) detail = why;
    ok = false;
  }
};

const std::vector<std::string> kPq{"p", "q"};
RationalFunction rf(const std::string &text) { return parse_expression(text, kPq); }

Outcome zeroconf_closed_form_check() {
  Outcome o;
  std::vector<Diff> diffs;
  for (unsigned n = 1; n < 20; ++n) diffs.push_back(zeroconf_diff(n));
  SweepOptions opt;
  opt.run_naive = false;
  const auto steps = incremental_sweep(gen_zeroconf(1).model, diffs, opt);
  for (unsigned n = 1; n <= 20; ++n) {
    const RationalFunction want = zeroconf_closed_form(n);
    if (!rf_equal(solve_reachability(gen_zeroconf(n).model), want)) o.fail("solve differs at n=" + std::to_string(n));
    if (!rf_equal(steps.at(n - 1).value, want)) o.fail("incremental differs at n=" + std::to_string(n));
  }
  // Same through the command line on generated documents.
  const auto dir = std::filesystem::temp_directory_path() / "stelim_acceptance";
  std::filesystem::create_directories(dir);
  std::vector<std::string> args{"stelim", "incremental", (dir / "z1.pm").string()};
  std::ofstream((dir / "z1.pm").string()) << print_model(gen_zeroconf(1).model);
  for (unsigned n = 1; n < 20; ++n) {
    const std::string path = (dir / ("d" + std::to_string(n) + ".pm")).string();
    std::ofstream(path) << print_diff(zeroconf_diff(n), kPq);
    args.push_back(path);
  }
  auto cli = [&](const std::vector<std::string> &a) {
    std::vector<const char *> argv;
    for (const auto &s : a) argv.push_back(s.c_str());
    std::ostringstream out, err;
    if (run_cli(static_cast<int>(argv.size()), argv.data(), out, err) != kExitOk) o.fail("cli: " + err.str());
    std::vector<RationalFunction> values;
    std::istringstream lines(out.str());
    for (std::string l; std::getline(lines, l);) values.push_back(rf(l));
    return values;
  };
  const auto incremental = cli(args);
  if (incremental.size() != 20) o.fail("incremental printed " + std::to_string(incremental.size()) + " lines");
  for (unsigned n = 1; n <= 20 && n <= incremental.size(); ++n) {
    if (!rf_equal(incremental[n - 1], zeroconf_closed_form(n))) o.fail("cli incremental differs at n=" + std::to_string(n));
    const std::string path = (dir / ("z" + std::to_string(n) + ".pm")).string();
    std::ofstream(path) << print_model(gen_zeroconf(n).model);
    const auto solved = cli({"stelim", "solve", path});
    if (solved.size() != 1 || !rf_equal(solved[0], zeroconf_closed_form(n))) o.fail("cli solve differs at n=" + std::to_string(n));
  }
  std::filesystem::remove_all(dir);
  o.detail = o.ok ? "n=1..20 exact, library and command line" : o.detail;
  return o;
}

Outcome example_one() {
  Outcome o;
  const ZeroconfInstance z = gen_zeroconf(3);
  const Pmc &m = z.model.pmc;
  const StateId k = m.id("3"), i = m.id("i"), s0 = z.model.initial(), err = z.model.target;
  const VpmcResult r = parametric_reachability_vpmc(z.model, make_order(z.model));
  auto expect = [&](bool cond, const std::string &what) {
    if (!cond) o.fail(what);
  };
  const auto &P = r.cache.partial;
  const auto &map = r.cache.map;
  expect(P.size() == 2 && P.count({k, err}) && P.at({k, err}) == rf("p^3"), "partial(k,err)");
  expect(P.count({k, i}) && P.at({k, i}) == rf("p-p^3"), "partial(k,i)");
  expect(map.size() == 3, "map size");
  expect(map.count({k, i, err}) && map.at({k, i, err}) == rf("q*p^3"), "map(k,i,err)");
  expect(map.count({k, i, i}) && map.at({k, i, i}) == rf("q*(1-p^3)"), "map(k,i,i)");
  expect(map.count({i, s0, err}) && map.at({i, s0, err}) == rf("q*p^3/(1-q*(1-p^3))"), "map(i,s0,err)");

  const Vpmc next = apply_diff(z.model, z.next);
  const ReconfigurationResult re = reconfigured_reachability(z.model, next, r.cache);
  bool flushed = false;
  for (const auto &[s1, s2, value] : re.trace.flushed)
    if (s1 == k && s2 == i) flushed = value == rf("1-p^3");
  expect(flushed, "flushed P(k,i)");
  expect(re.probability == zeroconf_closed_form(4), "reconfigured value");
  if (o.ok) o.detail = "partial, map and flush exact";
  return o;
}

Outcome random_equivalence() {
  Outcome o;
  Rng rng(20240601);
  std::size_t steps = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const Chain c = random_chain(rng, 1 + pick(rng, 3));
    IncrementalOptions opt;
    opt.elimination.rewards = true;
    opt.heuristic = trial % 2 ? OrderHeuristic::kMinDegree : OrderHeuristic::kInputOrder;
    EliminationCache cache =
        parametric_reachability_vpmc(c.models[0], make_order(c.models[0], opt.heuristic), opt.elimination).cache;
    for (std::size_t k = 1; k < c.models.size(); ++k) {
      const ReconfigurationResult r = reconfigured_reachability(c.models[k - 1], c.models[k], cache, opt);
      const Vpmc &after = c.models[k];
      if (!rf_equal(r.probability, solve_reachability(after)))
        o.fail("probability differs in trial " + std::to_string(trial));
      if (!rf_equal(r.reward, solve_expected_reward(after, make_order(after))))
        o.fail("reward differs in trial " + std::to_string(trial));
      cache = r.cache;
      ++steps;
    }
  }
  if (o.ok) o.detail = "200 trials, " + std::to_string(steps) + " increments, 0 failures";
  return o;
}

Outcome order_independence() {
  Outcome o;
  Rng rng(777);
  std::size_t perms = 0;
  for (int t = 0; t < 50; ++t) {
    RandomModelOptions opt{4, 6};
    opt.volatile_fraction = 0;
    const Vpmc v = random_vpmc(rng, opt, 3);
    std::vector<StateId> perm = eliminable(v);
    std::sort(perm.begin(), perm.end());
    const RationalFunction ref = solve_reachability(v, EliminationOrder(perm));
    do {
      ++perms;
      if (!rf_equal(solve_reachability(v, EliminationOrder(perm)), ref)) o.fail("model " + std::to_string(t));
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  if (o.ok) o.detail = "50 models, " + std::to_string(perms) + " orders";
  return o;
}

Outcome oracle_agreement() {
  Outcome o;
  Rng rng(4242);
  std::vector<Vpmc> models;
  for (unsigned n = 1; n <= 4; ++n) {
    ModelInput in = zeroconf_input(n);
    in.pmc.set_reward(in.pmc.id("i"), RationalFunction(1));
    for (unsigned j = 1; j <= n; ++j) in.pmc.set_reward(in.pmc.id(std::to_string(j)), rf("1+p"));
    models.push_back(preprocess(in));
  }
  for (int t = 0; t < 16; ++t) models.push_back(random_vpmc(rng, {3, 9}));
  std::size_t checks = 0;
  for (const Vpmc &v : models) {
    const EliminationOrder order = make_order(v);
    const RationalFunction f = solve_reachability(v, order);
    const RationalFunction r = solve_expected_reward(v, order);
    for (int k = 0; k < 50; ++k) {
      const auto x = random_valuation(rng, v.pmc.params().size());
      const ConcreteMc mc = instantiate(v, x);
      if (f.evaluate(x) != numeric_reachability(mc)) o.fail("reachability mismatch");
      if (r.evaluate(x) != numeric_expected_reward(mc)) o.fail("reward mismatch");
      ++checks;
    }
  }
  // The self-transition factor misses the first visit on s0 -> e -> t with r(e) = 3.
  ModelInput chain;
  for (auto n : {"s0", "e", "t"}) chain.pmc.add_state(n);
  chain.pmc.set_initial(0);
  chain.pmc.set(0, 1, RationalFunction(1));
  chain.pmc.set(1, 2, RationalFunction(1));
  chain.pmc.set_reward(1, RationalFunction(3));
  chain.targets = {2};
  const Vpmc c = preprocess(chain);
  const Rational truth = numeric_expected_reward(instantiate(c, std::vector<Rational>{}));
  const Rational visits = solve_expected_reward(c, make_order(c)).evaluate({});
  const Rational printed = solve_expected_reward(c, make_order(c), RewardFactor::kPrintedSelfTransitions).evaluate({});
  if (visits != truth) o.fail("expected-visits factor disagrees on the chain");
  if (printed == truth) o.fail("printed factor unexpectedly agrees on the chain");
  if (o.ok)
    o.detail = std::to_string(models.size()) + " models x 50 valuations; chain truth " + truth.get_str() +
               ", printed factor gives " + printed.get_str();
  return o;
}

Outcome zeroconf_scaling() {
  Outcome o;
  const auto rows = bench_zeroconf(100, {Rational(1, 2), Rational(1, 2)});
  const OpCounts step3 = rows.at(2).detail.incremental;
  std::vector<double> xs, ys;
  for (const auto &r : rows) {
    if (!r.matches_naive) o.fail("value mismatch at n=" + std::to_string(r.step));
    if (r.detail.cache_rebuilt) o.fail("cache rebuilt at n=" + std::to_string(r.step));
    if (r.step >= 3 && !(r.detail.incremental == step3)) o.fail("step cost varies at n=" + std::to_string(r.step));
    xs.push_back(r.step);
    ys.push_back(static_cast<double>(r.detail.naive.total()));
  }
  // Least-squares line through the per-step naive costs.
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double icept = (sy - slope * sx) / n;
  double res = 0, norm = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (slope * xs[i] + icept);
    res += e * e;
    norm += ys[i] * ys[i];
  }
  const double rel = std::sqrt(res / norm);
  if (rel >= 0.05) o.fail("naive cost is not linear, residual " + std::to_string(rel));
  for (std::size_t i = 3; i < rows.size(); ++i)
    if (!(rows[i].ratio_percent < rows[i - 1].ratio_percent)) o.fail("ratio not decreasing at n=" + std::to_string(i + 1));
  const Rational last = rows.back().ratio_percent;
  if (!(last < 10)) o.fail("ratio at n=100 is " + to_decimal(last, 2) + "%");
  std::ostringstream d;
  d << "step cost " << step3.total() << " for n>=3; naive ~ " << slope << "*n + " << icept << " (residual " << rel
    << "); ratio at n=100 " << to_decimal(last, 2) << "%";
  if (o.ok) o.detail = d.str();
  return o;
}

Outcome oscillator_sweep() {
  Outcome o;
  std::ostringstream d;
  for (unsigned T : {4u, 5u}) {
    OscillatorSpec spec;
    spec.N = 5;
    spec.T = T;
    spec.eps = Rational(1, 10);
    const auto rows = bench_oscillator(spec, T, {Rational(1, 3)});
    if (rows.size() != T) o.fail("wrong number of steps for T=" + std::to_string(T));
    for (const auto &r : rows) {
      if (!r.matches_naive) o.fail("T=" + std::to_string(T) + " R=" + std::to_string(r.step) + " differs");
      if (r.ops_incr_cum > r.ops_naive_cum) o.fail("T=" + std::to_string(T) + " incremental costs more");
    }
    d << "T=" << T << ": " << rows.back().ops_incr_cum << " vs " << rows.back().ops_naive_cum << " ops; ";
  }
  if (o.ok) o.detail = d.str();
  return o;
}

Outcome format_checks() {
  Outcome o;
  Rng rng(99);
  for (int t = 0; t < 100; ++t) {
    const ModelInput in = random_input(rng, {2, 12});
    const ModelInput back = parse_model(print_model(in));
    bool same = structurally_equal(in.pmc, back.pmc) && in.targets.size() == back.targets.size() &&
                in.volatile_states.size() == back.volatile_states.size();
    for (StateId s : in.targets) same = same && back.targets.count(back.pmc.id(in.pmc.name(s)));
    for (StateId s : in.volatile_states) same = same && back.volatile_states.count(back.pmc.id(in.pmc.name(s)));
    if (!same) o.fail("round trip changed model " + std::to_string(t));
  }
  std::size_t docs = 0;
  for (const auto &entry : std::filesystem::directory_iterator(std::string(STELIM_TEST_DATA) + "/malformed")) {
    ++docs;
    const std::string path = entry.path().string();
    const char *argv[] = {"stelim", "validate", path.c_str()};
    std::ostringstream out, err;
    const int code = run_cli(3, argv, out, err);
    if (code != kExitModel) o.fail(entry.path().filename().string() + " exit " + std::to_string(code));
    if (err.str().find(":line ") == std::string::npos) o.fail(entry.path().filename().string() + " not line-addressed");
  }
  if (docs != 10) o.fail("expected 10 malformed documents, found " + std::to_string(docs));
  if (o.ok) o.detail = "100 round trips, 10 diagnostics with exit 2";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char *name;
    std::function<Outcome()> run;
    double limit_seconds;
  };
  const std::vector<Criterion> criteria{
      {"1 zeroconf closed form", zeroconf_closed_form_check, 5},
      {"2 worked example k=3", example_one, 5},
      {"3 incremental equals from-scratch", random_equivalence, 60},
      {"4 order independence", order_independence, 60},
      {"5 oracle agreement", oracle_agreement, 60},
      {"6 zeroconf scaling", zeroconf_scaling, 120},
      {"7 oscillator sweep", oscillator_sweep, 120},
      {"8 format round trip and diagnostics", format_checks, 60},
  };
  bool all = true;
  for (const auto &c : criteria) {
    const auto start = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception &e) {
      o.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    if (secs >= c.limit_seconds) o.fail("took " + std::to_string(secs) + " s");
    all = all && o.ok;
    std::cout << (o.ok ? "PASS" : "FAIL") << "  " << c.name << "  (" << std::fixed;
    std::cout.precision(2);
    std::cout << secs << " s)  " << o.detail << std::endl;
    std::cout.unsetf(std::ios::fixed);
    std::cout.precision(6);
  }
  return all ? 0 : 1;
}
