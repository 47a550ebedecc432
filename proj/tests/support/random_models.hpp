// Random PMCs, legal reconfigurations and valuations shared by the unit tests
// and the acceptance runner.
#ifndef STELIM_TESTS_RANDOM_MODELS_HPP
#define STELIM_TESTS_RANDOM_MODELS_HPP

#include <algorithm>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "stelim/eliminate.hpp"
#include "stelim/incremental.hpp"
#include "stelim/model.hpp"
#include "stelim/oracle.hpp"

namespace stelim::testing {

using Rng = std::mt19937_64;

inline std::size_t pick(Rng &rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }
inline bool coin(Rng &rng, double p) { return std::bernoulli_distribution(p)(rng); }

inline std::vector<std::string> default_params() { return {"p", "q"}; }

/// A function that lies strictly inside (0, 1) whenever every parameter does.
inline RationalFunction random_fraction(Rng &rng, std::size_t nparams) {
  UncountedScope quiet;
  const RationalFunction one(1);
  switch (pick(rng, nparams == 0 ? 2 : 6)) {
    case 0: return RationalFunction(Rational(1, 2));
    case 1: return RationalFunction(Rational(1, 3));
    case 2: return RationalFunction::variable(pick(rng, nparams));
    case 3: return one - RationalFunction::variable(pick(rng, nparams));
    case 4: return RationalFunction::variable(pick(rng, nparams)) * RationalFunction(Rational(1, 2));
    default: return RationalFunction::variable(0) * RationalFunction::variable(nparams - 1);
  }
}

/// Splits `mass` over `k` entries; the pieces sum to `mass` exactly.
inline std::vector<RationalFunction> stick_break(Rng &rng, const RationalFunction &mass, std::size_t k,
                                                 std::size_t nparams) {
  UncountedScope quiet;
  std::vector<RationalFunction> out;
  RationalFunction rest = mass;
  for (std::size_t i = 0; i + 1 < k; ++i) {
    const RationalFunction x = random_fraction(rng, nparams);
    out.push_back(rest * x);
    rest = rest * (RationalFunction(1) - x);
  }
  out.push_back(rest);
  return out;
}

inline RationalFunction random_reward(Rng &rng, std::size_t nparams) {
  UncountedScope quiet;
  switch (pick(rng, 5)) {
    case 0: return RationalFunction(0);
    case 1: return RationalFunction(1);
    case 2: return RationalFunction(3);
    case 3: return nparams ? RationalFunction::variable(0) : RationalFunction(2);
    default: return nparams ? RationalFunction(1) + RationalFunction::variable(nparams - 1) : RationalFunction(5);
  }
}

struct RandomModelOptions {
  std::size_t min_states = 3;
  std::size_t max_states = 8;
  std::size_t max_out = 3;
  double volatile_fraction = 0.5;
  double substochastic = 0.15;
  bool rewards = true;
  std::vector<std::string> params = default_params();
};

/// Random model document: state 0 is initial, the last state (sometimes the
/// last two) are targets.
inline ModelInput random_input(Rng &rng, const RandomModelOptions &opt = {}) {
  UncountedScope quiet;
  const std::size_t n = opt.min_states + pick(rng, opt.max_states - opt.min_states + 1);
  ModelInput in;
  in.pmc.set_params(opt.params);
  for (std::size_t i = 0; i < n; ++i) in.pmc.add_state("s" + std::to_string(i));
  in.pmc.set_initial(0);
  in.targets.insert(static_cast<StateId>(n - 1));
  if (n > 3 && coin(rng, 0.3)) in.targets.insert(static_cast<StateId>(n - 2));
  for (StateId s = 0; s < n; ++s) {
    if (in.targets.count(s)) continue;
    const std::size_t k = 1 + pick(rng, opt.max_out);
    std::vector<StateId> succ;
    for (std::size_t j = 0; j < k; ++j) {
      // Bias towards later states so targets stay reachable.
      StateId t = coin(rng, 0.7) ? static_cast<StateId>(s + 1 + pick(rng, n - s - 1 > 0 ? n - s - 1 : 1))
                                 : static_cast<StateId>(pick(rng, n));
      t = std::min<StateId>(t, static_cast<StateId>(n - 1));
      if (std::find(succ.begin(), succ.end(), t) == succ.end()) succ.push_back(t);
    }
    RationalFunction mass(1);
    if (coin(rng, opt.substochastic)) mass = RationalFunction(Rational(9, 10));
    const auto pieces = stick_break(rng, mass, succ.size(), opt.params.size());
    for (std::size_t j = 0; j < succ.size(); ++j) in.pmc.set(s, succ[j], pieces[j]);
    if (opt.rewards && s != 0 && coin(rng, 0.6)) in.pmc.set_reward(s, random_reward(rng, opt.params.size()));
  }
  for (StateId s = 1; s < n; ++s)
    if (!in.targets.count(s) && coin(rng, opt.volatile_fraction)) in.volatile_states.insert(s);
  return in;
}

/// Preprocessed random model with at least `min_eliminable` states to remove.
inline Vpmc random_vpmc(Rng &rng, const RandomModelOptions &opt = {}, std::size_t min_eliminable = 1) {
  for (;;) {
    ModelInput in = random_input(rng, opt);
    try {
      UncountedScope quiet;
      Vpmc v = preprocess(in);
      if (v.pmc.num_states() >= 2 + min_eliminable) return v;
    } catch (const ModelError &) {
    }
  }
}

inline std::vector<Rational> random_valuation(Rng &rng, std::size_t nparams) {
  std::vector<Rational> v;
  for (std::size_t i = 0; i < nparams; ++i) {
    const long den = 2 + static_cast<long>(pick(rng, 30));
    const long num = 1 + static_cast<long>(pick(rng, static_cast<std::size_t>(den - 1)));
    v.emplace_back(num, den);
    v.back().canonicalize();
  }
  return v;
}

/// A random diff that apply_diff accepts, or nullopt after `attempts` tries.
inline std::optional<Diff> random_legal_diff(Rng &rng, const Vpmc &v, const std::string &tag,
                                             int attempts = 40) {
  UncountedScope quiet;
  const Pmc &pmc = v.pmc;
  const std::size_t np = pmc.params().size();
  for (int attempt = 0; attempt < attempts; ++attempt) {
    Diff d;
    StateSet removed;
    auto allowed_old = [&](StateId t) { return (v.is_volatile(t) || t == v.target) && !removed.count(t); };

    std::vector<StateId> vol(v.volatile_states.begin(), v.volatile_states.end());
    if (coin(rng, 0.35)) {
      std::vector<StateId> candidates = vol;
      std::shuffle(candidates.begin(), candidates.end(), rng);
      for (StateId r : candidates) {
        bool ok = true;
        for (StateId p : pmc.predecessors(r)) ok = ok && (p == r || v.is_volatile(p));
        for (const auto &[t, value] : pmc.successors(r)) ok = ok && (t == r || allowed_old(t));
        if (!ok) continue;
        removed.insert(r);
        d.removed_states.push_back(pmc.name(r));
        break;
      }
    }

    const std::size_t nadd = pick(rng, 3);
    std::vector<std::string> added;
    for (std::size_t i = 0; i < nadd; ++i) {
      added.push_back("n" + tag + "_" + std::to_string(i));
      Diff::AddedState a{added.back(), std::nullopt};
      if (coin(rng, 0.5)) a.reward = random_reward(rng, np);
      d.added_states.push_back(std::move(a));
    }

    // Destinations a rewritten row may use.
    std::vector<std::string> dests = added;
    for (StateId t : pmc.states())
      if (allowed_old(t)) dests.push_back(pmc.name(t));

    auto random_row = [&](const RationalFunction &mass, const std::string &from, std::size_t must) {
      std::vector<std::string> succ;
      if (must < added.size()) succ.push_back(added[must]);
      const std::size_t k = 1 + pick(rng, 3);
      while (succ.size() < k) {
        const std::string &t = dests[pick(rng, dests.size())];
        if (std::find(succ.begin(), succ.end(), t) == succ.end()) succ.push_back(t);
        else break;
      }
      const auto pieces = stick_break(rng, mass, succ.size(), np);
      std::vector<Diff::Transition> out;
      for (std::size_t j = 0; j < succ.size(); ++j) out.push_back({from, succ[j], pieces[j]});
      return out;
    };

    std::size_t next_added = 0;
    for (StateId s : vol) {
      if (removed.count(s) || !coin(rng, 0.6)) continue;
      RationalFunction flexible;
      std::vector<StateId> old_flexible;
      for (const auto &[t, value] : pmc.successors(s)) {
        if (!allowed_old(t) && !removed.count(t)) continue;
        if (!removed.count(t)) old_flexible.push_back(t);
        flexible = flexible + value;
      }
      if (flexible.is_zero()) continue;
      auto row = random_row(flexible, pmc.name(s), next_added++);
      for (StateId t : old_flexible) {
        const bool kept = std::any_of(row.begin(), row.end(), [&](const auto &e) { return e.to == pmc.name(t); });
        if (!kept) d.set_transitions.push_back({pmc.name(s), pmc.name(t), RationalFunction()});
      }
      d.set_transitions.insert(d.set_transitions.end(), row.begin(), row.end());
    }
    for (std::size_t i = 0; i < added.size(); ++i) {
      auto row = random_row(coin(rng, 0.2) ? RationalFunction(Rational(4, 5)) : RationalFunction(1), added[i],
                            i + 1 < added.size() && coin(rng, 0.5) ? i + 1 : added.size());
      d.set_transitions.insert(d.set_transitions.end(), row.begin(), row.end());
    }
    for (StateId s : vol)
      if (!removed.count(s) && coin(rng, 0.2)) d.set_rewards.emplace_back(pmc.name(s), random_reward(rng, np));

    // Either keep to old volatile and new states, which lets the cache be
    // refreshed in place, or pick an arbitrary set.
    std::vector<std::string> next;
    const bool stable = coin(rng, 0.5);
    for (StateId s : pmc.states()) {
      if (s == v.initial() || s == v.target || removed.count(s)) continue;
      if (stable ? v.is_volatile(s) && coin(rng, 0.7) : coin(rng, 0.4)) next.push_back(pmc.name(s));
    }
    for (const auto &a : added)
      if (coin(rng, 0.7)) next.push_back(a);
    std::shuffle(next.begin(), next.end(), rng);
    d.next_volatile = std::move(next);

    try {
      apply_diff(v, d);
      return d;
    } catch (const ModelError &) {
    }
  }
  return std::nullopt;
}

/// Every state other than the initial and target, in index order.
inline std::vector<StateId> eliminable(const Vpmc &v) {
  std::vector<StateId> out;
  for (StateId s : v.pmc.states())
    if (s != v.initial() && s != v.target) out.push_back(s);
  return out;
}

/// A random model followed by `steps` legal reconfigurations.
struct Chain {
  std::vector<Vpmc> models;
  std::vector<Diff> diffs;
};

inline Chain random_chain(Rng &rng, std::size_t steps, const RandomModelOptions &opt = {3, 12}) {
  for (;;) {
    Chain c;
    c.models.push_back(random_vpmc(rng, opt, 2));
    bool ok = true;
    for (std::size_t k = 0; k < steps && ok; ++k) {
      auto d = random_legal_diff(rng, c.models.back(), std::to_string(k));
      if (!d) {
        ok = false;
        break;
      }
      c.models.push_back(apply_diff(c.models.back(), *d));
      c.diffs.push_back(std::move(*d));
    }
    if (ok) return c;
  }
}

}  // namespace stelim::testing

#endif  // STELIM_TESTS_RANDOM_MODELS_HPP
