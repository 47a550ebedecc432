#include "stelim/incremental.hpp"

#include <algorithm>

namespace stelim {

namespace {

bool old_state_may_change(const Vpmc &before, StateId s) {
  return !before.pmc.contains(s) || before.is_volatile(s) || s == before.target;
}

std::string describe_entry(const Vpmc &before, const Vpmc &after, StateId a, StateId b) {
  auto name = [&](StateId s) { return before.pmc.contains(s) ? before.pmc.name(s) : after.pmc.name(s); };
  return name(a) + " -> " + name(b);
}

}  // namespace

void check_reconfiguration(const Vpmc &before, const Vpmc &after) {
  if (before.initial() != after.initial() || !after.pmc.contains(after.initial()))
    throw IllegalReconfiguration("the initial state must be shared");
  if (before.target != after.target || !after.pmc.contains(after.target))
    throw IllegalReconfiguration("the target state must be shared");
  static const Row kEmpty;
  const std::size_t slots = std::max(before.pmc.slot_count(), after.pmc.slot_count());
  for (StateId s = 0; s < slots; ++s) {
    const bool in_before = before.pmc.contains(s), in_after = after.pmc.contains(s);
    if (!in_before && !in_after) continue;
    if (in_before && !in_after && !old_state_may_change(before, s))
      throw IllegalReconfiguration("removed state '" + before.pmc.name(s) + "' is not volatile");
    const Row &ro = in_before ? before.pmc.successors(s) : kEmpty;
    const Row &rn = in_after ? after.pmc.successors(s) : kEmpty;
    auto check = [&](StateId t) {
      if (!old_state_may_change(before, s) || !old_state_may_change(before, t))
        throw IllegalReconfiguration("entry " + describe_entry(before, after, s, t) +
                                     " changes but touches a non-volatile state");
    };
    for (const auto &[t, value] : ro) {
      auto it = rn.find(t);
      if (it == rn.end() || !(it->second == value)) check(t);
    }
    for (const auto &[t, value] : rn)
      if (!ro.count(t)) check(t);
    if (in_before && in_after && !(before.pmc.reward(s) == after.pmc.reward(s)) && !old_state_may_change(before, s))
      throw IllegalReconfiguration("reward of non-volatile state '" + before.pmc.name(s) + "' changes");
  }
}

Vpmc apply_diff(const Vpmc &vpmc, const Diff &diff) {
  Vpmc r = vpmc;
  Pmc &pmc = r.pmc;
  for (const auto &name : diff.removed_states) {
    const StateId s = pmc.id(name);
    if (s == r.initial() || s == r.target)
      throw IllegalReconfiguration("cannot remove the initial or target state '" + name + "'");
    pmc.remove_state(s);
    r.volatile_states.erase(s);
    std::erase(r.volatile_order, s);
  }
  for (const auto &added : diff.added_states) {
    const StateId s = pmc.add_state(added.name);
    if (added.reward) pmc.set_reward(s, *added.reward);
  }
  for (const auto &t : diff.set_transitions) {
    const StateId from = pmc.id(t.from), to = pmc.id(t.to);
    if (from == r.target && !t.value.is_zero())
      throw IllegalReconfiguration("the target state '" + t.from + "' must stay absorbing");
    pmc.set(from, to, t.value);
  }
  for (const auto &[name, value] : diff.set_rewards) {
    const StateId s = pmc.id(name);
    if (s == r.target || s == r.initial())
      throw IllegalReconfiguration("rewards of the initial and target states are fixed at 0");
    pmc.set_reward(s, value);
  }
  if (diff.next_volatile) {
    r.volatile_states.clear();
    r.volatile_order.clear();
    for (const auto &name : *diff.next_volatile) {
      const StateId s = pmc.id(name);
      if (s == r.initial()) throw IllegalReconfiguration("the initial state cannot be volatile");
      if (s != r.target && r.volatile_states.insert(s).second) r.volatile_order.push_back(s);
    }
  }
  check_reconfiguration(vpmc, r);
  check_well_formed(r);
  return r;
}

Diff make_diff(const Vpmc &from, const Vpmc &to) {
  Diff d;
  const Pmc &a = from.pmc;
  const Pmc &b = to.pmc;
  for (StateId s : a.states())
    if (!b.find(a.name(s))) d.removed_states.push_back(a.name(s));
  for (StateId s : b.states()) {
    if (a.find(b.name(s))) continue;
    Diff::AddedState added{b.name(s), std::nullopt};
    if (!b.reward(s).is_zero()) added.reward = b.reward(s);
    d.added_states.push_back(std::move(added));
  }
  for (StateId s : b.states()) {
    const auto old = a.find(b.name(s));
    for (const auto &[t, value] : b.successors(s)) {
      const RationalFunction *prev = nullptr;
      if (old)
        if (auto ot = a.find(b.name(t))) prev = a.entry(*old, *ot);
      if (!prev || !(*prev == value)) d.set_transitions.push_back({b.name(s), b.name(t), value});
    }
    if (!old) continue;
    for (const auto &[t, value] : a.successors(*old)) {
      auto nt = b.find(a.name(t));
      if (nt && !b.entry(s, *nt)) d.set_transitions.push_back({b.name(s), a.name(t), RationalFunction()});
    }
    if (!(a.reward(*old) == b.reward(s))) d.set_rewards.emplace_back(b.name(s), b.reward(s));
  }
  std::vector<std::string> vol;
  StateSet listed;
  for (StateId v : to.volatile_order)
    if (to.volatile_states.count(v) && listed.insert(v).second) vol.push_back(b.name(v));
  for (StateId v : to.volatile_states)
    if (!listed.count(v)) vol.push_back(b.name(v));
  d.next_volatile = std::move(vol);
  return d;
}

Classification classify(const Vpmc &before, const Pmc &after) {
  Classification c;
  const Pmc &old = before.pmc;
  for (StateId s : after.states()) {
    if (!old.contains(s)) {
      c.introduced.insert(s);
      continue;
    }
    bool same = old.successors(s) == after.successors(s) && old.predecessors(s) == after.predecessors(s) &&
                old.reward(s) == after.reward(s);
    if (same) {
      for (StateId p : old.predecessors(s)) {
        if (!(old.at(p, s) == after.at(p, s))) {
          same = false;
          break;
        }
      }
    }
    (same ? c.consistent : c.reconfigured).insert(s);
  }
  return c;
}

namespace {

template <typename Map, typename Key>
void accumulate(Map &m, const Key &key, const RationalFunction &value) {
  auto it = m.find(key);
  if (it == m.end()) {
    if (!value.is_zero()) m.emplace(key, value);
    return;
  }
  it->second = it->second + value;
  if (it->second.is_zero()) m.erase(it);
}

/// Files each contribution of an elimination into a cache under
/// construction: non-volatile states feed the partial matrix, volatile
/// states the elimination map. Uncounted.
class CacheRecorder : public EliminationObserver {
public:
  explicit CacheRecorder(EliminationCache &cache) : cache_(cache) {}

  void on_transition(StateId e, StateId s1, StateId s2, const RationalFunction &p) override {
    if (!cache_.protected_states.count(s1) || !cache_.protected_states.count(s2)) return;
    UncountedScope quiet;
    if (cache_.volatile_states.count(e))
      cache_.map.insert_or_assign(StateTriple{e, s1, s2}, p);
    else
      accumulate(cache_.partial, StatePair{s1, s2}, p);
  }

  void on_reward(StateId e, StateId s1, const RationalFunction &c) override {
    if (!cache_.protected_states.count(s1)) return;
    UncountedScope quiet;
    if (cache_.volatile_states.count(e))
      cache_.reward_map.insert_or_assign(StatePair{e, s1}, c);
    else
      accumulate(cache_.partial_reward, s1, c);
  }

private:
  EliminationCache &cache_;
};

bool disjoint(const StateSet &a, const StateSet &b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return false;
    if (*i < *j)
      ++i;
    else
      ++j;
  }
  return true;
}

}  // namespace

VpmcResult parametric_reachability_vpmc(const Vpmc &vpmc, const EliminationOrder &order,
                                        const EliminationOptions &options) {
  if (!is_valid_order(vpmc, order))
    throw std::invalid_argument("elimination order must cover every state and rank volatile states last");
  VpmcResult out;
  EliminationCache &cache = out.cache;
  cache.order = order;
  cache.volatile_states = vpmc.volatile_states;
  cache.protected_states = vpmc.protected_states();
  cache.rewards = options.rewards;
  CacheRecorder recorder(cache);
  Pmc work = vpmc.pmc;
  for (StateId s : order.sequence()) eliminate_state(work, s, options, &recorder);
  out.probability = work.at(vpmc.initial(), vpmc.target);
  out.reward = work.reward(vpmc.initial());
  return out;
}

ReconfigurationResult reconfigured_reachability(const Vpmc &before, const Vpmc &after, const EliminationCache &cache,
                                                const IncrementalOptions &options) {
  check_reconfiguration(before, after);
  check_well_formed(after);
  if (cache.protected_states != before.protected_states())
    throw std::invalid_argument("the cache does not belong to the previous model");

  ReconfigurationResult out;
  out.classes = classify(before, after.pmc);
  ReconfigurationTrace &trace = out.trace;
  const StateSet &introduced = out.classes.introduced;
  const StateSet &old_protected = cache.protected_states;
  EliminationOptions elim = options.elimination;
  elim.rewards = cache.rewards;

  // Sequence of old volatile states still present, in cached rank order,
  // with the introduced states of the next volatile set slotted in right
  // after the last state that leaves the volatile set. This keeps the
  // effective sequence volatile-last for the next model whenever possible.
  std::vector<StateId> loop;
  for (StateId s : cache.order.sequence())
    if (cache.volatile_states.count(s) && after.pmc.contains(s)) loop.push_back(s);
  std::size_t slot = 0;
  for (std::size_t i = 0; i < loop.size(); ++i)
    if (!after.is_volatile(loop[i])) slot = i + 1;
  std::vector<StateId> late_new, early_new;
  for (StateId n : introduced) (after.is_volatile(n) ? late_new : early_new).push_back(n);
  if (after.volatile_order.empty()) {
    loop.insert(loop.begin() + static_cast<std::ptrdiff_t>(slot), late_new.begin(), late_new.end());
  } else {
    // Merge by hint position, never before `slot`.
    std::map<StateId, std::size_t> hint;
    for (std::size_t i = 0; i < after.volatile_order.size(); ++i) hint.emplace(after.volatile_order[i], i);
    auto pos = [&](StateId s) {
      auto it = hint.find(s);
      return it == hint.end() ? hint.size() : it->second;
    };
    std::stable_sort(late_new.begin(), late_new.end(), [&](StateId a, StateId b) { return pos(a) < pos(b); });
    for (StateId n : late_new) {
      std::size_t j = slot;
      while (j < loop.size() && pos(loop[j]) <= pos(n)) ++j;
      loop.insert(loop.begin() + static_cast<std::ptrdiff_t>(j), n);
    }
  }

  // The refreshed cache is exact when no old non-volatile state becomes
  // volatile and the effective sequence ranks the next volatile set last.
  bool refresh = true;
  for (StateId v : after.volatile_states)
    if (before.pmc.contains(v) && !cache.volatile_states.count(v)) refresh = false;
  bool seen_volatile = false;
  for (StateId s : loop) {
    if (after.is_volatile(s))
      seen_volatile = true;
    else if (seen_volatile)
      refresh = false;
  }

  EliminationCache next;
  next.volatile_states = after.volatile_states;
  next.protected_states = after.protected_states();
  next.rewards = cache.rewards;
  if (refresh) {
    for (const auto &[key, value] : cache.partial)
      if (next.protected_states.count(key.first) && next.protected_states.count(key.second)) next.partial.emplace(key, value);
    for (const auto &[s, value] : cache.partial_reward)
      if (next.protected_states.count(s)) next.partial_reward.emplace(s, value);
  }
  CacheRecorder recorder(next);
  EliminationObserver *observer = refresh ? &recorder : nullptr;

  Pmc work = after.pmc;
  std::map<StatePair, RationalFunction> partial = cache.partial;
  std::map<StateId, RationalFunction> partial_reward = cache.partial_reward;
  StateSet infected = out.classes.reconfigured;
  std::vector<StateId> effective;

  for (StateId s : cache.order.sequence()) {
    if (!work.contains(s) || old_protected.count(s)) continue;
    work.remove_state(s);
    trace.deleted.push_back(s);
    effective.push_back(s);
  }

  auto add_into_work = [&](StateId s1, StateId s2, const RationalFunction &value) {
    const RationalFunction *old = work.entry(s1, s2);
    work.set(s1, s2, old ? *old + value : value);
    trace.flushed.emplace_back(s1, s2, work.at(s1, s2));
  };

  auto genuine = [&](StateId e, bool track) {
    // Move the cached mass incident to e into the working model first, so
    // that e's entries are the real ones.
    for (auto it = partial.begin(); it != partial.end();) {
      const auto [s1, s2] = it->first;
      if ((s1 == e || s2 == e) && work.contains(s1) && work.contains(s2)) {
        add_into_work(s1, s2, it->second);
        it = partial.erase(it);
      } else {
        ++it;
      }
    }
    if (auto it = partial_reward.find(e); it != partial_reward.end()) {
      const RationalFunction &r = work.reward(e);
      work.set_reward(e, r.is_zero() ? it->second : r + it->second);
      partial_reward.erase(it);
    }
    const StateSet neigh = neighbourhood(work, e);
    if (track) trace.infected_neighbourhood.push_back(!disjoint(neigh, infected));
    eliminate_state(work, e, elim, observer);
    infected.insert(neigh.begin(), neigh.end());
    trace.eliminated.push_back(e);
    effective.push_back(e);
  };

  for (StateId n : early_new) genuine(n, false);

  for (StateId e : loop) {
    if (introduced.count(e)) {
      genuine(e, false);
      continue;
    }
    if (!disjoint(neighbourhood(work, e), infected)) {
      genuine(e, true);
      continue;
    }
    // Uninfected: the cached contributions of e are still exact.
    const bool keep = after.is_volatile(e);
    for (auto it = cache.map.lower_bound(StateTriple{e, 0, 0}); it != cache.map.end() && std::get<0>(it->first) == e;
         ++it) {
      const auto [s, s1, s2] = it->first;
      if (!work.contains(s1) || !work.contains(s2))
        throw std::logic_error("cached contribution of '" + before.pmc.name(e) + "' refers to a removed state");
      accumulate(partial, StatePair{s1, s2}, it->second);
      if (refresh && next.protected_states.count(s1) && next.protected_states.count(s2)) {
        if (keep)
          next.map.emplace(it->first, it->second);
        else
          recorder.on_transition(e, s1, s2, it->second);
      }
    }
    for (auto it = cache.reward_map.lower_bound(StatePair{e, 0});
         it != cache.reward_map.end() && it->first.first == e; ++it) {
      const StateId s1 = it->first.second;
      if (!work.contains(s1))
        throw std::logic_error("cached reward of '" + before.pmc.name(e) + "' refers to a removed state");
      accumulate(partial_reward, s1, it->second);
      if (refresh && next.protected_states.count(s1)) {
        if (keep)
          next.reward_map.emplace(it->first, it->second);
        else
          recorder.on_reward(e, s1, it->second);
      }
    }
    work.remove_state(e);
    trace.replayed.push_back(e);
    effective.push_back(e);
  }

  const StateId s0 = after.initial(), st = after.target;
  out.probability = work.at(s0, st);
  if (auto it = partial.find(StatePair{s0, st}); it != partial.end())
    out.probability = out.probability.is_zero() ? it->second : out.probability + it->second;
  out.reward = work.reward(s0);
  if (auto it = partial_reward.find(s0); it != partial_reward.end())
    out.reward = out.reward.is_zero() ? it->second : out.reward + it->second;

  if (refresh) {
    next.order = EliminationOrder(std::move(effective));
    out.cache = std::move(next);
  } else {
    out.cache = parametric_reachability_vpmc(after, make_order(after, options.heuristic), elim).cache;
    out.cache_rebuilt = true;
  }
  return out;
}

std::vector<SweepStep> incremental_sweep(const Vpmc &initial, const std::vector<Diff> &diffs,
                                         const SweepOptions &options) {
  std::vector<SweepStep> steps;
  MetricsCounter incr, naive;
  const EliminationOptions &elim = options.incremental.elimination;

  auto run_naive = [&](const Vpmc &m, SweepStep &step) {
    if (!options.run_naive) return;
    const OpCounts start = naive.counts();
    {
      MetricsScope scope(naive);
      const EliminationOrder order = make_order(m, options.incremental.heuristic);
      Pmc work = m.pmc;
      for (StateId s : order.sequence()) eliminate_state(work, s, elim);
      step.naive_value = work.at(m.initial(), m.target);
      if (elim.rewards) step.naive_reward = work.reward(m.initial());
      step.naive_eliminations = order.size();
    }
    step.naive = naive.counts() - start;
    step.naive_cumulative = naive.counts();
  };

  Vpmc current = initial;
  EliminationCache cache;
  {
    SweepStep step;
    {
      MetricsScope scope(incr);
      const EliminationOrder order = make_order(current, options.incremental.heuristic);
      VpmcResult r = parametric_reachability_vpmc(current, order, elim);
      step.value = std::move(r.probability);
      step.reward = std::move(r.reward);
      cache = std::move(r.cache);
      step.incremental_eliminations = order.size();
    }
    step.incremental = incr.counts();
    step.incremental_cumulative = incr.counts();
    run_naive(current, step);
    steps.push_back(std::move(step));
  }

  for (const Diff &diff : diffs) {
    SweepStep step;
    Vpmc next;
    {
      UncountedScope quiet;
      next = apply_diff(current, diff);
    }
    const OpCounts start = incr.counts();
    {
      MetricsScope scope(incr);
      ReconfigurationResult r = reconfigured_reachability(current, next, cache, options.incremental);
      step.value = std::move(r.probability);
      step.reward = std::move(r.reward);
      step.cache_rebuilt = r.cache_rebuilt;
      step.incremental_eliminations = r.trace.eliminated.size();
      cache = std::move(r.cache);
    }
    step.incremental = incr.counts() - start;
    step.incremental_cumulative = incr.counts();
    run_naive(next, step);
    current = std::move(next);
    steps.push_back(std::move(step));
  }
  return steps;
}

}  // namespace stelim
