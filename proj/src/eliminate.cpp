#include "stelim/eliminate.hpp"

#include <algorithm>

namespace stelim {

void eliminate_state(Pmc &pmc, StateId e, const EliminationOptions &options, EliminationObserver *observer) {
  if (!pmc.contains(e)) throw UnknownState("cannot eliminate missing state " + std::to_string(e));
  const RationalFunction *loop = pmc.entry(e, e);
  const bool has_loop = loop != nullptr;
  RationalFunction self, inv;
  if (has_loop) {
    self = *loop;
    if (self.is_one()) throw IdenticallyOneSelfLoop("state '" + pmc.name(e) + "' has a self-loop of probability 1");
    inv = RationalFunction(1) / (RationalFunction(1) - self);
  }

  std::vector<StateId> preds;
  for (StateId s : pmc.predecessors(e))
    if (s != e) preds.push_back(s);
  std::vector<std::pair<StateId, RationalFunction>> succs;
  for (const auto &[s, value] : pmc.successors(e))
    if (s != e) succs.emplace_back(s, value);

  const RationalFunction r_e = options.rewards ? pmc.reward(e) : RationalFunction();
  RationalFunction printed_factor;
  if (!r_e.is_zero() && options.factor == RewardFactor::kPrintedSelfTransitions && has_loop)
    printed_factor = self * inv;

  for (StateId s1 : preds) {
    const RationalFunction to_e = pmc.at(s1, e);
    const RationalFunction a = has_loop ? to_e * inv : to_e;
    for (const auto &[s2, b] : succs) {
      RationalFunction p = a * b;
      if (observer) observer->on_transition(e, s1, s2, p);
      if (const RationalFunction *old = pmc.entry(s1, s2)) {
        pmc.set(s1, s2, *old + p);
      } else {
        pmc.set(s1, s2, std::move(p));
      }
    }
    if (!r_e.is_zero()) {
      RationalFunction c;
      if (options.factor == RewardFactor::kExpectedVisits)
        c = a * r_e;
      else if (has_loop)
        c = to_e * printed_factor * r_e;
      if (c.is_zero()) continue;
      if (observer) observer->on_reward(e, s1, c);
      const RationalFunction &old = pmc.reward(s1);
      pmc.set_reward(s1, old.is_zero() ? c : old + c);
    }
  }
  pmc.remove_state(e);
}

void eliminate_state_rewards(Pmc &pmc, StateId e, RewardFactor factor, EliminationObserver *observer) {
  eliminate_state(pmc, e, EliminationOptions{true, factor}, observer);
}

EliminationOrder::EliminationOrder(std::vector<StateId> sequence) : sequence_(std::move(sequence)) {
  for (std::size_t i = 0; i < sequence_.size(); ++i)
    if (!rank_.emplace(sequence_[i], i + 1).second)
      throw std::invalid_argument("elimination order lists state " + std::to_string(sequence_[i]) + " twice");
}

std::size_t EliminationOrder::rank(StateId s) const {
  auto it = rank_.find(s);
  return it == rank_.end() ? 0 : it->second;
}

namespace {

std::vector<StateId> min_degree(std::vector<StateId> tier,
                                std::unordered_map<StateId, StateSet> &adj_in,
                                std::unordered_map<StateId, StateSet> &adj_out) {
  std::vector<StateId> out;
  std::sort(tier.begin(), tier.end());
  StateSet remaining(tier.begin(), tier.end());
  while (!remaining.empty()) {
    StateId best = kNoState;
    std::size_t best_cost = 0;
    for (StateId s : remaining) {
      StateSet n = adj_in[s];
      n.insert(adj_out[s].begin(), adj_out[s].end());
      n.erase(s);
      if (best == kNoState || n.size() < best_cost) {
        best = s;
        best_cost = n.size();
      }
    }
    StateSet pre = adj_in[best], post = adj_out[best];
    pre.erase(best);
    post.erase(best);
    for (StateId a : pre) {
      adj_out[a].erase(best);
      for (StateId b : post) {
        adj_out[a].insert(b);
        adj_in[b].insert(a);
      }
    }
    for (StateId b : post) adj_in[b].erase(best);
    adj_in.erase(best);
    adj_out.erase(best);
    remaining.erase(best);
    out.push_back(best);
  }
  return out;
}

}  // namespace

EliminationOrder make_order(const Vpmc &vpmc, OrderHeuristic heuristic) {
  std::vector<StateId> stable, vol;
  for (StateId s : vpmc.pmc.states()) {
    if (s == vpmc.initial() || s == vpmc.target) continue;
    (vpmc.is_volatile(s) ? vol : stable).push_back(s);
  }
  if (heuristic == OrderHeuristic::kInputOrder) {
    stable.insert(stable.end(), vol.begin(), vol.end());
    return EliminationOrder(std::move(stable));
  }
  std::unordered_map<StateId, StateSet> adj_in, adj_out;
  for (StateId s : vpmc.pmc.states()) {
    adj_in[s] = vpmc.pmc.predecessors(s);
    for (const auto &[t, value] : vpmc.pmc.successors(s)) adj_out[s].insert(t);
  }
  std::vector<StateId> seq = min_degree(stable, adj_in, adj_out);
  std::vector<StateId> tail = min_degree(vol, adj_in, adj_out);
  seq.insert(seq.end(), tail.begin(), tail.end());
  return EliminationOrder(std::move(seq));
}

bool is_valid_order(const Vpmc &vpmc, const EliminationOrder &order) {
  std::size_t expected = 0;
  std::size_t last_stable = 0, first_volatile = order.size() + 1;
  for (StateId s : vpmc.pmc.states()) {
    if (s == vpmc.initial() || s == vpmc.target) {
      if (order.contains(s)) return false;
      continue;
    }
    ++expected;
    const std::size_t r = order.rank(s);
    if (r == 0) return false;
    if (vpmc.is_volatile(s))
      first_volatile = std::min(first_volatile, r);
    else
      last_stable = std::max(last_stable, r);
  }
  return expected == order.size() && last_stable < first_volatile;
}

namespace {

Pmc eliminate_all(const Vpmc &vpmc, const EliminationOrder &order, const EliminationOptions &options) {
  Pmc work = vpmc.pmc;
  for (StateId s : order.sequence()) eliminate_state(work, s, options);
  for (StateId s : work.states())
    if (s != vpmc.initial() && s != vpmc.target)
      throw std::invalid_argument("elimination order misses state '" + work.name(s) + "'");
  return work;
}

}  // namespace

RationalFunction solve_reachability(const Vpmc &vpmc, const EliminationOrder &order) {
  return eliminate_all(vpmc, order, {}).at(vpmc.initial(), vpmc.target);
}

RationalFunction solve_reachability(const Vpmc &vpmc) { return solve_reachability(vpmc, make_order(vpmc)); }

RationalFunction solve_expected_reward(const Vpmc &vpmc, const EliminationOrder &order, RewardFactor factor) {
  return eliminate_all(vpmc, order, EliminationOptions{true, factor}).reward(vpmc.initial());
}

}  // namespace stelim
