#include "stelim/model.hpp"

#include <algorithm>
#include <deque>

namespace stelim {

Pmc::Slot &Pmc::slot(StateId s) {
  if (!contains(s)) throw UnknownState("no state with index " + std::to_string(s));
  return slots_[s];
}

StateId Pmc::add_state(const std::string &name) {
  if (by_name_.count(name)) throw DuplicateState("duplicate state '" + name + "'");
  const auto id = static_cast<StateId>(slots_.size());
  slots_.push_back(Slot{name, true, {}, {}, {}});
  by_name_.emplace(name, id);
  ++alive_count_;
  return id;
}

void Pmc::remove_state(StateId s) {
  Slot &sl = slot(s);
  for (const auto &[to, value] : sl.out)
    if (to != s) slots_[to].in.erase(s);
  for (StateId from : sl.in)
    if (from != s) slots_[from].out.erase(s);
  sl.out.clear();
  sl.in.clear();
  sl.reward = RationalFunction();
  sl.alive = false;
  by_name_.erase(sl.name);
  --alive_count_;
  if (initial_ == s) initial_ = kNoState;
}

std::vector<StateId> Pmc::states() const {
  std::vector<StateId> out;
  out.reserve(alive_count_);
  for (StateId s = 0; s < slots_.size(); ++s)
    if (slots_[s].alive) out.push_back(s);
  return out;
}

std::optional<StateId> Pmc::find(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

StateId Pmc::id(std::string_view name) const {
  if (auto s = find(name)) return *s;
  throw UnknownState("unknown state '" + std::string(name) + "'");
}

std::string Pmc::fresh_name(const std::string &base) const {
  if (!by_name_.count(base)) return base;
  for (std::size_t k = 1;; ++k) {
    std::string candidate = base + "_" + std::to_string(k);
    if (!by_name_.count(candidate)) return candidate;
  }
}

void Pmc::set_initial(StateId s) {
  slot(s);
  initial_ = s;
}

const RationalFunction *Pmc::entry(StateId from, StateId to) const {
  if (!contains(from)) return nullptr;
  const Row &row = slots_[from].out;
  auto it = row.find(to);
  return it == row.end() ? nullptr : &it->second;
}

RationalFunction Pmc::at(StateId from, StateId to) const {
  const RationalFunction *e = entry(from, to);
  return e ? *e : RationalFunction();
}

void Pmc::set(StateId from, StateId to, RationalFunction value) {
  Slot &f = slot(from);
  Slot &t = slot(to);
  if (value.is_zero()) {
    f.out.erase(to);
    t.in.erase(from);
    return;
  }
  f.out.insert_or_assign(to, std::move(value));
  t.in.insert(from);
}

void Pmc::erase(StateId from, StateId to) { set(from, to, RationalFunction()); }

std::size_t Pmc::num_transitions() const {
  std::size_t n = 0;
  for (const auto &s : slots_)
    if (s.alive) n += s.out.size();
  return n;
}

bool Pmc::has_rewards() const {
  return std::any_of(slots_.begin(), slots_.end(), [](const Slot &s) { return s.alive && !s.reward.is_zero(); });
}

StateSet Vpmc::protected_states() const {
  StateSet m = volatile_states;
  m.insert(pmc.initial());
  m.insert(target);
  return m;
}

Graph underlying_graph(const Pmc &pmc) {
  Graph g;
  g.pre.resize(pmc.slot_count());
  g.post.resize(pmc.slot_count());
  for (StateId s : pmc.states()) {
    g.states.insert(s);
    for (const auto &[t, value] : pmc.successors(s)) {
      g.post[s].insert(t);
      g.pre[t].insert(s);
    }
  }
  return g;
}

StateSet neighbourhood(const Graph &g, StateId s) {
  if (!g.states.count(s)) throw UnknownState("no state with index " + std::to_string(s));
  StateSet n = g.pre[s];
  n.insert(g.post[s].begin(), g.post[s].end());
  n.insert(s);
  return n;
}

StateSet neighbourhood(const Pmc &pmc, StateId s) {
  if (!pmc.contains(s)) throw UnknownState("no state with index " + std::to_string(s));
  StateSet n = pmc.predecessors(s);
  for (const auto &[t, value] : pmc.successors(s)) n.insert(t);
  n.insert(s);
  return n;
}

namespace {

template <typename Next>
StateSet search(StateId start, Next next) {
  StateSet seen{start};
  std::deque<StateId> queue{start};
  while (!queue.empty()) {
    const StateId s = queue.front();
    queue.pop_front();
    next(s, [&](StateId t) {
      if (seen.insert(t).second) queue.push_back(t);
    });
  }
  return seen;
}

bool has_fresh_initial_shape(const Pmc &pmc, StateId s, const StateSet &targets) {
  if (!pmc.predecessors(s).empty() || !pmc.reward(s).is_zero() || targets.count(s)) return false;
  const Row &row = pmc.successors(s);
  return row.size() == 1 && row.begin()->second.is_one() && row.begin()->first != s;
}

}  // namespace

StateSet forward_reachable(const Pmc &pmc, StateId from) {
  return search(from, [&](StateId s, auto visit) {
    for (const auto &[t, value] : pmc.successors(s)) visit(t);
  });
}

StateSet backward_reachable(const Pmc &pmc, StateId to) {
  return search(to, [&](StateId s, auto visit) {
    for (StateId t : pmc.predecessors(s)) visit(t);
  });
}

Vpmc preprocess(Pmc pmc, const StateSet &targets, const StateSet &volatile_states) {
  if (targets.empty()) throw ModelError("no target state");
  if (pmc.initial() == kNoState) throw ModelError("no initial state");
  for (StateId t : targets) {
    if (!pmc.contains(t)) throw UnknownState("unknown target index " + std::to_string(t));
    std::vector<StateId> succ;
    for (const auto &[s, value] : pmc.successors(t)) succ.push_back(s);
    for (StateId s : succ) pmc.erase(t, s);
  }

  Vpmc out;
  if (targets.size() == 1) {
    out.target = *targets.begin();
  } else {
    out.target = pmc.add_state(pmc.fresh_name("_st"));
    for (StateId t : targets) pmc.set(t, out.target, RationalFunction(1));
  }
  pmc.set_reward(out.target, RationalFunction());

  const StateId old_initial = pmc.initial();
  if (!has_fresh_initial_shape(pmc, old_initial, targets)) {
    const StateId s0 = pmc.add_state(pmc.fresh_name("_s0"));
    pmc.set(s0, old_initial, RationalFunction(1));
    pmc.set_initial(s0);
  }

  const StateSet fwd = forward_reachable(pmc, pmc.initial());
  if (!fwd.count(out.target)) throw EmptyModel("the target is unreachable from the initial state");
  const StateSet bwd = backward_reachable(pmc, out.target);
  for (StateId s : pmc.states())
    if (!fwd.count(s) || !bwd.count(s)) pmc.remove_state(s);

  for (StateId v : volatile_states)
    if (pmc.contains(v) && v != pmc.initial() && v != out.target) out.volatile_states.insert(v);
  out.pmc = std::move(pmc);
  return out;
}

Vpmc preprocess(const ModelInput &input) { return preprocess(input.pmc, input.targets, input.volatile_states); }

void check_well_formed(const Vpmc &v) {
  const Pmc &pmc = v.pmc;
  if (!pmc.contains(v.initial())) throw ModelError("initial state missing");
  if (!pmc.contains(v.target)) throw ModelError("target state missing");
  if (!pmc.successors(v.target).empty()) throw ModelError("target state '" + pmc.name(v.target) + "' is not absorbing");
  if (!pmc.predecessors(v.initial()).empty())
    throw ModelError("initial state '" + pmc.name(v.initial()) + "' has incoming transitions");
  const StateSet fwd = forward_reachable(pmc, v.initial());
  const StateSet bwd = backward_reachable(pmc, v.target);
  for (StateId s : pmc.states()) {
    if (!fwd.count(s)) throw ModelError("state '" + pmc.name(s) + "' is unreachable from the initial state");
    if (!bwd.count(s)) throw ModelError("the target is unreachable from state '" + pmc.name(s) + "'");
  }
}

std::vector<StateReport> validate(const Pmc &pmc) {
  UncountedScope quiet;
  std::vector<StateReport> out;
  for (StateId s : pmc.states()) {
    StateReport r{s, RationalFunction(), false, {}};
    for (const auto &[t, value] : pmc.successors(s)) {
      if (value.is_zero()) r.zero_entries.push_back(t);
      r.row_sum = r.row_sum + value;
    }
    r.stochastic = r.row_sum.is_one();
    out.push_back(std::move(r));
  }
  return out;
}

bool structurally_equal(const Pmc &a, const Pmc &b) {
  if (a.params() != b.params() || a.num_states() != b.num_states()) return false;
  if ((a.initial() == kNoState) != (b.initial() == kNoState)) return false;
  if (a.initial() != kNoState && a.name(a.initial()) != b.name(b.initial())) return false;
  for (StateId s : a.states()) {
    auto t = b.find(a.name(s));
    if (!t) return false;
    if (!(a.reward(s) == b.reward(*t))) return false;
    const Row &ra = a.successors(s);
    const Row &rb = b.successors(*t);
    if (ra.size() != rb.size()) return false;
    for (const auto &[to, value] : ra) {
      auto to_b = b.find(a.name(to));
      if (!to_b) return false;
      const RationalFunction *e = b.entry(*t, *to_b);
      if (!e || !(*e == value)) return false;
    }
  }
  return true;
}

bool structurally_equal(const Vpmc &a, const Vpmc &b) {
  if (!structurally_equal(a.pmc, b.pmc)) return false;
  if (a.pmc.name(a.target) != b.pmc.name(b.target)) return false;
  if (a.volatile_states.size() != b.volatile_states.size()) return false;
  for (StateId v : a.volatile_states) {
    auto w = b.pmc.find(a.pmc.name(v));
    if (!w || !b.volatile_states.count(*w)) return false;
  }
  return true;
}

}  // namespace stelim
