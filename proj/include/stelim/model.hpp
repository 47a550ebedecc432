#ifndef STELIM_MODEL_HPP
#define STELIM_MODEL_HPP

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "stelim/rational_function.hpp"

namespace stelim {

/// Dense state index. Indices are never reused within one model lineage:
/// removed states leave a dead slot, so two models related by a diff share
/// the identity of their common states.
using StateId = std::uint32_t;
inline constexpr StateId kNoState = std::numeric_limits<StateId>::max();
using StateSet = std::set<StateId>;
using Row = std::map<StateId, RationalFunction>;

class ModelError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// The target cannot be reached from the initial state.
class EmptyModel : public ModelError {
public:
  using ModelError::ModelError;
};

class UnknownState : public ModelError {
public:
  using ModelError::ModelError;
};

class DuplicateState : public ModelError {
public:
  using ModelError::ModelError;
};

/// Parametric Markov chain with optional state rewards. The matrix is
/// sparse; absent entries are zero and a stored entry is never the zero
/// function. Successor rows and predecessor sets are kept consistent by
/// every mutation.
class Pmc {
public:
  Pmc() = default;
  explicit Pmc(std::vector<std::string> params) : params_(std::move(params)) {}

  const std::vector<std::string> &params() const { return params_; }
  void set_params(std::vector<std::string> params) { params_ = std::move(params); }

  /// Throws DuplicateState if an alive state already has this name.
  StateId add_state(const std::string &name);
  /// Removes the state and all incident entries without any arithmetic.
  void remove_state(StateId s);

  bool contains(StateId s) const { return s < slots_.size() && slots_[s].alive; }
  std::size_t slot_count() const { return slots_.size(); }
  std::size_t num_states() const { return alive_count_; }
  /// Alive states in ascending index order.
  std::vector<StateId> states() const;
  const std::string &name(StateId s) const { return slots_.at(s).name; }
  std::optional<StateId> find(std::string_view name) const;
  /// Like find but throws UnknownState.
  StateId id(std::string_view name) const;
  /// A name of the form `base`, `base_1`, ... not used by any alive state.
  std::string fresh_name(const std::string &base) const;

  StateId initial() const { return initial_; }
  void set_initial(StateId s);

  const RationalFunction *entry(StateId from, StateId to) const;
  RationalFunction at(StateId from, StateId to) const;
  /// Stores `value`; the zero function erases the entry.
  void set(StateId from, StateId to, RationalFunction value);
  void erase(StateId from, StateId to);
  const Row &successors(StateId s) const { return slots_.at(s).out; }
  const StateSet &predecessors(StateId s) const { return slots_.at(s).in; }
  std::size_t num_transitions() const;

  const RationalFunction &reward(StateId s) const { return slots_.at(s).reward; }
  void set_reward(StateId s, RationalFunction r) { slot(s).reward = std::move(r); }
  bool has_rewards() const;

private:
  struct Slot {
    std::string name;
    bool alive = true;
    Row out;
    StateSet in;
    RationalFunction reward;
  };
  std::vector<std::string> params_;
  std::vector<Slot> slots_;
  std::unordered_map<std::string, StateId> by_name_;
  std::size_t alive_count_ = 0;
  StateId initial_ = kNoState;

  Slot &slot(StateId s);
};

/// Preprocessed volatile PMC: single absorbing target, initial state without
/// predecessors, every state on a path from the initial state to the target.
struct Vpmc {
  Pmc pmc;
  StateId target = kNoState;
  StateSet volatile_states;
  /// Optional ranking hint for volatile states (e.g. the order in which a
  /// diff lists them); used to place introduced states when re-solving.
  std::vector<StateId> volatile_order;

  StateId initial() const { return pmc.initial(); }
  bool is_volatile(StateId s) const { return volatile_states.count(s) > 0; }
  /// Volatile states plus initial and target.
  StateSet protected_states() const;
};

/// A model as written: any number of targets, not yet preprocessed.
struct ModelInput {
  Pmc pmc;
  StateSet targets;
  StateSet volatile_states;
};

/// Underlying graph snapshot (edge iff a stored matrix entry).
struct Graph {
  std::vector<StateSet> pre;
  std::vector<StateSet> post;
  StateSet states;
};

Graph underlying_graph(const Pmc &pmc);
/// {s} together with its predecessors and successors. Throws UnknownState.
StateSet neighbourhood(const Graph &g, StateId s);
StateSet neighbourhood(const Pmc &pmc, StateId s);

StateSet forward_reachable(const Pmc &pmc, StateId from);
StateSet backward_reachable(const Pmc &pmc, StateId to);

/// Drops the outgoing edges of every target, reuses a single target as the
/// absorbing target (several targets get a fresh one), adds a fresh initial
/// state unless the initial already has that shape, and removes states not
/// on any initial-to-target path. Volatile states are carried over, except
/// the initial and the target.
Vpmc preprocess(Pmc pmc, const StateSet &targets, const StateSet &volatile_states = {});
Vpmc preprocess(const ModelInput &input);

/// Throws ModelError unless every state lies on a path from the initial
/// state to the target and the target is absorbing.
void check_well_formed(const Vpmc &vpmc);

struct StateReport {
  StateId state;
  RationalFunction row_sum;
  bool stochastic;
  std::vector<StateId> zero_entries;
};

/// Per alive state: row sum and whether it is identically 1. No operation
/// is counted.
std::vector<StateReport> validate(const Pmc &pmc);

/// Equality by state names, ignoring indices and dead slots.
bool structurally_equal(const Pmc &a, const Pmc &b);
bool structurally_equal(const Vpmc &a, const Vpmc &b);

}  // namespace stelim

#endif  // STELIM_MODEL_HPP
