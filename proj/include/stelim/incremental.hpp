#ifndef STELIM_INCREMENTAL_HPP
#define STELIM_INCREMENTAL_HPP

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "stelim/eliminate.hpp"
#include "stelim/metrics.hpp"
#include "stelim/model.hpp"

namespace stelim {

class IllegalReconfiguration : public ModelError {
public:
  using ModelError::ModelError;
};

/// A structural delta between two consecutive models, by state name.
struct Diff {
  struct AddedState {
    std::string name;
    std::optional<RationalFunction> reward;
  };
  struct Transition {
    std::string from;
    std::string to;
    RationalFunction value;  ///< zero removes the entry
  };
  std::vector<AddedState> added_states;
  std::vector<std::string> removed_states;
  std::vector<Transition> set_transitions;
  std::vector<std::pair<std::string, RationalFunction>> set_rewards;
  /// Volatile set of the resulting model; absent keeps the current one.
  std::optional<std::vector<std::string>> next_volatile;

  bool empty() const {
    return added_states.empty() && removed_states.empty() && set_transitions.empty() && set_rewards.empty() &&
           !next_volatile;
  }
};

/// Throws IllegalReconfiguration unless every changed entry (or reward) only
/// touches old states that are volatile or the target, and initial and
/// target are shared.
void check_reconfiguration(const Vpmc &before, const Vpmc &after);

/// Applies the diff and checks legality and well-formedness of the result.
/// Throws UnknownState, DuplicateState, IllegalReconfiguration or ModelError.
Vpmc apply_diff(const Vpmc &vpmc, const Diff &diff);

/// Name-based diff turning `from` into `to`, including the volatile set of
/// `to` (listed by its volatile_order when present, else by index).
Diff make_diff(const Vpmc &from, const Vpmc &to);

struct Classification {
  StateSet consistent;
  StateSet reconfigured;
  StateSet introduced;
};

/// Consistent: shared state whose incident entries and reward are unchanged.
/// Reconfigured: shared but changed. Introduced: only in the new model.
Classification classify(const Vpmc &before, const Pmc &after);

using StatePair = std::pair<StateId, StateId>;
using StateTriple = std::tuple<StateId, StateId, StateId>;

/// Reusable output of a cached elimination run. `partial` holds the mass
/// routed between protected states through eliminated non-volatile states;
/// `map` holds the contribution of each volatile state elimination to each
/// pair of protected states that were still present.
struct EliminationCache {
  std::map<StatePair, RationalFunction> partial;
  std::map<StateTriple, RationalFunction> map;
  std::map<StateId, RationalFunction> partial_reward;
  std::map<StatePair, RationalFunction> reward_map;
  EliminationOrder order;
  StateSet volatile_states;
  StateSet protected_states;
  bool rewards = false;
};

struct VpmcResult {
  RationalFunction probability;
  RationalFunction reward;
  EliminationCache cache;
};

/// Eliminates every state in `order` (which must be volatile-last) and
/// records the reusable cache. Recording into the cache is bookkeeping and
/// is not counted; the elimination itself costs exactly what a plain solve
/// with the same order costs.
VpmcResult parametric_reachability_vpmc(const Vpmc &vpmc, const EliminationOrder &order,
                                        const EliminationOptions &options = {});

struct IncrementalOptions {
  EliminationOptions elimination;
  /// Ordering used when the cache cannot be refreshed and is rebuilt.
  OrderHeuristic heuristic = OrderHeuristic::kInputOrder;
};

struct ReconfigurationTrace {
  std::vector<StateId> deleted;     ///< consistent non-volatile states removed without arithmetic
  std::vector<StateId> replayed;    ///< volatile states whose cached contributions were reused
  std::vector<StateId> eliminated;  ///< genuine eliminations, in order
  /// Working-model entries right after each flush: (s1, s2, value).
  std::vector<std::tuple<StateId, StateId, RationalFunction>> flushed;
  /// For every genuine elimination of an old volatile state: whether it was
  /// in or adjacent to the infected set at that moment.
  std::vector<bool> infected_neighbourhood;
};

struct ReconfigurationResult {
  RationalFunction probability;
  RationalFunction reward;
  EliminationCache cache;  ///< valid for the next reconfiguration of `after`
  bool cache_rebuilt = false;
  Classification classes;
  ReconfigurationTrace trace;
};

/// Re-solves `after` reusing `cache`, which must come from `before`.
ReconfigurationResult reconfigured_reachability(const Vpmc &before, const Vpmc &after, const EliminationCache &cache,
                                                const IncrementalOptions &options = {});

struct SweepOptions {
  IncrementalOptions incremental;
  bool run_naive = true;
};

struct SweepStep {
  RationalFunction value;
  RationalFunction reward;
  OpCounts incremental;  ///< this step only
  OpCounts naive;
  OpCounts incremental_cumulative;
  OpCounts naive_cumulative;
  std::size_t incremental_eliminations = 0;
  std::size_t naive_eliminations = 0;
  bool cache_rebuilt = false;
  /// Naive from-scratch result, when run.
  std::optional<RationalFunction> naive_value;
  std::optional<RationalFunction> naive_reward;
};

/// Runs the cached algorithm once on `initial`, then the reconfiguration
/// algorithm once per diff, threading the cache. Optionally solves every
/// model from scratch for comparison; the two paths use separate counters.
std::vector<SweepStep> incremental_sweep(const Vpmc &initial, const std::vector<Diff> &diffs,
                                         const SweepOptions &options = {});

}  // namespace stelim

#endif  // STELIM_INCREMENTAL_HPP
