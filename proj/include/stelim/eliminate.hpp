#ifndef STELIM_ELIMINATE_HPP
#define STELIM_ELIMINATE_HPP

#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "stelim/model.hpp"

namespace stelim {

class IdenticallyOneSelfLoop : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Factor applied to r(e) when predecessors absorb the reward of an
/// eliminated state e with self-loop probability c.
enum class RewardFactor {
  kExpectedVisits,          ///< 1 / (1 - c): every visit to e, including the first
  kPrintedSelfTransitions,  ///< c / (1 - c): self transitions only, kept for comparison
};

struct EliminationOptions {
  bool rewards = false;
  RewardFactor factor = RewardFactor::kExpectedVisits;
};

/// Receives every per-pair contribution produced by one elimination step.
class EliminationObserver {
public:
  virtual ~EliminationObserver() = default;
  /// contribution = P(s1,e) * 1/(1-P(e,e)) * P(e,s2)
  virtual void on_transition(StateId e, StateId s1, StateId s2, const RationalFunction &contribution) = 0;
  virtual void on_reward(StateId /*e*/, StateId /*s1*/, const RationalFunction & /*contribution*/) {}
};

/// Removes `e`, rerouting its probability mass (and optionally reward)
/// through to its neighbours. Operation cost: one sub and one div for a
/// self-loop, one mul per predecessor when there is a self-loop, one mul
/// per predecessor/successor pair and one add per pair that hits an
/// existing entry.
void eliminate_state(Pmc &pmc, StateId e, const EliminationOptions &options = {},
                     EliminationObserver *observer = nullptr);

void eliminate_state_rewards(Pmc &pmc, StateId e, RewardFactor factor = RewardFactor::kExpectedVisits,
                             EliminationObserver *observer = nullptr);

/// Ranks every state except the initial state and the target.
class EliminationOrder {
public:
  EliminationOrder() = default;
  explicit EliminationOrder(std::vector<StateId> sequence);

  const std::vector<StateId> &sequence() const { return sequence_; }
  std::size_t size() const { return sequence_.size(); }
  /// 1-based rank; 0 for states outside the order.
  std::size_t rank(StateId s) const;
  bool contains(StateId s) const { return rank_.count(s) > 0; }

private:
  std::vector<StateId> sequence_;
  std::unordered_map<StateId, std::size_t> rank_;
};

enum class OrderHeuristic { kInputOrder, kMinDegree };

/// Non-volatile states first, then volatile ones. Input order sorts each
/// group by index; min-degree greedily picks the state with the fewest
/// distinct neighbours in the graph with simulated fill-in, ties by index.
EliminationOrder make_order(const Vpmc &vpmc, OrderHeuristic heuristic = OrderHeuristic::kInputOrder);

/// True iff the order is a bijection onto the eliminable states and ranks
/// every non-volatile state before every volatile one.
bool is_valid_order(const Vpmc &vpmc, const EliminationOrder &order);

RationalFunction solve_reachability(const Vpmc &vpmc, const EliminationOrder &order);
RationalFunction solve_reachability(const Vpmc &vpmc);
/// Expected accumulated state reward until the target.
RationalFunction solve_expected_reward(const Vpmc &vpmc, const EliminationOrder &order,
                                       RewardFactor factor = RewardFactor::kExpectedVisits);

}  // namespace stelim

#endif  // STELIM_ELIMINATE_HPP
