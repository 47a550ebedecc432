#ifndef STELIM_ORACLE_HPP
#define STELIM_ORACLE_HPP

#include <map>
#include <span>
#include <stdexcept>
#include <vector>

#include "stelim/model.hpp"

namespace stelim {

class NotGraphPreserving : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

class SingularSystem : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Numeric Markov chain over exact rationals, indexed 0..n-1.
struct ConcreteMc {
  std::size_t size = 0;
  std::size_t initial = 0;
  std::size_t target = 0;
  std::vector<std::map<std::size_t, Rational>> rows;
  std::vector<Rational> rewards;
  /// Index of each alive state of the source model.
  std::map<StateId, std::size_t> index;
};

/// Evaluates every entry and reward. Rejects valuations under which some
/// entry leaves (0, 1] or some row sum exceeds 1 (NotGraphPreserving), or a
/// denominator vanishes (UndefinedAt). Never counted.
ConcreteMc instantiate(const Vpmc &vpmc, std::span<const Rational> valuation);
ConcreteMc instantiate(const Pmc &pmc, StateId target, std::span<const Rational> valuation);

/// Probability of reaching the target, by exact Gaussian elimination.
Rational numeric_reachability(const ConcreteMc &mc);
/// Expected accumulated reward until the target: E(s) = r(s) + sum P(s,s') E(s'), E(target) = 0.
Rational numeric_expected_reward(const ConcreteMc &mc);

}  // namespace stelim

#endif  // STELIM_ORACLE_HPP
