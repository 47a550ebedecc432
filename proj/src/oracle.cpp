#include "stelim/oracle.hpp"

#include "stelim/metrics.hpp"

namespace stelim {

ConcreteMc instantiate(const Vpmc &vpmc, std::span<const Rational> valuation) {
  return instantiate(vpmc.pmc, vpmc.target, valuation);
}

ConcreteMc instantiate(const Pmc &pmc, StateId target, std::span<const Rational> valuation) {
  UncountedScope quiet;
  ConcreteMc mc;
  for (StateId s : pmc.states()) mc.index.emplace(s, mc.size++);
  mc.initial = mc.index.at(pmc.initial());
  mc.target = mc.index.at(target);
  mc.rows.resize(mc.size);
  mc.rewards.resize(mc.size);
  for (StateId s : pmc.states()) {
    const std::size_t i = mc.index.at(s);
    Rational sum = 0;
    for (const auto &[t, f] : pmc.successors(s)) {
      const Rational v = f.evaluate(valuation);
      if (v <= 0 || v > 1)
        throw NotGraphPreserving("entry " + pmc.name(s) + " -> " + pmc.name(t) + " evaluates to " + v.get_str());
      mc.rows[i].emplace(mc.index.at(t), v);
      sum += v;
    }
    if (sum > 1) throw NotGraphPreserving("row of " + pmc.name(s) + " sums to " + sum.get_str());
    mc.rewards[i] = pmc.reward(s).evaluate(valuation);
  }
  return mc;
}

namespace {

// Solves (I - Q) x = b over the non-target states, where Q is the matrix
// restricted to them. Gauss-Jordan with exact pivots.
Rational solve_absorbing(const ConcreteMc &mc, const std::vector<Rational> &b) {
  std::vector<std::size_t> var(mc.size, mc.size);
  std::size_t n = 0;
  for (std::size_t s = 0; s < mc.size; ++s)
    if (s != mc.target) var[s] = n++;
  if (mc.initial == mc.target) return 0;
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n + 1, Rational(0)));
  for (std::size_t s = 0; s < mc.size; ++s) {
    if (s == mc.target) continue;
    const std::size_t i = var[s];
    a[i][i] = 1;
    for (const auto &[t, p] : mc.rows[s])
      if (t != mc.target) a[i][var[t]] -= p;
    a[i][n] = b[s];
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a[pivot][col] == 0) ++pivot;
    if (pivot == n) throw SingularSystem("the absorbing system is singular");
    std::swap(a[pivot], a[col]);
    const Rational inv = 1 / a[col][col];
    for (std::size_t k = col; k <= n; ++k) a[col][k] *= inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0) continue;
      const Rational f = a[r][col];
      for (std::size_t k = col; k <= n; ++k)
        if (a[col][k] != 0) a[r][k] -= f * a[col][k];
    }
  }
  return a[var[mc.initial]][n];
}

}  // namespace

Rational numeric_reachability(const ConcreteMc &mc) {
  if (mc.initial == mc.target) return 1;
  std::vector<Rational> b(mc.size, Rational(0));
  for (std::size_t s = 0; s < mc.size; ++s) {
    if (s == mc.target) continue;
    auto it = mc.rows[s].find(mc.target);
    if (it != mc.rows[s].end()) b[s] = it->second;
  }
  return solve_absorbing(mc, b);
}

Rational numeric_expected_reward(const ConcreteMc &mc) {
  std::vector<Rational> b = mc.rewards;
  b[mc.target] = 0;
  return solve_absorbing(mc, b);
}

}  // namespace stelim
