#ifndef STELIM_METRICS_HPP
#define STELIM_METRICS_HPP

#include <cstdint>
#include <vector>

namespace stelim {

enum class ArithKind { kAdd, kSub, kMul, kDiv };

struct OpCounts {
  std::uint64_t adds = 0;
  std::uint64_t subs = 0;
  std::uint64_t muls = 0;
  std::uint64_t divs = 0;

  std::uint64_t total() const { return adds + subs + muls + divs; }
  friend OpCounts operator-(const OpCounts &a, const OpCounts &b) {
    return {a.adds - b.adds, a.subs - b.subs, a.muls - b.muls, a.divs - b.divs};
  }
  friend OpCounts operator+(const OpCounts &a, const OpCounts &b) {
    return {a.adds + b.adds, a.subs + b.subs, a.muls + b.muls, a.divs + b.divs};
  }
  friend bool operator==(const OpCounts &, const OpCounts &) = default;
};

/// Counts rational-function arithmetic: one unit per add/sub/mul/div call,
/// regardless of the polynomial work done to normalize the result.
class MetricsCounter {
public:
  void record(ArithKind kind);
  const OpCounts &counts() const { return counts_; }
  std::uint64_t total() const { return counts_.total(); }

  /// Appends the current totals to the snapshot list and returns them.
  const OpCounts &snapshot();
  const std::vector<OpCounts> &snapshots() const { return snapshots_; }
  void reset();

private:
  OpCounts counts_;
  std::vector<OpCounts> snapshots_;
};

/// Routes rational-function operations on the current thread to `counter`
/// for the lifetime of the scope. Scopes nest; the innermost one wins.
class MetricsScope {
public:
  explicit MetricsScope(MetricsCounter &counter);
  ~MetricsScope();
  MetricsScope(const MetricsScope &) = delete;
  MetricsScope &operator=(const MetricsScope &) = delete;

private:
  MetricsCounter *previous_;
};

/// Suspends counting on the current thread (e.g. while parsing input).
class UncountedScope {
public:
  UncountedScope();
  ~UncountedScope();
  UncountedScope(const UncountedScope &) = delete;
  UncountedScope &operator=(const UncountedScope &) = delete;

private:
  MetricsCounter *previous_;
};

MetricsCounter *active_metrics();
void count_operation(ArithKind kind);

}  // namespace stelim

#endif  // STELIM_METRICS_HPP
