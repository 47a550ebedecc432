#include "stelim/metrics.hpp"

namespace stelim {

namespace {
thread_local MetricsCounter *g_active = nullptr;
}

void MetricsCounter::record(ArithKind kind) {
  switch (kind) {
  case ArithKind::kAdd: ++counts_.adds; break;
  case ArithKind::kSub: ++counts_.subs; break;
  case ArithKind::kMul: ++counts_.muls; break;
  case ArithKind::kDiv: ++counts_.divs; break;
  }
}

const OpCounts &MetricsCounter::snapshot() {
  snapshots_.push_back(counts_);
  return snapshots_.back();
}

void MetricsCounter::reset() {
  counts_ = {};
  snapshots_.clear();
}

MetricsScope::MetricsScope(MetricsCounter &counter) : previous_(g_active) { g_active = &counter; }
MetricsScope::~MetricsScope() { g_active = previous_; }

UncountedScope::UncountedScope() : previous_(g_active) { g_active = nullptr; }
UncountedScope::~UncountedScope() { g_active = previous_; }

MetricsCounter *active_metrics() { return g_active; }

void count_operation(ArithKind kind) {
  if (g_active) g_active->record(kind);
}

}  // namespace stelim
