#ifndef STELIM_FAMILIES_HPP
#define STELIM_FAMILIES_HPP

#include <optional>
#include <string>
#include <vector>

#include "stelim/incremental.hpp"
#include "stelim/model.hpp"

namespace stelim {

/// Zeroconf with n probes over parameters (p, q): states 1..n, i, err, ok;
/// initial i, target err. Volatile: i and n.
ModelInput zeroconf_input(unsigned n);

struct ZeroconfInstance {
  Vpmc model;  ///< preprocessed (ok pruned, fresh initial _s0)
  Diff next;   ///< turns the model for n into the one for n + 1
};

ZeroconfInstance gen_zeroconf(unsigned n);
Diff zeroconf_diff(unsigned n);
/// q p^n / (1 - q (1 - p^n))
RationalFunction zeroconf_closed_form(unsigned n);

/// Stand-in pulse-coupled oscillator family: N nodes, phases 1..T,
/// refractory length R, coupling eps, message loss mu (symbolic when empty).
struct OscillatorSpec {
  unsigned N = 5;
  unsigned T = 4;
  unsigned R = 1;
  Rational eps{1, 10};
  std::optional<Rational> mu;
};

/// Raw model: one state per occupancy vector plus `start`, which picks the
/// initial phases uniformly at random. Synchronized vectors are targets.
ModelInput oscillator_input(const OscillatorSpec &spec);

struct OscillatorSweep {
  std::vector<Vpmc> models;  ///< R = 1 .. r_max, preprocessed, with volatile sets
  std::vector<Diff> diffs;   ///< models[k] -> models[k + 1]
};

/// Volatile set for R: the states that change in some later step of the
/// sweep. States are indexed by the last step at which they change.
OscillatorSweep gen_oscillator_sweep(OscillatorSpec spec, unsigned r_max);

struct OscillatorInstance {
  Vpmc model;
  Diff next;  ///< R -> R + 1 (empty when R = T)
};
OscillatorInstance gen_oscillator(const OscillatorSpec &spec);

struct BenchRow {
  unsigned step = 0;
  Rational value_at_probe;
  std::uint64_t ops_naive_cum = 0;
  std::uint64_t ops_incr_cum = 0;
  Rational ratio_percent;
  bool matches_naive = false;  ///< incremental value equal to the from-scratch one
  SweepStep detail;
};

/// Runs the sweep and tabulates it; `first_step` labels the first row.
std::vector<BenchRow> bench_family(const Vpmc &initial, const std::vector<Diff> &diffs,
                                   const std::vector<Rational> &probe, unsigned first_step,
                                   const SweepOptions &options = {});
std::vector<BenchRow> bench_zeroconf(unsigned n_max, const std::vector<Rational> &probe,
                                     const SweepOptions &options = {});
std::vector<BenchRow> bench_oscillator(const OscillatorSpec &spec, unsigned r_max, const std::vector<Rational> &probe,
                                       const SweepOptions &options = {});

/// CSV with header step,value_at_probe,ops_naive_cum,ops_incr_cum,ratio_percent.
/// Rationals are written as num/den, or with `decimal` digits when given.
std::string bench_csv(const std::vector<BenchRow> &rows, std::optional<unsigned> decimal = std::nullopt);

}  // namespace stelim

#endif  // STELIM_FAMILIES_HPP
