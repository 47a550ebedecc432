#include "stelim/families.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "stelim/expression.hpp"

namespace stelim {

namespace {

RationalFunction P() { return RationalFunction::variable(0); }
RationalFunction Q() { return RationalFunction::variable(1); }

}  // namespace

ModelInput zeroconf_input(unsigned n) {
  if (n == 0) throw std::invalid_argument("zeroconf needs n >= 1");
  UncountedScope quiet;
  ModelInput in;
  Pmc &m = in.pmc;
  m.set_params({"p", "q"});
  std::vector<StateId> probe;
  for (unsigned j = 1; j <= n; ++j) probe.push_back(m.add_state(std::to_string(j)));
  const StateId i = m.add_state("i");
  const StateId err = m.add_state("err");
  const StateId ok = m.add_state("ok");
  const RationalFunction one(1);
  m.set(i, ok, one - Q());
  m.set(i, probe[n - 1], Q());
  for (unsigned j = 1; j <= n; ++j) {
    m.set(probe[j - 1], j == 1 ? err : probe[j - 2], P());
    m.set(probe[j - 1], i, one - P());
  }
  m.set_initial(i);
  in.targets = {err};
  in.volatile_states = {i, probe[n - 1]};
  return in;
}

Diff zeroconf_diff(unsigned n) {
  UncountedScope quiet;
  const std::string k = std::to_string(n), k1 = std::to_string(n + 1);
  Diff d;
  d.added_states.push_back({k1, std::nullopt});
  d.set_transitions.push_back({"i", k1, Q()});
  d.set_transitions.push_back({k1, k, P()});
  d.set_transitions.push_back({k1, "i", RationalFunction(1) - P()});
  d.set_transitions.push_back({"i", k, RationalFunction()});
  // The new probe state is listed first: it is eliminated before i.
  d.next_volatile = std::vector<std::string>{k1, "i"};
  return d;
}

ZeroconfInstance gen_zeroconf(unsigned n) {
  ZeroconfInstance z{preprocess(zeroconf_input(n)), zeroconf_diff(n)};
  z.model.volatile_order = {z.model.pmc.id(std::to_string(n)), z.model.pmc.id("i")};
  return z;
}

RationalFunction zeroconf_closed_form(unsigned n) {
  UncountedScope quiet;
  const RationalFunction pn = pow(P(), n);
  return Q() * pn / (RationalFunction(1) - Q() * (RationalFunction(1) - pn));
}

namespace {

using Occupancy = std::vector<unsigned>;

std::string occupancy_name(const Occupancy &k) {
  std::string s = "v";
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (i) s += '_';
    s += std::to_string(k[i]);
  }
  return s;
}

void compositions(unsigned n, std::size_t parts, Occupancy &cur, std::vector<Occupancy> &out) {
  if (cur.size() + 1 == parts) {
    cur.push_back(n);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (unsigned k = n + 1; k-- > 0;) {
    cur.push_back(k);
    compositions(n - k, parts, cur, out);
    cur.pop_back();
  }
}

Integer factorial(unsigned n) {
  Integer f;
  mpz_fac_ui(f.get_mpz_t(), n);
  return f;
}

Integer binomial(unsigned n, unsigned k) {
  Integer b;
  mpz_bin_uiui(b.get_mpz_t(), n, k);
  return b;
}

Integer round_half_up(const Rational &x) {
  Rational y = x + Rational(1, 2);
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), y.get_num_mpz_t(), y.get_den_mpz_t());
  return q;
}

using Distribution = std::map<Occupancy, RationalFunction>;

// Splits k nodes over destination phases with per-node probabilities.
void multinomial(unsigned k, const std::vector<std::pair<unsigned, RationalFunction>> &dest, std::size_t idx,
                 Occupancy &acc, RationalFunction weight, Integer coeff, Distribution &out) {
  if (idx + 1 == dest.size()) {
    acc[dest[idx].first] += k;
    RationalFunction w = weight * pow(dest[idx].second, k) * RationalFunction(Integer(coeff / factorial(k)));
    auto [it, fresh] = out.emplace(acc, w);
    if (!fresh) it->second = it->second + w;
    acc[dest[idx].first] -= k;
    return;
  }
  for (unsigned c = 0; c <= k; ++c) {
    acc[dest[idx].first] += c;
    multinomial(k - c, dest, idx + 1, acc, weight * pow(dest[idx].second, c), coeff / factorial(c), out);
    acc[dest[idx].first] -= c;
  }
}

Distribution successors(const Occupancy &k, const OscillatorSpec &spec, const RationalFunction &mu) {
  const unsigned T = spec.T;
  const unsigned F = k[T - 1];
  Distribution dist{{Occupancy(T, 0), RationalFunction(1)}};
  auto convolve = [&](const Distribution &part) {
    Distribution next;
    for (const auto &[a, pa] : dist)
      for (const auto &[b, pb] : part) {
        Occupancy c(T);
        for (unsigned i = 0; i < T; ++i) c[i] = a[i] + b[i];
        RationalFunction w = pa * pb;
        auto [it, fresh] = next.emplace(std::move(c), w);
        if (!fresh) it->second = it->second + w;
      }
    dist = std::move(next);
  };
  if (F > 0) {
    Occupancy fired(T, 0);
    fired[0] = F;
    convolve({{fired, RationalFunction(1)}});
  }
  const RationalFunction one(1);
  for (unsigned phi = 1; phi < T; ++phi) {
    const unsigned n = k[phi - 1];
    if (n == 0) continue;
    std::map<unsigned, RationalFunction> per_node;
    if (phi <= spec.R || F == 0) {
      per_node[phi + 1] = one;
    } else {
      for (unsigned m = 0; m <= F; ++m) {
        const Integer jump = round_half_up(spec.eps * Rational(phi) * Rational(m));
        // Pushed past T: fires along with the current firers.
        const Integer target = Integer(phi + 1) + jump;
        const unsigned d = target > T ? 1u : static_cast<unsigned>(target.get_ui());
        RationalFunction pm = RationalFunction(binomial(F, m)) * pow(one - mu, m) * pow(mu, F - m);
        if (pm.is_zero()) continue;
        auto [it, fresh] = per_node.emplace(d, pm);
        if (!fresh) it->second = it->second + pm;
      }
    }
    std::vector<std::pair<unsigned, RationalFunction>> dest;
    for (auto &[d, p] : per_node) dest.emplace_back(d - 1, p);
    Distribution part;
    Occupancy acc(T, 0);
    multinomial(n, dest, 0, acc, one, factorial(n), part);
    convolve(part);
  }
  return dist;
}

}  // namespace

ModelInput oscillator_input(const OscillatorSpec &spec) {
  if (spec.N < 1 || spec.T < 2 || spec.R < 1 || spec.R > spec.T)
    throw std::invalid_argument("oscillator needs N >= 1, T >= 2, 1 <= R <= T");
  if (spec.eps <= 0 || spec.eps >= 1) throw std::invalid_argument("oscillator needs 0 < eps < 1");
  if (spec.mu && (*spec.mu < 0 || *spec.mu >= 1)) throw std::invalid_argument("oscillator needs 0 <= mu < 1");
  UncountedScope quiet;
  ModelInput in;
  Pmc &m = in.pmc;
  RationalFunction mu;
  if (spec.mu) {
    m.set_params({});
    mu = RationalFunction(*spec.mu);
  } else {
    m.set_params({"mu"});
    mu = RationalFunction::variable(0);
  }
  std::vector<Occupancy> vectors;
  Occupancy cur;
  compositions(spec.N, spec.T, cur, vectors);
  std::sort(vectors.begin(), vectors.end());
  const StateId start = m.add_state("start");
  std::map<Occupancy, StateId> ids;
  for (const auto &v : vectors) ids.emplace(v, m.add_state(occupancy_name(v)));
  Integer tn;
  mpz_ui_pow_ui(tn.get_mpz_t(), spec.T, spec.N);
  for (const auto &v : vectors) {
    Integer ways = factorial(spec.N);
    for (unsigned c : v) ways /= factorial(c);
    m.set(start, ids.at(v), RationalFunction(Rational(ways, tn)));
    if (std::count(v.begin(), v.end(), 0u) == static_cast<long>(spec.T) - 1) {
      in.targets.insert(ids.at(v));
      continue;
    }
    for (auto &[w, p] : successors(v, spec, mu))
      if (!p.is_zero()) m.set(ids.at(v), ids.at(w), p);
  }
  m.set_initial(start);
  return in;
}

namespace {

// Copy of `v` whose states are created in the order of `names`.
Vpmc reindex(const Vpmc &v, const std::vector<std::string> &names) {
  Vpmc out;
  out.pmc.set_params(v.pmc.params());
  std::map<StateId, StateId> map;
  for (const auto &n : names) map.emplace(v.pmc.id(n), out.pmc.add_state(n));
  for (const auto &[from, to] : map) {
    for (const auto &[t, value] : v.pmc.successors(from)) out.pmc.set(to, map.at(t), value);
    out.pmc.set_reward(to, v.pmc.reward(from));
  }
  out.pmc.set_initial(map.at(v.initial()));
  out.target = map.at(v.target);
  for (StateId s : v.volatile_states) out.volatile_states.insert(map.at(s));
  return out;
}

}  // namespace

OscillatorSweep gen_oscillator_sweep(OscillatorSpec spec, unsigned r_max) {
  if (r_max < 1 || r_max > spec.T) throw std::invalid_argument("oscillator sweep needs 1 <= r_max <= T");
  std::vector<Vpmc> raw;
  for (unsigned R = 1; R <= r_max; ++R) {
    spec.R = R;
    raw.push_back(preprocess(oscillator_input(spec)));
  }
  // last[name] = last step R (1-based, R -> R + 1) touching the state.
  std::map<std::string, unsigned> last;
  for (unsigned r = 0; r + 1 < raw.size(); ++r) {
    const Diff d = make_diff(raw[r], raw[r + 1]);
    auto touch = [&](const std::string &n) { last[n] = r + 1; };
    for (const auto &s : d.removed_states) {
      const Pmc &pmc = raw[r].pmc;
      for (StateId n : neighbourhood(pmc, pmc.id(s))) touch(pmc.name(n));
    }
    for (const auto &s : d.added_states) touch(s.name);
    for (const auto &t : d.set_transitions) {
      touch(t.from);
      touch(t.to);
    }
  }
  OscillatorSweep sweep;
  for (unsigned r = 0; r < raw.size(); ++r) {
    const Pmc &pmc = raw[r].pmc;
    std::vector<std::string> names;
    for (StateId s : pmc.states()) names.push_back(pmc.name(s));
    auto key = [&](const std::string &n) {
      auto it = last.find(n);
      return it == last.end() ? 0u : it->second;
    };
    std::stable_sort(names.begin(), names.end(),
                     [&](const std::string &a, const std::string &b) { return key(a) < key(b); });
    raw[r].volatile_states.clear();
    for (StateId s : pmc.states())
      if (key(pmc.name(s)) >= r + 1 && s != raw[r].initial() && s != raw[r].target) raw[r].volatile_states.insert(s);
    Vpmc m = reindex(raw[r], names);
    for (StateId s : m.pmc.states())
      if (m.is_volatile(s)) m.volatile_order.push_back(s);
    sweep.models.push_back(std::move(m));
  }
  for (unsigned r = 0; r + 1 < sweep.models.size(); ++r)
    sweep.diffs.push_back(make_diff(sweep.models[r], sweep.models[r + 1]));
  return sweep;
}

OscillatorInstance gen_oscillator(const OscillatorSpec &spec) {
  const OscillatorSweep sweep = gen_oscillator_sweep(spec, spec.T);
  OscillatorInstance out{sweep.models.at(spec.R - 1), Diff{}};
  if (spec.R < spec.T) out.next = sweep.diffs.at(spec.R - 1);
  return out;
}

std::vector<BenchRow> bench_family(const Vpmc &initial, const std::vector<Diff> &diffs,
                                   const std::vector<Rational> &probe, unsigned first_step,
                                   const SweepOptions &options) {
  SweepOptions opts = options;
  opts.run_naive = true;
  const std::vector<SweepStep> steps = incremental_sweep(initial, diffs, opts);
  std::vector<BenchRow> rows;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    BenchRow row;
    row.step = first_step + static_cast<unsigned>(i);
    row.value_at_probe = steps[i].value.evaluate(probe);
    row.ops_naive_cum = steps[i].naive_cumulative.total();
    row.ops_incr_cum = steps[i].incremental_cumulative.total();
    row.ratio_percent = row.ops_naive_cum == 0 ? Rational(100)
                                               : Rational(Integer(100) * Integer(std::to_string(row.ops_incr_cum)),
                                                          Integer(std::to_string(row.ops_naive_cum)));
    row.ratio_percent.canonicalize();
    row.matches_naive = steps[i].naive_value && *steps[i].naive_value == steps[i].value;
    row.detail = steps[i];
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<BenchRow> bench_zeroconf(unsigned n_max, const std::vector<Rational> &probe, const SweepOptions &options) {
  if (n_max < 1) throw std::invalid_argument("n-max must be at least 1");
  std::vector<Diff> diffs;
  for (unsigned n = 1; n < n_max; ++n) diffs.push_back(zeroconf_diff(n));
  return bench_family(gen_zeroconf(1).model, diffs, probe, 1, options);
}

std::vector<BenchRow> bench_oscillator(const OscillatorSpec &spec, unsigned r_max, const std::vector<Rational> &probe,
                                       const SweepOptions &options) {
  const OscillatorSweep sweep = gen_oscillator_sweep(spec, r_max);
  return bench_family(sweep.models.front(), sweep.diffs, probe, 1, options);
}

std::string bench_csv(const std::vector<BenchRow> &rows, std::optional<unsigned> decimal) {
  auto num = [&](const Rational &r) { return decimal ? to_decimal(r, *decimal) : r.get_str(); };
  std::ostringstream os;
  os << "step,value_at_probe,ops_naive_cum,ops_incr_cum,ratio_percent\n";
  for (const auto &r : rows)
    os << r.step << ',' << num(r.value_at_probe) << ',' << r.ops_naive_cum << ',' << r.ops_incr_cum << ','
       << num(r.ratio_percent) << '\n';
  return os.str();
}

}  // namespace stelim
