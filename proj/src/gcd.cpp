// Multivariate gcd over Z[V].
//
// The main route is the heuristic gcd (evaluate one variable at a large
// integer, recurse, interpolate back in balanced xi-adic form and verify by
// division). The evaluation point always exceeds 2*min(|a|,|b|) + 2, so a
// candidate that divides both inputs is the gcd, not just a common divisor.
// When six evaluation points fail, a recursive primitive PRS takes over.

#include <algorithm>
#include <stdexcept>

#include "stelim/polynomial.hpp"

namespace stelim {

namespace {

Polynomial positive(Polynomial p) {
  if (!p.is_zero() && p.leading_coeff() < 0) return -p;
  return p;
}

// Coefficients of p viewed as a univariate polynomial in `var`.
std::vector<Polynomial> split(const Polynomial &p, std::size_t var) {
  const std::uint32_t d = p.degree(var);
  std::vector<std::vector<std::uint32_t>> exps(d + 1);
  std::vector<std::vector<Integer>> coeffs(d + 1);
  const std::size_t n = p.num_vars();
  for (std::size_t t = 0; t < p.size(); ++t) {
    auto e = p.exponents(t);
    const std::uint32_t k = var < n ? e[var] : 0;
    exps[k].insert(exps[k].end(), e.begin(), e.end());
    if (var < n) exps[k][exps[k].size() - n + var] = 0;
    coeffs[k].push_back(p.coeff(t));
  }
  std::vector<Polynomial> out;
  out.reserve(d + 1);
  for (std::uint32_t k = 0; k <= d; ++k)
    out.push_back(Polynomial::from_terms(n, std::move(exps[k]), std::move(coeffs[k])));
  return out;
}

Polynomial join(const std::vector<Polynomial> &coeffs, std::size_t var) {
  std::size_t nvars = var + 1;
  for (const auto &c : coeffs) nvars = std::max(nvars, c.num_vars());
  std::vector<std::uint32_t> exps;
  std::vector<Integer> cs;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    const auto &c = coeffs[k];
    for (std::size_t t = 0; t < c.size(); ++t) {
      auto e = c.exponents(t);
      const std::size_t base = exps.size();
      exps.resize(base + nvars, 0);
      std::copy(e.begin(), e.end(), exps.begin() + static_cast<std::ptrdiff_t>(base));
      exps[base + var] += static_cast<std::uint32_t>(k);
      cs.push_back(c.coeff(t));
    }
  }
  return Polynomial::from_terms(nvars, std::move(exps), std::move(cs));
}

void strip(std::vector<Polynomial> &v) {
  while (!v.empty() && v.back().is_zero()) v.pop_back();
}

// Pseudo-remainder of a by b with respect to `var`.
std::vector<Polynomial> pseudo_remainder(std::vector<Polynomial> a, const std::vector<Polynomial> &b) {
  const std::size_t db = b.size() - 1;
  const Polynomial &lb = b.back();
  long e = static_cast<long>(a.size()) - static_cast<long>(db);
  while (!a.empty() && a.size() - 1 >= db) {
    const Polynomial la = a.back();
    const std::size_t shift = a.size() - 1 - db;
    for (auto &c : a) c *= lb;
    for (std::size_t j = 0; j <= db; ++j) a[j + shift] -= la * b[j];
    strip(a);
    --e;
  }
  if (e > 0) {
    Polynomial f(1);
    for (long i = 0; i < e; ++i) f *= lb;
    for (auto &c : a) c *= f;
  }
  return a;
}

Integer symmetric_mod(const Integer &c, const Integer &m, const Integer &half) {
  Integer r;
  mpz_fdiv_r(r.get_mpz_t(), c.get_mpz_t(), m.get_mpz_t());
  if (r > half) r -= m;
  return r;
}

// Inverse of evaluating `var` at xi: balanced xi-adic expansion of each
// coefficient of h.
Polynomial interpolate(const Polynomial &h, std::size_t var, const Integer &xi) {
  const std::size_t nvars = std::max(h.num_vars(), var + 1);
  const Integer half = xi / 2;
  std::vector<std::uint32_t> exps;
  std::vector<Integer> cs;
  for (std::size_t t = 0; t < h.size(); ++t) {
    auto e = h.exponents(t);
    Integer c = h.coeff(t);
    std::uint32_t k = 0;
    while (c != 0) {
      Integer d = symmetric_mod(c, xi, half);
      if (d != 0) {
        const std::size_t base = exps.size();
        exps.resize(base + nvars, 0);
        std::copy(e.begin(), e.end(), exps.begin() + static_cast<std::ptrdiff_t>(base));
        exps[base + var] = k;
        cs.push_back(d);
      }
      c -= d;
      mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), xi.get_mpz_t());
      ++k;
    }
  }
  return Polynomial::from_terms(nvars, std::move(exps), std::move(cs));
}

// gcd of two primitive polynomials without monomial content.
Polynomial gcd_primitive(const Polynomial &a, const Polynomial &b) {
  if (a.is_constant() || b.is_constant()) return Polynomial(1);
  if (a == b || a == -b) return positive(a);

  auto va = a.variables();
  auto vb = b.variables();
  // A variable occurring in only one argument cannot occur in the gcd, so the
  // gcd divides every coefficient with respect to that variable.
  for (int side = 0; side < 2; ++side) {
    const auto &vx = side == 0 ? va : vb;
    const auto &vy = side == 0 ? vb : va;
    const Polynomial &x = side == 0 ? a : b;
    const Polynomial &y = side == 0 ? b : a;
    for (auto v : vx) {
      if (std::find(vy.begin(), vy.end(), v) != vy.end()) continue;
      auto coeffs = split(x, v);
      std::sort(coeffs.begin(), coeffs.end(),
                [](const Polynomial &l, const Polynomial &r) { return l.size() < r.size(); });
      Polynomial g = y;
      for (const auto &c : coeffs) {
        if (c.is_zero()) continue;
        g = gcd(g, c);
        if (g.is_constant()) return Polynomial(1);
      }
      return positive(g);
    }
  }

  if (auto h = detail::heuristic_gcd(a, b)) return *h;
  return detail::prs_gcd(a, b);
}

}  // namespace

namespace detail {

std::optional<Polynomial> heuristic_gcd(const Polynomial &a, const Polynomial &b) {
  if (a.is_constant() && b.is_constant()) {
    Integer g;
    mpz_gcd(g.get_mpz_t(), a.constant_term().get_mpz_t(), b.constant_term().get_mpz_t());
    return Polynomial(g);
  }
  const std::size_t var = std::max(a.num_vars(), b.num_vars()) - 1;
  Integer xi = 2 * std::min(a.max_norm(), b.max_norm()) + 29;
  for (int attempt = 0; attempt < 6; ++attempt) {
    Polynomial ae = a.substitute(var, xi);
    Polynomial be = b.substitute(var, xi);
    if (!ae.is_zero() && !be.is_zero()) {
      Polynomial he = gcd(ae, be);
      Polynomial h = interpolate(he, var, xi).primitive();
      if (!h.is_zero() && divide_exact(a, h) && divide_exact(b, h)) return h;
    }
    Integer r = sqrt(sqrt(xi));
    xi = xi * r * 73794 / 27011;
  }
  return std::nullopt;
}

Polynomial prs_gcd(const Polynomial &a, const Polynomial &b) {
  if (a.is_zero()) return positive(b);
  if (b.is_zero()) return positive(a);
  if (a.is_constant() || b.is_constant()) {
    Integer g;
    mpz_gcd(g.get_mpz_t(), a.content().get_mpz_t(), b.content().get_mpz_t());
    return Polynomial(g);
  }
  const std::size_t var = std::max(a.num_vars(), b.num_vars()) - 1;
  auto ca = split(a, var);
  auto cb = split(b, var);
  auto content_of = [](const std::vector<Polynomial> &cs) {
    Polynomial g;
    for (const auto &c : cs) {
      if (c.is_zero()) continue;
      g = prs_gcd(g, c);
      if (g.is_one()) break;
    }
    return g;
  };
  const Polynomial conta = content_of(ca);
  const Polynomial contb = content_of(cb);
  const Polynomial cont = prs_gcd(conta, contb);
  auto primitive_part = [](std::vector<Polynomial> cs, const Polynomial &content) {
    for (auto &c : cs) c = *divide_exact(c, content);
    return cs;
  };
  std::vector<Polynomial> pa = primitive_part(std::move(ca), conta);
  std::vector<Polynomial> pb = primitive_part(std::move(cb), contb);
  if (pa.size() < pb.size()) std::swap(pa, pb);

  std::vector<Polynomial> g;
  while (true) {
    if (pb.size() == 1) {
      g = {Polynomial(1)};
      break;
    }
    auto r = pseudo_remainder(pa, pb);
    if (r.empty()) {
      g = pb;
      break;
    }
    pa = std::move(pb);
    pb = primitive_part(r, content_of(r));
  }
  Polynomial res = join(g, var);
  res = res.is_zero() ? res : res.primitive();
  return positive(res * cont);
}

}  // namespace detail

Polynomial gcd(const Polynomial &a, const Polynomial &b) {
  if (a.is_zero()) return positive(b);
  if (b.is_zero()) return positive(a);
  if (a.is_constant() || b.is_constant()) {
    Integer g;
    mpz_gcd(g.get_mpz_t(), a.content().get_mpz_t(), b.content().get_mpz_t());
    return Polynomial(g);
  }
  const Integer ca = a.content();
  const Integer cb = b.content();
  Integer c;
  mpz_gcd(c.get_mpz_t(), ca.get_mpz_t(), cb.get_mpz_t());
  auto ma = a.monomial_content();
  auto mb = b.monomial_content();
  std::vector<std::uint32_t> m(std::min(ma.size(), mb.size()));
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = std::min(ma[i], mb[i]);
  const Polynomial pa = a.divided_by_integer(ca).divided_by_monomial(ma);
  const Polynomial pb = b.divided_by_integer(cb).divided_by_monomial(mb);
  return positive(gcd_primitive(pa, pb).times_monomial(c, m));
}

}  // namespace stelim
