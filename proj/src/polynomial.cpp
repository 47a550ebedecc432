#include "stelim/polynomial.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace stelim {

int compare_grlex(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b) {
  std::uint64_t da = 0, db = 0;
  for (auto e : a) da += e;
  for (auto e : b) db += e;
  if (da != db) return da < db ? -1 : 1;
  const std::size_t n = std::max(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint32_t ea = i < a.size() ? a[i] : 0;
    const std::uint32_t eb = i < b.size() ? b[i] : 0;
    if (ea != eb) return ea < eb ? -1 : 1;
  }
  return 0;
}

namespace {

// Monomial keys for accumulation and division. Both codecs order keys
// lexicographically with the highest variable index most significant, which
// is a monomial order and therefore valid for exact division.
class PackedCodec {
public:
  using key_type = std::uint64_t;
  using greater = std::greater<std::uint64_t>;

  // Returns false when the radices do not fit into 63 bits.
  bool init(std::vector<std::uint64_t> radix) {
    radix_ = std::move(radix);
    weight_.assign(radix_.size(), 1);
    unsigned __int128 w = 1;
    for (std::size_t i = 0; i < radix_.size(); ++i) {
      weight_[i] = static_cast<std::uint64_t>(w);
      w *= radix_[i];
      if (w > (static_cast<unsigned __int128>(1) << 63)) return false;
    }
    return true;
  }
  key_type encode(std::span<const std::uint32_t> e) const {
    key_type k = 0;
    for (std::size_t i = 0; i < e.size(); ++i) k += weight_[i] * e[i];
    return k;
  }
  void decode(key_type k, std::vector<std::uint32_t> &out) const {
    out.resize(radix_.size());
    for (std::size_t i = 0; i < radix_.size(); ++i) {
      out[i] = static_cast<std::uint32_t>(k % radix_[i]);
      k /= radix_[i];
    }
  }

private:
  std::vector<std::uint64_t> radix_;
  std::vector<std::uint64_t> weight_;
};

class VectorCodec {
public:
  using key_type = std::vector<std::uint32_t>;
  struct greater {
    bool operator()(const key_type &a, const key_type &b) const {
      for (std::size_t i = a.size(); i-- > 0;)
        if (a[i] != b[i]) return a[i] > b[i];
      return false;
    }
  };
  explicit VectorCodec(std::size_t nvars) : nvars_(nvars) {}
  key_type encode(std::span<const std::uint32_t> e) const {
    key_type k(nvars_, 0);
    std::copy(e.begin(), e.end(), k.begin());
    return k;
  }
  void decode(const key_type &k, std::vector<std::uint32_t> &out) const { out = k; }

private:
  std::size_t nvars_;
};

template <class Codec>
std::optional<Polynomial> divide_with(const Polynomial &a, const Polynomial &b, const Codec &codec,
                                      std::size_t nvars, const std::vector<std::uint32_t> &deg_a) {
  using Key = typename Codec::key_type;
  std::map<Key, Integer, typename Codec::greater> rem;
  for (std::size_t t = 0; t < a.size(); ++t) rem.emplace(codec.encode(a.exponents(t)), a.coeff(t));

  // Leading term of b under the codec's order.
  std::vector<std::pair<Key, std::size_t>> bterms;
  bterms.reserve(b.size());
  for (std::size_t t = 0; t < b.size(); ++t) bterms.emplace_back(codec.encode(b.exponents(t)), t);
  typename Codec::greater gt;
  std::size_t lead = 0;
  for (std::size_t i = 1; i < bterms.size(); ++i)
    if (gt(bterms[i].first, bterms[lead].first)) lead = i;
  std::vector<std::uint32_t> lead_exp;
  codec.decode(bterms[lead].first, lead_exp);
  const Integer &lead_coeff = b.coeff(bterms[lead].second);

  std::vector<std::uint32_t> deg_b(nvars, 0);
  for (std::size_t t = 0; t < b.size(); ++t) {
    auto e = b.exponents(t);
    for (std::size_t i = 0; i < e.size(); ++i) deg_b[i] = std::max(deg_b[i], e[i]);
  }

  std::vector<std::uint32_t> qexps;
  std::vector<Integer> qcoeffs;
  std::vector<std::uint32_t> rexp, qexp(nvars);
  Integer qc;
  while (!rem.empty()) {
    auto it = rem.begin();
    codec.decode(it->first, rexp);
    for (std::size_t i = 0; i < nvars; ++i) {
      if (rexp[i] < lead_exp[i]) return std::nullopt;
      qexp[i] = rexp[i] - lead_exp[i];
      if (qexp[i] + deg_b[i] > deg_a[i]) return std::nullopt;
    }
    if (!mpz_divisible_p(it->second.get_mpz_t(), lead_coeff.get_mpz_t())) return std::nullopt;
    mpz_divexact(qc.get_mpz_t(), it->second.get_mpz_t(), lead_coeff.get_mpz_t());
    const Key qkey = codec.encode(qexp);
    for (std::size_t t = 0; t < b.size(); ++t) {
      Key k;
      if constexpr (std::is_same_v<Key, std::uint64_t>) {
        k = qkey + bterms[t].first;
      } else {
        k = bterms[t].first;
        for (std::size_t i = 0; i < nvars; ++i) k[i] += qkey[i];
      }
      auto [pos, inserted] = rem.try_emplace(std::move(k));
      mpz_submul(pos->second.get_mpz_t(), qc.get_mpz_t(), b.coeff(bterms[t].second).get_mpz_t());
      if (pos->second == 0) rem.erase(pos);
    }
    qexps.insert(qexps.end(), qexp.begin(), qexp.end());
    qcoeffs.push_back(qc);
  }
  return Polynomial::from_terms(nvars, std::move(qexps), std::move(qcoeffs));
}

}  // namespace

Polynomial::Polynomial(Integer constant) {
  if (constant != 0) coeffs_.push_back(std::move(constant));
}

Polynomial Polynomial::variable(std::size_t index, std::uint32_t power) {
  std::vector<std::uint32_t> e(index + 1, 0);
  e[index] = power;
  return monomial(Integer(1), e);
}

Polynomial Polynomial::monomial(Integer coeff, std::span<const std::uint32_t> exponents) {
  Polynomial p;
  if (coeff == 0) return p;
  p.nvars_ = exponents.size();
  p.exps_.assign(exponents.begin(), exponents.end());
  p.coeffs_.push_back(std::move(coeff));
  p.trim();
  return p;
}

Polynomial Polynomial::from_terms(std::size_t nvars, std::vector<std::uint32_t> exponents,
                                  std::vector<Integer> coeffs) {
  const std::size_t n = coeffs.size();
  if (exponents.size() != n * nvars) throw std::invalid_argument("from_terms: exponent count mismatch");
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  auto span_of = [&](std::size_t i) {
    return std::span<const std::uint32_t>(exponents.data() + i * nvars, nvars);
  };
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t x, std::size_t y) { return compare_grlex(span_of(x), span_of(y)) > 0; });
  Polynomial p;
  p.nvars_ = nvars;
  p.exps_.reserve(n * nvars);
  p.coeffs_.reserve(n);
  for (std::size_t k = 0; k < n;) {
    std::size_t j = k + 1;
    Integer c = std::move(coeffs[idx[k]]);
    while (j < n && compare_grlex(span_of(idx[k]), span_of(idx[j])) == 0) c += coeffs[idx[j++]];
    if (c != 0) {
      auto e = span_of(idx[k]);
      p.exps_.insert(p.exps_.end(), e.begin(), e.end());
      p.coeffs_.push_back(std::move(c));
    }
    k = j;
  }
  p.trim();
  return p;
}

void Polynomial::trim() {
  if (coeffs_.empty()) {
    nvars_ = 0;
    exps_.clear();
    return;
  }
  std::size_t used = 0;
  for (std::size_t t = 0; t < coeffs_.size(); ++t)
    for (std::size_t i = nvars_; i > used; --i)
      if (exps_[t * nvars_ + i - 1] != 0) {
        used = i;
        break;
      }
  if (used == nvars_) return;
  std::vector<std::uint32_t> packed;
  packed.reserve(coeffs_.size() * used);
  for (std::size_t t = 0; t < coeffs_.size(); ++t)
    packed.insert(packed.end(), exps_.begin() + static_cast<std::ptrdiff_t>(t * nvars_),
                  exps_.begin() + static_cast<std::ptrdiff_t>(t * nvars_ + used));
  exps_ = std::move(packed);
  nvars_ = used;
}

bool Polynomial::is_one() const { return nvars_ == 0 && coeffs_.size() == 1 && coeffs_[0] == 1; }

Integer Polynomial::constant_term() const {
  if (coeffs_.empty()) return 0;
  // Zero monomial sorts last under a graded order.
  auto e = exponents(coeffs_.size() - 1);
  for (auto x : e)
    if (x != 0) return 0;
  return coeffs_.back();
}

std::uint32_t Polynomial::degree(std::size_t var) const {
  if (var >= nvars_) return 0;
  std::uint32_t d = 0;
  for (std::size_t t = 0; t < coeffs_.size(); ++t) d = std::max(d, exps_[t * nvars_ + var]);
  return d;
}

std::uint32_t Polynomial::total_degree() const {
  if (coeffs_.empty()) return 0;
  std::uint32_t d = 0;
  for (auto e : exponents(0)) d += e;
  return d;
}

std::vector<std::size_t> Polynomial::variables() const {
  std::vector<std::size_t> out;
  for (std::size_t v = 0; v < nvars_; ++v)
    if (degree(v) > 0) out.push_back(v);
  return out;
}

Integer Polynomial::content() const {
  Integer g = 0;
  for (const auto &c : coeffs_) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    if (g == 1) break;
  }
  return g;
}

Integer Polynomial::max_norm() const {
  Integer m = 0;
  for (const auto &c : coeffs_)
    if (mpz_cmpabs(c.get_mpz_t(), m.get_mpz_t()) > 0) m = abs(c);
  return m;
}

std::vector<std::uint32_t> Polynomial::monomial_content() const {
  std::vector<std::uint32_t> m(nvars_, 0);
  if (coeffs_.empty()) return m;
  auto first = exponents(0);
  m.assign(first.begin(), first.end());
  for (std::size_t t = 1; t < coeffs_.size(); ++t) {
    auto e = exponents(t);
    for (std::size_t i = 0; i < nvars_; ++i) m[i] = std::min(m[i], e[i]);
  }
  return m;
}

Polynomial Polynomial::operator-() const {
  Polynomial p = *this;
  for (auto &c : p.coeffs_) c = -c;
  return p;
}

Polynomial Polynomial::add_impl(const Polynomial &a, const Polynomial &b, bool subtract) {
  Polynomial r;
  r.nvars_ = std::max(a.nvars_, b.nvars_);
  r.coeffs_.reserve(a.size() + b.size());
  r.exps_.reserve((a.size() + b.size()) * r.nvars_);
  auto push = [&r](std::span<const std::uint32_t> e, Integer c) {
    r.exps_.insert(r.exps_.end(), e.begin(), e.end());
    r.exps_.insert(r.exps_.end(), r.nvars_ - e.size(), 0);
    r.coeffs_.push_back(std::move(c));
  };
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    int cmp;
    if (i == a.size()) cmp = -1;
    else if (j == b.size()) cmp = 1;
    else cmp = compare_grlex(a.exponents(i), b.exponents(j));
    if (cmp > 0) {
      push(a.exponents(i), a.coeffs_[i]);
      ++i;
    } else if (cmp < 0) {
      push(b.exponents(j), subtract ? Integer(-b.coeffs_[j]) : b.coeffs_[j]);
      ++j;
    } else {
      Integer c = subtract ? Integer(a.coeffs_[i] - b.coeffs_[j]) : Integer(a.coeffs_[i] + b.coeffs_[j]);
      if (c != 0) push(a.exponents(i), std::move(c));
      ++i;
      ++j;
    }
  }
  r.trim();
  return r;
}

Polynomial &Polynomial::operator+=(const Polynomial &other) {
  if (other.is_zero()) return *this;
  if (is_zero()) return *this = other;
  return *this = add_impl(*this, other, false);
}

Polynomial &Polynomial::operator-=(const Polynomial &other) {
  if (other.is_zero()) return *this;
  if (is_zero()) return *this = -other;
  return *this = add_impl(*this, other, true);
}

Polynomial &Polynomial::operator*=(const Polynomial &other) { return *this = *this * other; }

Polynomial Polynomial::times_monomial(const Integer &coeff, std::span<const std::uint32_t> exps) const {
  if (coeff == 0 || is_zero()) return {};
  Polynomial r;
  r.nvars_ = std::max(nvars_, exps.size());
  r.coeffs_.reserve(size());
  r.exps_.resize(size() * r.nvars_, 0);
  for (std::size_t t = 0; t < size(); ++t) {
    auto e = exponents(t);
    for (std::size_t i = 0; i < r.nvars_; ++i)
      r.exps_[t * r.nvars_ + i] = (i < e.size() ? e[i] : 0) + (i < exps.size() ? exps[i] : 0);
    r.coeffs_.push_back(coeffs_[t] * coeff);
  }
  r.trim();
  return r;
}

Polynomial operator*(const Polynomial &a, const Polynomial &b) {
  if (a.is_zero() || b.is_zero()) return {};
  if (a.size() == 1) return b.times_monomial(a.coeffs_[0], a.exponents(0));
  if (b.size() == 1) return a.times_monomial(b.coeffs_[0], b.exponents(0));

  const std::size_t nvars = std::max(a.nvars_, b.nvars_);
  std::vector<std::uint64_t> radix(nvars);
  for (std::size_t i = 0; i < nvars; ++i)
    radix[i] = static_cast<std::uint64_t>(a.degree(i)) + b.degree(i) + 1;

  std::vector<std::uint32_t> exps;
  std::vector<Integer> coeffs;
  PackedCodec codec;
  if (codec.init(radix)) {
    std::vector<std::uint64_t> kb(b.size());
    for (std::size_t t = 0; t < b.size(); ++t) kb[t] = codec.encode(b.exponents(t));
    std::unordered_map<std::uint64_t, Integer> acc;
    acc.reserve(a.size() * b.size());
    for (std::size_t s = 0; s < a.size(); ++s) {
      const std::uint64_t ka = codec.encode(a.exponents(s));
      for (std::size_t t = 0; t < b.size(); ++t) {
        Integer &slot = acc[ka + kb[t]];
        mpz_addmul(slot.get_mpz_t(), a.coeffs_[s].get_mpz_t(), b.coeffs_[t].get_mpz_t());
      }
    }
    exps.reserve(acc.size() * nvars);
    coeffs.reserve(acc.size());
    std::vector<std::uint32_t> e;
    for (auto &[k, c] : acc) {
      if (c == 0) continue;
      codec.decode(k, e);
      exps.insert(exps.end(), e.begin(), e.end());
      coeffs.push_back(std::move(c));
    }
  } else {
    exps.reserve(a.size() * b.size() * nvars);
    coeffs.reserve(a.size() * b.size());
    for (std::size_t s = 0; s < a.size(); ++s)
      for (std::size_t t = 0; t < b.size(); ++t) {
        auto ea = a.exponents(s);
        auto eb = b.exponents(t);
        for (std::size_t i = 0; i < nvars; ++i)
          exps.push_back((i < ea.size() ? ea[i] : 0) + (i < eb.size() ? eb[i] : 0));
        coeffs.push_back(a.coeffs_[s] * b.coeffs_[t]);
      }
  }
  return Polynomial::from_terms(nvars, std::move(exps), std::move(coeffs));
}

Polynomial Polynomial::scaled(const Integer &factor) const {
  if (factor == 0) return {};
  Polynomial p = *this;
  for (auto &c : p.coeffs_) c *= factor;
  return p;
}

Polynomial Polynomial::divided_by_integer(const Integer &divisor) const {
  if (divisor == 1) return *this;
  Polynomial p = *this;
  for (auto &c : p.coeffs_) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), divisor.get_mpz_t());
  return p;
}

Polynomial Polynomial::divided_by_monomial(std::span<const std::uint32_t> exps) const {
  Polynomial p = *this;
  for (std::size_t t = 0; t < p.size(); ++t)
    for (std::size_t i = 0; i < exps.size() && i < nvars_; ++i) p.exps_[t * nvars_ + i] -= exps[i];
  p.trim();
  return p;
}

Polynomial Polynomial::substitute(std::size_t var, const Integer &value) const {
  if (var >= nvars_) return *this;
  const std::uint32_t d = degree(var);
  std::vector<Integer> powers(d + 1);
  powers[0] = 1;
  for (std::uint32_t k = 1; k <= d; ++k) powers[k] = powers[k - 1] * value;
  std::vector<std::uint32_t> exps(exps_);
  std::vector<Integer> coeffs(coeffs_.size());
  for (std::size_t t = 0; t < coeffs_.size(); ++t) {
    std::uint32_t &e = exps[t * nvars_ + var];
    coeffs[t] = coeffs_[t] * powers[e];
    e = 0;
  }
  return from_terms(nvars_, std::move(exps), std::move(coeffs));
}

Rational Polynomial::evaluate(std::span<const Rational> values) const {
  if (values.size() < nvars_) throw std::invalid_argument("evaluate: valuation does not cover all variables");
  Rational sum = 0;
  Rational term;
  Integer num, den;
  for (std::size_t t = 0; t < coeffs_.size(); ++t) {
    num = coeffs_[t];
    den = 1;
    auto e = exponents(t);
    for (std::size_t i = 0; i < nvars_; ++i) {
      if (e[i] == 0) continue;
      Integer pn, pd;
      mpz_pow_ui(pn.get_mpz_t(), values[i].get_num_mpz_t(), e[i]);
      mpz_pow_ui(pd.get_mpz_t(), values[i].get_den_mpz_t(), e[i]);
      num *= pn;
      den *= pd;
    }
    term = Rational(num, den);
    term.canonicalize();
    sum += term;
  }
  return sum;
}

Polynomial Polynomial::primitive() const {
  if (is_zero()) return {};
  Integer c = content();
  if (leading_coeff() < 0) c = -c;
  return divided_by_integer(c);
}

bool operator==(const Polynomial &a, const Polynomial &b) {
  return a.nvars_ == b.nvars_ && a.exps_ == b.exps_ && a.coeffs_ == b.coeffs_;
}

std::size_t Polynomial::hash() const {
  std::size_t h = nvars_;
  auto mix = [&h](std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
  for (auto e : exps_) mix(e);
  for (const auto &c : coeffs_) mix(static_cast<std::size_t>(mpz_get_si(c.get_mpz_t())) ^ mpz_size(c.get_mpz_t()));
  return h;
}

std::string Polynomial::to_string(std::span<const std::string> names) const {
  if (is_zero()) return "0";
  std::ostringstream os;
  for (std::size_t t = 0; t < coeffs_.size(); ++t) {
    Integer c = coeffs_[t];
    if (t == 0) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    c = abs(c);
    auto e = exponents(t);
    bool has_var = false;
    for (auto x : e) has_var = has_var || x != 0;
    bool first = true;
    if (c != 1 || !has_var) {
      os << c.get_str();
      first = false;
    }
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (!first) os << "*";
      first = false;
      if (i < names.size()) os << names[i];
      else os << "x" << i;
      if (e[i] != 1) os << "^" << e[i];
    }
  }
  return os.str();
}

std::optional<Polynomial> divide_exact(const Polynomial &dividend, const Polynomial &divisor) {
  if (divisor.is_zero()) throw std::domain_error("divide_exact: division by zero polynomial");
  if (dividend.is_zero()) return Polynomial{};
  if (divisor.is_constant()) {
    const Integer &d = divisor.leading_coeff();
    for (std::size_t t = 0; t < dividend.size(); ++t)
      if (!mpz_divisible_p(dividend.coeff(t).get_mpz_t(), d.get_mpz_t())) return std::nullopt;
    Polynomial q = dividend.divided_by_integer(abs(d));
    return d < 0 ? -q : q;
  }
  const std::size_t nvars = std::max(dividend.num_vars(), divisor.num_vars());
  std::vector<std::uint32_t> deg_a(nvars);
  std::vector<std::uint64_t> radix(nvars);
  for (std::size_t i = 0; i < nvars; ++i) {
    deg_a[i] = dividend.degree(i);
    if (divisor.degree(i) > deg_a[i]) return std::nullopt;
    radix[i] = static_cast<std::uint64_t>(deg_a[i]) + 1;
  }
  if (divisor.size() == 1) {
    auto de = divisor.exponents(0);
    for (std::size_t t = 0; t < dividend.size(); ++t) {
      auto e = dividend.exponents(t);
      for (std::size_t i = 0; i < de.size(); ++i)
        if (i >= e.size() || e[i] < de[i]) return std::nullopt;
      if (!mpz_divisible_p(dividend.coeff(t).get_mpz_t(), divisor.coeff(0).get_mpz_t())) return std::nullopt;
    }
    Polynomial q = dividend.divided_by_monomial(de);
    Polynomial out = q.divided_by_integer(abs(divisor.coeff(0)));
    return divisor.coeff(0) < 0 ? -out : out;
  }
  PackedCodec packed;
  if (packed.init(radix)) return divide_with(dividend, divisor, packed, nvars, deg_a);
  return divide_with(dividend, divisor, VectorCodec(nvars), nvars, deg_a);
}

}  // namespace stelim
