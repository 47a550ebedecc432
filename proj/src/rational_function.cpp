#include "stelim/rational_function.hpp"

namespace stelim {

namespace {

Polynomial quotient(const Polynomial &a, const Polynomial &b) {
  if (b.is_one()) return a;
  auto q = divide_exact(a, b);
  if (!q) throw std::logic_error("rational function: gcd does not divide its argument");
  return std::move(*q);
}

}  // namespace

RationalFunction::RationalFunction(const Rational &constant)
    : num_(Integer(constant.get_num())), den_(Integer(constant.get_den())) {}

RationalFunction RationalFunction::fraction(const Polynomial &num, const Polynomial &den) {
  if (den.is_zero()) throw DivisionByZeroFunction();
  if (num.is_zero()) return {};
  Polynomial g = gcd(num, den);
  Polynomial n = quotient(num, g);
  Polynomial d = quotient(den, g);
  if (d.leading_coeff() < 0) {
    n = -n;
    d = -d;
  }
  return RationalFunction(Raw{}, std::move(n), std::move(d));
}

RationalFunction add_uncounted(const RationalFunction &a, const RationalFunction &b, bool subtract) {
  using RF = RationalFunction;
  if (b.is_zero()) return a;
  if (a.is_zero()) return subtract ? -b : b;
  const Polynomial bn = subtract ? -b.num_ : b.num_;
  if (a.den_ == b.den_) {
    Polynomial n = a.num_ + bn;
    if (n.is_zero()) return {};
    if (a.den_.is_one()) return RF(RF::Raw{}, std::move(n), Polynomial(1));
    Polynomial g = gcd(n, a.den_);
    return RF(RF::Raw{}, quotient(n, g), quotient(a.den_, g));
  }
  // With one side a polynomial the sum is already in lowest terms.
  if (a.den_.is_one()) return RF(RF::Raw{}, a.num_ * b.den_ + bn, b.den_);
  if (b.den_.is_one()) return RF(RF::Raw{}, a.num_ + bn * a.den_, a.den_);
  const Polynomial g = gcd(a.den_, b.den_);
  const Polynomial ad = quotient(a.den_, g);
  const Polynomial bd = quotient(b.den_, g);
  Polynomial n = a.num_ * bd + bn * ad;
  if (n.is_zero()) return {};
  Polynomial d = ad * b.den_;
  if (!g.is_one()) {
    Polynomial h = gcd(n, g);
    if (!h.is_one()) {
      n = quotient(n, h);
      d = quotient(d, h);
    }
  }
  return RF(RF::Raw{}, std::move(n), std::move(d));
}

RationalFunction mul_uncounted(const RationalFunction &a, const RationalFunction &b) {
  using RF = RationalFunction;
  if (a.is_zero() || b.is_zero()) return {};
  if (a.den_.is_one() && b.den_.is_one()) return RF(RF::Raw{}, a.num_ * b.num_, Polynomial(1));
  const Polynomial g1 = b.den_.is_one() ? Polynomial(1) : gcd(a.num_, b.den_);
  const Polynomial g2 = a.den_.is_one() ? Polynomial(1) : gcd(b.num_, a.den_);
  Polynomial n = quotient(a.num_, g1) * quotient(b.num_, g2);
  Polynomial d = quotient(a.den_, g2) * quotient(b.den_, g1);
  return RF(RF::Raw{}, std::move(n), std::move(d));
}

RationalFunction inverse_uncounted(const RationalFunction &a) {
  using RF = RationalFunction;
  if (a.is_zero()) throw DivisionByZeroFunction();
  if (a.num_.leading_coeff() < 0) return RF(RF::Raw{}, -a.den_, -a.num_);
  return RF(RF::Raw{}, a.den_, a.num_);
}

RationalFunction RationalFunction::operator-() const { return RationalFunction(Raw{}, -num_, den_); }

RationalFunction operator+(const RationalFunction &a, const RationalFunction &b) {
  count_operation(ArithKind::kAdd);
  return add_uncounted(a, b, false);
}

RationalFunction operator-(const RationalFunction &a, const RationalFunction &b) {
  count_operation(ArithKind::kSub);
  return add_uncounted(a, b, true);
}

RationalFunction operator*(const RationalFunction &a, const RationalFunction &b) {
  count_operation(ArithKind::kMul);
  return mul_uncounted(a, b);
}

RationalFunction operator/(const RationalFunction &a, const RationalFunction &b) {
  if (b.is_zero()) throw DivisionByZeroFunction();
  count_operation(ArithKind::kDiv);
  return mul_uncounted(a, inverse_uncounted(b));
}

RationalFunction &RationalFunction::operator+=(const RationalFunction &o) { return *this = *this + o; }
RationalFunction &RationalFunction::operator-=(const RationalFunction &o) { return *this = *this - o; }
RationalFunction &RationalFunction::operator*=(const RationalFunction &o) { return *this = *this * o; }
RationalFunction &RationalFunction::operator/=(const RationalFunction &o) { return *this = *this / o; }

Rational RationalFunction::evaluate(std::span<const Rational> values) const {
  Rational d = den_.evaluate(values);
  if (d == 0) throw UndefinedAt("denominator vanishes at the given valuation");
  Rational r = num_.evaluate(values) / d;
  return r;
}

std::string RationalFunction::to_string(std::span<const std::string> names) const {
  if (den_.is_one()) return num_.to_string(names);
  if (is_constant()) return num_.to_string(names) + "/" + den_.to_string(names);
  const std::string den = den_.to_string(names);
  return "(" + num_.to_string(names) + ") / " + (den_.is_constant() ? den : "(" + den + ")");
}

RationalFunction rf_arith(ArithKind kind, const RationalFunction &a, const RationalFunction &b) {
  switch (kind) {
  case ArithKind::kAdd: return a + b;
  case ArithKind::kSub: return a - b;
  case ArithKind::kMul: return a * b;
  case ArithKind::kDiv: return a / b;
  }
  throw std::invalid_argument("rf_arith: unknown kind");
}

RationalFunction rf_normalize(const Polynomial &num, const Polynomial &den) {
  return RationalFunction::fraction(num, den);
}

bool rf_equal(const RationalFunction &a, const RationalFunction &b) { return a == b; }

Rational rf_eval(const RationalFunction &f, std::span<const Rational> values) { return f.evaluate(values); }

RationalFunction pow(const RationalFunction &f, unsigned k) {
  RationalFunction result(1);
  RationalFunction base = f;
  bool first = true;
  while (k > 0) {
    if (k & 1u) {
      result = first ? base : result * base;
      first = false;
    }
    k >>= 1;
    if (k > 0) base = base * base;
  }
  return result;
}

}  // namespace stelim
