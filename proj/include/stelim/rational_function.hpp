#ifndef STELIM_RATIONAL_FUNCTION_HPP
#define STELIM_RATIONAL_FUNCTION_HPP

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "stelim/metrics.hpp"
#include "stelim/polynomial.hpp"

namespace stelim {

class DivisionByZeroFunction : public std::domain_error {
public:
  DivisionByZeroFunction() : std::domain_error("division by the zero function") {}
};

/// Raised when a rational function is evaluated at a root of its denominator.
class UndefinedAt : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Exact quotient of two integer polynomials, always held in canonical form:
/// gcd(numerator, denominator) = 1 over Z[V] and the denominator's
/// graded-lex leading coefficient is positive. Zero is 0/1.
///
/// The arithmetic operators count one operation each in the active
/// MetricsCounter.
class RationalFunction {
public:
  RationalFunction() : den_(1) {}
  RationalFunction(long constant) : num_(constant), den_(1) {}  // NOLINT: literal convenience
  explicit RationalFunction(const Integer &constant) : num_(constant), den_(1) {}
  explicit RationalFunction(const Rational &constant);
  explicit RationalFunction(Polynomial numerator) : num_(std::move(numerator)), den_(1) {}

  static RationalFunction variable(std::size_t index) {
    return RationalFunction(Polynomial::variable(index));
  }
  /// Normalizes an arbitrary fraction; throws DivisionByZeroFunction if den is 0.
  static RationalFunction fraction(const Polynomial &num, const Polynomial &den);

  const Polynomial &numerator() const { return num_; }
  const Polynomial &denominator() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return num_.is_one() && den_.is_one(); }
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
  std::size_t num_vars() const { return std::max(num_.num_vars(), den_.num_vars()); }

  /// Throws UndefinedAt when the denominator vanishes.
  Rational evaluate(std::span<const Rational> values) const;

  std::string to_string(std::span<const std::string> names = {}) const;

  RationalFunction operator-() const;
  RationalFunction &operator+=(const RationalFunction &other);
  RationalFunction &operator-=(const RationalFunction &other);
  RationalFunction &operator*=(const RationalFunction &other);
  RationalFunction &operator/=(const RationalFunction &other);

  friend RationalFunction operator+(const RationalFunction &a, const RationalFunction &b);
  friend RationalFunction operator-(const RationalFunction &a, const RationalFunction &b);
  friend RationalFunction operator*(const RationalFunction &a, const RationalFunction &b);
  friend RationalFunction operator/(const RationalFunction &a, const RationalFunction &b);
  friend bool operator==(const RationalFunction &a, const RationalFunction &b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

private:
  Polynomial num_;
  Polynomial den_;

  struct Raw {};
  RationalFunction(Raw, Polynomial num, Polynomial den) : num_(std::move(num)), den_(std::move(den)) {}

  friend RationalFunction add_uncounted(const RationalFunction &a, const RationalFunction &b, bool subtract);
  friend RationalFunction mul_uncounted(const RationalFunction &a, const RationalFunction &b);
  friend RationalFunction inverse_uncounted(const RationalFunction &a);
};

RationalFunction rf_arith(ArithKind kind, const RationalFunction &a, const RationalFunction &b);
RationalFunction rf_normalize(const Polynomial &num, const Polynomial &den);
/// Value equality; canonical forms make this a structural comparison.
bool rf_equal(const RationalFunction &a, const RationalFunction &b);
Rational rf_eval(const RationalFunction &f, std::span<const Rational> values);

/// f^k by repeated squaring; counts its multiplications.
RationalFunction pow(const RationalFunction &f, unsigned k);

}  // namespace stelim

#endif  // STELIM_RATIONAL_FUNCTION_HPP
