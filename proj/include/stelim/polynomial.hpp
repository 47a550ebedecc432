#ifndef STELIM_POLYNOMIAL_HPP
#define STELIM_POLYNOMIAL_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace stelim {

using Integer = mpz_class;
using Rational = mpq_class;

/// Graded-lexicographic comparison of two exponent vectors. Missing trailing
/// entries count as zero; variable 0 is the most significant in the lex tie-break.
/// Returns <0, 0 or >0.
int compare_grlex(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b);

/// Sparse multivariate polynomial with integer coefficients.
///
/// Terms are kept sorted in descending graded-lex order, no zero coefficient
/// is stored and the exponent width is trimmed to the highest variable that
/// actually occurs, so structurally equal polynomials compare equal.
class Polynomial {
public:
  Polynomial() = default;
  explicit Polynomial(Integer constant);
  explicit Polynomial(long constant) : Polynomial(Integer(constant)) {}

  static Polynomial variable(std::size_t index, std::uint32_t power = 1);
  static Polynomial monomial(Integer coeff, std::span<const std::uint32_t> exponents);

  /// Builds a polynomial from terms in any order; duplicates are combined and
  /// zeros dropped. `exponents` holds `nvars` entries per term.
  static Polynomial from_terms(std::size_t nvars, std::vector<std::uint32_t> exponents,
                               std::vector<Integer> coeffs);

  bool is_zero() const { return coeffs_.empty(); }
  bool is_constant() const { return nvars_ == 0; }
  bool is_one() const;
  std::size_t size() const { return coeffs_.size(); }
  std::size_t num_vars() const { return nvars_; }

  std::span<const std::uint32_t> exponents(std::size_t term) const {
    return {exps_.data() + term * nvars_, nvars_};
  }
  const Integer &coeff(std::size_t term) const { return coeffs_[term]; }
  const Integer &leading_coeff() const { return coeffs_.front(); }
  /// Constant term value; requires is_constant() or returns the coefficient
  /// of the zero monomial otherwise.
  Integer constant_term() const;

  std::uint32_t degree(std::size_t var) const;
  std::uint32_t total_degree() const;
  bool contains_variable(std::size_t var) const { return degree(var) > 0; }
  /// Indices of the variables that occur.
  std::vector<std::size_t> variables() const;

  /// Gcd of all coefficients, positive; zero for the zero polynomial.
  Integer content() const;
  Integer max_norm() const;
  /// Componentwise minimum exponent over all terms.
  std::vector<std::uint32_t> monomial_content() const;

  Polynomial operator-() const;
  Polynomial &operator+=(const Polynomial &other);
  Polynomial &operator-=(const Polynomial &other);
  Polynomial &operator*=(const Polynomial &other);

  Polynomial scaled(const Integer &factor) const;
  /// Divides every coefficient by `divisor`, which must divide them exactly.
  Polynomial divided_by_integer(const Integer &divisor) const;
  /// Divides by the monomial x^exps, which must divide every term.
  Polynomial divided_by_monomial(std::span<const std::uint32_t> exps) const;
  Polynomial times_monomial(const Integer &coeff, std::span<const std::uint32_t> exps) const;

  /// Substitutes an integer for one variable.
  Polynomial substitute(std::size_t var, const Integer &value) const;
  Rational evaluate(std::span<const Rational> values) const;

  /// Removes the integer content and makes the leading coefficient positive.
  Polynomial primitive() const;

  friend bool operator==(const Polynomial &a, const Polynomial &b);
  friend Polynomial operator+(Polynomial a, const Polynomial &b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial &b) { return a -= b; }
  friend Polynomial operator*(const Polynomial &a, const Polynomial &b);

  std::size_t hash() const;

  /// Renders terms in descending order using `names` for variables (falls
  /// back to x<i> for indices without a name).
  std::string to_string(std::span<const std::string> names = {}) const;

private:
  std::size_t nvars_ = 0;
  std::vector<std::uint32_t> exps_;
  std::vector<Integer> coeffs_;

  void trim();
  static Polynomial add_impl(const Polynomial &a, const Polynomial &b, bool subtract);
};

/// Exact division; returns nullopt when `divisor` does not divide `dividend`.
std::optional<Polynomial> divide_exact(const Polynomial &dividend, const Polynomial &divisor);

/// Greatest common divisor over Z[V], normalized with positive leading
/// coefficient. gcd(0, 0) = 0.
Polynomial gcd(const Polynomial &a, const Polynomial &b);

namespace detail {
// Exposed for testing the two gcd routes against each other.
std::optional<Polynomial> heuristic_gcd(const Polynomial &a, const Polynomial &b);
Polynomial prs_gcd(const Polynomial &a, const Polynomial &b);
}  // namespace detail

}  // namespace stelim

#endif  // STELIM_POLYNOMIAL_HPP
