#ifndef DIVKIT_FACTOR_HPP_
#define DIVKIT_FACTOR_HPP_

#include <span>
#include <string>
#include <vector>

#include "divkit/errors.hpp"
#include "divkit/variables.hpp"

namespace divkit {

// Dense real-valued table over an ordered set of discrete variables.
//
// Scope is kept sorted ascending by variable id. Values are stored row-major
// with the LAST scope variable varying fastest. An empty scope is a single
// scalar cell. Factors are immutable values; every operation returns a new
// factor.
class Factor {
 public:
  Factor() : values_(1, 1.0) {}

  Factor(std::vector<int> scope, std::vector<int> cards, std::vector<double> values,
         std::string label = "");

  static Factor scalar(double v, std::string label = "");
  static Factor ones(std::vector<int> scope, std::vector<int> cards);
  static Factor zeros(std::vector<int> scope, std::vector<int> cards);

  const std::vector<int>& scope() const { return scope_; }
  const std::vector<int>& cards() const { return cards_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& mutable_values() { return values_; }
  const std::string& label() const { return label_; }
  void set_label(std::string label) { label_ = std::move(label); }

  std::size_t size() const { return values_.size(); }
  bool is_scalar() const { return scope_.empty(); }
  int card_of(int variable) const;

  // Row-major flat index of an assignment aligned with scope().
  std::size_t index_of(std::span<const int> assignment) const;
  std::vector<int> assignment_of(std::size_t index) const;

  double sum() const;
  double max_abs() const;
  bool all_finite() const;
  bool strictly_positive() const;

 private:
  std::vector<int> scope_;
  std::vector<int> cards_;
  std::vector<double> values_;
  std::string label_;
};

// Aligned elementwise product over the union of scopes.
Factor multiply(const Factor& a, const Factor& b);

// Aligned elementwise quotient with the 0/0 = 0 convention. A zero
// denominator under a nonzero numerator raises UndefinedQuotientError.
Factor divide(const Factor& a, const Factor& b);

// Sum out `drop` (a subset of a's scope).
Factor marginalize(const Factor& a, std::span<const int> drop);

// Keep exactly `keep` (a subset of a's scope), summing out the rest.
Factor marginalize_to(const Factor& a, std::span<const int> keep);

// Elementwise power; negative exponents require strictly positive entries.
Factor map_power(const Factor& a, double exponent);

// Elementwise natural log; requires strictly positive entries.
Factor map_log(const Factor& a);

// Elementwise 1/x with 1/0 := 0 (the quotient convention of calibration).
Factor map_reciprocal_or_zero(const Factor& a);

// Elementwise indicator of x > 0 (support mask).
Factor map_positive_indicator(const Factor& a);

// Sum of the aligned elementwise product (scopes must be permutations of the
// same variable set).
double dot(const Factor& a, const Factor& b);

bool same_table(const Factor& a, const Factor& b, double rel_tol, double abs_tol);

}  // namespace divkit

#endif  // DIVKIT_FACTOR_HPP_
