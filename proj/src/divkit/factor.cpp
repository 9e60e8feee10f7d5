#include "divkit/factor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>

namespace divkit {

namespace {

std::size_t table_size(const std::vector<int>& cards) {
  std::size_t n = 1;
  for (int c : cards) n *= static_cast<std::size_t>(c);
  return n;
}

// Strides of each scope position, last variable fastest.
std::vector<std::size_t> strides_of(const std::vector<int>& cards) {
  std::vector<std::size_t> s(cards.size());
  std::size_t acc = 1;
  for (int k = static_cast<int>(cards.size()) - 1; k >= 0; --k) {
    s[k] = acc;
    acc *= static_cast<std::size_t>(cards[k]);
  }
  return s;
}

// Odometer over a result scope that simultaneously tracks flat indices into
// two operand tables (stride 0 where an operand lacks the variable).
struct AlignedIter {
  std::vector<int> digit;
  std::vector<int> card;
  std::vector<std::size_t> sa, sb;
  std::size_t ia = 0, ib = 0;
  bool done = false;

  void advance() {
    for (int d = static_cast<int>(digit.size()) - 1; d >= 0; --d) {
      ++digit[d];
      ia += sa[d];
      ib += sb[d];
      if (digit[d] < card[d]) return;
      ia -= sa[d] * static_cast<std::size_t>(card[d]);
      ib -= sb[d] * static_cast<std::size_t>(card[d]);
      digit[d] = 0;
    }
    done = true;
  }
};

AlignedIter make_aligned(const Factor& a, const Factor& b, std::vector<int>& out_scope,
                         std::vector<int>& out_cards) {
  out_scope.clear();
  out_cards.clear();
  std::size_t i = 0, j = 0;
  while (i < a.scope().size() || j < b.scope().size()) {
    if (j >= b.scope().size() || (i < a.scope().size() && a.scope()[i] < b.scope()[j])) {
      out_scope.push_back(a.scope()[i]);
      out_cards.push_back(a.cards()[i]);
      ++i;
    } else if (i >= a.scope().size() || b.scope()[j] < a.scope()[i]) {
      out_scope.push_back(b.scope()[j]);
      out_cards.push_back(b.cards()[j]);
      ++j;
    } else {
      if (a.cards()[i] != b.cards()[j])
        throw StructureError("cardinality mismatch on shared variable " +
                             std::to_string(a.scope()[i]));
      out_scope.push_back(a.scope()[i]);
      out_cards.push_back(a.cards()[i]);
      ++i;
      ++j;
    }
  }
  AlignedIter it;
  it.digit.assign(out_scope.size(), 0);
  it.card = out_cards;
  auto sta = strides_of(a.cards());
  auto stb = strides_of(b.cards());
  it.sa.assign(out_scope.size(), 0);
  it.sb.assign(out_scope.size(), 0);
  for (std::size_t d = 0; d < out_scope.size(); ++d) {
    for (std::size_t k = 0; k < a.scope().size(); ++k)
      if (a.scope()[k] == out_scope[d]) it.sa[d] = sta[k];
    for (std::size_t k = 0; k < b.scope().size(); ++k)
      if (b.scope()[k] == out_scope[d]) it.sb[d] = stb[k];
  }
  return it;
}

}  // namespace

Factor::Factor(std::vector<int> scope, std::vector<int> cards, std::vector<double> values,
               std::string label)
    : scope_(std::move(scope)), cards_(std::move(cards)), values_(std::move(values)),
      label_(std::move(label)) {
  if (scope_.size() != cards_.size()) throw StructureError("scope/cards size mismatch");
  if (!std::is_sorted(scope_.begin(), scope_.end()) ||
      std::adjacent_find(scope_.begin(), scope_.end()) != scope_.end())
    throw StructureError("factor scope must be sorted and duplicate-free");
  for (int c : cards_)
    if (c < 1) throw StructureError("factor cardinality must be >= 1");
  if (values_.size() != table_size(cards_))
    throw StructureError("factor value count does not match scope cardinalities");
}

Factor Factor::scalar(double v, std::string label) {
  return Factor({}, {}, {v}, std::move(label));
}

Factor Factor::ones(std::vector<int> scope, std::vector<int> cards) {
  std::size_t n = table_size(cards);
  return Factor(std::move(scope), std::move(cards), std::vector<double>(n, 1.0));
}

Factor Factor::zeros(std::vector<int> scope, std::vector<int> cards) {
  std::size_t n = table_size(cards);
  return Factor(std::move(scope), std::move(cards), std::vector<double>(n, 0.0));
}

int Factor::card_of(int variable) const {
  for (std::size_t k = 0; k < scope_.size(); ++k)
    if (scope_[k] == variable) return cards_[k];
  throw StructureError("variable " + std::to_string(variable) + " not in factor scope");
}

std::size_t Factor::index_of(std::span<const int> assignment) const {
  if (assignment.size() != scope_.size())
    throw StructureError("assignment length does not match factor scope");
  auto st = strides_of(cards_);
  std::size_t idx = 0;
  for (std::size_t k = 0; k < scope_.size(); ++k) {
    if (assignment[k] < 0 || assignment[k] >= cards_[k])
      throw StructureError("assignment value out of range");
    idx += st[k] * static_cast<std::size_t>(assignment[k]);
  }
  return idx;
}

std::vector<int> Factor::assignment_of(std::size_t index) const {
  std::vector<int> a(scope_.size(), 0);
  for (int k = static_cast<int>(scope_.size()) - 1; k >= 0; --k) {
    a[k] = static_cast<int>(index % static_cast<std::size_t>(cards_[k]));
    index /= static_cast<std::size_t>(cards_[k]);
  }
  return a;
}

double Factor::sum() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return s;
}

double Factor::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::fabs(v));
  return m;
}

bool Factor::all_finite() const {
  for (double v : values_)
    if (!std::isfinite(v)) return false;
  return true;
}

bool Factor::strictly_positive() const {
  for (double v : values_)
    if (!(v > 0.0)) return false;
  return true;
}

Factor multiply(const Factor& a, const Factor& b) {
  std::vector<int> scope, cards;
  AlignedIter it = make_aligned(a, b, scope, cards);
  std::vector<double> out(table_size(cards));
  const auto& av = a.values();
  const auto& bv = b.values();
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = av[it.ia] * bv[it.ib];
    it.advance();
  }
  return Factor(std::move(scope), std::move(cards), std::move(out));
}

Factor divide(const Factor& a, const Factor& b) {
  std::vector<int> scope, cards;
  AlignedIter it = make_aligned(a, b, scope, cards);
  std::vector<double> out(table_size(cards));
  const auto& av = a.values();
  const auto& bv = b.values();
  for (std::size_t i = 0; i < out.size(); ++i) {
    double num = av[it.ia];
    double den = bv[it.ib];
    if (den == 0.0) {
      if (num != 0.0)
        throw UndefinedQuotientError(
            "quotient undefined: nonzero numerator over zero denominator" +
            (b.label().empty() ? std::string() : " in factor " + b.label()));
      out[i] = 0.0;
    } else {
      out[i] = num / den;
    }
    it.advance();
  }
  return Factor(std::move(scope), std::move(cards), std::move(out));
}

Factor marginalize(const Factor& a, std::span<const int> drop) {
  std::set<int> dropped(drop.begin(), drop.end());
  for (int v : dropped)
    if (!std::binary_search(a.scope().begin(), a.scope().end(), v))
      throw StructureError("cannot marginalize variable " + std::to_string(v) +
                           " absent from factor scope");
  std::vector<int> scope, cards;
  for (std::size_t k = 0; k < a.scope().size(); ++k) {
    if (!dropped.count(a.scope()[k])) {
      scope.push_back(a.scope()[k]);
      cards.push_back(a.cards()[k]);
    }
  }
  std::vector<double> out(table_size(cards), 0.0);
  auto out_strides = strides_of(cards);
  // Per source dimension: stride into the output (0 when dropped).
  std::vector<std::size_t> tstride(a.scope().size(), 0);
  {
    std::size_t j = 0;
    for (std::size_t k = 0; k < a.scope().size(); ++k) {
      if (!dropped.count(a.scope()[k])) {
        tstride[k] = out_strides[j];
        ++j;
      }
    }
  }
  const auto& av = a.values();
  std::vector<int> digit(a.scope().size(), 0);
  std::size_t tidx = 0;
  for (std::size_t i = 0; i < av.size(); ++i) {
    out[tidx] += av[i];
    for (int d = static_cast<int>(digit.size()) - 1; d >= 0; --d) {
      ++digit[d];
      tidx += tstride[d];
      if (digit[d] < a.cards()[d]) break;
      tidx -= tstride[d] * static_cast<std::size_t>(a.cards()[d]);
      digit[d] = 0;
    }
  }
  return Factor(std::move(scope), std::move(cards), std::move(out));
}

Factor marginalize_to(const Factor& a, std::span<const int> keep) {
  std::set<int> kept(keep.begin(), keep.end());
  std::vector<int> drop;
  for (int v : a.scope())
    if (!kept.count(v)) drop.push_back(v);
  return marginalize(a, drop);
}

Factor map_power(const Factor& a, double exponent) {
  std::vector<double> out(a.values().size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    double v = a.values()[i];
    if (exponent < 0.0 && v <= 0.0)
      throw PositivityError("negative exponent on nonpositive entry" +
                            (a.label().empty() ? std::string() : " in factor " + a.label()));
    out[i] = (v == 0.0) ? 0.0 : std::pow(v, exponent);
  }
  return Factor(a.scope(), a.cards(), std::move(out), a.label());
}

Factor map_log(const Factor& a) {
  std::vector<double> out(a.values().size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    double v = a.values()[i];
    if (v <= 0.0)
      throw PositivityError("log of nonpositive entry" +
                            (a.label().empty() ? std::string() : " in factor " + a.label()));
    out[i] = std::log(v);
  }
  return Factor(a.scope(), a.cards(), std::move(out), a.label());
}

Factor map_reciprocal_or_zero(const Factor& a) {
  std::vector<double> out(a.values().size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    double v = a.values()[i];
    out[i] = (v == 0.0) ? 0.0 : 1.0 / v;
  }
  return Factor(a.scope(), a.cards(), std::move(out), a.label());
}

Factor map_positive_indicator(const Factor& a) {
  std::vector<double> out(a.values().size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.values()[i] > 0.0 ? 1.0 : 0.0;
  return Factor(a.scope(), a.cards(), std::move(out), a.label());
}

double dot(const Factor& a, const Factor& b) {
  if (a.scope() != b.scope())
    throw StructureError("dot requires identical scopes");
  double s = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i) s += a.values()[i] * b.values()[i];
  return s;
}

bool same_table(const Factor& a, const Factor& b, double rel_tol, double abs_tol) {
  if (a.scope() != b.scope() || a.cards() != b.cards()) return false;
  for (std::size_t i = 0; i < a.values().size(); ++i) {
    double x = a.values()[i], y = b.values()[i];
    double diff = std::fabs(x - y);
    if (diff > abs_tol && diff > rel_tol * std::max(std::fabs(x), std::fabs(y))) return false;
  }
  return true;
}

}  // namespace divkit
