#ifndef DIVKIT_VARIABLES_HPP_
#define DIVKIT_VARIABLES_HPP_

#include <span>
#include <string>
#include <vector>

#include "divkit/errors.hpp"

namespace divkit {

struct Variable {
  int id = 0;
  int cardinality = 2;
  std::string name;
};

// The set of discrete variables a model is defined over. Ids are dense
// (0..n-1) and every cardinality is at least 2.
class VariableTable {
 public:
  VariableTable() = default;
  explicit VariableTable(std::vector<Variable> entries) : entries_(std::move(entries)) {
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      if (entries_[i].id != static_cast<int>(i))
        throw StructureError("variable ids must be dense 0..n-1");
      if (entries_[i].cardinality < 2)
        throw StructureError("variable " + std::to_string(i) + " has cardinality < 2");
      if (entries_[i].name.empty()) entries_[i].name = "x" + std::to_string(i);
    }
  }

  int size() const { return static_cast<int>(entries_.size()); }
  bool contains(int id) const { return id >= 0 && id < size(); }

  int cardinality(int id) const {
    if (!contains(id)) throw StructureError("unknown variable id " + std::to_string(id));
    return entries_[id].cardinality;
  }
  const std::string& name(int id) const {
    if (!contains(id)) throw StructureError("unknown variable id " + std::to_string(id));
    return entries_[id].name;
  }
  const std::vector<Variable>& entries() const { return entries_; }

  std::vector<int> all_ids() const {
    std::vector<int> ids(entries_.size());
    for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<int>(i);
    return ids;
  }

  std::vector<int> cards_of(std::span<const int> ids) const {
    std::vector<int> out;
    out.reserve(ids.size());
    for (int id : ids) out.push_back(cardinality(id));
    return out;
  }

  // Product of cardinalities; double so huge domains stay representable.
  double domain_size(std::span<const int> ids) const {
    double p = 1.0;
    for (int id : ids) p *= cardinality(id);
    return p;
  }

  // -1 when no variable carries the name.
  int find_by_name(const std::string& name) const {
    for (const auto& v : entries_)
      if (v.name == name) return v.id;
    return -1;
  }

  bool same_as(const VariableTable& other) const {
    if (entries_.size() != other.entries_.size()) return false;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      const auto& a = entries_[i];
      const auto& b = other.entries_[i];
      if (a.id != b.id || a.cardinality != b.cardinality || a.name != b.name) return false;
    }
    return true;
  }

  static VariableTable binary(int n) {
    std::vector<Variable> vs;
    vs.reserve(n);
    for (int i = 0; i < n; ++i) vs.push_back({i, 2, "x" + std::to_string(i)});
    return VariableTable(std::move(vs));
  }

 private:
  std::vector<Variable> entries_;
};

}  // namespace divkit

#endif  // DIVKIT_VARIABLES_HPP_
