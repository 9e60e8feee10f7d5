#include "divkit/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace divkit {

namespace {

using nlohmann::json;

json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw DataError("malformed JSON in " + path + ": " + e.what());
  }
  return j;
}

std::string scope_key(const std::vector<int>& scope) {
  std::string key;
  for (int v : scope) key += std::to_string(v) + ",";
  return key;
}

void append_variables(std::string& out, const VariableTable& vars) {
  out += "  \"variables\": [\n";
  for (int i = 0; i < vars.size(); ++i) {
    out += "    {\"id\": " + std::to_string(i) +
           ", \"cardinality\": " + std::to_string(vars.cardinality(i)) + ", \"name\": " +
           json(vars.name(i)).dump() + "}";
    out += (i + 1 < vars.size()) ? ",\n" : "\n";
  }
  out += "  ],\n";
}

VariableTable variables_from_json(const json& j, const std::string& path) {
  if (!j.contains("variables") || !j["variables"].is_array())
    throw DataError(path + ": missing variables array");
  std::vector<Variable> vars;
  for (const auto& v : j["variables"]) {
    Variable entry;
    entry.id = v.at("id").get<int>();
    entry.cardinality = v.at("cardinality").get<int>();
    entry.name = v.value("name", "");
    vars.push_back(std::move(entry));
  }
  std::sort(vars.begin(), vars.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  try {
    return VariableTable(std::move(vars));
  } catch (const StructureError& e) {
    throw DataError(path + ": " + e.what());
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void save_model(const DecomposableModel& model, const std::string& path) {
  std::string out = "{\n  \"format_version\": 1,\n";
  append_variables(out, model.variables);

  out += "  \"cliques\": [";
  for (std::size_t i = 0; i < model.cliques.size(); ++i) {
    out += "[";
    for (std::size_t k = 0; k < model.cliques[i].size(); ++k) {
      out += std::to_string(model.cliques[i][k]);
      if (k + 1 < model.cliques[i].size()) out += ", ";
    }
    out += "]";
    if (i + 1 < model.cliques.size()) out += ", ";
  }
  out += "],\n";

  out += "  \"tables\": [\n";
  for (std::size_t i = 0; i < model.cpts.size(); ++i) {
    out += "    {\"scope\": [";
    for (std::size_t k = 0; k < model.cpts[i].scope().size(); ++k) {
      out += std::to_string(model.cpts[i].scope()[k]);
      if (k + 1 < model.cpts[i].scope().size()) out += ", ";
    }
    out += "], \"values\": [";
    for (std::size_t k = 0; k < model.cpts[i].values().size(); ++k) {
      out += format_double(model.cpts[i].values()[k]);
      if (k + 1 < model.cpts[i].values().size()) out += ", ";
    }
    out += "]}";
    out += (i + 1 < model.cpts.size()) ? ",\n" : "\n";
  }
  out += "  ]\n}\n";
  write_text_file(path, out);
}

DecomposableModel load_model(const std::string& path) {
  json j = parse_file(path);
  VariableTable vars = variables_from_json(j, path);

  if (!j.contains("cliques") || !j["cliques"].is_array())
    throw DataError(path + ": missing cliques array");
  std::vector<std::vector<int>> cliques;
  for (const auto& c : j["cliques"]) {
    std::vector<int> clique = c.get<std::vector<int>>();
    std::sort(clique.begin(), clique.end());
    clique.erase(std::unique(clique.begin(), clique.end()), clique.end());
    if (clique.empty()) throw DataError(path + ": empty clique");
    cliques.push_back(std::move(clique));
  }
  std::sort(cliques.begin(), cliques.end());

  UndirectedGraph graph = UndirectedGraph::from_cliques(cliques);
  for (int id = 0; id < vars.size(); ++id) graph.add_vertex(id);
  for (int v : graph.vertices())
    if (!vars.contains(v)) throw StructureError(path + ": clique references unknown variable");
  ChordalGraph chordal;
  try {
    chordal = as_chordal(graph);
  } catch (const StructureError&) {
    throw StructureError(path + ": clique set does not induce a chordal graph");
  }
  auto maximal = maximal_cliques(chordal);
  // Singleton cliques for isolated declared variables are implied; the file
  // must list every maximal clique (isolated ones included).
  if (maximal != cliques)
    throw StructureError(path + ": cliques are not the maximal cliques of their union graph");

  if (!j.contains("tables") || !j["tables"].is_array())
    throw DataError(path + ": missing tables array");
  std::map<std::string, Factor> by_scope;
  for (const auto& t : j["tables"]) {
    std::vector<int> scope = t.at("scope").get<std::vector<int>>();
    std::vector<double> values = t.at("values").get<std::vector<double>>();
    std::vector<int> order(scope.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int x, int y) { return scope[x] < scope[y]; });

    std::vector<int> sorted_scope;
    for (int i : order) sorted_scope.push_back(scope[i]);
    std::vector<int> cards = vars.cards_of(sorted_scope);

    // Re-lay the flat array when the stored scope order differs.
    std::vector<double> sorted_values(values.size());
    std::vector<int> stored_cards = vars.cards_of(scope);
    {
      std::vector<std::size_t> sorted_strides(scope.size());
      std::size_t acc = 1;
      for (int k = static_cast<int>(order.size()) - 1; k >= 0; --k) {
        sorted_strides[order[k]] = acc;  // stride of stored position order[k]
        acc *= static_cast<std::size_t>(cards[k]);
      }
      if (values.size() != acc) throw DataError(path + ": table size mismatch");
      std::vector<int> digit(scope.size(), 0);
      std::size_t sidx = 0;
      for (std::size_t i = 0; i < values.size(); ++i) {
        sorted_values[sidx] = values[i];
        for (int d = static_cast<int>(scope.size()) - 1; d >= 0; --d) {
          ++digit[d];
          sidx += sorted_strides[d];
          if (digit[d] < stored_cards[d]) break;
          sidx -= sorted_strides[d] * static_cast<std::size_t>(stored_cards[d]);
          digit[d] = 0;
        }
      }
    }
    Factor f(sorted_scope, cards, std::move(sorted_values));
    if (!by_scope.emplace(scope_key(sorted_scope), std::move(f)).second)
      throw DataError(path + ": duplicate table for scope " + scope_key(sorted_scope));
  }
  if (by_scope.size() != cliques.size())
    throw DataError(path + ": expected one table per clique, got " +
                    std::to_string(by_scope.size()) + " for " +
                    std::to_string(cliques.size()) + " cliques");

  std::vector<Factor> cpts;
  for (const auto& c : cliques) {
    auto it = by_scope.find(scope_key(c));
    if (it == by_scope.end())
      throw DataError(path + ": no table for clique " + scope_key(c));
    cpts.push_back(it->second);
    cpts.back().set_label("cpt" + scope_key(c));
  }

  DecomposableModel model{std::move(vars), std::move(chordal), std::move(cliques),
                          std::move(cpts)};
  validate_model(model);
  return model;
}

void save_structure(const VariableTable& vars, const UndirectedGraph& graph,
                    const std::string& path) {
  std::string out = "{\n  \"format_version\": 1,\n";
  append_variables(out, vars);
  out += "  \"edges\": [";
  auto edges = graph.edges();
  for (std::size_t i = 0; i < edges.size(); ++i) {
    out += "[" + std::to_string(edges[i].first) + ", " + std::to_string(edges[i].second) + "]";
    if (i + 1 < edges.size()) out += ", ";
  }
  out += "]\n}\n";
  write_text_file(path, out);
}

UndirectedGraph load_structure(const std::string& path, VariableTable* vars_out) {
  json j = parse_file(path);
  VariableTable vars = variables_from_json(j, path);
  UndirectedGraph g;
  for (int i = 0; i < vars.size(); ++i) g.add_vertex(i);
  if (!j.contains("edges") || !j["edges"].is_array())
    throw DataError(path + ": missing edges array");
  for (const auto& e : j["edges"]) {
    std::vector<int> pair = e.get<std::vector<int>>();
    if (pair.size() != 2) throw DataError(path + ": edge must have two endpoints");
    if (!vars.contains(pair[0]) || !vars.contains(pair[1]))
      throw StructureError(path + ": edge references unknown variable");
    g.add_edge(pair[0], pair[1]);
  }
  if (vars_out) *vars_out = std::move(vars);
  return g;
}

SampleDataset load_samples(const std::string& path, const VariableTable* vars) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);

  auto split = [](const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
      if (ch == ',') {
        out.push_back(cur);
        cur.clear();
      } else if (ch != '\r') {
        cur += ch;
      }
    }
    out.push_back(cur);
    return out;
  };

  std::string line;
  std::vector<std::string> names;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    names = split(line);
    break;
  }
  if (names.empty()) throw DataError(path + ": missing header row");

  std::vector<std::vector<int>> rows;
  std::vector<int> max_value(names.size(), 1);
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto fields = split(line);
    if (fields.size() != names.size())
      throw DataError(path + ": row has " + std::to_string(fields.size()) +
                      " fields, expected " + std::to_string(names.size()));
    std::vector<int> row(fields.size());
    for (std::size_t i = 0; i < fields.size(); ++i) {
      try {
        std::size_t pos = 0;
        row[i] = std::stoi(fields[i], &pos);
        if (pos != fields[i].size()) throw std::invalid_argument(fields[i]);
      } catch (const std::exception&) {
        throw DataError(path + ": non-integer sample value '" + fields[i] + "'");
      }
      if (row[i] < 0) throw DataError(path + ": negative sample value");
      max_value[i] = std::max(max_value[i], row[i]);
    }
    rows.push_back(std::move(row));
  }

  SampleDataset data;
  if (vars) {
    if (vars->size() != static_cast<int>(names.size()))
      throw DataError(path + ": column count does not match the variable table");
    for (std::size_t i = 0; i < names.size(); ++i)
      if (vars->name(static_cast<int>(i)) != names[i])
        throw DataError(path + ": column '" + names[i] + "' does not match variable '" +
                        vars->name(static_cast<int>(i)) + "'");
    data.variables = *vars;
  } else {
    std::vector<Variable> entries;
    for (std::size_t i = 0; i < names.size(); ++i)
      entries.push_back({static_cast<int>(i), std::max(2, max_value[i] + 1), names[i]});
    data.variables = VariableTable(std::move(entries));
  }
  for (const auto& row : rows)
    for (std::size_t i = 0; i < row.size(); ++i)
      if (row[i] >= data.variables.cardinality(static_cast<int>(i)))
        throw DataError(path + ": sample value exceeds declared cardinality");
  data.rows = std::move(rows);
  return data;
}

void save_samples(const SampleDataset& data, const std::string& path) {
  std::string out;
  for (int i = 0; i < data.variables.size(); ++i) {
    out += data.variables.name(i);
    if (i + 1 < data.variables.size()) out += ",";
  }
  out += "\n";
  for (const auto& row : data.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out += std::to_string(row[i]);
      if (i + 1 < row.size()) out += ",";
    }
    out += "\n";
  }
  write_text_file(path, out);
}

namespace {

std::string tuple_names(const std::vector<int>& tuple, const VariableTable& vars) {
  std::string out;
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    out += vars.name(tuple[i]);
    if (i + 1 < tuple.size()) out += ";";
  }
  return out;
}

}  // namespace

std::string grid_to_csv(const std::vector<GridCell>& cells, const VariableTable& vars) {
  std::string out = "tuple,value\n";
  for (const auto& cell : cells)
    out += tuple_names(cell.tuple, vars) + "," + format_double(cell.value) + "\n";
  return out;
}

std::string grid_to_json(const std::vector<GridCell>& cells, const VariableTable& vars) {
  std::string out = "[\n";
  for (std::size_t i = 0; i < cells.size(); ++i) {
    out += "  {\"tuple\": \"" + tuple_names(cells[i].tuple, vars) + "\", \"value\": " +
           format_double(cells[i].value) + "}";
    out += (i + 1 < cells.size()) ? ",\n" : "\n";
  }
  out += "]\n";
  return out;
}

namespace {

std::string scope_json(const DivergenceScope& scope, const VariableTable& vars) {
  switch (scope.kind) {
    case DivergenceScope::Kind::joint:
      return "{\"kind\": \"joint\"}";
    case DivergenceScope::Kind::marginal:
      return "{\"kind\": \"marginal\", \"variables\": \"" + tuple_names(scope.target, vars) +
             "\"}";
    case DivergenceScope::Kind::conditional:
      return "{\"kind\": \"conditional\", \"target\": \"" + tuple_names(scope.target, vars) +
             "\", \"given\": \"" + tuple_names(scope.given, vars) + "\"}";
  }
  return "{}";
}

}  // namespace

std::string result_to_json(const DivergenceResult& result, const VariableTable& vars) {
  std::string out = "{\n";
  out += "  \"value\": " + format_double(result.value) + ",\n";
  out += "  \"alpha\": " + format_double(result.params.alpha) + ",\n";
  out += "  \"beta\": " + format_double(result.params.beta) + ",\n";
  out += "  \"branch\": \"" + std::string(branch_name(result.params.branch)) + "\",\n";
  out += "  \"scope\": " + scope_json(result.scope, vars) + ",\n";
  out += "  \"diagnostics\": {\"treewidths\": [";
  for (std::size_t i = 0; i < result.diagnostics.treewidths.size(); ++i) {
    out += std::to_string(result.diagnostics.treewidths[i]);
    if (i + 1 < result.diagnostics.treewidths.size()) out += ", ";
  }
  out += "], \"max_table_cells\": " + std::to_string(result.diagnostics.max_table_cells);
  out += "}\n}\n";
  return out;
}

std::string result_to_csv(const DivergenceResult& result, const VariableTable& vars) {
  (void)vars;
  std::string out = "alpha,beta,branch,value\n";
  out += format_double(result.params.alpha) + "," + format_double(result.params.beta) + "," +
         branch_name(result.params.branch) + "," + format_double(result.value) + "\n";
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out << content;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace divkit
