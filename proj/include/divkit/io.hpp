#ifndef DIVKIT_IO_HPP_
#define DIVKIT_IO_HPP_

#include <string>
#include <vector>

#include "divkit/divergence.hpp"
#include "divkit/markov.hpp"

namespace divkit {

// 17 significant digits: round-trip exact in binary64 and byte-stable.
std::string format_double(double v);

// Model files are canonical JSON: variables by id, cliques sorted
// lexicographically, one table per clique with sorted scope. Loading
// validates chordality, clique maximality and normalization.
void save_model(const DecomposableModel& model, const std::string& path);
DecomposableModel load_model(const std::string& path);

void save_structure(const VariableTable& vars, const UndirectedGraph& graph,
                    const std::string& path);
// Returns the raw graph; chordality is checked by the caller that fits with it.
UndirectedGraph load_structure(const std::string& path, VariableTable* vars_out);

// Comma-separated samples with a header row of variable names; '#' lines are
// comments. Cardinalities are inferred as max value + 1 (at least 2) unless
// a table is supplied.
SampleDataset load_samples(const std::string& path, const VariableTable* vars = nullptr);
void save_samples(const SampleDataset& data, const std::string& path);

std::string grid_to_csv(const std::vector<GridCell>& cells, const VariableTable& vars);
std::string grid_to_json(const std::vector<GridCell>& cells, const VariableTable& vars);

std::string result_to_json(const DivergenceResult& result, const VariableTable& vars);
std::string result_to_csv(const DivergenceResult& result, const VariableTable& vars);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace divkit

#endif  // DIVKIT_IO_HPP_
