// divkit: exact alpha-beta divergences between decomposable models.
//
// Subcommands: fit, divergence, grid, report (and a hidden oracle used for
// debugging against the brute-force reference). Payload goes to stdout or
// --out; logs go to stderr. Exit codes: 0 ok, 2 structural error, 3 data
// error, 4 positivity, 5 overflow, 6 domain guard.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "divkit/divergence.hpp"
#include "divkit/io.hpp"
#include "divkit/oracle.hpp"

namespace {

using namespace divkit;

int default_threads() {
  if (const char* env = std::getenv("DIVKIT_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 0;  // resolved to hardware parallelism downstream
}

std::vector<int> parse_variable_list(const std::string& text, const VariableTable& vars) {
  std::vector<int> out;
  std::string cur;
  auto flush = [&]() {
    if (cur.empty()) return;
    int id = vars.find_by_name(cur);
    if (id < 0) {
      try {
        std::size_t pos = 0;
        id = std::stoi(cur, &pos);
        if (pos != cur.size()) id = -1;
      } catch (const std::exception&) {
        id = -1;
      }
    }
    if (id < 0 || !vars.contains(id))
      throw StructureError("unknown variable '" + cur + "'");
    out.push_back(id);
    cur.clear();
  };
  for (char ch : text) {
    if (ch == ',' || ch == ';') {
      flush();
    } else if (ch != ' ') {
      cur += ch;
    }
  }
  flush();
  return out;
}

void emit(const std::string& payload, const std::string& out_path) {
  if (out_path.empty() || out_path == "-")
    std::cout << payload;
  else
    write_text_file(out_path, payload);
}

struct ScopeFlags {
  std::string marginal;
  std::string target;
  std::string given;

  DivergenceScope resolve(const VariableTable& vars) const {
    if (!marginal.empty() && (!target.empty() || !given.empty()))
      throw StructureError("--marginal excludes --target/--given");
    if (!marginal.empty())
      return DivergenceScope::marginal(parse_variable_list(marginal, vars));
    if (!target.empty())
      return DivergenceScope::conditional(parse_variable_list(target, vars),
                                          given.empty() ? std::vector<int>{}
                                                        : parse_variable_list(given, vars));
    if (!given.empty()) throw StructureError("--given requires --target");
    return DivergenceScope::joint();
  }
};

struct ParamFlags {
  double alpha = 1.0;
  double beta = 0.0;
  bool have_alpha = false;
  bool have_beta = false;
  std::string preset;

  // hellinger needs the sqrt post-map, so callers get the preset too
  std::optional<NamedDivergence> named() const {
    if (preset.empty()) return std::nullopt;
    auto found = named_divergence_from(preset);
    if (!found) throw StructureError("unknown preset '" + preset + "'");
    return found;
  }
};

DivergenceResult run_divergence(const DecomposableModel& p, const DecomposableModel& q,
                                const ParamFlags& params, const DivergenceScope& scope,
                                const EngineOptions& options) {
  if (auto preset = params.named()) {
    if (params.have_alpha || params.have_beta)
      throw StructureError("--preset excludes --alpha/--beta");
    return named_divergence(p, q, *preset, scope, options);
  }
  if (!params.have_alpha || !params.have_beta)
    throw StructureError("need either --preset or both --alpha and --beta");
  DivergenceRequest request{ABParams::make(params.alpha, params.beta), scope};
  return ab_divergence(p, q, request, options);
}

EliminationOrder parse_order(const std::string& name) {
  if (name == "min-fill") return EliminationOrder::min_fill;
  if (name == "reverse-id") return EliminationOrder::reverse_id;
  throw StructureError("unknown elimination order '" + name + "'");
}

// ---- fit -------------------------------------------------------------------

int cmd_fit(const std::string& structure_path, const std::string& learn,
            const std::string& data_path, double pseudocount, const std::string& out_path) {
  SampleDataset data = load_samples(data_path);
  ChordalGraph structure;
  if (!structure_path.empty()) {
    VariableTable declared;
    UndirectedGraph g = load_structure(structure_path, &declared);
    if (declared.size() != data.variables.size())
      throw StructureError("structure and data disagree on the variable count");
    if (!is_chordal(g)) throw StructureError("structure graph is not chordal");
    structure = as_chordal(g);
  } else if (learn == "chow-liu") {
    structure = chow_liu_structure(data, pseudocount);
  } else {
    throw StructureError("need --structure PATH or --learn chow-liu");
  }

  DecomposableModel model = fit_parameters(structure, data, pseudocount);
  save_model(model, out_path);

  double ll = log_likelihood(model, data);
  std::cout << "{\"variables\": " << model.variables.size()
            << ", \"cliques\": " << model.cliques.size()
            << ", \"treewidth\": " << treewidth(model.graph)
            << ", \"log_likelihood\": " << format_double(ll) << "}\n";
  return 0;
}

// ---- divergence ------------------------------------------------------------

int cmd_divergence(const std::string& p_path, const std::string& q_path,
                   const ParamFlags& params, const ScopeFlags& scope_flags,
                   const std::string& out_path, const std::string& format,
                   const std::string& elimination) {
  DecomposableModel p = load_model(p_path);
  DecomposableModel q = load_model(q_path);
  if (!p.variables.same_as(q.variables))
    throw StructureError("models are defined over different variable tables");

  EngineOptions options{parse_order(elimination)};
  DivergenceScope scope = scope_flags.resolve(p.variables);
  DivergenceResult result = run_divergence(p, q, params, scope, options);
  std::cerr << "divkit: computed in " << result.diagnostics.millis << " ms\n";

  emit(format == "csv" ? result_to_csv(result, p.variables)
                       : result_to_json(result, p.variables),
       out_path);
  return 0;
}

// ---- grid ------------------------------------------------------------------

std::vector<std::vector<int>> load_tuples(const std::string& path, const VariableTable& vars) {
  std::vector<std::vector<int>> tuples;
  std::string text = read_text_file(path);
  std::string line;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == '\n') {
      if (!line.empty() && line[0] != '#') tuples.push_back(parse_variable_list(line, vars));
      line.clear();
    } else if (text[i] != '\r') {
      line += text[i];
    }
  }
  return tuples;
}

int cmd_grid(const std::string& p_path, const std::string& q_path, int order,
             const std::string& preset, const std::string& tuples_path,
             const std::string& out_path, const std::string& format, int threads) {
  DecomposableModel p = load_model(p_path);
  DecomposableModel q = load_model(q_path);
  if (!p.variables.same_as(q.variables))
    throw StructureError("models are defined over different variable tables");
  auto named = named_divergence_from(preset);
  if (!named) throw StructureError("unknown preset '" + preset + "'");

  std::vector<std::vector<int>> tuples;
  const std::vector<std::vector<int>>* tuples_ptr = nullptr;
  if (!tuples_path.empty()) {
    tuples = load_tuples(tuples_path, p.variables);
    tuples_ptr = &tuples;
  }
  auto cells = divergence_grid(p, q, order, *named, tuples_ptr, threads);
  emit(format == "json" ? grid_to_json(cells, p.variables) : grid_to_csv(cells, p.variables),
       out_path);
  return 0;
}

// ---- report ----------------------------------------------------------------

int cmd_report(const std::string& ideal_path, const std::string& observed_path,
               const std::string& structure_path, const std::string& learn,
               double pseudocount, const std::string& orders_text, const std::string& preset,
               const std::string& out_dir, int threads, bool shared_structure) {
  SampleDataset ideal = load_samples(ideal_path);
  SampleDataset observed = load_samples(observed_path, &ideal.variables);
  auto named = named_divergence_from(preset);
  if (!named) throw StructureError("unknown preset '" + preset + "'");

  std::vector<int> orders;
  for (const char* s = orders_text.c_str(); *s;) {
    char* end = nullptr;
    long v = std::strtol(s, &end, 10);
    if (end == s) throw DataError("bad --orders list '" + orders_text + "'");
    orders.push_back(static_cast<int>(v));
    s = (*end == ',') ? end + 1 : end;
  }
  if (orders.empty()) throw DataError("--orders must name at least one order");

  ChordalGraph p_structure, q_structure;
  if (!structure_path.empty()) {
    VariableTable declared;
    UndirectedGraph g = load_structure(structure_path, &declared);
    if (!is_chordal(g)) throw StructureError("structure graph is not chordal");
    p_structure = q_structure = as_chordal(g);
  } else if (learn == "chow-liu") {
    if (shared_structure) {
      SampleDataset merged = ideal;
      merged.rows.insert(merged.rows.end(), observed.rows.begin(), observed.rows.end());
      p_structure = q_structure = chow_liu_structure(merged, pseudocount);
    } else {
      p_structure = chow_liu_structure(ideal, pseudocount);
      q_structure = chow_liu_structure(observed, pseudocount);
    }
  } else {
    throw StructureError("need --structure PATH or --learn chow-liu");
  }

  DecomposableModel p = fit_parameters(p_structure, ideal, pseudocount);
  DecomposableModel q = fit_parameters(q_structure, observed, pseudocount);

  std::filesystem::create_directories(out_dir);
  auto in_dir = [&](const std::string& name) {
    return (std::filesystem::path(out_dir) / name).string();
  };
  save_model(p, in_dir("p_model.json"));
  save_model(q, in_dir("q_model.json"));

  std::string summary = "{\n  \"preset\": \"" + preset + "\",\n  \"orders\": [";
  for (std::size_t i = 0; i < orders.size(); ++i) {
    summary += std::to_string(orders[i]);
    if (i + 1 < orders.size()) summary += ", ";
  }
  summary += "],\n  \"top_tuples\": {\n";

  for (std::size_t oi = 0; oi < orders.size(); ++oi) {
    int order = orders[oi];
    auto cells = divergence_grid(p, q, order, *named, nullptr, threads);
    write_text_file(in_dir("order-" + std::to_string(order) + ".csv"),
                    grid_to_csv(cells, p.variables));

    auto ranked = cells;
    std::stable_sort(ranked.begin(), ranked.end(), [](const GridCell& a, const GridCell& b) {
      if (a.value != b.value) return a.value > b.value;
      return a.tuple < b.tuple;
    });
    if (ranked.size() > 10) ranked.resize(10);

    summary += "    \"" + std::to_string(order) + "\": [\n";
    for (std::size_t i = 0; i < ranked.size(); ++i) {
      std::string names;
      for (std::size_t k = 0; k < ranked[i].tuple.size(); ++k) {
        names += p.variables.name(ranked[i].tuple[k]);
        if (k + 1 < ranked[i].tuple.size()) names += ";";
      }
      summary += "      {\"tuple\": \"" + names +
                 "\", \"value\": " + format_double(ranked[i].value) + "}";
      summary += (i + 1 < ranked.size()) ? ",\n" : "\n";
    }
    summary += "    ]";
    summary += (oi + 1 < orders.size()) ? ",\n" : "\n";
  }
  summary += "  }\n}\n";
  write_text_file(in_dir("summary.json"), summary);
  std::cerr << "divkit: report written to " << out_dir << "\n";
  return 0;
}

// ---- oracle (hidden) ---------------------------------------------------------

int cmd_oracle(const std::string& p_path, const std::string& q_path, const ParamFlags& params,
               const ScopeFlags& scope_flags) {
  DecomposableModel p = load_model(p_path);
  DecomposableModel q = load_model(q_path);
  if (!p.variables.same_as(q.variables))
    throw StructureError("models are defined over different variable tables");
  JointTable pt = joint_table(p);
  JointTable qt = joint_table(q);
  DivergenceScope scope = scope_flags.resolve(p.variables);

  double value;
  if (auto preset = params.named()) {
    DivergenceRequest request{ABParams::make(1, 0), scope};
    switch (*preset) {
      case NamedDivergence::kl: request.params = ABParams::make(1, 0); break;
      case NamedDivergence::reverse_kl: request.params = ABParams::make(0, 1); break;
      case NamedDivergence::hellinger: request.params = ABParams::make(0.5, 0.5); break;
      case NamedDivergence::itakura_saito: request.params = ABParams::make(1, -1); break;
      case NamedDivergence::log_l2: request.params = ABParams::make(0, 0); break;
    }
    value = oracle_divergence(pt, qt, request);
    if (*preset == NamedDivergence::hellinger)
      value = std::sqrt(std::max(0.0, value / 4.0));
  } else {
    if (!params.have_alpha || !params.have_beta)
      throw StructureError("need either --preset or both --alpha and --beta");
    DivergenceRequest request{ABParams::make(params.alpha, params.beta), scope};
    value = oracle_divergence(pt, qt, request);
  }

  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  std::cout << buf << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact alpha-beta divergences between decomposable models"};
  app.require_subcommand(1);

  // fit
  auto* fit = app.add_subcommand("fit", "fit a decomposable model from samples");
  std::string fit_structure, fit_learn, fit_data, fit_out;
  double fit_pseudocount = 1.0;
  fit->add_option("--structure", fit_structure, "structure JSON path");
  fit->add_option("--learn", fit_learn, "structure learner (chow-liu)");
  fit->add_option("--data", fit_data, "sample CSV path")->required();
  fit->add_option("--pseudocount", fit_pseudocount, "Dirichlet pseudocount (default 1)");
  fit->add_option("--out", fit_out, "output model path")->required();

  // divergence
  auto* div = app.add_subcommand("divergence", "divergence between two models");
  std::string div_p, div_q, div_out, div_format = "json", div_elim = "min-fill";
  ParamFlags div_params;
  ScopeFlags div_scope;
  div->add_option("--p", div_p, "model P path")->required();
  div->add_option("--q", div_q, "model Q path")->required();
  auto* alpha_opt = div->add_option("--alpha", div_params.alpha, "alpha parameter");
  auto* beta_opt = div->add_option("--beta", div_params.beta, "beta parameter");
  div->add_option("--preset", div_params.preset,
                  "kl | reverse-kl | hellinger | itakura-saito | log-l2");
  div->add_option("--marginal", div_scope.marginal, "marginal variables (comma list)");
  div->add_option("--target", div_scope.target, "conditional target variables");
  div->add_option("--given", div_scope.given, "conditioning variables");
  div->add_option("--out", div_out, "output path (default stdout)");
  div->add_option("--format", div_format, "json | csv");
  div->add_option("--elimination", div_elim, "min-fill | reverse-id");

  // grid
  auto* grid = app.add_subcommand("grid", "marginal divergence over variable tuples");
  std::string grid_p, grid_q, grid_preset = "hellinger", grid_tuples, grid_out,
              grid_format = "csv";
  int grid_order = 1, grid_threads = default_threads();
  grid->add_option("--p", grid_p)->required();
  grid->add_option("--q", grid_q)->required();
  grid->add_option("--order", grid_order, "tuple size (default 1)");
  grid->add_option("--preset", grid_preset, "named divergence (default hellinger)");
  grid->add_option("--tuples", grid_tuples, "file of tuples (overrides --order)");
  grid->add_option("--out", grid_out, "output path (default stdout)");
  grid->add_option("--format", grid_format, "csv | json");
  grid->add_option("--threads", grid_threads, "worker threads (env DIVKIT_THREADS)");

  // report
  auto* report = app.add_subcommand("report", "fit two models and write divergence grids");
  std::string rep_ideal, rep_observed, rep_structure, rep_learn, rep_orders = "1,2",
              rep_preset = "hellinger", rep_out;
  double rep_pseudocount = 1.0;
  int rep_threads = default_threads();
  bool rep_shared = true;
  report->add_option("--ideal-data", rep_ideal)->required();
  report->add_option("--observed-data", rep_observed)->required();
  report->add_option("--structure", rep_structure);
  report->add_option("--learn", rep_learn, "structure learner (chow-liu)");
  report->add_option("--pseudocount", rep_pseudocount);
  report->add_option("--orders", rep_orders, "comma list of tuple orders (default 1,2)");
  report->add_option("--preset", rep_preset);
  report->add_option("--out", rep_out, "output directory")->required();
  report->add_option("--threads", rep_threads);
  report->add_flag("--shared-structure,!--no-shared-structure", rep_shared,
                   "learn one structure on the concatenated data (default)");

  // oracle (hidden debugging harness)
  auto* oracle = app.add_subcommand("oracle", "brute-force reference value");
  oracle->group("");
  std::string orc_p, orc_q;
  ParamFlags orc_params;
  ScopeFlags orc_scope;
  oracle->add_option("--p", orc_p)->required();
  oracle->add_option("--q", orc_q)->required();
  auto* orc_alpha = oracle->add_option("--alpha", orc_params.alpha);
  auto* orc_beta = oracle->add_option("--beta", orc_params.beta);
  oracle->add_option("--preset", orc_params.preset);
  oracle->add_option("--marginal", orc_scope.marginal);
  oracle->add_option("--target", orc_scope.target);
  oracle->add_option("--given", orc_scope.given);

  CLI11_PARSE(app, argc, argv);

  try {
    if (fit->parsed())
      return cmd_fit(fit_structure, fit_learn, fit_data, fit_pseudocount, fit_out);
    if (div->parsed()) {
      div_params.have_alpha = alpha_opt->count() > 0;
      div_params.have_beta = beta_opt->count() > 0;
      return cmd_divergence(div_p, div_q, div_params, div_scope, div_out, div_format,
                            div_elim);
    }
    if (grid->parsed())
      return cmd_grid(grid_p, grid_q, grid_order, grid_preset, grid_tuples, grid_out,
                      grid_format, grid_threads);
    if (report->parsed())
      return cmd_report(rep_ideal, rep_observed, rep_structure, rep_learn, rep_pseudocount,
                        rep_orders, rep_preset, rep_out, rep_threads, rep_shared);
    if (oracle->parsed()) {
      orc_params.have_alpha = orc_alpha->count() > 0;
      orc_params.have_beta = orc_beta->count() > 0;
      return cmd_oracle(orc_p, orc_q, orc_params, orc_scope);
    }
  } catch (const Error& e) {
    std::cerr << "divkit: " << e.what() << "\n";
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    std::cerr << "divkit: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
