#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "modlogic/modlogic.hpp"

namespace modlogic::cli {
namespace {

// Raised for bad input; reported on stderr with exit code 1.
struct UsageFailure {
  std::string message;
};

// Raised when a result fails its own re-check; exit code 2.
struct CheckFailure {
  std::string message;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageFailure{"cannot open '" + path + "'"};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << content)) throw UsageFailure{"cannot write '" + path + "'"};
}

template <typename Parse>
auto parse_input(const std::string& path, Parse&& parse) {
  const std::string text = read_file(path);
  try {
    return parse(text);
  } catch (const Error& e) {
    throw UsageFailure{path + ": " + e.what()};
  }
}

void print_model(std::ostream& out, const SymbolTable& symbols, const Assignment& a, const std::string& prefix = "") {
  std::vector<std::pair<std::string, Residue>> rows;
  for (std::uint32_t i = 0; i < symbols.size(); ++i) rows.emplace_back(symbols.name(VarId{i}), a.at(VarId{i}));
  std::sort(rows.begin(), rows.end());
  for (const auto& [name, value] : rows) out << prefix << name << " = " << value << "\n";
}

/// Reads `name = value` lines; everything else (report keys, comments) is
/// skipped, so a saved `solve` report is a valid model file.
Assignment parse_model(const std::string& text, const SymbolTable& symbols, Modulus n) {
  Assignment a(symbols.size());
  std::vector<char> seen(symbols.size(), 0);
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<std::string> tokens;
    for (std::string t; ls >> t;) tokens.push_back(t);
    if (tokens.size() != 3 || tokens[1] != "=" || !SymbolTable::valid_name(tokens[0])) continue;
    std::int64_t value = 0;
    const auto& num = tokens[2];
    auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), value);
    if (ec != std::errc{} || ptr != num.data() + num.size()) continue;
    auto id = symbols.lookup(tokens[0]);
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (!id) throw UsageFailure{where + "unknown variable '" + tokens[0] + "'"};
    if (value < 0 || value >= n.value()) throw UsageFailure{where + "value " + num + " is not a residue mod " + std::to_string(n.value())};
    if (seen[id->index]) throw UsageFailure{where + "variable '" + tokens[0] + "' assigned twice"};
    seen[id->index] = 1;
    a.set(*id, value);
  }
  return a;
}

// ---------------------------------------------------------------------------

struct SolveOptions {
  std::string file;
  bool oracle = false;
  bool relax = false;
  bool normalize = false;
  bool time = false;
  std::uint64_t budget = mdl::kDefaultBudget;
};

void report_relaxation(std::ostream& out, const ConstraintSystem& sys) {
  const idl::Relaxation relaxed = idl::relax_to_idl(sys);
  const idl::IdlOutcome outcome = idl::solve_idl(relaxed);
  if (const auto* model = std::get_if<idl::IdlModel>(&outcome)) {
    if (!idl::satisfies(*model, relaxed.constraints)) throw CheckFailure{"integer model fails its own check"};
    // Report values relative to the zero variable so constants read literally.
    const std::int64_t base = relaxed.zero ? model->values[relaxed.zero->index] : 0;
    out << "integer: SAT\n";
    std::vector<std::pair<std::string, std::int64_t>> rows;
    for (std::uint32_t i = 0; i < sys.num_vars(); ++i) rows.emplace_back(sys.symbols().name(VarId{i}), model->values[i] - base);
    std::sort(rows.begin(), rows.end());
    for (const auto& [name, value] : rows) out << "int " << name << " = " << value << "\n";
    return;
  }
  const auto& cert = std::get<idl::IdlCertificate>(outcome);
  if (!idl::is_valid_certificate(cert, relaxed.constraints)) throw CheckFailure{"integer certificate fails its own check"};
  out << "integer: UNSAT\n";
  for (std::size_t src : cert.source) {
    out << "core: " << render_constraint(sys.symbols(), sys.constraints()[relaxed.source[src]]) << "\n";
  }
  out << "cycle_weight: " << cert.weight << "\n";
}

int cmd_solve(const SolveOptions& opt, std::ostream& out) {
  const ConstraintSystem sys = parse_input(opt.file, [](const std::string& t) { return parse_system(t); });
  const auto start = std::chrono::steady_clock::now();

  out << "file: " << opt.file << "\n";
  out << "modulus: " << sys.modulus().value() << "\n";
  out << "variables: " << sys.num_vars() << "\n";
  out << "constraints: " << sys.constraints().size() << "\n";

  mdl::SolveOutcome result;
  if (opt.oracle) {
    out << "solver: brute-force\n";
    try {
      result = mdl::brute_force_sat(sys, opt.budget);
    } catch (const mdl::BudgetExceeded& e) {
      throw UsageFailure{std::string("oracle budget exceeded: ") + e.what()};
    }
  } else {
    out << "solver: bounded\n";
    try {
      result = mdl::solve(sys);
    } catch (const LimitError& e) {
      throw UsageFailure{e.what()};
    } catch (const mdl::InvariantViolation& e) {
      throw CheckFailure{e.what()};
    }
  }
  const mdl::SearchStats stats = std::visit([](const auto& r) { return r.stats; }, result);
  out << "domain_size: " << stats.domain_size << "\n";
  out << "nodes: " << stats.nodes << "\n";

  const bool sat = mdl::is_sat(result);
  if (sat) {
    Assignment model = std::get<mdl::Sat>(result).model;
    if (!eval_system(sys, model).satisfied()) throw CheckFailure{"modular model fails its own check"};
    if (opt.normalize) {
      try {
        model = mdl::normalize_solution(sys, model);
      } catch (const mdl::InvariantViolation& e) {
        throw CheckFailure{e.what()};
      }
      const auto bound = mdl::small_model_bound(sys);
      for (std::uint32_t i = 0; i < sys.num_vars(); ++i) {
        if (!bound.contains(model.at(VarId{i}))) throw CheckFailure{"normalized value outside the small-model bound"};
      }
      if (!eval_system(sys, model).satisfied()) throw CheckFailure{"normalized model fails its own check"};
      out << "normalized: yes\n";
    }
    out << "modular: SAT\n";
    print_model(out, sys.symbols(), model);
  } else {
    out << "modular: UNSAT\n";
  }

  if (opt.relax) report_relaxation(out, sys);

  if (opt.time) {
    const auto elapsed = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start);
    out << "time_ms: " << std::fixed << std::setprecision(3) << elapsed.count() << "\n";
  }
  return sat ? kSat : kUnsat;
}

// ---------------------------------------------------------------------------

struct ReduceOptions {
  std::string graph;
  std::string variant = "nonstrict";
  std::int64_t modulus = 0;
  std::string prefix;
};

int cmd_reduce(const ReduceOptions& opt, std::ostream& out) {
  const auto g = parse_input(opt.graph, [](const std::string& t) { return reductions::parse_dimacs_graph(t); });
  const auto variant = opt.variant == "strict" ? reductions::Variant::Strict : reductions::Variant::NonStrict;
  std::optional<reductions::Encoding> enc;
  try {
    enc.emplace(reductions::encode_3col(g, Modulus(opt.modulus), variant));
  } catch (const Error& e) {
    throw UsageFailure{e.what()};
  }
  write_file(opt.prefix + ".mdl", render_system(enc->system));
  write_file(opt.prefix + ".meta", reductions::render_meta(enc->meta, enc->system.symbols()));
  out << "variant: " << reductions::variant_name(variant) << "\n";
  out << "modulus: " << opt.modulus << "\n";
  out << "vertices: " << g.num_vertices() << "\n";
  out << "edges: " << g.edges().size() << "\n";
  out << "variables: " << enc->system.num_vars() << "\n";
  out << "constraints: " << enc->system.constraints().size() << "\n";
  out << "system: " << opt.prefix << ".mdl\n";
  out << "meta: " << opt.prefix << ".meta\n";
  return kSuccess;
}

// ---------------------------------------------------------------------------

int cmd_decode(const std::string& meta_path, const std::string& model_path, std::ostream& out) {
  const auto side = parse_input(meta_path, [](const std::string& t) { return reductions::parse_meta(t); });
  const auto enc = reductions::encode_3col(side.graph, side.modulus, side.variant);
  const auto& symbols = enc.system.symbols();
  bool names_match = side.vertex_names.size() == enc.meta.vertex_vars.size() && side.edge_names.size() == enc.meta.edge_vars.size();
  for (std::size_t v = 0; names_match && v < side.vertex_names.size(); ++v) {
    for (std::size_t c = 0; c < 3; ++c) names_match = names_match && side.vertex_names[v][c] == symbols.name(enc.meta.vertex_vars[v][c]);
  }
  for (std::size_t i = 0; names_match && i < side.edge_names.size(); ++i) {
    names_match = side.edge_names[i][0] == symbols.name(enc.meta.edge_vars[i].e) && side.edge_names[i][1] == symbols.name(enc.meta.edge_vars[i].f);
  }
  if (!names_match) throw UsageFailure{meta_path + ": variable names do not match the encoding"};

  const Assignment model = parse_model(read_file(model_path), symbols, side.modulus);
  for (std::uint32_t i = 0; i < symbols.size(); ++i) {
    if (!model.get(VarId{i})) throw CheckFailure{"model does not assign '" + symbols.name(VarId{i}) + "'"};
  }
  if (auto r = eval_system(enc.system, model); !r.satisfied()) {
    throw CheckFailure{"model violates constraint #" + std::to_string(*r.violated) + ": " +
                       render_constraint(symbols, enc.system.constraints()[*r.violated])};
  }
  reductions::Coloring col;
  try {
    col = reductions::decode_coloring(enc.meta, model);
  } catch (const reductions::DecodeError& e) {
    throw CheckFailure{e.what()};
  }
  if (!reductions::verify_coloring(side.graph, col)) throw CheckFailure{"decoded coloring is not proper"};
  for (std::size_t v = 0; v < col.size(); ++v) out << "color " << v << " " << col[v] << "\n";
  return kSuccess;
}

// ---------------------------------------------------------------------------

struct GenOptions {
  std::string kind;
  std::int64_t modulus = 0;
  gen::RandomParams random;
  std::uint64_t seed = 1;
  std::string out;
};

int cmd_gen(const GenOptions& opt, std::ostream& out) {
  std::string text;
  try {
    const Modulus n(opt.modulus);
    if (opt.kind == "intro1") {
      text = render_system(gen::intro_gap(n));
    } else if (opt.kind == "intro2" || opt.kind == "chain") {
      text = render_system(gen::chain(n));
    } else if (opt.kind == "idl-paper") {
      text = render_system(gen::idl_cycle_example(n));
    } else {
      gen::RandomParams params = opt.random;
      params.modulus = opt.modulus;
      text = "# random vars=" + std::to_string(params.vars) + " cons=" + std::to_string(params.constraints) +
             " m=" + std::to_string(params.m) + " mod=" + std::to_string(params.modulus) + " seed=" + std::to_string(opt.seed) + "\n" +
             render_system(gen::random_system(params, opt.seed));
    }
  } catch (const Error& e) {
    throw UsageFailure{e.what()};
  }
  if (opt.out.empty()) {
    out << text;
  } else {
    write_file(opt.out, text);
  }
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Modular difference logic toolkit", "modlogic"};
  app.require_subcommand(1);

  SolveOptions solve_opt;
  auto* solve = app.add_subcommand("solve", "decide a constraint file (exit 10 SAT, 20 UNSAT)");
  solve->add_option("file", solve_opt.file, "constraint file")->required();
  auto* oracle_flag = solve->add_flag("--oracle", solve_opt.oracle, "enumerate all N^p assignments instead of searching");
  solve->add_flag("--relax", solve_opt.relax, "also solve the integer reading and report both verdicts")->excludes(oracle_flag);
  solve->add_flag("--normalize", solve_opt.normalize, "pack a SAT model into the small-model range");
  solve->add_option("--budget", solve_opt.budget, "oracle assignment budget")->capture_default_str();
  solve->add_flag("--time", solve_opt.time, "report wall-clock time");

  ReduceOptions reduce_opt;
  auto* reduce = app.add_subcommand("reduce", "encode a DIMACS graph's 3-colorability");
  reduce->add_option("graph", reduce_opt.graph, "DIMACS edge file")->required();
  reduce->add_option("--variant", reduce_opt.variant, "nonstrict (N >= 4) or strict (N >= 9)")
      ->check(CLI::IsMember({"nonstrict", "strict"}))
      ->capture_default_str();
  reduce->add_option("--mod", reduce_opt.modulus, "modulus N")->required();
  reduce->add_option("--out", reduce_opt.prefix, "output prefix for .mdl and .meta")->required();

  std::string meta_path;
  std::string model_path;
  auto* decode = app.add_subcommand("decode", "turn a model of an encoding into a coloring");
  decode->add_option("meta", meta_path, "sidecar written by reduce")->required();
  decode->add_option("model", model_path, "file with 'name = value' lines")->required();

  GenOptions gen_opt;
  auto* gen_cmd = app.add_subcommand("gen", "write an instance");
  gen_cmd->add_option("kind", gen_opt.kind, "intro1, intro2, idl-paper, chain, random")
      ->required()
      ->check(CLI::IsMember({"intro1", "intro2", "idl-paper", "chain", "random"}));
  gen_cmd->add_option("--mod", gen_opt.modulus, "modulus N")->required();
  gen_cmd->add_option("--vars", gen_opt.random.vars, "random: variable count")->capture_default_str();
  gen_cmd->add_option("--cons", gen_opt.random.constraints, "random: constraint count")->capture_default_str();
  gen_cmd->add_option("--m", gen_opt.random.m, "random: offsets drawn from [-m, m]")->capture_default_str();
  gen_cmd->add_option("--seed", gen_opt.seed, "random: seed")->capture_default_str();
  gen_cmd->add_option("--out", gen_opt.out, "output file (default: standard output)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  try {
    if (*solve) return cmd_solve(solve_opt, out);
    if (*reduce) return cmd_reduce(reduce_opt, out);
    if (*decode) return cmd_decode(meta_path, model_path, out);
    if (*gen_cmd) return cmd_gen(gen_opt, out);
  } catch (const UsageFailure& f) {
    err << "error: " << f.message << "\n";
    return kUsageError;
  } catch (const CheckFailure& f) {
    err << "internal check failed: " << f.message << "\n";
    return kInternalError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
  return kUsageError;
}

}  // namespace modlogic::cli
