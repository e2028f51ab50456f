#include "cdp/cli.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "cdp/driver.hpp"
#include "cdp/dsl.hpp"
#include "cdp/encodings.hpp"
#include "cdp/generators.hpp"
#include "cdp/oracle.hpp"
#include "cdp/rng.hpp"

namespace cdp {

namespace {

constexpr int exit_usage = 1;
constexpr int exit_model = 2;
constexpr int exit_limit = 3;
constexpr int exit_violated = 4;

// A model-level error in the user's input, reported with exit code 2.
class InputError : public Error {
 public:
  using Error::Error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

// Splits on commas outside parentheses and brackets.
std::vector<std::string> split_top_level(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char c : text) {
    if (c == '(' || c == '[') ++depth;
    if (c == ')' || c == ']') --depth;
    if (c == ',' && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  for (auto& s : out) {
    s.erase(0, s.find_first_not_of(" \t"));
    s.erase(s.find_last_not_of(" \t") + 1);
  }
  return out;
}

struct InputOptions {
  std::string model_path;
  std::string itemset_path;
  std::int64_t threshold = 1;
  std::string pattern = "frequent";
  std::string dominance;
  std::string mode;
};

struct LoadedProblem {
  Instance instance;
  std::optional<dsl::LoweredModel> model;
  std::optional<DominanceSpec> spec;
  bool custom = false;
};

std::vector<VarId> resolve_vars(const std::string& list, const Instance& inst) {
  std::vector<VarId> out;
  for (const std::string& name : split_top_level(list)) {
    if (name.empty()) continue;
    if (auto v = inst.find(name)) {
      out.push_back(*v);
    } else if (auto a = inst.find_array(name)) {
      out.insert(out.end(), a->elements.begin(), a->elements.end());
    } else {
      throw InputError("unknown variable or array '" + name + "'");
    }
  }
  if (out.empty()) throw InputError("empty variable list");
  return out;
}

DominanceSpec parse_dominance(const std::string& text, const LoadedProblem& p) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw InputError("--dominance expects KIND:ARGS");
  const std::string kind = text.substr(0, colon);
  const std::string args = text.substr(colon + 1);
  auto expr = [&](const std::string& e) {
    return p.model ? dsl::parse_expression(e, *p.model) : dsl::parse_expression(e, p.instance);
  };
  auto exprs = [&] {
    std::vector<Expr> out;
    for (const std::string& e : split_top_level(args)) out.push_back(expr(e));
    return out;
  };
  DominanceSpec spec;
  if (kind == "total" || kind == "min") {
    spec.kind = TotalOrder{expr(args)};
  } else if (kind == "max") {
    spec.kind = TotalOrder{simplify(ex::neg(expr(args)))};
  } else if (kind == "lex") {
    spec.kind = Lex{exprs()};
  } else if (kind == "pareto") {
    spec.kind = Pareto{exprs()};
  } else if (kind == "subset-min") {
    spec.kind = SubsetMin{resolve_vars(args, p.instance)};
  } else if (kind == "subset-max") {
    spec.kind = SubsetMax{resolve_vars(args, p.instance)};
  } else if (kind == "cpnet") {
    const auto at = args.find('@');
    const std::string path = args.substr(0, at);
    auto net = std::make_shared<CPNet>(parse_cpnet(read_file(path)));
    std::vector<VarId> mapping;
    if (at != std::string::npos) {
      mapping = resolve_vars(args.substr(at + 1), p.instance);
    } else {
      if (net->size() > p.instance.size())
        throw InputError("CP-net has more variables than the model");
      for (std::size_t i = 0; i < net->size(); ++i) mapping.push_back(VarId{static_cast<std::uint32_t>(i)});
    }
    spec.kind = CpNetPreference{std::move(net), std::move(mapping)};
  } else {
    throw InputError("unknown dominance kind '" + kind + "' (total, min, max, lex, pareto, subset-min, subset-max, cpnet)");
  }
  return spec;
}

LoadedProblem load_problem(const InputOptions& o) {
  LoadedProblem p;
  if (!o.itemset_path.empty()) {
    if (!o.model_path.empty()) throw InputError("give either a model file or --itemset, not both");
    PatternKind kind = PatternKind::frequent;
    if (o.pattern == "closed") kind = PatternKind::closed;
    else if (o.pattern == "maximal") kind = PatternKind::maximal;
    else if (o.pattern != "frequent") throw InputError("unknown pattern '" + o.pattern + "'");
    ItemsetModel m = itemset_model(parse_transactions(read_file(o.itemset_path), o.threshold), kind);
    p.instance = std::move(m.instance);
    p.spec = m.spec;
  } else if (o.model_path.empty()) {
    throw InputError("no model file given");
  } else if (o.model_path.ends_with(".json")) {
    std::ifstream in(o.model_path);
    if (!in) throw Error("cannot read " + o.model_path);
    try {
      p.instance = read_instance(in);
    } catch (const nlohmann::json::exception& e) {
      throw InputError(o.model_path + ": " + e.what());
    }
  } else {
    p.model = dsl::load(read_file(o.model_path));
    p.instance = p.model->instance;
    p.spec = dsl::model_spec(*p.model);
  }
  p.custom = p.spec && std::holds_alternative<CustomNogood>(p.spec->kind);
  if (!o.dominance.empty()) {
    if (p.spec) throw InputError("the model already defines its dominance; drop --dominance");
    p.spec = parse_dominance(o.dominance, p);
  }
  if (!o.mode.empty()) {
    if (p.custom) throw InputError("--mode does not apply to a dominance_nogood; choose the keyword in the model");
    if (o.mode != "complete" && o.mode != "eq-free") throw InputError("--mode expects complete or eq-free");
    if (p.spec) p.spec->mode = o.mode == "complete" ? NogoodMode::with_equivalence : NogoodMode::equivalence_free;
  }
  if (p.spec) validate(*p.spec, p.instance);
  return p;
}

void add_input_options(CLI::App* cmd, InputOptions& o, bool with_mode) {
  cmd->add_option("model", o.model_path, "Model file (.cdp or .json instance)");
  cmd->add_option("--itemset", o.itemset_path, "Transaction database instead of a model");
  cmd->add_option("--threshold", o.threshold, "Minimum frequency for --itemset")->check(CLI::PositiveNumber);
  cmd->add_option("--pattern", o.pattern, "frequent, closed or maximal")
      ->check(CLI::IsMember({"frequent", "closed", "maximal"}));
  cmd->add_option("--dominance", o.dominance,
                  "KIND:ARGS with KIND one of total, min, max, lex, pareto, subset-min, subset-max, cpnet");
  if (with_mode) cmd->add_option("--mode", o.mode, "complete or eq-free (default eq-free)");
}

std::string text_line(const Valuation& v, const Instance& inst) {
  std::string line;
  for (const VarDecl& d : inst.vars()) {
    if (!line.empty()) line += ' ';
    line += d.name + "=" + std::to_string(v[d.id]);
  }
  return line;
}

void emit_text_set(std::ostream& out, const std::vector<Valuation>& set, const Instance& inst) {
  for (const Valuation& v : set) out << text_line(v, inst) << "\n";
}

void emit_text_properties(std::ostream& out, const PropertyReport& r) {
  auto mark = [](bool b) { return b ? "pass" : "FAIL"; };
  out << "% complete: " << mark(r.complete) << "\n";
  out << "% domination-free: " << mark(r.domination_free);
  if (r.domination) out << " (member " << r.domination->first << " dominates member " << r.domination->second << ")";
  out << "\n% equivalence-free: " << mark(r.equivalence_free);
  if (r.equivalence) out << " (members " << r.equivalence->first << " and " << r.equivalence->second << ")";
  out << "\n";
  for (std::size_t i : r.non_solutions) out << "% member " << i << " is not a solution\n";
}

struct SolveOptions {
  InputOptions input;
  bool backward = false;
  std::string var_order = "input";
  std::string val_order = "min";
  std::optional<std::uint64_t> limit_solutions;
  std::optional<std::uint64_t> limit_nodes;
  std::string emit = "json";
  std::uint64_t seed = 1;
  bool verify = false;
  std::uint64_t limit = 1u << 22;
};

int cmd_solve(const SolveOptions& o, std::ostream& out, std::ostream& err) {
  LoadedProblem p = load_problem(o.input);
  SearchConfig cfg;
  cfg.var_order = o.var_order == "first-fail" ? VarOrder::first_fail : VarOrder::input;
  if (o.val_order == "max") cfg.val_order = ValOrder::max_first;
  if (o.val_order == "preferred") {
    cfg.val_order = ValOrder::preferred;
    Rng rng(o.seed);
    for (const VarDecl& d : p.instance.vars()) {
      auto values = d.domain.values();
      rng.shuffle(values);
      cfg.preferences[d.id] = std::move(values);
    }
  }
  cfg.node_limit = o.limit_nodes;
  RunLimits limits;
  limits.solutions = o.limit_solutions;
  const DominanceSpec* spec = p.spec ? &*p.spec : nullptr;

  CDPRun run = solve_forward(p.instance, spec, cfg, limits);
  if (o.backward && !run.truncated) run.final_set = backward_pass(run, spec);
  std::optional<PropertyReport> props;
  if (o.verify && !run.truncated) props = check_properties(run.final_set, p.instance, spec, o.limit);

  if (o.emit == "json") {
    out << run_report(run, p.instance, props).dump(2) << "\n";
  } else {
    out << "% " << run.forward.size() << " forward solutions, " << run.final_set.size() << " in the final set\n";
    emit_text_set(out, run.final_set, p.instance);
    if (props) emit_text_properties(out, *props);
  }
  if (run.truncated) {
    err << "limit exceeded: " << run.truncation << "\n";
    return exit_limit;
  }
  return 0;
}

struct OracleOptions {
  InputOptions input;
  std::uint64_t limit = 1u << 22;
  bool serial = false;
  std::string emit = "json";
};

int cmd_oracle(const OracleOptions& o, std::ostream& out) {
  LoadedProblem p = load_problem(o.input);
  if (p.custom)
    throw InputError(
        "relation check unavailable for a dominance_nogood model; verify a solved set with `cdp check` instead");
  const DominanceSpec* spec = p.spec ? &*p.spec : nullptr;
  const auto start = std::chrono::steady_clock::now();
  const std::vector<Valuation> full = brute_force_full_solution(p.instance, spec, o.limit, !o.serial);
  const double millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  const PropertyReport props = check_properties(full, p.instance, spec, o.limit);
  if (o.emit == "json") {
    Json report = Json::object();
    Json set = Json::array();
    for (const Valuation& v : full) set.push_back(valuation_to_json(v, p.instance)["assignment"]);
    report["final_set"] = std::move(set);
    report["properties"] = properties_json(props, p.instance);
    report["stats"] = Json{{"millis", millis}};
    out << report.dump(2) << "\n";
  } else {
    emit_text_set(out, full, p.instance);
    emit_text_properties(out, props);
  }
  return 0;
}

struct CheckOptions {
  InputOptions input;
  std::string set_path;
  std::uint64_t limit = 1u << 22;
  std::string emit = "json";
};

int cmd_check(const CheckOptions& o, std::ostream& out) {
  LoadedProblem p = load_problem(o.input);
  Json doc;
  try {
    doc = Json::parse(read_file(o.set_path));
  } catch (const nlohmann::json::exception& e) {
    throw InputError(o.set_path + ": " + e.what());
  }
  const Json* members = &doc;
  if (doc.is_object()) {
    if (!doc.contains("final_set")) throw InputError(o.set_path + ": expected a final_set array");
    members = &doc.at("final_set");
  }
  if (!members->is_array()) throw InputError(o.set_path + ": expected an array of assignments");
  std::vector<Valuation> set;
  for (const Json& m : *members) {
    try {
      set.push_back(valuation_from_json(m, p.instance));
    } catch (const nlohmann::json::exception& e) {
      throw InputError(o.set_path + ": " + e.what());
    }
  }
  const DominanceSpec* spec = p.spec ? &*p.spec : nullptr;
  const PropertyReport props = check_properties(set, p.instance, spec, o.limit);
  if (o.emit == "json")
    out << properties_json(props, p.instance).dump(2) << "\n";
  else
    emit_text_properties(out, props);
  const bool ok = props.complete && props.domination_free && props.equivalence_free && props.non_solutions.empty();
  return ok ? 0 : exit_violated;
}

struct GenOptions {
  std::string out = "";
  std::uint64_t seed = 1;
  MaxCspParams maxcsp;
  std::uint32_t tsp_n = 5;
  std::int64_t tsp_max_cost = 20;
  std::uint32_t photo_n = 6;
  std::uint32_t photo_k = 2;
  ItemsetParams itemset;
  std::int64_t threshold = 2;
  std::string pattern = "closed";
};

int cmd_gen(const std::string& kind, const GenOptions& o, std::ostream& out) {
  const std::string prefix = o.out.empty() ? kind + "-" + std::to_string(o.seed) : o.out;
  std::vector<std::pair<std::string, std::string>> files;
  if (kind == "maxcsp") {
    files.emplace_back(prefix + ".cdp", maxcsp_model(random_maxcsp(o.maxcsp, o.seed)));
  } else if (kind == "biobj-tsp") {
    files.emplace_back(prefix + ".cdp", tsp_model(random_tsp(o.tsp_n, o.seed, o.tsp_max_cost)));
  } else if (kind == "cpnet-photo") {
    PhotoData d = random_photo(o.photo_n, o.photo_k, o.seed);
    validate(d.net);
    std::string model = photo_model(d);
    const std::string net_path = prefix + ".cpnet";
    model.replace(model.find("<net file>"), 10, net_path);
    files.emplace_back(prefix + ".cdp", model);
    files.emplace_back(net_path, to_text(d.net));
  } else {
    TransactionDB db = random_transactions(o.itemset, o.threshold, o.seed);
    const PatternKind pk = o.pattern == "frequent" ? PatternKind::frequent
                           : o.pattern == "maximal" ? PatternKind::maximal
                                                    : PatternKind::closed;
    files.emplace_back(prefix + ".cdp", itemset_cdp(db, pk));
    files.emplace_back(prefix + ".txt", transactions_text(db));
  }
  for (const auto& [path, text] : files) {
    write_file(path, text);
    out << path << "\n";
  }
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Constraint dominance problem solver"};
  app.require_subcommand(1);

  SolveOptions so;
  CLI::App* solve = app.add_subcommand("solve", "Run the dominance search on a model");
  add_input_options(solve, so.input, true);
  solve->add_flag("--backward", so.backward, "Drop solutions dominated by later ones");
  solve->add_option("--var-order", so.var_order)->check(CLI::IsMember({"input", "first-fail"}));
  solve->add_option("--val-order", so.val_order)->check(CLI::IsMember({"min", "max", "preferred"}));
  solve->add_option("--limit-solutions", so.limit_solutions);
  solve->add_option("--limit-nodes", so.limit_nodes);
  solve->add_option("--emit", so.emit)->check(CLI::IsMember({"json", "text"}));
  solve->add_option("--seed", so.seed, "Seed for --val-order preferred");
  solve->add_flag("--verify", so.verify, "Check the final set against full enumeration");
  solve->add_option("--limit", so.limit, "Search-space cap for --verify");

  OracleOptions oo;
  CLI::App* oracle = app.add_subcommand("oracle", "Brute-force full solution");
  add_input_options(oracle, oo.input, true);
  oracle->add_option("--limit", oo.limit, "Search-space cap");
  oracle->add_flag("--serial", oo.serial, "Use the single-threaded kernels");
  oracle->add_option("--emit", oo.emit)->check(CLI::IsMember({"json", "text"}));

  CheckOptions co;
  CLI::App* checkc = app.add_subcommand("check", "Verify the set properties of a solution set");
  add_input_options(checkc, co.input, true);
  checkc->add_option("--set", co.set_path, "Report JSON or array of assignments")->required();
  checkc->add_option("--limit", co.limit, "Search-space cap");
  checkc->add_option("--emit", co.emit)->check(CLI::IsMember({"json", "text"}));

  GenOptions go;
  CLI::App* gen = app.add_subcommand("gen", "Generate benchmark instances");
  gen->require_subcommand(1);
  auto common = [&](CLI::App* g) {
    g->add_option("-o,--out", go.out, "Output path prefix (default KIND-SEED)");
    g->add_option("--seed", go.seed);
  };
  CLI::App* g_maxcsp = gen->add_subcommand("maxcsp", "Weighted MaxCSP over binary constraints");
  common(g_maxcsp);
  g_maxcsp->add_option("--vars", go.maxcsp.vars)->check(CLI::Range(2u, 64u));
  g_maxcsp->add_option("--cons", go.maxcsp.constraints)->check(CLI::Range(0u, 1000u));
  g_maxcsp->add_option("--domain", go.maxcsp.domain)->check(CLI::Range(1u, 1000u));
  g_maxcsp->add_option("--max-weight", go.maxcsp.max_weight)->check(CLI::Range(1u, 1000000u));
  CLI::App* g_tsp = gen->add_subcommand("biobj-tsp", "Bi-objective symmetric TSP");
  common(g_tsp);
  g_tsp->add_option("--n", go.tsp_n)->check(CLI::Range(3u, 30u));
  g_tsp->add_option("--max-cost", go.tsp_max_cost)->check(CLI::Range(1, 1000000));
  CLI::App* g_photo = gen->add_subcommand("cpnet-photo", "Photo problem with a CP-net over positions");
  common(g_photo);
  g_photo->add_option("--n", go.photo_n)->check(CLI::Range(1u, 30u));
  g_photo->add_option("--k", go.photo_k, "Maximum parents per person");
  CLI::App* g_items = gen->add_subcommand("itemset", "Random transaction database and pattern model");
  common(g_items);
  g_items->add_option("--items", go.itemset.items)->check(CLI::Range(1u, 64u));
  g_items->add_option("--transactions", go.itemset.transactions)->check(CLI::Range(0u, 10000u));
  g_items->add_option("--density", go.itemset.density)->check(CLI::Range(0u, 100u));
  g_items->add_option("--threshold", go.threshold)->check(CLI::PositiveNumber);
  g_items->add_option("--pattern", go.pattern)->check(CLI::IsMember({"frequent", "closed", "maximal"}));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : exit_usage;
  }

  try {
    if (solve->parsed()) return cmd_solve(so, out, err);
    if (oracle->parsed()) return cmd_oracle(oo, out);
    if (checkc->parsed()) return cmd_check(co, out);
    for (CLI::App* g : {g_maxcsp, g_tsp, g_photo, g_items})
      if (g->parsed()) return cmd_gen(g->get_name(), go, out);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return exit_model;
  } catch (const LimitExceeded& e) {
    err << "limit exceeded: " << e.what() << "\n";
    return exit_limit;
  } catch (const ModelError& e) {
    err << "model error: " << e.what() << "\n";
    return exit_model;
  } catch (const EvalError& e) {
    err << "model error: " << e.what() << "\n";
    return exit_model;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return exit_model;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  }
  return exit_usage;
}

}  // namespace cdp
