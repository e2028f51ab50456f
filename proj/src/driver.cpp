#include "cdp/driver.hpp"

#include <chrono>

#include "cdp/oracle.hpp"

namespace cdp {

CDPRun solve_forward(const Instance& instance, const DominanceSpec* spec, const SearchConfig& config,
                     const RunLimits& limits) {
  if (spec) validate(*spec, instance);
  const auto start = std::chrono::steady_clock::now();
  CDPRun run;
  Solver solver(instance, config);
  try {
    while (true) {
      ++run.stats.oracle_calls;
      std::optional<Valuation> s = solver.next_solution();
      if (!s) break;
      if (limits.solutions && run.forward.size() >= *limits.solutions) {
        run.truncated = true;
        run.truncation = "solution limit of " + std::to_string(*limits.solutions) + " reached";
        break;
      }
      if (spec) {
        solver.add_constraint(compile_nogood(*spec, *s));
        ++run.stats.nogoods;
      }
      run.forward.push_back(std::move(*s));
    }
  } catch (const LimitExceeded& e) {
    run.truncated = true;
    run.truncation = e.what();
  }
  run.stats.nodes = solver.stats().nodes;
  run.final_set = run.forward;
  run.stats.millis =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return run;
}

std::vector<Valuation> backward_pass(const CDPRun& run, const DominanceSpec* spec) {
  if (run.truncated) throw Error("backward pass needs a complete forward run");
  if (!spec) return run.forward;
  const bool against_all = std::holds_alternative<CpNetPreference>(spec->kind);
  const auto& f = run.forward;
  std::vector<char> keep(f.size(), 0);
  for (std::size_t x = f.size(); x-- > 0;) {
    bool dominated = false;
    for (std::size_t y = x + 1; y < f.size() && !dominated; ++y) {
      if (!against_all && !keep[y]) continue;
      dominated = !eval_nogood(*spec, f[y], f[x]);
    }
    keep[x] = !dominated;
  }
  std::vector<Valuation> out;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (keep[i]) out.push_back(f[i]);
  return out;
}

std::vector<Valuation> brute_force_full_solution(const Instance& instance, const DominanceSpec* spec,
                                                 std::uint64_t limit, bool parallel) {
  if (spec && !has_relation(*spec))
    throw ModelError("the brute-force oracle needs a dominance relation; custom nogoods only support checking");
  if (spec) validate(*spec, instance);
  std::vector<Valuation> all =
      parallel ? brute_solutions_parallel(instance, limit) : brute_solutions_serial(instance, limit);
  if (!spec) return all;
  return parallel ? undominated_parallel(*spec, all) : undominated_serial(*spec, all);
}

bool RelationView::leq(const Valuation& x, const Valuation& y) const {
  if (!spec_) return x == y;
  if (has_relation(*spec_)) return cdp::leq(*spec_, x, y);
  if (spec_->mode == NogoodMode::equivalence_free) return !eval_nogood(*spec_, x, y);
  return x == y || !eval_nogood(*spec_, x, y);
}

bool RelationView::strict(const Valuation& x, const Valuation& y) const {
  if (!spec_) return false;
  if (spec_->mode == NogoodMode::with_equivalence && !has_relation(*spec_)) return x != y && !eval_nogood(*spec_, x, y);
  return leq(x, y) && !leq(y, x);
}

bool RelationView::sim(const Valuation& x, const Valuation& y) const {
  if (spec_ && spec_->mode == NogoodMode::with_equivalence && !has_relation(*spec_)) return x == y;
  return leq(x, y) && leq(y, x);
}

namespace {

std::optional<Valuation> find_uncovered(const std::vector<Valuation>& set, const Instance& instance,
                                        const DominanceSpec* spec, std::uint64_t limit) {
  RelationView rel(spec);
  for (const Valuation& s : brute_solutions_parallel(instance, limit)) {
    bool covered = false;
    for (const Valuation& a : set) {
      if (rel.leq(a, s)) {
        covered = true;
        break;
      }
    }
    if (!covered) return s;
  }
  return std::nullopt;
}

std::optional<Witness> find_domination(const std::vector<Valuation>& set, const DominanceSpec* spec) {
  RelationView rel(spec);
  for (std::size_t i = 0; i < set.size(); ++i)
    for (std::size_t j = 0; j < set.size(); ++j)
      if (i != j && rel.strict(set[i], set[j])) return Witness{i, j};
  return std::nullopt;
}

std::optional<Witness> find_equivalence(const std::vector<Valuation>& set, const DominanceSpec* spec) {
  RelationView rel(spec);
  for (std::size_t i = 0; i < set.size(); ++i)
    for (std::size_t j = i + 1; j < set.size(); ++j)
      if (rel.sim(set[i], set[j])) return Witness{i, j};
  return std::nullopt;
}

Json assignment(const Valuation& v, const Instance& instance) { return valuation_to_json(v, instance)["assignment"]; }

}  // namespace

bool check_complete(const std::vector<Valuation>& set, const Instance& instance, const DominanceSpec* spec,
                    std::uint64_t limit) {
  return !find_uncovered(set, instance, spec, limit);
}

bool check_domination_free(const std::vector<Valuation>& set, const DominanceSpec* spec) {
  return !find_domination(set, spec);
}

bool check_equivalence_free(const std::vector<Valuation>& set, const DominanceSpec* spec) {
  return !find_equivalence(set, spec);
}

PropertyReport check_properties(const std::vector<Valuation>& set, const Instance& instance,
                                const DominanceSpec* spec, std::uint64_t limit) {
  PropertyReport r;
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (set[i].size() != instance.size() || !check(instance, set[i])) r.non_solutions.push_back(i);
  }
  r.uncovered = find_uncovered(set, instance, spec, limit);
  r.domination = find_domination(set, spec);
  r.equivalence = find_equivalence(set, spec);
  r.complete = !r.uncovered;
  r.domination_free = !r.domination;
  r.equivalence_free = !r.equivalence;
  return r;
}

bool same_class_family(const std::vector<Valuation>& a, const std::vector<Valuation>& b, const DominanceSpec* spec) {
  RelationView rel(spec);
  auto covered = [&](const std::vector<Valuation>& from, const std::vector<Valuation>& into) {
    for (const Valuation& x : from) {
      bool found = false;
      for (const Valuation& y : into) {
        if (rel.sim(x, y)) {
          found = true;
          break;
        }
      }
      if (!found) return false;
    }
    return true;
  };
  return covered(a, b) && covered(b, a);
}

Json properties_json(const PropertyReport& r, const Instance& instance) {
  Json j{{"complete", r.complete}, {"domination_free", r.domination_free}, {"equivalence_free", r.equivalence_free}};
  if (r.uncovered) j["uncovered"] = assignment(*r.uncovered, instance);
  if (r.domination) j["domination"] = Json{{"dominating", r.domination->first}, {"dominated", r.domination->second}};
  if (r.equivalence) j["equivalence"] = Json{{"first", r.equivalence->first}, {"second", r.equivalence->second}};
  if (!r.non_solutions.empty()) j["non_solutions"] = r.non_solutions;
  return j;
}

Json run_report(const CDPRun& run, const Instance& instance, const std::optional<PropertyReport>& properties) {
  Json report = Json::object();
  Json solutions = Json::array();
  for (const Valuation& v : run.forward) solutions.push_back(assignment(v, instance));
  Json final_set = Json::array();
  for (const Valuation& v : run.final_set) final_set.push_back(assignment(v, instance));
  report["solutions"] = std::move(solutions);
  report["final_set"] = std::move(final_set);
  report["properties"] = properties ? properties_json(*properties, instance) : Json(nullptr);
  report["truncated"] = run.truncated;
  if (run.truncated) report["truncation"] = run.truncation;
  report["stats"] = Json{{"oracle_calls", run.stats.oracle_calls},
                         {"nodes", run.stats.nodes},
                         {"nogoods", run.stats.nogoods},
                         {"millis", run.stats.millis}};
  return report;
}

}  // namespace cdp
