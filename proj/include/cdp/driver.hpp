#pragma once

// The solve-and-post loop, the backward pass that removes dominated
// solutions, a brute-force full-solution oracle and the set-property checks.
// A null spec stands for plain enumeration (X ⪯ Y iff X = Y).

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cdp/dominance.hpp"
#include "cdp/engine.hpp"
#include "cdp/json_io.hpp"
#include "cdp/model.hpp"

namespace cdp {

struct RunStats {
  std::uint64_t oracle_calls = 0;
  std::uint64_t nodes = 0;
  std::uint64_t nogoods = 0;
  double millis = 0;
};

struct CDPRun {
  std::vector<Valuation> forward;
  std::vector<Valuation> final_set;  // forward until backward_pass runs
  bool truncated = false;
  std::string truncation;
  RunStats stats;
};

struct RunLimits {
  std::optional<std::uint64_t> solutions;
};

// Posts compile_nogood(spec, S) after every solution S. Node and solution
// limits mark the run truncated instead of throwing.
CDPRun solve_forward(const Instance& instance, const DominanceSpec* spec, const SearchConfig& config,
                     const RunLimits& limits = {});

// Drops S_x when a later solution S_y has a false nogood at S_x. Later
// solutions are the kept ones, or all of them for CP-net specs.
// Throws Error for truncated runs.
std::vector<Valuation> backward_pass(const CDPRun& run, const DominanceSpec* spec);

// Solutions that no solution strictly dominates. Throws ModelError for custom
// specs and LimitExceeded when the search space exceeds `limit`.
std::vector<Valuation> brute_force_full_solution(const Instance& instance, const DominanceSpec* spec,
                                                 std::uint64_t limit, bool parallel = true);

// ⪯, strict dominance and ∼ for any spec. Custom equivalence-free templates
// read "nogood false at V under S" as S ⪯ V; custom templates with
// equivalence read it as strict dominance, and ∼ becomes identity.
class RelationView {
 public:
  explicit RelationView(const DominanceSpec* spec) : spec_(spec) {}
  bool leq(const Valuation& x, const Valuation& y) const;
  bool strict(const Valuation& x, const Valuation& y) const;
  bool sim(const Valuation& x, const Valuation& y) const;

 private:
  const DominanceSpec* spec_;
};

struct Witness {
  std::size_t first;   // dominating, or equivalent
  std::size_t second;  // dominated, or equivalent
};

struct PropertyReport {
  bool complete = false;
  bool domination_free = false;
  bool equivalence_free = false;
  std::optional<Valuation> uncovered;      // a solution no member covers
  std::optional<Witness> domination;       // members where first strictly dominates second
  std::optional<Witness> equivalence;      // equivalent members
  std::vector<std::size_t> non_solutions;  // members violating a constraint
};

bool check_complete(const std::vector<Valuation>& set, const Instance& instance, const DominanceSpec* spec,
                    std::uint64_t limit);
bool check_domination_free(const std::vector<Valuation>& set, const DominanceSpec* spec);
bool check_equivalence_free(const std::vector<Valuation>& set, const DominanceSpec* spec);
PropertyReport check_properties(const std::vector<Valuation>& set, const Instance& instance,
                                const DominanceSpec* spec, std::uint64_t limit);

// True iff every member of `a` is equivalent to a member of `b` and vice versa.
bool same_class_family(const std::vector<Valuation>& a, const std::vector<Valuation>& b, const DominanceSpec* spec);

// {"complete", "domination_free", "equivalence_free"} plus the witnesses
// present in `r`, as member indices.
Json properties_json(const PropertyReport& r, const Instance& instance);

// {"solutions": [...], "final_set": [...], "properties": {...} or null, "stats": {...}}
Json run_report(const CDPRun& run, const Instance& instance, const std::optional<PropertyReport>& properties);

}  // namespace cdp
