#pragma once

// Dominance relations X ⪯ Y ("X is at least as good as Y") and the nogoods
// posted after each solution. Objectives are minimized.

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "cdp/cpnet.hpp"
#include "cdp/model.hpp"

namespace cdp {

enum class NogoodMode {
  equivalence_free,  // post not(S ⪯ V)
  with_equivalence,  // post not(S ⪯ V) or V ⪯ S
};

struct TotalOrder {
  Expr objective;
};

struct Lex {
  std::vector<Expr> objectives;
};

struct Pareto {
  std::vector<Expr> objectives;
};

struct SubsetMin {
  std::vector<VarId> vars;
};

struct SubsetMax {
  std::vector<VarId> vars;
};

struct CpNetPreference {
  std::shared_ptr<const CPNet> net;
  std::vector<VarId> mapping;  // instance variable for each net variable
};

// A nogood template with sol() references; only eval_nogood and compile_nogood apply.
struct CustomNogood {
  Expr nogood;
};

using DominanceKind = std::variant<TotalOrder, Lex, Pareto, SubsetMin, SubsetMax, CpNetPreference, CustomNogood>;

struct DominanceSpec {
  DominanceKind kind;
  NogoodMode mode = NogoodMode::equivalence_free;
};

std::string kind_name(const DominanceSpec& spec);
bool has_relation(const DominanceSpec& spec);

// Throws ModelError when the spec does not fit `instance`: ill-typed or
// sol-bearing objectives, non-boolean subset variables, a CP-net whose
// domains are not covered, or a custom template without sol().
void validate(const DominanceSpec& spec, const Instance& instance);

// Throw ModelError for custom specs.
bool leq(const DominanceSpec& spec, const Valuation& x, const Valuation& y);
bool sim(const DominanceSpec& spec, const Valuation& x, const Valuation& y);
bool strictly_dominates(const DominanceSpec& spec, const Valuation& x, const Valuation& y);

// Sol-free constraint over V excluding what `s` makes redundant under spec.mode.
Expr compile_nogood(const DominanceSpec& spec, const Valuation& s);

// Value of the instantiated nogood at `point`.
bool eval_nogood(const DominanceSpec& spec, const Valuation& s, const Valuation& point);

}  // namespace cdp
