#pragma once

// CP-nets over variables with values 0..d-1. Each CPT row is a permutation
// of the domain listed from most to least preferred; rows are indexed by the
// parent assignment in mixed radix, first parent most significant.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cdp/model.hpp"

namespace cdp {

struct CPNetVar {
  std::uint32_t domain_size = 2;
  std::vector<std::uint32_t> parents;
  std::vector<std::vector<std::uint32_t>> rows;

  bool operator==(const CPNetVar&) const = default;
};

struct CPNet {
  std::vector<CPNetVar> vars;

  std::size_t size() const { return vars.size(); }
  bool operator==(const CPNet&) const = default;
};

// Throws ModelError on a cycle, a bad parent index, a missing or extra CPT
// row, or a row that is not a permutation of the domain.
void validate(const CPNet& net);

// Number of outcomes, saturating at UINT64_MAX.
std::uint64_t outcome_count(const CPNet& net);

// Row of `v`'s CPT selected by the parent values in `outcome` (indexed by net variable).
const std::vector<std::uint32_t>& cpt_row(const CPNet& net, std::uint32_t v,
                                          const std::vector<std::int64_t>& outcome);

// True iff `a` comes before `b` in `row`.
bool preferred(const std::vector<std::uint32_t>& row, std::int64_t a, std::int64_t b);

// o locally dominates o2: for every variable whose parents agree and whose
// value differs, o's value is preferred in the shared CPT row. Vacuously true
// when no variable qualifies, in particular for o == o2.
bool local_dominates(const CPNet& net, const std::vector<std::int64_t>& o,
                     const std::vector<std::int64_t>& o2);

// True iff o != o2 and no variable has equal parents and differing values.
bool vacuous_pair(const CPNet& net, const std::vector<std::int64_t>& o,
                  const std::vector<std::int64_t>& o2);

// Constraint over the instance variables `mapping[i]` (one per net variable)
// that holds at V iff V != S and S does not locally dominate V.
Expr compile_local_nogood(const CPNet& net, const std::vector<std::int64_t>& s,
                          const std::vector<VarId>& mapping);
Expr compile_local_nogood(const CPNet& net, const std::vector<std::int64_t>& s);

// o is reachable from o2 by a non-empty sequence of improving flips.
// Throws LimitExceeded when the outcome space exceeds `outcome_limit`.
bool trad_dominates(const CPNet& net, const std::vector<std::int64_t>& o,
                    const std::vector<std::int64_t>& o2, std::uint64_t outcome_limit = 4096);

enum class CptStyle {
  random,  // each row a uniformly random permutation
  photo,   // positions 0..n-1, closer to the parents' average position is better
};

// Topological order is a random permutation; each variable draws 0..k parents
// uniformly among its predecessors, with k = min(max_parents, predecessors).
// `domain_size` applies to CptStyle::random; photo nets use n positions.
CPNet random_net(std::uint32_t n_vars, std::uint32_t max_parents, std::uint64_t seed,
                 CptStyle style = CptStyle::random, std::uint32_t domain_size = 2);

// Text format:
//   cpnet <n>
//   var <domain-size> parents <p1> <p2> ...
//   <row> (one per parent assignment, values most preferred first)
// Blank lines and lines starting with '#' are skipped. Throws ParseError or ModelError.
CPNet parse_cpnet(std::string_view text);
std::string to_text(const CPNet& net);

}  // namespace cdp
