#pragma once

// Reductions of MaxCSP, MSS/MCS enumeration and itemset mining to
// dominance problems.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cdp/dominance.hpp"
#include "cdp/model.hpp"

namespace cdp {

// Constraints of `base` listed in `weights` are soft; the rest stay hard.
struct WeightedInstance {
  Instance base;
  std::map<std::size_t, std::int64_t> weights;
};

struct ReifiedMaxCsp {
  Instance instance;
  std::vector<VarId> reifiers;  // B_c per soft constraint, in index order
  Expr weight;                  // sum of g(c) * B_c
  DominanceSpec spec;           // total order minimizing -weight
};

// Adds B_c -> c for each soft constraint c. Throws ModelError for an unknown index.
ReifiedMaxCsp reify_maxcsp(const WeightedInstance& w);

struct MssModel {
  Instance instance;
  std::vector<VarId> reifiers;
  DominanceSpec spec;  // subset-max over the reifiers
};

MssModel mss_transform(const Instance& instance, const std::vector<std::size_t>& soft);

// Complement of each vector, as sorted zero-based positions.
std::vector<std::vector<std::size_t>> mcs_from_mss(const std::vector<std::vector<bool>>& mss);

struct TransactionDB {
  std::vector<std::string> items;                     // sorted
  std::vector<std::set<std::size_t>> transactions;    // indices into items
  std::int64_t threshold = 1;
};

// One transaction per line, whitespace-separated item tokens. Blank lines
// are empty transactions; lines starting with '#' are skipped.
TransactionDB parse_transactions(std::string_view text, std::int64_t threshold);

enum class PatternKind { frequent, closed, maximal };

struct ItemsetModel {
  Instance instance;
  std::vector<VarId> items;         // I_i
  std::vector<VarId> transactions;  // T_t
  std::optional<DominanceSpec> spec;
};

ItemsetModel itemset_model(const TransactionDB& db, PatternKind kind);

}  // namespace cdp
