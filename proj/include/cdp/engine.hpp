#pragma once

// Finite-domain propagation with chronological depth-first search. A Solver
// hands out solutions one at a time and accepts new constraints between
// calls; those constraints are enforced on the remaining search, including
// the part of the tree above the last leaf.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "cdp/model.hpp"

namespace cdp {

enum class VarOrder { input, first_fail, explicit_list };
enum class ValOrder { min_first, max_first, preferred };

struct SearchConfig {
  VarOrder var_order = VarOrder::input;
  // With VarOrder::explicit_list: branched first, in this order; the rest follow input order.
  std::vector<VarId> explicit_order;
  ValOrder val_order = ValOrder::min_first;
  // With ValOrder::preferred: most-to-least preferred values per variable.
  // Values missing from a list, and variables without one, fall back to min-first.
  std::map<VarId, std::vector<std::int64_t>> preferences;
  std::optional<std::uint64_t> node_limit;
};

struct SearchStats {
  std::uint64_t nodes = 0;
  std::uint64_t failures = 0;
  std::uint64_t solutions = 0;
  std::uint64_t propagations = 0;
};

class Solver {
 public:
  // Compiles every constraint and propagates to a fixpoint at the root.
  // Throws ModelError for ill-typed constraints or domains wider than 2^20.
  Solver(const Instance& instance, SearchConfig config = {});
  ~Solver();
  Solver(Solver&&) noexcept;
  Solver& operator=(Solver&&) noexcept;

  // True when root propagation already proved the instance unsatisfiable.
  bool failed() const;

  // Current domain of `v` at the root or at the last returned leaf.
  std::vector<std::int64_t> current_values(VarId v) const;

  // Next solution not returned before, or nullopt once the tree is exhausted.
  // Throws LimitExceeded when the node budget runs out; the solver is unusable afterwards.
  std::optional<Valuation> next_solution();

  // `c` must be sol-free. Enforced from the next call on.
  void add_constraint(const Expr& c);

  std::size_t constraint_count() const;
  const SearchStats& stats() const;
  const Instance& instance() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// All solutions in DFS order. Throws LimitExceeded when there are more than `limit`.
std::vector<Valuation> enumerate_all(const Instance& instance, std::size_t limit,
                                     const SearchConfig& config = {});

}  // namespace cdp
