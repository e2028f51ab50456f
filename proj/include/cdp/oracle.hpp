#pragma once

// Brute-force reference kernels. Both variants return results in canonical
// order (lexicographic over declaration order) and agree exactly; the
// parallel ones split the index space across OpenMP threads.

#include <cstdint>
#include <vector>

#include "cdp/dominance.hpp"
#include "cdp/model.hpp"

namespace cdp {

// Product of the domain sizes, saturating at UINT64_MAX.
std::uint64_t search_space_size(const Instance& instance);

// Every valuation of the declared domains that passes check().
// Throws LimitExceeded when the search space exceeds `limit`.
std::vector<Valuation> brute_solutions_serial(const Instance& instance, std::uint64_t limit);
std::vector<Valuation> brute_solutions_parallel(const Instance& instance, std::uint64_t limit);

// Members of `solutions` that no other member strictly dominates. Requires a spec with a relation.
std::vector<Valuation> undominated_serial(const DominanceSpec& spec, const std::vector<Valuation>& solutions);
std::vector<Valuation> undominated_parallel(const DominanceSpec& spec, const std::vector<Valuation>& solutions);

}  // namespace cdp
