#include <limits>

#include "cdp/oracle.hpp"

namespace cdp {

std::uint64_t search_space_size(const Instance& instance) {
  std::uint64_t n = 1;
  for (const VarDecl& d : instance.vars()) {
    const std::uint64_t s = d.domain.size();
    if (s != 0 && n > std::numeric_limits<std::uint64_t>::max() / s) return std::numeric_limits<std::uint64_t>::max();
    n *= s;
  }
  return n;
}

std::vector<Valuation> brute_solutions_serial(const Instance& instance, std::uint64_t limit) {
  const std::uint64_t total = search_space_size(instance);
  if (total > limit)
    throw LimitExceeded("search space of " + std::to_string(total) + " valuations exceeds " + std::to_string(limit));
  std::vector<std::vector<std::int64_t>> doms;
  for (const VarDecl& d : instance.vars()) doms.push_back(d.domain.values());
  std::vector<std::size_t> digit(doms.size(), 0);
  std::vector<std::int64_t> vals(doms.size());
  for (std::size_t i = 0; i < doms.size(); ++i) vals[i] = doms[i][0];

  std::vector<Valuation> out;
  for (std::uint64_t k = 0; k < total; ++k) {
    Valuation point(vals);
    if (check(instance, point)) out.push_back(std::move(point));
    // Odometer step, last variable fastest.
    for (std::size_t i = doms.size(); i-- > 0;) {
      if (++digit[i] < doms[i].size()) {
        vals[i] = doms[i][digit[i]];
        break;
      }
      digit[i] = 0;
      vals[i] = doms[i][0];
    }
  }
  return out;
}

std::vector<Valuation> undominated_serial(const DominanceSpec& spec, const std::vector<Valuation>& solutions) {
  std::vector<Valuation> out;
  for (const Valuation& x : solutions) {
    bool dominated = false;
    for (const Valuation& y : solutions) {
      if (strictly_dominates(spec, y, x)) {
        dominated = true;
        break;
      }
    }
    if (!dominated) out.push_back(x);
  }
  return out;
}

}  // namespace cdp
