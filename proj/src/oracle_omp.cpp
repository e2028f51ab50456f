#include <omp.h>

#include <exception>

#include "cdp/oracle.hpp"

namespace cdp {

namespace {

// Runs body(thread, threads) in a parallel region and rethrows the first exception.
template <class Body>
void parallel_region(Body&& body) {
  std::exception_ptr failure;
#pragma omp parallel
  {
    try {
      body(omp_get_thread_num(), omp_get_num_threads());
    } catch (...) {
#pragma omp critical(cdp_oracle_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

std::pair<std::uint64_t, std::uint64_t> chunk(std::uint64_t total, int thread, int threads) {
  const std::uint64_t per = total / static_cast<std::uint64_t>(threads);
  const std::uint64_t extra = total % static_cast<std::uint64_t>(threads);
  const auto t = static_cast<std::uint64_t>(thread);
  const std::uint64_t begin = t * per + std::min(t, extra);
  return {begin, begin + per + (t < extra ? 1 : 0)};
}

}  // namespace

std::vector<Valuation> brute_solutions_parallel(const Instance& instance, std::uint64_t limit) {
  const std::uint64_t total = search_space_size(instance);
  if (total > limit)
    throw LimitExceeded("search space of " + std::to_string(total) + " valuations exceeds " + std::to_string(limit));
  std::vector<std::vector<std::int64_t>> doms;
  for (const VarDecl& d : instance.vars()) doms.push_back(d.domain.values());

  std::vector<std::vector<Valuation>> parts(static_cast<std::size_t>(omp_get_max_threads()));
  parallel_region([&](int thread, int threads) {
    auto [begin, end] = chunk(total, thread, threads);
    if (begin == end) return;
    // Decode the first index in mixed radix, last variable least significant.
    std::vector<std::size_t> digit(doms.size());
    std::uint64_t rest = begin;
    for (std::size_t i = doms.size(); i-- > 0;) {
      digit[i] = static_cast<std::size_t>(rest % doms[i].size());
      rest /= doms[i].size();
    }
    std::vector<std::int64_t> vals(doms.size());
    for (std::size_t i = 0; i < doms.size(); ++i) vals[i] = doms[i][digit[i]];
    auto& local = parts[static_cast<std::size_t>(thread)];
    for (std::uint64_t k = begin; k < end; ++k) {
      Valuation point(vals);
      if (check(instance, point)) local.push_back(std::move(point));
      for (std::size_t i = doms.size(); i-- > 0;) {
        if (++digit[i] < doms[i].size()) {
          vals[i] = doms[i][digit[i]];
          break;
        }
        digit[i] = 0;
        vals[i] = doms[i][0];
      }
    }
  });
  std::vector<Valuation> out;
  for (auto& p : parts)
    for (auto& v : p) out.push_back(std::move(v));
  return out;
}

std::vector<Valuation> undominated_parallel(const DominanceSpec& spec, const std::vector<Valuation>& solutions) {
  std::vector<char> keep(solutions.size(), 1);
  const auto n = static_cast<std::int64_t>(solutions.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      for (const Valuation& y : solutions) {
        if (strictly_dominates(spec, y, solutions[static_cast<std::size_t>(i)])) {
          keep[static_cast<std::size_t>(i)] = 0;
          break;
        }
      }
    } catch (...) {
#pragma omp critical(cdp_oracle_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  std::vector<Valuation> out;
  for (std::size_t i = 0; i < solutions.size(); ++i)
    if (keep[i]) out.push_back(solutions[i]);
  return out;
}

}  // namespace cdp
