#pragma once

// Seeded benchmark instance families. Each generator has a structured form
// and a `.cdp` rendering of the same instance.

#include <cstdint>
#include <string>
#include <vector>

#include "cdp/cpnet.hpp"
#include "cdp/encodings.hpp"

namespace cdp {

// ---- weighted MaxCSP over binary constraints  x_i + offset <op> x_j

struct MaxCspParams {
  std::uint32_t vars = 8;
  std::uint32_t constraints = 12;
  std::uint32_t domain = 3;  // values 1..domain
  std::uint32_t max_weight = 5;
};

struct BinaryConstraint {
  std::uint32_t lhs = 0;
  std::uint32_t rhs = 0;
  std::int64_t offset = 0;
  std::string op;  // "<", "<=", "=", "!="
  std::int64_t weight = 1;
};

struct MaxCspData {
  MaxCspParams params;
  std::vector<BinaryConstraint> constraints;
};

// Throws ModelError for vars < 2, domain < 1, max_weight < 1.
MaxCspData random_maxcsp(const MaxCspParams& params, std::uint64_t seed);
// Every constraint soft, with its weight.
WeightedInstance to_weighted(const MaxCspData& data);
std::string maxcsp_model(const MaxCspData& data);

// ---- symmetric bi-objective TSP

struct TspData {
  std::uint32_t n = 0;
  std::vector<std::vector<std::int64_t>> cost1;
  std::vector<std::vector<std::int64_t>> cost2;
};

// Costs uniform in 1..max_cost. Throws ModelError for n < 3.
TspData random_tsp(std::uint32_t n, std::uint64_t seed, std::int64_t max_cost = 20);
// Successor model with MTZ ordering variables; objectives are the aliases
// cost1 and cost2.
std::string tsp_model(const TspData& data);

// ---- photo problem: n people on n positions, CP-net over positions

struct PhotoData {
  CPNet net;
};

PhotoData random_photo(std::uint32_t n, std::uint32_t max_parents, std::uint64_t seed);
// Variables p1..pn in 0..n-1, pairwise different.
std::string photo_model(const PhotoData& data);

// ---- itemset mining

struct ItemsetParams {
  std::uint32_t items = 5;
  std::uint32_t transactions = 6;
  std::uint32_t density = 50;  // percent chance an item is in a transaction
};

TransactionDB random_transactions(const ItemsetParams& params, std::int64_t threshold, std::uint64_t seed);
std::string transactions_text(const TransactionDB& db);
// Same encoding as itemset_model, with the closed or maximal nogood written out.
std::string itemset_cdp(const TransactionDB& db, PatternKind kind);

}  // namespace cdp
