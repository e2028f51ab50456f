#include "cdp/generators.hpp"

#include <algorithm>
#include <sstream>

#include "cdp/rng.hpp"

namespace cdp {

namespace {

std::string term(std::int64_t k, const std::string& e) { return k == 1 ? e : std::to_string(k) + "*" + e; }

std::string join_sum(const std::vector<std::string>& terms) {
  if (terms.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < terms.size(); ++i) out += (i ? " + " : "") + terms[i];
  return out;
}

std::string item_name(std::uint32_t i) {
  if (i < 26) return std::string(1, static_cast<char>('a' + i));
  return "i" + std::to_string(i + 1);
}

}  // namespace

MaxCspData random_maxcsp(const MaxCspParams& params, std::uint64_t seed) {
  if (params.vars < 2) throw ModelError("maxcsp needs at least 2 variables");
  if (params.domain < 1) throw ModelError("maxcsp domain must be at least 1");
  if (params.max_weight < 1) throw ModelError("maxcsp weights must be at least 1");
  static const char* ops[] = {"<", "<=", "=", "!="};
  Rng rng(seed);
  MaxCspData d;
  d.params = params;
  for (std::uint32_t c = 0; c < params.constraints; ++c) {
    BinaryConstraint bc;
    bc.lhs = static_cast<std::uint32_t>(rng.below(params.vars));
    bc.rhs = static_cast<std::uint32_t>(rng.below(params.vars - 1));
    if (bc.rhs >= bc.lhs) ++bc.rhs;
    bc.offset = rng.between(-1, 1);
    bc.op = ops[rng.below(4)];
    bc.weight = rng.between(1, params.max_weight);
    d.constraints.push_back(bc);
  }
  return d;
}

WeightedInstance to_weighted(const MaxCspData& data) {
  WeightedInstance w;
  std::vector<VarId> x;
  for (std::uint32_t i = 0; i < data.params.vars; ++i)
    x.push_back(w.base.add_var("x[" + std::to_string(i + 1) + "]", Domain::interval(1, data.params.domain)));
  w.base.add_array("x", 1, x);
  for (std::size_t c = 0; c < data.constraints.size(); ++c) {
    const BinaryConstraint& bc = data.constraints[c];
    const Expr lhs = ex::add({ex::var(x[bc.lhs]), ex::lit(bc.offset)});
    const Expr rhs = ex::var(x[bc.rhs]);
    Op op = Op::lt;
    if (bc.op == "<=") op = Op::le;
    if (bc.op == "=") op = Op::eq;
    if (bc.op == "!=") op = Op::ne;
    w.base.add_constraint(ex::cmp(op, lhs, rhs));
    w.weights[c] = bc.weight;
  }
  return w;
}

std::string maxcsp_model(const MaxCspData& data) {
  std::ostringstream os;
  os << "% weighted MaxCSP: " << data.params.vars << " variables, " << data.constraints.size()
     << " soft constraints\n";
  os << "array [1.." << data.params.vars << "] of var 1.." << data.params.domain << ": x;\n";
  os << "array [1.." << data.constraints.size() << "] of var bool: B;\n";
  std::vector<std::string> weight;
  for (std::size_t c = 0; c < data.constraints.size(); ++c) {
    const BinaryConstraint& bc = data.constraints[c];
    std::string lhs = "x[" + std::to_string(bc.lhs + 1) + "]";
    if (bc.offset > 0) lhs += " + " + std::to_string(bc.offset);
    if (bc.offset < 0) lhs += " - " + std::to_string(-bc.offset);
    os << "constraint B[" << c + 1 << "] -> (" << lhs << " " << bc.op << " x[" << bc.rhs + 1 << "]);\n";
    weight.push_back(term(bc.weight, "bool2int(B[" + std::to_string(c + 1) + "])"));
  }
  os << "solve maximize " << join_sum(weight) << ";\n";
  return os.str();
}

TspData random_tsp(std::uint32_t n, std::uint64_t seed, std::int64_t max_cost) {
  if (n < 3) throw ModelError("tsp needs at least 3 cities");
  if (max_cost < 1) throw ModelError("tsp costs must be at least 1");
  Rng rng(seed);
  TspData d;
  d.n = n;
  d.cost1.assign(n, std::vector<std::int64_t>(n, 0));
  d.cost2 = d.cost1;
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = i + 1; j < n; ++j) {
      d.cost1[i][j] = d.cost1[j][i] = rng.between(1, max_cost);
      d.cost2[i][j] = d.cost2[j][i] = rng.between(1, max_cost);
    }
  return d;
}

std::string tsp_model(const TspData& data) {
  const std::uint32_t n = data.n;
  std::ostringstream os;
  os << "% bi-objective TSP over " << n << " cities; succ[i] is the city visited after i\n";
  os << "% cdp solve <file> --dominance pareto:cost1,cost2\n";
  os << "array [1.." << n << "] of var 1.." << n << ": succ;\n";
  os << "array [2.." << n << "] of var 2.." << n << ": u;\n";
  for (std::uint32_t i = 1; i <= n; ++i) os << "constraint succ[" << i << "] != " << i << ";\n";
  for (std::uint32_t i = 1; i <= n; ++i)
    for (std::uint32_t j = i + 1; j <= n; ++j) os << "constraint succ[" << i << "] != succ[" << j << "];\n";
  for (std::uint32_t j = 2; j <= n; ++j) os << "constraint succ[1] = " << j << " -> u[" << j << "] = 2;\n";
  for (std::uint32_t i = 2; i <= n; ++i)
    for (std::uint32_t j = 2; j <= n; ++j)
      if (i != j) os << "constraint succ[" << i << "] = " << j << " -> u[" << j << "] = u[" << i << "] + 1;\n";
  for (int k = 0; k < 2; ++k) {
    const auto& c = k == 0 ? data.cost1 : data.cost2;
    std::vector<std::string> terms;
    for (std::uint32_t i = 0; i < n; ++i)
      for (std::uint32_t j = 0; j < n; ++j)
        if (i != j) terms.push_back(term(c[i][j], "bool2int(succ[" + std::to_string(i + 1) + "] = " + std::to_string(j + 1) + ")"));
    os << "var int: cost" << k + 1 << " = " << join_sum(terms) << ";\n";
  }
  os << "solve satisfy;\n";
  return os.str();
}

PhotoData random_photo(std::uint32_t n, std::uint32_t max_parents, std::uint64_t seed) {
  if (n < 1) throw ModelError("photo needs at least one person");
  if (max_parents >= n && n > 1) throw ModelError("max parents must be below the number of people");
  return PhotoData{random_net(n, n > 1 ? max_parents : 0, seed, CptStyle::photo)};
}

std::string photo_model(const PhotoData& data) {
  const std::size_t n = data.net.size();
  std::ostringstream os;
  os << "% photo problem: " << n << " people on " << n << " positions\n";
  os << "% cdp solve <file> --dominance cpnet:<net file>\n";
  os << "array [1.." << n << "] of var 0.." << n - 1 << ": p;\n";
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = i + 1; j <= n; ++j) os << "constraint p[" << i << "] != p[" << j << "];\n";
  os << "solve satisfy;\n";
  return os.str();
}

TransactionDB random_transactions(const ItemsetParams& params, std::int64_t threshold, std::uint64_t seed) {
  if (params.items < 1) throw ModelError("itemset needs at least one item");
  if (params.density > 100) throw ModelError("density is a percentage");
  Rng rng(seed);
  std::ostringstream text;
  for (std::uint32_t t = 0; t < params.transactions; ++t) {
    bool any = false;
    for (std::uint32_t i = 0; i < params.items; ++i)
      if (rng.chance(params.density, 100)) {
        text << (any ? " " : "") << item_name(i);
        any = true;
      }
    text << "\n";
  }
  TransactionDB db = parse_transactions(text.str(), threshold);
  // Items that never occur still belong to the universe.
  std::vector<std::string> all;
  for (std::uint32_t i = 0; i < params.items; ++i) all.push_back(item_name(i));
  std::sort(all.begin(), all.end());
  std::vector<std::set<std::size_t>> remapped;
  for (const auto& t : db.transactions) {
    std::set<std::size_t> idx;
    for (std::size_t k : t)
      idx.insert(static_cast<std::size_t>(std::lower_bound(all.begin(), all.end(), db.items[k]) - all.begin()));
    remapped.push_back(std::move(idx));
  }
  db.items = std::move(all);
  db.transactions = std::move(remapped);
  return db;
}

std::string transactions_text(const TransactionDB& db) {
  std::ostringstream os;
  for (const auto& t : db.transactions) {
    bool first = true;
    for (std::size_t i : t) {
      os << (first ? "" : " ") << db.items[i];
      first = false;
    }
    os << "\n";
  }
  return os.str();
}

std::string itemset_cdp(const TransactionDB& db, PatternKind kind) {
  const std::size_t m = db.items.size();
  const std::size_t t = db.transactions.size();
  std::ostringstream os;
  os << "% itemset mining, threshold " << db.threshold << "; items:";
  for (std::size_t i = 0; i < m; ++i) os << " I[" << i + 1 << "]=" << db.items[i];
  os << "\n";
  os << "array [1.." << m << "] of var bool: I;\n";
  os << "array [1.." << t << "] of var bool: T;\n";
  for (std::size_t k = 0; k < t; ++k) {
    std::vector<std::string> outside;
    for (std::size_t i = 0; i < m; ++i)
      if (!db.transactions[k].count(i)) outside.push_back("I[" + std::to_string(i + 1) + "]");
    os << "constraint T[" << k + 1 << "] <-> ";
    if (outside.empty()) {
      os << "true;\n";
      continue;
    }
    os << "not (";
    for (std::size_t i = 0; i < outside.size(); ++i) os << (i ? " \\/ " : "") << outside[i];
    os << ");\n";
  }
  os << "constraint sum(T) >= " << db.threshold << ";\n";
  switch (kind) {
    case PatternKind::frequent:
      break;
    case PatternKind::maximal:
      os << "dominance_nogood exists(i in index_set(I))(sol(I[i]) < I[i]);\n";
      break;
    case PatternKind::closed:
      os << "dominance_nogood exists(i in index_set(I))(sol(I[i]) < I[i]) \\/ sum(T) != sol(sum(T));\n";
      break;
  }
  os << "solve search dominance_search;\n";
  return os.str();
}

}  // namespace cdp
