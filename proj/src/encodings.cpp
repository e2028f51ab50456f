#include "cdp/encodings.hpp"

#include <algorithm>
#include <sstream>

namespace cdp {

namespace {

std::string fresh_name(const Instance& inst, const std::string& stem) {
  if (!inst.find(stem) && !inst.find_array(stem)) return stem;
  for (int k = 1;; ++k) {
    std::string s = stem + "_" + std::to_string(k);
    if (!inst.find(s) && !inst.find_array(s)) return s;
  }
}

// Copies variables and arrays; constraints are left to the caller.
Instance copy_declarations(const Instance& base) {
  Instance out;
  for (const VarDecl& d : base.vars()) out.add_var(d.name, d.domain);
  for (const auto& a : base.arrays()) out.add_array(a->name, a->lo, a->elements);
  return out;
}

std::vector<VarId> reify(const Instance& base, const std::vector<std::size_t>& soft, Instance& out) {
  std::vector<char> is_soft(base.constraints().size(), 0);
  for (std::size_t c : soft) {
    if (c >= base.constraints().size()) throw ModelError("soft constraint index " + std::to_string(c) + " out of range");
    is_soft[c] = 1;
  }
  out = copy_declarations(base);
  std::vector<VarId> reifiers;
  for (std::size_t c = 0; c < base.constraints().size(); ++c) {
    if (!is_soft[c]) {
      out.add_constraint(base.constraints()[c]);
      continue;
    }
    VarId b = out.add_var(fresh_name(out, "B" + std::to_string(c + 1)), Domain::boolean());
    reifiers.push_back(b);
    out.add_constraint(ex::implies(ex::var(b, true), base.constraints()[c]));
  }
  return reifiers;
}

}  // namespace

ReifiedMaxCsp reify_maxcsp(const WeightedInstance& w) {
  std::vector<std::size_t> soft;
  for (const auto& [c, g] : w.weights) soft.push_back(c);
  ReifiedMaxCsp r;
  r.reifiers = reify(w.base, soft, r.instance);
  std::vector<Expr> terms;
  std::size_t k = 0;
  for (const auto& [c, g] : w.weights) terms.push_back(ex::mul(g, ex::bool2int(ex::var(r.reifiers[k++], true))));
  r.weight = terms.empty() ? ex::lit(0) : ex::add(std::move(terms));
  r.spec = DominanceSpec{TotalOrder{ex::neg(r.weight)}, NogoodMode::equivalence_free};
  return r;
}

MssModel mss_transform(const Instance& instance, const std::vector<std::size_t>& soft) {
  MssModel m;
  m.reifiers = reify(instance, soft, m.instance);
  m.spec = DominanceSpec{SubsetMax{m.reifiers}, NogoodMode::equivalence_free};
  return m;
}

std::vector<std::vector<std::size_t>> mcs_from_mss(const std::vector<std::vector<bool>>& mss) {
  std::vector<std::vector<std::size_t>> out;
  for (const auto& set : mss) {
    if (!mss.empty() && set.size() != mss.front().size()) throw ModelError("MSS vectors differ in length");
    std::vector<std::size_t> complement;
    for (std::size_t i = 0; i < set.size(); ++i)
      if (!set[i]) complement.push_back(i);
    out.push_back(std::move(complement));
  }
  return out;
}

TransactionDB parse_transactions(std::string_view text, std::int64_t threshold) {
  if (threshold < 1) throw ModelError("frequency threshold must be at least 1");
  std::vector<std::vector<std::string>> raw;
  std::set<std::string> all;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::vector<std::string> t;
    std::string tok;
    while (ls >> tok) t.push_back(tok);
    if (!t.empty() && t.front().starts_with('#')) continue;
    all.insert(t.begin(), t.end());
    raw.push_back(std::move(t));
  }
  TransactionDB db;
  db.items.assign(all.begin(), all.end());
  db.threshold = threshold;
  for (const auto& t : raw) {
    std::set<std::size_t> idx;
    for (const auto& item : t)
      idx.insert(static_cast<std::size_t>(std::lower_bound(db.items.begin(), db.items.end(), item) - db.items.begin()));
    db.transactions.push_back(std::move(idx));
  }
  return db;
}

ItemsetModel itemset_model(const TransactionDB& db, PatternKind kind) {
  if (db.threshold < 1) throw ModelError("frequency threshold must be at least 1");
  ItemsetModel m;
  for (const std::string& item : db.items) m.items.push_back(m.instance.add_var("I_" + item, Domain::boolean()));
  for (std::size_t t = 0; t < db.transactions.size(); ++t)
    m.transactions.push_back(m.instance.add_var("T" + std::to_string(t + 1), Domain::boolean()));
  m.instance.add_array("I", 1, m.items);
  m.instance.add_array("T", 1, m.transactions);

  for (std::size_t t = 0; t < db.transactions.size(); ++t) {
    std::vector<Expr> outside;
    for (std::size_t i = 0; i < db.items.size(); ++i)
      if (!db.transactions[t].count(i)) outside.push_back(ex::lnot(ex::var(m.items[i], true)));
    // T_t <-> no item outside t is selected
    const Expr covered = ex::conj(outside);
    const Expr tv = ex::var(m.transactions[t], true);
    m.instance.add_constraint(ex::implies(tv, covered));
    m.instance.add_constraint(ex::implies(covered, tv));
  }
  std::vector<Expr> cover;
  for (VarId t : m.transactions) cover.push_back(ex::bool2int(ex::var(t, true)));
  const Expr freq = cover.empty() ? ex::lit(0) : ex::add(cover);
  m.instance.add_constraint(ex::ge(freq, ex::lit(db.threshold)));

  switch (kind) {
    case PatternKind::frequent:
      break;
    case PatternKind::maximal:
      m.spec = DominanceSpec{SubsetMax{m.items}, NogoodMode::equivalence_free};
      break;
    case PatternKind::closed: {
      // not(S ⊒ V /\ freq(S) = freq(V)): V has an item S lacks, or a different frequency.
      std::vector<Expr> parts;
      for (VarId i : m.items) {
        const Expr iv = ex::var(i, true);
        parts.push_back(ex::lt(ex::sol(iv), iv));
      }
      parts.push_back(ex::ne(freq, ex::sol(freq)));
      m.spec = DominanceSpec{CustomNogood{ex::disj(std::move(parts))}, NogoodMode::equivalence_free};
      break;
    }
  }
  return m;
}

}  // namespace cdp
