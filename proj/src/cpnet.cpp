#include "cdp/cpnet.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <sstream>
#include <unordered_set>

#include "cdp/rng.hpp"

namespace cdp {

namespace {

std::uint64_t row_count(const CPNet& net, const CPNetVar& v) {
  std::uint64_t n = 1;
  for (std::uint32_t p : v.parents) {
    n *= net.vars[p].domain_size;
    if (n > (std::uint64_t{1} << 24)) throw ModelError("CPT too large");
  }
  return n;
}

std::uint64_t encode(const CPNet& net, const std::vector<std::int64_t>& o) {
  std::uint64_t code = 0;
  for (std::size_t i = 0; i < net.size(); ++i) code = code * net.vars[i].domain_size + static_cast<std::uint64_t>(o[i]);
  return code;
}

void check_outcome(const CPNet& net, const std::vector<std::int64_t>& o) {
  if (o.size() != net.size()) throw EvalError("outcome does not cover every CP-net variable");
  for (std::size_t i = 0; i < o.size(); ++i)
    if (o[i] < 0 || o[i] >= net.vars[i].domain_size) throw EvalError("outcome value outside the CP-net domain");
}

}  // namespace

void validate(const CPNet& net) {
  if (net.vars.empty()) throw ModelError("CP-net has no variables");
  const std::size_t n = net.size();
  for (std::size_t i = 0; i < n; ++i) {
    const CPNetVar& v = net.vars[i];
    const std::string who = "CP-net variable " + std::to_string(i);
    if (v.domain_size == 0) throw ModelError(who + " has an empty domain");
    std::vector<std::uint32_t> sorted = v.parents;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw ModelError(who + " lists a parent twice");
    for (std::uint32_t p : v.parents) {
      if (p >= n) throw ModelError(who + " has an unknown parent " + std::to_string(p));
      if (p == i) throw ModelError("cycle: " + who + " is its own parent");
    }
  }
  // Kahn's algorithm.
  std::vector<std::size_t> pending(n);
  std::vector<std::vector<std::size_t>> children(n);
  for (std::size_t i = 0; i < n; ++i) {
    pending[i] = net.vars[i].parents.size();
    for (std::uint32_t p : net.vars[i].parents) children[p].push_back(i);
  }
  std::vector<std::size_t> ready;
  for (std::size_t i = 0; i < n; ++i)
    if (pending[i] == 0) ready.push_back(i);
  std::size_t seen = 0;
  while (!ready.empty()) {
    std::size_t v = ready.back();
    ready.pop_back();
    ++seen;
    for (std::size_t c : children[v])
      if (--pending[c] == 0) ready.push_back(c);
  }
  if (seen != n) throw ModelError("cycle in the CP-net parent graph");

  for (std::size_t i = 0; i < n; ++i) {
    const CPNetVar& v = net.vars[i];
    const std::string who = "CP-net variable " + std::to_string(i);
    const std::uint64_t expected = row_count(net, v);
    if (v.rows.size() < expected) throw ModelError(who + ": missing CPT row");
    if (v.rows.size() > expected) throw ModelError(who + ": duplicate CPT row");
    for (const auto& row : v.rows) {
      std::vector<std::uint32_t> sorted = row;
      std::sort(sorted.begin(), sorted.end());
      bool ok = sorted.size() == v.domain_size;
      for (std::size_t k = 0; ok && k < sorted.size(); ++k) ok = sorted[k] == k;
      if (!ok) throw ModelError(who + ": CPT row is not a permutation of the domain");
    }
  }
}

std::uint64_t outcome_count(const CPNet& net) {
  std::uint64_t n = 1;
  for (const CPNetVar& v : net.vars) {
    if (v.domain_size != 0 && n > std::numeric_limits<std::uint64_t>::max() / v.domain_size)
      return std::numeric_limits<std::uint64_t>::max();
    n *= v.domain_size;
  }
  return n;
}

const std::vector<std::uint32_t>& cpt_row(const CPNet& net, std::uint32_t v,
                                          const std::vector<std::int64_t>& outcome) {
  const CPNetVar& var = net.vars[v];
  std::uint64_t idx = 0;
  for (std::uint32_t p : var.parents) idx = idx * net.vars[p].domain_size + static_cast<std::uint64_t>(outcome[p]);
  return var.rows[idx];
}

bool preferred(const std::vector<std::uint32_t>& row, std::int64_t a, std::int64_t b) {
  for (std::uint32_t x : row) {
    if (x == a) return a != b;
    if (x == b) return false;
  }
  return false;
}

namespace {

bool parents_equal(const CPNetVar& v, const std::vector<std::int64_t>& o, const std::vector<std::int64_t>& o2) {
  return std::all_of(v.parents.begin(), v.parents.end(), [&](std::uint32_t p) { return o[p] == o2[p]; });
}

}  // namespace

bool local_dominates(const CPNet& net, const std::vector<std::int64_t>& o, const std::vector<std::int64_t>& o2) {
  check_outcome(net, o);
  check_outcome(net, o2);
  for (std::uint32_t v = 0; v < net.size(); ++v) {
    if (o[v] == o2[v] || !parents_equal(net.vars[v], o, o2)) continue;
    if (!preferred(cpt_row(net, v, o), o[v], o2[v])) return false;
  }
  return true;
}

bool vacuous_pair(const CPNet& net, const std::vector<std::int64_t>& o, const std::vector<std::int64_t>& o2) {
  check_outcome(net, o);
  check_outcome(net, o2);
  if (o == o2) return false;
  for (std::uint32_t v = 0; v < net.size(); ++v)
    if (o[v] != o2[v] && parents_equal(net.vars[v], o, o2)) return false;
  return true;
}

Expr compile_local_nogood(const CPNet& net, const std::vector<std::int64_t>& s, const std::vector<VarId>& mapping) {
  check_outcome(net, s);
  if (mapping.size() != net.size()) throw ModelError("CP-net mapping does not cover every variable");
  std::vector<Expr> disjuncts;
  for (std::uint32_t v = 0; v < net.size(); ++v) {
    const auto& row = cpt_row(net, v, s);
    std::vector<Expr> better;
    for (std::uint32_t u : row) {
      if (u == s[v]) break;
      better.push_back(ex::eq(ex::var(mapping[v]), ex::lit(u)));
    }
    if (better.empty()) continue;
    std::vector<Expr> parts;
    for (std::uint32_t p : net.vars[v].parents) parts.push_back(ex::eq(ex::var(mapping[p]), ex::lit(s[p])));
    parts.push_back(ex::ne(ex::var(mapping[v]), ex::lit(s[v])));
    parts.push_back(better.size() == 1 ? better.front() : ex::disj(std::move(better)));
    disjuncts.push_back(ex::conj(std::move(parts)));
  }
  if (disjuncts.empty()) return ex::boolean(false);
  if (disjuncts.size() == 1) return disjuncts.front();
  return ex::disj(std::move(disjuncts));
}

Expr compile_local_nogood(const CPNet& net, const std::vector<std::int64_t>& s) {
  std::vector<VarId> identity(net.size());
  for (std::uint32_t i = 0; i < net.size(); ++i) identity[i] = VarId{i};
  return compile_local_nogood(net, s, identity);
}

bool trad_dominates(const CPNet& net, const std::vector<std::int64_t>& o, const std::vector<std::int64_t>& o2,
                    std::uint64_t outcome_limit) {
  check_outcome(net, o);
  check_outcome(net, o2);
  if (outcome_count(net) > outcome_limit)
    throw LimitExceeded("CP-net outcome space exceeds " + std::to_string(outcome_limit));
  if (o == o2) return false;
  const std::uint64_t target = encode(net, o);
  std::unordered_set<std::uint64_t> seen{encode(net, o2)};
  std::deque<std::vector<std::int64_t>> queue{o2};
  while (!queue.empty()) {
    std::vector<std::int64_t> cur = std::move(queue.front());
    queue.pop_front();
    for (std::uint32_t v = 0; v < net.size(); ++v) {
      const auto& row = cpt_row(net, v, cur);
      const std::int64_t old = cur[v];
      for (std::uint32_t u : row) {
        if (u == old) break;
        cur[v] = u;
        const std::uint64_t code = encode(net, cur);
        if (code == target) return true;
        if (seen.insert(code).second) queue.push_back(cur);
      }
      cur[v] = old;
    }
  }
  return false;
}

CPNet random_net(std::uint32_t n_vars, std::uint32_t max_parents, std::uint64_t seed, CptStyle style,
                 std::uint32_t domain_size) {
  if (n_vars == 0) throw ModelError("a CP-net needs at least one variable");
  if (max_parents >= n_vars) throw ModelError("max_parents must be below the number of variables");
  if (style == CptStyle::photo) domain_size = n_vars;
  if (domain_size == 0) throw ModelError("empty CP-net domain");
  Rng rng(seed);
  std::vector<std::uint32_t> order(n_vars);
  for (std::uint32_t i = 0; i < n_vars; ++i) order[i] = i;
  rng.shuffle(order);

  CPNet net;
  net.vars.resize(n_vars);
  for (std::uint32_t pos = 0; pos < n_vars; ++pos) {
    CPNetVar& v = net.vars[order[pos]];
    v.domain_size = domain_size;
    const std::uint32_t k = static_cast<std::uint32_t>(rng.below(std::min(max_parents, pos) + 1));
    std::vector<std::uint32_t> earlier(order.begin(), order.begin() + pos);
    rng.shuffle(earlier);
    v.parents.assign(earlier.begin(), earlier.begin() + k);
    std::sort(v.parents.begin(), v.parents.end());
  }
  for (std::uint32_t i = 0; i < n_vars; ++i) {
    CPNetVar& v = net.vars[i];
    const std::uint64_t rows = row_count(net, v);
    for (std::uint64_t r = 0; r < rows; ++r) {
      std::vector<std::uint32_t> row(domain_size);
      for (std::uint32_t x = 0; x < domain_size; ++x) row[x] = x;
      if (style == CptStyle::random || v.parents.empty()) {
        rng.shuffle(row);
      } else {
        // Decode the parent positions of row r, then sort by distance to their mean.
        std::vector<std::int64_t> pvals(v.parents.size());
        std::uint64_t rest = r;
        for (std::size_t j = v.parents.size(); j-- > 0;) {
          pvals[j] = static_cast<std::int64_t>(rest % net.vars[v.parents[j]].domain_size);
          rest /= net.vars[v.parents[j]].domain_size;
        }
        std::int64_t total = 0;
        for (std::int64_t p : pvals) total += p;
        const auto k = static_cast<std::int64_t>(pvals.size());
        // |x - total/k| compared as |k*x - total| to stay in integers.
        std::stable_sort(row.begin(), row.end(), [&](std::uint32_t a, std::uint32_t b) {
          const std::int64_t da = std::abs(k * static_cast<std::int64_t>(a) - total);
          const std::int64_t db = std::abs(k * static_cast<std::int64_t>(b) - total);
          return da < db;
        });
      }
      v.rows.push_back(std::move(row));
    }
  }
  validate(net);
  return net;
}

CPNet parse_cpnet(std::string_view text) {
  struct Line {
    std::size_t number;
    std::vector<std::string> tokens;
  };
  std::vector<Line> lines;
  {
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
      ++line_no;
      std::istringstream ls(raw);
      Line l{line_no, {}};
      std::string tok;
      while (ls >> tok) l.tokens.push_back(tok);
      if (l.tokens.empty() || l.tokens.front().starts_with('#')) continue;
      lines.push_back(std::move(l));
    }
  }
  auto number = [](const Line& l, const std::string& tok) -> std::uint32_t {
    std::size_t used = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size() || tok.empty() || tok.front() == '-' || v > std::numeric_limits<std::uint32_t>::max())
      throw ParseError(l.number, 1, "expected a non-negative integer, got '" + tok + "'");
    return static_cast<std::uint32_t>(v);
  };

  if (lines.empty() || lines[0].tokens.size() != 2 || lines[0].tokens[0] != "cpnet")
    throw ParseError(lines.empty() ? 1 : lines[0].number, 1, "expected 'cpnet <n>' header");
  const std::uint32_t n = number(lines[0], lines[0].tokens[1]);
  if (n == 0) throw ParseError(lines[0].number, 1, "a CP-net needs at least one variable");
  CPNet net;
  std::size_t at = 1;
  while (at < lines.size()) {
    const Line& head = lines[at++];
    const auto& t = head.tokens;
    if (t.size() < 3 || t[0] != "var" || t[2] != "parents")
      throw ParseError(head.number, 1, "expected 'var <domain-size> parents ...'");
    if (net.vars.size() == n) throw ParseError(head.number, 1, "more variables than declared in the header");
    CPNetVar v;
    v.domain_size = number(head, t[1]);
    for (std::size_t k = 3; k < t.size(); ++k) v.parents.push_back(number(head, t[k]));
    while (at < lines.size() && lines[at].tokens[0] != "var") {
      std::vector<std::uint32_t> row;
      for (const std::string& tok : lines[at].tokens) row.push_back(number(lines[at], tok));
      v.rows.push_back(std::move(row));
      ++at;
    }
    net.vars.push_back(std::move(v));
  }
  if (net.vars.size() != n)
    throw ParseError(lines.back().number, 1, "expected " + std::to_string(n) + " variables");
  validate(net);
  return net;
}

std::string to_text(const CPNet& net) {
  std::ostringstream out;
  out << "cpnet " << net.size() << "\n";
  for (const CPNetVar& v : net.vars) {
    out << "var " << v.domain_size << " parents";
    for (std::uint32_t p : v.parents) out << " " << p;
    out << "\n";
    for (const auto& row : v.rows) {
      for (std::size_t k = 0; k < row.size(); ++k) out << (k ? " " : "") << row[k];
      out << "\n";
    }
  }
  return out.str();
}

}  // namespace cdp
