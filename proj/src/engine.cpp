#include "cdp/engine.hpp"

#include <algorithm>
#include <bit>
#include <limits>

namespace cdp {

namespace {

using i128 = __int128;

constexpr std::int64_t max_domain_width = std::int64_t{1} << 20;
constexpr std::size_t unsettled = std::numeric_limits<std::size_t>::max();

// Bitset over [base, base + width) with cached bounds.
class IntDom {
 public:
  IntDom() = default;

  explicit IntDom(const Domain& d) : base_(d.min()), lo_(d.min()), hi_(d.max()), count_(d.size()) {
    const i128 width = static_cast<i128>(d.max()) - d.min() + 1;
    if (width > max_domain_width) throw ModelError("domain wider than 2^20 values");
    bits_.assign(static_cast<std::size_t>((width + 63) / 64), 0);
    for (std::int64_t v : d.values()) set_bit(v);
  }

  std::int64_t min() const { return lo_; }
  std::int64_t max() const { return hi_; }
  std::uint64_t size() const { return count_; }
  bool fixed() const { return count_ == 1; }
  bool empty() const { return count_ == 0; }

  bool contains(std::int64_t v) const {
    if (count_ == 0 || v < lo_ || v > hi_) return false;
    const auto off = static_cast<std::uint64_t>(v - base_);
    return (bits_[off >> 6] >> (off & 63)) & 1u;
  }

  // Removes every value in [a, b]; returns true if anything changed.
  bool clear_range(std::int64_t a, std::int64_t b) {
    a = std::max(a, lo_);
    b = std::min(b, hi_);
    if (count_ == 0 || a > b) return false;
    bool changed = false;
    for (std::int64_t v = a; v <= b; ++v) {
      if (contains(v)) {
        const auto off = static_cast<std::uint64_t>(v - base_);
        bits_[off >> 6] &= ~(std::uint64_t{1} << (off & 63));
        --count_;
        changed = true;
      }
    }
    if (changed) refresh_bounds();
    return changed;
  }

  std::vector<std::int64_t> values() const {
    std::vector<std::int64_t> out;
    if (count_ == 0) return out;
    out.reserve(count_);
    for (std::int64_t v = lo_; v <= hi_; ++v)
      if (contains(v)) out.push_back(v);
    return out;
  }

 private:
  void set_bit(std::int64_t v) {
    const auto off = static_cast<std::uint64_t>(v - base_);
    bits_[off >> 6] |= std::uint64_t{1} << (off & 63);
  }

  void refresh_bounds() {
    if (count_ == 0) return;
    while (!contains_raw(lo_)) ++lo_;
    while (!contains_raw(hi_)) --hi_;
  }

  bool contains_raw(std::int64_t v) const {
    const auto off = static_cast<std::uint64_t>(v - base_);
    return (bits_[off >> 6] >> (off & 63)) & 1u;
  }

  std::int64_t base_ = 0;
  std::int64_t lo_ = 0;
  std::int64_t hi_ = -1;
  std::uint64_t count_ = 0;
  std::vector<std::uint64_t> bits_;
};

enum class Truth { no, yes, unknown };

struct CNode;

struct Term {
  std::int64_t coef = 0;
  std::int32_t var = -1;
  std::shared_ptr<CNode> atom;  // bool2int of a compound condition
};

// sum(coef * term) + constant
struct Linear {
  std::vector<Term> terms;
  std::int64_t constant = 0;
};

enum class Rel { le, eq, ne };  // linear REL 0

struct CNode {
  enum class Kind { constant, bool_var, cmp, lnot, land, lor };
  Kind kind = Kind::constant;
  bool value = true;
  std::int32_t var = -1;
  Rel rel = Rel::le;
  Linear lin;
  Linear negated;  // for Rel::le: -lin + 1 <= 0 is the negation
  std::vector<CNode> kids;
};

std::int64_t to_int64(i128 v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
    throw ModelError("coefficient overflow while compiling a constraint");
  return static_cast<std::int64_t>(v);
}

CNode compile_bool(const Expr& e);

void linear_into(const Expr& e, std::int64_t k, Linear& out) {
  const ExprNode& n = e.node();
  switch (n.op) {
    case Op::int_lit:
    case Op::bool_lit:
      out.constant = to_int64(static_cast<i128>(out.constant) + static_cast<i128>(k) * n.value);
      return;
    case Op::var:
      out.terms.push_back(Term{k, static_cast<std::int32_t>(n.value), nullptr});
      return;
    case Op::add:
      for (const Expr& a : n.args) linear_into(a, k, out);
      return;
    case Op::sub:
      linear_into(n.args[0], k, out);
      linear_into(n.args[1], to_int64(-static_cast<i128>(k)), out);
      return;
    case Op::mul:
      linear_into(n.args[0], to_int64(static_cast<i128>(k) * n.value), out);
      return;
    case Op::neg:
      linear_into(n.args[0], to_int64(-static_cast<i128>(k)), out);
      return;
    case Op::bool2int:
      linear_into(n.args[0], k, out);
      return;
    case Op::lt:
    case Op::le:
    case Op::eq:
    case Op::ne:
    case Op::ge:
    case Op::gt:
    case Op::land:
    case Op::lor:
    case Op::lnot:
    case Op::implies:
      out.terms.push_back(Term{k, -1, std::make_shared<CNode>(compile_bool(e))});
      return;
    default:
      throw ModelError("expression must be flattened and sol-free before posting: " + to_string(e));
  }
}

Linear normalize(Linear lin) {
  std::vector<Term> merged;
  std::stable_sort(lin.terms.begin(), lin.terms.end(), [](const Term& a, const Term& b) {
    return a.var < b.var;
  });
  for (Term& t : lin.terms) {
    if (t.var >= 0 && !merged.empty() && merged.back().var == t.var) {
      merged.back().coef = to_int64(static_cast<i128>(merged.back().coef) + t.coef);
    } else {
      merged.push_back(std::move(t));
    }
  }
  std::erase_if(merged, [](const Term& t) { return t.coef == 0; });
  lin.terms = std::move(merged);
  return lin;
}

Linear scaled(const Linear& lin, std::int64_t k, std::int64_t add) {
  Linear out;
  for (const Term& t : lin.terms) out.terms.push_back(Term{to_int64(static_cast<i128>(t.coef) * k), t.var, t.atom});
  out.constant = to_int64(static_cast<i128>(lin.constant) * k + add);
  return out;
}

CNode compile_bool(const Expr& e) {
  const ExprNode& n = e.node();
  CNode c;
  switch (n.op) {
    case Op::bool_lit:
      c.kind = CNode::Kind::constant;
      c.value = n.value != 0;
      return c;
    case Op::var:
      if (!n.boolean_var) throw ModelError("integer variable used as a condition");
      c.kind = CNode::Kind::bool_var;
      c.var = static_cast<std::int32_t>(n.value);
      return c;
    case Op::lnot:
      c.kind = CNode::Kind::lnot;
      c.kids.push_back(compile_bool(n.args[0]));
      return c;
    case Op::land:
    case Op::lor: {
      c.kind = n.op == Op::land ? CNode::Kind::land : CNode::Kind::lor;
      for (const Expr& a : n.args) {
        CNode kid = compile_bool(a);
        if (kid.kind == c.kind) {
          for (CNode& g : kid.kids) c.kids.push_back(std::move(g));
        } else {
          c.kids.push_back(std::move(kid));
        }
      }
      return c;
    }
    case Op::implies: {
      c.kind = CNode::Kind::lor;
      CNode premise;
      premise.kind = CNode::Kind::lnot;
      premise.kids.push_back(compile_bool(n.args[0]));
      c.kids.push_back(std::move(premise));
      c.kids.push_back(compile_bool(n.args[1]));
      return c;
    }
    case Op::lt:
    case Op::le:
    case Op::eq:
    case Op::ne:
    case Op::ge:
    case Op::gt: {
      Linear lin;
      linear_into(n.args[0], 1, lin);
      linear_into(n.args[1], -1, lin);
      lin = normalize(std::move(lin));
      c.kind = CNode::Kind::cmp;
      switch (n.op) {
        case Op::lt: c.rel = Rel::le; c.lin = scaled(lin, 1, 1); break;
        case Op::le: c.rel = Rel::le; c.lin = lin; break;
        case Op::gt: c.rel = Rel::le; c.lin = scaled(lin, -1, 1); break;
        case Op::ge: c.rel = Rel::le; c.lin = scaled(lin, -1, 0); break;
        case Op::eq: c.rel = Rel::eq; c.lin = lin; break;
        default: c.rel = Rel::ne; c.lin = lin; break;
      }
      if (c.rel == Rel::le) c.negated = scaled(c.lin, -1, 1);
      return c;
    }
    default:
      throw ModelError("expected a condition, got: " + to_string(e));
  }
}

void collect_node_vars(const CNode& c, std::vector<std::uint32_t>& out) {
  if (c.kind == CNode::Kind::bool_var) out.push_back(static_cast<std::uint32_t>(c.var));
  for (const Term& t : c.lin.terms) {
    if (t.var >= 0) out.push_back(static_cast<std::uint32_t>(t.var));
    if (t.atom) collect_node_vars(*t.atom, out);
  }
  for (const CNode& k : c.kids) collect_node_vars(k, out);
}

i128 floor_div(i128 a, i128 b) {
  i128 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

i128 ceil_div(i128 a, i128 b) { return -floor_div(-a, b); }

}  // namespace

struct Solver::Impl {
  struct Prop {
    CNode root;
    std::vector<std::uint32_t> vars;
    std::size_t settled = 0;  // shallowest node depth at which it has been propagated
  };

  struct Frame {
    std::uint32_t var;
    std::vector<std::int64_t> values;
    std::size_t next = 0;
    std::size_t mark = 0;
    std::size_t depth = 0;
  };

  struct TrailEntry {
    std::uint32_t var;
    IntDom old;
  };

  enum class Status { fresh, searching, exhausted, broken };

  Instance instance;
  SearchConfig config;
  std::vector<IntDom> doms;
  std::vector<Prop> props;
  std::vector<std::vector<std::uint32_t>> watchers;
  std::vector<Expr> leaf_checks;
  std::vector<std::uint32_t> queue;
  std::vector<char> in_queue;
  std::vector<std::uint32_t> unsettled_props;
  std::vector<TrailEntry> trail;
  std::vector<std::uint64_t> saved_epoch;
  std::uint64_t epoch = 1;
  std::vector<Frame> frames;
  Status status = Status::fresh;
  bool root_failed = false;
  SearchStats stats;

  Impl(const Instance& inst, SearchConfig cfg) : instance(inst), config(std::move(cfg)) {
    doms.reserve(instance.size());
    for (const VarDecl& d : instance.vars()) doms.emplace_back(d.domain);
    watchers.resize(instance.size());
    saved_epoch.assign(instance.size(), 0);
    for (const Expr& c : instance.constraints()) post_constraint(c, 0);
    for (std::uint32_t p = 0; p < props.size(); ++p) enqueue(p);
    root_failed = !propagate();
    trail.clear();
    ++epoch;
  }

  void post_constraint(const Expr& c, std::size_t settled) {
    Expr flat = flatten(c);
    leaf_checks.push_back(flat);
    CNode root = compile_bool(flat);
    std::vector<CNode> parts;
    if (root.kind == CNode::Kind::land) {
      parts = std::move(root.kids);
    } else {
      parts.push_back(std::move(root));
    }
    for (CNode& part : parts) {
      Prop p;
      p.root = std::move(part);
      collect_node_vars(p.root, p.vars);
      std::sort(p.vars.begin(), p.vars.end());
      p.vars.erase(std::unique(p.vars.begin(), p.vars.end()), p.vars.end());
      p.settled = settled;
      const auto idx = static_cast<std::uint32_t>(props.size());
      for (std::uint32_t v : p.vars) watchers[v].push_back(idx);
      props.push_back(std::move(p));
      in_queue.push_back(0);
      if (settled != 0) unsettled_props.push_back(idx);
    }
  }

  // ---- domains and trail

  void save(std::uint32_t v) {
    if (saved_epoch[v] == epoch) return;
    saved_epoch[v] = epoch;
    trail.push_back(TrailEntry{v, doms[v]});
  }

  std::size_t take_mark() {
    ++epoch;
    return trail.size();
  }

  void restore(std::size_t mark) {
    while (trail.size() > mark) {
      TrailEntry& e = trail.back();
      doms[e.var] = std::move(e.old);
      trail.pop_back();
    }
    ++epoch;
  }

  void changed(std::uint32_t v) {
    for (std::uint32_t p : watchers[v]) enqueue(p);
  }

  void enqueue(std::uint32_t p) {
    if (in_queue[p]) return;
    in_queue[p] = 1;
    queue.push_back(p);
  }

  bool clear(std::uint32_t v, std::int64_t a, std::int64_t b) {
    IntDom& d = doms[v];
    if (a > d.max() || b < d.min()) return true;
    save(v);
    if (d.clear_range(a, b)) {
      if (d.empty()) return false;
      changed(v);
    }
    return true;
  }

  bool set_max(std::uint32_t v, i128 bound) {
    if (bound >= doms[v].max()) return true;
    if (bound < doms[v].min()) return false;
    return clear(v, static_cast<std::int64_t>(bound) + 1, doms[v].max());
  }

  bool set_min(std::uint32_t v, i128 bound) {
    if (bound <= doms[v].min()) return true;
    if (bound > doms[v].max()) return false;
    return clear(v, doms[v].min(), static_cast<std::int64_t>(bound) - 1);
  }

  bool remove_value(std::uint32_t v, i128 value) {
    if (value < doms[v].min() || value > doms[v].max()) return true;
    const auto x = static_cast<std::int64_t>(value);
    if (!doms[v].contains(x)) return true;
    return clear(v, x, x);
  }

  bool assign(std::uint32_t v, std::int64_t value) {
    if (!doms[v].contains(value)) return false;
    return set_min(v, value) && set_max(v, value);
  }

  // ---- bounds reasoning

  struct Bounds {
    i128 lo;
    i128 hi;
  };

  Bounds term_bounds(const Term& t) const {
    if (t.var >= 0) {
      const IntDom& d = doms[static_cast<std::size_t>(t.var)];
      return {d.min(), d.max()};
    }
    switch (truth(*t.atom)) {
      case Truth::yes: return {1, 1};
      case Truth::no: return {0, 0};
      default: return {0, 1};
    }
  }

  Bounds contribution(const Term& t) const {
    Bounds b = term_bounds(t);
    if (t.coef >= 0) return {b.lo * t.coef, b.hi * t.coef};
    return {b.hi * t.coef, b.lo * t.coef};
  }

  Bounds linear_bounds(const Linear& lin) const {
    Bounds total{lin.constant, lin.constant};
    for (const Term& t : lin.terms) {
      Bounds c = contribution(t);
      total.lo += c.lo;
      total.hi += c.hi;
    }
    return total;
  }

  Truth truth(const CNode& c) const {
    switch (c.kind) {
      case CNode::Kind::constant:
        return c.value ? Truth::yes : Truth::no;
      case CNode::Kind::bool_var: {
        const IntDom& d = doms[static_cast<std::size_t>(c.var)];
        if (!d.fixed()) return Truth::unknown;
        return d.min() != 0 ? Truth::yes : Truth::no;
      }
      case CNode::Kind::lnot: {
        Truth t = truth(c.kids[0]);
        if (t == Truth::unknown) return t;
        return t == Truth::yes ? Truth::no : Truth::yes;
      }
      case CNode::Kind::land:
      case CNode::Kind::lor: {
        const Truth absorbing = c.kind == CNode::Kind::land ? Truth::no : Truth::yes;
        bool all_decided = true;
        for (const CNode& k : c.kids) {
          Truth t = truth(k);
          if (t == absorbing) return absorbing;
          if (t == Truth::unknown) all_decided = false;
        }
        if (!all_decided) return Truth::unknown;
        return absorbing == Truth::no ? Truth::yes : Truth::no;
      }
      case CNode::Kind::cmp: {
        Bounds b = linear_bounds(c.lin);
        switch (c.rel) {
          case Rel::le:
            if (b.hi <= 0) return Truth::yes;
            if (b.lo > 0) return Truth::no;
            return Truth::unknown;
          case Rel::eq:
          case Rel::ne: {
            Truth eq = Truth::unknown;
            if (b.lo == 0 && b.hi == 0) eq = Truth::yes;
            if (b.lo > 0 || b.hi < 0) eq = Truth::no;
            if (c.rel == Rel::eq || eq == Truth::unknown) return eq;
            return eq == Truth::yes ? Truth::no : Truth::yes;
          }
        }
      }
    }
    return Truth::unknown;
  }

  // ---- enforcement

  bool term_at_most(const Term& t, i128 bound) {
    if (t.var >= 0) return set_max(static_cast<std::uint32_t>(t.var), bound);
    if (bound < 0) return false;
    if (bound == 0) return enforce(*t.atom, false);
    return true;
  }

  bool term_at_least(const Term& t, i128 bound) {
    if (t.var >= 0) return set_min(static_cast<std::uint32_t>(t.var), bound);
    if (bound > 1) return false;
    if (bound == 1) return enforce(*t.atom, true);
    return true;
  }

  bool enforce_le(const Linear& lin) {
    std::vector<i128> mins(lin.terms.size());
    i128 total = lin.constant;
    for (std::size_t i = 0; i < lin.terms.size(); ++i) {
      mins[i] = contribution(lin.terms[i]).lo;
      total += mins[i];
    }
    if (total > 0) return false;
    for (std::size_t i = 0; i < lin.terms.size(); ++i) {
      const Term& t = lin.terms[i];
      const i128 room = -(total - mins[i]);  // coef * t <= room
      if (t.coef > 0) {
        if (!term_at_most(t, floor_div(room, t.coef))) return false;
      } else {
        if (!term_at_least(t, ceil_div(room, t.coef))) return false;
      }
    }
    return true;
  }

  bool enforce_ne(const Linear& lin) {
    i128 fixed_sum = lin.constant;
    const Term* open = nullptr;
    for (const Term& t : lin.terms) {
      Bounds b = term_bounds(t);
      if (b.lo == b.hi) {
        fixed_sum += b.lo * t.coef;
      } else if (open) {
        return true;
      } else {
        open = &t;
      }
    }
    if (!open) return fixed_sum != 0;
    if (fixed_sum % open->coef != 0) return true;
    const i128 forbidden = -fixed_sum / open->coef;
    if (open->var >= 0) return remove_value(static_cast<std::uint32_t>(open->var), forbidden);
    if (forbidden == 0) return enforce(*open->atom, true);
    if (forbidden == 1) return enforce(*open->atom, false);
    return true;
  }

  bool at_least_one(const std::vector<CNode>& kids, bool target) {
    const Truth wanted = target ? Truth::yes : Truth::no;
    const CNode* candidate = nullptr;
    std::size_t open = 0;
    for (const CNode& k : kids) {
      Truth t = truth(k);
      if (t == wanted) return true;
      if (t == Truth::unknown) {
        ++open;
        candidate = &k;
      }
    }
    if (open == 0) return false;
    if (open == 1) return enforce(*candidate, target);
    return true;
  }

  bool enforce(const CNode& c, bool want) {
    switch (c.kind) {
      case CNode::Kind::constant:
        return c.value == want;
      case CNode::Kind::bool_var:
        return assign(static_cast<std::uint32_t>(c.var), want ? 1 : 0);
      case CNode::Kind::lnot:
        return enforce(c.kids[0], !want);
      case CNode::Kind::land:
      case CNode::Kind::lor: {
        const bool all_mode = (c.kind == CNode::Kind::land) == want;
        if (all_mode) {
          for (const CNode& k : c.kids)
            if (!enforce(k, want)) return false;
          return true;
        }
        return at_least_one(c.kids, want);
      }
      case CNode::Kind::cmp:
        switch (c.rel) {
          case Rel::le:
            return enforce_le(want ? c.lin : c.negated);
          case Rel::eq:
            if (!want) return enforce_ne(c.lin);
            return enforce_le(c.lin) && enforce_le(scaled(c.lin, -1, 0));
          case Rel::ne:
            if (want) return enforce_ne(c.lin);
            return enforce_le(c.lin) && enforce_le(scaled(c.lin, -1, 0));
        }
    }
    return false;
  }

  bool propagate() {
    while (!queue.empty()) {
      const std::uint32_t p = queue.back();
      queue.pop_back();
      in_queue[p] = 0;
      ++stats.propagations;
      if (!enforce(props[p].root, true)) {
        for (std::uint32_t q : queue) in_queue[q] = 0;
        queue.clear();
        return false;
      }
    }
    return true;
  }

  // Propagates constraints that have not been run at this depth or above.
  bool settle(std::size_t depth) {
    bool any = false;
    for (std::uint32_t p : unsettled_props) {
      if (props[p].settled > depth) {
        enqueue(p);
        any = true;
      }
    }
    if (!any) return true;
    if (!propagate()) return false;
    for (std::uint32_t p : unsettled_props)
      props[p].settled = std::min(props[p].settled, depth);
    if (depth == 0) unsettled_props.clear();
    return true;
  }

  // ---- search

  std::optional<std::uint32_t> choose_var() const {
    const auto n = static_cast<std::uint32_t>(doms.size());
    if (config.var_order == VarOrder::explicit_list) {
      for (VarId v : config.explicit_order)
        if (v.index < n && !doms[v.index].fixed()) return v.index;
    }
    if (config.var_order == VarOrder::first_fail) {
      std::optional<std::uint32_t> best;
      for (std::uint32_t v = 0; v < n; ++v) {
        if (doms[v].fixed()) continue;
        if (!best || doms[v].size() < doms[*best].size()) best = v;
      }
      return best;
    }
    for (std::uint32_t v = 0; v < n; ++v)
      if (!doms[v].fixed()) return v;
    return std::nullopt;
  }

  std::vector<std::int64_t> ordered_values(std::uint32_t v) const {
    std::vector<std::int64_t> vals = doms[v].values();
    switch (config.val_order) {
      case ValOrder::min_first:
        break;
      case ValOrder::max_first:
        std::reverse(vals.begin(), vals.end());
        break;
      case ValOrder::preferred: {
        auto it = config.preferences.find(VarId{v});
        if (it == config.preferences.end()) break;
        std::vector<std::int64_t> out;
        for (std::int64_t p : it->second)
          if (doms[v].contains(p) && std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
        for (std::int64_t x : vals)
          if (std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
        vals = std::move(out);
        break;
      }
    }
    return vals;
  }

  Valuation current() const {
    std::vector<std::int64_t> vals(doms.size());
    for (std::size_t i = 0; i < doms.size(); ++i) vals[i] = doms[i].min();
    return Valuation(std::move(vals));
  }

  bool leaf_ok(const Valuation& point) const {
    for (const Expr& c : leaf_checks)
      if (!holds(c, point)) return false;
    return true;
  }

  std::optional<Valuation> next() {
    if (status == Status::broken) throw Error("solver state is unusable after an exceeded limit");
    if (status == Status::exhausted) return std::nullopt;
    if (status == Status::fresh) {
      status = Status::searching;
      if (root_failed || !settle(0)) {
        status = Status::exhausted;
        return std::nullopt;
      }
      auto var = choose_var();
      if (!var) {
        status = Status::exhausted;
        Valuation leaf = current();
        if (!leaf_ok(leaf)) return std::nullopt;
        ++stats.solutions;
        return leaf;
      }
      frames.push_back(Frame{*var, ordered_values(*var), 0, take_mark(), 0});
    }

    while (!frames.empty()) {
      Frame& f = frames.back();
      restore(f.mark);
      if (!settle(f.depth)) {
        ++stats.failures;
        frames.pop_back();
        continue;
      }
      f.mark = take_mark();
      std::optional<std::int64_t> value;
      while (f.next < f.values.size()) {
        const std::int64_t candidate = f.values[f.next++];
        if (doms[f.var].contains(candidate)) {
          value = candidate;
          break;
        }
      }
      if (!value) {
        frames.pop_back();
        continue;
      }
      if (config.node_limit && stats.nodes >= *config.node_limit) {
        status = Status::broken;
        throw LimitExceeded("node limit of " + std::to_string(*config.node_limit) + " exceeded");
      }
      ++stats.nodes;
      if (!assign(f.var, *value) || !propagate()) {
        ++stats.failures;
        continue;
      }
      auto var = choose_var();
      if (!var) {
        Valuation leaf = current();
        if (leaf_ok(leaf)) {
          ++stats.solutions;
          return leaf;
        }
        ++stats.failures;
        continue;
      }
      const std::size_t depth = frames.size();
      frames.push_back(Frame{*var, ordered_values(*var), 0, take_mark(), depth});
    }
    status = Status::exhausted;
    return std::nullopt;
  }

  void add(const Expr& c) {
    if (contains_sol(c)) throw ModelError("sol() must be instantiated before posting a constraint");
    if (type_of(c) != Type::boolean) throw ModelError("constraint is not boolean");
    for (VarId v : collect_vars(c))
      if (v.index >= doms.size()) throw ModelError("constraint refers to an undeclared variable");
    post_constraint(c, unsettled);
  }
};

Solver::Solver(const Instance& instance, SearchConfig config)
    : impl_(std::make_unique<Impl>(instance, std::move(config))) {}
Solver::~Solver() = default;
Solver::Solver(Solver&&) noexcept = default;
Solver& Solver::operator=(Solver&&) noexcept = default;

bool Solver::failed() const { return impl_->root_failed; }

std::vector<std::int64_t> Solver::current_values(VarId v) const { return impl_->doms.at(v.index).values(); }

std::optional<Valuation> Solver::next_solution() { return impl_->next(); }

void Solver::add_constraint(const Expr& c) { impl_->add(c); }

std::size_t Solver::constraint_count() const { return impl_->leaf_checks.size(); }

const SearchStats& Solver::stats() const { return impl_->stats; }

const Instance& Solver::instance() const { return impl_->instance; }

std::vector<Valuation> enumerate_all(const Instance& instance, std::size_t limit, const SearchConfig& config) {
  Solver solver(instance, config);
  std::vector<Valuation> out;
  while (auto s = solver.next_solution()) {
    if (out.size() == limit)
      throw LimitExceeded("more than " + std::to_string(limit) + " solutions");
    out.push_back(std::move(*s));
  }
  return out;
}

}  // namespace cdp
