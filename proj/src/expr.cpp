#include <algorithm>
#include <map>
#include <sstream>

#include "cdp/model.hpp"

namespace cdp {

namespace {

Expr make(ExprNode node) { return Expr(std::make_shared<const ExprNode>(std::move(node))); }

Expr make_op(Op op, std::vector<Expr> args, std::int64_t value = 0) {
  ExprNode n;
  n.op = op;
  n.value = value;
  n.args = std::move(args);
  return make(std::move(n));
}

Expr make_range(Op op, std::int64_t slot, std::int64_t lo, std::int64_t hi, Expr body) {
  ExprNode n;
  n.op = op;
  n.value = slot;
  n.lo = lo;
  n.hi = hi;
  n.args = {std::move(body)};
  return make(std::move(n));
}

bool is_comparison(Op op) {
  switch (op) {
    case Op::lt:
    case Op::le:
    case Op::eq:
    case Op::ne:
    case Op::ge:
    case Op::gt:
      return true;
    default:
      return false;
  }
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw EvalError("integer overflow in addition");
  return r;
}

std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) throw EvalError("integer overflow in subtraction");
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw EvalError("integer overflow in multiplication");
  return r;
}

bool compare(Op op, std::int64_t a, std::int64_t b) {
  switch (op) {
    case Op::lt: return a < b;
    case Op::le: return a <= b;
    case Op::eq: return a == b;
    case Op::ne: return a != b;
    case Op::ge: return a >= b;
    case Op::gt: return a > b;
    default: break;
  }
  throw EvalError("not a comparison");
}

struct EvalContext {
  const Valuation* point;
  const Valuation* sol;
  std::map<std::int64_t, std::int64_t> loops;
};

Value eval(const Expr& e, EvalContext& ctx);

std::int64_t as_int(const Value& v) { return v.v; }

bool as_bool(const Value& v) {
  if (v.type != Type::boolean) throw EvalError("type mismatch: integer used as boolean");
  return v.v != 0;
}

Value int_value(std::int64_t v) { return {Type::integer, v}; }
Value bool_value(bool b) { return {Type::boolean, b ? 1 : 0}; }

std::int64_t read_var(const Valuation& point, std::int64_t index) {
  if (index < 0 || static_cast<std::size_t>(index) >= point.size())
    throw EvalError("unresolved variable reference v" + std::to_string(index));
  return point.values()[static_cast<std::size_t>(index)];
}

Value eval(const Expr& e, EvalContext& ctx) {
  const ExprNode& n = e.node();
  switch (n.op) {
    case Op::int_lit:
      return int_value(n.value);
    case Op::bool_lit:
      return bool_value(n.value != 0);
    case Op::var: {
      std::int64_t v = read_var(*ctx.point, n.value);
      return n.boolean_var ? bool_value(v != 0) : int_value(v);
    }
    case Op::sol: {
      if (ctx.sol == nullptr) throw EvalError("sol() reference without a solution binding");
      EvalContext inner{ctx.sol, nullptr, ctx.loops};
      return eval(n.args[0], inner);
    }
    case Op::loop: {
      auto it = ctx.loops.find(n.value);
      if (it == ctx.loops.end()) throw EvalError("unbound comprehension index");
      return int_value(it->second);
    }
    case Op::at: {
      std::int64_t idx = as_int(eval(n.args[0], ctx));
      const ArrayDecl& a = *n.array;
      if (idx < a.lo || idx > a.hi())
        throw EvalError("array index " + std::to_string(idx) + " out of range for " + a.name);
      VarId id = a.elements[static_cast<std::size_t>(idx - a.lo)];
      std::int64_t v = read_var(*ctx.point, id.index);
      return a.boolean ? bool_value(v != 0) : int_value(v);
    }
    case Op::add: {
      std::int64_t acc = 0;
      for (const Expr& a : n.args) acc = checked_add(acc, as_int(eval(a, ctx)));
      return int_value(acc);
    }
    case Op::sub:
      return int_value(checked_sub(as_int(eval(n.args[0], ctx)), as_int(eval(n.args[1], ctx))));
    case Op::mul:
      return int_value(checked_mul(n.value, as_int(eval(n.args[0], ctx))));
    case Op::neg:
      return int_value(checked_sub(0, as_int(eval(n.args[0], ctx))));
    case Op::sum: {
      std::int64_t acc = 0;
      for (std::int64_t i = n.lo; i <= n.hi; ++i) {
        ctx.loops[n.value] = i;
        acc = checked_add(acc, as_int(eval(n.args[0], ctx)));
      }
      ctx.loops.erase(n.value);
      return int_value(acc);
    }
    case Op::lt:
    case Op::le:
    case Op::eq:
    case Op::ne:
    case Op::ge:
    case Op::gt:
      return bool_value(compare(n.op, as_int(eval(n.args[0], ctx)), as_int(eval(n.args[1], ctx))));
    case Op::land: {
      bool r = true;
      for (const Expr& a : n.args) r = as_bool(eval(a, ctx)) && r;
      return bool_value(r);
    }
    case Op::lor: {
      bool r = false;
      for (const Expr& a : n.args) r = as_bool(eval(a, ctx)) || r;
      return bool_value(r);
    }
    case Op::lnot:
      return bool_value(!as_bool(eval(n.args[0], ctx)));
    case Op::implies: {
      bool a = as_bool(eval(n.args[0], ctx));
      bool b = as_bool(eval(n.args[1], ctx));
      return bool_value(!a || b);
    }
    case Op::exists:
    case Op::forall: {
      const bool is_exists = n.op == Op::exists;
      bool r = !is_exists;
      for (std::int64_t i = n.lo; i <= n.hi; ++i) {
        ctx.loops[n.value] = i;
        bool b = as_bool(eval(n.args[0], ctx));
        r = is_exists ? (r || b) : (r && b);
      }
      ctx.loops.erase(n.value);
      return bool_value(r);
    }
    case Op::bool2int:
      return int_value(as_bool(eval(n.args[0], ctx)) ? 1 : 0);
  }
  throw EvalError("unknown expression node");
}

Expr rebuild(const Expr& e, std::vector<Expr> args) {
  ExprNode n = e.node();
  n.args = std::move(args);
  return make(std::move(n));
}

Expr flatten_rec(const Expr& e, std::map<std::int64_t, std::int64_t>& loops) {
  const ExprNode& n = e.node();
  switch (n.op) {
    case Op::loop: {
      auto it = loops.find(n.value);
      if (it == loops.end()) throw ModelError("unbound comprehension index");
      return ex::lit(it->second);
    }
    case Op::at: {
      Expr idx = simplify(flatten_rec(n.args[0], loops));
      if (idx.op() != Op::int_lit) throw ModelError("array index of " + n.array->name + " is not constant");
      std::int64_t i = idx.value();
      if (i < n.array->lo || i > n.array->hi())
        throw ModelError("array index " + std::to_string(i) + " out of range for " + n.array->name);
      return ex::var(n.array->elements[static_cast<std::size_t>(i - n.array->lo)], n.array->boolean);
    }
    case Op::sum:
    case Op::exists:
    case Op::forall: {
      std::vector<Expr> parts;
      for (std::int64_t i = n.lo; i <= n.hi; ++i) {
        loops[n.value] = i;
        parts.push_back(flatten_rec(n.args[0], loops));
      }
      loops.erase(n.value);
      if (n.op == Op::sum) return ex::add(std::move(parts));
      if (n.op == Op::exists) return ex::disj(std::move(parts));
      return ex::conj(std::move(parts));
    }
    default: {
      std::vector<Expr> args;
      args.reserve(n.args.size());
      for (const Expr& a : n.args) args.push_back(flatten_rec(a, loops));
      return rebuild(e, std::move(args));
    }
  }
}

Expr substitute_rec(const Expr& e, const Valuation& solution) {
  if (e.op() == Op::sol) {
    Value v = evaluate(e.arg(0), solution);
    return v.type == Type::boolean ? ex::boolean(v.v != 0) : ex::lit(v.v);
  }
  if (e.args().empty()) return e;
  std::vector<Expr> args;
  args.reserve(e.args().size());
  for (const Expr& a : e.args()) args.push_back(substitute_rec(a, solution));
  return rebuild(e, std::move(args));
}

bool is_int_lit(const Expr& e) { return e.op() == Op::int_lit; }
bool is_bool_lit(const Expr& e, bool value) {
  return e.op() == Op::bool_lit && (e.value() != 0) == value;
}

std::string op_symbol(Op op) {
  switch (op) {
    case Op::lt: return "<";
    case Op::le: return "<=";
    case Op::eq: return "=";
    case Op::ne: return "!=";
    case Op::ge: return ">=";
    case Op::gt: return ">";
    case Op::land: return " /\\ ";
    case Op::lor: return " \\/ ";
    case Op::implies: return "->";
    default: return "?";
  }
}

void print(std::ostream& os, const Expr& e, const Instance* names) {
  const ExprNode& n = e.node();
  auto join = [&](const char* sep) {
    for (std::size_t i = 0; i < n.args.size(); ++i) {
      if (i) os << sep;
      print(os, n.args[i], names);
    }
  };
  switch (n.op) {
    case Op::int_lit: os << n.value; return;
    case Op::bool_lit: os << (n.value ? "true" : "false"); return;
    case Op::var:
      if (names && static_cast<std::size_t>(n.value) < names->size())
        os << names->vars()[static_cast<std::size_t>(n.value)].name;
      else
        os << "v" << n.value;
      return;
    case Op::sol: os << "sol("; print(os, n.args[0], names); os << ")"; return;
    case Op::loop: os << "i" << n.value; return;
    case Op::at: os << n.array->name << "["; print(os, n.args[0], names); os << "]"; return;
    case Op::add: os << "("; join(" + "); os << ")"; return;
    case Op::sub: os << "("; join(" - "); os << ")"; return;
    case Op::mul: os << n.value << "*"; print(os, n.args[0], names); return;
    case Op::neg: os << "-("; print(os, n.args[0], names); os << ")"; return;
    case Op::bool2int: os << "bool2int("; print(os, n.args[0], names); os << ")"; return;
    case Op::lnot: os << "not ("; print(os, n.args[0], names); os << ")"; return;
    case Op::sum:
    case Op::exists:
    case Op::forall:
      os << (n.op == Op::sum ? "sum" : n.op == Op::exists ? "exists" : "forall") << "(i" << n.value
         << " in " << n.lo << ".." << n.hi << ")(";
      print(os, n.args[0], names);
      os << ")";
      return;
    case Op::land:
    case Op::lor:
      if (n.args.empty()) {
        os << (n.op == Op::land ? "true" : "false");
        return;
      }
      os << "(";
      join(op_symbol(n.op).c_str());
      os << ")";
      return;
    default:
      os << "(";
      print(os, n.args[0], names);
      os << " " << op_symbol(n.op) << " ";
      print(os, n.args[1], names);
      os << ")";
      return;
  }
}

}  // namespace

Expr::Expr() : node_(std::make_shared<const ExprNode>()) {}

namespace ex {

Expr lit(std::int64_t v) {
  ExprNode n;
  n.op = Op::int_lit;
  n.value = v;
  return make(std::move(n));
}

Expr boolean(bool b) {
  ExprNode n;
  n.op = Op::bool_lit;
  n.value = b ? 1 : 0;
  return make(std::move(n));
}

Expr var(VarId id, bool is_boolean) {
  ExprNode n;
  n.op = Op::var;
  n.value = id.index;
  n.boolean_var = is_boolean;
  return make(std::move(n));
}

Expr sol(Expr e) { return make_op(Op::sol, {std::move(e)}); }

Expr loop(std::int64_t slot) { return make_op(Op::loop, {}, slot); }

Expr at(std::shared_ptr<const ArrayDecl> array, Expr index) {
  ExprNode n;
  n.op = Op::at;
  n.array = std::move(array);
  n.args = {std::move(index)};
  return make(std::move(n));
}

Expr add(std::vector<Expr> terms) { return make_op(Op::add, std::move(terms)); }
Expr sub(Expr a, Expr b) { return make_op(Op::sub, {std::move(a), std::move(b)}); }
Expr mul(std::int64_t coefficient, Expr e) { return make_op(Op::mul, {std::move(e)}, coefficient); }
Expr neg(Expr e) { return make_op(Op::neg, {std::move(e)}); }

Expr cmp(Op op, Expr a, Expr b) {
  if (!is_comparison(op)) throw ModelError("not a comparison operator");
  return make_op(op, {std::move(a), std::move(b)});
}

Expr lt(Expr a, Expr b) { return cmp(Op::lt, std::move(a), std::move(b)); }
Expr le(Expr a, Expr b) { return cmp(Op::le, std::move(a), std::move(b)); }
Expr eq(Expr a, Expr b) { return cmp(Op::eq, std::move(a), std::move(b)); }
Expr ne(Expr a, Expr b) { return cmp(Op::ne, std::move(a), std::move(b)); }
Expr ge(Expr a, Expr b) { return cmp(Op::ge, std::move(a), std::move(b)); }
Expr gt(Expr a, Expr b) { return cmp(Op::gt, std::move(a), std::move(b)); }
Expr conj(std::vector<Expr> parts) { return make_op(Op::land, std::move(parts)); }
Expr disj(std::vector<Expr> parts) { return make_op(Op::lor, std::move(parts)); }
Expr lnot(Expr e) { return make_op(Op::lnot, {std::move(e)}); }
Expr implies(Expr a, Expr b) { return make_op(Op::implies, {std::move(a), std::move(b)}); }
Expr bool2int(Expr e) { return make_op(Op::bool2int, {std::move(e)}); }

Expr sum_over(std::int64_t slot, std::int64_t lo, std::int64_t hi, Expr body) {
  return make_range(Op::sum, slot, lo, hi, std::move(body));
}
Expr exists_over(std::int64_t slot, std::int64_t lo, std::int64_t hi, Expr body) {
  return make_range(Op::exists, slot, lo, hi, std::move(body));
}
Expr forall_over(std::int64_t slot, std::int64_t lo, std::int64_t hi, Expr body) {
  return make_range(Op::forall, slot, lo, hi, std::move(body));
}

}  // namespace ex

Expr operator+(const Expr& a, const Expr& b) { return ex::add({a, b}); }
Expr operator+(const Expr& a, std::int64_t b) { return ex::add({a, ex::lit(b)}); }
Expr operator-(const Expr& a, const Expr& b) { return ex::sub(a, b); }
Expr operator-(const Expr& a, std::int64_t b) { return ex::sub(a, ex::lit(b)); }
Expr operator-(const Expr& a) { return ex::neg(a); }
Expr operator*(std::int64_t k, const Expr& e) { return ex::mul(k, e); }
Expr operator<(const Expr& a, const Expr& b) { return ex::lt(a, b); }
Expr operator<(const Expr& a, std::int64_t b) { return ex::lt(a, ex::lit(b)); }
Expr operator<=(const Expr& a, const Expr& b) { return ex::le(a, b); }
Expr operator<=(const Expr& a, std::int64_t b) { return ex::le(a, ex::lit(b)); }
Expr operator>(const Expr& a, const Expr& b) { return ex::gt(a, b); }
Expr operator>(const Expr& a, std::int64_t b) { return ex::gt(a, ex::lit(b)); }
Expr operator>=(const Expr& a, const Expr& b) { return ex::ge(a, b); }
Expr operator>=(const Expr& a, std::int64_t b) { return ex::ge(a, ex::lit(b)); }
Expr operator&&(const Expr& a, const Expr& b) { return ex::conj({a, b}); }
Expr operator||(const Expr& a, const Expr& b) { return ex::disj({a, b}); }
Expr operator!(const Expr& e) { return ex::lnot(e); }

Value evaluate(const Expr& expr, const Valuation& point, const Valuation* sol_binding) {
  EvalContext ctx{&point, sol_binding, {}};
  return eval(expr, ctx);
}

bool holds(const Expr& expr, const Valuation& point, const Valuation* sol_binding) {
  return as_bool(evaluate(expr, point, sol_binding));
}

std::int64_t evaluate_int(const Expr& expr, const Valuation& point, const Valuation* sol_binding) {
  return evaluate(expr, point, sol_binding).v;
}

Type type_of(const Expr& expr) {
  const ExprNode& n = expr.node();
  auto need_bool = [](const Expr& e) {
    if (type_of(e) != Type::boolean) throw ModelError("type error: expected a boolean expression");
  };
  auto need_value = [](const Expr& e) { type_of(e); };
  switch (n.op) {
    case Op::int_lit:
    case Op::loop:
      return Type::integer;
    case Op::bool_lit:
      return Type::boolean;
    case Op::var:
      return n.boolean_var ? Type::boolean : Type::integer;
    case Op::sol:
      return type_of(n.args[0]);
    case Op::at:
      if (type_of(n.args[0]) != Type::integer) throw ModelError("type error: boolean array index");
      return n.array->boolean ? Type::boolean : Type::integer;
    case Op::add:
    case Op::sub:
    case Op::mul:
    case Op::neg:
    case Op::sum:
      for (const Expr& a : n.args) need_value(a);
      return Type::integer;
    case Op::lt:
    case Op::le:
    case Op::eq:
    case Op::ne:
    case Op::ge:
    case Op::gt:
      for (const Expr& a : n.args) need_value(a);
      return Type::boolean;
    case Op::land:
    case Op::lor:
    case Op::lnot:
    case Op::implies:
    case Op::exists:
    case Op::forall:
      for (const Expr& a : n.args) need_bool(a);
      return Type::boolean;
    case Op::bool2int:
      need_bool(n.args[0]);
      return Type::integer;
  }
  throw ModelError("unknown expression node");
}

bool contains_sol(const Expr& expr) {
  if (expr.op() == Op::sol) return true;
  return std::any_of(expr.args().begin(), expr.args().end(), [](const Expr& a) { return contains_sol(a); });
}

std::vector<VarId> collect_vars(const Expr& expr) {
  std::vector<VarId> out;
  auto walk = [&out](const auto& self, const Expr& e) -> void {
    if (e.op() == Op::var) out.push_back(VarId{static_cast<std::uint32_t>(e.value())});
    if (e.op() == Op::at)
      for (VarId v : e.node().array->elements) out.push_back(v);
    for (const Expr& a : e.args()) self(self, a);
  };
  walk(walk, expr);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool structurally_equal(const Expr& a, const Expr& b) {
  const ExprNode& x = a.node();
  const ExprNode& y = b.node();
  if (x.op != y.op || x.value != y.value || x.boolean_var != y.boolean_var) return false;
  if (x.op == Op::sum || x.op == Op::exists || x.op == Op::forall) {
    if (x.lo != y.lo || x.hi != y.hi) return false;
  }
  if (x.op == Op::at) {
    if (x.array->name != y.array->name || x.array->lo != y.array->lo ||
        x.array->elements != y.array->elements)
      return false;
  }
  if (x.args.size() != y.args.size()) return false;
  for (std::size_t i = 0; i < x.args.size(); ++i)
    if (!structurally_equal(x.args[i], y.args[i])) return false;
  return true;
}

Expr flatten(const Expr& expr) {
  std::map<std::int64_t, std::int64_t> loops;
  return simplify(flatten_rec(expr, loops));
}

Expr simplify(const Expr& expr) {
  const ExprNode& n = expr.node();
  std::vector<Expr> args;
  args.reserve(n.args.size());
  for (const Expr& a : n.args) args.push_back(simplify(a));

  switch (n.op) {
    case Op::add: {
      std::int64_t constant = 0;
      std::vector<Expr> terms;
      for (Expr& a : args) {
        if (is_int_lit(a)) {
          constant = checked_add(constant, a.value());
        } else if (a.op() == Op::add) {
          for (const Expr& t : a.args()) {
            if (is_int_lit(t))
              constant = checked_add(constant, t.value());
            else
              terms.push_back(t);
          }
        } else {
          terms.push_back(std::move(a));
        }
      }
      if (terms.empty()) return ex::lit(constant);
      if (constant != 0) terms.push_back(ex::lit(constant));
      if (terms.size() == 1) return terms.front();
      return ex::add(std::move(terms));
    }
    case Op::sub:
      if (is_int_lit(args[0]) && is_int_lit(args[1]))
        return ex::lit(checked_sub(args[0].value(), args[1].value()));
      if (is_int_lit(args[1]) && args[1].value() == 0) return args[0];
      break;
    case Op::mul:
      if (n.value == 0) return ex::lit(0);
      if (is_int_lit(args[0])) return ex::lit(checked_mul(n.value, args[0].value()));
      if (n.value == 1) return args[0];
      break;
    case Op::neg:
      if (is_int_lit(args[0])) return ex::lit(checked_sub(0, args[0].value()));
      break;
    case Op::bool2int:
      if (args[0].op() == Op::bool_lit) return ex::lit(args[0].value());
      break;
    case Op::lt:
    case Op::le:
    case Op::eq:
    case Op::ne:
    case Op::ge:
    case Op::gt: {
      auto literal = [](const Expr& e) { return e.op() == Op::int_lit || e.op() == Op::bool_lit; };
      if (literal(args[0]) && literal(args[1]))
        return ex::boolean(compare(n.op, args[0].value(), args[1].value()));
      break;
    }
    case Op::land:
    case Op::lor: {
      const bool is_and = n.op == Op::land;
      std::vector<Expr> kept;
      for (Expr& a : args) {
        if (is_bool_lit(a, !is_and)) return ex::boolean(!is_and);
        if (is_bool_lit(a, is_and)) continue;
        if (a.op() == n.op) {
          for (const Expr& inner : a.args()) kept.push_back(inner);
        } else {
          kept.push_back(std::move(a));
        }
      }
      if (kept.empty()) return ex::boolean(is_and);
      if (kept.size() == 1) return kept.front();
      return is_and ? ex::conj(std::move(kept)) : ex::disj(std::move(kept));
    }
    case Op::lnot:
      if (args[0].op() == Op::bool_lit) return ex::boolean(args[0].value() == 0);
      if (args[0].op() == Op::lnot) return args[0].arg(0);
      break;
    case Op::implies:
      if (is_bool_lit(args[0], true)) return args[1];
      if (is_bool_lit(args[0], false) || is_bool_lit(args[1], true)) return ex::boolean(true);
      if (is_bool_lit(args[1], false)) return simplify(ex::lnot(args[0]));
      break;
    default:
      break;
  }
  if (args.empty()) return expr;
  return rebuild(expr, std::move(args));
}

Expr substitute_sol(const Expr& expr, const Valuation& solution) {
  return simplify(substitute_rec(flatten(expr), solution));
}

std::string to_string(const Expr& expr, const Instance* names) {
  std::ostringstream os;
  print(os, expr, names);
  return os.str();
}

}  // namespace cdp
