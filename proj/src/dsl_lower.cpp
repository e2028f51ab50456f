#include <map>

#include "cdp/dsl.hpp"

namespace cdp::dsl {

namespace detail {
NodePtr parse_lone_expression(std::string_view text, bool allow_sol);
}

struct Symbol {
  enum class Kind { var, array, value, par_array };
  Kind kind = Kind::value;
  VarId var;
  std::shared_ptr<const ArrayDecl> array;
  Expr value;  // literal constant or alias expression
  std::int64_t par_lo = 1;
  std::vector<std::int64_t> par_values;
};

struct Scope {
  std::map<std::string, Symbol, std::less<>> symbols;
};

namespace {

[[noreturn]] void fail(const Node& at, const std::string& msg) { throw ParseError(at.line, at.column, msg); }

class Lowerer {
 public:
  Lowerer(Instance& inst, Scope& scope) : inst_(inst), scope_(scope) {}

  Expr lower(const Node& n) {
    try {
      return lower_rec(n);
    } catch (const ModelError& e) {
      fail(n, e.what());
    } catch (const EvalError& e) {
      fail(n, e.what());
    }
  }

  std::optional<std::int64_t> constant(const Node& n) {
    Expr e = simplify(lower(n));
    if (e.op() == Op::int_lit || e.op() == Op::bool_lit) return e.value();
    return std::nullopt;
  }

  std::int64_t need_constant(const Node& n, const char* what) {
    auto v = constant(n);
    if (!v) fail(n, std::string(what) + " must be a constant");
    return *v;
  }

  std::pair<std::int64_t, std::int64_t> range_of(const Node& n) {
    if (n.kind == NodeKind::range)
      return {need_constant(*n.args[0], "range bound"), need_constant(*n.args[1], "range bound")};
    if (n.kind == NodeKind::call && n.text == "index_set") {
      if (n.args.size() != 1 || n.args[0]->kind != NodeKind::ident) fail(n, "index_set expects an array name");
      const Symbol& s = lookup(*n.args[0]);
      if (s.kind == Symbol::Kind::array) return {s.array->lo, s.array->hi()};
      if (s.kind == Symbol::Kind::par_array)
        return {s.par_lo, s.par_lo + static_cast<std::int64_t>(s.par_values.size()) - 1};
      fail(n, n.args[0]->text + " is not an array");
    }
    fail(n, "expected a range l..u or index_set(array)");
  }

  const Symbol& lookup(const Node& n) const {
    auto it = scope_.symbols.find(n.text);
    if (it == scope_.symbols.end()) fail(n, "undeclared identifier '" + n.text + "'");
    return it->second;
  }

 private:
  std::vector<Expr> array_elements(const Node& arg) {
    bool under_sol = false;
    const Node* target = &arg;
    if (arg.kind == NodeKind::call && arg.text == "sol" && arg.args.size() == 1) {
      under_sol = true;
      target = arg.args[0].get();
    }
    if (target->kind != NodeKind::ident) return {};
    auto it = scope_.symbols.find(target->text);
    if (it == scope_.symbols.end()) return {};
    const Symbol& s = it->second;
    std::vector<Expr> out;
    if (s.kind == Symbol::Kind::array) {
      for (VarId v : s.array->elements) out.push_back(inst_.ref(v));
    } else if (s.kind == Symbol::Kind::par_array) {
      for (std::int64_t x : s.par_values) out.push_back(ex::lit(x));
    } else {
      return {};
    }
    if (under_sol)
      for (Expr& e : out) e = ex::sol(e);
    return out;
  }

  Expr lower_rec(const Node& n) {
    switch (n.kind) {
      case NodeKind::int_lit:
        return ex::lit(n.value);
      case NodeKind::bool_lit:
        return ex::boolean(n.value != 0);
      case NodeKind::ident: {
        auto loop = loops_.find(n.text);
        if (loop != loops_.end()) return ex::lit(loop->second);
        const Symbol& s = lookup(n);
        switch (s.kind) {
          case Symbol::Kind::var: return inst_.ref(s.var);
          case Symbol::Kind::value: return s.value;
          default: fail(n, "array '" + n.text + "' used as a scalar");
        }
      }
      case NodeKind::index: {
        if (loops_.count(n.text)) fail(n, "'" + n.text + "' is not an array");
        const Symbol& s = lookup(n);
        const std::int64_t i = need_constant(*n.args[0], "array index");
        if (s.kind == Symbol::Kind::array) {
          if (i < s.array->lo || i > s.array->hi())
            fail(n, "index " + std::to_string(i) + " out of range " + std::to_string(s.array->lo) + ".." +
                        std::to_string(s.array->hi()) + " of " + n.text);
          return inst_.ref(s.array->elements[static_cast<std::size_t>(i - s.array->lo)]);
        }
        if (s.kind == Symbol::Kind::par_array) {
          const auto off = i - s.par_lo;
          if (off < 0 || off >= static_cast<std::int64_t>(s.par_values.size()))
            fail(n, "index " + std::to_string(i) + " out of range of " + n.text);
          return ex::lit(s.par_values[static_cast<std::size_t>(off)]);
        }
        fail(n, "'" + n.text + "' is not an array");
      }
      case NodeKind::call: {
        if (n.text == "sol") return ex::sol(lower_rec(*n.args[0]));
        if (n.text == "bool2int") {
          if (n.args.size() != 1) fail(n, "bool2int expects one argument");
          return ex::bool2int(lower_rec(*n.args[0]));
        }
        if (n.text == "sum" || n.text == "exists" || n.text == "forall") {
          if (n.args.size() != 1) fail(n, n.text + " expects an array or a comprehension");
          std::vector<Expr> elems = array_elements(*n.args[0]);
          if (elems.empty() && !(n.args[0]->kind == NodeKind::ident)) fail(n, n.text + " expects an array");
          return combine(n.text, std::move(elems));
        }
        if (n.text == "index_set") fail(n, "index_set is only valid as a range");
        fail(n, "unknown function '" + n.text + "'");
      }
      case NodeKind::comprehension: {
        auto [lo, hi] = range_of(*n.args[0]);
        if (scope_.symbols.count(n.loop_var)) fail(n, "loop variable '" + n.loop_var + "' shadows a declaration");
        std::vector<Expr> parts;
        auto saved = loops_.find(n.loop_var) != loops_.end() ? std::optional(loops_[n.loop_var]) : std::nullopt;
        for (std::int64_t i = lo; i <= hi; ++i) {
          loops_[n.loop_var] = i;
          parts.push_back(lower_rec(*n.args[1]));
        }
        if (saved)
          loops_[n.loop_var] = *saved;
        else
          loops_.erase(n.loop_var);
        return combine(n.text, std::move(parts));
      }
      case NodeKind::range:
        fail(n, "a range is not a value");
      case NodeKind::unary:
        if (n.text == "not") return ex::lnot(lower_rec(*n.args[0]));
        return ex::neg(lower_rec(*n.args[0]));
      case NodeKind::binary: {
        const std::string& op = n.text;
        if (op == "*") {
          if (auto k = constant(*n.args[0])) return ex::mul(*k, lower_rec(*n.args[1]));
          if (auto k = constant(*n.args[1])) return ex::mul(*k, lower_rec(*n.args[0]));
          fail(n, "multiplication needs a constant factor");
        }
        Expr a = lower_rec(*n.args[0]);
        Expr b = lower_rec(*n.args[1]);
        if (op == "+") return ex::add({a, b});
        if (op == "-") return ex::sub(a, b);
        if (op == "<") return ex::lt(a, b);
        if (op == "<=") return ex::le(a, b);
        if (op == "=") return ex::eq(a, b);
        if (op == "!=") return ex::ne(a, b);
        if (op == ">=") return ex::ge(a, b);
        if (op == ">") return ex::gt(a, b);
        if (op == "/\\") return ex::conj({a, b});
        if (op == "\\/") return ex::disj({a, b});
        if (op == "->") return ex::implies(a, b);
        if (op == "<-") return ex::implies(b, a);
        if (op == "<->") return ex::conj({ex::implies(a, b), ex::implies(b, a)});
        fail(n, "unknown operator '" + op + "'");
      }
      case NodeKind::array_lit:
        fail(n, "array literal used as a scalar");
    }
    fail(n, "unsupported expression");
  }

  static Expr combine(const std::string& how, std::vector<Expr> parts) {
    if (how == "sum") {
      if (parts.empty()) return ex::lit(0);
      for (Expr& p : parts)
        if (type_of(p) == Type::boolean) p = ex::bool2int(p);
      return parts.size() == 1 ? parts.front() : ex::add(std::move(parts));
    }
    if (how == "exists") {
      if (parts.empty()) return ex::boolean(false);
      return parts.size() == 1 ? parts.front() : ex::disj(std::move(parts));
    }
    if (parts.empty()) return ex::boolean(true);
    return parts.size() == 1 ? parts.front() : ex::conj(std::move(parts));
  }

  Instance& inst_;
  Scope& scope_;
  std::map<std::string, std::int64_t> loops_;
};

Domain domain_of(Lowerer& lw, const Item& item) {
  const TypeInst& t = item.type;
  switch (t.base) {
    case BaseType::boolean:
      return Domain::boolean();
    case BaseType::range: {
      const std::int64_t lo = lw.need_constant(*t.lo, "domain bound");
      const std::int64_t hi = lw.need_constant(*t.hi, "domain bound");
      if (lo > hi) throw ParseError(item.line, item.column, "empty domain for " + item.name);
      return Domain::interval(lo, hi);
    }
    case BaseType::set: {
      std::vector<std::int64_t> vals;
      for (const NodePtr& e : t.elements) vals.push_back(lw.need_constant(*e, "set element"));
      if (vals.empty()) throw ParseError(item.line, item.column, "empty domain for " + item.name);
      return Domain::set(vals);
    }
    case BaseType::integer:
      break;
  }
  throw ParseError(item.line, item.column, "variable " + item.name + " needs a finite domain");
}

void declare(Scope& scope, const Item& item, Symbol s) {
  if (!scope.symbols.emplace(item.name, std::move(s)).second)
    throw ParseError(item.line, item.column, "duplicate declaration of '" + item.name + "'");
}

Expr checked(const Item& item, Expr e, Type want, const char* what) {
  try {
    e = flatten(e);
    if (type_of(e) != want)
      throw ParseError(item.line, item.column, std::string(what) + (want == Type::boolean ? " must be boolean" : " must be an integer expression"));
  } catch (const ModelError& err) {
    throw ParseError(item.line, item.column, err.what());
  }
  return e;
}

Scope scope_of(const Instance& inst) {
  Scope scope;
  for (const VarDecl& d : inst.vars()) {
    Symbol s;
    s.kind = Symbol::Kind::var;
    s.var = d.id;
    scope.symbols.emplace(d.name, s);
  }
  for (const auto& a : inst.arrays()) {
    Symbol s;
    s.kind = Symbol::Kind::array;
    s.array = a;
    scope.symbols.emplace(a->name, s);
  }
  return scope;
}

Expr lower_lone(std::string_view text, Instance& inst, Scope& scope) {
  NodePtr node = detail::parse_lone_expression(text, false);
  Lowerer lw(inst, scope);
  Expr e = lw.lower(*node);
  try {
    e = flatten(e);
    type_of(e);
  } catch (const ModelError& err) {
    throw ParseError(node->line, node->column, err.what());
  }
  return e;
}

}  // namespace

LoweredModel lower(const ModelAst& ast) {
  LoweredModel out;
  auto scope = std::make_shared<Scope>();
  Lowerer lw(out.instance, *scope);
  std::optional<Item> nogood_item;
  std::optional<Item> solve_item;

  for (const Item& item : ast.items) {
    switch (item.kind) {
      case ItemKind::par_decl: {
        if (item.type.base != BaseType::integer && item.type.base != BaseType::boolean)
          throw ParseError(item.line, item.column, "parameters must be int or bool");
        Symbol s;
        s.kind = Symbol::Kind::value;
        Expr v = checked(item, lw.lower(*item.expr), item.type.base == BaseType::boolean ? Type::boolean : Type::integer,
                         "initializer");
        if (contains_sol(v)) throw ParseError(item.line, item.column, "sol() in a declaration");
        s.value = v;
        declare(*scope, item, s);
        break;
      }
      case ItemKind::var_decl: {
        if (item.type.base == BaseType::integer) {
          // var int: f = e; names an expression
          if (!item.expr) throw ParseError(item.line, item.column, "variable " + item.name + " needs a finite domain");
          Symbol s;
          s.kind = Symbol::Kind::value;
          s.value = checked(item, lw.lower(*item.expr), Type::integer, "initializer");
          declare(*scope, item, s);
          break;
        }
        Domain d = domain_of(lw, item);
        if (scope->symbols.count(item.name))
          throw ParseError(item.line, item.column, "duplicate declaration of '" + item.name + "'");
        Symbol s;
        s.kind = Symbol::Kind::var;
        s.var = out.instance.add_var(item.name, d);
        declare(*scope, item, s);
        if (item.expr) {
          Expr rhs = lw.lower(*item.expr);
          out.instance.add_constraint(checked(item, ex::eq(out.instance.ref(s.var), rhs), Type::boolean, "initializer"));
        }
        break;
      }
      case ItemKind::array_decl: {
        const std::int64_t lo = lw.need_constant(*item.index_lo, "array bound");
        const std::int64_t hi = lw.need_constant(*item.index_hi, "array bound");
        if (hi < lo - 1) throw ParseError(item.line, item.column, "bad index range for " + item.name);
        if (scope->symbols.count(item.name))
          throw ParseError(item.line, item.column, "duplicate declaration of '" + item.name + "'");
        std::vector<const Node*> init;
        if (item.expr) {
          if (item.expr->kind != NodeKind::array_lit)
            throw ParseError(item.line, item.column, "array initializer must be a list [ ... ]");
          for (const NodePtr& e : item.expr->args) init.push_back(e.get());
          if (static_cast<std::int64_t>(init.size()) != hi - lo + 1)
            throw ParseError(item.line, item.column, "initializer of " + item.name + " has " +
                                                         std::to_string(init.size()) + " elements, expected " +
                                                         std::to_string(hi - lo + 1));
        }
        Symbol s;
        if (!item.type.is_var) {
          if (item.type.base != BaseType::integer) throw ParseError(item.line, item.column, "parameter arrays must be int");
          if (!item.expr) throw ParseError(item.line, item.column, "parameter array " + item.name + " needs a value");
          s.kind = Symbol::Kind::par_array;
          s.par_lo = lo;
          for (const Node* e : init) s.par_values.push_back(lw.need_constant(*e, "array element"));
          declare(*scope, item, s);
          break;
        }
        Domain d = domain_of(lw, item);
        std::vector<VarId> elems;
        for (std::int64_t i = lo; i <= hi; ++i)
          elems.push_back(out.instance.add_var(item.name + "[" + std::to_string(i) + "]", d));
        s.kind = Symbol::Kind::array;
        s.array = out.instance.add_array(item.name, lo, elems);
        declare(*scope, item, s);
        for (std::size_t k = 0; k < init.size(); ++k) {
          Expr rhs = lw.lower(*init[k]);
          out.instance.add_constraint(checked(item, ex::eq(out.instance.ref(elems[k]), rhs), Type::boolean, "initializer"));
        }
        break;
      }
      case ItemKind::constraint: {
        Expr c = checked(item, lw.lower(*item.expr), Type::boolean, "constraint");
        try {
          out.instance.add_constraint(c);
        } catch (const ModelError& e) {
          throw ParseError(item.line, item.column, e.what());
        }
        break;
      }
      case ItemKind::dominance: {
        Expr t = checked(item, lw.lower(*item.expr), Type::boolean, "dominance_nogood");
        if (!contains_sol(t)) throw ParseError(item.line, item.column, "dominance_nogood must refer to sol()");
        out.nogood_template = t;
        out.mode = item.with_equivalence ? NogoodMode::with_equivalence : NogoodMode::equivalence_free;
        nogood_item = item;
        break;
      }
      case ItemKind::solve: {
        if (item.solve == SolveKind::minimize || item.solve == SolveKind::maximize) {
          Expr f = checked(item, lw.lower(*item.expr), Type::integer, "objective");
          out.objective = item.solve == SolveKind::minimize ? f : simplify(ex::neg(f));
        }
        solve_item = item;
        break;
      }
      case ItemKind::output:
        break;
    }
  }
  if (nogood_item && out.objective)
    throw ParseError(solve_item->line, solve_item->column, "solve minimize/maximize cannot be combined with dominance_nogood");
  out.scope = std::move(scope);
  return out;
}

std::optional<DominanceSpec> model_spec(const LoweredModel& model) {
  if (model.nogood_template) return DominanceSpec{CustomNogood{*model.nogood_template}, model.mode};
  if (model.objective) return DominanceSpec{TotalOrder{*model.objective}, NogoodMode::equivalence_free};
  return std::nullopt;
}

Expr instantiate(const Expr& tmpl, const Valuation& s) {
  for (VarId v : collect_vars(tmpl))
    if (v.index >= s.size()) throw EvalError("sol() refers to a variable the solution does not assign");
  return substitute_sol(tmpl, s);
}

Expr parse_expression(std::string_view text, const LoweredModel& model) {
  Instance inst = model.instance;
  Scope scope = model.scope ? *model.scope : scope_of(inst);
  return lower_lone(text, inst, scope);
}

Expr parse_expression(std::string_view text, const Instance& instance) {
  Instance inst = instance;
  Scope scope = scope_of(inst);
  return lower_lone(text, inst, scope);
}

}  // namespace cdp::dsl
