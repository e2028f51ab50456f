#include "cdp/dominance.hpp"

namespace cdp {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

std::vector<std::int64_t> project(const CpNetPreference& c, const Valuation& v) {
  std::vector<std::int64_t> out;
  out.reserve(c.mapping.size());
  for (VarId id : c.mapping) out.push_back(v[id]);
  return out;
}

std::vector<std::int64_t> values_of(const std::vector<Expr>& fs, const Valuation& v) {
  std::vector<std::int64_t> out;
  out.reserve(fs.size());
  for (const Expr& f : fs) out.push_back(evaluate_int(f, v));
  return out;
}

Expr boolean_var(VarId v) { return ex::var(v, true); }

// not(S ⪯ V): V is strictly better somewhere S cannot match.
Expr improves(const DominanceKind& kind, const Valuation& s) {
  return std::visit(
      overloaded{
          [&](const TotalOrder& t) { return ex::lt(t.objective, ex::lit(evaluate_int(t.objective, s))); },
          [&](const Lex& l) {
            // f1(V) < f1(S) \/ (f1(V) = f1(S) /\ (f2(V) < f2(S) \/ ...))
            Expr acc = ex::boolean(false);
            for (std::size_t i = l.objectives.size(); i-- > 0;) {
              const Expr& f = l.objectives[i];
              const Expr bound = ex::lit(evaluate_int(f, s));
              Expr better = ex::lt(f, bound);
              acc = i + 1 == l.objectives.size() ? better : ex::disj({better, ex::conj({ex::eq(f, bound), acc})});
            }
            return acc;
          },
          [&](const Pareto& p) {
            std::vector<Expr> parts;
            for (const Expr& f : p.objectives) parts.push_back(ex::lt(f, ex::lit(evaluate_int(f, s))));
            return parts.size() == 1 ? parts.front() : ex::disj(std::move(parts));
          },
          [&](const SubsetMin& m) {
            std::vector<Expr> parts;
            for (VarId v : m.vars)
              if (s[v] != 0) parts.push_back(ex::eq(boolean_var(v), ex::lit(0)));
            if (parts.empty()) return ex::boolean(false);
            return parts.size() == 1 ? parts.front() : ex::disj(std::move(parts));
          },
          [&](const SubsetMax& m) {
            std::vector<Expr> parts;
            for (VarId v : m.vars)
              if (s[v] == 0) parts.push_back(ex::eq(boolean_var(v), ex::lit(1)));
            if (parts.empty()) return ex::boolean(false);
            return parts.size() == 1 ? parts.front() : ex::disj(std::move(parts));
          },
          [&](const CpNetPreference& c) { return compile_local_nogood(*c.net, project(c, s), c.mapping); },
          [&](const CustomNogood& c) { return substitute_sol(c.nogood, s); },
      },
      kind);
}

// V ⪯ S.
Expr at_least_as_good(const DominanceKind& kind, const Valuation& s) {
  return std::visit(
      overloaded{
          [&](const TotalOrder& t) { return ex::le(t.objective, ex::lit(evaluate_int(t.objective, s))); },
          [&](const Lex& l) {
            Expr acc = ex::boolean(true);
            for (std::size_t i = l.objectives.size(); i-- > 0;) {
              const Expr& f = l.objectives[i];
              const Expr bound = ex::lit(evaluate_int(f, s));
              acc = i + 1 == l.objectives.size()
                        ? ex::le(f, bound)
                        : ex::disj({ex::lt(f, bound), ex::conj({ex::eq(f, bound), acc})});
            }
            return acc;
          },
          [&](const Pareto& p) {
            std::vector<Expr> parts;
            for (const Expr& f : p.objectives) parts.push_back(ex::le(f, ex::lit(evaluate_int(f, s))));
            return parts.size() == 1 ? parts.front() : ex::conj(std::move(parts));
          },
          [&](const SubsetMin& m) {
            std::vector<Expr> parts;
            for (VarId v : m.vars)
              if (s[v] == 0) parts.push_back(ex::eq(boolean_var(v), ex::lit(0)));
            if (parts.empty()) return ex::boolean(true);
            return parts.size() == 1 ? parts.front() : ex::conj(std::move(parts));
          },
          [&](const SubsetMax& m) {
            std::vector<Expr> parts;
            for (VarId v : m.vars)
              if (s[v] != 0) parts.push_back(ex::eq(boolean_var(v), ex::lit(1)));
            if (parts.empty()) return ex::boolean(true);
            return parts.size() == 1 ? parts.front() : ex::conj(std::move(parts));
          },
          [&](const CpNetPreference& c) {
            // For distinct valuations the relations are asymmetric, so V ⪯ S
            // adds only V = S on top of the equivalence-free nogood.
            std::vector<Expr> same;
            for (VarId v : c.mapping) same.push_back(ex::eq(ex::var(v), ex::lit(s[v])));
            return ex::conj(std::move(same));
          },
          [&](const CustomNogood&) -> Expr { throw ModelError("custom nogoods have no relation"); },
      },
      kind);
}

void need_objective(const Expr& f, const Instance& instance) {
  if (contains_sol(f)) throw ModelError("objective must not contain sol()");
  if (type_of(f) != Type::integer) throw ModelError("objective must be an integer expression");
  for (VarId v : collect_vars(f))
    if (v.index >= instance.size()) throw ModelError("objective refers to an undeclared variable");
}

void need_booleans(const std::vector<VarId>& vars, const Instance& instance) {
  for (VarId v : vars) {
    if (v.index >= instance.size()) throw ModelError("subset variable is undeclared");
    if (!instance.var(v).domain.is_boolean())
      throw ModelError("subset variable " + instance.var(v).name + " is not boolean");
  }
}

}  // namespace

std::string kind_name(const DominanceSpec& spec) {
  static const char* names[] = {"total", "lex", "pareto", "subset-min", "subset-max", "cpnet", "custom"};
  return names[spec.kind.index()];
}

bool has_relation(const DominanceSpec& spec) { return !std::holds_alternative<CustomNogood>(spec.kind); }

void validate(const DominanceSpec& spec, const Instance& instance) {
  std::visit(overloaded{
                 [&](const TotalOrder& t) { need_objective(t.objective, instance); },
                 [&](const Lex& l) {
                   if (l.objectives.empty()) throw ModelError("lex needs at least one objective");
                   for (const Expr& f : l.objectives) need_objective(f, instance);
                 },
                 [&](const Pareto& p) {
                   if (p.objectives.empty()) throw ModelError("pareto needs at least one objective");
                   for (const Expr& f : p.objectives) need_objective(f, instance);
                 },
                 [&](const SubsetMin& m) { need_booleans(m.vars, instance); },
                 [&](const SubsetMax& m) { need_booleans(m.vars, instance); },
                 [&](const CpNetPreference& c) {
                   if (!c.net) throw ModelError("missing CP-net");
                   validate(*c.net);
                   if (c.mapping.size() != c.net->size())
                     throw ModelError("CP-net has " + std::to_string(c.net->size()) + " variables but " +
                                      std::to_string(c.mapping.size()) + " are mapped");
                   for (std::size_t i = 0; i < c.mapping.size(); ++i) {
                     const VarId v = c.mapping[i];
                     if (v.index >= instance.size()) throw ModelError("CP-net maps to an undeclared variable");
                     const Domain& d = instance.var(v).domain;
                     if (d.min() < 0 || d.max() >= c.net->vars[i].domain_size)
                       throw ModelError("domain of " + instance.var(v).name + " exceeds the CP-net values 0.." +
                                        std::to_string(c.net->vars[i].domain_size - 1));
                   }
                 },
                 [&](const CustomNogood& c) {
                   if (!contains_sol(c.nogood)) throw ModelError("dominance nogood must refer to sol()");
                   if (type_of(c.nogood) != Type::boolean) throw ModelError("dominance nogood must be boolean");
                   for (VarId v : collect_vars(c.nogood))
                     if (v.index >= instance.size()) throw ModelError("nogood refers to an undeclared variable");
                 },
             },
             spec.kind);
}

bool leq(const DominanceSpec& spec, const Valuation& x, const Valuation& y) {
  return std::visit(
      overloaded{
          [&](const TotalOrder& t) { return evaluate_int(t.objective, x) <= evaluate_int(t.objective, y); },
          [&](const Lex& l) { return values_of(l.objectives, x) <= values_of(l.objectives, y); },
          [&](const Pareto& p) {
            for (const Expr& f : p.objectives)
              if (evaluate_int(f, x) > evaluate_int(f, y)) return false;
            return true;
          },
          [&](const SubsetMin& m) {
            for (VarId v : m.vars)
              if (x[v] > y[v]) return false;
            return true;
          },
          [&](const SubsetMax& m) {
            for (VarId v : m.vars)
              if (x[v] < y[v]) return false;
            return true;
          },
          [&](const CpNetPreference& c) {
            const auto ox = project(c, x);
            const auto oy = project(c, y);
            return ox == oy || local_dominates(*c.net, ox, oy);
          },
          [&](const CustomNogood&) -> bool {
            throw ModelError("custom nogoods define no relation; use eval_nogood");
          },
      },
      spec.kind);
}

bool sim(const DominanceSpec& spec, const Valuation& x, const Valuation& y) {
  return leq(spec, x, y) && leq(spec, y, x);
}

bool strictly_dominates(const DominanceSpec& spec, const Valuation& x, const Valuation& y) {
  return leq(spec, x, y) && !leq(spec, y, x);
}

Expr compile_nogood(const DominanceSpec& spec, const Valuation& s) {
  Expr base = improves(spec.kind, s);
  if (spec.mode == NogoodMode::equivalence_free || std::holds_alternative<CustomNogood>(spec.kind))
    return simplify(base);
  return simplify(ex::disj({base, at_least_as_good(spec.kind, s)}));
}

bool eval_nogood(const DominanceSpec& spec, const Valuation& s, const Valuation& point) {
  if (const auto* c = std::get_if<CustomNogood>(&spec.kind)) return holds(c->nogood, point, &s);
  return holds(compile_nogood(spec, s), point);
}

}  // namespace cdp
