#include <istream>
#include <ostream>

#include "cdp/json_io.hpp"

namespace cdp {

namespace {

const char* op_name(Op op) {
  switch (op) {
    case Op::sol: return "sol";
    case Op::loop: return "loop";
    case Op::at: return "at";
    case Op::add: return "add";
    case Op::sub: return "sub";
    case Op::mul: return "mul";
    case Op::sum: return "sum";
    case Op::neg: return "neg";
    case Op::lt: return "lt";
    case Op::le: return "le";
    case Op::eq: return "eq";
    case Op::ne: return "ne";
    case Op::ge: return "ge";
    case Op::gt: return "gt";
    case Op::land: return "and";
    case Op::lor: return "or";
    case Op::lnot: return "not";
    case Op::implies: return "implies";
    case Op::exists: return "exists";
    case Op::forall: return "forall";
    case Op::bool2int: return "bool2int";
    default: return "";
  }
}

Op op_from_name(const std::string& name) {
  static const Op all[] = {Op::sol, Op::loop, Op::at, Op::add, Op::sub, Op::mul, Op::sum,
                           Op::neg, Op::lt, Op::le, Op::eq, Op::ne, Op::ge, Op::gt,
                           Op::land, Op::lor, Op::lnot, Op::implies, Op::exists, Op::forall,
                           Op::bool2int};
  for (Op op : all)
    if (name == op_name(op)) return op;
  throw ModelError("unknown expression operator '" + name + "'");
}

Json domain_to_json(const Domain& d) {
  Json j;
  switch (d.kind()) {
    case Domain::Kind::boolean:
      j["kind"] = "bool";
      break;
    case Domain::Kind::interval:
      j["kind"] = "interval";
      j["lo"] = d.min();
      j["hi"] = d.max();
      break;
    case Domain::Kind::set:
      j["kind"] = "set";
      j["values"] = d.values();
      break;
  }
  return j;
}

Domain domain_from_json(const Json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "bool") return Domain::boolean();
  if (kind == "interval") return Domain::interval(j.at("lo").get<std::int64_t>(), j.at("hi").get<std::int64_t>());
  if (kind == "set") return Domain::set(j.at("values").get<std::vector<std::int64_t>>());
  throw ModelError("unknown domain kind '" + kind + "'");
}

}  // namespace

Json expr_to_json(const Expr& expr, const Instance& instance) {
  const ExprNode& n = expr.node();
  switch (n.op) {
    case Op::int_lit:
      return n.value;
    case Op::bool_lit:
      return n.value != 0;
    case Op::var:
      return Json{{"var", instance.var(VarId{static_cast<std::uint32_t>(n.value)}).name}};
    default:
      break;
  }
  Json j;
  j["op"] = op_name(n.op);
  if (n.op == Op::loop || n.op == Op::sum || n.op == Op::exists || n.op == Op::forall) j["slot"] = n.value;
  if (n.op == Op::sum || n.op == Op::exists || n.op == Op::forall) {
    j["lo"] = n.lo;
    j["hi"] = n.hi;
  }
  if (n.op == Op::mul) j["coef"] = n.value;
  if (n.op == Op::at) j["array"] = n.array->name;
  if (!n.args.empty()) {
    Json args = Json::array();
    for (const Expr& a : n.args) args.push_back(expr_to_json(a, instance));
    j["args"] = std::move(args);
  }
  return j;
}

Expr expr_from_json(const Json& j, const Instance& instance) {
  if (j.is_boolean()) return ex::boolean(j.get<bool>());
  if (j.is_number_integer()) return ex::lit(j.get<std::int64_t>());
  if (!j.is_object()) throw ModelError("malformed expression: " + j.dump());
  if (j.contains("var")) return instance.ref(j.at("var").get<std::string>());

  const Op op = op_from_name(j.at("op").get<std::string>());
  std::vector<Expr> args;
  if (j.contains("args"))
    for (const Json& a : j.at("args")) args.push_back(expr_from_json(a, instance));
  auto arg = [&](std::size_t i) -> Expr {
    if (i >= args.size()) throw ModelError("missing operand in " + j.dump());
    return args[i];
  };
  switch (op) {
    case Op::sol: return ex::sol(arg(0));
    case Op::loop: return ex::loop(j.at("slot").get<std::int64_t>());
    case Op::at: {
      auto array = instance.find_array(j.at("array").get<std::string>());
      if (!array) throw ModelError("unknown array " + j.at("array").dump());
      return ex::at(array, arg(0));
    }
    case Op::add: return ex::add(std::move(args));
    case Op::sub: return ex::sub(arg(0), arg(1));
    case Op::mul: return ex::mul(j.at("coef").get<std::int64_t>(), arg(0));
    case Op::neg: return ex::neg(arg(0));
    case Op::land: return ex::conj(std::move(args));
    case Op::lor: return ex::disj(std::move(args));
    case Op::lnot: return ex::lnot(arg(0));
    case Op::implies: return ex::implies(arg(0), arg(1));
    case Op::bool2int: return ex::bool2int(arg(0));
    case Op::sum:
    case Op::exists:
    case Op::forall: {
      const auto slot = j.at("slot").get<std::int64_t>();
      const auto lo = j.at("lo").get<std::int64_t>();
      const auto hi = j.at("hi").get<std::int64_t>();
      if (op == Op::sum) return ex::sum_over(slot, lo, hi, arg(0));
      if (op == Op::exists) return ex::exists_over(slot, lo, hi, arg(0));
      return ex::forall_over(slot, lo, hi, arg(0));
    }
    default:
      return ex::cmp(op, arg(0), arg(1));
  }
}

void write_instance(std::ostream& os, const Instance& instance) {
  auto lines = [&os](const char* key, const std::vector<Json>& items, bool last) {
    os << "\"" << key << "\":[";
    for (std::size_t i = 0; i < items.size(); ++i) os << (i ? ",\n" : "\n") << items[i].dump();
    os << (items.empty() ? "]" : "\n]") << (last ? "" : ",");
  };
  std::vector<Json> vars;
  for (const VarDecl& d : instance.vars()) vars.push_back(Json{{"name", d.name}, {"domain", domain_to_json(d.domain)}});
  std::vector<Json> arrays;
  for (const auto& a : instance.arrays()) {
    Json elems = Json::array();
    for (VarId v : a->elements) elems.push_back(instance.var(v).name);
    arrays.push_back(Json{{"name", a->name}, {"lo", a->lo}, {"elements", elems}});
  }
  std::vector<Json> constraints;
  for (const Expr& c : instance.constraints()) constraints.push_back(expr_to_json(c, instance));
  os << "{";
  lines("vars", vars, false);
  lines("arrays", arrays, false);
  lines("constraints", constraints, true);
  os << "}\n";
}

Instance read_instance(std::istream& is) {
  Json doc = Json::parse(is);
  Instance instance;
  for (const Json& v : doc.at("vars"))
    instance.add_var(v.at("name").get<std::string>(), domain_from_json(v.at("domain")));
  if (doc.contains("arrays")) {
    for (const Json& a : doc.at("arrays")) {
      std::vector<VarId> elems;
      for (const Json& e : a.at("elements")) {
        auto id = instance.find(e.get<std::string>());
        if (!id) throw ModelError("array element " + e.dump() + " is not a declared variable");
        elems.push_back(*id);
      }
      instance.add_array(a.at("name").get<std::string>(), a.at("lo").get<std::int64_t>(), std::move(elems));
    }
  }
  for (const Json& c : doc.at("constraints")) instance.add_constraint(expr_from_json(c, instance));
  return instance;
}

Json valuation_to_json(const Valuation& point, const Instance& instance) {
  Json assignment = Json::object();
  for (const VarDecl& d : instance.vars()) assignment[d.name] = point[d.id];
  return Json{{"assignment", assignment}};
}

Valuation valuation_from_json(const Json& j, const Instance& instance) {
  const Json& assignment = j.contains("assignment") ? j.at("assignment") : j;
  if (!assignment.is_object()) throw ModelError("valuation must be a JSON object");
  std::vector<std::int64_t> values(instance.size());
  std::vector<bool> seen(instance.size(), false);
  for (const auto& [name, value] : assignment.items()) {
    auto id = instance.find(name);
    if (!id) throw ModelError("valuation assigns unknown variable " + name);
    values[id->index] = value.is_boolean() ? (value.get<bool>() ? 1 : 0) : value.get<std::int64_t>();
    seen[id->index] = true;
  }
  for (std::size_t i = 0; i < seen.size(); ++i)
    if (!seen[i]) throw ModelError("valuation does not assign " + instance.vars()[i].name);
  return Valuation(std::move(values));
}

}  // namespace cdp
