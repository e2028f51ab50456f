#include "cdp/dsl.hpp"

namespace cdp::dsl {

namespace {

std::string join(const std::vector<NodePtr>& nodes) {
  std::string out;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (i) out += ", ";
    out += print(*nodes[i]);
  }
  return out;
}

std::string type_text(const TypeInst& t) {
  std::string out = t.is_var ? "var " : "";
  switch (t.base) {
    case BaseType::boolean: return out + "bool";
    case BaseType::integer: return out + "int";
    case BaseType::range: return out + print(*t.lo) + ".." + print(*t.hi);
    case BaseType::set: return out + "{" + join(t.elements) + "}";
  }
  return out;
}

}  // namespace

std::string print(const Node& n) {
  switch (n.kind) {
    case NodeKind::int_lit:
      return std::to_string(n.value);
    case NodeKind::bool_lit:
      return n.value ? "true" : "false";
    case NodeKind::ident:
      return n.text;
    case NodeKind::index:
      return n.text + "[" + print(*n.args[0]) + "]";
    case NodeKind::call:
      return n.text + "(" + join(n.args) + ")";
    case NodeKind::comprehension:
      return n.text + "(" + n.loop_var + " in " + print(*n.args[0]) + ")(" + print(*n.args[1]) + ")";
    case NodeKind::range:
      return print(*n.args[0]) + ".." + print(*n.args[1]);
    case NodeKind::unary:
      return n.text == "not" ? "(not " + print(*n.args[0]) + ")" : "(-" + print(*n.args[0]) + ")";
    case NodeKind::binary:
      return "(" + print(*n.args[0]) + " " + n.text + " " + print(*n.args[1]) + ")";
    case NodeKind::array_lit:
      return "[" + join(n.args) + "]";
  }
  return {};
}

std::string print(const ModelAst& ast) {
  std::string out;
  for (const Item& item : ast.items) {
    switch (item.kind) {
      case ItemKind::par_decl:
      case ItemKind::var_decl:
        out += type_text(item.type) + ": " + item.name;
        if (item.expr) out += " = " + print(*item.expr);
        break;
      case ItemKind::array_decl:
        out += "array [" + print(*item.index_lo) + ".." + print(*item.index_hi) + "] of " + type_text(item.type) +
               ": " + item.name;
        if (item.expr) out += " = " + print(*item.expr);
        break;
      case ItemKind::constraint:
        out += "constraint " + print(*item.expr);
        break;
      case ItemKind::dominance:
        out += std::string(item.with_equivalence ? "dominance_nogood_with_equivalence " : "dominance_nogood ") +
               print(*item.expr);
        break;
      case ItemKind::solve:
        switch (item.solve) {
          case SolveKind::satisfy: out += "solve satisfy"; break;
          case SolveKind::dominance_search: out += "solve search dominance_search"; break;
          case SolveKind::minimize: out += "solve minimize " + print(*item.expr); break;
          case SolveKind::maximize: out += "solve maximize " + print(*item.expr); break;
        }
        break;
      case ItemKind::output:
        out += "output " + item.raw;
        break;
    }
    out += ";\n";
  }
  return out;
}

}  // namespace cdp::dsl
