#include "cdp/dsl.hpp"

namespace cdp::dsl {

namespace {

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  ModelAst model() {
    ModelAst ast;
    bool seen_nogood = false;
    bool seen_solve = false;
    while (!at_end()) {
      Item item = parse_item();
      if (item.kind == ItemKind::dominance) {
        if (seen_nogood) throw ParseError(item.line, item.column, "duplicate dominance_nogood");
        seen_nogood = true;
      }
      if (item.kind == ItemKind::solve) {
        if (seen_solve) throw ParseError(item.line, item.column, "duplicate solve item");
        seen_solve = true;
      }
      ast.items.push_back(std::move(item));
    }
    return ast;
  }

  NodePtr lone_expression() {
    NodePtr e = expr();
    if (!at_end()) fail(peek(), "unexpected '" + peek().text + "' after expression");
    return e;
  }

  void allow_sol() { in_nogood_ = true; }

 private:
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  bool at_end() const { return peek().kind == TokenKind::end; }
  const Token& take() {
    const Token& t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  bool is(const char* text, std::size_t k = 0) const {
    const Token& t = peek(k);
    return (t.kind == TokenKind::punct || t.kind == TokenKind::ident) && t.text == text;
  }
  bool accept(const char* text) {
    if (!is(text)) return false;
    take();
    return true;
  }
  [[noreturn]] static void fail(const Token& t, const std::string& msg) {
    throw ParseError(t.line, t.column, msg);
  }
  const Token& expect(const char* text) {
    if (!is(text)) {
      const Token& t = peek();
      fail(t, std::string("expected '") + text + "' but found " + (t.kind == TokenKind::end ? "end of input" : "'" + t.text + "'"));
    }
    return take();
  }
  std::string ident() {
    const Token& t = peek();
    if (t.kind != TokenKind::ident) fail(t, "expected an identifier");
    return take().text;
  }

  static std::shared_ptr<Node> make(NodeKind kind, const Token& at, std::string text = {}, std::vector<NodePtr> args = {}) {
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->text = std::move(text);
    n->args = std::move(args);
    n->line = at.line;
    n->column = at.column;
    return n;
  }

  // ---- items

  Item parse_item() {
    const Token& first = peek();
    Item item;
    item.line = first.line;
    item.column = first.column;
    if (first.kind != TokenKind::ident) fail(first, "expected an item, found '" + first.text + "'");
    const std::string kw = first.text;
    if (kw == "constraint") {
      take();
      item.kind = ItemKind::constraint;
      item.expr = expr();
    } else if (kw == "dominance_nogood" || kw == "dominance_nogood_with_equivalence") {
      take();
      item.kind = ItemKind::dominance;
      item.with_equivalence = kw == "dominance_nogood_with_equivalence";
      in_nogood_ = true;
      item.expr = expr();
      in_nogood_ = false;
    } else if (kw == "solve") {
      take();
      item.kind = ItemKind::solve;
      if (accept("satisfy")) {
        item.solve = SolveKind::satisfy;
      } else if (accept("search")) {
        expect("dominance_search");
        item.solve = SolveKind::dominance_search;
      } else if (accept("minimize")) {
        item.solve = SolveKind::minimize;
        item.expr = expr();
      } else if (accept("maximize")) {
        item.solve = SolveKind::maximize;
        item.expr = expr();
      } else {
        fail(peek(), "expected satisfy, search dominance_search, minimize or maximize");
      }
    } else if (kw == "output") {
      take();
      item.kind = ItemKind::output;
      item.raw = balanced_until_semicolon();
    } else if (kw == "array") {
      take();
      item.kind = ItemKind::array_decl;
      expect("[");
      if (is("int")) fail(peek(), "array index set must be a constant range l..u");
      item.index_lo = additive();
      expect("..");
      item.index_hi = additive();
      expect("]");
      expect("of");
      item.type = type_inst();
      expect(":");
      item.name = ident();
      if (accept("=")) item.expr = expr();
    } else if (kw == "var" || kw == "par" || kw == "int" || kw == "bool") {
      item.type = type_inst();
      expect(":");
      item.name = ident();
      item.kind = item.type.is_var ? ItemKind::var_decl : ItemKind::par_decl;
      if (accept("=")) {
        item.expr = expr();
      } else if (!item.type.is_var) {
        fail(peek(), "parameter " + item.name + " needs a value");
      }
    } else {
      fail(first, "unknown item '" + kw + "'");
    }
    expect(";");
    return item;
  }

  TypeInst type_inst() {
    TypeInst t;
    if (accept("var")) {
      t.is_var = true;
    } else {
      accept("par");
    }
    if (accept("bool")) {
      t.base = BaseType::boolean;
    } else if (accept("int")) {
      t.base = BaseType::integer;
    } else if (is("{")) {
      take();
      t.base = BaseType::set;
      if (!is("}")) {
        do {
          t.elements.push_back(additive());
        } while (accept(","));
      }
      expect("}");
    } else {
      t.base = BaseType::range;
      t.lo = additive();
      expect("..");
      t.hi = additive();
    }
    return t;
  }

  std::string balanced_until_semicolon() {
    std::string raw;
    int depth = 0;
    while (!at_end()) {
      if (depth == 0 && is(";")) break;
      const Token& t = take();
      if (t.text == "[" || t.text == "(" || t.text == "{") ++depth;
      if (t.text == "]" || t.text == ")" || t.text == "}") --depth;
      if (depth < 0) fail(t, "unbalanced '" + t.text + "'");
      if (!raw.empty()) raw += ' ';
      raw += t.text;
    }
    return raw;
  }

  // ---- expressions

  NodePtr expr() { return implication(); }

  NodePtr implication() {
    NodePtr lhs = disjunction();
    if (is("->") || is("<-") || is("<->")) {
      const Token& op = take();
      NodePtr rhs = implication();
      return make(NodeKind::binary, op, op.text, {lhs, rhs});
    }
    return lhs;
  }

  NodePtr disjunction() {
    NodePtr lhs = conjunction();
    while (is("\\/")) {
      const Token& op = take();
      lhs = make(NodeKind::binary, op, op.text, {lhs, conjunction()});
    }
    return lhs;
  }

  NodePtr conjunction() {
    NodePtr lhs = negation();
    while (is("/\\")) {
      const Token& op = take();
      lhs = make(NodeKind::binary, op, op.text, {lhs, negation()});
    }
    return lhs;
  }

  NodePtr negation() {
    if (is("not")) {
      const Token& op = take();
      return make(NodeKind::unary, op, "not", {negation()});
    }
    return comparison();
  }

  NodePtr comparison() {
    NodePtr lhs = additive();
    for (const char* rel : {"<", "<=", "=", "==", "!=", ">=", ">"}) {
      if (is(rel)) {
        const Token& op = take();
        std::string text = op.text == "==" ? "=" : op.text;
        return make(NodeKind::binary, op, text, {lhs, additive()});
      }
    }
    return lhs;
  }

  NodePtr additive() {
    NodePtr lhs = multiplicative();
    while (is("+") || is("-")) {
      const Token& op = take();
      lhs = make(NodeKind::binary, op, op.text, {lhs, multiplicative()});
    }
    return lhs;
  }

  NodePtr multiplicative() {
    NodePtr lhs = unary();
    while (is("*")) {
      const Token& op = take();
      lhs = make(NodeKind::binary, op, "*", {lhs, unary()});
    }
    return lhs;
  }

  NodePtr unary() {
    if (is("-")) {
      const Token& op = take();
      return make(NodeKind::unary, op, "-", {unary()});
    }
    return primary();
  }

  bool comprehension_ahead() const {
    // name ( ident in ...   or   name ( ident , ident in ...
    std::size_t k = 1;
    while (peek(k).kind == TokenKind::ident) {
      if (peek(k + 1).kind == TokenKind::ident && peek(k + 1).text == "in") return true;
      if (!(peek(k + 1).kind == TokenKind::punct && peek(k + 1).text == ",")) return false;
      k += 2;
    }
    return false;
  }

  NodePtr comprehension(const Token& name) {
    expect("(");
    struct Gen {
      std::string var;
      NodePtr range;
      const Token* at;
    };
    std::vector<Gen> gens;
    do {
      std::vector<std::pair<std::string, const Token*>> names;
      do {
        const Token& at = peek();
        names.emplace_back(ident(), &at);
      } while (accept(","));
      expect("in");
      NodePtr range = range_expr();
      for (auto& [v, at] : names) gens.push_back(Gen{v, range, at});
    } while (accept(","));
    expect(")");
    expect("(");
    NodePtr body = expr();
    expect(")");
    for (std::size_t g = gens.size(); g-- > 0;) {
      auto n = std::make_shared<Node>();
      n->kind = NodeKind::comprehension;
      n->text = name.text;
      n->loop_var = gens[g].var;
      n->args = {gens[g].range, body};
      n->line = name.line;
      n->column = name.column;
      body = n;
    }
    return body;
  }

  NodePtr range_expr() {
    NodePtr lo = additive();
    if (is("..")) {
      const Token& op = take();
      return make(NodeKind::range, op, "..", {lo, additive()});
    }
    return lo;
  }

  NodePtr primary() {
    const Token& t = peek();
    if (t.kind == TokenKind::integer) {
      take();
      auto n = std::make_shared<Node>();
      n->kind = NodeKind::int_lit;
      n->value = t.value;
      n->line = t.line;
      n->column = t.column;
      return n;
    }
    if (t.kind == TokenKind::punct && t.text == "(") {
      take();
      NodePtr e = expr();
      expect(")");
      return e;
    }
    if (t.kind == TokenKind::punct && t.text == "[") {
      const Token& open = take();
      std::vector<NodePtr> elems;
      if (!is("]")) {
        do {
          elems.push_back(expr());
        } while (accept(","));
      }
      expect("]");
      return make(NodeKind::array_lit, open, "", std::move(elems));
    }
    if (t.kind != TokenKind::ident) fail(t, t.kind == TokenKind::end ? "unexpected end of input" : "unexpected '" + t.text + "'");
    static const char* reserved[] = {"constraint", "solve", "output", "var", "par", "array", "of", "in", "not",
                                     "dominance_nogood", "dominance_nogood_with_equivalence"};
    for (const char* r : reserved)
      if (t.text == r) fail(t, "unexpected keyword '" + t.text + "'");
    const Token& name = take();
    if (name.text == "true" || name.text == "false") {
      auto n = make(NodeKind::bool_lit, name);
      n->value = name.text == "true";
      return n;
    }
    if (is("(")) {
      if ((name.text == "exists" || name.text == "forall" || name.text == "sum") && comprehension_ahead())
        return comprehension(name);
      if (name.text == "sol") {
        if (!in_nogood_) fail(name, "sol() may only appear in dominance_nogood");
        if (in_sol_) fail(name, "nested sol()");
        in_sol_ = true;
        expect("(");
        NodePtr inner = expr();
        expect(")");
        in_sol_ = false;
        return make(NodeKind::call, name, "sol", {inner});
      }
      take();
      std::vector<NodePtr> args;
      if (!is(")")) {
        do {
          args.push_back(expr());
        } while (accept(","));
      }
      expect(")");
      return make(NodeKind::call, name, name.text, std::move(args));
    }
    if (is("[")) {
      take();
      NodePtr idx = expr();
      expect("]");
      return make(NodeKind::index, name, name.text, {idx});
    }
    return make(NodeKind::ident, name, name.text);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  bool in_nogood_ = false;
  bool in_sol_ = false;
};

}  // namespace

ModelAst parse(std::string_view source) { return Parser(lex(source)).model(); }

namespace detail {

NodePtr parse_lone_expression(std::string_view text, bool allow_sol) {
  Parser p(lex(text));
  if (allow_sol) p.allow_sol();
  return p.lone_expression();
}

}  // namespace detail

}  // namespace cdp::dsl
