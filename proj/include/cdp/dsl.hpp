#pragma once

// A small MiniZinc-like modeling language with dominance nogoods.
//
//   par int: n = 3;                      % constants; non-constant values are aliases
//   var bool: b;  var 1..5: x;  var {1,3,7}: y;
//   array [1..n] of var bool: B;
//   array [1..n] of int: w = [2, 1, 3];
//   constraint B[1] -> x > 2;
//   dominance_nogood exists(i in index_set(B))(sol(B[i]) < B[i]);
//   dominance_nogood_with_equivalence ...;
//   solve satisfy; | solve search dominance_search; | solve minimize e; | solve maximize e;
//   output [...];                        % parsed, ignored

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cdp/dominance.hpp"
#include "cdp/model.hpp"

namespace cdp::dsl {

enum class TokenKind { ident, integer, string, punct, end };

struct Token {
  TokenKind kind = TokenKind::end;
  std::string text;  // lexeme as written
  std::int64_t value = 0;
  std::size_t line = 1;
  std::size_t column = 1;
};

// Throws ParseError on an unknown character, an unterminated string or an
// integer literal that overflows.
std::vector<Token> lex(std::string_view source);

enum class NodeKind { int_lit, bool_lit, ident, index, call, comprehension, range, unary, binary, array_lit };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  NodeKind kind = NodeKind::int_lit;
  std::string text;  // identifier, operator, call or comprehension name
  std::int64_t value = 0;
  std::vector<NodePtr> args;  // comprehension: {range, body}; range: {lo, hi}
  std::string loop_var;
  std::size_t line = 0;
  std::size_t column = 0;
};

enum class BaseType { boolean, integer, range, set };

struct TypeInst {
  bool is_var = false;
  BaseType base = BaseType::integer;
  NodePtr lo;
  NodePtr hi;
  std::vector<NodePtr> elements;
};

enum class ItemKind { par_decl, var_decl, array_decl, constraint, dominance, solve, output };
enum class SolveKind { satisfy, dominance_search, minimize, maximize };

struct Item {
  ItemKind kind = ItemKind::constraint;
  std::size_t line = 0;
  std::size_t column = 0;
  std::string name;
  TypeInst type;
  NodePtr index_lo;  // arrays
  NodePtr index_hi;
  NodePtr expr;  // initializer, constraint, nogood or objective
  bool with_equivalence = false;
  SolveKind solve = SolveKind::satisfy;
  std::string raw;  // output items, as written
};

struct ModelAst {
  std::vector<Item> items;
};

// Throws ParseError with the position of the first error.
ModelAst parse(std::string_view source);

std::string print(const ModelAst& ast);
std::string print(const Node& node);

struct Scope;

struct LoweredModel {
  Instance instance;
  std::optional<Expr> nogood_template;  // contains sol()
  NogoodMode mode = NogoodMode::equivalence_free;
  std::optional<Expr> objective;  // minimized; maximize is stored negated
  std::shared_ptr<const Scope> scope;
};

// Flattens arrays and comprehensions and type-checks. Throws ParseError
// located at the offending item or expression.
LoweredModel lower(const ModelAst& ast);

inline LoweredModel load(std::string_view source) { return lower(parse(source)); }

// Dominance spec implied by the model: the nogood template, or a total
// order for solve minimize/maximize.
std::optional<DominanceSpec> model_spec(const LoweredModel& model);

// Replaces each sol(e) by its value in `s`. Throws EvalError when a sol()
// refers to a variable `s` does not cover.
Expr instantiate(const Expr& tmpl, const Valuation& s);

// Expression over the model's names (variables, arrays, constants, aliases).
Expr parse_expression(std::string_view text, const LoweredModel& model);
Expr parse_expression(std::string_view text, const Instance& instance);

}  // namespace cdp::dsl
