#pragma once

// Intermediate representation shared by every part of the toolkit:
// finite domains, variables, constraint expressions, instances and valuations.

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cdp/error.hpp"

namespace cdp {

struct VarId {
  std::uint32_t index = 0;
  auto operator<=>(const VarId&) const = default;
};

class Domain {
 public:
  enum class Kind { boolean, interval, set };

  static Domain boolean();
  static Domain interval(std::int64_t lo, std::int64_t hi);
  // Values are sorted and deduplicated; throws ModelError when empty.
  static Domain set(std::vector<std::int64_t> values);

  Kind kind() const { return kind_; }
  bool is_boolean() const { return kind_ == Kind::boolean; }
  std::int64_t min() const;
  std::int64_t max() const;
  std::uint64_t size() const;
  bool contains(std::int64_t v) const;
  std::vector<std::int64_t> values() const;

  bool operator==(const Domain&) const = default;

 private:
  Domain(Kind kind, std::int64_t lo, std::int64_t hi, std::vector<std::int64_t> values)
      : kind_(kind), lo_(lo), hi_(hi), values_(std::move(values)) {}

  Kind kind_;
  std::int64_t lo_;
  std::int64_t hi_;
  std::vector<std::int64_t> values_;  // only for Kind::set
};

struct VarDecl {
  VarId id;
  std::string name;
  Domain domain;
};

// A flat array of variables addressed by index lo, lo+1, ...
struct ArrayDecl {
  std::string name;
  std::int64_t lo = 1;
  std::vector<VarId> elements;
  bool boolean = false;

  std::int64_t hi() const { return lo + static_cast<std::int64_t>(elements.size()) - 1; }
};

// Total assignment, indexed by VarId.
class Valuation {
 public:
  Valuation() = default;
  explicit Valuation(std::vector<std::int64_t> values) : values_(std::move(values)) {}

  std::int64_t operator[](VarId v) const { return values_[v.index]; }
  std::int64_t& operator[](VarId v) { return values_[v.index]; }
  std::size_t size() const { return values_.size(); }
  const std::vector<std::int64_t>& values() const { return values_; }

  auto operator<=>(const Valuation&) const = default;

 private:
  std::vector<std::int64_t> values_;
};

struct ValuationHash {
  std::size_t operator()(const Valuation& v) const;
};

// ---------------------------------------------------------------------------
// Expressions

enum class Op : std::uint8_t {
  int_lit,
  bool_lit,
  var,
  sol,      // sol(e): e evaluated in the sol binding
  loop,     // comprehension index, value = slot
  at,       // array[index]
  add,
  sub,
  mul,      // constant coefficient (value) times args[0]
  sum,      // sum(i in lo..hi)(body)
  neg,
  lt,
  le,
  eq,
  ne,
  ge,
  gt,
  land,
  lor,
  lnot,
  implies,
  exists,   // exists(i in lo..hi)(body)
  forall,   // forall(i in lo..hi)(body)
  bool2int,
};

enum class Type { integer, boolean };

class Expr;

struct ExprNode {
  Op op = Op::int_lit;
  std::int64_t value = 0;  // literal, var index, coefficient or loop slot
  std::int64_t lo = 0;     // comprehension range
  std::int64_t hi = -1;
  bool boolean_var = false;
  std::shared_ptr<const ArrayDecl> array;
  std::vector<Expr> args;
};

class Expr {
 public:
  Expr();  // integer literal 0
  explicit Expr(std::shared_ptr<const ExprNode> node) : node_(std::move(node)) {}

  const ExprNode& node() const { return *node_; }
  Op op() const { return node_->op; }
  std::int64_t value() const { return node_->value; }
  const std::vector<Expr>& args() const { return node_->args; }
  const Expr& arg(std::size_t i) const { return node_->args[i]; }

 private:
  std::shared_ptr<const ExprNode> node_;
};

namespace ex {

Expr lit(std::int64_t v);
Expr boolean(bool b);
Expr var(VarId id, bool is_boolean = false);
Expr sol(Expr e);
Expr loop(std::int64_t slot);
Expr at(std::shared_ptr<const ArrayDecl> array, Expr index);
Expr add(std::vector<Expr> terms);
Expr sub(Expr a, Expr b);
Expr mul(std::int64_t coefficient, Expr e);
Expr neg(Expr e);
Expr cmp(Op op, Expr a, Expr b);
Expr lt(Expr a, Expr b);
Expr le(Expr a, Expr b);
Expr eq(Expr a, Expr b);
Expr ne(Expr a, Expr b);
Expr ge(Expr a, Expr b);
Expr gt(Expr a, Expr b);
Expr conj(std::vector<Expr> parts);
Expr disj(std::vector<Expr> parts);
Expr lnot(Expr e);
Expr implies(Expr a, Expr b);
Expr bool2int(Expr e);
Expr sum_over(std::int64_t slot, std::int64_t lo, std::int64_t hi, Expr body);
Expr exists_over(std::int64_t slot, std::int64_t lo, std::int64_t hi, Expr body);
Expr forall_over(std::int64_t slot, std::int64_t lo, std::int64_t hi, Expr body);

}  // namespace ex

Expr operator+(const Expr& a, const Expr& b);
Expr operator+(const Expr& a, std::int64_t b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, std::int64_t b);
Expr operator-(const Expr& a);
Expr operator*(std::int64_t k, const Expr& e);
Expr operator<(const Expr& a, const Expr& b);
Expr operator<(const Expr& a, std::int64_t b);
Expr operator<=(const Expr& a, const Expr& b);
Expr operator<=(const Expr& a, std::int64_t b);
Expr operator>(const Expr& a, const Expr& b);
Expr operator>(const Expr& a, std::int64_t b);
Expr operator>=(const Expr& a, const Expr& b);
Expr operator>=(const Expr& a, std::int64_t b);
Expr operator&&(const Expr& a, const Expr& b);
Expr operator||(const Expr& a, const Expr& b);
Expr operator!(const Expr& e);

struct Value {
  Type type = Type::integer;
  std::int64_t v = 0;

  bool operator==(const Value&) const = default;
};

// Evaluates `expr` with var-refs read from `point` and sol-refs read from
// `sol_binding`. Throws EvalError on unresolved references, ill-typed
// operands, out-of-range array indices, overflow, or a sol-ref without a
// binding.
Value evaluate(const Expr& expr, const Valuation& point, const Valuation* sol_binding = nullptr);
bool holds(const Expr& expr, const Valuation& point, const Valuation* sol_binding = nullptr);
std::int64_t evaluate_int(const Expr& expr, const Valuation& point,
                          const Valuation* sol_binding = nullptr);

// Static type; booleans are accepted where integers are expected (0/1), the
// reverse is an error. Throws ModelError.
Type type_of(const Expr& expr);

bool contains_sol(const Expr& expr);
std::vector<VarId> collect_vars(const Expr& expr);
bool structurally_equal(const Expr& a, const Expr& b);

// Unrolls comprehensions over their constant ranges and resolves array
// accesses whose index folds to a constant. Throws ModelError otherwise.
Expr flatten(const Expr& expr);

// Constant folding plus the neutral-element rules of and/or.
Expr simplify(const Expr& expr);

// Replaces each sol(e) by the literal value of e under `solution`, then simplifies.
Expr substitute_sol(const Expr& expr, const Valuation& solution);

class Instance;
std::string to_string(const Expr& expr, const Instance* names = nullptr);

// ---------------------------------------------------------------------------

class Instance {
 public:
  VarId add_var(std::string name, Domain domain);
  std::shared_ptr<const ArrayDecl> add_array(std::string name, std::int64_t lo,
                                             std::vector<VarId> elements);
  // Throws ModelError for non-boolean constraints, sol-refs and unknown variables.
  void add_constraint(Expr constraint);

  Expr ref(VarId id) const;
  Expr ref(std::string_view name) const;

  const std::vector<VarDecl>& vars() const { return vars_; }
  const VarDecl& var(VarId id) const { return vars_.at(id.index); }
  const std::vector<Expr>& constraints() const { return constraints_; }
  const std::vector<std::shared_ptr<const ArrayDecl>>& arrays() const { return arrays_; }
  std::size_t size() const { return vars_.size(); }

  std::optional<VarId> find(std::string_view name) const;
  std::shared_ptr<const ArrayDecl> find_array(std::string_view name) const;

  // Throws ModelError when `point` has a value outside a declared domain.
  void validate_valuation(const Valuation& point) const;

 private:
  std::vector<VarDecl> vars_;
  std::vector<Expr> constraints_;
  std::vector<std::shared_ptr<const ArrayDecl>> arrays_;
  std::unordered_map<std::string, std::uint32_t> by_name_;
};

// True iff every constraint holds at `point`; values outside a domain make
// it false. Throws EvalError when `point` does not cover every variable.
bool check(const Instance& instance, const Valuation& point);

}  // namespace cdp
