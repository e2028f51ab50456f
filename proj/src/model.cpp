#include <algorithm>
#include <functional>

#include "cdp/model.hpp"

namespace cdp {

Domain Domain::boolean() { return Domain(Kind::boolean, 0, 1, {}); }

Domain Domain::interval(std::int64_t lo, std::int64_t hi) {
  if (lo > hi) throw ModelError("empty interval domain " + std::to_string(lo) + ".." + std::to_string(hi));
  return Domain(Kind::interval, lo, hi, {});
}

Domain Domain::set(std::vector<std::int64_t> values) {
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  if (values.empty()) throw ModelError("empty set domain");
  std::int64_t lo = values.front();
  std::int64_t hi = values.back();
  return Domain(Kind::set, lo, hi, std::move(values));
}

std::int64_t Domain::min() const { return lo_; }
std::int64_t Domain::max() const { return hi_; }

std::uint64_t Domain::size() const {
  if (kind_ == Kind::set) return values_.size();
  return static_cast<std::uint64_t>(hi_ - lo_) + 1;
}

bool Domain::contains(std::int64_t v) const {
  if (kind_ == Kind::set) return std::binary_search(values_.begin(), values_.end(), v);
  return v >= lo_ && v <= hi_;
}

std::vector<std::int64_t> Domain::values() const {
  if (kind_ == Kind::set) return values_;
  std::vector<std::int64_t> out;
  out.reserve(size());
  for (std::int64_t v = lo_; v <= hi_; ++v) out.push_back(v);
  return out;
}

std::size_t ValuationHash::operator()(const Valuation& v) const {
  std::size_t h = 1469598103934665603ull;
  for (std::int64_t x : v.values()) {
    h ^= std::hash<std::int64_t>{}(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return h;
}

VarId Instance::add_var(std::string name, Domain domain) {
  if (name.empty()) throw ModelError("variable name is empty");
  if (by_name_.count(name) || find_array(name)) throw ModelError("duplicate name " + name);
  VarId id{static_cast<std::uint32_t>(vars_.size())};
  by_name_.emplace(name, id.index);
  vars_.push_back(VarDecl{id, std::move(name), std::move(domain)});
  return id;
}

std::shared_ptr<const ArrayDecl> Instance::add_array(std::string name, std::int64_t lo,
                                                     std::vector<VarId> elements) {
  if (by_name_.count(name) || find_array(name)) throw ModelError("duplicate name " + name);
  bool all_bool = !elements.empty();
  for (VarId v : elements) {
    if (v.index >= vars_.size()) throw ModelError("array " + name + " refers to an unknown variable");
    all_bool = all_bool && vars_[v.index].domain.is_boolean();
  }
  auto decl = std::make_shared<ArrayDecl>();
  decl->name = std::move(name);
  decl->lo = lo;
  decl->elements = std::move(elements);
  decl->boolean = all_bool;
  arrays_.push_back(decl);
  return decl;
}

void Instance::add_constraint(Expr constraint) {
  if (contains_sol(constraint)) throw ModelError("sol() may only appear in dominance nogoods");
  if (type_of(constraint) != Type::boolean) throw ModelError("constraint is not boolean");
  for (VarId v : collect_vars(constraint)) {
    if (v.index >= vars_.size()) throw ModelError("constraint refers to an undeclared variable");
  }
  constraints_.push_back(std::move(constraint));
}

Expr Instance::ref(VarId id) const {
  if (id.index >= vars_.size()) throw ModelError("unknown variable id");
  return ex::var(id, vars_[id.index].domain.is_boolean());
}

Expr Instance::ref(std::string_view name) const {
  auto id = find(name);
  if (!id) throw ModelError("unknown variable " + std::string(name));
  return ref(*id);
}

std::optional<VarId> Instance::find(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  if (it == by_name_.end()) return std::nullopt;
  return VarId{it->second};
}

std::shared_ptr<const ArrayDecl> Instance::find_array(std::string_view name) const {
  for (const auto& a : arrays_)
    if (a->name == name) return a;
  return nullptr;
}

void Instance::validate_valuation(const Valuation& point) const {
  if (point.size() != vars_.size())
    throw ModelError("valuation covers " + std::to_string(point.size()) + " of " +
                     std::to_string(vars_.size()) + " variables");
  for (const VarDecl& d : vars_) {
    if (!d.domain.contains(point[d.id]))
      throw ModelError("value " + std::to_string(point[d.id]) + " outside the domain of " + d.name);
  }
}

bool check(const Instance& instance, const Valuation& point) {
  if (point.size() != instance.size())
    throw EvalError("partial valuation: " + std::to_string(point.size()) + " of " +
                    std::to_string(instance.size()) + " variables assigned");
  for (const VarDecl& d : instance.vars())
    if (!d.domain.contains(point[d.id])) return false;
  for (const Expr& c : instance.constraints())
    if (!holds(c, point)) return false;
  return true;
}

}  // namespace cdp
