#pragma once

// Canonical JSON documents for instances and valuations. Instances are
// written one variable / array / constraint object per line so that fixtures
// diff cleanly.

#include <iosfwd>
#include <string>

#include "json.hpp"

#include "cdp/model.hpp"

namespace cdp {

using Json = nlohmann::ordered_json;

Json expr_to_json(const Expr& expr, const Instance& instance);
Expr expr_from_json(const Json& json, const Instance& instance);

void write_instance(std::ostream& os, const Instance& instance);
Instance read_instance(std::istream& is);

// {"assignment": {"x": 1, ...}} keyed by variable name in declaration order.
Json valuation_to_json(const Valuation& point, const Instance& instance);
Valuation valuation_from_json(const Json& json, const Instance& instance);

}  // namespace cdp
