#pragma once

#include <json.hpp>

#include "wodzicki/functionals.hpp"

namespace wodzicki {

/// Fourier record of an element:
///   {"dimension": n, "terms": [{"k": [...], "k_op": [...], "re": x, "im": y}, ...]}
/// "k_op" (commutant copy) is omitted when zero. Terms are in key order.
nlohmann::json element_to_json(const TorusElement& x);

/// Inverse of element_to_json. "k_op" and "im" are optional; duplicates are
/// summed. Throws ConfigurationError on malformed records or a dimension
/// mismatch.
TorusElement element_from_json(const DeformationPtr& defm, const nlohmann::json& j);

nlohmann::json complex_to_json(Complex z);

/// {value, v_coeff, density, meta}.
nlohmann::json report_to_json(const FunctionalReport& r);

}  // namespace wodzicki
