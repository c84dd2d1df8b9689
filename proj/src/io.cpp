#include "wodzicki/io.hpp"

#include <cmath>

#include "wodzicki/errors.hpp"

namespace wodzicki {

using nlohmann::json;

namespace {

std::array<int, kMaxDimension> read_index(const json& j, int n, const char* field) {
  std::array<int, kMaxDimension> out{};
  if (!j.is_array() || static_cast<int>(j.size()) != n) {
    throw ConfigurationError(std::string("Fourier term field '") + field + "' must have " +
                             std::to_string(n) + " integer entries");
  }
  for (int a = 0; a < n; ++a) {
    if (!j[static_cast<std::size_t>(a)].is_number_integer()) {
      throw ConfigurationError(std::string("Fourier term field '") + field + "' is not integral");
    }
    const int v = j[static_cast<std::size_t>(a)].get<int>();
    if (v < -127 || v > 127) throw ConfigurationError("Fourier index outside [-127, 127]");
    out[static_cast<std::size_t>(a)] = v;
  }
  return out;
}

double read_number(const json& t, const char* key) {
  if (!t.contains(key)) return 0.0;
  if (!t[key].is_number()) {
    throw ConfigurationError(std::string("Fourier coefficient '") + key + "' is not a number");
  }
  const double v = t[key].get<double>();
  if (!std::isfinite(v)) throw ConfigurationError("non-finite Fourier coefficient");
  return v;
}

}  // namespace

json complex_to_json(Complex z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

json element_to_json(const TorusElement& x) {
  const int n = x.dimension();
  json terms = json::array();
  for (const auto& t : x.terms()) {
    const LatticeIndex idx = unpack(t.key);
    json rec;
    rec["k"] = std::vector<int>(idx.left.begin(), idx.left.begin() + n);
    bool has_op = false;
    for (int a = 0; a < n; ++a) has_op = has_op || idx.right[static_cast<std::size_t>(a)] != 0;
    if (has_op) rec["k_op"] = std::vector<int>(idx.right.begin(), idx.right.begin() + n);
    rec["re"] = t.coeff.real();
    rec["im"] = t.coeff.imag();
    terms.push_back(std::move(rec));
  }
  return json{{"dimension", n}, {"terms", std::move(terms)}};
}

TorusElement element_from_json(const DeformationPtr& defm, const json& j) {
  const int n = defm->dimension();
  const json* terms = &j;
  if (j.is_object()) {
    if (j.contains("dimension") && j["dimension"] != n) {
      throw ConfigurationError("Fourier record dimension does not match the torus");
    }
    if (!j.contains("terms")) throw ConfigurationError("Fourier record without 'terms'");
    terms = &j["terms"];
  }
  if (!terms->is_array()) throw ConfigurationError("Fourier terms must be a list");
  std::vector<TorusElement::Term> out;
  for (const auto& t : *terms) {
    if (!t.is_object() || !t.contains("k")) {
      throw ConfigurationError("Fourier term must be a table with a 'k' index");
    }
    LatticeIndex idx;
    idx.left = read_index(t["k"], n, "k");
    if (t.contains("k_op")) idx.right = read_index(t["k_op"], n, "k_op");
    out.push_back({pack(idx), Complex(read_number(t, "re"), read_number(t, "im"))});
  }
  return TorusElement::from_terms(defm, std::move(out));
}

json report_to_json(const FunctionalReport& r) {
  return json{{"value", complex_to_json(r.value)},
              {"v_coeff", complex_to_json(r.v_coeff)},
              {"density", element_to_json(r.density)},
              {"meta",
               {{"functional", r.meta.functional},
                {"operator", r.meta.operator_id},
                {"depth", r.meta.depth},
                {"prune_rel", r.meta.prune_rel},
                {"inversion_residual", r.meta.inversion_residual},
                {"component_missing", r.meta.component_missing}}}};
}

}  // namespace wodzicki
