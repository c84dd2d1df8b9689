#include "wodzicki/config.hpp"

#include <fstream>
#include <sstream>

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

#include "wodzicki/curved_symbol.hpp"
#include "wodzicki/errors.hpp"
#include "wodzicki/functionals.hpp"
#include "wodzicki/io.hpp"

namespace wodzicki {

using nlohmann::json;

namespace {

json toml_to_json(const toml::node& node) {
  if (const auto* t = node.as_table()) {
    json o = json::object();
    for (auto&& [k, v] : *t) o[std::string(k.str())] = toml_to_json(v);
    return o;
  }
  if (const auto* a = node.as_array()) {
    json arr = json::array();
    for (auto&& v : *a) arr.push_back(toml_to_json(v));
    return arr;
  }
  if (const auto* v = node.as_integer()) return v->get();
  if (const auto* v = node.as_floating_point()) return v->get();
  if (const auto* v = node.as_boolean()) return v->get();
  if (const auto* v = node.as_string()) return v->get();
  throw ConfigurationError("unsupported value type in configuration (dates are not accepted)");
}

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigurationError(where + ": " + what);
}

void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || it.key() == a;
    if (!ok) fail(where, "unknown key '" + it.key() + "'");
  }
}

const json& table(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) fail(where, std::string("missing '") + key + "'");
  if (!j[key].is_object()) fail(where, std::string("'") + key + "' must be a table");
  return j[key];
}

std::string get_string(const json& j, const char* key, const std::string& where,
                       const std::string& fallback, bool required = false) {
  if (!j.contains(key)) {
    if (required) fail(where, std::string("missing '") + key + "'");
    return fallback;
  }
  if (!j[key].is_string()) fail(where, std::string("'") + key + "' must be a string");
  return j[key].get<std::string>();
}

double get_number(const json& j, const char* key, const std::string& where, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) fail(where, std::string("'") + key + "' must be a number");
  return j[key].get<double>();
}

int get_int(const json& j, const char* key, const std::string& where, int fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number_integer()) fail(where, std::string("'") + key + "' must be an integer");
  return j[key].get<int>();
}

// A number, {re, im}, a Fourier record {terms = [...]} or a bare term list.
TorusElement element(const DeformationPtr& defm, const json& j, const std::string& where) {
  try {
    if (j.is_number()) return TorusElement::scalar(defm, j.get<double>());
    if (j.is_object() && !j.contains("terms")) {
      check_keys(j, where, {"re", "im"});
      return TorusElement::scalar(defm, Complex(get_number(j, "re", where, 0.0),
                                                get_number(j, "im", where, 0.0)));
    }
    return element_from_json(defm, j);
  } catch (const ConfigurationError& e) {
    fail(where, e.what());
  }
}

std::vector<TorusElement> elements(const DeformationPtr& defm, const json& j,
                                   const std::string& where, std::size_t count) {
  if (!j.is_array() || j.size() != count) {
    fail(where, "expected a list of " + std::to_string(count) + " components");
  }
  std::vector<TorusElement> out;
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(element(defm, j[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

DeformationPtr parse_deformation(const json& j) {
  if (!j.contains("dimension") || !j["dimension"].is_number_integer()) {
    fail("config", "'dimension' (2 or 4) is required");
  }
  const int n = j["dimension"].get<int>();
  if (n != 2 && n != 4) fail("config", "dimension must be 2 or 4");
  if (!j.contains("theta")) return DeformationMatrix::commutative(n);
  const json& t = j["theta"];
  if (t.is_number()) {
    if (n != 2) fail("theta", "a scalar theta is only accepted for dimension 2");
    return DeformationMatrix::two_torus(t.get<double>());
  }
  if (!t.is_array() || static_cast<int>(t.size()) != n) fail("theta", "expected an n x n matrix");
  std::vector<std::vector<double>> m;
  for (const auto& row : t) {
    if (!row.is_array() || static_cast<int>(row.size()) != n) fail("theta", "expected an n x n matrix");
    std::vector<double> r;
    for (const auto& v : row) {
      if (!v.is_number()) fail("theta", "entries must be numbers");
      r.push_back(v.get<double>());
    }
    m.push_back(std::move(r));
  }
  return DeformationMatrix::make(n, m);
}

const char* operator_name(OperatorKind k) {
  switch (k) {
    case OperatorKind::FlatLaplacian: return "flat-laplacian";
    case OperatorKind::ConformalLaplacian: return "conformal-laplacian";
    case OperatorKind::LaplaceType: return "laplace-type";
    case OperatorKind::FlatDirac: return "flat-dirac";
    case OperatorKind::ConformalDirac: return "conformal-dirac";
  }
  return "?";
}

const char* functional_name(FunctionalKind k) {
  switch (k) {
    case FunctionalKind::Metric: return "metric";
    case FunctionalKind::Einstein: return "einstein";
    case FunctionalKind::MetricForm: return "metric-form";
    case FunctionalKind::EinsteinForm: return "einstein-form";
    case FunctionalKind::Volume: return "volume";
  }
  return "?";
}

bool is_dirac(OperatorKind k) {
  return k == OperatorKind::FlatDirac || k == OperatorKind::ConformalDirac;
}

void parse_operator(const json& root, RunConfig& c) {
  const std::string where = "operator";
  const json& op = table(root, "operator", "config");
  check_keys(op, where, {"kind", "variant", "factor", "metric", "connection"});
  const std::string kind = get_string(op, "kind", where, "", true);
  const int n = c.defm->dimension();
  if (kind == "flat-laplacian") {
    c.op = OperatorKind::FlatLaplacian;
  } else if (kind == "conformal-laplacian") {
    c.op = OperatorKind::ConformalLaplacian;
  } else if (kind == "laplace-type") {
    c.op = OperatorKind::LaplaceType;
  } else if (kind == "flat-dirac") {
    c.op = OperatorKind::FlatDirac;
  } else if (kind == "conformal-dirac") {
    c.op = OperatorKind::ConformalDirac;
  } else {
    fail(where, "unknown operator kind '" + kind + "'");
  }
  if (c.op == OperatorKind::ConformalLaplacian || c.op == OperatorKind::ConformalDirac) {
    if (!op.contains("factor")) fail(where, "conformal operators need a 'factor'");
    c.factor = element(c.defm, op["factor"], "operator.factor");
    if (c.factor->side() != Side::Left) fail("operator.factor", "give the factor as an element of A");
  } else if (op.contains("factor")) {
    fail(where, "'factor' is only used by conformal operators");
  }
  if (c.op == OperatorKind::ConformalLaplacian) {
    c.variant = get_string(op, "variant", where, n == 2 ? "two-torus" : "four-torus");
    if (c.variant != "two-torus" && c.variant != "four-torus") {
      fail(where, "variant must be 'two-torus' or 'four-torus'");
    }
  } else if (op.contains("variant")) {
    fail(where, "'variant' is only used by the conformal Laplacian");
  }
  c.metric = MetricData::flat(c.defm);
  c.connection = ConnectionData::trivial(1);
  if (c.op != OperatorKind::LaplaceType) {
    if (op.contains("metric") || op.contains("connection")) {
      fail(where, "'metric' and 'connection' are only used by laplace-type operators");
    }
    return;
  }
  if (op.contains("metric")) {
    const json& m = table(op, "metric", where);
    check_keys(m, "operator.metric", {"mode", "factor", "exponent", "components"});
    const std::string mode = get_string(m, "mode", "operator.metric", "flat");
    if (mode == "flat") {
      c.metric = MetricData::flat(c.defm);
    } else if (mode == "conformal") {
      if (!m.contains("factor")) fail("operator.metric", "conformal metric needs 'factor'");
      c.metric = MetricData::conformally_flat(element(c.defm, m["factor"], "operator.metric.factor"),
                                              get_int(m, "exponent", "operator.metric", 1));
    } else if (mode == "general") {
      if (!m.contains("components")) fail("operator.metric", "general metric needs 'components'");
      c.metric = MetricData::general(
          c.defm, elements(c.defm, m["components"], "operator.metric.components",
                           static_cast<std::size_t>(n * n)));
    } else {
      fail("operator.metric", "mode must be flat, conformal or general");
    }
  }
  if (op.contains("connection")) {
    const json& t = table(op, "connection", where);
    check_keys(t, "operator.connection", {"T", "E"});
    if (t.contains("T")) {
      for (auto& x : elements(c.defm, t["T"], "operator.connection.T", static_cast<std::size_t>(n))) {
        c.connection.T.push_back(CliffordValue::scalar(x, 1));
      }
    }
    if (t.contains("E")) {
      c.connection.E = CliffordValue::scalar(element(c.defm, t["E"], "operator.connection.E"), 1);
    }
  }
}

void parse_functionals(const json& root, RunConfig& c) {
  if (!root.contains("functional")) fail("config", "at least one [[functional]] entry is required");
  const json& list = root["functional"];
  if (!list.is_array() || list.empty()) fail("config", "'functional' must be a non-empty array of tables");
  const std::size_t n = static_cast<std::size_t>(c.defm->dimension());
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string where = "functional[" + std::to_string(i) + "]";
    const json& f = list[i];
    if (!f.is_object()) fail(where, "must be a table");
    check_keys(f, where, {"kind", "label", "V", "W", "flavor", "localize", "ordering", "f"});
    FunctionalSpec s;
    const std::string kind = get_string(f, "kind", where, "", true);
    if (kind == "metric") {
      s.kind = FunctionalKind::Metric;
    } else if (kind == "einstein") {
      s.kind = FunctionalKind::Einstein;
    } else if (kind == "metric-form") {
      s.kind = FunctionalKind::MetricForm;
    } else if (kind == "einstein-form") {
      s.kind = FunctionalKind::EinsteinForm;
    } else if (kind == "volume") {
      s.kind = FunctionalKind::Volume;
    } else {
      fail(where, "unknown functional kind '" + kind + "'");
    }
    s.label = get_string(f, "label", where, kind + "#" + std::to_string(i));
    const bool forms = s.kind == FunctionalKind::MetricForm || s.kind == FunctionalKind::EinsteinForm;
    const bool fields = s.kind == FunctionalKind::Metric || s.kind == FunctionalKind::Einstein;
    if (forms && !is_dirac(c.op)) fail(where, "form functionals need a Dirac operator");
    if (fields && is_dirac(c.op)) fail(where, "vector-field functionals need a Laplacian");
    if (fields || forms) {
      if (!f.contains("V") || !f.contains("W")) fail(where, "'V' and 'W' are required");
      s.V = elements(c.defm, f["V"], where + ".V", n);
      s.W = elements(c.defm, f["W"], where + ".W", n);
    } else if (f.contains("V") || f.contains("W")) {
      fail(where, "'V'/'W' are not used by the volume functional");
    }
    if (fields) {
      const std::string natural = c.op == OperatorKind::ConformalLaplacian ? "rescaled" : "geometric";
      s.flavor = get_string(f, "flavor", where, natural);
      if (s.flavor != "geometric" && s.flavor != "derivation" && s.flavor != "rescaled") {
        fail(where, "flavor must be geometric, derivation or rescaled");
      }
      if (s.flavor == "rescaled" && c.op != OperatorKind::ConformalLaplacian) {
        fail(where, "the rescaled flavor needs a conformal Laplacian (its factor is the weight)");
      }
    } else if (f.contains("flavor")) {
      fail(where, "'flavor' only applies to vector fields");
    }
    if (f.contains("localize") && !fields) fail(where, "'localize' only applies to vector fields");
    if (f.contains("localize")) s.localize = element(c.defm, f["localize"], where + ".localize");
    if (s.kind == FunctionalKind::Volume) {
      s.localize = f.contains("f") ? element(c.defm, f["f"], where + ".f") : TorusElement::one(c.defm);
    } else if (f.contains("f")) {
      fail(where, "'f' is only used by the volume functional");
    }
    if (s.kind == FunctionalKind::EinsteinForm) {
      s.ordering = get_string(f, "ordering", where, "inner");
      if (s.ordering != "inner" && s.ordering != "outer") fail(where, "ordering must be inner or outer");
    } else if (f.contains("ordering")) {
      fail(where, "'ordering' only applies to einstein-form");
    }
    c.functionals.push_back(std::move(s));
  }
}

json theta_matrix(const DeformationMatrix& d) {
  json m = json::array();
  for (const auto& row : d.theta()) m.push_back(row);
  return m;
}

Symbol field_symbol(const RunConfig& c, const FunctionalSpec& s, const std::vector<TorusElement>& comps) {
  VectorFieldSpec v;
  v.components = comps;
  if (s.flavor == "rescaled") {
    v.flavor = VectorFlavor::Rescaled;
    v.weight = *c.factor;
  } else if (s.flavor == "derivation") {
    v.flavor = VectorFlavor::Derivation;
  } else {
    v.connection = c.connection.T;
  }
  return build_vector_field(v, c.options);
}

template <class Op>
FunctionalReport evaluate_field(Op& L, const RunConfig& c, const FunctionalSpec& s) {
  const Symbol V = field_symbol(c, s, s.V), W = field_symbol(c, s, s.W);
  if (s.kind == FunctionalKind::Metric) return metric_vf(L, V, W, s.localize);
  return einstein_vf(L, V, W, s.localize);
}

template <class Op>
FunctionalReport evaluate_volume(Op& L, const RunConfig& c, const TorusElement& f) {
  const int n = c.defm->dimension();
  return L.residue_with(Symbol::constant(CliffordValue::scalar(f, 1)), n / 2, "volume");
}

}  // namespace

RunConfig parse_run_config(const std::string& text) {
  json root;
  std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    try {
      root = json::parse(text);
    } catch (const json::exception& e) {
      throw ConfigurationError(std::string("JSON parse error: ") + e.what());
    }
  } else {
    try {
      root = toml_to_json(toml::parse(text));
    } catch (const toml::parse_error& e) {
      std::ostringstream os;
      os << "TOML parse error at line " << e.source().begin.line << ": " << e.description();
      throw ConfigurationError(os.str());
    }
  }
  if (!root.is_object()) throw ConfigurationError("configuration must be a table");
  check_keys(root, "config", {"dimension", "theta", "depth", "tolerances", "operator", "functional"});

  RunConfig c;
  c.defm = parse_deformation(root);
  c.options.depth = get_int(root, "depth", "config", c.options.depth);
  if (c.options.depth < 1) fail("config", "depth must be positive");
  if (root.contains("tolerances")) {
    const json& t = table(root, "tolerances", "config");
    check_keys(t, "tolerances", {"inversion", "prune_rel", "max_support_radius", "max_iterations"});
    c.options.inversion.tol = get_number(t, "inversion", "tolerances", c.options.inversion.tol);
    c.options.prune_rel = get_number(t, "prune_rel", "tolerances", c.options.prune_rel);
    c.options.inversion.max_support_radius =
        get_int(t, "max_support_radius", "tolerances", c.options.inversion.max_support_radius);
    c.options.inversion.max_iterations =
        get_int(t, "max_iterations", "tolerances", c.options.inversion.max_iterations);
  }
  if (!(c.options.inversion.tol > 0.0)) fail("tolerances", "inversion must be positive");
  if (c.options.prune_rel < 0.0) fail("tolerances", "prune_rel must be non-negative");
  if (c.options.inversion.max_support_radius < 1 || c.options.inversion.max_support_radius > 63) {
    fail("tolerances", "max_support_radius must lie in [1, 63]");
  }
  parse_operator(root, c);
  parse_functionals(root, c);
  return c;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("cannot read configuration '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return parse_run_config(os.str());
}

json RunConfig::describe() const {
  json opj{{"kind", operator_name(op)}};
  if (!variant.empty()) opj["variant"] = variant;
  if (factor) opj["factor"] = element_to_json(*factor);
  if (op == OperatorKind::LaplaceType) {
    const char* mode = metric.mode == MetricMode::Flat              ? "flat"
                       : metric.mode == MetricMode::ConformallyFlat ? "conformal"
                                                                    : "general";
    json m{{"mode", mode}};
    if (metric.mode == MetricMode::ConformallyFlat) m["exponent"] = metric.exponent;
    opj["metric"] = m;
    opj["connection"] = {{"T", connection.has_connection()}, {"E", connection.E.has_value()}};
  }
  json fs = json::array();
  for (const auto& f : functionals) {
    json e{{"kind", functional_name(f.kind)}, {"label", f.label}};
    if (!f.flavor.empty()) e["flavor"] = f.flavor;
    if (f.kind == FunctionalKind::EinsteinForm) e["ordering"] = f.ordering;
    e["localized"] = f.localize.has_value() && f.kind != FunctionalKind::Volume;
    fs.push_back(std::move(e));
  }
  return json{{"dimension", defm->dimension()},
              {"theta", theta_matrix(*defm)},
              {"depth", options.depth},
              {"tolerances",
               {{"inversion", options.inversion.tol},
                {"prune_rel", options.prune_rel},
                {"max_support_radius", options.inversion.max_support_radius},
                {"max_iterations", options.inversion.max_iterations}}},
              {"operator", opj},
              {"functionals", fs}};
}

json run_compute(const RunConfig& c) {
  std::optional<SpectralOperator> L;
  std::optional<CurvedOperator> curved;
  const std::string id = operator_name(c.op);
  switch (c.op) {
    case OperatorKind::FlatLaplacian:
      L.emplace(build_flat_laplacian(c.defm), c.options, id);
      break;
    case OperatorKind::ConformalLaplacian:
      L.emplace(build_conformal_laplacian(*c.factor,
                                          c.variant == "two-torus" ? ConformalVariant::TwoTorus
                                                                   : ConformalVariant::FourTorus,
                                          c.options),
                c.options, id);
      break;
    case OperatorKind::LaplaceType: {
      Symbol s = build_laplace_type(c.metric, c.connection, c.options);
      if (c.metric.mode == MetricMode::GeneralFourier) {
        curved.emplace(s, c.metric, c.options, id);
      } else {
        L.emplace(std::move(s), c.options, id);
      }
      break;
    }
    case OperatorKind::FlatDirac:
      L.emplace(SpectralOperator::from_dirac(build_flat_dirac(c.defm), c.options, id));
      break;
    case OperatorKind::ConformalDirac:
      L.emplace(SpectralOperator::from_dirac(build_conformal_dirac(commutant_image(*c.factor)),
                                             c.options, id));
      break;
  }

  const int n = c.defm->dimension();
  json results = json::array();
  for (const auto& f : c.functionals) {
    auto evaluate = [&]() -> FunctionalReport {
      switch (f.kind) {
        case FunctionalKind::Metric:
        case FunctionalKind::Einstein:
          return curved ? evaluate_field(*curved, c, f) : evaluate_field(*L, c, f);
        case FunctionalKind::Volume:
          if (is_dirac(c.op)) return volume_form(*L, *f.localize);
          return curved ? evaluate_volume(*curved, c, *f.localize)
                        : evaluate_volume(*L, c, *f.localize);
        case FunctionalKind::MetricForm:
        case FunctionalKind::EinsteinForm:
          break;
      }
      const GammaRep rep = gamma_basis(n);
      std::optional<TorusElement> k;
      if (c.factor) k = commutant_image(*c.factor);
      const Symbol v = build_one_form({f.V, k}, rep), w = build_one_form({f.W, k}, rep);
      if (f.kind == FunctionalKind::MetricForm) return metric_form(*L, v, w);
      return einstein_form(*L, v, w,
                           f.ordering == "outer" ? EinsteinOrdering::Outer : EinsteinOrdering::Inner);
    };
    const FunctionalReport r = evaluate();
    json entry = report_to_json(r);
    entry["label"] = f.label;
    entry["kind"] = functional_name(f.kind);
    results.push_back(std::move(entry));
  }
  return json{{"config", c.describe()}, {"results", std::move(results)}};
}

}  // namespace wodzicki
