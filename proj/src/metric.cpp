#include "wodzicki/metric.hpp"

#include "wodzicki/errors.hpp"

namespace wodzicki {

MetricData MetricData::flat(DeformationPtr defm) {
  MetricData m;
  m.mode = MetricMode::Flat;
  m.defm = std::move(defm);
  return m;
}

MetricData MetricData::conformally_flat(const TorusElement& factor, int exponent) {
  if (exponent == 0) throw ArgumentError("conformal exponent must be nonzero");
  MetricData m;
  m.mode = MetricMode::ConformallyFlat;
  m.defm = factor.deformation();
  m.factor = factor;
  m.exponent = exponent;
  return m;
}

MetricData MetricData::general(DeformationPtr defm, std::vector<TorusElement> g) {
  const int n = defm->dimension();
  if (static_cast<int>(g.size()) != n * n) {
    throw ConfigurationError("general metric needs n*n components");
  }
  if (!defm->is_commutative()) throw ConfigurationError("general metrics require theta = 0");
  for (const auto& c : g) {
    if (!c.deformation()->same_as(*defm)) throw ConfigurationError("metric deformation mismatch");
  }
  MetricData m;
  m.mode = MetricMode::GeneralFourier;
  m.defm = std::move(defm);
  m.components = std::move(g);
  return m;
}

const TorusElement& MetricData::component(int a, int b) const {
  if (mode != MetricMode::GeneralFourier) throw PreconditionError("metric has no component data");
  return components.at(static_cast<std::size_t>(a * dimension() + b));
}

}  // namespace wodzicki
