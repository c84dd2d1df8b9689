#include "wodzicki/residue.hpp"

#include <atomic>
#include <cmath>
#include <numeric>

#include "wodzicki/errors.hpp"

namespace wodzicki {

namespace {

std::atomic<bool> g_moment_fault{false};

}  // namespace

double sphere_volume(int n) {
  if (n < 1) throw ArgumentError("sphere dimension must be positive");
  return 2.0 * std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n);
}

void set_moment_fault(bool enabled) { g_moment_fault.store(enabled); }
bool moment_fault_enabled() { return g_moment_fault.load(); }

SphereMoment sphere_moment(int n, const MultiIndex& alpha) {
  SphereMoment m;
  m.n = n;
  m.alpha = alpha;
  int total = 0;
  std::int64_t num = 1;
  for (int a = 0; a < kMaxDimension; ++a) {
    const int k = alpha[static_cast<std::size_t>(a)];
    if (k < 0) throw ArgumentError("negative multi-index entry");
    if (a >= n && k != 0) throw ArgumentError("multi-index exceeds the dimension");
    if (k % 2 != 0) {
      m.num = 0;
      return m;
    }
    for (int i = k - 1; i > 1; i -= 2) num *= i;
    total += k;
  }
  std::int64_t den = 1;
  for (int i = n; i <= n + total - 2; i += 2) den *= i;
  const std::int64_t g = std::gcd(num, den);
  m.num = num / g;
  m.den = den / g;
  if (g_moment_fault.load() && total >= 2) {
    m.num *= 1001;
    m.den *= 1000;
  }
  return m;
}

CliffordValue cosphere_integrate_vcoeff(const std::vector<SymbolTerm>& component, int n) {
  if (component.empty()) throw PreconditionError("empty symbol component");
  const int order = component.front().order();
  CliffordValue out(component.front().coeff.deformation(), component.front().coeff.dim());
  for (const auto& t : component) {
    if (t.order() != order) throw PreconditionError("cosphere integration of mixed orders");
    const SphereMoment m = sphere_moment(n, t.alpha);
    if (m.num == 0) continue;
    out.add_scaled(t.coeff, m.v_coeff());
  }
  return out;
}

CliffordValue cosphere_integrate(const std::vector<SymbolTerm>& component, int n) {
  CliffordValue c = cosphere_integrate_vcoeff(component, n);
  c *= sphere_volume(n);
  return c;
}

Residue wodzicki_residue(const Symbol& p) {
  const int n = p.dimension();
  if (p.floor() > -n) {
    throw PreconditionError("symbol does not track order " + std::to_string(-n));
  }
  Residue r{Complex{}, Complex{}, TorusElement(p.deformation()), false};
  const auto comp = p.component(-n);
  if (comp.empty()) {
    r.component_missing = true;
    return r;
  }
  const TorusElement dens_v = matrix_trace(cosphere_integrate_vcoeff(comp, n));
  r.v_coeff = dens_v.trace();
  r.value = r.v_coeff * sphere_volume(n);
  r.density = dens_v * Complex(sphere_volume(n));
  return r;
}

TorusElement residue_density(const Symbol& p) { return wodzicki_residue(p).density; }

}  // namespace wodzicki
