#pragma once

#include <cstdint>
#include <vector>

#include "wodzicki/symbol.hpp"

namespace wodzicki {

/// Volume v_{n−1} = 2π^{n/2}/Γ(n/2) of the unit sphere S^{n−1}.
double sphere_volume(int n);

/// ∫_{S^{n−1}} ξ^alpha = (num/den) · v_{n−1}, exact.
struct SphereMoment {
  int n = 0;
  MultiIndex alpha{};
  std::int64_t num = 0;
  std::int64_t den = 1;

  double v_coeff() const { return static_cast<double>(num) / static_cast<double>(den); }
  double value() const { return v_coeff() * sphere_volume(n); }
};

/// Π_a (alpha_a − 1)!! / (n (n+2) ··· (n + |alpha| − 2)); zero for any odd alpha_a.
SphereMoment sphere_moment(int n, const MultiIndex& alpha);

/// Testing hook: when enabled, every moment with |alpha| >= 2 is scaled by
/// (1 + 1e-3). Used by negative-control runs of the verification suites.
void set_moment_fault(bool enabled);
bool moment_fault_enabled();

/// Replaces ξ^alpha by its cosphere moment divided by v_{n−1}; all terms must
/// share one order. Returns Σ coeff · moment / v_{n−1}.
CliffordValue cosphere_integrate_vcoeff(const std::vector<SymbolTerm>& component, int n);

/// Same, multiplied by v_{n−1}.
CliffordValue cosphere_integrate(const std::vector<SymbolTerm>& component, int n);

struct Residue {
  Complex value;         // 𝒲(P)
  Complex v_coeff;       // 𝒲(P) / v_{n−1}
  TorusElement density;  // tr ∫ σ_{−n}(P), before τ
  bool component_missing = false;
};

/// τ(tr ∫_{‖ξ‖=1} σ_{−n}(P)). P must track order −n.
Residue wodzicki_residue(const Symbol& p);

/// The algebra element before τ; τ(residue_density(P)) = 𝒲(P).
TorusElement residue_density(const Symbol& p);

}  // namespace wodzicki
