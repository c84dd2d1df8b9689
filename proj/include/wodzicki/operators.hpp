#pragma once

#include <optional>
#include <vector>

#include "wodzicki/metric.hpp"
#include "wodzicki/symbol.hpp"

namespace wodzicki {

/// Geometric: σ(V) = i V^a ξ_a (V = V^a ∂_a with ∂_a = i δ_a), optionally
/// covariant V^a(∂_a − T_a). Derivation: σ(V) = V^a ξ_a. Rescaled:
/// V^a w δ_a w^(−1) for a weight w.
enum class VectorFlavor { Geometric, Derivation, Rescaled };

struct VectorFieldSpec {
  std::vector<TorusElement> components;
  VectorFlavor flavor = VectorFlavor::Geometric;
  std::optional<TorusElement> weight;
  /// Connection coefficients T_a (geometric flavor only); empty means none.
  std::vector<CliffordValue> connection;
  /// Matrix size of the symbol when there is no connection.
  int rank = 1;
};

Symbol build_vector_field(const VectorFieldSpec& v, const CalculusOptions& options = {});

/// Δ = Σ δ_a², σ = ‖ξ‖² · 1.
Symbol build_flat_laplacian(const DeformationPtr& defm, int rank = 1);

enum class ConformalVariant {
  TwoTorus,  // h^(−1) Δ h^(−1)
  FourTorus  // Σ_a χ^(−1) δ_a χ δ_a χ^(−1)
};

Symbol build_conformal_laplacian(const TorusElement& w, ConformalVariant variant,
                                 const CalculusOptions& options = {});

/// −g^{ab}(∇_a∇_b − Γ^c_ab ∇_c) + E with ∇_a = ∂_a − T_a. Conformally flat
/// and general metrics require θ = 0.
Symbol build_laplace_type(const MetricData& metric, const ConnectionData& connection,
                          const CalculusOptions& options = {});

/// Σ_a γ^a δ_a.
Symbol build_flat_dirac(const DeformationPtr& defm);

/// k D k with k placed in the commutant copy A°.
Symbol build_conformal_dirac(const TorusElement& k);

/// Orthonormal frame e_j = F ∂_j of the metric F^(−2) δ, built from a
/// conformally flat metric with even exponent (F = factor^(−exponent/2)).
struct SpinFrame {
  TorusElement F;
  /// alpha[(i n + j) n + k] = α_ijk with [e_i, e_j] = c_ijk e_k.
  std::vector<TorusElement> alpha;
};
SpinFrame spin_frame(const MetricData& metric, const CalculusOptions& options = {});

/// i γ^j ∇^(s)_{e_j} with ∇^(s)_{e_i} = e_i − ¼ α_ijk γ^j γ^k (θ = 0).
Symbol build_spin_dirac(const MetricData& metric, const CalculusOptions& options = {});

/// −∇^(s)_{e_i}∇^(s)_{e_i} + α_iij ∇^(s)_{e_j}.
Symbol build_spin_laplacian(const MetricData& metric, const CalculusOptions& options = {});

/// Coordinate form of the spin connection: ∇^(s)_{∂_a} = ∂_a − T_a with
/// T_a = ¼ F^(−1) α_ajk γ^j γ^k.
ConnectionData spin_connection(const MetricData& metric, const CalculusOptions& options = {});

/// [[D, γc], [γc*, D]] with γ the chirality of the base representation.
Symbol build_product_dirac(const Symbol& base, Complex c);

struct OneFormSpec {
  std::vector<TorusElement> components;
  /// Dirac conformal factor k; the form becomes k² v_a γ^a with k in A°.
  std::optional<TorusElement> rescale;
};

CliffordValue one_form_value(const OneFormSpec& f, const GammaRep& rep);
Symbol build_one_form(const OneFormSpec& f, const GammaRep& rep);

/// [[w₊, γ c φ₊], [γ c* φ₋, w₋]] for the product with the two-point space.
Symbol build_product_form(const CliffordValue& w_plus, const CliffordValue& w_minus,
                          const TorusElement& phi_plus, const TorusElement& phi_minus, Complex c,
                          const GammaRep& rep);

/// 2 × 2 block assembly of square symbols of equal size.
Symbol block_symbol(const Symbol& a, const Symbol& b, const Symbol& c, const Symbol& d);

}  // namespace wodzicki
