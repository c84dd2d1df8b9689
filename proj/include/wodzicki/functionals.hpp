#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wodzicki/operators.hpp"
#include "wodzicki/residue.hpp"

namespace wodzicki {

struct ReportMeta {
  std::string functional;
  std::string operator_id;
  int depth = 0;
  double prune_rel = 0.0;
  double inversion_residual = 0.0;
  bool component_missing = false;
};

/// Residue value, its v_{n−1} coefficient and the density before τ.
struct FunctionalReport {
  Complex value;
  Complex v_coeff;
  TorusElement density;
  ReportMeta meta;
};

/// A second-order elliptic operator L with principal part c‖ξ‖² together
/// with its parametrix powers, computed on demand and cached. Dirac
/// operators are held through L = D² with D kept alongside.
class SpectralOperator {
 public:
  SpectralOperator(Symbol laplacian, CalculusOptions options = {}, std::string id = {});
  static SpectralOperator from_dirac(const Symbol& dirac, CalculusOptions options = {},
                                     std::string id = {});

  const Symbol& symbol() const noexcept { return laplacian_; }
  const Symbol& dirac() const;
  bool has_dirac() const noexcept { return dirac_.has_value(); }
  const CalculusOptions& options() const noexcept { return options_; }
  const std::string& id() const noexcept { return id_; }
  int dimension() const noexcept { return laplacian_.dimension(); }
  int matrix_dim() const noexcept { return laplacian_.matrix_dim(); }
  double inversion_residual();

  /// σ(L^(−k)), the leading options().depth orders.
  const Symbol& inverse_power(int k);
  /// σ(L^(−k)) to the given number of leading orders (≤ options().depth).
  const Symbol& inverse_power(int k, int depth);

  /// 𝒲(X · L^(−k)) for an exact symbol X.
  FunctionalReport residue_with(const Symbol& x, int k, const std::string& functional);

 private:
  Symbol laplacian_;
  std::optional<Symbol> dirac_;
  CalculusOptions options_;
  std::string id_;
  std::optional<Parametrix> parametrix_;
  int parametrix_depth_ = 0;
  std::map<std::pair<int, int>, Symbol> powers_;
};

/// 𝒲(f V W L^(−m−1)), n = 2m.
FunctionalReport metric_vf(SpectralOperator& L, const Symbol& V, const Symbol& W,
                           const std::optional<TorusElement>& f = std::nullopt);
/// 𝒲(f V W L^(−m)).
FunctionalReport einstein_vf(SpectralOperator& L, const Symbol& V, const Symbol& W,
                             const std::optional<TorusElement>& f = std::nullopt);

/// 𝒲(v w (D²)^(−m)).
FunctionalReport metric_form(SpectralOperator& D, const Symbol& v, const Symbol& w);

enum class EinsteinOrdering {
  Inner,  // v {D, w} D
  Outer   // {D, v} w D
};
/// 𝒲(v {D, w} D (D²)^(−m)) or 𝒲({D, v} w D (D²)^(−m)).
FunctionalReport einstein_form(SpectralOperator& D, const Symbol& v, const Symbol& w,
                               EinsteinOrdering ordering = EinsteinOrdering::Inner);

/// 𝒲(f (D²)^(−m)) with f acting diagonally.
FunctionalReport volume_form(SpectralOperator& D, const TorusElement& f);

struct ClosednessReport {
  double max_abs = 0.0;
  std::vector<Complex> values;
  bool pass(double tol) const { return max_abs <= tol; }
};
/// max |𝒲(T D (D²)^(−m))| over zero-order samples T.
ClosednessReport spectral_closedness_check(SpectralOperator& D,
                                           const std::vector<CliffordValue>& samples);

/// [D, a] for a ∈ A as an order-zero symbol.
Symbol commutator_form(SpectralOperator& D, const TorusElement& a);

/// Closed-form evaluators. They use algebra operations only (no symbol
/// calculus); constant vector components are passed as complex numbers.
namespace reference {

/// 2π² τ(χ³) V^a W^a.
Complex laplacian4_metric(const TorusElement& chi, const std::vector<Complex>& V,
                          const std::vector<Complex>& W);
/// Closed-form Einstein functional of the conformally rescaled 4-torus
/// Laplacian, including its 2π² prefactor.
Complex laplacian4_einstein(const TorusElement& chi, const std::vector<Complex>& V,
                            const std::vector<Complex>& W);
/// Commutative-limit density (θ = 0), including 2π².
TorusElement laplacian4_commutative_density(const TorusElement& chi, const std::vector<Complex>& V,
                                            const std::vector<Complex>& W);

/// τ(W^a V^a k^(−4)) with k in A°.
Complex dirac4_metric(const TorusElement& k, const std::vector<TorusElement>& V,
                      const std::vector<TorusElement>& W, const CalculusOptions& options = {});
/// Closed-form Einstein functional of the conformally rescaled 4-torus
/// Dirac operator.
Complex dirac4_einstein(const TorusElement& k, const std::vector<TorusElement>& V,
                        const std::vector<TorusElement>& W, const CalculusOptions& options = {});
/// Its commutative limit τ(V^a W^b (⅔k^(−2)k_a k_b + ⅔k^(−1)k_ab
///   + δ_ab(4/3 k^(−2)k_c k_c − ⅔ k^(−1) k_cc))), k_a = δ_a k.
Complex dirac4_commutative_limit(const TorusElement& k, const std::vector<TorusElement>& V,
                                 const std::vector<TorusElement>& W,
                                 const CalculusOptions& options = {});
/// G_ab = 4(k^(−2)k_a k_b + k^(−1)k_ab) + 8δ_ab k^(−2)k_c k_c − 4δ_ab k^(−1)k_cc
/// for g = k^(−4)δ at θ = 0, k_a = ∂_a k. Row-major n × n.
std::vector<TorusElement> conformal_einstein_tensor(const TorusElement& k,
                                                    const CalculusOptions& options = {});
/// (i/2) γ^a k^(−2)[k^(−2), {k^(−1), δ_a k}] k^(−2), k in A°.
CliffordValue dirac4_closedness_density(const TorusElement& k, const CalculusOptions& options = {});

/// ½ τ(Tr V^a W^b F_ab) with F_ab = −i(δ_a T_b − δ_b T_a) + [T_a, T_b]
/// (v_{n−1} coefficient of the connection term).
Complex connection_curvature_term(const std::vector<CliffordValue>& T,
                                  const std::vector<TorusElement>& V,
                                  const std::vector<TorusElement>& W);
/// ½ τ(Tr E · Σ_a V^a W^a) on a flat torus (v_{n−1} coefficient of the
/// endomorphism shift).
Complex endomorphism_shift(const CliffordValue& E, const std::vector<TorusElement>& V,
                           const std::vector<TorusElement>& W);

/// Product with the two-point space: the metric and Einstein values
/// assembled from functionals of the base triple.
struct ProductInputs {
  Symbol w_plus, w_minus, w_plus2, w_minus2;  // ω = (w₊, w₋, φ₊, φ₋), ω′ likewise
  TorusElement phi_plus, phi_minus, phi_plus2, phi_minus2;
  Complex c;
};
struct ProductValues {
  Complex metric;
  Complex einstein;
};
ProductValues product_triple(SpectralOperator& base, const ProductInputs& in);

}  // namespace reference

}  // namespace wodzicki
