#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wodzicki/functionals.hpp"
#include "wodzicki/metric.hpp"
#include "wodzicki/residue.hpp"
#include "wodzicki/symbol.hpp"

namespace wodzicki {

/// q(x, ξ) = g^{ab}(x) ξ_a ξ_b for a θ = 0 metric, with the Fourier data the
/// curved calculus needs.
struct QuadraticForm {
  explicit QuadraticForm(DeformationPtr d) : defm(d), sqrt_det(std::move(d)) {}

  DeformationPtr defm;
  int n = 0;
  std::vector<TorusElement> g;         // g_ab, row-major
  std::vector<TorusElement> ginv;      // g^{ab}, row-major
  std::vector<TorusElement> ginv_d;    // δ_c g^{ab} at (a n + b) n + c
  TorusElement sqrt_det;
  double tail = 0.0;

  static std::shared_ptr<const QuadraticForm> make(const MetricData& metric);
};
using QuadraticFormPtr = std::shared_ptr<const QuadraticForm>;

/// Finite sum Σ c(x) ξ^α q^(−j) over a commutative torus; the order of a
/// term is |α| − 2j. Terms are keyed by (α, j) without further reduction.
class CurvedSymbol {
 public:
  CurvedSymbol(QuadraticFormPtr q, int matrix_dim, int floor = kExactFloor);

  /// Polynomial symbol (terms with j <= 0) rewritten over q; ‖ξ‖^(2k)
  /// factors are expanded into monomials.
  static CurvedSymbol from_polynomial(const Symbol& s, QuadraticFormPtr q);

  const QuadraticFormPtr& form() const noexcept { return q_; }
  int dimension() const noexcept { return q_->n; }
  int matrix_dim() const noexcept { return dim_; }
  int floor() const noexcept { return floor_; }
  void set_floor(int f) noexcept { floor_ = f; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }
  int top_order() const;
  std::vector<SymbolTerm> terms() const;
  std::vector<SymbolTerm> component(int order) const;

  void add_term(const CliffordValue& c, const MultiIndex& alpha, int j, Complex s = 1.0);
  CurvedSymbol& operator+=(const CurvedSymbol& o);
  CurvedSymbol& operator*=(Complex s);
  CurvedSymbol truncated(int floor) const;
  /// Multiplies every term by q^(−1).
  CurvedSymbol divided_by_q() const;

 private:
  struct Key {
    MultiIndex alpha;
    int j;
    bool operator<(const Key& o) const {
      if (j != o.j) return j < o.j;
      return alpha < o.alpha;
    }
  };
  QuadraticFormPtr q_;
  int dim_;
  int floor_;
  std::map<Key, CliffordValue> terms_;
};

/// Terms of σ(PQ) with order in [lo, hi].
CurvedSymbol compose_orders(const CurvedSymbol& p, const CurvedSymbol& q, int lo, int hi,
                            const CalculusOptions& options = {});

/// Parametrix of a second-order symbol with principal part q · 1, to
/// `depth` orders.
CurvedSymbol curved_parametrix(const CurvedSymbol& p, int depth,
                               const CalculusOptions& options = {});

/// 𝒲 of the order −n part, from ∫_{S^{n−1}} ξ^α q^(−j) =
/// 2π^{n/2} Γ(j)^(−1) √det g · E[ξ^α] with ξ Gaussian of covariance g/2.
Residue curved_residue(const CurvedSymbol& p);

/// Second-order operator with a general θ = 0 principal part g^{ab}ξ_aξ_b.
class CurvedOperator {
 public:
  CurvedOperator(const Symbol& laplacian, const MetricData& metric, CalculusOptions options = {},
                 std::string id = {});

  const CurvedSymbol& symbol() const noexcept { return laplacian_; }
  int dimension() const noexcept { return laplacian_.dimension(); }
  const CalculusOptions& options() const noexcept { return options_; }
  const CurvedSymbol& inverse_power(int k, int depth);
  FunctionalReport residue_with(const Symbol& x, int k, const std::string& functional);

 private:
  CurvedSymbol laplacian_;
  CalculusOptions options_;
  std::string id_;
  std::optional<CurvedSymbol> parametrix_;
  int parametrix_depth_ = 0;
  std::map<std::pair<int, int>, CurvedSymbol> powers_;
};

FunctionalReport metric_vf(CurvedOperator& L, const Symbol& V, const Symbol& W,
                           const std::optional<TorusElement>& f = std::nullopt);
FunctionalReport einstein_vf(CurvedOperator& L, const Symbol& V, const Symbol& W,
                             const std::optional<TorusElement>& f = std::nullopt);

}  // namespace wodzicki
