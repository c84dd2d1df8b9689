#pragma once

#include <array>
#include <map>
#include <vector>

#include "wodzicki/clifford.hpp"

namespace wodzicki {

using MultiIndex = std::array<int, kMaxDimension>;

/// Floor value marking a symbol as exact (all orders known, e.g. a
/// differential operator).
inline constexpr int kExactFloor = -1000;

/// coeff · ξ^alpha · ‖ξ‖^(−2j), homogeneous of order |alpha| − 2j.
struct SymbolTerm {
  CliffordValue coeff;
  MultiIndex alpha{};
  int j = 0;

  int order() const;
};

/// Controls truncation and pruning of symbol products.
struct CalculusOptions {
  /// Number of leading orders kept by compose/parametrix/powers.
  int depth = 3;
  /// Relative pruning threshold applied to each output coefficient of a
  /// composition (|c| <= prune_rel · ‖coeff‖₁ is dropped). 0 keeps everything.
  double prune_rel = 1e-16;
  /// Inverses feed derivatives, so their tails are kept further out than
  /// the plain InversionOptions default.
  InversionOptions inversion{1e-13, 48, 400};
};

/// Finite sum of homogeneous terms with coefficients in matrices over the
/// torus algebra. Terms are stored in the canonical form alpha_n <= 1
/// (ξ_n² is eliminated through ‖ξ‖²), which makes the representation unique.
///
/// Orders below floor() are not tracked; floor() == kExactFloor means the
/// symbol is exact.
class Symbol {
 public:
  Symbol(DeformationPtr defm, int matrix_dim, int floor = kExactFloor);

  /// c · ‖ξ‖^(−2j) ξ^alpha with c a matrix value.
  static Symbol monomial(const CliffordValue& c, const MultiIndex& alpha, int j,
                         int floor = kExactFloor);
  /// Order-zero symbol c.
  static Symbol constant(const CliffordValue& c);

  int dimension() const noexcept { return defm_->dimension(); }
  int matrix_dim() const noexcept { return matrix_dim_; }
  const DeformationPtr& deformation() const noexcept { return defm_; }
  int floor() const noexcept { return floor_; }
  bool is_exact() const noexcept { return floor_ == kExactFloor; }
  void set_floor(int floor) noexcept { floor_ = floor; }

  bool is_zero() const noexcept { return terms_.empty(); }
  /// Highest order carrying a term; floor() when empty.
  int top_order() const;
  std::vector<int> orders() const;
  std::vector<SymbolTerm> component(int order) const;
  std::vector<SymbolTerm> terms() const;
  std::size_t size() const noexcept { return terms_.size(); }

  /// Adds s·c·ξ^alpha‖ξ‖^(−2j) after canonicalisation.
  void add_term(const CliffordValue& c, const MultiIndex& alpha, int j, Complex s = 1.0);

  /// Terms of order in [lo, hi]; the floor becomes max(floor, lo).
  Symbol restricted(int lo, int hi) const;
  /// Drops terms below `floor` and records the new floor.
  Symbol truncated(int floor) const;

  Symbol operator-() const;
  Symbol& operator+=(const Symbol& o);
  Symbol& operator-=(const Symbol& o);
  Symbol& operator*=(Complex s);
  friend Symbol operator+(Symbol a, const Symbol& b) { return a += b; }
  friend Symbol operator-(Symbol a, const Symbol& b) { return a -= b; }
  friend Symbol operator*(Complex s, Symbol a) { return a *= s; }

  /// Coefficientwise multiplication by a matrix value (no ξ dependence).
  Symbol left_multiply(const CliffordValue& c) const;
  Symbol right_multiply(const CliffordValue& c) const;

  /// ∂/∂ξ_axis of the symbol.
  Symbol derive_xi(int axis) const;
  /// δ_axis applied to all coefficients.
  Symbol derive_x(int axis) const;

  /// Value at a point ξ ≠ 0.
  CliffordValue evaluate(std::span<const double> xi) const;

  /// Largest entrywise coefficient difference over canonical terms.
  static double max_abs_difference(const Symbol& a, const Symbol& b);

  /// Largest coefficient ℓ¹ norm over terms.
  double max_norm1() const;

 private:
  struct Key {
    int order;
    MultiIndex alpha;
    bool operator<(const Key& o) const {
      if (order != o.order) return order > o.order;
      return alpha < o.alpha;
    }
  };
  void check_compatible(const Symbol& o) const;
  void add_canonical(const Key& key, const CliffordValue& c, Complex s);

  DeformationPtr defm_;
  int matrix_dim_;
  int floor_;
  std::map<Key, CliffordValue> terms_;

  friend Symbol compose_orders(const Symbol&, const Symbol&, int, int, const CalculusOptions&,
                               int);
};

/// σ(PQ) = Σ_β (1/β!) ∂_ξ^β σ(P) · δ^β σ(Q), truncated to options.depth leading
/// orders (depth <= 0: every order determined by the operand floors).
Symbol compose(const Symbol& p, const Symbol& q, const CalculusOptions& options = {});

/// Only the terms of the composition whose order lies in [lo, hi]. Throws
/// PreconditionError if lo is below the orders determined by the operands.
/// max_beta limits the number of ξ derivatives (−1: unlimited).
Symbol compose_orders(const Symbol& p, const Symbol& q, int lo, int hi,
                      const CalculusOptions& options = {}, int max_beta = -1);

/// Product of the symbols as functions (β = 0 term only).
Symbol pointwise_product(const Symbol& p, const Symbol& q);

struct Parametrix {
  Symbol symbol;
  double inversion_residual = 0.0;
};

/// Recursive parametrix b₂ + b₃ + … (options.depth orders) of a second-order
/// symbol with principal part c·‖ξ‖², c an invertible scalar matrix value.
Parametrix parametrix(const Symbol& p, const CalculusOptions& options = {});

/// σ(B^l) by iterated composition B·(B·(…)).
Symbol power_symbols(const Symbol& b, int l, const CalculusOptions& options = {});

/// The three leading symbols of P^l from the closed form valid for commuting
/// scalar coefficients. p0, p1, p2 are the homogeneous components of orders
/// −k, −k−1, −k−2.
Symbol scalar_power_closed_form(const Symbol& p0, const Symbol& p1, const Symbol& p2, int l);

}  // namespace wodzicki
