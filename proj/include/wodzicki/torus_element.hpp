#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "wodzicki/deformation.hpp"

namespace wodzicki {

using Complex = std::complex<double>;

/// Lattice index (k, k°) of a basis monomial e_k ⊗ e°_k° of the enlarged
/// algebra. Components beyond the torus dimension are zero.
struct LatticeIndex {
  std::array<int, kMaxDimension> left{};
  std::array<int, kMaxDimension> right{};

  friend bool operator==(const LatticeIndex&, const LatticeIndex&) = default;
};

/// Packed lattice index: eight signed bytes, fields 0..3 for the left
/// algebra, 4..7 for the commutant copy.
using LatticeKey = std::uint64_t;

LatticeKey pack(const LatticeIndex& idx);
LatticeIndex unpack(LatticeKey key);
inline int key_field(LatticeKey key, int field) {
  return static_cast<int>(static_cast<std::int8_t>((key >> (8 * field)) & 0xFF));
}

/// Which copy of the torus algebra an element lives in.
enum class Side { Left, Right, Mixed };

/// Element of the enlarged deformed torus algebra Â = A·A° with finite
/// Fourier support, stored as coefficients on ordered monomials
/// e_k = U_1^k1 ··· U_n^kn (and their commutant copies).
///
/// e_k e_l = chi(k, l) e_{k+l} with chi(k, l) = exp(i Σ_{a>b} θ_ab k_a l_b);
/// the commutant copy multiplies in the opposite order, so left and right
/// monomials commute exactly. Values are immutable in practice: every
/// operation returns a new element.
class TorusElement {
 public:
  struct Term {
    LatticeKey key;
    Complex coeff;
  };

  explicit TorusElement(DeformationPtr defm);

  static TorusElement zero(DeformationPtr defm) { return TorusElement(std::move(defm)); }
  static TorusElement scalar(DeformationPtr defm, Complex c);
  static TorusElement one(DeformationPtr defm) { return scalar(std::move(defm), 1.0); }
  /// c · e_k (left algebra).
  static TorusElement monomial(DeformationPtr defm, std::span<const int> k, Complex c = 1.0);
  /// c · e°_k (commutant copy).
  static TorusElement opposite_monomial(DeformationPtr defm, std::span<const int> k,
                                        Complex c = 1.0);
  /// Builds from unsorted terms; duplicates are summed, exact zeros dropped.
  static TorusElement from_terms(DeformationPtr defm, std::vector<Term> terms);

  const DeformationPtr& deformation() const noexcept { return defm_; }
  int dimension() const noexcept { return defm_->dimension(); }
  std::span<const Term> terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_scalar() const noexcept;
  Side side() const noexcept;

  Complex coefficient(const LatticeIndex& idx) const;
  Complex identity_component() const;
  /// Largest |k_a| or |k°_a| in the support.
  int support_radius() const noexcept;

  double norm1() const noexcept;
  double norm_inf() const noexcept;

  TorusElement operator-() const;
  TorusElement& operator+=(const TorusElement& other);
  TorusElement& operator-=(const TorusElement& other);
  TorusElement& operator*=(Complex s);
  friend TorusElement operator+(TorusElement a, const TorusElement& b) { return a += b; }
  friend TorusElement operator-(TorusElement a, const TorusElement& b) { return a -= b; }
  friend TorusElement operator*(TorusElement a, Complex s) { return a *= s; }
  friend TorusElement operator*(Complex s, TorusElement a) { return a *= s; }
  friend TorusElement operator*(const TorusElement& a, const TorusElement& b);

  /// a += s · b without an intermediate copy of b.
  void add_scaled(const TorusElement& b, Complex s);

  /// δ_axis with δ_a(e_k ⊗ e°_l) = (k_a + l_a) e_k ⊗ e°_l. Axis is 0-based.
  TorusElement derive(int axis) const;
  /// Applies δ^β for a multi-index β.
  TorusElement derive(std::span<const int> beta) const;

  /// Factorized normalised trace τ⊗(e_k ⊗ e°_l) = [k = 0][l = 0].
  Complex trace() const;

  /// Involution with (e_k)* e_k = 1 and (ab)* = b* a*.
  TorusElement adjoint() const;

  /// Copies a left-algebra element into the commutant copy A°.
  TorusElement to_opposite() const;
  /// Copies a commutant-copy element back into A.
  TorusElement to_left() const;

  /// Drops coefficients with |c| <= tol. Explicit; ring operations never prune.
  TorusElement pruned(double tol) const;

  /// Drops coefficients with |c| <= rel_tol · norm1().
  TorusElement pruned_relative(double rel_tol) const;

  TorusElement pow(int exponent) const;

  /// Exact structural equality (same support and coefficients).
  bool operator==(const TorusElement& other) const;

  /// max |a_k - b_k| over the union of supports.
  static double max_abs_difference(const TorusElement& a, const TorusElement& b);

  std::string to_string() const;

 private:
  void check_compatible(const TorusElement& other) const;

  DeformationPtr defm_;
  std::vector<Term> terms_;  // sorted by key, no zero coefficients
};

/// Result of a certified inversion.
/// k as a factor commuting with A: its copy in A° for θ ≠ 0, and k itself
/// in A when θ = 0 (where A is its own commutant and τ is the pointwise
/// integral). Mixed elements are rejected.
TorusElement commutant_image(const TorusElement& k);

struct Inverse {
  TorusElement value;
  double residual;  // ‖a·b − 1‖₁
  int iterations;
};

struct InversionOptions {
  double tol = 1e-13;
  int max_support_radius = 24;
  int max_iterations = 400;
};

/// Neumann inversion around the identity component: a = λ₀(1 + r),
/// b = λ₀⁻¹ Σ (−r)^j with support clipped at the requested radius.
/// Throws InversionError if λ₀ vanishes or the residual stays above tol.
Inverse invert(const TorusElement& a, const InversionOptions& options = {});

}  // namespace wodzicki
