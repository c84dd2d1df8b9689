#pragma once

#include <complex>
#include <vector>

#include "wodzicki/torus_element.hpp"

namespace wodzicki {

/// Constant square complex matrix, row-major.
struct ConstMatrix {
  int dim = 0;
  std::vector<Complex> data;

  static ConstMatrix identity(int d);
  static ConstMatrix zero(int d);
  Complex& operator()(int r, int c) { return data[static_cast<std::size_t>(r * dim + c)]; }
  Complex operator()(int r, int c) const { return data[static_cast<std::size_t>(r * dim + c)]; }
  Complex trace() const;

  friend ConstMatrix operator*(const ConstMatrix& a, const ConstMatrix& b);
  friend ConstMatrix operator+(const ConstMatrix& a, const ConstMatrix& b);
  friend ConstMatrix operator*(Complex s, const ConstMatrix& a);
};

/// Euclidean gamma matrices in dimension n = 2m acting on C^(2^m).
struct GammaRep {
  int n = 0;
  std::vector<ConstMatrix> gamma;  // gamma[a], a = 0..n-1
  ConstMatrix chirality;

  int spinor_dim() const { return gamma.empty() ? 0 : gamma[0].dim; }
};

/// n = 2: Pauli sigma_x, sigma_y with chirality sigma_z.
/// n = 4: gamma^j = [[0, -i sigma_j], [i sigma_j, 0]] (j = 1..3), gamma^4 = [[0, 1], [1, 0]].
/// Anticommutation is checked on construction.
GammaRep gamma_basis(int n);

/// Square matrix with TorusElement entries, all over one deformation.
class CliffordValue {
 public:
  CliffordValue(DeformationPtr defm, int dim);

  static CliffordValue zero(DeformationPtr defm, int dim) { return CliffordValue(std::move(defm), dim); }
  static CliffordValue identity(DeformationPtr defm, int dim);
  /// x · 1 (x placed on the diagonal).
  static CliffordValue scalar(const TorusElement& x, int dim);
  /// x · M for a constant matrix M.
  static CliffordValue from_const(const TorusElement& x, const ConstMatrix& m);

  int dim() const noexcept { return dim_; }
  const DeformationPtr& deformation() const noexcept { return defm_; }
  const TorusElement& operator()(int r, int c) const { return entries_[index(r, c)]; }
  TorusElement& operator()(int r, int c) { return entries_[index(r, c)]; }

  bool is_zero() const noexcept;
  /// Entries vanish off the diagonal and the diagonal entries coincide.
  bool is_scalar_diagonal() const;
  double norm1() const noexcept;

  CliffordValue operator-() const;
  CliffordValue& operator+=(const CliffordValue& o);
  CliffordValue& operator-=(const CliffordValue& o);
  CliffordValue& operator*=(Complex s);
  void add_scaled(const CliffordValue& o, Complex s);
  friend CliffordValue operator+(CliffordValue a, const CliffordValue& b) { return a += b; }
  friend CliffordValue operator-(CliffordValue a, const CliffordValue& b) { return a -= b; }
  friend CliffordValue operator*(Complex s, CliffordValue a) { return a *= s; }
  friend CliffordValue operator*(const CliffordValue& a, const CliffordValue& b);

  /// x · M and M · x with x acting entrywise.
  friend CliffordValue operator*(const TorusElement& x, const CliffordValue& m);
  friend CliffordValue operator*(const CliffordValue& m, const TorusElement& x);

  CliffordValue derive(int axis) const;
  CliffordValue derive(std::span<const int> beta) const;
  CliffordValue adjoint() const;
  CliffordValue pruned(double tol) const;

  static double max_abs_difference(const CliffordValue& a, const CliffordValue& b);

 private:
  std::size_t index(int r, int c) const { return static_cast<std::size_t>(r * dim_ + c); }
  void check_compatible(const CliffordValue& o) const;

  DeformationPtr defm_;
  int dim_;
  std::vector<TorusElement> entries_;
};

/// Sum of diagonal entries.
TorusElement matrix_trace(const CliffordValue& m);

/// Inverse of x · 1 for a scalar-diagonal value; PreconditionError otherwise.
CliffordValue invert_scalar_diagonal(const CliffordValue& m, const InversionOptions& options,
                                     double* residual = nullptr);

}  // namespace wodzicki
