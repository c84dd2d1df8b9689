#pragma once

#include <complex>
#include <memory>
#include <vector>

namespace wodzicki {

/// Maximum torus dimension handled by the lattice key packing.
inline constexpr int kMaxDimension = 4;

/// Skew-symmetric deformation parameters of the torus algebra,
/// U_a U_b = exp(i theta_ab) U_b U_a.
///
/// Instances are immutable and shared between all elements built over them;
/// phase tables for the ordered-monomial bicharacter are filled once at
/// construction.
class DeformationMatrix {
 public:
  /// Throws ConfigurationError unless n is 2 or 4 and theta is n x n and
  /// skew-symmetric to 1e-14.
  static std::shared_ptr<const DeformationMatrix> make(
      int n, const std::vector<std::vector<double>>& theta);

  /// Commutative torus of dimension n.
  static std::shared_ptr<const DeformationMatrix> commutative(int n);

  /// theta_12 = -theta_21 = t (n = 2); for n = 4 the given full matrix is
  /// used through make().
  static std::shared_ptr<const DeformationMatrix> two_torus(double t);

  int dimension() const noexcept { return n_; }
  double theta(int a, int b) const { return theta_[a][b]; }
  const std::vector<std::vector<double>>& theta() const noexcept { return theta_; }
  bool is_commutative() const noexcept { return commutative_; }

  /// exp(i theta_ab m) for a > b; m is the integer winding of the pair.
  std::complex<double> pair_phase(int a, int b, int m) const;

  /// Value equality (dimension and all theta entries).
  bool same_as(const DeformationMatrix& other) const noexcept;

  /// Largest |m| covered by the phase tables: 2·r·s for operand radii with
  /// r + s <= 127.
  static constexpr int kPhaseRange = 2 * 63 * 64;

  /// Pointer p with p[m] = exp(i theta_ab m) for |m| <= kPhaseRange, or
  /// nullptr when theta_ab = 0.
  const std::complex<double>* phase_table(int a, int b) const noexcept {
    const auto& t = tables_[static_cast<std::size_t>(a * n_ + b)];
    return t.empty() ? nullptr : t.data() + kPhaseRange;
  }

 private:
  DeformationMatrix(int n, std::vector<std::vector<double>> theta);

  int n_;
  std::vector<std::vector<double>> theta_;
  bool commutative_;
  // tables_[a * n + b] for a > b with nonzero theta, empty otherwise.
  std::vector<std::vector<std::complex<double>>> tables_;
};

using DeformationPtr = std::shared_ptr<const DeformationMatrix>;

}  // namespace wodzicki
