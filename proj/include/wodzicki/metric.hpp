#pragma once

#include <optional>
#include <vector>

#include "wodzicki/clifford.hpp"

namespace wodzicki {

enum class MetricMode { Flat, ConformallyFlat, GeneralFourier };

/// Riemannian metric on the torus given by Fourier data.
///
/// ConformallyFlat stores g_ab = factor^exponent δ_ab, so each convention in
/// use (h² for the 2-torus Laplacian, χ for the 4-torus Laplacian, k^(−4) for
/// the Dirac operator) is explicit. GeneralFourier requires θ = 0.
struct MetricData {
  MetricMode mode = MetricMode::Flat;
  DeformationPtr defm;
  std::optional<TorusElement> factor;
  int exponent = 0;
  std::vector<TorusElement> components;  // g_ab, row-major n × n

  static MetricData flat(DeformationPtr defm);
  static MetricData conformally_flat(const TorusElement& factor, int exponent);
  static MetricData general(DeformationPtr defm, std::vector<TorusElement> g);

  int dimension() const { return defm->dimension(); }
  const TorusElement& component(int a, int b) const;
};

/// Connection ∇_a = ∂_a − T_a and endomorphism E on a trivial bundle of rank
/// `rank`. The coefficients are full x-dependent values; empty T means T = 0.
struct ConnectionData {
  int rank = 1;
  std::vector<CliffordValue> T;
  std::optional<CliffordValue> E;

  static ConnectionData trivial(int rank = 1) { return ConnectionData{rank, {}, std::nullopt}; }
  bool has_connection() const { return !T.empty(); }
};

}  // namespace wodzicki
