#pragma once

#include <random>
#include <vector>

#include "wodzicki/torus_element.hpp"

namespace wodzicki {

/// Deterministic generators for test and verification inputs.
class DataGenerator {
 public:
  explicit DataGenerator(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi);
  int uniform_int(int lo, int hi);

  /// Random lattice vector with entries in [-radius, radius], restricted to
  /// the listed axes (all axes when empty).
  std::vector<int> lattice_vector(int n, int radius, const std::vector<int>& axes = {});

  /// Trigonometric polynomial with `modes` random nonzero modes of radius <= radius
  /// and complex coefficients of modulus <= amplitude.
  TorusElement trig_poly(const DeformationPtr& defm, int modes, int radius, double amplitude,
                         Side side = Side::Left, const std::vector<int>& axes = {});

  /// Self-adjoint element c0 + Σ (c_k e_k + (c_k e_k)*) with ‖· − c0‖₁ <= 2·modes·amplitude.
  TorusElement self_adjoint(const DeformationPtr& defm, double c0, int modes, int radius,
                            double amplitude, Side side = Side::Left,
                            const std::vector<int>& axes = {});

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace wodzicki
