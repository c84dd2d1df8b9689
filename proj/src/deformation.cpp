#include "wodzicki/deformation.hpp"

#include <cmath>

#include "wodzicki/errors.hpp"

namespace wodzicki {

DeformationMatrix::DeformationMatrix(int n, std::vector<std::vector<double>> theta)
    : n_(n), theta_(std::move(theta)), commutative_(true) {
  tables_.resize(static_cast<std::size_t>(n_ * n_));
  for (int a = 0; a < n_; ++a) {
    for (int b = 0; b < a; ++b) {
      const double t = theta_[a][b];
      if (t == 0.0) continue;
      commutative_ = false;
      auto& table = tables_[static_cast<std::size_t>(a * n_ + b)];
      table.resize(2 * kPhaseRange + 1);
      for (int m = -kPhaseRange; m <= kPhaseRange; ++m) {
        table[static_cast<std::size_t>(m + kPhaseRange)] = std::polar(1.0, t * m);
      }
    }
  }
}

std::shared_ptr<const DeformationMatrix> DeformationMatrix::make(
    int n, const std::vector<std::vector<double>>& theta) {
  if (n != 2 && n != 4) {
    throw ConfigurationError("torus dimension must be 2 or 4, got " + std::to_string(n));
  }
  if (static_cast<int>(theta.size()) != n) {
    throw ConfigurationError("theta must be an n x n matrix");
  }
  for (const auto& row : theta) {
    if (static_cast<int>(row.size()) != n) {
      throw ConfigurationError("theta must be an n x n matrix");
    }
  }
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (!std::isfinite(theta[a][b])) throw ConfigurationError("theta has non-finite entries");
      if (std::abs(theta[a][b] + theta[b][a]) > 1e-14) {
        throw ConfigurationError("theta is not skew-symmetric at (" + std::to_string(a) + "," +
                                 std::to_string(b) + ")");
      }
    }
  }
  // Store the exactly skew part so the phase tables are consistent.
  std::vector<std::vector<double>> skew(n, std::vector<double>(n, 0.0));
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < a; ++b) {
      skew[a][b] = theta[a][b];
      skew[b][a] = -theta[a][b];
    }
  }
  return std::shared_ptr<const DeformationMatrix>(new DeformationMatrix(n, std::move(skew)));
}

std::shared_ptr<const DeformationMatrix> DeformationMatrix::commutative(int n) {
  return make(n, std::vector<std::vector<double>>(n, std::vector<double>(n, 0.0)));
}

std::shared_ptr<const DeformationMatrix> DeformationMatrix::two_torus(double t) {
  return make(2, {{0.0, t}, {-t, 0.0}});
}

std::complex<double> DeformationMatrix::pair_phase(int a, int b, int m) const {
  const auto& table = tables_[static_cast<std::size_t>(a * n_ + b)];
  if (table.empty()) return {1.0, 0.0};
  if (m < -kPhaseRange || m > kPhaseRange) return std::polar(1.0, theta_[a][b] * m);
  return table[static_cast<std::size_t>(m + kPhaseRange)];
}

bool DeformationMatrix::same_as(const DeformationMatrix& other) const noexcept {
  return this == &other || (n_ == other.n_ && theta_ == other.theta_);
}

}  // namespace wodzicki
