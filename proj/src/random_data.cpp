#include "wodzicki/random_data.hpp"

#include <cmath>

namespace wodzicki {

double DataGenerator::uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng_);
}

int DataGenerator::uniform_int(int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng_);
}

std::vector<int> DataGenerator::lattice_vector(int n, int radius, const std::vector<int>& axes) {
  std::vector<int> k(static_cast<std::size_t>(n), 0);
  while (true) {
    if (axes.empty()) {
      for (int a = 0; a < n; ++a) k[static_cast<std::size_t>(a)] = uniform_int(-radius, radius);
    } else {
      for (int a : axes) k[static_cast<std::size_t>(a)] = uniform_int(-radius, radius);
    }
    for (int v : k) {
      if (v != 0) return k;
    }
  }
}

TorusElement DataGenerator::trig_poly(const DeformationPtr& defm, int modes, int radius,
                                      double amplitude, Side side, const std::vector<int>& axes) {
  TorusElement x(defm);
  for (int i = 0; i < modes; ++i) {
    const auto k = lattice_vector(defm->dimension(), radius, axes);
    const Complex c = std::polar(uniform(0.2, 1.0) * amplitude, uniform(0.0, 2.0 * M_PI));
    x += side == Side::Right ? TorusElement::opposite_monomial(defm, k, c)
                             : TorusElement::monomial(defm, k, c);
  }
  return x;
}

TorusElement DataGenerator::self_adjoint(const DeformationPtr& defm, double c0, int modes,
                                         int radius, double amplitude, Side side,
                                         const std::vector<int>& axes) {
  TorusElement p = trig_poly(defm, modes, radius, amplitude, side, axes);
  TorusElement x = p + p.adjoint();
  x += TorusElement::scalar(defm, c0);
  return x;
}

}  // namespace wodzicki
