#include <doctest.h>

#include <cmath>
#include <random>

#include "wodzicki/errors.hpp"
#include "wodzicki/random_data.hpp"
#include "wodzicki/residue.hpp"

using namespace wodzicki;

namespace {

MultiIndex mi(int a = 0, int b = 0, int c = 0, int d = 0) { return {a, b, c, d}; }

// Number of perfect matchings of the index list that only pair equal labels.
std::int64_t matchings(std::vector<int> labels) {
  if (labels.empty()) return 1;
  const int first = labels.front();
  std::int64_t count = 0;
  for (std::size_t i = 1; i < labels.size(); ++i) {
    if (labels[i] != first) continue;
    std::vector<int> rest;
    for (std::size_t j = 1; j < labels.size(); ++j)
      if (j != i) rest.push_back(labels[j]);
    count += matchings(rest);
  }
  return count;
}

}  // namespace

TEST_CASE("sphere volumes") {
  CHECK(sphere_volume(2) == doctest::Approx(2.0 * M_PI).epsilon(1e-15));
  CHECK(sphere_volume(4) == doctest::Approx(2.0 * M_PI * M_PI).epsilon(1e-15));
}

TEST_CASE("moments against pairing counts") {
  for (int n : {2, 4}) {
    double trace = 0.0;
    for (int a = 0; a < n; ++a) {
      MultiIndex al{};
      al[static_cast<std::size_t>(a)] = 2;
      auto m = sphere_moment(n, al);
      CHECK(m.num * n == m.den);
      trace += m.v_coeff();
    }
    CHECK(trace == 1.0);
    for (int a = 0; a <= 6; ++a)
      for (int b = 0; a + b <= 6; ++b)
        for (int c = 0; a + b + c <= 6 && (n == 4 || c == 0); ++c) {
          MultiIndex al = mi(a, b, c);
          auto m = sphere_moment(n, al);
          std::vector<int> labels;
          for (int i = 0; i < a; ++i) labels.push_back(0);
          for (int i = 0; i < b; ++i) labels.push_back(1);
          for (int i = 0; i < c; ++i) labels.push_back(2);
          std::int64_t den = 1;
          for (int k = 0; k < static_cast<int>(labels.size()) / 2; ++k) den *= n + 2 * k;
          const double expect =
              labels.size() % 2 ? 0.0 : static_cast<double>(matchings(labels)) / den;
          CHECK(m.v_coeff() == doctest::Approx(expect).epsilon(1e-15));
        }
  }
  CHECK(sphere_moment(4, mi(4)).v_coeff() == doctest::Approx(1.0 / 8.0));
  CHECK(sphere_moment(4, mi(1, 1, 1)).num == 0);
}

TEST_CASE("moment of xi_1^4 on S^3 by Monte Carlo") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  const int samples = 400000;
  double acc = 0.0;
  for (int s = 0; s < samples; ++s) {
    double x[4], r2 = 0.0;
    for (double& v : x) {
      v = g(rng);
      r2 += v * v;
    }
    acc += std::pow(x[0] * x[0] / r2, 2);
  }
  CHECK(std::abs(acc / samples - sphere_moment(4, mi(4)).v_coeff()) < 1e-3);
}

TEST_CASE("fault hook perturbs moments") {
  set_moment_fault(true);
  const double bad = sphere_moment(2, mi(2)).v_coeff();
  set_moment_fault(false);
  CHECK(bad == doctest::Approx(0.5 * 1.001));
  CHECK(sphere_moment(2, mi(2)).v_coeff() == 0.5);
}

TEST_CASE("residue of the flat inverse Laplacian") {
  for (int n : {2, 4}) {
    auto defm = DeformationMatrix::commutative(n);
    auto b = Symbol::monomial(CliffordValue::identity(defm, 1), mi(), n / 2, -n);
    auto r = wodzicki_residue(b);
    CHECK(r.value.real() == doctest::Approx(sphere_volume(n)).epsilon(1e-15));
    CHECK(r.v_coeff.real() == doctest::Approx(1.0));
    CHECK(std::abs(r.density.trace() - r.value) < 1e-15);
  }
}

TEST_CASE("residue vanishes without an order -n part and checks tracking") {
  auto defm = DeformationMatrix::two_torus(1.3);
  auto b = Symbol::monomial(CliffordValue::identity(defm, 1), mi(), 2, -5);
  auto r = wodzicki_residue(b);
  CHECK(r.component_missing);
  CHECK(r.value == Complex{});
  auto shallow = Symbol::monomial(CliffordValue::identity(defm, 1), mi(), 1, -1);
  CHECK_THROWS_AS(wodzicki_residue(shallow), PreconditionError);
}

TEST_CASE("trace property on zero-order products") {
  auto defm = DeformationMatrix::two_torus(2.0 * M_PI / std::sqrt(2.0));
  DataGenerator gen(17);
  auto a = gen.trig_poly(defm, 4, 2, 1.0);
  auto b = gen.trig_poly(defm, 4, 2, 1.0);
  auto sym = [&](const TorusElement& x) {
    return Symbol::monomial(CliffordValue::scalar(x, 1), mi(), 1, -2);
  };
  auto r1 = wodzicki_residue(sym(a * b));
  auto r2 = wodzicki_residue(sym(b * a));
  CHECK(std::abs(r1.value - r2.value) < 1e-12);
  auto lin = wodzicki_residue(sym(a + b));
  CHECK(TorusElement::max_abs_difference(
            lin.density, wodzicki_residue(sym(a)).density + wodzicki_residue(sym(b)).density) <
        1e-14);
}
