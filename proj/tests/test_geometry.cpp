#include <doctest.h>

#include <cmath>
#include <vector>

#include "wodzicki/errors.hpp"
#include "wodzicki/functionals.hpp"
#include "wodzicki/geometry.hpp"
#include "wodzicki/random_data.hpp"

using namespace wodzicki;

namespace {

TorusElement cosine(const DeformationPtr& defm, int axis, int k, double amp) {
  std::vector<int> p(static_cast<std::size_t>(defm->dimension()), 0), m = p;
  p[static_cast<std::size_t>(axis)] = k;
  m[static_cast<std::size_t>(axis)] = -k;
  return TorusElement::monomial(defm, p, amp / 2) + TorusElement::monomial(defm, m, amp / 2);
}

double max_abs(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s = std::max(s, std::abs(x));
  return s;
}

// Positive definite non-conformal metric on T².
MetricData general_t2(const DeformationPtr& defm) {
  auto one = TorusElement::one(defm);
  auto g11 = one + cosine(defm, 0, 1, 0.3);
  auto g22 = one + cosine(defm, 1, 1, 0.2) + cosine(defm, 0, 1, 0.1);
  const int k[] = {1, 1};
  const int km[] = {-1, -1};
  auto g12 = TorusElement::monomial(defm, k, 0.05) + TorusElement::monomial(defm, km, 0.05);
  return MetricData::general(defm, {g11, g12, g12, g22});
}

}  // namespace

TEST_CASE("flat metric has no curvature") {
  for (int n : {2, 4}) {
    auto defm = DeformationMatrix::commutative(n);
    auto c = curvature_tensors(MetricData::flat(defm), n == 2 ? 16 : 8);
    CHECK(max_abs(c.ricci.values) < 1e-14);
    CHECK(max_abs(c.scalar.values) < 1e-14);
    CHECK(max_abs(c.einstein.values) < 1e-14);
    std::vector<TorusElement> V(static_cast<std::size_t>(n), TorusElement::one(defm));
    CHECK(std::abs(functional_oracle(c, OracleKind::Einstein, V, V)) < 1e-14);
  }
}

TEST_CASE("Einstein tensor vanishes in dimension two") {
  auto defm = DeformationMatrix::commutative(2);
  auto c = curvature_tensors(general_t2(defm));
  CHECK(max_abs(c.scalar.values) > 1e-2);
  CHECK(max_abs(c.einstein.values) < 1e-10);
  CHECK(max_abs(c.einstein_up.values) < 1e-10);
}

TEST_CASE("conformally flat T4 against the closed-form Einstein tensor") {
  auto defm = DeformationMatrix::commutative(4);
  auto k = TorusElement::one(defm) + cosine(defm, 0, 1, 0.1) + cosine(defm, 2, 1, 0.05);
  const int m = 24;
  auto c = curvature_tensors(MetricData::conformally_flat(k, -4), m);
  const auto G = reference::conformal_einstein_tensor(k);
  double diff = 0.0, scale = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      // the tail beyond the grid is below 1e-12
      const auto closed = sample(G[static_cast<std::size_t>(4 * a + b)].pruned(1e-13), m);
      const auto oracle = c.einstein.component({a, b});
      for (std::size_t p = 0; p < closed.size(); ++p) {
        diff = std::max(diff, std::abs(closed[p] - oracle[p]));
        scale = std::max(scale, std::abs(oracle[p]));
      }
    }
  CHECK(scale > 1e-2);
  CHECK(diff < 1e-8);
}

TEST_CASE("contracted Bianchi identity and Riemann symmetries") {
  auto d2 = DeformationMatrix::commutative(2);
  CHECK(riemann_symmetry_residual(general_t2(d2), 32) < 1e-10);

  auto d4 = DeformationMatrix::commutative(4);
  auto one = TorusElement::one(d4);
  auto g00 = one + cosine(d4, 1, 1, 0.2);
  auto g11 = one + cosine(d4, 0, 1, 0.15);
  const int k[] = {0, 0, 1, 0};
  const int km[] = {0, 0, -1, 0};
  auto g01 = TorusElement::monomial(d4, k, 0.04) + TorusElement::monomial(d4, km, 0.04);
  auto z = TorusElement::zero(d4);
  MetricData g = MetricData::general(
      d4, {g00, g01, z, z, g01, g11, z, z, z, z, one + cosine(d4, 3, 1, 0.1), z, z, z, z, one});
  auto c = curvature_tensors(g, 16);
  CHECK(max_abs(c.einstein.values) > 1e-3);
  CHECK(bianchi_residual(c) < 1e-7);
  CHECK(riemann_symmetry_residual(g, 12, 7) < 1e-10);
}

TEST_CASE("oracle normalisation on the flat 2-torus") {
  auto defm = DeformationMatrix::commutative(2);
  auto c = curvature_tensors(MetricData::flat(defm), 8);
  auto one = TorusElement::one(defm);
  auto zero = TorusElement::zero(defm);
  // −(v₁/2) τ(1) with v₁ = 2π
  CHECK(std::abs(functional_oracle(c, OracleKind::Metric, {one, zero}, {one, zero}) + M_PI) < 1e-14);
  CHECK(std::abs(functional_oracle(c, OracleKind::Metric, {one, zero}, {zero, one})) < 1e-14);
  CHECK(std::abs(functional_oracle(c, OracleKind::Volume, {}, {}) - 2.0 * M_PI) < 1e-14);
}

TEST_CASE("scalar Einstein-Hilbert oracle against the Wodzicki residue of L^(-m+1)") {
  auto defm = DeformationMatrix::commutative(4);
  auto chi = TorusElement::one(defm) + cosine(defm, 0, 1, 0.2) + cosine(defm, 1, 1, 0.1);
  MetricData metric = MetricData::conformally_flat(chi, 1);
  CalculusOptions opts;
  SpectralOperator L(build_laplace_type(metric, ConnectionData::trivial(), opts), opts);
  const Symbol id = Symbol::monomial(CliffordValue::identity(defm, 1), {0, 0, 0, 0}, 0);
  const auto r = L.residue_with(id, 1, "scalar-eh");
  auto c = curvature_tensors(metric);
  const Complex expected = functional_oracle(c, OracleKind::ScalarEH, {}, {});
  CHECK(std::abs(expected) > 1e-3);
  CHECK(std::abs(r.value - expected) < 1e-6 * std::abs(expected));
}

TEST_CASE("geometry rejects invalid metrics") {
  auto nc = DeformationMatrix::two_torus(0.3);
  CHECK_THROWS_AS(curvature_tensors(MetricData::flat(nc)), ConfigurationError);
  auto defm = DeformationMatrix::commutative(2);
  auto one = TorusElement::one(defm);
  auto bad = one + cosine(defm, 0, 1, 2.5);
  CHECK_THROWS_AS(curvature_tensors(MetricData::general(defm, {bad, TorusElement::zero(defm),
                                                               TorusElement::zero(defm), one})),
                  ConfigurationError);
}
