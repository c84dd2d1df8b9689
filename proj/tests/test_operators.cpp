#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include "wodzicki/errors.hpp"
#include "wodzicki/geometry.hpp"
#include "wodzicki/operators.hpp"
#include "wodzicki/random_data.hpp"

using namespace wodzicki;

namespace {

DeformationPtr nc2() { return DeformationMatrix::two_torus(2.0 * M_PI / std::sqrt(2.0)); }

TorusElement cosine(const DeformationPtr& defm, int axis, double amp) {
  std::vector<int> p(static_cast<std::size_t>(defm->dimension()), 0), m = p;
  p[static_cast<std::size_t>(axis)] = 1;
  m[static_cast<std::size_t>(axis)] = -1;
  return TorusElement::monomial(defm, p, amp / 2) + TorusElement::monomial(defm, m, amp / 2);
}

MultiIndex unit(int a) {
  MultiIndex e{};
  e[static_cast<std::size_t>(a)] = 1;
  return e;
}

// Value of the order-`order` part at ξ.
CliffordValue part_at(const Symbol& s, int order, std::span<const double> xi) {
  return s.restricted(order, order).evaluate(xi);
}

}  // namespace

TEST_CASE("flat Dirac squares to the Laplacian") {
  for (int n : {2, 4}) {
    auto defm = n == 2 ? nc2() : DeformationMatrix::commutative(4);
    const Symbol D = build_flat_dirac(defm);
    const int dim = D.matrix_dim();
    CHECK(dim == (n == 2 ? 2 : 4));
    CHECK(Symbol::max_abs_difference(compose(D, D), build_flat_laplacian(defm, dim)) < 1e-15);
  }
}

TEST_CASE("conformal Dirac") {
  auto defm = nc2();
  CHECK(Symbol::max_abs_difference(build_conformal_dirac(TorusElement::one(defm)),
                                   build_flat_dirac(defm)) < 1e-15);

  DataGenerator gen(5);
  auto k = gen.self_adjoint(defm, 1.0, 2, 1, 0.1);
  const Symbol D = build_conformal_dirac(k);
  const Symbol D2 = compose(D, D);
  CHECK(D2.top_order() == 2);
  const std::array<double, 2> xi{0.3, -0.8};
  const auto k4 = commutant_image(k).pow(4) * Complex(xi[0] * xi[0] + xi[1] * xi[1]);
  CHECK(CliffordValue::max_abs_difference(part_at(D2, 2, xi), CliffordValue::scalar(k4, 2)) < 1e-14);
}

TEST_CASE("conformal Laplacian builders") {
  auto defm = nc2();
  auto one = TorusElement::one(defm);
  CHECK(Symbol::max_abs_difference(build_conformal_laplacian(one, ConformalVariant::TwoTorus),
                                   build_flat_laplacian(defm)) < 1e-15);
  auto d4 = DeformationMatrix::commutative(4);
  CHECK(Symbol::max_abs_difference(
            build_conformal_laplacian(TorusElement::one(d4), ConformalVariant::FourTorus),
            build_flat_laplacian(d4)) < 1e-15);

  DataGenerator gen(6);
  auto h = gen.self_adjoint(defm, 1.0, 3, 2, 0.08);
  const Symbol L = build_conformal_laplacian(h, ConformalVariant::TwoTorus);
  CHECK(L.orders() == std::vector<int>{2, 1, 0});
  const auto hinv = invert(h).value;
  const std::array<double, 2> xi{0.6, 0.25};
  const auto expected = hinv * hinv * Complex(xi[0] * xi[0] + xi[1] * xi[1]);
  CHECK(CliffordValue::max_abs_difference(part_at(L, 2, xi), CliffordValue::scalar(expected, 1)) <
        1e-13);
}

TEST_CASE("Laplace-type operators on the flat torus") {
  auto defm = DeformationMatrix::commutative(4);
  auto metric = MetricData::flat(defm);
  CHECK(Symbol::max_abs_difference(build_laplace_type(metric, ConnectionData::trivial()),
                                   build_flat_laplacian(defm)) < 1e-15);

  auto e = cosine(defm, 1, 0.7) + TorusElement::scalar(defm, 0.2);
  ConnectionData withE = ConnectionData::trivial();
  withE.E = CliffordValue::scalar(e, 1);
  const Symbol LE = build_laplace_type(metric, withE);
  CHECK(Symbol::max_abs_difference(LE - build_flat_laplacian(defm),
                                   Symbol::constant(CliffordValue::scalar(e, 1))) < 1e-15);

  // T_a = i A_a with ∂ = iδ: −(∂_a − T_a)² has symbol
  // ‖ξ‖² − 2 A_a ξ_a + (A_a A_a − δ_a A_a).
  std::vector<TorusElement> A = {cosine(defm, 1, 0.4), cosine(defm, 0, 0.3),
                                 TorusElement::scalar(defm, 0.25), cosine(defm, 2, 0.2)};
  ConnectionData conn = ConnectionData::trivial();
  for (const auto& a : A) conn.T.push_back(CliffordValue::scalar(a * Complex(0, 1), 1));
  const Symbol LT = build_laplace_type(metric, conn);
  Symbol hand = build_flat_laplacian(defm);
  TorusElement zero_order(defm);
  for (int a = 0; a < 4; ++a) {
    const auto& Aa = A[static_cast<std::size_t>(a)];
    hand.add_term(CliffordValue::scalar(Aa, 1), unit(a), 0, -2.0);
    zero_order += Aa * Aa - Aa.derive(a);
  }
  hand.add_term(CliffordValue::scalar(zero_order, 1), MultiIndex{}, 0);
  CHECK(Symbol::max_abs_difference(LT, hand) < 1e-15);
}

TEST_CASE("product Dirac on the flat 2-torus") {
  auto defm = nc2();
  const Complex c(0.3, 0.4);
  const Symbol D = build_product_dirac(build_flat_dirac(defm), c);
  CHECK(D.matrix_dim() == 4);
  Symbol expected = build_flat_laplacian(defm, 4);
  expected += Symbol::constant(CliffordValue::scalar(TorusElement::scalar(defm, std::norm(c)), 4));
  CHECK(Symbol::max_abs_difference(compose(D, D), expected) < 1e-15);
}

TEST_CASE("vector fields and one-forms") {
  auto defm = DeformationMatrix::commutative(2);
  auto one = TorusElement::one(defm);
  auto zero = TorusElement::zero(defm);
  VectorFieldSpec V{{one, zero}}, W{{zero, one}};
  Symbol expected(defm, 1);
  expected.add_term(CliffordValue::identity(defm, 1), MultiIndex{1, 1}, 0, -1.0);
  CHECK(Symbol::max_abs_difference(compose(build_vector_field(V), build_vector_field(W)), expected) <
        1e-15);

  VectorFieldSpec d1{{one, zero}, VectorFlavor::Derivation};
  const Symbol xi1 = Symbol::monomial(CliffordValue::identity(defm, 1), unit(0), 0);
  CHECK(Symbol::max_abs_difference(build_vector_field(d1), xi1) < 1e-15);

  auto nc = nc2();
  DataGenerator gen(8);
  std::vector<TorusElement> comps = {gen.trig_poly(nc, 2, 1, 0.5), gen.trig_poly(nc, 2, 1, 0.5)};
  VectorFieldSpec rescaled{comps, VectorFlavor::Rescaled, TorusElement::one(nc)};
  VectorFieldSpec derivation{comps, VectorFlavor::Derivation};
  CHECK(Symbol::max_abs_difference(build_vector_field(rescaled), build_vector_field(derivation)) <
        1e-15);

  const GammaRep rep = gamma_basis(2);
  const auto g1 = one_form_value(OneFormSpec{{one, zero}}, rep);
  CHECK(CliffordValue::max_abs_difference(g1, CliffordValue::from_const(one, rep.gamma[0])) == 0.0);
  const auto same = one_form_value(OneFormSpec{{one, zero}, one}, rep);
  CHECK(CliffordValue::max_abs_difference(same, g1) < 1e-15);
}

TEST_CASE("spin Dirac operator of a conformally flat 4-torus") {
  auto defm = DeformationMatrix::commutative(4);
  auto k = TorusElement::one(defm) + cosine(defm, 0, 0.06) + cosine(defm, 1, 0.04);
  const MetricData metric = MetricData::conformally_flat(k, -4);
  CalculusOptions opts;
  const Symbol D = build_spin_dirac(metric, opts);
  const Symbol lap = build_spin_laplacian(metric, opts);

  // the spin Laplacian is the Laplace-type operator of the spin connection
  ConnectionData conn = spin_connection(metric, opts);
  CHECK(Symbol::max_abs_difference(build_laplace_type(metric, conn, opts), lap) < 1e-14);

  // D² = spin Laplacian + R/4
  const Symbol diff = compose(D, D) - lap;
  CHECK(diff.restricted(1, 2).max_norm1() < 1e-14);
  const auto zero_part = diff.component(0);
  REQUIRE(zero_part.size() == 1);
  REQUIRE(zero_part[0].alpha == MultiIndex{});
  const CliffordValue d0 = zero_part[0].coeff;
  CHECK(CliffordValue::max_abs_difference(d0, CliffordValue::scalar(d0(0, 0), 4)) < 1e-14);
  const int m = 20;
  const auto quarter = d0(0, 0).pruned(1e-14);
  REQUIRE(2 * quarter.support_radius() < m);
  const auto values = sample(quarter, m);
  const auto curv = curvature_tensors(metric, m);
  double err = 0.0, scale = 0.0;
  for (std::size_t p = 0; p < values.size(); ++p) {
    err = std::max(err, std::abs(values[p] - 0.25 * curv.scalar.values[p]));
    scale = std::max(scale, std::abs(curv.scalar.values[p]));
  }
  CHECK(scale > 1e-3);
  CHECK(err < 1e-10 * scale);
}

TEST_CASE("builder preconditions") {
  auto nc = nc2();
  auto k = TorusElement::one(nc) + cosine(nc, 0, 0.2);
  CHECK_THROWS_AS(build_laplace_type(MetricData::conformally_flat(k, 2), ConnectionData::trivial()),
                  ConfigurationError);
  VectorFieldSpec no_weight{{k, k}, VectorFlavor::Rescaled};
  CHECK_THROWS_AS(build_vector_field(no_weight), ConfigurationError);
}
