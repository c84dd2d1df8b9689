#include <doctest.h>

#include <cmath>
#include <vector>

#include "wodzicki/curved_symbol.hpp"
#include "wodzicki/functionals.hpp"
#include "wodzicki/geometry.hpp"
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

std::vector<TorusElement> axis_field(const DeformationPtr& defm, int a) {
  std::vector<TorusElement> v(static_cast<std::size_t>(defm->dimension()), TorusElement::zero(defm));
  v[static_cast<std::size_t>(a)] = TorusElement::one(defm);
  return v;
}

Symbol geometric(const std::vector<TorusElement>& v) { return build_vector_field(VectorFieldSpec{v}); }

}  // namespace

TEST_CASE("metric functional of the flat 2-torus") {
  auto defm = DeformationMatrix::commutative(2);
  SpectralOperator L(build_flat_laplacian(defm));
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const auto r = metric_vf(L, geometric(axis_field(defm, a)), geometric(axis_field(defm, b)));
      CHECK(std::abs(r.value - (a == b ? -M_PI : 0.0)) < 1e-14);
      CHECK(std::abs(r.value - r.density.trace()) < 1e-12);
      CHECK(std::abs(einstein_vf(L, geometric(axis_field(defm, a)),
                                 geometric(axis_field(defm, b)))
                         .value) < 1e-14);
    }
}

TEST_CASE("form functionals of the flat 2-torus") {
  auto defm = DeformationMatrix::commutative(2);
  auto one = TorusElement::one(defm);
  auto zero = TorusElement::zero(defm);
  const GammaRep rep = gamma_basis(2);
  auto D = SpectralOperator::from_dirac(build_flat_dirac(defm));
  const Symbol g1 = build_one_form(OneFormSpec{{one, zero}}, rep);
  const Symbol g2 = build_one_form(OneFormSpec{{zero, one}}, rep);
  CHECK(std::abs(metric_form(D, g1, g1).value - 4.0 * M_PI) < 1e-13);
  CHECK(std::abs(metric_form(D, g1, g2).value) < 1e-14);
  CHECK(std::abs(einstein_form(D, g1, g1).value) < 1e-14);

  DataGenerator gen(21);
  std::vector<CliffordValue> samples;
  for (int s = 0; s < 3; ++s) {
    CliffordValue t(defm, 2);
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) t(r, c) = gen.trig_poly(defm, 2, 2, 1.0);
    samples.push_back(t);
  }
  CHECK(spectral_closedness_check(D, samples).pass(1e-12));
}

TEST_CASE("Einstein functional of a conformal noncommutative 2-torus vanishes") {
  auto defm = nc2();
  DataGenerator gen(22);
  auto h = gen.self_adjoint(defm, 1.0, 2, 1, 0.08);
  SpectralOperator L(build_conformal_laplacian(h, ConformalVariant::TwoTorus));
  auto V = gen.trig_poly(defm, 2, 1, 0.5);
  auto W = gen.trig_poly(defm, 2, 1, 0.5);
  VectorFieldSpec v{{V, W}, VectorFlavor::Rescaled, h};
  VectorFieldSpec w{{W, V}, VectorFlavor::Rescaled, h};
  const auto metric = metric_vf(L, build_vector_field(v), build_vector_field(w));
  const auto einstein = einstein_vf(L, build_vector_field(v), build_vector_field(w));
  CHECK(std::abs(metric.value) > 1e-3);
  CHECK(std::abs(einstein.value) < 1e-9 * std::abs(metric.value));
  CHECK(einstein.density.norm1() < 1e-9 * std::abs(metric.value));
}

TEST_CASE("closed forms at trivial factors") {
  auto d4 = DeformationMatrix::make(4, {{0.0, 0.7, -0.3, 1.1},
                                        {-0.7, 0.0, 0.45, -0.2},
                                        {0.3, -0.45, 0.0, 0.9},
                                        {-1.1, 0.2, -0.9, 0.0}});
  const auto one = TorusElement::one(d4);
  const std::vector<Complex> V = {1.0, 0.5, Complex(0, 1), -2.0};
  const std::vector<Complex> W = {0.25, 1.0, 3.0, Complex(1, 1)};
  Complex vw{};
  for (int a = 0; a < 4; ++a) vw += V[static_cast<std::size_t>(a)] * W[static_cast<std::size_t>(a)];
  CHECK(std::abs(reference::laplacian4_einstein(one, V, W)) < 1e-15);
  CHECK(std::abs(reference::laplacian4_metric(one, V, W) - 2.0 * M_PI * M_PI * vw) < 1e-13);

  std::vector<TorusElement> Ve, We;
  for (int a = 0; a < 4; ++a) {
    Ve.push_back(TorusElement::scalar(d4, V[static_cast<std::size_t>(a)]));
    We.push_back(TorusElement::scalar(d4, W[static_cast<std::size_t>(a)]));
  }
  CHECK(std::abs(reference::dirac4_einstein(one, Ve, We)) < 1e-15);
}

TEST_CASE("commutative limit of the Dirac closed form against the closed-form Einstein tensor") {
  // τ(V^a W^b (⅔ k⁻² k_a k_b + ...)) = −(1/6) τ(V^a W^b G_ab) with δ = −i∂.
  auto defm = DeformationMatrix::commutative(4);
  DataGenerator gen(23);
  for (int trial = 0; trial < 3; ++trial) {
    auto k = gen.self_adjoint(defm, 1.0, 2, 1, 0.05);
    std::vector<TorusElement> V, W;
    for (int a = 0; a < 4; ++a) {
      V.push_back(gen.trig_poly(defm, 2, 1, 1.0));
      W.push_back(gen.trig_poly(defm, 2, 1, 1.0));
    }
    const auto G = reference::conformal_einstein_tensor(k);
    Complex contraction{};
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        contraction += (V[static_cast<std::size_t>(a)] * W[static_cast<std::size_t>(b)] *
                        G[static_cast<std::size_t>(4 * a + b)])
                           .trace();
    const Complex limit = reference::dirac4_commutative_limit(k, V, W);
    CHECK(std::abs(contraction) > 1e-4);
    CHECK(std::abs(limit + contraction / 6.0) < 1e-10 * std::abs(contraction));
  }
}

TEST_CASE("curved calculus agrees with the Euclidean calculus on conformal metrics") {
  auto defm = DeformationMatrix::commutative(2);
  auto h2 = TorusElement::one(defm) + cosine(defm, 0, 0.3) + cosine(defm, 1, 0.1);
  const MetricData metric = MetricData::conformally_flat(h2, 1);
  CalculusOptions opts;
  const Symbol L = build_laplace_type(metric, ConnectionData::trivial(), opts);
  SpectralOperator flat_path(L, opts);
  CurvedOperator curved_path(L, metric, opts);
  DataGenerator gen(24);
  const auto V = geometric({gen.trig_poly(defm, 2, 1, 1.0), gen.trig_poly(defm, 2, 1, 1.0)});
  const auto W = geometric({gen.trig_poly(defm, 2, 1, 1.0), gen.trig_poly(defm, 2, 1, 1.0)});
  const auto a = metric_vf(flat_path, V, W);
  const auto b = metric_vf(curved_path, V, W);
  CHECK(std::abs(a.value) > 1e-3);
  CHECK(std::abs(a.value - b.value) < 1e-10 * std::abs(a.value));
  CHECK(std::abs(einstein_vf(curved_path, V, W).value) < 1e-10 * std::abs(a.value));
}

TEST_CASE("curved parametrix inverts a general metric Laplacian") {
  auto defm = DeformationMatrix::commutative(2);
  auto one = TorusElement::one(defm);
  const int k[] = {1, 1};
  const int km[] = {-1, -1};
  auto g12 = TorusElement::monomial(defm, k, 0.05) + TorusElement::monomial(defm, km, 0.05);
  const MetricData metric = MetricData::general(
      defm, {one + cosine(defm, 0, 0.3), g12, g12, one + cosine(defm, 1, 0.2)});
  CalculusOptions opts;
  const auto q = QuadraticForm::make(metric);
  const auto L =
      CurvedSymbol::from_polynomial(build_laplace_type(metric, ConnectionData::trivial(), opts), q);
  const auto B = curved_parametrix(L, 3, opts);
  CHECK(B.top_order() == -2);
  const auto LB = compose_orders(L, B, -2, 0, opts);

  // Σ c(x) ξ^α q(x, ξ)^(−j) for the terms of one order
  auto value = [&](const CurvedSymbol& s, int order, const double* x, const double* xi) {
    auto at = [&](const TorusElement& f) {
      Complex v{};
      for (const auto& t : f.terms())
        v += t.coeff * std::polar(1.0, key_field(t.key, 0) * x[0] + key_field(t.key, 1) * x[1]);
      return v;
    };
    Complex qv{};
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) qv += at(q->ginv[static_cast<std::size_t>(2 * a + b)]) * xi[a] * xi[b];
    Complex sum{};
    for (const auto& t : s.component(order))
      sum += at(t.coeff(0, 0)) * std::pow(xi[0], t.alpha[0]) * std::pow(xi[1], t.alpha[1]) *
             std::pow(qv, -t.j);
    return sum;
  };
  const double points[][4] = {{0.1, 2.0, 0.6, -0.8}, {4.0, 1.3, 1.0, 0.0}, {2.5, 5.9, -0.28, 0.96}};
  for (const auto& p : points) {
    CHECK(std::abs(value(LB, 0, p, p + 2) - 1.0) < 1e-12);
    CHECK(std::abs(value(LB, -1, p, p + 2)) < 1e-12);
    CHECK(std::abs(value(LB, -2, p, p + 2)) < 1e-12);
  }
}
