#include <doctest.h>

#include <cmath>
#include <vector>

#include "wodzicki/errors.hpp"
#include "wodzicki/random_data.hpp"
#include "wodzicki/torus_element.hpp"

using namespace wodzicki;

namespace {

DeformationPtr nc2() { return DeformationMatrix::two_torus(2.0 * M_PI / std::sqrt(2.0)); }

DeformationPtr nc4() {
  return DeformationMatrix::make(4, {{0.0, 0.7, -0.3, 1.1},
                                     {-0.7, 0.0, 0.45, -0.2},
                                     {0.3, -0.45, 0.0, 0.9},
                                     {-1.1, 0.2, -0.9, 0.0}});
}

// Coefficient vector indexed by k + offset, one axis.
using Series = std::vector<double>;

Series convolve(const Series& a, const Series& b) {
  Series c(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

// Pointwise value of a theta = 0 element at angles x (left algebra only).
Complex evaluate(const TorusElement& f, const std::vector<double>& x) {
  Complex s{};
  for (const auto& t : f.terms()) {
    double phase = 0.0;
    for (std::size_t a = 0; a < x.size(); ++a) phase += key_field(t.key, static_cast<int>(a)) * x[a];
    s += t.coeff * std::polar(1.0, phase);
  }
  return s;
}

}  // namespace

TEST_CASE("ordered monomials multiply with the bicharacter phase") {
  const double t = 0.83;
  auto defm = DeformationMatrix::two_torus(t);
  const int k10[] = {1, 0};
  const int k01[] = {0, 1};
  const int k11[] = {1, 1};
  auto u1 = TorusElement::monomial(defm, k10);
  auto u2 = TorusElement::monomial(defm, k01);
  CHECK((u1 * u2) == TorusElement::monomial(defm, k11));
  auto ba = u2 * u1;
  CHECK(std::abs(ba.coefficient({{1, 1}, {}}) - std::polar(1.0, -t)) < 1e-15);
  // U1 U2 = e^{i theta_12} U2 U1
  CHECK(TorusElement::max_abs_difference(u1 * u2, std::polar(1.0, t) * (u2 * u1)) < 1e-15);
}

TEST_CASE("commutative limit is commutative") {
  auto defm = DeformationMatrix::commutative(2);
  DataGenerator gen(11);
  for (int i = 0; i < 5; ++i) {
    auto a = gen.trig_poly(defm, 6, 4, 1.0);
    auto b = gen.trig_poly(defm, 6, 4, 1.0);
    CHECK(TorusElement::max_abs_difference(a * b, b * a) < 1e-14);
  }
}

TEST_CASE("associativity, traciality and Leibniz at irrational theta") {
  for (auto defm : {nc2(), nc4()}) {
    DataGenerator gen(17);
    for (int i = 0; i < 4; ++i) {
      auto a = gen.trig_poly(defm, 5, 3, 1.0);
      auto b = gen.trig_poly(defm, 5, 3, 1.0);
      auto c = gen.trig_poly(defm, 5, 3, 1.0);
      CHECK(TorusElement::max_abs_difference((a * b) * c, a * (b * c)) < 1e-13);
      CHECK(std::abs((a * b).trace() - (b * a).trace()) < 1e-13);
      for (int ax = 0; ax < defm->dimension(); ++ax) {
        auto lhs = (a * b).derive(ax);
        auto rhs = a.derive(ax) * b + a * b.derive(ax);
        CHECK(TorusElement::max_abs_difference(lhs, rhs) < 1e-12);
        CHECK((a * b * c).derive(ax).trace() == Complex{});
      }
    }
  }
}

TEST_CASE("commutant copy commutes exactly with the left algebra") {
  auto defm = nc4();
  DataGenerator gen(5);
  auto a = gen.trig_poly(defm, 5, 3, 1.0, Side::Left);
  auto b = gen.trig_poly(defm, 5, 3, 1.0, Side::Right);
  CHECK(b.side() == Side::Right);
  CHECK((a * b) == (b * a));
  CHECK((a * b).side() == Side::Mixed);
  // the copy is anti-isomorphic: (xy)° = y° x°
  auto x = gen.trig_poly(defm, 4, 2, 1.0);
  auto y = gen.trig_poly(defm, 4, 2, 1.0);
  CHECK(TorusElement::max_abs_difference((x * y).to_opposite(), y.to_opposite() * x.to_opposite()) <
        1e-14);
}

TEST_CASE("derivation and trace examples") {
  auto defm = nc2();
  const int k23[] = {2, 3};
  auto e = TorusElement::monomial(defm, k23);
  CHECK(e.derive(0) == 2.0 * e);
  CHECK(TorusElement::one(defm).derive(1).is_zero());
  CHECK(TorusElement::one(defm).trace() == Complex(1.0));
  const int k10[] = {1, 0};
  CHECK(TorusElement::monomial(defm, k10).trace() == Complex{});
  CHECK_THROWS_AS(e.derive(2), ArgumentError);
}

TEST_CASE("trace of h^4 matches a direct convolution") {
  auto defm = nc2();
  const int p[] = {1, 0};
  const int m[] = {-1, 0};
  auto h = TorusElement::one(defm) + TorusElement::monomial(defm, p, 0.1) +
           TorusElement::monomial(defm, m, 0.1);
  Series s = {0.1, 1.0, 0.1};
  Series s4 = convolve(convolve(s, s), convolve(s, s));
  const double oracle = s4[4];
  CHECK(oracle == doctest::Approx(1.1206).epsilon(1e-14));
  CHECK(std::abs(h.pow(4).trace() - oracle) < 1e-14);
}

TEST_CASE("involution") {
  auto defm = nc4();
  DataGenerator gen(23);
  for (int i = 0; i < 3; ++i) {
    auto k = gen.lattice_vector(4, 3);
    auto e = TorusElement::monomial(defm, k);
    CHECK(TorusElement::max_abs_difference(e.adjoint() * e, TorusElement::one(defm)) < 1e-14);
    auto a = gen.trig_poly(defm, 4, 2, 1.0);
    auto b = gen.trig_poly(defm, 4, 2, 1.0, Side::Right);
    auto c = gen.trig_poly(defm, 4, 2, 1.0);
    CHECK(TorusElement::max_abs_difference((a * c).adjoint(), c.adjoint() * a.adjoint()) < 1e-13);
    CHECK(TorusElement::max_abs_difference((a * b).adjoint(), b.adjoint() * a.adjoint()) < 1e-13);
    auto s = gen.self_adjoint(defm, 1.0, 3, 2, 0.2);
    CHECK(TorusElement::max_abs_difference(s.adjoint(), s) < 1e-14);
  }
}

TEST_CASE("theta = 0 arithmetic agrees with pointwise sampling") {
  auto defm = DeformationMatrix::commutative(2);
  DataGenerator gen(3);
  auto a = gen.trig_poly(defm, 5, 2, 1.0);
  auto b = gen.trig_poly(defm, 5, 2, 1.0);
  const auto prod = a * b;
  const auto da = a.derive(0);
  const int N = 4;  // support of a·b is within radius 4
  const int M = 2 * N + 1;
  double err = 0.0;
  for (int i = 0; i < M; ++i) {
    for (int j = 0; j < M; ++j) {
      std::vector<double> x = {2.0 * M_PI * i / M, 2.0 * M_PI * j / M};
      err = std::max(err, std::abs(evaluate(prod, x) - evaluate(a, x) * evaluate(b, x)));
    }
  }
  CHECK(err < 1e-10);
  // derivative: d/dx1 = i δ1 on the grid via centred DFT coefficients
  double derr = 0.0;
  for (int k1 = -N; k1 <= N; ++k1) {
    for (int k2 = -N; k2 <= N; ++k2) {
      Complex c{};
      for (int i = 0; i < M; ++i) {
        for (int j = 0; j < M; ++j) {
          std::vector<double> x = {2.0 * M_PI * i / M, 2.0 * M_PI * j / M};
          c += evaluate(a, x) * std::polar(1.0, -(k1 * x[0] + k2 * x[1]));
        }
      }
      c /= static_cast<double>(M * M);
      derr = std::max(derr, std::abs(da.coefficient({{k1, k2}, {}}) - static_cast<double>(k1) * c));
    }
  }
  CHECK(derr < 1e-10);
}

TEST_CASE("inversion") {
  auto defm = nc2();
  auto two = TorusElement::scalar(defm, 2.0);
  auto inv = invert(two);
  CHECK(inv.value == TorusElement::scalar(defm, 0.5));
  CHECK(inv.residual == 0.0);

  const int p[] = {1, 0};
  const int m[] = {-1, 0};
  auto s = TorusElement::monomial(defm, p) + TorusElement::monomial(defm, m);
  auto a = TorusElement::one(defm) + 0.1 * s;
  auto r = invert(a, {1e-13, 24, 400});
  CHECK(r.residual < 1e-12);
  // independent Neumann oracle on coefficient vectors
  const int R = 24;
  Series sum(2 * R + 1, 0.0), term(2 * R + 1, 0.0);
  term[R] = 1.0;
  sum[R] = 1.0;
  for (int j = 1; j <= 60; ++j) {
    Series next(2 * R + 1, 0.0);
    for (int i = 0; i < 2 * R + 1; ++i) {
      if (i > 0) next[i] += -0.1 * term[i - 1];
      if (i < 2 * R) next[i] += -0.1 * term[i + 1];
    }
    term = next;
    for (int i = 0; i < 2 * R + 1; ++i) sum[i] += term[i];
  }
  double diff = 0.0;
  for (int k = -R; k <= R; ++k) diff = std::max(diff, std::abs(r.value.coefficient({{k, 0}, {}}) - sum[k + R]));
  CHECK(diff < 1e-13);

  CHECK_THROWS_AS(invert(s), InversionError);
  try {
    invert(s);
  } catch (const InversionError& e) {
    CHECK(e.residual() == 1.0);
  }
}

TEST_CASE("configuration errors") {
  CHECK_THROWS_AS(DeformationMatrix::make(3, {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}}), ConfigurationError);
  CHECK_THROWS_AS(DeformationMatrix::make(2, {{0, 1}, {1, 0}}), ConfigurationError);
  auto a = TorusElement::one(nc2());
  auto b = TorusElement::one(DeformationMatrix::commutative(2));
  CHECK_THROWS_AS(a * b, ConfigurationError);
}

TEST_CASE("inversion beyond the Neumann radius") {
  // 1 + 0.4 Σ_{k=1..3} cos(k x₁) is positive (Σ cos(k x) >= −1.45) while
  // ‖a − 1‖₁ = 1.2.
  for (auto defm : {nc2(), nc4()}) {
    const int n = defm->dimension();
    auto a = TorusElement::one(defm);
    for (int k = 1; k <= 3; ++k) {
      std::vector<int> p(static_cast<std::size_t>(n), 0), m(static_cast<std::size_t>(n), 0);
      p[0] = k;
      m[0] = -k;
      a += TorusElement::monomial(defm, p, 0.2) + TorusElement::monomial(defm, m, 0.2);
    }
    CHECK((a - TorusElement::one(defm)).norm1() > 1.0);
    auto r = invert(a, {1e-10, 60, 400});
    CHECK(r.residual < 1e-10);
    auto one = TorusElement::one(defm);
    CHECK(TorusElement::max_abs_difference(r.value * a, one) < 1e-10);
    CHECK(TorusElement::max_abs_difference(r.value.adjoint(), r.value) < 1e-10);
  }
}

TEST_CASE("commutant image") {
  auto defm = nc2();
  DataGenerator gen(11);
  auto k = gen.trig_poly(defm, 3, 2, 0.5);
  auto img = commutant_image(k);
  CHECK(img.side() == Side::Right);
  auto h = gen.trig_poly(defm, 3, 2, 0.5);
  CHECK(TorusElement::max_abs_difference(img * h, h * img) < 1e-14);
  CHECK(std::abs(img.trace() - k.trace()) < 1e-15);

  auto flat = DeformationMatrix::commutative(2);
  auto kc = gen.trig_poly(flat, 3, 2, 0.5);
  CHECK(commutant_image(kc) == kc);
  CHECK_THROWS(commutant_image(k * img));
}
