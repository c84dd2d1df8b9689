#include <doctest.h>

#include <cmath>

#include "wodzicki/errors.hpp"
#include "wodzicki/random_data.hpp"
#include "wodzicki/symbol.hpp"

using namespace wodzicki;

namespace {

DeformationPtr nc2() { return DeformationMatrix::two_torus(2.0 * M_PI / std::sqrt(2.0)); }

MultiIndex mi(int a = 0, int b = 0, int c = 0, int d = 0) { return {a, b, c, d}; }

CliffordValue sc(const TorusElement& x) { return CliffordValue::scalar(x, 1); }

Symbol laplacian(const DeformationPtr& defm) {
  return Symbol::monomial(CliffordValue::identity(defm, 1), mi(), -1);
}

// Applies a polynomial (differential operator) symbol to an element:
// c ξ^α ‖ξ‖^{2m} acts as x ↦ c · δ^α Δ^m x.
TorusElement apply(const Symbol& s, const TorusElement& x) {
  TorusElement out(x.deformation());
  const int n = x.dimension();
  for (const auto& t : s.terms()) {
    REQUIRE(t.j <= 0);
    TorusElement y = x.derive(std::span<const int>(t.alpha.data(), static_cast<std::size_t>(n)));
    for (int r = 0; r < -t.j; ++r) {
      TorusElement lap(x.deformation());
      for (int a = 0; a < n; ++a) lap += y.derive(a).derive(a);
      y = lap;
    }
    out += t.coeff(0, 0) * y;
  }
  return out;
}

Symbol random_differential(DataGenerator& gen, const DeformationPtr& defm, int order) {
  Symbol s(defm, 1);
  const int n = defm->dimension();
  for (int o = 0; o <= order; ++o) {
    for (int rep = 0; rep < 2; ++rep) {
      MultiIndex a{};
      for (int i = 0; i < o; ++i) a[static_cast<std::size_t>(gen.uniform_int(0, n - 1))] += 1;
      s.add_term(sc(gen.trig_poly(defm, 3, 2, 1.0)), a, 0);
    }
  }
  return s;
}

// Random order −2 symbol with three tracked orders.
Symbol random_parametrix_like(DataGenerator& gen, const DeformationPtr& defm) {
  Symbol s(defm, 1, -4);
  auto c = [&] { return sc(gen.trig_poly(defm, 3, 2, 0.5) + TorusElement::one(defm)); };
  s.add_term(c(), mi(), 1);
  s.add_term(c(), mi(1, 1), 2);
  s.add_term(c(), mi(1), 2);
  s.add_term(c(), mi(0, 1, 0), 2);
  s.add_term(c(), mi(), 2);
  s.add_term(c(), mi(2, 0), 3);
  s.add_term(c(), mi(1, 1), 3);
  return s;
}

}  // namespace

TEST_CASE("canonical form eliminates the last squared variable") {
  auto defm = nc2();
  Symbol s(defm, 1);
  auto one = CliffordValue::identity(defm, 1);
  s.add_term(one, mi(2, 0), 0);
  s.add_term(one, mi(0, 2), 0);
  CHECK(s.size() == 1);
  CHECK(Symbol::max_abs_difference(s, laplacian(defm)) == 0.0);
  for (const auto& t : s.terms()) CHECK(t.order() == 2);
}

TEST_CASE("constant-coefficient composition") {
  auto defm = nc2();
  auto one = CliffordValue::identity(defm, 1);
  auto d1 = Symbol::monomial(one, mi(1, 0), 0);
  auto d2 = Symbol::monomial(one, mi(0, 1), 0);
  auto c = compose(d1, d2, {0});
  CHECK(Symbol::max_abs_difference(c, Symbol::monomial(one, mi(1, 1), 0)) == 0.0);
}

TEST_CASE("multiplication operator against a derivation") {
  auto defm = nc2();
  DataGenerator gen(9);
  auto a = gen.trig_poly(defm, 4, 2, 1.0);
  auto one = CliffordValue::identity(defm, 1);
  auto d1 = Symbol::monomial(one, mi(1, 0), 0);
  auto as = Symbol::constant(sc(a));
  auto lhs = compose(d1, as, {0});
  auto rhs = compose(as, d1, {0});
  auto diff = lhs - rhs;
  CHECK(Symbol::max_abs_difference(diff, Symbol::constant(sc(a.derive(0)))) < 1e-14);
}

TEST_CASE("composition of differential operators matches their action on elements") {
  auto defm = nc2();
  DataGenerator gen(21);
  for (int trial = 0; trial < 3; ++trial) {
    auto p = random_differential(gen, defm, 2);
    auto q = random_differential(gen, defm, 2);
    auto pq = compose(p, q, {0});
    CHECK(pq.is_exact());
    auto x = gen.trig_poly(defm, 4, 3, 1.0);
    auto direct = apply(p, apply(q, x));
    auto via = apply(pq, x);
    CHECK(TorusElement::max_abs_difference(direct, via) < 1e-11 * (1.0 + direct.norm_inf()));
  }
}

TEST_CASE("composition is associative within the tracked depth") {
  auto defm = nc2();
  DataGenerator gen(4);
  for (int trial = 0; trial < 3; ++trial) {
    auto a = random_differential(gen, defm, 2);
    auto b = random_parametrix_like(gen, defm);
    auto c = random_parametrix_like(gen, defm);
    CalculusOptions o;
    o.depth = 3;
    auto l = compose(compose(a, b, o), c, o);
    auto r = compose(a, compose(b, c, o), o);
    CHECK(l.floor() == r.floor());
    CHECK(Symbol::max_abs_difference(l, r) < 1e-12 * std::max(1.0, l.max_norm1()));
  }
}

TEST_CASE("flat parametrix") {
  for (int n : {2, 4}) {
    auto defm = DeformationMatrix::commutative(n);
    auto lap = laplacian(defm);
    auto b = parametrix(lap).symbol;
    CHECK(b.size() == 1);
    CHECK(b.component(-2).size() == 1);
    CHECK(b.component(-2)[0].j == 1);
    auto id = compose(lap, b);
    CHECK(Symbol::max_abs_difference(id, Symbol::constant(CliffordValue::identity(defm, 1))) == 0.0);
    auto p2 = power_symbols(b, 2);
    CHECK(p2.size() == 1);
    CHECK(p2.component(-4)[0].j == 2);
  }
}

TEST_CASE("parametrix inverts a variable-coefficient operator in three orders") {
  auto defm = nc2();
  DataGenerator gen(8);
  for (int trial = 0; trial < 3; ++trial) {
    Symbol p(defm, 1);
    auto c = gen.self_adjoint(defm, 1.0, 2, 2, 0.1);
    p.add_term(sc(c), mi(), -1);
    p.add_term(sc(gen.trig_poly(defm, 3, 2, 0.5)), mi(1, 0), 0);
    p.add_term(sc(gen.trig_poly(defm, 3, 2, 0.5)), mi(0, 1), 0);
    p.add_term(sc(gen.trig_poly(defm, 3, 2, 0.5)), mi(), 0);
    auto par = parametrix(p);
    CHECK(par.inversion_residual < 1e-13);
    const auto& b = par.symbol;
    CHECK(b.floor() == -4);
    auto right = compose(p, b);
    auto left = compose(b, p);
    auto one = Symbol::constant(CliffordValue::identity(defm, 1));
    CHECK(right.floor() == -2);
    CHECK(Symbol::max_abs_difference(right, one) < 1e-12);
    CHECK(Symbol::max_abs_difference(left, one) < 1e-12);
  }
}

TEST_CASE("b3 vanishes for constant principal part without first-order term") {
  auto defm = nc2();
  DataGenerator gen(2);
  Symbol p(defm, 1);
  p.add_term(CliffordValue::identity(defm, 1), mi(), -1);
  p.add_term(sc(gen.trig_poly(defm, 3, 2, 0.5)), mi(), 0);
  auto b = parametrix(p).symbol;
  CHECK(b.component(-3).empty());
}

TEST_CASE("powers: iterated composition against re-association and the scalar closed form") {
  auto defm = DeformationMatrix::commutative(2);
  DataGenerator gen(31);
  CalculusOptions o;
  for (int trial = 0; trial < 3; ++trial) {
    auto b = random_parametrix_like(gen, defm);
    for (int l : {2, 3, 4}) {
      auto iter = power_symbols(b, l, o);
      Symbol other = b;
      for (int i = 1; i < l; ++i) other = compose(other, b, o);
      CHECK(Symbol::max_abs_difference(iter, other) < 1e-12 * std::max(1.0, iter.max_norm1()));
      auto closed = scalar_power_closed_form(b.restricted(-2, -2), b.restricted(-3, -3),
                                             b.restricted(-4, -4), l);
      CHECK(Symbol::max_abs_difference(iter, closed) < 1e-12 * std::max(1.0, iter.max_norm1()));
    }
    auto single = scalar_power_closed_form(b.restricted(-2, -2), b.restricted(-3, -3),
                                           b.restricted(-4, -4), 1);
    CHECK(Symbol::max_abs_difference(single, b) == 0.0);
  }
  CHECK_THROWS_AS(power_symbols(random_parametrix_like(gen, defm), 0), ArgumentError);
  auto nc = random_parametrix_like(gen, nc2());
  CHECK_THROWS_AS(scalar_power_closed_form(nc, nc, nc, 2), PreconditionError);
}

TEST_CASE("depth bookkeeping") {
  auto defm = nc2();
  DataGenerator gen(1);
  auto b = random_parametrix_like(gen, defm);
  CHECK_THROWS_AS(compose_orders(b, b, -9, -4), PreconditionError);
  auto v = compose_orders(b, b, -6, -6);
  CHECK(v.orders() == std::vector<int>{-6});
}
