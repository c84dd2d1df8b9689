#include "wodzicki/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include "wodzicki/curved_symbol.hpp"
#include "wodzicki/errors.hpp"
#include "wodzicki/functionals.hpp"
#include "wodzicki/geometry.hpp"
#include "wodzicki/io.hpp"
#include "wodzicki/parallel.hpp"
#include "wodzicki/random_data.hpp"

namespace wodzicki {

namespace {

using Checks = std::vector<CheckResult>;
using Group = std::function<Checks()>;

CheckResult rel_check(std::string name, Complex measured, Complex expected, double tol,
                      std::string note = {}) {
  CheckResult c;
  c.name = std::move(name);
  c.measured = measured;
  c.expected = expected;
  const double den = std::abs(expected);
  c.error = den > 0.0 ? std::abs(measured - expected) / den : std::abs(measured);
  c.tol = tol;
  c.relative = true;
  c.pass = std::isfinite(c.error) && c.error <= tol;
  c.note = std::move(note);
  return c;
}

CheckResult abs_check(std::string name, Complex measured, Complex expected, double tol,
                      std::string note = {}) {
  CheckResult c;
  c.name = std::move(name);
  c.measured = measured;
  c.expected = expected;
  c.error = std::abs(measured - expected);
  c.tol = tol;
  c.relative = false;
  c.pass = std::isfinite(c.error) && c.error <= tol;
  c.note = std::move(note);
  return c;
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

Checks run_groups(const std::vector<Group>& groups) {
  std::vector<Checks> slots(groups.size());
  parallel_for(groups.size(), [&](std::size_t i) {
    try {
      slots[i] = groups[i]();
    } catch (const std::exception& e) {
      CheckResult c;
      c.name = "group " + std::to_string(i);
      c.error = INFINITY;
      c.note = std::string("exception: ") + e.what();
      slots[i] = {c};
    }
  });
  Checks out;
  for (auto& s : slots)
    for (auto& c : s) out.push_back(std::move(c));
  return out;
}

DeformationPtr nc2() { return DeformationMatrix::two_torus(2.0 * M_PI / std::sqrt(2.0)); }

DeformationPtr nc4() {
  return DeformationMatrix::make(4, {{0.0, 0.7, 0.3, 0.2},
                                     {-0.7, 0.0, 1.1, 0.5},
                                     {-0.3, -1.1, 0.0, 0.9},
                                     {-0.2, -0.5, -0.9, 0.0}});
}

std::vector<Complex> random_constants(DataGenerator& gen, int n) {
  std::vector<Complex> v;
  for (int a = 0; a < n; ++a) v.emplace_back(gen.uniform(-1.0, 1.0), gen.uniform(-1.0, 1.0));
  return v;
}

std::vector<TorusElement> as_elements(const DeformationPtr& defm, const std::vector<Complex>& c) {
  std::vector<TorusElement> out;
  for (Complex z : c) out.push_back(TorusElement::scalar(defm, z));
  return out;
}

Complex dot(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  Complex s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Symbol rescaled_field(const DeformationPtr& defm, const std::vector<Complex>& c,
                      const TorusElement& w) {
  VectorFieldSpec s;
  s.components = as_elements(defm, c);
  s.flavor = VectorFlavor::Rescaled;
  s.weight = w;
  return build_vector_field(s);
}

Symbol geometric_field(const std::vector<TorusElement>& comps,
                       const std::vector<CliffordValue>& connection = {}, int rank = 1) {
  VectorFieldSpec s;
  s.components = comps;
  s.connection = connection;
  s.rank = rank;
  return build_vector_field(s);
}

// Nonconstant components on the first two axes around a constant offset.
std::vector<TorusElement> random_components(DataGenerator& gen, const DeformationPtr& defm,
                                            double amplitude) {
  const int n = defm->dimension();
  std::vector<TorusElement> out;
  for (int a = 0; a < n; ++a) {
    out.push_back(gen.trig_poly(defm, 1, 1, amplitude, Side::Left, {0, 1}) +
                  TorusElement::scalar(defm, Complex(gen.uniform(0.2, 1.0), gen.uniform(-0.3, 0.3))));
  }
  return out;
}

// τ(h^p) on the 2-torus from an explicit convolution of Fourier coefficients,
// e_k e_l = exp(i θ_10 k_1 l_0) e_{k+l}.
Complex trace_power_by_convolution(const TorusElement& h, int p) {
  using Coeffs = std::map<std::pair<int, int>, Complex>;
  const double t10 = h.deformation()->theta(1, 0);
  Coeffs base;
  for (const auto& t : h.terms()) {
    const LatticeIndex idx = unpack(t.key);
    base[{idx.left[0], idx.left[1]}] += t.coeff;
  }
  Coeffs acc = base;
  for (int i = 1; i < p; ++i) {
    Coeffs next;
    for (const auto& [k, a] : acc) {
      for (const auto& [l, b] : base) {
        const double phase = t10 * k.second * l.first;
        next[{k.first + l.first, k.second + l.second}] +=
            a * b * Complex(std::cos(phase), std::sin(phase));
      }
    }
    acc = std::move(next);
  }
  auto it = acc.find({0, 0});
  return it == acc.end() ? Complex{} : it->second;
}

TorusElement nc2_weight(int trial) {
  DataGenerator gen(1000 + static_cast<std::uint64_t>(trial));
  return gen.self_adjoint(nc2(), 1.0, 3, 2, 0.08);
}

TorusElement commutative_conformal(const DeformationPtr& defm, double a, Complex b) {
  const int n = defm->dimension();
  std::array<int, kMaxDimension> e1{1, 0, 0, 0}, m1{-1, 0, 0, 0}, e2{0, 1, 0, 0}, m2{0, -1, 0, 0};
  auto mono = [&](std::array<int, kMaxDimension>& k, Complex c) {
    return TorusElement::monomial(defm, std::span<const int>(k.data(), static_cast<std::size_t>(n)),
                                  c);
  };
  return TorusElement::one(defm) + mono(e1, a) + mono(m1, a) + mono(e2, b) + mono(m2, std::conj(b));
}

// ---------------------------------------------------------------- suites

Checks suite_nc2_metric() {
  std::vector<Group> groups;
  for (int trial = 0; trial < 5; ++trial) {
    groups.push_back([trial] {
      auto defm = nc2();
      const TorusElement h = nc2_weight(trial);
      DataGenerator gen(2000 + static_cast<std::uint64_t>(trial));
      const auto Vc = random_constants(gen, 2), Wc = random_constants(gen, 2);
      SpectralOperator L(build_conformal_laplacian(h, ConformalVariant::TwoTorus), {}, "nc2-h");
      const auto r = metric_vf(L, rescaled_field(defm, Vc, h), rescaled_field(defm, Wc, h));
      const Complex expected = M_PI * trace_power_by_convolution(h, 4) * dot(Vc, Wc);
      return Checks{rel_check("h#" + std::to_string(trial) + " metric = pi tau(h^4) V.W", r.value,
                              expected, 1e-9)};
    });
  }
  return run_groups(groups);
}

Checks suite_nc2_einstein_vanishing() {
  std::vector<Group> groups;
  for (int trial = 0; trial < 5; ++trial) {
    groups.push_back([trial] {
      auto defm = nc2();
      const TorusElement h = nc2_weight(trial);
      DataGenerator gen(2000 + static_cast<std::uint64_t>(trial));
      const auto Vc = random_constants(gen, 2), Wc = random_constants(gen, 2);
      const TorusElement f = gen.trig_poly(defm, 3, 2, 1.0) + TorusElement::one(defm);
      SpectralOperator L(build_conformal_laplacian(h, ConformalVariant::TwoTorus), {}, "nc2-h");
      const Symbol V = rescaled_field(defm, Vc, h), W = rescaled_field(defm, Wc, h);
      const double scale = std::max(1.0, std::abs(metric_vf(L, V, W).value));
      const double tol = 1e-9 * scale;
      const auto e = einstein_vf(L, V, W);
      const auto ef = einstein_vf(L, V, W, f);
      const std::string tag = "h#" + std::to_string(trial);
      return Checks{abs_check(tag + " einstein value", e.value, 0.0, tol),
                    abs_check(tag + " einstein density l1", e.density.norm1(), 0.0, tol),
                    abs_check(tag + " localized W(f V W L^-1)", ef.value, 0.0, tol),
                    abs_check(tag + " localized density l1", ef.density.norm1(), 0.0, tol)};
    });
  }
  return run_groups(groups);
}

Checks suite_nc4_laplacian() {
  std::vector<Group> groups;
  for (int trial = 0; trial < 5; ++trial) {
    groups.push_back([trial] {
      auto defm = nc4();
      DataGenerator gen(3000 + static_cast<std::uint64_t>(trial));
      const TorusElement chi = gen.self_adjoint(defm, 1.0, 2, 1, 0.08);
      const auto Vc = random_constants(gen, 4), Wc = random_constants(gen, 4);
      SpectralOperator L(build_conformal_laplacian(chi, ConformalVariant::FourTorus), {}, "nc4-chi");
      const Symbol V = rescaled_field(defm, Vc, chi), W = rescaled_field(defm, Wc, chi);
      const auto g = metric_vf(L, V, W);
      const auto e = einstein_vf(L, V, W);
      const Complex metric_ref = 0.5 * M_PI * M_PI * chi.pow(3).trace() * dot(Vc, Wc);
      const Complex closed = reference::laplacian4_metric(chi, Vc, Wc);
      const std::string tag = "chi#" + std::to_string(trial);
      return Checks{
          rel_check(tag + " metric = (pi^2/2) tau(chi^3) V.W", g.value, metric_ref, 1e-8,
                    "ratio to 2pi^2 tau(chi^3) V.W " + fmt("%.12g", std::abs(g.value / closed))),
          rel_check(tag + " einstein closed form", e.value,
                    reference::laplacian4_einstein(chi, Vc, Wc), 1e-8)};
    });
  }
  groups.push_back([] {
    auto defm = DeformationMatrix::commutative(4);
    DataGenerator gen(3100);
    const TorusElement chi = commutative_conformal(defm, 0.1, Complex(0.03, 0.02));
    const auto Vc = random_constants(gen, 4), Wc = random_constants(gen, 4);
    SpectralOperator L(build_conformal_laplacian(chi, ConformalVariant::FourTorus), {}, "c4-chi");
    const auto e = einstein_vf(L, rescaled_field(defm, Vc, chi), rescaled_field(defm, Wc, chi));
    const Curvature c = curvature_tensors(MetricData::conformally_flat(chi, 1));
    const Complex oracle =
        functional_oracle(c, OracleKind::Einstein, as_elements(defm, Vc), as_elements(defm, Wc));
    const Complex limit = reference::laplacian4_commutative_density(chi, Vc, Wc).trace();
    return Checks{
        rel_check("theta=0 einstein vs -(2pi^2/6) tau(sqrt g G(V,W))", e.value, -oracle, 1e-6,
                  "derivation-flavor fields: delta = -i d gives the sign"),
        rel_check("theta=0 einstein vs commutative-limit density", e.value, limit, 1e-8)};
  });
  return run_groups(groups);
}

Checks suite_nc2_dirac() {
  std::vector<Group> groups;
  for (int trial = 0; trial < 2; ++trial) {
    groups.push_back([trial] {
      auto defm = nc2();
      DataGenerator gen(4000 + static_cast<std::uint64_t>(trial));
      const TorusElement k = gen.self_adjoint(defm, 1.0, 2, 2, 0.1).to_opposite();
      SpectralOperator D = SpectralOperator::from_dirac(build_conformal_dirac(k), {}, "nc2-dirac");
      const GammaRep rep = gamma_basis(2);
      const auto Vc = random_components(gen, defm, 0.5), Wc = random_components(gen, defm, 0.5);
      const Symbol v = build_one_form({Vc, k}, rep), w = build_one_form({Wc, k}, rep);
      std::vector<CliffordValue> samples{
          CliffordValue::from_const(gen.trig_poly(defm, 3, 2, 1.0), rep.gamma[0]),
          CliffordValue::from_const(gen.trig_poly(defm, 3, 2, 1.0), rep.gamma[1]),
          CliffordValue::scalar(gen.trig_poly(defm, 3, 2, 1.0), 2)};
      const auto closed = spectral_closedness_check(D, samples);
      const auto g = metric_form(D, v, w);
      const Complex tvw = (Vc[0] * Wc[0] + Vc[1] * Wc[1]).trace();
      const double norm = 4.0 * M_PI;
      const std::string tag = "k#" + std::to_string(trial);
      return Checks{
          abs_check(tag + " spectral closedness max|W(T D |D|^-2)|", closed.max_abs, 0.0, 1e-9),
          rel_check(tag + " metric form / (2^m v_1) = tau(V^a W^a)", g.value / norm, tvw, 1e-9,
                    "engine value includes the spinor trace 2 and v_1 = 2 pi"),
          abs_check(tag + " einstein form (inner)", einstein_form(D, v, w).value, 0.0, 1e-9),
          abs_check(tag + " einstein form (outer)",
                    einstein_form(D, v, w, EinsteinOrdering::Outer).value, 0.0, 1e-9)};
    });
  }
  return run_groups(groups);
}

Checks suite_nc4_dirac() {
  std::vector<Group> groups;
  for (int trial = 0; trial < 3; ++trial) {
  groups.push_back([trial] {
    auto defm = nc4();
    DataGenerator gen(5000 + static_cast<std::uint64_t>(trial));
    // Modes of k on one coordinate plane per trial keep the parametrix small.
    const std::vector<std::vector<int>> planes{{0, 1}, {1, 2}, {0, 3}};
    const auto& axes = planes[static_cast<std::size_t>(trial)];
    const TorusElement k = gen.self_adjoint(defm, 1.0, 2, 1, 0.05, Side::Right, axes);
    SpectralOperator D = SpectralOperator::from_dirac(build_conformal_dirac(k), {}, "nc4-dirac");
    const GammaRep rep = gamma_basis(4);
    const auto Vc = random_components(gen, defm, 0.5), Wc = random_components(gen, defm, 0.5);
    const Symbol v = build_one_form({Vc, k}, rep), w = build_one_form({Wc, k}, rep);
    const double c = 8.0 * M_PI * M_PI;
    const auto g = metric_form(D, v, w);
    const auto e = einstein_form(D, v, w);
    std::vector<CliffordValue> samples{
        CliffordValue::from_const(gen.trig_poly(defm, 2, 1, 1.0, Side::Left, axes), rep.gamma[trial]),
        CliffordValue::scalar(gen.trig_poly(defm, 2, 1, 1.0, Side::Left, axes), 4)};
    const std::string tag = "k#" + std::to_string(trial);
    return Checks{
        abs_check(tag + " spectral closedness max|W(T D |D|^-4)|",
                  spectral_closedness_check(D, samples).max_abs, 0.0, 1e-9),
        rel_check(tag + " metric form = 8pi^2 tau(W^a V^a k^-4)", g.value,
                  c * reference::dirac4_metric(k, Vc, Wc), 1e-8,
                  "8pi^2 = 2^m v_3 (spinor trace and sphere volume)"),
        rel_check(tag + " einstein form = -8pi^2 x closed form", e.value,
                  -c * reference::dirac4_einstein(k, Vc, Wc), 1e-8,
                  "sign: the closed form is quadratic in delta = -i d")};
  });
  }
  groups.push_back([] {
    auto defm = DeformationMatrix::commutative(4);
    DataGenerator gen(5100);
    const TorusElement k = commutative_conformal(defm, 0.04, Complex(0.02, 0.01));
    SpectralOperator D = SpectralOperator::from_dirac(build_conformal_dirac(k), {}, "c4-dirac");
    const GammaRep rep = gamma_basis(4);
    const auto Vc = random_components(gen, defm, 0.3), Wc = random_components(gen, defm, 0.3);
    const auto e = einstein_form(D, build_one_form({Vc, k}, rep), build_one_form({Wc, k}, rep));
    const auto G = reference::conformal_einstein_tensor(k);
    Complex vwg = 0.0;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) vwg += (Vc[a] * Wc[b] * G[static_cast<std::size_t>(a * 4 + b)]).trace();
    return Checks{
        rel_check("theta=0 einstein form = (4pi^2/3) tau(V^a W^b G_ab)", e.value,
                  4.0 * M_PI * M_PI / 3.0 * vwg, 1e-8),
        rel_check("theta=0 einstein form = -8pi^2 x commutative limit", e.value,
                  -8.0 * M_PI * M_PI * reference::dirac4_commutative_limit(k, Vc, Wc), 1e-8)};
  });
  return run_groups(groups);
}

Checks suite_commutative_einstein() {
  std::vector<Group> groups;
  groups.push_back([] {
    auto defm = DeformationMatrix::commutative(4);
    DataGenerator gen(6000);
    const TorusElement chi = commutative_conformal(defm, 0.1, Complex(0.03, 0.02));
    const MetricData metric = MetricData::conformally_flat(chi, 1);
    SpectralOperator L(build_laplace_type(metric, ConnectionData::trivial(1)), {}, "c4-conformal");
    const auto Vc = random_components(gen, defm, 0.3), Wc = random_components(gen, defm, 0.3);
    const Symbol V = geometric_field(Vc), W = geometric_field(Wc);
    const Curvature c = curvature_tensors(metric);
    return Checks{
        rel_check("conformal T^4 einstein = (v_3/6) int G(V,W)", einstein_vf(L, V, W).value,
                  functional_oracle(c, OracleKind::Einstein, Vc, Wc), 1e-6),
        rel_check("conformal T^4 metric = -(v_3/4) int g(V,W)", metric_vf(L, V, W).value,
                  functional_oracle(c, OracleKind::Metric, Vc, Wc), 1e-6)};
  });
  groups.push_back([] {
    auto defm = DeformationMatrix::commutative(4);
    DataGenerator gen(6100);
    SpectralOperator L(build_flat_laplacian(defm), {}, "flat4");
    const auto Vc = random_components(gen, defm, 0.3), Wc = random_components(gen, defm, 0.3);
    return Checks{abs_check("flat T^4 einstein",
                            einstein_vf(L, geometric_field(Vc), geometric_field(Wc)).value, 0.0,
                            1e-12)};
  });
  for (int trial = 0; trial < 3; ++trial) {
    groups.push_back([trial] {
      auto defm = DeformationMatrix::commutative(2);
      DataGenerator gen(6200 + static_cast<std::uint64_t>(trial));
      // g_11, g_22 and g_12 with independent modes; positive definite for these amplitudes.
      const TorusElement g11 = gen.self_adjoint(defm, 1.0, 2, 2, 0.06);
      const TorusElement g22 = gen.self_adjoint(defm, 1.2, 2, 2, 0.06);
      const TorusElement g12 = gen.self_adjoint(defm, 0.1, 2, 1, 0.05);
      const MetricData metric = MetricData::general(defm, {g11, g12, g12, g22});
      CurvedOperator L(build_laplace_type(metric, ConnectionData::trivial(1)), metric, {},
                       "t2-general");
      const auto Vc = random_components(gen, defm, 0.5), Wc = random_components(gen, defm, 0.5);
      const Symbol V = geometric_field(Vc), W = geometric_field(Wc);
      const auto e = einstein_vf(L, V, W);
      const Curvature c = curvature_tensors(metric);
      const std::string tag = "general T^2 #" + std::to_string(trial);
      return Checks{abs_check(tag + " einstein", e.value, 0.0, 1e-10),
                    rel_check(tag + " metric = -(v_1/2) int g(V,W)", metric_vf(L, V, W).value,
                              functional_oracle(c, OracleKind::Metric, Vc, Wc), 1e-6)};
    });
  }
  return run_groups(groups);
}

Checks suite_laplace_type_terms() {
  std::vector<Group> groups;
  for (int rank : {1, 2}) {
    groups.push_back([rank] {
      auto defm = DeformationMatrix::commutative(4);
      DataGenerator gen(7000 + static_cast<std::uint64_t>(rank));
      // Skew-adjoint connection coefficients T_a = i A_a, A_a self-adjoint.
      std::vector<CliffordValue> T;
      for (int a = 0; a < 4; ++a) {
        CliffordValue t = CliffordValue::zero(defm, rank);
        for (int r = 0; r < rank; ++r) {
          t(r, r) = gen.self_adjoint(defm, 0.0, 2, 1, 0.3, Side::Left, {0, 1}) * Complex(0.0, 1.0);
          for (int s = r + 1; s < rank; ++s) {
            t(r, s) = gen.trig_poly(defm, 2, 1, 0.3, Side::Left, {0, 1});
            t(s, r) = -t(r, s).adjoint();
          }
        }
        T.push_back(t);
      }
      CliffordValue E = CliffordValue::zero(defm, rank);
      for (int r = 0; r < rank; ++r)
        for (int s = 0; s < rank; ++s)
          E(r, s) = gen.trig_poly(defm, 2, 1, 0.3, Side::Left, {0, 1}) +
                    TorusElement::scalar(defm, r == s ? 0.5 : 0.0);
      const auto Vc = random_components(gen, defm, 0.3), Wc = random_components(gen, defm, 0.3);
      const MetricData flat = MetricData::flat(defm);
      ConnectionData conn{rank, T, std::nullopt};
      ConnectionData connE{rank, T, E};
      SpectralOperator L0(build_laplace_type(flat, ConnectionData::trivial(1)), {}, "flat");
      SpectralOperator LT(build_laplace_type(flat, conn), {}, "flat-T");
      SpectralOperator LE(build_laplace_type(flat, connE), {}, "flat-T-E");
      const Symbol V = geometric_field(Vc, T), W = geometric_field(Wc, T);
      const auto eT = einstein_vf(LT, V, W);
      const auto eE = einstein_vf(LE, V, W);
      const Complex g0 = metric_vf(L0, geometric_field(Vc), geometric_field(Wc)).value;
      const std::string tag = rank == 1 ? "U(1)" : "rank 2";
      return Checks{
          rel_check(tag + " einstein = (v_3/2) int V^a W^b F_ab", eT.v_coeff,
                    reference::connection_curvature_term(T, Vc, Wc), 1e-8, "compared as v_3 coefficients"),
          rel_check(tag + " E-shift = (v_3/2) int Tr(E) g(V,W)", eE.v_coeff - eT.v_coeff,
                    reference::endomorphism_shift(E, Vc, Wc), 1e-8, "compared as v_3 coefficients"),
          rel_check(tag + " metric with T = rk x metric without", metric_vf(LT, V, W).value,
                    static_cast<double>(rank) * g0, 1e-10),
          rel_check(tag + " metric with T, E = rk x metric without", metric_vf(LE, V, W).value,
                    static_cast<double>(rank) * g0, 1e-10)};
    });
  }
  return run_groups(groups);
}

Checks suite_forms_commutative() {
  std::vector<Group> groups;
  groups.push_back([] {
    auto defm = DeformationMatrix::commutative(2);
    DataGenerator gen(8000);
    SpectralOperator D = SpectralOperator::from_dirac(build_flat_dirac(defm), {}, "flat2-dirac");
    const GammaRep rep = gamma_basis(2);
    const auto Vc = random_components(gen, defm, 0.5), Wc = random_components(gen, defm, 0.5);
    const Symbol v = build_one_form({Vc, std::nullopt}, rep), w = build_one_form({Wc, std::nullopt}, rep);
    const Curvature c = curvature_tensors(MetricData::flat(defm));
    return Checks{
        rel_check("flat T^2 metric form = 2^m v_1 int g(v,w)", metric_form(D, v, w).value,
                  functional_oracle(c, OracleKind::FormMetric, Vc, Wc), 1e-6),
        abs_check("flat T^2 einstein form", einstein_form(D, v, w).value, 0.0, 1e-10)};
  });
  groups.push_back([] {
    auto defm = DeformationMatrix::commutative(4);
    DataGenerator gen(8100);
    const TorusElement k = commutative_conformal(defm, 0.04, Complex(0.02, 0.01));
    SpectralOperator D = SpectralOperator::from_dirac(build_conformal_dirac(k), {}, "c4-dirac");
    const GammaRep rep = gamma_basis(4);
    const auto Vc = random_components(gen, defm, 0.3), Wc = random_components(gen, defm, 0.3);
    const Symbol v = build_one_form({Vc, k}, rep), w = build_one_form({Wc, k}, rep);
    const Curvature c = curvature_tensors(MetricData::conformally_flat(k, -4));
    return Checks{
        rel_check("conformal T^4 metric form = 2^m v_3 int g(v,w)", metric_form(D, v, w).value,
                  functional_oracle(c, OracleKind::FormMetric, Vc, Wc), 1e-6),
        rel_check("conformal T^4 einstein form = 2^m (v_3/6) int G(v,w)",
                  einstein_form(D, v, w).value,
                  functional_oracle(c, OracleKind::FormEinstein, Vc, Wc), 1e-6)};
  });
  return run_groups(groups);
}

Symbol random_scalar_order_minus2(DataGenerator& gen, const DeformationPtr& defm) {
  Symbol s(defm, 1, -4);
  auto c = [&] {
    return CliffordValue::scalar(gen.trig_poly(defm, 3, 2, 0.5) + TorusElement::one(defm), 1);
  };
  s.add_term(c(), {0, 0, 0, 0}, 1);
  s.add_term(c(), {1, 1, 0, 0}, 2);
  s.add_term(c(), {1, 0, 0, 0}, 2);
  s.add_term(c(), {0, 1, 0, 0}, 2);
  s.add_term(c(), {0, 0, 0, 0}, 2);
  s.add_term(c(), {2, 0, 0, 0}, 3);
  s.add_term(c(), {1, 1, 0, 0}, 3);
  s.add_term(c(), {0, 0, 0, 0}, 3);
  return s;
}

Checks suite_appendix_powers() {
  std::vector<Group> groups;
  groups.push_back([] {
    auto defm = DeformationMatrix::commutative(2);
    DataGenerator gen(9000);
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      const Symbol b = random_scalar_order_minus2(gen, defm);
      for (int l : {2, 3, 4}) {
        const Symbol iter = power_symbols(b, l);
        const Symbol closed = scalar_power_closed_form(b.restricted(-2, -2), b.restricted(-3, -3),
                                                       b.restricted(-4, -4), l);
        worst = std::max(worst, Symbol::max_abs_difference(iter, closed) /
                                    std::max(1.0, iter.max_norm1()));
      }
    }
    return Checks{abs_check("closed-form powers vs iterated compose (10 symbols, l=2,3,4)", worst,
                            0.0, 1e-12, "max coefficient difference / max(1, |coeff|)")};
  });
  for (int nc : {0, 1}) {
    groups.push_back([nc] {
      auto defm = nc ? nc2() : DeformationMatrix::commutative(2);
      DataGenerator gen(9100 + static_cast<std::uint64_t>(nc));
      const CliffordValue one = CliffordValue::identity(defm, 1);
      double worst = 0.0;
      for (int trial = 0; trial < 3; ++trial) {
        Symbol p(defm, 1);
        p.add_term(CliffordValue::scalar(gen.self_adjoint(defm, 1.0, 2, 2, 0.1), 1), {0, 0, 0, 0}, -1);
        p.add_term(CliffordValue::scalar(gen.trig_poly(defm, 3, 2, 0.5), 1), {1, 0, 0, 0}, 0);
        p.add_term(CliffordValue::scalar(gen.trig_poly(defm, 3, 2, 0.5), 1), {0, 1, 0, 0}, 0);
        p.add_term(CliffordValue::scalar(gen.trig_poly(defm, 3, 2, 0.5), 1), {0, 0, 0, 0}, 0);
        const Symbol b = parametrix(p).symbol;
        const Symbol id = Symbol::constant(one);
        worst = std::max({worst, Symbol::max_abs_difference(compose(b, p), id),
                          Symbol::max_abs_difference(compose(p, b), id)});
      }
      return Checks{abs_check(std::string(nc ? "NC" : "commutative") +
                                  " T^2 parametrix o operator = 1 in 3 orders",
                              worst, 0.0, 1e-12)};
    });
  }
  return run_groups(groups);
}

// Perfect matchings of a label list pairing equal labels only.
std::int64_t matchings(const std::vector<int>& labels) {
  if (labels.empty()) return 1;
  std::int64_t count = 0;
  for (std::size_t i = 1; i < labels.size(); ++i) {
    if (labels[i] != labels[0]) continue;
    std::vector<int> rest;
    for (std::size_t j = 1; j < labels.size(); ++j)
      if (j != i) rest.push_back(labels[j]);
    count += matchings(rest);
  }
  return count;
}

void all_multi_indices(int n, int max_total, std::vector<MultiIndex>& out) {
  MultiIndex a{};
  std::function<void(int, int)> rec = [&](int axis, int left) {
    if (axis == n) {
      out.push_back(a);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      a[static_cast<std::size_t>(axis)] = v;
      rec(axis + 1, left - v);
    }
    a[static_cast<std::size_t>(axis)] = 0;
  };
  rec(0, max_total);
}

Checks suite_moments() {
  std::vector<Group> groups;
  for (int n : {2, 4}) {
    groups.push_back([n] {
      std::vector<MultiIndex> alphas;
      all_multi_indices(n, 6, alphas);
      // Exact: ∫ξ^α / v = #pairings / (n (n+2) ··· (n+|α|−2)).
      double worst_exact = 0.0;
      std::string worst_alpha = "none";
      for (const auto& a : alphas) {
        std::vector<int> labels;
        int total = 0;
        for (int i = 0; i < n; ++i)
          for (int r = 0; r < a[static_cast<std::size_t>(i)]; ++r) labels.push_back(i), ++total;
        double den = 1.0;
        for (int i = n; i <= n + total - 2; i += 2) den *= i;
        const double exact = static_cast<double>(matchings(labels)) / den;
        const double err = std::abs(sphere_moment(n, a).v_coeff() - exact);
        if (err > worst_exact) {
          worst_exact = err;
          worst_alpha.clear();
          for (int i = 0; i < n; ++i) worst_alpha += std::to_string(a[static_cast<std::size_t>(i)]);
        }
      }
      // Monte Carlo: uniform points on S^{n−1} from normalised Gaussians.
      std::mt19937_64 rng(10000 + static_cast<std::uint64_t>(n));
      std::normal_distribution<double> normal;
      const int samples = 8000000;
      std::vector<double> sums(alphas.size(), 0.0);
      std::array<std::array<double, 7>, kMaxDimension> pw{};
      for (int s = 0; s < samples; ++s) {
        double x[kMaxDimension] = {0, 0, 0, 0};
        double r2 = 0.0;
        for (int i = 0; i < n; ++i) {
          x[i] = normal(rng);
          r2 += x[i] * x[i];
        }
        const double r = std::sqrt(r2);
        for (int i = 0; i < n; ++i) {
          pw[static_cast<std::size_t>(i)][0] = 1.0;
          for (int p = 1; p <= 6; ++p) pw[static_cast<std::size_t>(i)][static_cast<std::size_t>(p)] =
              pw[static_cast<std::size_t>(i)][static_cast<std::size_t>(p - 1)] * x[i] / r;
        }
        for (std::size_t k = 0; k < alphas.size(); ++k) {
          double v = 1.0;
          for (int i = 0; i < n; ++i)
            v *= pw[static_cast<std::size_t>(i)][static_cast<std::size_t>(alphas[k][static_cast<std::size_t>(i)])];
          sums[k] += v;
        }
      }
      double worst_mc = 0.0;
      for (std::size_t k = 0; k < alphas.size(); ++k) {
        worst_mc = std::max(worst_mc, std::abs(sums[k] / samples - sphere_moment(n, alphas[k]).v_coeff()));
      }
      const std::string tag = "n=" + std::to_string(n) + " |alpha|<=6";
      return Checks{abs_check(tag + " moments vs pairing counts", worst_exact, 0.0, 1e-15,
                              std::to_string(alphas.size()) +
                                  " multi-indices, in units of v_{n-1}; worst alpha " + worst_alpha),
                    abs_check(tag + " moments vs Monte Carlo", worst_mc, 0.0, 1e-3,
                              std::to_string(samples) + " samples, in units of v_{n-1}"),
                    rel_check("n=" + std::to_string(n) + " v_{n-1}", sphere_volume(n),
                              n == 2 ? 2.0 * M_PI : 2.0 * M_PI * M_PI, 1e-15)};
    });
  }
  return run_groups(groups);
}

Checks suite_product_triple() {
  std::vector<Group> groups;
  for (int base_kind : {0, 1}) {
    groups.push_back([base_kind] {
      auto defm = nc2();
      DataGenerator gen(11000 + static_cast<std::uint64_t>(base_kind));
      const GammaRep rep = gamma_basis(2);
      Symbol d = build_flat_dirac(defm);
      std::optional<TorusElement> k;
      if (base_kind == 1) {
        k = gen.self_adjoint(defm, 1.0, 2, 1, 0.05).to_opposite();
        d = build_conformal_dirac(*k);
      }
      SpectralOperator base = SpectralOperator::from_dirac(d, {}, "base");
      auto form = [&] {
        std::vector<TorusElement> c{gen.trig_poly(defm, 2, 1, 0.5) + TorusElement::one(defm),
                                    gen.trig_poly(defm, 2, 1, 0.5)};
        return one_form_value({c, k}, rep);
      };
      const CliffordValue wp = form(), wm = form(), wp2 = form(), wm2 = form();
      const TorusElement pp = gen.trig_poly(defm, 2, 1, 0.5) + TorusElement::one(defm);
      const TorusElement pm = gen.trig_poly(defm, 2, 1, 0.5);
      const TorusElement pp2 = gen.trig_poly(defm, 2, 1, 0.5);
      const TorusElement pm2 = gen.trig_poly(defm, 2, 1, 0.5) + TorusElement::one(defm);
      Checks out;
      for (Complex c : {Complex(0.0, 0.0), Complex(1.0, 0.0), Complex(0.3, 0.4)}) {
        SpectralOperator P = SpectralOperator::from_dirac(build_product_dirac(d, c), {}, "product");
        const Symbol om = build_product_form(wp, wm, pp, pm, c, rep);
        const Symbol om2 = build_product_form(wp2, wm2, pp2, pm2, c, rep);
        reference::ProductInputs in{Symbol::constant(wp), Symbol::constant(wm),
                                    Symbol::constant(wp2), Symbol::constant(wm2),
                                    pp, pm, pp2, pm2, c};
        const auto ref = reference::product_triple(base, in);
        char tag[96];
        std::snprintf(tag, sizeof tag, "%s base, c=%.1f%+.1fi", base_kind ? "conformal" : "flat",
                      c.real(), c.imag());
        out.push_back(rel_check(std::string(tag) + " metric", metric_form(P, om, om2).value,
                                ref.metric, 1e-8));
        out.push_back(rel_check(std::string(tag) + " einstein", einstein_form(P, om, om2).value,
                                ref.einstein, 1e-8));
      }
      return out;
    });
  }
  return run_groups(groups);
}

Checks suite_module_linearity() {
  std::vector<Group> groups;
  // Metric functional of the conformal NC 2-torus Laplacian.
  groups.push_back([] {
    auto defm = nc2();
    const TorusElement h = nc2_weight(0);
    DataGenerator gen(12000);
    SpectralOperator L(build_conformal_laplacian(h, ConformalVariant::TwoTorus), {}, "nc2-h");
    const auto V1 = random_constants(gen, 2), V2 = random_constants(gen, 2),
               Wc = random_constants(gen, 2);
    const Complex a(0.7, -0.2), b(-0.4, 1.1);
    std::vector<Complex> comb(2);
    for (int i = 0; i < 2; ++i) comb[i] = a * V1[i] + b * V2[i];
    auto field = [&](const std::vector<Complex>& c) { return rescaled_field(defm, c, h); };
    const Complex g1 = metric_vf(L, field(V1), field(Wc)).value;
    const Complex g2 = metric_vf(L, field(V2), field(Wc)).value;
    const Complex gc = metric_vf(L, field(comb), field(Wc)).value;
    const Complex gs = metric_vf(L, field(Wc), field(V1)).value;

    // Localised: f in front, f·V, and V·f W.
    const TorusElement f = gen.trig_poly(defm, 3, 2, 0.5) + TorusElement::one(defm);
    const CliffordValue fc = CliffordValue::scalar(f, 1);
    const Symbol V = field(V1), W = field(Wc);
    const Complex loc = metric_vf(L, V, W, f).value;
    const Complex fv = metric_vf(L, V.left_multiply(fc), W).value;
    const Complex fw = metric_vf(L, V, W.left_multiply(fc)).value;
    return Checks{rel_check("metric_vf linear in V", gc, a * g1 + b * g2, 1e-12),
                  rel_check("metric_vf symmetric", gs, g1, 1e-12),
                  rel_check("localized: W(f V W L^-2) = metric_vf(fV, W)", fv, loc, 1e-12),
                  rel_check("localized: W(f V W L^-2) = metric_vf(V, fW)", fw, loc, 1e-12)};
  });
  // Einstein functional of a flat NC 2-torus Laplace-type operator with an
  // endomorphism (the only source of a nonzero value in dimension two).
  groups.push_back([] {
    auto defm = nc2();
    DataGenerator gen(12100);
    ConnectionData conn{1, {}, CliffordValue::scalar(gen.self_adjoint(defm, 0.5, 2, 2, 0.3), 1)};
    SpectralOperator L(build_laplace_type(MetricData::flat(defm), conn), {}, "nc2-E");
    const auto V1 = random_constants(gen, 2), V2 = random_constants(gen, 2),
               Wc = random_constants(gen, 2);
    const Complex a(0.3, 0.5), b(1.2, -0.7);
    std::vector<TorusElement> comb;
    for (int i = 0; i < 2; ++i) comb.push_back(TorusElement::scalar(defm, a * V1[i] + b * V2[i]));
    auto field = [&](const std::vector<Complex>& c) { return geometric_field(as_elements(defm, c)); };
    const Complex e1 = einstein_vf(L, field(V1), field(Wc)).value;
    const Complex e2 = einstein_vf(L, field(V2), field(Wc)).value;
    const Complex ec = einstein_vf(L, geometric_field(comb), field(Wc)).value;
    const Complex es = einstein_vf(L, field(Wc), field(V1)).value;
    return Checks{rel_check("einstein_vf linear in V", ec, a * e1 + b * e2, 1e-12),
                  rel_check("einstein_vf symmetric", es, e1, 1e-12)};
  });
  // Forms over the conformal NC 2-torus Dirac operator.
  groups.push_back([] {
    auto defm = nc2();
    DataGenerator gen(12200);
    const TorusElement k = gen.self_adjoint(defm, 1.0, 2, 2, 0.1).to_opposite();
    SpectralOperator D = SpectralOperator::from_dirac(build_conformal_dirac(k), {}, "nc2-dirac");
    const GammaRep rep = gamma_basis(2);
    const auto Vc = random_components(gen, defm, 0.5), Wc = random_components(gen, defm, 0.5);
    const Symbol v = build_one_form({Vc, k}, rep), w = build_one_form({Wc, k}, rep);
    const Symbol a = Symbol::constant(CliffordValue::scalar(gen.trig_poly(defm, 2, 1, 0.5) + TorusElement::one(defm), 2));
    const Symbol b = Symbol::constant(CliffordValue::scalar(gen.trig_poly(defm, 2, 1, 0.5) + TorusElement::one(defm), 2));
    CalculusOptions exact;
    exact.depth = 0;
    auto mul = [&](const Symbol& x, const Symbol& y) { return compose(x, y, exact); };
    return Checks{
        rel_check("forms: g_D(vb, w) = g_D(v, bw)", metric_form(D, mul(v, b), w).value,
                  metric_form(D, v, mul(b, w)).value, 1e-12),
        rel_check("forms: g_D(av, w) = g_D(v, wa)", metric_form(D, mul(a, v), w).value,
                  metric_form(D, v, mul(w, a)).value, 1e-12)};
  });
  // Spectrally closed consequence and orderings on the conformal 4-torus.
  groups.push_back([] {
    auto defm = DeformationMatrix::commutative(4);
    DataGenerator gen(12300);
    const TorusElement k = commutative_conformal(defm, 0.04, Complex(0.02, 0.01));
    SpectralOperator D = SpectralOperator::from_dirac(build_conformal_dirac(k), {}, "c4-dirac");
    const GammaRep rep = gamma_basis(4);
    const auto Vc = random_components(gen, defm, 0.3), Wc = random_components(gen, defm, 0.3);
    const Symbol v = build_one_form({Vc, k}, rep), w = build_one_form({Wc, k}, rep);
    const Symbol b = Symbol::constant(CliffordValue::scalar(
        gen.trig_poly(defm, 2, 1, 0.3, Side::Left, {0, 1}) + TorusElement::one(defm), 4));
    std::vector<CliffordValue> samples{
        CliffordValue::from_const(gen.trig_poly(defm, 2, 1, 1.0, Side::Left, {0, 1}), rep.gamma[0]),
        CliffordValue::scalar(gen.trig_poly(defm, 2, 1, 1.0, Side::Left, {0, 1}), 4)};
    const auto closed = spectral_closedness_check(D, samples);
    CalculusOptions exact;
    exact.depth = 0;
    const Complex inner = einstein_form(D, v, w).value;
    const Complex outer = einstein_form(D, v, w, EinsteinOrdering::Outer).value;
    const Complex vb = einstein_form(D, compose(v, b, exact), w).value;
    const Complex bw = einstein_form(D, v, compose(b, w, exact)).value;
    return Checks{abs_check("conformal T^4 Dirac spectrally closed", closed.max_abs, 0.0, 1e-12),
                  rel_check("closed: G_D(vb, w) = G_D(v, bw)", vb, bw, 1e-12),
                  rel_check("G_D orderings v{D,w}D and {D,v}wD agree", outer, inner, 1e-10)};
  });
  return run_groups(groups);
}

struct SuiteEntry {
  const char* name;
  Checks (*run)();
};

const std::vector<SuiteEntry>& registry() {
  static const std::vector<SuiteEntry> r{
      {"nc2-metric", suite_nc2_metric},
      {"nc2-einstein-vanishing", suite_nc2_einstein_vanishing},
      {"nc4-laplacian", suite_nc4_laplacian},
      {"nc2-dirac", suite_nc2_dirac},
      {"nc4-dirac", suite_nc4_dirac},
      {"commutative-einstein", suite_commutative_einstein},
      {"laplace-type-terms", suite_laplace_type_terms},
      {"forms-commutative", suite_forms_commutative},
      {"appendix-powers", suite_appendix_powers},
      {"moments", suite_moments},
      {"product-triple", suite_product_triple},
      {"module-linearity", suite_module_linearity},
  };
  return r;
}

std::string complex_str(Complex z) {
  char buf[64];
  if (z.imag() == 0.0) {
    std::snprintf(buf, sizeof buf, "%.12g", z.real());
  } else {
    std::snprintf(buf, sizeof buf, "%.12g%+.3gi", z.real(), z.imag());
  }
  return buf;
}

}  // namespace

bool SuiteResult::pass() const {
  if (!error.empty() || checks.empty()) return false;
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& e : registry()) v.emplace_back(e.name);
    return v;
  }();
  return names;
}

SuiteResult run_suite(const std::string& name) {
  const auto& reg = registry();
  for (std::size_t i = 0; i < reg.size(); ++i) {
    if (name != reg[i].name) continue;
    if (const char* fault = std::getenv("WODZICKI_INJECT_FAULT")) {
      set_moment_fault(std::string(fault) == "moments");
    }
    SuiteResult r;
    r.suite = name;
    r.criterion = static_cast<int>(i) + 1;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      r.checks = reg[i].run();
    } catch (const std::exception& e) {
      r.error = e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
  }
  throw ConfigurationError("unknown suite '" + name + "'");
}

nlohmann::json suite_to_json(const SuiteResult& r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name},
                      {"pass", c.pass},
                      {"measured", complex_to_json(c.measured)},
                      {"expected", complex_to_json(c.expected)},
                      {"error", std::isfinite(c.error) ? nlohmann::json(c.error) : nlohmann::json(nullptr)},
                      {"error_kind", c.relative ? "relative" : "absolute"},
                      {"tol", c.tol},
                      {"note", c.note}});
  }
  nlohmann::json j{{"suite", r.suite},
                   {"criterion", r.criterion},
                   {"pass", r.pass()},
                   {"seconds", r.seconds},
                   {"checks", std::move(checks)}};
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

std::string format_suite(const SuiteResult& r) {
  std::ostringstream os;
  os << "suite " << r.suite << " (criterion " << r.criterion << ", "
     << fmt("%.1f", r.seconds) << " s)\n";
  for (const auto& c : r.checks) {
    os << "  " << (c.pass ? "PASS" : "FAIL") << "  " << c.name << "\n"
       << "        measured " << complex_str(c.measured) << "  expected "
       << complex_str(c.expected) << "  " << (c.relative ? "rel" : "abs") << " err "
       << fmt("%.3g", c.error) << " <= " << fmt("%.0e", c.tol);
    if (!c.note.empty()) os << "  [" << c.note << "]";
    os << "\n";
  }
  if (!r.error.empty()) os << "  FAIL  aborted: " << r.error << "\n";
  os << "  => " << (r.pass() ? "PASS" : "FAIL") << "\n";
  return os.str();
}

}  // namespace wodzicki
