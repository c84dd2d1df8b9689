#include "wodzicki/operators.hpp"

#include "wodzicki/errors.hpp"
#include "wodzicki/geometry.hpp"

namespace wodzicki {

namespace {

const Complex I(0.0, 1.0);

MultiIndex unit(int a) {
  MultiIndex m{};
  m[static_cast<std::size_t>(a)] = 1;
  return m;
}

CalculusOptions exact_options(const CalculusOptions& o) {
  CalculusOptions e = o;
  e.depth = 0;
  return e;
}

Symbol scalar_symbol(const TorusElement& x, int rank) {
  return Symbol::constant(CliffordValue::scalar(x, rank));
}

TorusElement inverse_of(const TorusElement& x, const CalculusOptions& o) {
  return invert(x, o.inversion).value;
}

// x^p for any integer p; negative powers go through one certified inversion.
TorusElement integer_power(const TorusElement& x, int p, const CalculusOptions& o) {
  if (p == 0) return TorusElement::one(x.deformation());
  if (p > 0) return x.pow(p);
  return inverse_of(x, o).pow(-p);
}

void check_positive_samples(const TorusElement& f) {
  const int n = f.dimension();
  int m = default_grid(n);
  while (2 * f.support_radius() >= m) m *= 2;
  for (const auto& v : sample(f, m)) {
    if (v.real() <= 0.0 || std::abs(v.imag()) > 1e-10 * (1.0 + std::abs(v))) {
      throw ConfigurationError("conformal factor is not positive on the sample grid");
    }
  }
}

CliffordValue embed(const CliffordValue& x, int dim, int row, int col) {
  CliffordValue out(x.deformation(), dim);
  for (int r = 0; r < x.dim(); ++r)
    for (int c = 0; c < x.dim(); ++c) out(row + r, col + c) = x(r, c);
  return out;
}

void check_components(const std::vector<TorusElement>& comps, const char* what) {
  if (comps.empty()) throw ArgumentError(std::string(what) + " has no components");
  const int n = comps.front().dimension();
  if (static_cast<int>(comps.size()) != n) {
    throw ConfigurationError(std::string(what) + " needs one component per axis");
  }
  for (const auto& c : comps) {
    if (!c.deformation()->same_as(*comps.front().deformation())) {
      throw ConfigurationError(std::string(what) + " components use different deformations");
    }
  }
}


// Symbol of ∇^(s)_{e_i} = F ∂_i − ¼ α_ijk γ^j γ^k.
Symbol frame_derivative(const SpinFrame& s, const GammaRep& rep, int i) {
  const int n = rep.n;
  const int d = rep.spinor_dim();
  Symbol e(s.F.deformation(), d);
  e.add_term(CliffordValue::scalar(s.F, d), unit(i), 0, I);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      const auto& a = s.alpha[static_cast<std::size_t>((i * n + j) * n + k)];
      if (a.is_zero()) continue;
      e.add_term(CliffordValue::from_const(a, rep.gamma[j] * rep.gamma[k]), MultiIndex{}, 0, -0.25);
    }
  return e;
}

}  // namespace

Symbol build_vector_field(const VectorFieldSpec& v, const CalculusOptions& options) {
  check_components(v.components, "vector field");
  const auto& defm = v.components.front().deformation();
  const int n = defm->dimension();
  const int rank = v.connection.empty() ? v.rank : v.connection.front().dim();
  if (!v.connection.empty() && v.flavor != VectorFlavor::Geometric) {
    throw ConfigurationError("connections apply to geometric vector fields only");
  }
  if (!v.connection.empty() && static_cast<int>(v.connection.size()) != n) {
    throw ConfigurationError("connection needs one coefficient per axis");
  }
  Symbol s(defm, rank);
  switch (v.flavor) {
    case VectorFlavor::Geometric:
      for (int a = 0; a < n; ++a) {
        const auto& Va = v.components[static_cast<std::size_t>(a)];
        s.add_term(CliffordValue::scalar(Va, rank), unit(a), 0, I);
        if (!v.connection.empty()) {
          s.add_term(Va * v.connection[static_cast<std::size_t>(a)], MultiIndex{}, 0, -1.0);
        }
      }
      break;
    case VectorFlavor::Derivation:
      for (int a = 0; a < n; ++a) {
        s.add_term(CliffordValue::scalar(v.components[static_cast<std::size_t>(a)], rank), unit(a),
                   0);
      }
      break;
    case VectorFlavor::Rescaled: {
      if (!v.weight) throw ConfigurationError("rescaled vector field needs a weight");
      const TorusElement winv = inverse_of(*v.weight, options);
      const auto ex = exact_options(options);
      const auto right = scalar_symbol(winv, rank);
      for (int a = 0; a < n; ++a) {
        const auto left =
            scalar_symbol(v.components[static_cast<std::size_t>(a)] * *v.weight, rank);
        const auto da = Symbol::monomial(CliffordValue::identity(defm, rank), unit(a), 0);
        s += compose(left, compose(da, right, ex), ex);
      }
      break;
    }
  }
  return s;
}

Symbol build_flat_laplacian(const DeformationPtr& defm, int rank) {
  return Symbol::monomial(CliffordValue::identity(defm, rank), MultiIndex{}, -1);
}

Symbol build_conformal_laplacian(const TorusElement& w, ConformalVariant variant,
                                 const CalculusOptions& options) {
  const auto& defm = w.deformation();
  const int n = defm->dimension();
  if ((variant == ConformalVariant::TwoTorus) != (n == 2) ||
      (variant == ConformalVariant::FourTorus && n != 4)) {
    throw ConfigurationError("conformal Laplacian variant does not match the dimension");
  }
  const auto ex = exact_options(options);
  const auto winv = scalar_symbol(inverse_of(w, options), 1);
  if (variant == ConformalVariant::TwoTorus) {
    return compose(winv, compose(build_flat_laplacian(defm), winv, ex), ex);
  }
  const auto ws = scalar_symbol(w, 1);
  Symbol out(defm, 1);
  for (int a = 0; a < n; ++a) {
    const auto da = Symbol::monomial(CliffordValue::identity(defm, 1), unit(a), 0);
    out += compose(winv, compose(da, compose(ws, compose(da, winv, ex), ex), ex), ex);
  }
  return out;
}

Symbol build_laplace_type(const MetricData& metric, const ConnectionData& connection,
                          const CalculusOptions& options) {
  const auto& defm = metric.defm;
  const int n = defm->dimension();
  const int r = connection.rank;
  if (metric.mode != MetricMode::Flat && !defm->is_commutative()) {
    throw ConfigurationError("curved Laplace-type operators require theta = 0");
  }
  if (connection.has_connection()) {
    if (static_cast<int>(connection.T.size()) != n) {
      throw ConfigurationError("connection needs one coefficient per axis");
    }
    for (const auto& t : connection.T)
      if (t.dim() != r) throw ConfigurationError("connection rank mismatch");
  }
  if (connection.E && connection.E->dim() != r) throw ConfigurationError("endomorphism rank mismatch");

  std::vector<TorusElement> ginv(static_cast<std::size_t>(n * n), TorusElement(defm));
  std::vector<TorusElement> gam(static_cast<std::size_t>(n), TorusElement(defm));
  switch (metric.mode) {
    case MetricMode::Flat:
      for (int a = 0; a < n; ++a) ginv[static_cast<std::size_t>(a * n + a)] = TorusElement::one(defm);
      break;
    case MetricMode::ConformallyFlat: {
      const TorusElement& phi = *metric.factor;
      check_positive_samples(phi);
      const int p = metric.exponent;
      const TorusElement psi_inv = integer_power(phi, -p, options);
      const TorusElement lower = integer_power(phi, -p - 1, options);
      for (int a = 0; a < n; ++a) ginv[static_cast<std::size_t>(a * n + a)] = psi_inv;
      for (int c = 0; c < n; ++c) {
        gam[static_cast<std::size_t>(c)] = (0.5 * p * (2 - n)) * I * (lower * phi.derive(c));
      }
      break;
    }
    case MetricMode::GeneralFourier: {
      MetricFourier mf = metric_fourier(metric);
      ginv = std::move(mf.inverse);
      gam = std::move(mf.christoffel_trace);
      break;
    }
  }

  const auto ex = exact_options(options);
  std::vector<Symbol> nabla;
  for (int a = 0; a < n; ++a) {
    Symbol s = Symbol::monomial(CliffordValue::identity(defm, r), unit(a), 0);
    s *= I;
    if (connection.has_connection()) {
      s.add_term(connection.T[static_cast<std::size_t>(a)], MultiIndex{}, 0, -1.0);
    }
    nabla.push_back(std::move(s));
  }
  Symbol out(defm, r);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const auto& g = ginv[static_cast<std::size_t>(a * n + b)];
      if (g.is_zero()) continue;
      out -= compose(nabla[static_cast<std::size_t>(a)], nabla[static_cast<std::size_t>(b)], ex)
                 .left_multiply(CliffordValue::scalar(g, r));
    }
  for (int c = 0; c < n; ++c) {
    const auto& g = gam[static_cast<std::size_t>(c)];
    if (g.is_zero()) continue;
    out += nabla[static_cast<std::size_t>(c)].left_multiply(CliffordValue::scalar(g, r));
  }
  if (connection.E) out += Symbol::constant(*connection.E);
  return out;
}

Symbol build_flat_dirac(const DeformationPtr& defm) {
  const GammaRep rep = gamma_basis(defm->dimension());
  Symbol s(defm, rep.spinor_dim());
  const auto one = TorusElement::one(defm);
  for (int a = 0; a < rep.n; ++a) s.add_term(CliffordValue::from_const(one, rep.gamma[a]), unit(a), 0);
  return s;
}

Symbol build_conformal_dirac(const TorusElement& k) {
  const auto& defm = k.deformation();
  const Symbol d = build_flat_dirac(defm);
  const auto ks = scalar_symbol(commutant_image(k), d.matrix_dim());
  return compose(ks, compose(d, ks, {0}), {0});
}

SpinFrame spin_frame(const MetricData& metric, const CalculusOptions& options) {
  if (metric.mode != MetricMode::ConformallyFlat || metric.exponent % 2 != 0) {
    throw ConfigurationError("spin frame needs a conformally flat metric with even exponent");
  }
  if (!metric.defm->is_commutative()) throw ConfigurationError("spin connection requires theta = 0");
  check_positive_samples(*metric.factor);
  const int n = metric.dimension();
  SpinFrame s{integer_power(*metric.factor, -metric.exponent / 2, options), {}};
  std::vector<TorusElement> dF;
  for (int i = 0; i < n; ++i) dF.push_back(I * s.F.derive(i));
  auto c = [&](int i, int j, int k) {
    TorusElement out(metric.defm);
    if (j == k) out += dF[static_cast<std::size_t>(i)];
    if (i == k) out -= dF[static_cast<std::size_t>(j)];
    return out;
  };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) s.alpha.push_back(0.5 * (c(i, j, k) + c(k, i, j) + c(k, j, i)));
  return s;
}

Symbol build_spin_dirac(const MetricData& metric, const CalculusOptions& options) {
  const SpinFrame s = spin_frame(metric, options);
  const GammaRep rep = gamma_basis(metric.dimension());
  const auto one = TorusElement::one(metric.defm);
  Symbol out(metric.defm, rep.spinor_dim());
  for (int j = 0; j < rep.n; ++j) {
    out += frame_derivative(s, rep, j).left_multiply(CliffordValue::from_const(one, I * rep.gamma[j]));
  }
  return out;
}

Symbol build_spin_laplacian(const MetricData& metric, const CalculusOptions& options) {
  const SpinFrame s = spin_frame(metric, options);
  const GammaRep rep = gamma_basis(metric.dimension());
  const int n = rep.n;
  const int d = rep.spinor_dim();
  std::vector<Symbol> e;
  for (int i = 0; i < n; ++i) e.push_back(frame_derivative(s, rep, i));
  Symbol out(metric.defm, d);
  for (int i = 0; i < n; ++i) {
    out -= compose(e[static_cast<std::size_t>(i)], e[static_cast<std::size_t>(i)], {0});
    for (int j = 0; j < n; ++j) {
      const auto& a = s.alpha[static_cast<std::size_t>((i * n + i) * n + j)];
      if (a.is_zero()) continue;
      out += e[static_cast<std::size_t>(j)].left_multiply(CliffordValue::scalar(a, d));
    }
  }
  return out;
}

ConnectionData spin_connection(const MetricData& metric, const CalculusOptions& options) {
  const SpinFrame s = spin_frame(metric, options);
  const GammaRep rep = gamma_basis(metric.dimension());
  const int n = rep.n;
  const TorusElement Finv = integer_power(*metric.factor, metric.exponent / 2, options);
  ConnectionData c;
  c.rank = rep.spinor_dim();
  for (int a = 0; a < n; ++a) {
    CliffordValue t(metric.defm, c.rank);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const auto& al = s.alpha[static_cast<std::size_t>((a * n + j) * n + k)];
        if (al.is_zero()) continue;
        t += CliffordValue::from_const(0.25 * (Finv * al), rep.gamma[j] * rep.gamma[k]);
      }
    c.T.push_back(std::move(t));
  }
  return c;
}

Symbol block_symbol(const Symbol& a, const Symbol& b, const Symbol& c, const Symbol& d) {
  const int m = a.matrix_dim();
  for (const Symbol* s : {&b, &c, &d})
    if (s->matrix_dim() != m) throw ConfigurationError("block sizes differ");
  const int floor = std::max({a.floor(), b.floor(), c.floor(), d.floor()});
  Symbol out(a.deformation(), 2 * m, floor);
  const Symbol* blocks[4] = {&a, &b, &c, &d};
  for (int q = 0; q < 4; ++q) {
    for (const auto& t : blocks[q]->terms()) {
      if (t.order() < floor) continue;
      out.add_term(embed(t.coeff, 2 * m, (q / 2) * m, (q % 2) * m), t.alpha, t.j);
    }
  }
  return out;
}

Symbol build_product_dirac(const Symbol& base, Complex c) {
  const GammaRep rep = gamma_basis(base.dimension());
  if (rep.spinor_dim() != base.matrix_dim()) {
    throw ConfigurationError("product triple needs a Dirac symbol on the spinor bundle");
  }
  const auto one = TorusElement::one(base.deformation());
  const auto off = Symbol::constant(CliffordValue::from_const(one, c * rep.chirality));
  const auto off_adj = Symbol::constant(CliffordValue::from_const(one, std::conj(c) * rep.chirality));
  return block_symbol(base, off, off_adj, base);
}

CliffordValue one_form_value(const OneFormSpec& f, const GammaRep& rep) {
  check_components(f.components, "one-form");
  const auto& defm = f.components.front().deformation();
  if (defm->dimension() != rep.n) throw ConfigurationError("one-form dimension mismatch");
  std::optional<TorusElement> k2;
  if (f.rescale) {
    const TorusElement k = commutant_image(*f.rescale);
    k2 = k * k;
  }
  CliffordValue out(defm, rep.spinor_dim());
  for (int a = 0; a < rep.n; ++a) {
    const auto& v = f.components[static_cast<std::size_t>(a)];
    out += CliffordValue::from_const(k2 ? v * *k2 : v, rep.gamma[a]);
  }
  return out;
}

Symbol build_one_form(const OneFormSpec& f, const GammaRep& rep) {
  return Symbol::constant(one_form_value(f, rep));
}

Symbol build_product_form(const CliffordValue& w_plus, const CliffordValue& w_minus,
                          const TorusElement& phi_plus, const TorusElement& phi_minus, Complex c,
                          const GammaRep& rep) {
  if (w_plus.dim() != rep.spinor_dim() || w_minus.dim() != rep.spinor_dim()) {
    throw ConfigurationError("product form blocks must act on spinors");
  }
  return block_symbol(Symbol::constant(w_plus),
                      Symbol::constant(CliffordValue::from_const(c * phi_plus, rep.chirality)),
                      Symbol::constant(CliffordValue::from_const(std::conj(c) * phi_minus, rep.chirality)),
                      Symbol::constant(w_minus));
}

}  // namespace wodzicki
