#include "wodzicki/functionals.hpp"

#include <algorithm>
#include <cmath>

#include "wodzicki/errors.hpp"

namespace wodzicki {

namespace {

const Complex I(0.0, 1.0);

CalculusOptions exact_options(const CalculusOptions& o) {
  CalculusOptions e = o;
  e.depth = 0;
  return e;
}

int half_dimension(int n) {
  if (n % 2 != 0) throw ConfigurationError("spectral functionals need an even dimension");
  return n / 2;
}


void check_vectors(std::size_t n, std::size_t a, std::size_t b) {
  if (a != n || b != n) throw ArgumentError("vector data must have one component per axis");
}

}  // namespace

SpectralOperator::SpectralOperator(Symbol laplacian, CalculusOptions options, std::string id)
    : laplacian_(std::move(laplacian)), options_(options), id_(std::move(id)) {
  if (!laplacian_.is_exact() || laplacian_.top_order() != 2) {
    throw PreconditionError("spectral operator must be an exact second-order symbol");
  }
  if (options_.depth < 3) throw ArgumentError("spectral functionals need depth >= 3");
}

SpectralOperator SpectralOperator::from_dirac(const Symbol& dirac, CalculusOptions options,
                                              std::string id) {
  if (!dirac.is_exact() || dirac.top_order() != 1) {
    throw PreconditionError("Dirac symbol must be exact of order one");
  }
  SpectralOperator op(compose(dirac, dirac, exact_options(options)), options, std::move(id));
  op.dirac_ = dirac;
  return op;
}

const Symbol& SpectralOperator::dirac() const {
  if (!dirac_) throw PreconditionError("operator was not built from a Dirac symbol");
  return *dirac_;
}

double SpectralOperator::inversion_residual() {
  inverse_power(1, 1);
  return parametrix_->inversion_residual;
}

const Symbol& SpectralOperator::inverse_power(int k) { return inverse_power(k, options_.depth); }

const Symbol& SpectralOperator::inverse_power(int k, int depth) {
  if (k < 1) throw ArgumentError("inverse power must be positive");
  if (depth < 1 || depth > options_.depth) {
    throw ArgumentError("requested depth exceeds the configured depth");
  }
  if (!parametrix_ || parametrix_depth_ < depth) {
    CalculusOptions o = options_;
    o.depth = depth;
    parametrix_ = parametrix(laplacian_, o);
    parametrix_depth_ = depth;
    powers_.clear();
  }
  const auto key = std::make_pair(k, depth);
  auto it = powers_.find(key);
  if (it != powers_.end()) return it->second;
  // A deeper cached power truncates to the requested one.
  for (auto& [pk, sym] : powers_) {
    if (pk.first == k && pk.second > depth) {
      return powers_.emplace(key, sym.truncated(-2 * k - depth + 1)).first->second;
    }
  }
  CalculusOptions o = options_;
  o.depth = depth;
  Symbol p = k == 1 ? parametrix_->symbol.truncated(-2 - depth + 1)
                    : compose(inverse_power(1, depth), inverse_power(k - 1, depth), o);
  return powers_.emplace(key, std::move(p)).first->second;
}

FunctionalReport SpectralOperator::residue_with(const Symbol& x, int k,
                                                const std::string& functional) {
  const int n = dimension();
  // Orders of L^(−k) below −n − top(x) cannot reach order −n.
  const int depth = x.is_zero() ? 1 : std::max(1, n + x.top_order() - 2 * k + 1);
  if (depth > options_.depth) {
    throw PreconditionError("functional needs " + std::to_string(depth) +
                            " orders of the parametrix; depth is " +
                            std::to_string(options_.depth));
  }
  const Symbol& p = inverse_power(k, depth);
  const Symbol prod = compose_orders(x, p, -n, -n, options_);
  const Residue r = wodzicki_residue(prod);
  FunctionalReport rep{r.value, r.v_coeff, r.density, {}};
  rep.meta.functional = functional;
  rep.meta.operator_id = id_;
  rep.meta.depth = depth;
  rep.meta.prune_rel = options_.prune_rel;
  rep.meta.inversion_residual = parametrix_->inversion_residual;
  rep.meta.component_missing = r.component_missing;
  return rep;
}

FunctionalReport metric_vf(SpectralOperator& L, const Symbol& V, const Symbol& W,
                           const std::optional<TorusElement>& f) {
  const int m = half_dimension(L.dimension());
  Symbol x = compose(V, W, exact_options(L.options()));
  if (f) x = x.left_multiply(CliffordValue::scalar(*f, x.matrix_dim()));
  return L.residue_with(x, m + 1, "metric");
}

FunctionalReport einstein_vf(SpectralOperator& L, const Symbol& V, const Symbol& W,
                             const std::optional<TorusElement>& f) {
  const int m = half_dimension(L.dimension());
  Symbol x = compose(V, W, exact_options(L.options()));
  if (f) x = x.left_multiply(CliffordValue::scalar(*f, x.matrix_dim()));
  return L.residue_with(x, m, "einstein");
}

FunctionalReport metric_form(SpectralOperator& D, const Symbol& v, const Symbol& w) {
  const int m = half_dimension(D.dimension());
  return D.residue_with(compose(v, w, exact_options(D.options())), m, "metric_form");
}

FunctionalReport einstein_form(SpectralOperator& D, const Symbol& v, const Symbol& w,
                               EinsteinOrdering ordering) {
  const int m = half_dimension(D.dimension());
  const auto ex = exact_options(D.options());
  const Symbol& d = D.dirac();
  Symbol x(d.deformation(), d.matrix_dim());
  if (ordering == EinsteinOrdering::Inner) {
    const Symbol anti = compose(d, w, ex) + compose(w, d, ex);
    x = compose(v, compose(anti, d, ex), ex);
  } else {
    const Symbol anti = compose(d, v, ex) + compose(v, d, ex);
    x = compose(compose(anti, w, ex), d, ex);
  }
  return D.residue_with(x, m, ordering == EinsteinOrdering::Inner ? "einstein_form"
                                                                   : "einstein_form_outer");
}

FunctionalReport volume_form(SpectralOperator& D, const TorusElement& f) {
  const int m = half_dimension(D.dimension());
  return D.residue_with(Symbol::constant(CliffordValue::scalar(f, D.matrix_dim())), m, "volume");
}

ClosednessReport spectral_closedness_check(SpectralOperator& D,
                                           const std::vector<CliffordValue>& samples) {
  const int m = half_dimension(D.dimension());
  const auto ex = exact_options(D.options());
  ClosednessReport rep;
  for (const auto& t : samples) {
    const auto r = D.residue_with(compose(Symbol::constant(t), D.dirac(), ex), m, "closedness");
    rep.values.push_back(r.value);
    rep.max_abs = std::max(rep.max_abs, std::abs(r.value));
  }
  return rep;
}

Symbol commutator_form(SpectralOperator& D, const TorusElement& a) {
  const auto ex = exact_options(D.options());
  const auto as = Symbol::constant(CliffordValue::scalar(a, D.matrix_dim()));
  return (compose(D.dirac(), as, ex) - compose(as, D.dirac(), ex)).restricted(0, 0);
}

namespace reference {

namespace {

TorusElement directional(const TorusElement& x, const std::vector<Complex>& V) {
  TorusElement out(x.deformation());
  for (std::size_t a = 0; a < V.size(); ++a) out.add_scaled(x.derive(static_cast<int>(a)), V[a]);
  return out;
}

TorusElement second_directional(const TorusElement& x, const std::vector<Complex>& V,
                                const std::vector<Complex>& W) {
  TorusElement out(x.deformation());
  for (std::size_t a = 0; a < V.size(); ++a)
    for (std::size_t b = 0; b < W.size(); ++b)
      out.add_scaled(x.derive(static_cast<int>(a)).derive(static_cast<int>(b)), V[a] * W[b]);
  return out;
}

Complex dot(const std::vector<Complex>& V, const std::vector<Complex>& W) {
  Complex s{};
  for (std::size_t a = 0; a < V.size(); ++a) s += V[a] * W[a];
  return s;
}

TorusElement laplace(const TorusElement& x) {
  TorusElement out(x.deformation());
  for (int a = 0; a < x.dimension(); ++a) out += x.derive(a).derive(a);
  return out;
}

}  // namespace

Complex laplacian4_metric(const TorusElement& chi, const std::vector<Complex>& V,
                          const std::vector<Complex>& W) {
  check_vectors(static_cast<std::size_t>(chi.dimension()), V.size(), W.size());
  return 2.0 * M_PI * M_PI * chi.pow(3).trace() * dot(V, W);
}

Complex laplacian4_einstein(const TorusElement& chi, const std::vector<Complex>& V,
                            const std::vector<Complex>& W) {
  const int n = chi.dimension();
  check_vectors(static_cast<std::size_t>(n), V.size(), W.size());
  const TorusElement ci = invert(chi, CalculusOptions{}.inversion).value;
  const TorusElement vd = directional(chi, V), wd = directional(chi, W);
  const TorusElement vw = second_directional(chi, V, W);
  const TorusElement lap = laplace(chi);
  TorusElement s(chi.deformation());
  s.add_scaled(chi * vd * ci * wd, -1.0 / 24);
  s.add_scaled(chi * wd * ci * vd, -1.0 / 24);
  s.add_scaled(vd * ci * wd * chi, 5.0 / 24);
  s.add_scaled(wd * ci * vd * chi, 5.0 / 24);
  s.add_scaled(vd * wd, -1.0 / 24);
  s.add_scaled(wd * vd, -1.0 / 24);
  s.add_scaled(vw * chi, -1.0 / 3);
  s.add_scaled(chi * vw, 1.0 / 6);
  TorusElement t(chi.deformation());
  for (int a = 0; a < n; ++a) {
    const TorusElement da = chi.derive(a);
    t.add_scaled(da * ci * da * chi, -1.0 / 24);
    t.add_scaled(chi * da * ci * da, -1.0 / 24);
    t.add_scaled(da * da, -1.0 / 24);
  }
  t.add_scaled(chi * lap, 1.0 / 12);
  t.add_scaled(lap * chi, 1.0 / 12);
  s.add_scaled(t, dot(V, W));
  return 2.0 * M_PI * M_PI * s.trace();
}

TorusElement laplacian4_commutative_density(const TorusElement& chi, const std::vector<Complex>& V,
                                            const std::vector<Complex>& W) {
  const int n = chi.dimension();
  check_vectors(static_cast<std::size_t>(n), V.size(), W.size());
  if (!chi.deformation()->is_commutative()) throw PreconditionError("commutative limit needs theta = 0");
  TorusElement s(chi.deformation());
  s.add_scaled(directional(chi, V) * directional(chi, W), 0.25);
  s.add_scaled(second_directional(chi, V, W) * chi, -1.0 / 6);
  TorusElement sq(chi.deformation());
  for (int a = 0; a < n; ++a) sq += chi.derive(a) * chi.derive(a);
  s.add_scaled(sq, -dot(V, W) / 8.0);
  s.add_scaled(laplace(chi) * chi, dot(V, W) / 6.0);
  return 2.0 * M_PI * M_PI * s;
}

Complex dirac4_metric(const TorusElement& k, const std::vector<TorusElement>& V,
                      const std::vector<TorusElement>& W, const CalculusOptions& options) {
  check_vectors(static_cast<std::size_t>(k.dimension()), V.size(), W.size());
  const TorusElement ki = invert(commutant_image(k), options.inversion).value;
  const TorusElement k4 = ki.pow(4);
  TorusElement s(k.deformation());
  for (std::size_t a = 0; a < V.size(); ++a) s += W[a] * V[a] * k4;
  return s.trace();
}

Complex dirac4_einstein(const TorusElement& kin, const std::vector<TorusElement>& V,
                        const std::vector<TorusElement>& W, const CalculusOptions& options) {
  const int n = kin.dimension();
  check_vectors(static_cast<std::size_t>(n), V.size(), W.size());
  const TorusElement k = commutant_image(kin);
  const TorusElement k1 = invert(k, options.inversion).value;
  const TorusElement k2 = k1 * k1, k3 = k2 * k1, k4 = k3 * k1;
  const TorusElement kk = k * k;
  std::vector<TorusElement> d;
  for (int a = 0; a < n; ++a) d.push_back(k.derive(a));
  TorusElement lap(k.deformation());
  for (int c = 0; c < n; ++c) lap += d[static_cast<std::size_t>(c)].derive(c);
  TorusElement diag(k.deformation());
  for (int c = 0; c < n; ++c) {
    const auto& dc = d[static_cast<std::size_t>(c)];
    diag.add_scaled(k1 * dc * k1 * dc, 1.0 / 3);
    diag.add_scaled(kk * dc * k4 * dc, 1.0 / 3);
    diag.add_scaled(k * dc * k3 * dc, 2.0 / 3);
  }
  diag.add_scaled(k1 * lap, -2.0 / 3);
  TorusElement s(k.deformation());
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const auto& da = d[static_cast<std::size_t>(a)];
      const auto& db = d[static_cast<std::size_t>(b)];
      TorusElement x(k.deformation());
      x.add_scaled(k4 * da * kk * db, 1.0 / 3);
      x.add_scaled(k3 * da * k * db, 2.0 / 3);
      x.add_scaled(k2 * da * db, 1.0);
      x.add_scaled(k1 * da * k1 * db, 2.0 / 3);
      x.add_scaled(k * da * k3 * db, -4.0 / 3);
      x.add_scaled(kk * da * k4 * db, -2.0 / 3);
      x.add_scaled(k1 * da.derive(b), 2.0 / 3);
      if (a == b) x += diag;
      s += V[static_cast<std::size_t>(a)] * W[static_cast<std::size_t>(b)] * x;
    }
  return s.trace();
}

Complex dirac4_commutative_limit(const TorusElement& k, const std::vector<TorusElement>& V,
                                 const std::vector<TorusElement>& W,
                                 const CalculusOptions& options) {
  const int n = k.dimension();
  check_vectors(static_cast<std::size_t>(n), V.size(), W.size());
  if (!k.deformation()->is_commutative()) throw PreconditionError("commutative limit needs theta = 0");
  const TorusElement k1 = invert(k, options.inversion).value;
  const TorusElement k2 = k1 * k1;
  TorusElement sq(k.deformation()), lap(k.deformation());
  for (int c = 0; c < n; ++c) {
    sq += k.derive(c) * k.derive(c);
    lap += k.derive(c).derive(c);
  }
  TorusElement s(k.deformation());
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      TorusElement x = (2.0 / 3) * (k2 * k.derive(a) * k.derive(b)) +
                       (2.0 / 3) * (k1 * k.derive(a).derive(b));
      if (a == b) x += (4.0 / 3) * (k2 * sq) - (2.0 / 3) * (k1 * lap);
      s += V[static_cast<std::size_t>(a)] * W[static_cast<std::size_t>(b)] * x;
    }
  return s.trace();
}

std::vector<TorusElement> conformal_einstein_tensor(const TorusElement& k,
                                                    const CalculusOptions& options) {
  const int n = k.dimension();
  if (!k.deformation()->is_commutative()) throw PreconditionError("classical formula needs theta = 0");
  const TorusElement k1 = invert(k, options.inversion).value;
  const TorusElement k2 = k1 * k1;
  std::vector<TorusElement> d;
  for (int a = 0; a < n; ++a) d.push_back(I * k.derive(a));
  TorusElement sq(k.deformation()), lap(k.deformation());
  for (int c = 0; c < n; ++c) {
    sq += d[static_cast<std::size_t>(c)] * d[static_cast<std::size_t>(c)];
    lap += I * d[static_cast<std::size_t>(c)].derive(c);
  }
  std::vector<TorusElement> G;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      TorusElement x = 4.0 * (k2 * d[static_cast<std::size_t>(a)] * d[static_cast<std::size_t>(b)]) +
                       4.0 * (k1 * (I * d[static_cast<std::size_t>(a)].derive(b)));
      if (a == b) x += 8.0 * (k2 * sq) - 4.0 * (k1 * lap);
      G.push_back(std::move(x));
    }
  return G;
}

CliffordValue dirac4_closedness_density(const TorusElement& kin, const CalculusOptions& options) {
  const TorusElement k = commutant_image(kin);
  const GammaRep rep = gamma_basis(k.dimension());
  const TorusElement k1 = invert(k, options.inversion).value;
  const TorusElement k2 = k1 * k1;
  CliffordValue out(k.deformation(), rep.spinor_dim());
  for (int a = 0; a < rep.n; ++a) {
    const TorusElement anti = k1 * k.derive(a) + k.derive(a) * k1;
    const TorusElement x = k2 * (k2 * anti - anti * k2) * k2;
    out += CliffordValue::from_const(0.5 * I * x, rep.gamma[a]);
  }
  return out;
}

Complex connection_curvature_term(const std::vector<CliffordValue>& T,
                                  const std::vector<TorusElement>& V,
                                  const std::vector<TorusElement>& W) {
  const std::size_t n = T.size();
  check_vectors(n, V.size(), W.size());
  Complex s{};
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      CliffordValue F = -I * (T[b].derive(static_cast<int>(a)) - T[a].derive(static_cast<int>(b)));
      F += T[a] * T[b] - T[b] * T[a];
      s += matrix_trace((V[a] * W[b]) * F).trace();
    }
  return 0.5 * s;
}

Complex endomorphism_shift(const CliffordValue& E, const std::vector<TorusElement>& V,
                           const std::vector<TorusElement>& W) {
  check_vectors(static_cast<std::size_t>(E.deformation()->dimension()), V.size(), W.size());
  TorusElement vw(E.deformation());
  for (std::size_t a = 0; a < V.size(); ++a) vw += V[a] * W[a];
  return 0.5 * (vw * matrix_trace(E)).trace();
}

ProductValues product_triple(SpectralOperator& base, const ProductInputs& in) {
  const double n = base.dimension();
  const Complex cc = in.c * std::conj(in.c);
  auto g = [&](const Symbol& a, const Symbol& b) { return metric_form(base, a, b).value; };
  auto G = [&](const Symbol& a, const Symbol& b) { return einstein_form(base, a, b).value; };
  auto vol = [&](const TorusElement& f) { return volume_form(base, f).value; };
  const Symbol dphi_p = commutator_form(base, in.phi_plus2);
  const Symbol dphi_m = commutator_form(base, in.phi_minus2);
  const Symbol dphi_p1 = commutator_form(base, in.phi_plus);
  const Symbol dphi_m1 = commutator_form(base, in.phi_minus);
  ProductValues out;
  const Complex gpp = g(in.w_plus, in.w_plus2), gmm = g(in.w_minus, in.w_minus2);
  out.metric = gpp + gmm +
               cc * vol(in.phi_plus * in.phi_minus2 + in.phi_minus * in.phi_plus2);
  out.einstein = G(in.w_plus, in.w_plus2) + G(in.w_minus, in.w_minus2) +
                 cc * g(in.w_plus - in.w_minus, in.w_plus2 - in.w_minus2) -
                 (n / 2.0) * cc * (gpp + gmm) +
                 cc * (g(in.w_plus, dphi_p) - g(dphi_p1, in.w_minus2) + g(in.w_minus, dphi_m) -
                       g(dphi_m1, in.w_plus2)) +
                 cc * cc * vol((in.phi_plus + in.phi_minus) * (in.phi_plus2 + in.phi_minus2));
  return out;
}

}  // namespace reference

}  // namespace wodzicki
