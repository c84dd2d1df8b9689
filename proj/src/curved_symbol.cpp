#include "wodzicki/curved_symbol.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wodzicki/errors.hpp"
#include "wodzicki/geometry.hpp"

namespace wodzicki {

namespace {

int degree(const MultiIndex& a) { return std::accumulate(a.begin(), a.end(), 0); }

MultiIndex plus_unit(MultiIndex a, int axis) {
  ++a[static_cast<std::size_t>(axis)];
  return a;
}

struct Piece {
  CliffordValue c;
  MultiIndex alpha;
  int j;
};

// ∂_{ξ_a}(c ξ^α q^(−j)) = c α_a ξ^(α−e_a) q^(−j) − 2j c g^{ab} ξ^(α+e_b) q^(−j−1).
std::vector<Piece> derive_xi(const QuadraticForm& q, const Piece& t, int a) {
  std::vector<Piece> out;
  const auto ua = static_cast<std::size_t>(a);
  if (t.alpha[ua] > 0) {
    MultiIndex al = t.alpha;
    --al[ua];
    out.push_back({static_cast<double>(t.alpha[ua]) * t.c, al, t.j});
  }
  if (t.j != 0) {
    for (int b = 0; b < q.n; ++b) {
      const TorusElement& g = q.ginv[static_cast<std::size_t>(a * q.n + b)];
      if (g.is_zero()) continue;
      out.push_back({(-2.0 * t.j) * (g * t.c), plus_unit(t.alpha, b), t.j + 1});
    }
  }
  return out;
}

// δ_a(c ξ^α q^(−j)) = δ_a(c) ξ^α q^(−j) − j c δ_a(g^{bc}) ξ^(α+e_b+e_c) q^(−j−1).
std::vector<Piece> derive_x(const QuadraticForm& q, const Piece& t, int a) {
  std::vector<Piece> out;
  CliffordValue dc = t.c.derive(a);
  if (!dc.is_zero()) out.push_back({std::move(dc), t.alpha, t.j});
  if (t.j != 0) {
    for (int b = 0; b < q.n; ++b)
      for (int c = b; c < q.n; ++c) {
        const TorusElement& dg = q.ginv_d[static_cast<std::size_t>((b * q.n + c) * q.n + a)];
        if (dg.is_zero()) continue;
        const double mult = b == c ? 1.0 : 2.0;
        out.push_back({(-mult * t.j) * (dg * t.c), plus_unit(plus_unit(t.alpha, b), c), t.j + 1});
      }
  }
  return out;
}

template <class F>
std::vector<Piece> apply_beta(const QuadraticForm& q, std::vector<Piece> pieces,
                              const MultiIndex& beta, F derive) {
  for (int a = 0; a < q.n; ++a)
    for (int r = 0; r < beta[static_cast<std::size_t>(a)]; ++r) {
      std::vector<Piece> next;
      for (const auto& p : pieces) {
        auto d = derive(q, p, a);
        next.insert(next.end(), std::make_move_iterator(d.begin()), std::make_move_iterator(d.end()));
      }
      pieces = std::move(next);
    }
  return pieces;
}

void multi_indices(int n, int total, MultiIndex& cur, int axis, std::vector<MultiIndex>& out) {
  if (axis == n - 1) {
    cur[static_cast<std::size_t>(axis)] = total;
    out.push_back(cur);
    cur[static_cast<std::size_t>(axis)] = 0;
    return;
  }
  for (int k = 0; k <= total; ++k) {
    cur[static_cast<std::size_t>(axis)] = k;
    multi_indices(n, total - k, cur, axis + 1, out);
  }
  cur[static_cast<std::size_t>(axis)] = 0;
}

double beta_factorial(const MultiIndex& b) {
  double f = 1.0;
  for (int v : b)
    for (int k = 2; k <= v; ++k) f *= k;
  return f;
}

// E[ξ^α] for a centred Gaussian with covariance g/2 (Isserlis pairings).
TorusElement gaussian_moment(const QuadraticForm& q, const MultiIndex& alpha,
                             std::map<MultiIndex, TorusElement>& cache) {
  auto it = cache.find(alpha);
  if (it != cache.end()) return it->second;
  TorusElement out(q.defm);
  const int d = degree(alpha);
  if (d == 0) {
    out = TorusElement::one(q.defm);
  } else if (d % 2 == 0) {
    int first = 0;
    while (alpha[static_cast<std::size_t>(first)] == 0) ++first;
    MultiIndex rest = alpha;
    --rest[static_cast<std::size_t>(first)];
    // Pair the first index with each remaining index.
    for (int b = 0; b < q.n; ++b) {
      const int count = rest[static_cast<std::size_t>(b)];
      if (count == 0) continue;
      MultiIndex sub = rest;
      --sub[static_cast<std::size_t>(b)];
      const TorusElement& g = q.g[static_cast<std::size_t>(first * q.n + b)];
      out.add_scaled(g * gaussian_moment(q, sub, cache), 0.5 * count);
    }
  }
  return cache.emplace(alpha, out).first->second;
}

}  // namespace

std::shared_ptr<const QuadraticForm> QuadraticForm::make(const MetricData& metric) {
  if (!metric.defm->is_commutative()) {
    throw ConfigurationError("curved symbols need theta = 0");
  }
  auto q = std::make_shared<QuadraticForm>(metric.defm);
  q->n = metric.dimension();
  const int n = q->n;
  if (metric.mode == MetricMode::Flat) {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        const auto e = a == b ? TorusElement::one(metric.defm) : TorusElement(metric.defm);
        q->g.push_back(e);
        q->ginv.push_back(e);
      }
    q->sqrt_det = TorusElement::one(metric.defm);
  } else {
    MetricFourier mf = metric_fourier(metric);
    q->g = std::move(mf.metric);
    q->ginv = std::move(mf.inverse);
    q->sqrt_det = std::move(mf.sqrt_det);
    q->tail = mf.tail;
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        q->ginv_d.push_back(q->ginv[static_cast<std::size_t>(a * n + b)].derive(c));
      }
  return q;
}

CurvedSymbol::CurvedSymbol(QuadraticFormPtr q, int matrix_dim, int floor)
    : q_(std::move(q)), dim_(matrix_dim), floor_(floor) {}

CurvedSymbol CurvedSymbol::from_polynomial(const Symbol& s, QuadraticFormPtr q) {
  if (!s.deformation()->same_as(*q->defm)) throw ConfigurationError("deformation mismatch");
  CurvedSymbol out(q, s.matrix_dim(), s.floor());
  const int n = q->n;
  for (const auto& t : s.terms()) {
    if (t.j > 0) throw PreconditionError("only polynomial symbols can be rewritten over q");
    // ‖ξ‖^(2k) = Σ_{|γ|=k} k!/γ! ξ^(2γ).
    const int k = -t.j;
    std::vector<MultiIndex> gammas;
    MultiIndex cur{};
    multi_indices(n, k, cur, 0, gammas);
    double kf = 1.0;
    for (int i = 2; i <= k; ++i) kf *= i;
    for (const auto& g : gammas) {
      MultiIndex alpha = t.alpha;
      for (int a = 0; a < n; ++a) alpha[static_cast<std::size_t>(a)] += 2 * g[static_cast<std::size_t>(a)];
      out.add_term(t.coeff, alpha, 0, kf / beta_factorial(g));
    }
  }
  return out;
}

int CurvedSymbol::top_order() const {
  int top = floor_;
  bool any = false;
  for (const auto& [k, v] : terms_) {
    const int o = degree(k.alpha) - 2 * k.j;
    top = any ? std::max(top, o) : o;
    any = true;
  }
  return top;
}

std::vector<SymbolTerm> CurvedSymbol::terms() const {
  std::vector<SymbolTerm> out;
  out.reserve(terms_.size());
  for (const auto& [k, v] : terms_) out.push_back({v, k.alpha, k.j});
  return out;
}

std::vector<SymbolTerm> CurvedSymbol::component(int order) const {
  std::vector<SymbolTerm> out;
  for (const auto& [k, v] : terms_) {
    if (degree(k.alpha) - 2 * k.j == order) out.push_back({v, k.alpha, k.j});
  }
  return out;
}

void CurvedSymbol::add_term(const CliffordValue& c, const MultiIndex& alpha, int j, Complex s) {
  if (c.dim() != dim_) throw ConfigurationError("matrix size mismatch");
  if (c.is_zero() || s == Complex{}) return;
  const Key key{alpha, j};
  auto it = terms_.find(key);
  if (it == terms_.end()) {
    CliffordValue v = c;
    if (s != Complex(1.0)) v *= s;
    terms_.emplace(key, std::move(v));
  } else {
    it->second.add_scaled(c, s);
  }
}

CurvedSymbol& CurvedSymbol::operator+=(const CurvedSymbol& o) {
  for (const auto& [k, v] : o.terms_) add_term(v, k.alpha, k.j);
  floor_ = std::max(floor_, o.floor_);
  return *this;
}

CurvedSymbol& CurvedSymbol::operator*=(Complex s) {
  for (auto& [k, v] : terms_) v *= s;
  return *this;
}

CurvedSymbol CurvedSymbol::truncated(int floor) const {
  CurvedSymbol out(q_, dim_, std::max(floor_, floor));
  for (const auto& [k, v] : terms_) {
    if (degree(k.alpha) - 2 * k.j >= floor) out.terms_.emplace(k, v);
  }
  return out;
}

CurvedSymbol CurvedSymbol::divided_by_q() const {
  CurvedSymbol out(q_, dim_, floor_ == kExactFloor ? kExactFloor : floor_ - 2);
  for (const auto& [k, v] : terms_) out.terms_.emplace(Key{k.alpha, k.j + 1}, v);
  return out;
}

CurvedSymbol compose_orders(const CurvedSymbol& p, const CurvedSymbol& q, int lo, int hi,
                            const CalculusOptions& options) {
  if (p.form() != q.form()) throw ConfigurationError("curved symbols over different metrics");
  const QuadraticForm& form = *p.form();
  const int n = form.n;
  int floor = kExactFloor;
  if (!(p.floor() == kExactFloor && q.floor() == kExactFloor)) {
    const int fp = p.floor() == kExactFloor ? kExactFloor : p.floor() + q.top_order();
    const int fq = q.floor() == kExactFloor ? kExactFloor : q.floor() + p.top_order();
    floor = std::max(fp, fq);
    if (lo < floor) throw PreconditionError("requested orders are not determined by the operands");
  }
  CurvedSymbol out(p.form(), p.matrix_dim(), std::max(floor, lo));
  const auto pt = p.terms();
  const auto qt = q.terms();
  for (const auto& a : pt) {
    const int oa = degree(a.alpha) - 2 * a.j;
    for (const auto& b : qt) {
      const int ob = degree(b.alpha) - 2 * b.j;
      for (int k = std::max(0, oa + ob - hi); k <= oa + ob - lo; ++k) {
        std::vector<MultiIndex> betas;
        MultiIndex cur{};
        multi_indices(n, k, cur, 0, betas);
        for (const auto& beta : betas) {
          const auto da = apply_beta(form, {{a.coeff, a.alpha, a.j}}, beta, derive_xi);
          if (da.empty()) continue;
          const auto db = apply_beta(form, {{b.coeff, b.alpha, b.j}}, beta, derive_x);
          const double w = 1.0 / beta_factorial(beta);
          for (const auto& x : da)
            for (const auto& y : db) {
              MultiIndex alpha{};
              for (int i = 0; i < n; ++i) {
                const auto u = static_cast<std::size_t>(i);
                alpha[u] = x.alpha[u] + y.alpha[u];
              }
              out.add_term(x.c * y.c, alpha, x.j + y.j, w);
            }
        }
      }
    }
  }
  if (options.prune_rel > 0.0) {
    CurvedSymbol pruned(p.form(), p.matrix_dim(), out.floor());
    for (const auto& t : out.terms()) {
      pruned.add_term(t.coeff.pruned(options.prune_rel * t.coeff.norm1()), t.alpha, t.j);
    }
    return pruned;
  }
  return out;
}

CurvedSymbol curved_parametrix(const CurvedSymbol& p, int depth, const CalculusOptions& options) {
  if (depth < 1) throw ArgumentError("parametrix depth must be at least 1");
  if (p.top_order() != 2) throw PreconditionError("parametrix expects a second-order symbol");
  const QuadraticForm& form = *p.form();
  const int n = form.n;
  const int d = p.matrix_dim();
  // Principal part must be g^{ab} ξ_a ξ_b · 1.
  CurvedSymbol expected(p.form(), d);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      expected.add_term(CliffordValue::scalar(form.ginv[static_cast<std::size_t>(a * n + b)], d),
                        plus_unit(plus_unit(MultiIndex{}, a), b), 0);
    }
  double err = 0.0, scale = 0.0;
  const auto pc = p.component(2);
  for (const auto& t : expected.terms()) {
    scale = std::max(scale, t.coeff.norm1());
    CliffordValue diff = t.coeff;
    for (const auto& s : pc)
      if (s.alpha == t.alpha && s.j == t.j) diff -= s.coeff;
    err = std::max(err, diff.norm1());
  }
  for (const auto& s : pc) {
    bool found = false;
    for (const auto& t : expected.terms()) found = found || (s.alpha == t.alpha && s.j == t.j);
    if (!found) err = std::max(err, s.coeff.norm1());
  }
  if (err > 1e-10 * std::max(1.0, scale)) {
    throw PreconditionError("principal symbol must be g^{ab} xi_a xi_b times the identity");
  }

  CurvedSymbol pe = p;
  pe.set_floor(kExactFloor);
  CurvedSymbol b(p.form(), d);
  b.add_term(CliffordValue::identity(form.defm, d), MultiIndex{}, 1);
  for (int k = 1; k < depth; ++k) {
    CurvedSymbol x = compose_orders(pe, b, -k, -k, options);
    x *= -1.0;
    b += x.divided_by_q();
    b.set_floor(kExactFloor);
  }
  CurvedSymbol out = b.truncated(-2 - depth + 1);
  return out;
}

Residue curved_residue(const CurvedSymbol& p) {
  const int n = p.dimension();
  if (p.floor() > -n) throw PreconditionError("symbol does not track order " + std::to_string(-n));
  const QuadraticForm& form = *p.form();
  Residue r{Complex{}, Complex{}, TorusElement(form.defm), false};
  const auto comp = p.component(-n);
  if (comp.empty()) {
    r.component_missing = true;
    return r;
  }
  std::map<MultiIndex, TorusElement> cache;
  TorusElement dens(form.defm);
  for (const auto& t : comp) {
    const TorusElement tr = matrix_trace(t.coeff);
    const double w = 2.0 * std::pow(M_PI, 0.5 * n) / std::tgamma(static_cast<double>(t.j));
    dens.add_scaled(tr * gaussian_moment(form, t.alpha, cache), w);
  }
  r.density = dens * form.sqrt_det;
  r.value = r.density.trace();
  r.v_coeff = r.value / sphere_volume(n);
  return r;
}

CurvedOperator::CurvedOperator(const Symbol& laplacian, const MetricData& metric,
                               CalculusOptions options, std::string id)
    : laplacian_(CurvedSymbol::from_polynomial(laplacian, QuadraticForm::make(metric))),
      options_(options),
      id_(std::move(id)) {
  if (!laplacian.is_exact() || laplacian.top_order() != 2) {
    throw PreconditionError("spectral operator must be an exact second-order symbol");
  }
}

const CurvedSymbol& CurvedOperator::inverse_power(int k, int depth) {
  if (k < 1) throw ArgumentError("inverse power must be positive");
  if (depth < 1 || depth > options_.depth) {
    throw ArgumentError("requested depth exceeds the configured depth");
  }
  if (!parametrix_ || parametrix_depth_ < depth) {
    parametrix_ = curved_parametrix(laplacian_, depth, options_);
    parametrix_depth_ = depth;
    powers_.clear();
  }
  const auto key = std::make_pair(k, depth);
  auto it = powers_.find(key);
  if (it != powers_.end()) return it->second;
  CurvedSymbol p = parametrix_->truncated(-2 - depth + 1);
  if (k > 1) {
    const CurvedSymbol& b = inverse_power(1, depth);
    const CurvedSymbol& rest = inverse_power(k - 1, depth);
    p = compose_orders(b, rest, -2 * k - depth + 1, -2 * k, options_);
  }
  return powers_.emplace(key, std::move(p)).first->second;
}

FunctionalReport CurvedOperator::residue_with(const Symbol& x, int k, const std::string& functional) {
  const int n = dimension();
  const int depth = x.is_zero() ? 1 : std::max(1, n + x.top_order() - 2 * k + 1);
  if (depth > options_.depth) {
    throw PreconditionError("functional needs " + std::to_string(depth) +
                            " orders of the parametrix; depth is " +
                            std::to_string(options_.depth));
  }
  const CurvedSymbol& p = inverse_power(k, depth);
  const CurvedSymbol cx = CurvedSymbol::from_polynomial(x, laplacian_.form());
  const Residue r = curved_residue(compose_orders(cx, p, -n, -n, options_));
  FunctionalReport rep{r.value, r.v_coeff, r.density, {}};
  rep.meta.functional = functional;
  rep.meta.operator_id = id_;
  rep.meta.depth = depth;
  rep.meta.prune_rel = options_.prune_rel;
  rep.meta.inversion_residual = laplacian_.form()->tail;
  rep.meta.component_missing = r.component_missing;
  return rep;
}

namespace {

Symbol product_with(const Symbol& V, const Symbol& W, const std::optional<TorusElement>& f) {
  CalculusOptions ex;
  ex.depth = 0;
  Symbol x = compose(V, W, ex);
  if (f) x = x.left_multiply(CliffordValue::scalar(*f, x.matrix_dim()));
  return x;
}

}  // namespace

FunctionalReport metric_vf(CurvedOperator& L, const Symbol& V, const Symbol& W,
                           const std::optional<TorusElement>& f) {
  return L.residue_with(product_with(V, W, f), L.dimension() / 2 + 1, "metric");
}

FunctionalReport einstein_vf(CurvedOperator& L, const Symbol& V, const Symbol& W,
                             const std::optional<TorusElement>& f) {
  return L.residue_with(product_with(V, W, f), L.dimension() / 2, "einstein");
}

}  // namespace wodzicki
