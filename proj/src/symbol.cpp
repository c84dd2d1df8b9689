#include "wodzicki/symbol.hpp"

#include <cmath>
#include <mutex>
#include <numeric>
#include <tuple>

#include "wodzicki/errors.hpp"
#include "wodzicki/parallel.hpp"

namespace wodzicki {

namespace {

struct Mono {
  double coef;
  MultiIndex alpha;
  int j;
};
using Poly = std::vector<Mono>;

int degree(const MultiIndex& a) { return std::accumulate(a.begin(), a.end(), 0); }

void merge_into(Poly& out, const Mono& m) {
  for (auto& o : out) {
    if (o.alpha == m.alpha && o.j == m.j) {
      o.coef += m.coef;
      return;
    }
  }
  out.push_back(m);
}

Poly drop_zeros(Poly p) {
  std::erase_if(p, [](const Mono& m) { return m.coef == 0.0; });
  return p;
}

// ξ^α‖ξ‖^(−2j) with α_n ≥ 2 rewritten through ξ_n² = ‖ξ‖² − Σ_{a<n} ξ_a².
Poly canonicalize_uncached(const MultiIndex& alpha, int j, int n) {
  const std::size_t last = static_cast<std::size_t>(n - 1);
  if (alpha[last] <= 1) return {{1.0, alpha, j}};
  Poly out;
  MultiIndex base = alpha;
  base[last] -= 2;
  for (const auto& m : canonicalize_uncached(base, j - 1, n)) merge_into(out, m);
  for (int a = 0; a < n - 1; ++a) {
    MultiIndex b = base;
    b[static_cast<std::size_t>(a)] += 2;
    for (auto m : canonicalize_uncached(b, j, n)) {
      m.coef = -m.coef;
      merge_into(out, m);
    }
  }
  return drop_zeros(std::move(out));
}

class PolyCache {
 public:
  const Poly& canonical(const MultiIndex& alpha, int j, int n) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto key = std::make_tuple(alpha, j, n, MultiIndex{});
    auto it = canon_.find(key);
    if (it == canon_.end()) it = canon_.emplace(key, canonicalize_uncached(alpha, j, n)).first;
    return it->second;
  }

  const Poly& derivative(const MultiIndex& alpha, int j, int n, const MultiIndex& beta) {
    {
      std::lock_guard<std::mutex> lock(mutex_);
      auto it = deriv_.find(std::make_tuple(alpha, j, n, beta));
      if (it != deriv_.end()) return it->second;
    }
    Poly cur = {{1.0, alpha, j}};
    for (int a = 0; a < n; ++a) {
      for (int r = 0; r < beta[static_cast<std::size_t>(a)]; ++r) {
        Poly next;
        for (const auto& m : cur) {
          const int aa = m.alpha[static_cast<std::size_t>(a)];
          if (aa > 0) {
            MultiIndex b = m.alpha;
            b[static_cast<std::size_t>(a)] -= 1;
            merge_into(next, {m.coef * aa, b, m.j});
          }
          if (m.j != 0) {
            MultiIndex b = m.alpha;
            b[static_cast<std::size_t>(a)] += 1;
            merge_into(next, {-2.0 * m.j * m.coef, b, m.j + 1});
          }
        }
        cur = drop_zeros(std::move(next));
      }
    }
    Poly out;
    for (const auto& m : cur) {
      for (const auto& c : canonical(m.alpha, m.j, n)) merge_into(out, {m.coef * c.coef, c.alpha, c.j});
    }
    out = drop_zeros(std::move(out));
    std::lock_guard<std::mutex> lock(mutex_);
    return deriv_.emplace(std::make_tuple(alpha, j, n, beta), std::move(out)).first->second;
  }

 private:
  using Key = std::tuple<MultiIndex, int, int, MultiIndex>;
  std::mutex mutex_;
  std::map<Key, Poly> canon_;
  std::map<Key, Poly> deriv_;
};

PolyCache& cache() {
  static PolyCache c;
  return c;
}

// All multi-indices over n axes with |β| = s.
void enumerate_betas(int n, int s, int axis, MultiIndex& cur, std::vector<MultiIndex>& out) {
  if (axis == n - 1) {
    cur[static_cast<std::size_t>(axis)] = s;
    out.push_back(cur);
    cur[static_cast<std::size_t>(axis)] = 0;
    return;
  }
  for (int v = s; v >= 0; --v) {
    cur[static_cast<std::size_t>(axis)] = v;
    enumerate_betas(n, s - v, axis + 1, cur, out);
  }
  cur[static_cast<std::size_t>(axis)] = 0;
}

double multi_factorial(const MultiIndex& beta) {
  double f = 1.0;
  for (int b : beta)
    for (int i = 2; i <= b; ++i) f *= i;
  return f;
}

}  // namespace

int SymbolTerm::order() const { return degree(alpha) - 2 * j; }

Symbol::Symbol(DeformationPtr defm, int matrix_dim, int floor)
    : defm_(std::move(defm)), matrix_dim_(matrix_dim), floor_(floor) {
  if (!defm_) throw ConfigurationError("symbol requires a deformation matrix");
  if (matrix_dim_ < 1) throw ArgumentError("symbol matrix dimension must be positive");
}

Symbol Symbol::monomial(const CliffordValue& c, const MultiIndex& alpha, int j, int floor) {
  Symbol s(c.deformation(), c.dim(), floor);
  s.add_term(c, alpha, j);
  return s;
}

Symbol Symbol::constant(const CliffordValue& c) { return monomial(c, MultiIndex{}, 0); }

int Symbol::top_order() const { return terms_.empty() ? floor_ : terms_.begin()->first.order; }

std::vector<int> Symbol::orders() const {
  std::vector<int> out;
  for (const auto& [k, v] : terms_) {
    if (out.empty() || out.back() != k.order) out.push_back(k.order);
  }
  return out;
}

std::vector<SymbolTerm> Symbol::component(int order) const {
  std::vector<SymbolTerm> out;
  for (const auto& [k, v] : terms_) {
    if (k.order == order) out.push_back({v, k.alpha, (degree(k.alpha) - k.order) / 2});
  }
  return out;
}

std::vector<SymbolTerm> Symbol::terms() const {
  std::vector<SymbolTerm> out;
  for (const auto& [k, v] : terms_) out.push_back({v, k.alpha, (degree(k.alpha) - k.order) / 2});
  return out;
}

void Symbol::check_compatible(const Symbol& o) const {
  if (!defm_->same_as(*o.defm_)) throw ConfigurationError("symbols over different deformations");
  if (matrix_dim_ != o.matrix_dim_) throw ConfigurationError("symbols of different matrix size");
}

void Symbol::add_canonical(const Key& key, const CliffordValue& c, Complex s) {
  auto it = terms_.find(key);
  if (it == terms_.end()) {
    CliffordValue v = c;
    if (s != Complex(1.0)) v *= s;
    if (!v.is_zero()) terms_.emplace(key, std::move(v));
    return;
  }
  it->second.add_scaled(c, s);
  if (it->second.is_zero()) terms_.erase(it);
}

void Symbol::add_term(const CliffordValue& c, const MultiIndex& alpha, int j, Complex s) {
  if (c.dim() != matrix_dim_) throw ConfigurationError("coefficient has the wrong matrix size");
  if (!c.deformation()->same_as(*defm_)) throw ConfigurationError("coefficient over another deformation");
  for (int a = dimension(); a < kMaxDimension; ++a) {
    if (alpha[static_cast<std::size_t>(a)] != 0) throw ConfigurationError("multi-index exceeds dimension");
  }
  for (int v : alpha) {
    if (v < 0) throw ArgumentError("negative multi-index entry");
  }
  const int order = degree(alpha) - 2 * j;
  for (const auto& m : cache().canonical(alpha, j, dimension())) {
    add_canonical({order, m.alpha}, c, s * m.coef);
  }
}

Symbol Symbol::restricted(int lo, int hi) const {
  Symbol out(defm_, matrix_dim_, std::max(floor_, lo));
  for (const auto& [k, v] : terms_) {
    if (k.order >= lo && k.order <= hi) out.terms_.emplace(k, v);
  }
  return out;
}

Symbol Symbol::truncated(int floor) const {
  Symbol out = restricted(floor, 1 << 20);
  out.floor_ = std::max(floor_, floor);
  return out;
}

Symbol Symbol::operator-() const {
  Symbol out = *this;
  for (auto& [k, v] : out.terms_) v = -v;
  return out;
}

Symbol& Symbol::operator+=(const Symbol& o) {
  check_compatible(o);
  for (const auto& [k, v] : o.terms_) add_canonical(k, v, 1.0);
  floor_ = std::max(floor_, o.floor_);
  return *this;
}

Symbol& Symbol::operator-=(const Symbol& o) {
  check_compatible(o);
  for (const auto& [k, v] : o.terms_) add_canonical(k, v, -1.0);
  floor_ = std::max(floor_, o.floor_);
  return *this;
}

Symbol& Symbol::operator*=(Complex s) {
  if (s == Complex{}) {
    terms_.clear();
    return *this;
  }
  for (auto& [k, v] : terms_) v *= s;
  return *this;
}

Symbol Symbol::left_multiply(const CliffordValue& c) const {
  Symbol out(defm_, matrix_dim_, floor_);
  for (const auto& [k, v] : terms_) out.add_canonical(k, c * v, 1.0);
  return out;
}

Symbol Symbol::right_multiply(const CliffordValue& c) const {
  Symbol out(defm_, matrix_dim_, floor_);
  for (const auto& [k, v] : terms_) out.add_canonical(k, v * c, 1.0);
  return out;
}

Symbol Symbol::derive_xi(int axis) const {
  if (axis < 0 || axis >= dimension()) throw ArgumentError("ξ-derivative axis out of range");
  Symbol out(defm_, matrix_dim_, is_exact() ? kExactFloor : floor_ - 1);
  MultiIndex beta{};
  beta[static_cast<std::size_t>(axis)] = 1;
  for (const auto& [k, v] : terms_) {
    const int j = (degree(k.alpha) - k.order) / 2;
    for (const auto& m : cache().derivative(k.alpha, j, dimension(), beta)) {
      out.add_canonical({k.order - 1, m.alpha}, v, m.coef);
    }
  }
  return out;
}

Symbol Symbol::derive_x(int axis) const {
  Symbol out(defm_, matrix_dim_, floor_);
  for (const auto& [k, v] : terms_) out.add_canonical(k, v.derive(axis), 1.0);
  return out;
}

CliffordValue Symbol::evaluate(std::span<const double> xi) const {
  if (static_cast<int>(xi.size()) != dimension()) throw ArgumentError("ξ has the wrong length");
  double norm2 = 0.0;
  for (double x : xi) norm2 += x * x;
  if (norm2 == 0.0) throw ArgumentError("symbols are evaluated away from ξ = 0");
  CliffordValue out(defm_, matrix_dim_);
  for (const auto& [k, v] : terms_) {
    double f = std::pow(norm2, -(degree(k.alpha) - k.order) / 2);
    for (int a = 0; a < dimension(); ++a) f *= std::pow(xi[static_cast<std::size_t>(a)], k.alpha[static_cast<std::size_t>(a)]);
    out.add_scaled(v, f);
  }
  return out;
}

double Symbol::max_abs_difference(const Symbol& a, const Symbol& b) {
  a.check_compatible(b);
  Symbol d = a;
  d -= b;
  double m = 0.0;
  for (const auto& [k, v] : d.terms_) {
    for (int r = 0; r < v.dim(); ++r)
      for (int c = 0; c < v.dim(); ++c) m = std::max(m, v(r, c).norm_inf());
  }
  return m;
}

double Symbol::max_norm1() const {
  double m = 0.0;
  for (const auto& [k, v] : terms_) m = std::max(m, v.norm1());
  return m;
}

Symbol compose_orders(const Symbol& p, const Symbol& q, int lo, int hi,
                      const CalculusOptions& options, int max_beta) {
  p.check_compatible(q);
  const int n = p.dimension();
  int determined = kExactFloor;
  if (!p.is_zero() && !q.is_zero()) {
    if (!p.is_exact()) determined = std::max(determined, p.floor() + q.top_order());
    if (!q.is_exact()) determined = std::max(determined, q.floor() + p.top_order());
  }
  if (lo < determined) {
    throw PreconditionError("composition order " + std::to_string(lo) +
                            " is below the tracked depth of the operands (" +
                            std::to_string(determined) + ")");
  }
  Symbol out(p.deformation(), p.matrix_dim(), lo);
  if (p.is_zero() || q.is_zero() || lo > hi) return out;

  using PTerm = std::pair<Symbol::Key, const CliffordValue*>;
  std::vector<PTerm> pt, qt;
  for (const auto& [k, v] : p.terms_) pt.push_back({k, &v});
  for (const auto& [k, v] : q.terms_) qt.push_back({k, &v});

  // δ^β of q coefficients, computed lazily per (q term, β).
  std::vector<std::map<MultiIndex, CliffordValue>> qderiv(qt.size());
  std::mutex qderiv_mutex;
  auto q_derived = [&](std::size_t iq, const MultiIndex& beta) -> CliffordValue {
    std::lock_guard<std::mutex> lock(qderiv_mutex);
    auto it = qderiv[iq].find(beta);
    if (it == qderiv[iq].end()) {
      it = qderiv[iq].emplace(beta, qt[iq].second->derive(std::span<const int>(beta.data(), static_cast<std::size_t>(n)))).first;
    }
    return it->second;
  };

  std::vector<Symbol> partial(pt.size(), Symbol(p.deformation(), p.matrix_dim(), lo));
  parallel_for(pt.size(), [&](std::size_t ip) {
    const auto& [kp, cp] = pt[ip];
    const int jp = (degree(kp.alpha) - kp.order) / 2;
    Symbol& acc = partial[ip];
    for (std::size_t iq = 0; iq < qt.size(); ++iq) {
      const auto& [kq, cq] = qt[iq];
      const int jq = (degree(kq.alpha) - kq.order) / 2;
      const int base = kp.order + kq.order;
      int smin = std::max(0, base - hi);
      int smax = base - lo;
      if (max_beta >= 0) smax = std::min(smax, max_beta);
      for (int s = smin; s <= smax; ++s) {
        std::vector<MultiIndex> betas;
        MultiIndex cur{};
        enumerate_betas(n, s, 0, cur, betas);
        for (const auto& beta : betas) {
          const Poly& dp = cache().derivative(kp.alpha, jp, n, beta);
          if (dp.empty()) continue;
          CliffordValue dq = s == 0 ? *cq : q_derived(iq, beta);
          if (dq.is_zero()) continue;
          CliffordValue c = (*cp) * dq;
          if (c.is_zero()) continue;
          const double inv_fact = 1.0 / multi_factorial(beta);
          for (const auto& m : dp) {
            MultiIndex a = m.alpha;
            for (int ax = 0; ax < n; ++ax) a[static_cast<std::size_t>(ax)] += kq.alpha[static_cast<std::size_t>(ax)];
            acc.add_term(c, a, m.j + jq, m.coef * inv_fact);
          }
        }
      }
    }
  });
  for (const auto& s : partial) {
    for (const auto& [k, v] : s.terms_) out.add_canonical(k, v, 1.0);
  }
  if (options.prune_rel > 0.0) {
    for (auto it = out.terms_.begin(); it != out.terms_.end();) {
      it->second = it->second.pruned(options.prune_rel * it->second.norm1());
      it = it->second.is_zero() ? out.terms_.erase(it) : std::next(it);
    }
  }
  return out;
}

Symbol compose(const Symbol& p, const Symbol& q, const CalculusOptions& options) {
  if (p.is_zero() || q.is_zero()) {
    Symbol out(p.deformation(), p.matrix_dim(), std::max(p.floor(), q.floor()));
    return out;
  }
  const int top = p.top_order() + q.top_order();
  int determined = kExactFloor;
  if (!p.is_exact()) determined = std::max(determined, p.floor() + q.top_order());
  if (!q.is_exact()) determined = std::max(determined, q.floor() + p.top_order());
  int lo = determined;
  bool exact = determined == kExactFloor;
  if (options.depth > 0) {
    lo = std::max(lo, top - options.depth + 1);
    exact = false;
  }
  if (exact) {
    // Both operands exact: only polynomial left factors terminate.
    int lowest_p = 1 << 20;
    int max_deriv = 0;
    for (const auto& t : p.terms()) {
      if (t.j > 0) throw PreconditionError("exact composition needs a polynomial left factor; set a depth");
      lowest_p = std::min(lowest_p, t.order());
      max_deriv = std::max(max_deriv, t.order());
    }
    int lowest_q = 1 << 20;
    for (const auto& t : q.terms()) lowest_q = std::min(lowest_q, t.order());
    Symbol out = compose_orders(p, q, lowest_p + lowest_q - max_deriv, top, options);
    out.set_floor(kExactFloor);
    return out;
  }
  return compose_orders(p, q, lo, top, options);
}

Symbol pointwise_product(const Symbol& p, const Symbol& q) {
  CalculusOptions opts;
  Symbol pe = p;
  Symbol qe = q;
  pe.set_floor(kExactFloor);
  qe.set_floor(kExactFloor);
  int lo = 1 << 20;
  int hi = -(1 << 20);
  for (int a : p.orders())
    for (int b : q.orders()) {
      lo = std::min(lo, a + b);
      hi = std::max(hi, a + b);
    }
  Symbol out = compose_orders(pe, qe, lo, hi, opts, 0);
  int floor = kExactFloor;
  if (!p.is_exact()) floor = std::max(floor, p.floor() + (q.is_zero() ? 0 : q.top_order()));
  if (!q.is_exact()) floor = std::max(floor, q.floor() + (p.is_zero() ? 0 : p.top_order()));
  out.set_floor(floor);
  return out;
}

Parametrix parametrix(const Symbol& p, const CalculusOptions& options) {
  if (options.depth < 1) throw ArgumentError("parametrix depth must be at least 1");
  if (p.top_order() != 2) throw PreconditionError("parametrix expects a second-order symbol");
  const auto principal = p.component(2);
  if (principal.size() != 1 || principal[0].j != -1 || principal[0].alpha != MultiIndex{}) {
    throw PreconditionError("principal symbol must be c·‖ξ‖² with c independent of ξ");
  }
  Parametrix result{Symbol(p.deformation(), p.matrix_dim()), 0.0};
  const CliffordValue cinv =
      invert_scalar_diagonal(principal[0].coeff, options.inversion, &result.inversion_residual);
  const Symbol b2 = Symbol::monomial(cinv, MultiIndex{}, 1);
  Symbol b = b2;
  Symbol pe = p;
  if (!pe.is_exact() && pe.floor() > 2 - options.depth + 1) {
    throw PreconditionError("operator symbol is not tracked deeply enough for the parametrix");
  }
  pe.set_floor(kExactFloor);
  for (int k = 1; k < options.depth; ++k) {
    Symbol x = compose_orders(pe, b, -k, -k, options);
    b -= pointwise_product(b2, x);
    b.set_floor(kExactFloor);
  }
  result.symbol = b.truncated(-2 - options.depth + 1);
  if (options.prune_rel > 0.0) {
    Symbol pruned(p.deformation(), p.matrix_dim(), result.symbol.floor());
    for (const auto& t : result.symbol.terms()) {
      pruned.add_term(t.coeff.pruned(options.prune_rel * t.coeff.norm1()), t.alpha, t.j);
    }
    result.symbol = pruned;
  }
  return result;
}

Symbol power_symbols(const Symbol& b, int l, const CalculusOptions& options) {
  if (l < 1) throw ArgumentError("power must be a positive integer");
  Symbol r = b.truncated(b.top_order() - options.depth + 1);
  for (int i = 2; i <= l; ++i) r = compose(b, r, options);
  return r;
}

Symbol scalar_power_closed_form(const Symbol& p0, const Symbol& p1, const Symbol& p2, int l) {
  if (l < 1) throw ArgumentError("power must be a positive integer");
  for (const Symbol* s : {&p0, &p1, &p2}) {
    if (!s->deformation()->is_commutative() || s->matrix_dim() != 1) {
      throw PreconditionError("closed-form powers need commuting scalar coefficients");
    }
  }
  const int k = -p0.top_order();
  if (l == 1) {
    Symbol out = p0 + p1 + p2;
    out.set_floor(-k - 2);
    return out;
  }
  const int n = p0.dimension();
  auto exact = [](Symbol s) {
    s.set_floor(kExactFloor);
    return s;
  };
  const Symbol a0 = exact(p0), a1 = exact(p1), a2 = exact(p2);
  const Symbol one = Symbol::constant(CliffordValue::identity(p0.deformation(), 1));
  auto mul = [](const Symbol& x, const Symbol& y) { return pointwise_product(x, y); };
  std::vector<Symbol> pw = {one};
  for (int i = 1; i <= l; ++i) pw.push_back(mul(pw.back(), a0));
  auto ppow = [&](int e) -> const Symbol& {
    if (e < 0) throw PreconditionError("negative power in closed form");
    return pw[static_cast<std::size_t>(e)];
  };
  const double L = l;
  const double c2 = L * (L - 1) / 2.0;

  Symbol r0 = ppow(l);
  Symbol r1 = L * mul(ppow(l - 1), a1);
  Symbol r2 = L * mul(ppow(l - 1), a2);
  r2 += c2 * mul(ppow(l - 2), mul(a1, a1));

  std::vector<Symbol> dxi0, dx0, dxi1, dx1;
  for (int a = 0; a < n; ++a) {
    dxi0.push_back(a0.derive_xi(a));
    dx0.push_back(a0.derive_x(a));
    dxi1.push_back(a1.derive_xi(a));
    dx1.push_back(a1.derive_x(a));
  }
  Symbol grad(p0.deformation(), 1);   // Σ_a ∂_a p δ_a p
  Symbol mixed(p0.deformation(), 1);  // Σ_a ∂_a p1 δ_a p + ∂_a p δ_a p1
  for (int a = 0; a < n; ++a) {
    grad += mul(dxi0[a], dx0[a]);
    mixed += mul(dxi1[a], dx0[a]) + mul(dxi0[a], dx1[a]);
  }
  r1 += c2 * mul(ppow(l - 2), grad);
  r2 += c2 * mul(ppow(l - 2), mixed);
  if (l >= 3) r2 += c2 * (L - 2) * mul(ppow(l - 3), mul(a1, grad));

  Symbol second(p0.deformation(), 1);
  Symbol quartic(p0.deformation(), 1);
  Symbol cubic(p0.deformation(), 1);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const Symbol dxixi = dxi0[a].derive_xi(b);
      const Symbol dxx = dx0[a].derive_x(b);
      second += mul(dxixi, dxx);
      if (l >= 4) quartic += mul(mul(dxi0[a], dxi0[b]), mul(dx0[a], dx0[b]));
      if (l >= 3) {
        cubic += mul(mul(dxi0[a], dxi0[b]), dxx);
        cubic += mul(mul(dxi0[a], dxi0[b].derive_x(a)), dx0[b]);
        cubic += mul(dxixi, mul(dx0[a], dx0[b]));
      }
    }
  }
  const double c24 = L * (L - 1) / 24.0;
  r2 += c24 * 6.0 * mul(ppow(l - 2), second);
  if (l >= 4) r2 += c24 * 3.0 * (L - 2) * (L - 3) * mul(ppow(l - 4), quartic);
  if (l >= 3) r2 += c24 * 4.0 * (L - 2) * mul(ppow(l - 3), cubic);

  Symbol out = r0 + r1 + r2;
  out.set_floor(-l * k - 2);
  return out;
}

}  // namespace wodzicki
