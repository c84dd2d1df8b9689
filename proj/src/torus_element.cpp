#include "wodzicki/torus_element.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include "wodzicki/errors.hpp"

namespace wodzicki {

namespace {

constexpr LatticeKey kHighBits = 0x8080808080808080ULL;
constexpr int kMaxField = 127;

// Per-byte two's complement addition; exact while every field stays in int8.
inline LatticeKey key_add(LatticeKey a, LatticeKey b) {
  return ((a & ~kHighBits) + (b & ~kHighBits)) ^ ((a ^ b) & kHighBits);
}

inline LatticeKey key_neg(LatticeKey a) {
  LatticeKey out = 0;
  for (int f = 0; f < 2 * kMaxDimension; ++f) {
    const auto v = static_cast<std::int8_t>(-key_field(a, f));
    out |= static_cast<LatticeKey>(static_cast<std::uint8_t>(v)) << (8 * f);
  }
  return out;
}

// Open-addressing accumulator keyed by packed lattice index. The all -128
// key is unreachable because fields stay within [-127, 127].
class KeyAccumulator {
 public:
  explicit KeyAccumulator(std::size_t expected) {
    std::size_t cap = 16;
    while (cap < 2 * expected) cap <<= 1;
    keys_.assign(cap, kEmpty);
    vals_.assign(cap, Complex{});
    mask_ = cap - 1;
  }

  void add(LatticeKey key, Complex v) {
    std::size_t h = slot(key);
    while (true) {
      if (keys_[h] == key) {
        vals_[h] += v;
        return;
      }
      if (keys_[h] == kEmpty) {
        keys_[h] = key;
        vals_[h] = v;
        if (++count_ * 2 > keys_.size()) grow();
        return;
      }
      h = (h + 1) & mask_;
    }
  }

  std::vector<TorusElement::Term> extract() const {
    std::vector<TorusElement::Term> out;
    out.reserve(count_);
    for (std::size_t i = 0; i < keys_.size(); ++i) {
      if (keys_[i] != kEmpty && vals_[i] != Complex{}) out.push_back({keys_[i], vals_[i]});
    }
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.key < y.key; });
    return out;
  }

 private:
  static constexpr LatticeKey kEmpty = kHighBits;

  std::size_t slot(LatticeKey key) const {
    return static_cast<std::size_t>((key * 0x9E3779B97F4A7C15ULL) >> 20) & mask_;
  }

  void grow() {
    std::vector<LatticeKey> old_keys = std::move(keys_);
    std::vector<Complex> old_vals = std::move(vals_);
    keys_.assign(old_keys.size() * 2, kEmpty);
    vals_.assign(old_keys.size() * 2, Complex{});
    mask_ = keys_.size() - 1;
    count_ = 0;
    for (std::size_t i = 0; i < old_keys.size(); ++i) {
      if (old_keys[i] != kEmpty) add(old_keys[i], old_vals[i]);
    }
  }

  std::vector<LatticeKey> keys_;
  std::vector<Complex> vals_;
  std::size_t mask_ = 0;
  std::size_t count_ = 0;
};

int key_radius(LatticeKey key) {
  int r = 0;
  for (int f = 0; f < 2 * kMaxDimension; ++f) r = std::max(r, std::abs(key_field(key, f)));
  return r;
}

}  // namespace

LatticeKey pack(const LatticeIndex& idx) {
  LatticeKey out = 0;
  for (int a = 0; a < kMaxDimension; ++a) {
    for (int side = 0; side < 2; ++side) {
      const int v = side == 0 ? idx.left[a] : idx.right[a];
      if (v < -kMaxField || v > kMaxField) {
        throw ArgumentError("lattice index component out of range: " + std::to_string(v));
      }
      const int field = a + side * kMaxDimension;
      out |= static_cast<LatticeKey>(static_cast<std::uint8_t>(static_cast<std::int8_t>(v)))
             << (8 * field);
    }
  }
  return out;
}

LatticeIndex unpack(LatticeKey key) {
  LatticeIndex idx;
  for (int a = 0; a < kMaxDimension; ++a) {
    idx.left[a] = key_field(key, a);
    idx.right[a] = key_field(key, a + kMaxDimension);
  }
  return idx;
}

TorusElement::TorusElement(DeformationPtr defm) : defm_(std::move(defm)) {
  if (!defm_) throw ConfigurationError("torus element requires a deformation matrix");
}

TorusElement TorusElement::scalar(DeformationPtr defm, Complex c) {
  TorusElement e(std::move(defm));
  if (c != Complex{}) e.terms_.push_back({0, c});
  return e;
}

TorusElement TorusElement::monomial(DeformationPtr defm, std::span<const int> k, Complex c) {
  const int n = defm->dimension();
  if (static_cast<int>(k.size()) != n) throw ConfigurationError("lattice vector has wrong length");
  LatticeIndex idx;
  std::copy(k.begin(), k.end(), idx.left.begin());
  TorusElement e(std::move(defm));
  if (c != Complex{}) e.terms_.push_back({pack(idx), c});
  return e;
}

TorusElement TorusElement::opposite_monomial(DeformationPtr defm, std::span<const int> k,
                                             Complex c) {
  const int n = defm->dimension();
  if (static_cast<int>(k.size()) != n) throw ConfigurationError("lattice vector has wrong length");
  LatticeIndex idx;
  std::copy(k.begin(), k.end(), idx.right.begin());
  TorusElement e(std::move(defm));
  if (c != Complex{}) e.terms_.push_back({pack(idx), c});
  return e;
}

TorusElement TorusElement::from_terms(DeformationPtr defm, std::vector<Term> terms) {
  TorusElement e(std::move(defm));
  const int n = e.dimension();
  for (const auto& t : terms) {
    for (int a = n; a < kMaxDimension; ++a) {
      if (key_field(t.key, a) != 0 || key_field(t.key, a + kMaxDimension) != 0) {
        throw ConfigurationError("lattice index has components beyond the torus dimension");
      }
    }
  }
  std::sort(terms.begin(), terms.end(), [](const Term& x, const Term& y) { return x.key < y.key; });
  for (const auto& t : terms) {
    if (!e.terms_.empty() && e.terms_.back().key == t.key) {
      e.terms_.back().coeff += t.coeff;
    } else {
      e.terms_.push_back(t);
    }
  }
  std::erase_if(e.terms_, [](const Term& t) { return t.coeff == Complex{}; });
  return e;
}

bool TorusElement::is_scalar() const noexcept {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].key == 0);
}

Side TorusElement::side() const noexcept {
  bool left = false;
  bool right = false;
  for (const auto& t : terms_) {
    for (int a = 0; a < kMaxDimension; ++a) {
      left = left || key_field(t.key, a) != 0;
      right = right || key_field(t.key, a + kMaxDimension) != 0;
    }
  }
  if (left && right) return Side::Mixed;
  return right ? Side::Right : Side::Left;
}

Complex TorusElement::coefficient(const LatticeIndex& idx) const {
  const LatticeKey key = pack(idx);
  auto it = std::lower_bound(terms_.begin(), terms_.end(), key,
                             [](const Term& t, LatticeKey k) { return t.key < k; });
  return (it != terms_.end() && it->key == key) ? it->coeff : Complex{};
}

Complex TorusElement::identity_component() const { return coefficient(LatticeIndex{}); }

int TorusElement::support_radius() const noexcept {
  int r = 0;
  for (const auto& t : terms_) r = std::max(r, key_radius(t.key));
  return r;
}

double TorusElement::norm1() const noexcept {
  double s = 0.0;
  for (const auto& t : terms_) s += std::abs(t.coeff);
  return s;
}

double TorusElement::norm_inf() const noexcept {
  double s = 0.0;
  for (const auto& t : terms_) s = std::max(s, std::abs(t.coeff));
  return s;
}

void TorusElement::check_compatible(const TorusElement& other) const {
  if (!defm_->same_as(*other.defm_)) {
    throw ConfigurationError("torus elements over different deformation matrices");
  }
}

TorusElement TorusElement::operator-() const {
  TorusElement out = *this;
  for (auto& t : out.terms_) t.coeff = -t.coeff;
  return out;
}

void TorusElement::add_scaled(const TorusElement& b, Complex s) {
  check_compatible(b);
  if (b.terms_.empty() || s == Complex{}) return;
  std::vector<Term> merged;
  merged.reserve(terms_.size() + b.terms_.size());
  auto i = terms_.begin();
  auto j = b.terms_.begin();
  while (i != terms_.end() || j != b.terms_.end()) {
    if (j == b.terms_.end() || (i != terms_.end() && i->key < j->key)) {
      merged.push_back(*i++);
    } else if (i == terms_.end() || j->key < i->key) {
      merged.push_back({j->key, s * j->coeff});
      ++j;
    } else {
      const Complex c = i->coeff + s * j->coeff;
      if (c != Complex{}) merged.push_back({i->key, c});
      ++i;
      ++j;
    }
  }
  terms_ = std::move(merged);
}

TorusElement& TorusElement::operator+=(const TorusElement& other) {
  add_scaled(other, 1.0);
  return *this;
}

TorusElement& TorusElement::operator-=(const TorusElement& other) {
  add_scaled(other, -1.0);
  return *this;
}

TorusElement& TorusElement::operator*=(Complex s) {
  if (s == Complex{}) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.coeff *= s;
  return *this;
}

TorusElement operator*(const TorusElement& a, const TorusElement& b) {
  a.check_compatible(b);
  TorusElement out(a.defm_);
  if (a.terms_.empty() || b.terms_.empty()) return out;
  if (a.support_radius() + b.support_radius() > kMaxField) {
    throw NumericalError("product support radius would exceed " + std::to_string(kMaxField) +
                         "; prune or clip operands before multiplying");
  }
  const DeformationMatrix& defm = *a.defm_;
  const int n = defm.dimension();

  // Scalar operands: plain rescaling keeps the support untouched.
  if (a.is_scalar()) {
    out = b;
    out *= a.terms_[0].coeff;
    return out;
  }
  if (b.is_scalar()) {
    out = a;
    out *= b.terms_[0].coeff;
    return out;
  }

  constexpr int F = 2 * kMaxDimension;
  using Fields = std::array<int, F>;
  auto unpack_all = [](const std::vector<TorusElement::Term>& terms, Fields& lo, Fields& hi) {
    std::vector<Fields> out(terms.size());
    lo.fill(0);
    hi.fill(0);
    for (std::size_t i = 0; i < terms.size(); ++i) {
      for (int f = 0; f < F; ++f) {
        const int v = key_field(terms[i].key, f);
        out[i][static_cast<std::size_t>(f)] = v;
        lo[static_cast<std::size_t>(f)] = std::min(lo[static_cast<std::size_t>(f)], v);
        hi[static_cast<std::size_t>(f)] = std::max(hi[static_cast<std::size_t>(f)], v);
      }
    }
    return out;
  };
  Fields alo, ahi, blo, bhi;
  const std::vector<Fields> af = unpack_all(a.terms_, alo, ahi);
  const std::vector<Fields> bf = unpack_all(b.terms_, blo, bhi);

  // The phase of e_x e_y is exp(i Σ_f y_f L_f(x)) with L linear in x:
  // left fields pick up Σ_{p>q} θ_pq x_p y_q, commutant fields θ_pq y°_p x°_q.
  std::vector<int> active;
  if (!defm.is_commutative()) {
    for (int f = 0; f < F; ++f) {
      if (blo[static_cast<std::size_t>(f)] != 0 || bhi[static_cast<std::size_t>(f)] != 0) active.push_back(f);
    }
  }
  auto linear_form = [&](const Fields& x, int f) {
    double l = 0.0;
    if (f < kMaxDimension) {
      for (int p = f + 1; p < n; ++p) l += defm.theta(p, f) * x[static_cast<std::size_t>(p)];
    } else {
      const int p = f - kMaxDimension;
      for (int q = 0; q < p; ++q) l += defm.theta(p, q) * x[static_cast<std::size_t>(q + kMaxDimension)];
    }
    return l;
  };

  // Dense accumulation over the bounding box of the result when it is small.
  Fields extent{}, stride{};
  double cells = 1.0;
  for (int f = 0; f < F; ++f) {
    const auto u = static_cast<std::size_t>(f);
    extent[u] = ahi[u] + bhi[u] - alo[u] - blo[u] + 1;
    cells *= extent[u];
  }
  const double pairs_count = static_cast<double>(a.terms_.size()) * static_cast<double>(b.terms_.size());
  const bool dense = cells <= 4.0e6 && cells <= 16.0 * pairs_count;
  std::vector<Complex> grid;
  std::vector<std::size_t> aoff, boff;
  std::optional<KeyAccumulator> acc;
  if (dense) {
    std::size_t st = 1;
    for (int f = 0; f < F; ++f) {
      stride[static_cast<std::size_t>(f)] = static_cast<int>(st);
      st *= static_cast<std::size_t>(extent[static_cast<std::size_t>(f)]);
    }
    grid.assign(st, Complex{});
    auto offsets = [&](const std::vector<Fields>& fs, const Fields& lo) {
      std::vector<std::size_t> o(fs.size());
      for (std::size_t i = 0; i < fs.size(); ++i) {
        std::size_t v = 0;
        for (int f = 0; f < F; ++f) {
          const auto u = static_cast<std::size_t>(f);
          v += static_cast<std::size_t>(fs[i][u] - lo[u]) * static_cast<std::size_t>(stride[u]);
        }
        o[i] = v;
      }
      return o;
    };
    aoff = offsets(af, alo);
    boff = offsets(bf, blo);
  } else {
    acc.emplace(std::max(a.terms_.size(), b.terms_.size()) * 4);
  }

  const std::size_t na = active.size();
  std::vector<std::vector<Complex>> tables(na);
  std::vector<Complex> row(b.terms_.size());
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    const Complex xc = a.terms_[i].coeff;
    if (na == 0) {
      for (std::size_t j = 0; j < b.terms_.size(); ++j) row[j] = xc * b.terms_[j].coeff;
    } else {
      for (std::size_t t = 0; t < na; ++t) {
        const int f = active[t];
        const auto u = static_cast<std::size_t>(f);
        const double l = linear_form(af[i], f);
        auto& tab = tables[t];
        tab.resize(static_cast<std::size_t>(bhi[u] - blo[u] + 1));
        for (int v = blo[u]; v <= bhi[u]; ++v) tab[static_cast<std::size_t>(v - blo[u])] = std::polar(1.0, l * v);
      }
      for (std::size_t j = 0; j < b.terms_.size(); ++j) {
        Complex c = xc * b.terms_[j].coeff;
        for (std::size_t t = 0; t < na; ++t) {
          const auto u = static_cast<std::size_t>(active[t]);
          c *= tables[t][static_cast<std::size_t>(bf[j][u] - blo[u])];
        }
        row[j] = c;
      }
    }
    if (dense) {
      Complex* base = grid.data() + aoff[i];
      for (std::size_t j = 0; j < b.terms_.size(); ++j) base[boff[j]] += row[j];
    } else {
      for (std::size_t j = 0; j < b.terms_.size(); ++j) {
        acc->add(key_add(a.terms_[i].key, b.terms_[j].key), row[j]);
      }
    }
  }

  if (!dense) {
    out.terms_ = acc->extract();
    return out;
  }
  for (std::size_t c = 0; c < grid.size(); ++c) {
    if (grid[c] == Complex{}) continue;
    LatticeIndex idx;
    std::size_t rem = c;
    for (int f = 0; f < F; ++f) {
      const auto u = static_cast<std::size_t>(f);
      const int v = static_cast<int>(rem % static_cast<std::size_t>(extent[u])) + alo[u] + blo[u];
      rem /= static_cast<std::size_t>(extent[u]);
      if (f < kMaxDimension) idx.left[u] = v;
      else idx.right[u - kMaxDimension] = v;
    }
    out.terms_.push_back({pack(idx), grid[c]});
  }
  std::sort(out.terms_.begin(), out.terms_.end(),
            [](const auto& x, const auto& y) { return x.key < y.key; });
  return out;
}

TorusElement TorusElement::derive(int axis) const {
  if (axis < 0 || axis >= dimension()) {
    throw ArgumentError("derivation axis " + std::to_string(axis) + " out of range");
  }
  TorusElement out(defm_);
  out.terms_.reserve(terms_.size());
  for (const auto& t : terms_) {
    const int w = key_field(t.key, axis) + key_field(t.key, axis + kMaxDimension);
    if (w != 0) out.terms_.push_back({t.key, t.coeff * static_cast<double>(w)});
  }
  return out;
}

TorusElement TorusElement::derive(std::span<const int> beta) const {
  if (static_cast<int>(beta.size()) != dimension()) {
    throw ArgumentError("derivation multi-index has wrong length");
  }
  TorusElement out(defm_);
  out.terms_.reserve(terms_.size());
  for (const auto& t : terms_) {
    double f = 1.0;
    for (int a = 0; a < dimension(); ++a) {
      if (beta[static_cast<std::size_t>(a)] < 0) throw ArgumentError("negative derivation order");
      const int w = key_field(t.key, a) + key_field(t.key, a + kMaxDimension);
      for (int r = 0; r < beta[static_cast<std::size_t>(a)]; ++r) f *= w;
    }
    if (f != 0.0) out.terms_.push_back({t.key, t.coeff * f});
  }
  return out;
}

Complex TorusElement::trace() const {
  if (!terms_.empty() && terms_.front().key == 0) return terms_.front().coeff;
  // key 0 sorts first among all keys only if no key is smaller; search anyway.
  return identity_component();
}

TorusElement TorusElement::adjoint() const {
  const int n = dimension();
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) {
    // (e_k)* = exp(i Σ_{a>b} θ_ab k_a k_b) e_{-k}, same rule on the commutant copy.
    double angle = 0.0;
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < a; ++b) {
        const double th = defm_->theta(a, b);
        if (th == 0.0) continue;
        angle += th * (key_field(t.key, a) * key_field(t.key, b) +
                       key_field(t.key, a + kMaxDimension) * key_field(t.key, b + kMaxDimension));
      }
    }
    out.push_back({key_neg(t.key), std::conj(t.coeff) * std::polar(1.0, angle)});
  }
  return from_terms(defm_, std::move(out));
}

TorusElement TorusElement::to_opposite() const {
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) {
    LatticeIndex idx = unpack(t.key);
    for (int a = 0; a < kMaxDimension; ++a) {
      if (idx.right[a] != 0) throw PreconditionError("to_opposite expects a left-algebra element");
      idx.right[a] = idx.left[a];
      idx.left[a] = 0;
    }
    out.push_back({pack(idx), t.coeff});
  }
  return from_terms(defm_, std::move(out));
}

TorusElement TorusElement::to_left() const {
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) {
    LatticeIndex idx = unpack(t.key);
    for (int a = 0; a < kMaxDimension; ++a) {
      if (idx.left[a] != 0) throw PreconditionError("to_left expects a commutant-copy element");
      idx.left[a] = idx.right[a];
      idx.right[a] = 0;
    }
    out.push_back({pack(idx), t.coeff});
  }
  return from_terms(defm_, std::move(out));
}

TorusElement commutant_image(const TorusElement& k) {
  const bool flat = k.deformation()->is_commutative();
  switch (k.side()) {
    case Side::Left: return flat ? k : k.to_opposite();
    case Side::Right: return flat ? k.to_left() : k;
    case Side::Mixed: break;
  }
  throw PreconditionError("conformal factor must lie in A or its commutant copy");
}

TorusElement TorusElement::pruned(double tol) const {
  TorusElement out(defm_);
  out.terms_.reserve(terms_.size());
  for (const auto& t : terms_) {
    if (std::abs(t.coeff) > tol) out.terms_.push_back(t);
  }
  return out;
}

TorusElement TorusElement::pruned_relative(double rel_tol) const {
  return pruned(rel_tol * norm1());
}

TorusElement TorusElement::pow(int exponent) const {
  if (exponent < 0) throw ArgumentError("negative powers need an explicit inverse");
  TorusElement result = one(defm_);
  TorusElement base = *this;
  while (exponent > 0) {
    if (exponent & 1) result = result * base;
    exponent >>= 1;
    if (exponent > 0) base = base * base;
  }
  return result;
}

bool TorusElement::operator==(const TorusElement& other) const {
  if (!defm_->same_as(*other.defm_) || terms_.size() != other.terms_.size()) return false;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (terms_[i].key != other.terms_[i].key || terms_[i].coeff != other.terms_[i].coeff) {
      return false;
    }
  }
  return true;
}

double TorusElement::max_abs_difference(const TorusElement& a, const TorusElement& b) {
  TorusElement d = a;
  d -= b;
  return d.norm_inf();
}

std::string TorusElement::to_string() const {
  std::ostringstream os;
  os.precision(17);
  const int n = dimension();
  bool first = true;
  for (const auto& t : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << t.coeff.real() << (t.coeff.imag() < 0 ? "" : "+") << t.coeff.imag() << "i)";
    const LatticeIndex idx = unpack(t.key);
    os << "e[";
    for (int a = 0; a < n; ++a) os << (a ? "," : "") << idx.left[a];
    os << "|";
    for (int a = 0; a < n; ++a) os << (a ? "," : "") << idx.right[a];
    os << "]";
  }
  if (first) os << "0";
  return os.str();
}

namespace {

TorusElement clip_radius(const TorusElement& x, int radius) {
  std::vector<TorusElement::Term> kept;
  kept.reserve(x.size());
  for (const auto& t : x.terms()) {
    if (key_radius(t.key) <= radius) kept.push_back(t);
  }
  return TorusElement::from_terms(x.deformation(), std::move(kept));
}

}  // namespace

namespace {

// Newton iteration X <- X(2 - aX) from X0 = a* / ‖a‖₁², which converges for
// any invertible a since 1 - a X0 is positive with norm below 1.
TorusElement newton_inverse(const TorusElement& a, const InversionOptions& options, int& total) {
  const TorusElement unit = TorusElement::one(a.deformation());
  const double drop = options.tol * 1e-4;
  const double s = a.norm1();
  TorusElement x = a.adjoint() * (1.0 / (s * s));
  for (int it = 0; it < options.max_iterations; ++it, ++total) {
    TorusElement e = unit - clip_radius(a * x, options.max_support_radius).pruned(drop);
    const double size = e.norm1();
    if (size < options.tol * 1e-2 || !std::isfinite(size)) break;
    x = clip_radius(x + x * e, options.max_support_radius).pruned(drop);
  }
  return x;
}

}  // namespace

Inverse invert(const TorusElement& a, const InversionOptions& options) {
  const auto& defm = a.deformation();
  const TorusElement unit = TorusElement::one(defm);
  const Complex lambda = a.identity_component();
  if (std::abs(lambda) == 0.0) {
    throw InversionError("cannot invert: identity component vanishes", 1.0);
  }
  if (options.max_support_radius + a.support_radius() > kMaxField) {
    throw ArgumentError("inversion support radius is limited to " +
                        std::to_string(kMaxField - a.support_radius()));
  }
  TorusElement r = a * (1.0 / lambda);
  r -= unit;

  const double drop = options.tol * 1e-4;
  TorusElement sum = unit;
  TorusElement term = unit;
  int it = 0;
  bool diverged = false;
  double previous = 1.0;
  int growing = 0;
  for (; it < options.max_iterations; ++it) {
    term = clip_radius(-(r * term), options.max_support_radius).pruned(drop);
    const double size = term.norm1();
    sum += term;
    if (size < options.tol * 1e-3) break;
    growing = size > previous ? growing + 1 : 0;
    previous = size;
    if (!std::isfinite(size) || size > 1e8 || growing >= 8) {
      diverged = true;
      break;
    }
  }
  TorusElement b = diverged ? newton_inverse(a, options, it) : sum * (1.0 / lambda);
  TorusElement check = a * b;
  check -= unit;
  double residual = check.norm1();
  if (!diverged && !(residual <= options.tol)) {
    b = newton_inverse(a, options, it);
    check = a * b;
    check -= unit;
    residual = check.norm1();
  }
  if (!(residual <= options.tol)) {
    throw InversionError("inversion did not converge within support radius " +
                             std::to_string(options.max_support_radius),
                         std::isfinite(residual) ? residual : 1e300);
  }
  return {std::move(b), residual, it + 1};
}

}  // namespace wodzicki
