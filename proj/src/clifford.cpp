#include "wodzicki/clifford.hpp"

#include <cmath>

#include "wodzicki/errors.hpp"

namespace wodzicki {

ConstMatrix ConstMatrix::identity(int d) {
  ConstMatrix m = zero(d);
  for (int i = 0; i < d; ++i) m(i, i) = 1.0;
  return m;
}

ConstMatrix ConstMatrix::zero(int d) {
  ConstMatrix m;
  m.dim = d;
  m.data.assign(static_cast<std::size_t>(d * d), Complex{});
  return m;
}

Complex ConstMatrix::trace() const {
  Complex s{};
  for (int i = 0; i < dim; ++i) s += (*this)(i, i);
  return s;
}

ConstMatrix operator*(const ConstMatrix& a, const ConstMatrix& b) {
  if (a.dim != b.dim) throw ConfigurationError("matrix dimension mismatch");
  ConstMatrix c = ConstMatrix::zero(a.dim);
  for (int i = 0; i < a.dim; ++i)
    for (int k = 0; k < a.dim; ++k)
      for (int j = 0; j < a.dim; ++j) c(i, j) += a(i, k) * b(k, j);
  return c;
}

ConstMatrix operator+(const ConstMatrix& a, const ConstMatrix& b) {
  if (a.dim != b.dim) throw ConfigurationError("matrix dimension mismatch");
  ConstMatrix c = a;
  for (std::size_t i = 0; i < c.data.size(); ++i) c.data[i] += b.data[i];
  return c;
}

ConstMatrix operator*(Complex s, const ConstMatrix& a) {
  ConstMatrix c = a;
  for (auto& x : c.data) x *= s;
  return c;
}

namespace {

ConstMatrix from_rows(int d, std::initializer_list<Complex> values) {
  ConstMatrix m = ConstMatrix::zero(d);
  std::size_t i = 0;
  for (Complex v : values) m.data[i++] = v;
  return m;
}

ConstMatrix block(const ConstMatrix& a, const ConstMatrix& b, const ConstMatrix& c,
                  const ConstMatrix& d) {
  const int h = a.dim;
  ConstMatrix m = ConstMatrix::zero(2 * h);
  for (int i = 0; i < h; ++i) {
    for (int j = 0; j < h; ++j) {
      m(i, j) = a(i, j);
      m(i, j + h) = b(i, j);
      m(i + h, j) = c(i, j);
      m(i + h, j + h) = d(i, j);
    }
  }
  return m;
}

void check_clifford(const GammaRep& rep) {
  const int d = rep.spinor_dim();
  for (int a = 0; a < rep.n; ++a) {
    for (int b = 0; b < rep.n; ++b) {
      ConstMatrix ac = rep.gamma[a] * rep.gamma[b] + rep.gamma[b] * rep.gamma[a];
      ConstMatrix expect = (a == b ? 2.0 : 0.0) * ConstMatrix::identity(d);
      for (std::size_t i = 0; i < ac.data.size(); ++i) {
        if (std::abs(ac.data[i] - expect.data[i]) != 0.0) {
          throw NumericalError("gamma matrices violate the Clifford relation");
        }
      }
    }
    ConstMatrix anti = rep.gamma[a] * rep.chirality + rep.chirality * rep.gamma[a];
    for (Complex x : anti.data) {
      if (x != Complex{}) throw NumericalError("chirality does not anticommute with gamma");
    }
  }
}

}  // namespace

GammaRep gamma_basis(int n) {
  const Complex i(0.0, 1.0);
  const ConstMatrix sx = from_rows(2, {0.0, 1.0, 1.0, 0.0});
  const ConstMatrix sy = from_rows(2, {0.0, -i, i, 0.0});
  const ConstMatrix sz = from_rows(2, {1.0, 0.0, 0.0, -1.0});
  const ConstMatrix z2 = ConstMatrix::zero(2);
  const ConstMatrix id2 = ConstMatrix::identity(2);
  GammaRep rep;
  rep.n = n;
  if (n == 2) {
    rep.gamma = {sx, sy};
    rep.chirality = sz;
  } else if (n == 4) {
    for (const ConstMatrix* s : {&sx, &sy, &sz}) {
      rep.gamma.push_back(block(z2, Complex(0.0, -1.0) * *s, i * *s, z2));
    }
    rep.gamma.push_back(block(z2, id2, id2, z2));
    rep.chirality = rep.gamma[0] * rep.gamma[1] * rep.gamma[2] * rep.gamma[3];
  } else {
    throw ConfigurationError("gamma matrices are available for n = 2 and n = 4 only");
  }
  check_clifford(rep);
  return rep;
}

CliffordValue::CliffordValue(DeformationPtr defm, int dim) : defm_(std::move(defm)), dim_(dim) {
  if (dim_ < 1) throw ArgumentError("Clifford value dimension must be positive");
  entries_.assign(static_cast<std::size_t>(dim_ * dim_), TorusElement(defm_));
}

CliffordValue CliffordValue::identity(DeformationPtr defm, int dim) {
  return scalar(TorusElement::one(defm), dim);
}

CliffordValue CliffordValue::scalar(const TorusElement& x, int dim) {
  CliffordValue m(x.deformation(), dim);
  for (int i = 0; i < dim; ++i) m(i, i) = x;
  return m;
}

CliffordValue CliffordValue::from_const(const TorusElement& x, const ConstMatrix& c) {
  CliffordValue m(x.deformation(), c.dim);
  for (int r = 0; r < c.dim; ++r) {
    for (int col = 0; col < c.dim; ++col) {
      if (c(r, col) != Complex{}) m(r, col) = x * c(r, col);
    }
  }
  return m;
}

bool CliffordValue::is_zero() const noexcept {
  for (const auto& e : entries_) {
    if (!e.is_zero()) return false;
  }
  return true;
}

bool CliffordValue::is_scalar_diagonal() const {
  for (int r = 0; r < dim_; ++r) {
    for (int c = 0; c < dim_; ++c) {
      if (r != c && !(*this)(r, c).is_zero()) return false;
    }
    if (!((*this)(r, r) == (*this)(0, 0))) return false;
  }
  return true;
}

double CliffordValue::norm1() const noexcept {
  double s = 0.0;
  for (const auto& e : entries_) s += e.norm1();
  return s;
}

void CliffordValue::check_compatible(const CliffordValue& o) const {
  if (o.dim_ != dim_) throw ConfigurationError("Clifford values of different dimension");
  if (!defm_->same_as(*o.defm_)) throw ConfigurationError("Clifford values over different deformations");
}

CliffordValue CliffordValue::operator-() const {
  CliffordValue m = *this;
  for (auto& e : m.entries_) e = -e;
  return m;
}

CliffordValue& CliffordValue::operator+=(const CliffordValue& o) {
  add_scaled(o, 1.0);
  return *this;
}

CliffordValue& CliffordValue::operator-=(const CliffordValue& o) {
  add_scaled(o, -1.0);
  return *this;
}

CliffordValue& CliffordValue::operator*=(Complex s) {
  for (auto& e : entries_) e *= s;
  return *this;
}

void CliffordValue::add_scaled(const CliffordValue& o, Complex s) {
  check_compatible(o);
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i].add_scaled(o.entries_[i], s);
}

CliffordValue operator*(const CliffordValue& a, const CliffordValue& b) {
  a.check_compatible(b);
  const int d = a.dim_;
  CliffordValue c(a.defm_, d);
  for (int i = 0; i < d; ++i) {
    for (int k = 0; k < d; ++k) {
      const TorusElement& x = a(i, k);
      if (x.is_zero()) continue;
      for (int j = 0; j < d; ++j) {
        const TorusElement& y = b(k, j);
        if (y.is_zero()) continue;
        c(i, j) += x * y;
      }
    }
  }
  return c;
}

CliffordValue operator*(const TorusElement& x, const CliffordValue& m) {
  CliffordValue c(m.defm_, m.dim_);
  for (std::size_t i = 0; i < m.entries_.size(); ++i) {
    if (!m.entries_[i].is_zero()) c.entries_[i] = x * m.entries_[i];
  }
  return c;
}

CliffordValue operator*(const CliffordValue& m, const TorusElement& x) {
  CliffordValue c(m.defm_, m.dim_);
  for (std::size_t i = 0; i < m.entries_.size(); ++i) {
    if (!m.entries_[i].is_zero()) c.entries_[i] = m.entries_[i] * x;
  }
  return c;
}

CliffordValue CliffordValue::derive(int axis) const {
  CliffordValue c(defm_, dim_);
  for (std::size_t i = 0; i < entries_.size(); ++i) c.entries_[i] = entries_[i].derive(axis);
  return c;
}

CliffordValue CliffordValue::derive(std::span<const int> beta) const {
  CliffordValue c(defm_, dim_);
  for (std::size_t i = 0; i < entries_.size(); ++i) c.entries_[i] = entries_[i].derive(beta);
  return c;
}

CliffordValue CliffordValue::adjoint() const {
  CliffordValue c(defm_, dim_);
  for (int r = 0; r < dim_; ++r)
    for (int col = 0; col < dim_; ++col) c(col, r) = (*this)(r, col).adjoint();
  return c;
}

CliffordValue CliffordValue::pruned(double tol) const {
  CliffordValue c(defm_, dim_);
  for (std::size_t i = 0; i < entries_.size(); ++i) c.entries_[i] = entries_[i].pruned(tol);
  return c;
}

double CliffordValue::max_abs_difference(const CliffordValue& a, const CliffordValue& b) {
  a.check_compatible(b);
  double m = 0.0;
  for (std::size_t i = 0; i < a.entries_.size(); ++i) {
    m = std::max(m, TorusElement::max_abs_difference(a.entries_[i], b.entries_[i]));
  }
  return m;
}

TorusElement matrix_trace(const CliffordValue& m) {
  TorusElement t(m.deformation());
  for (int i = 0; i < m.dim(); ++i) t += m(i, i);
  return t;
}

CliffordValue invert_scalar_diagonal(const CliffordValue& m, const InversionOptions& options,
                                     double* residual) {
  if (!m.is_scalar_diagonal()) {
    throw PreconditionError("only scalar multiples of the identity matrix are inverted");
  }
  Inverse inv = invert(m(0, 0), options);
  if (residual) *residual = inv.residual;
  return CliffordValue::scalar(inv.value, m.dim());
}

}  // namespace wodzicki
