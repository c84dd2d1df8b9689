#include "wodzicki/geometry.hpp"

#include <fftw3.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <mutex>

#include "wodzicki/errors.hpp"
#include "wodzicki/parallel.hpp"
#include "wodzicki/residue.hpp"

namespace wodzicki {

namespace {

constexpr int D = kMaxDimension;

std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

std::size_t grid_points(int n, int m) {
  std::size_t s = 1;
  for (int a = 0; a < n; ++a) s *= static_cast<std::size_t>(m);
  return s;
}

// In-place multidimensional DFT; sign = FFTW_FORWARD or FFTW_BACKWARD.
void dft(std::vector<Complex>& data, int n, int m, int sign) {
  int dims[D];
  for (int a = 0; a < n; ++a) dims[a] = m;
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(plan_mutex());
    plan = fftw_plan_dft(n, dims, ptr, ptr, sign, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  std::lock_guard<std::mutex> lock(plan_mutex());
  fftw_destroy_plan(plan);
}

int wrap(int k, int m) { return ((k % m) + m) % m; }
int frequency(int j, int m) { return j <= m / 2 ? j : j - m; }

void require_commutative(const DeformationPtr& defm) {
  if (!defm->is_commutative()) {
    throw ConfigurationError("the classical geometry path requires theta = 0");
  }
}

struct Jet {
  double g[D][D]{};
  double dg[D][D][D]{};       // dg[c][a][b] = ∂_c g_ab
  double ddg[D][D][D][D]{};   // ddg[c][d][a][b] = ∂_c ∂_d g_ab
};

struct PointCurvature {
  double ginv[D][D]{};
  double det = 0.0;
  double gamma[D][D][D]{};       // Γ^a_bc
  double riemann[D][D][D][D]{};  // R^a_bcd
};

void evaluate_point(const Jet& j, int n, PointCurvature& out) {
  Eigen::Matrix4d g = Eigen::Matrix4d::Identity();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) g(a, b) = j.g[a][b];
  Eigen::LLT<Eigen::Matrix4d> llt(g);
  if (llt.info() != Eigen::Success) throw ConfigurationError("metric is not positive definite");
  const Eigen::Matrix4d gi = llt.solve(Eigen::Matrix4d::Identity());
  out.det = 1.0;
  for (int a = 0; a < n; ++a) out.det *= llt.matrixL()(a, a) * llt.matrixL()(a, a);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) out.ginv[a][b] = gi(a, b);

  // Γ_dbc = ½(∂_b g_dc + ∂_c g_db − ∂_d g_bc), lowered first index.
  double low[D][D][D]{};
  double dlow[D][D][D][D]{};  // dlow[e][d][b][c] = ∂_e Γ_dbc
  for (int d = 0; d < n; ++d)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        low[d][b][c] = 0.5 * (j.dg[b][d][c] + j.dg[c][d][b] - j.dg[d][b][c]);
        for (int e = 0; e < n; ++e)
          dlow[e][d][b][c] = 0.5 * (j.ddg[e][b][d][c] + j.ddg[e][c][d][b] - j.ddg[e][d][b][c]);
      }
  // ∂_e g^{ad} = −g^{ap} ∂_e g_pq g^{qd}
  double dginv[D][D][D]{};
  for (int e = 0; e < n; ++e)
    for (int a = 0; a < n; ++a)
      for (int d = 0; d < n; ++d) {
        double s = 0.0;
        for (int p = 0; p < n; ++p)
          for (int q = 0; q < n; ++q) s += out.ginv[a][p] * j.dg[e][p][q] * out.ginv[q][d];
        dginv[e][a][d] = -s;
      }
  double dgamma[D][D][D][D]{};  // dgamma[e][a][b][c] = ∂_e Γ^a_bc
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        double s = 0.0;
        for (int d = 0; d < n; ++d) s += out.ginv[a][d] * low[d][b][c];
        out.gamma[a][b][c] = s;
        for (int e = 0; e < n; ++e) {
          double t = 0.0;
          for (int d = 0; d < n; ++d)
            t += dginv[e][a][d] * low[d][b][c] + out.ginv[a][d] * dlow[e][d][b][c];
          dgamma[e][a][b][c] = t;
        }
      }
  // R^a_bcd = ∂_c Γ^a_db − ∂_d Γ^a_cb + Γ^a_ce Γ^e_db − Γ^a_de Γ^e_cb
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          double s = dgamma[c][a][d][b] - dgamma[d][a][c][b];
          for (int e = 0; e < n; ++e)
            s += out.gamma[a][c][e] * out.gamma[e][d][b] - out.gamma[a][d][e] * out.gamma[e][c][b];
          out.riemann[a][b][c][d] = s;
        }
}

double max_imag(const std::vector<Complex>& v) {
  double s = 0.0;
  for (const auto& z : v) s = std::max(s, std::abs(z.imag()));
  return s;
}

// Grid samples of the metric jets.
class JetSampler {
 public:
  JetSampler(const MetricData& metric, int m) : n_(metric.dimension()), m_(m), metric_(metric) {
    require_commutative(metric.defm);
    switch (metric.mode) {
      case MetricMode::Flat:
        break;
      case MetricMode::ConformallyFlat: {
        const TorusElement& f = *metric.factor;
        phi_ = real_samples(f);
        for (int c = 0; c < n_; ++c) {
          dphi_[c] = real_samples(Complex(0, 1) * f.derive(c));
          for (int d = c; d < n_; ++d) ddphi_[c][d] = real_samples(-f.derive(c).derive(d));
        }
        for (double v : phi_)
          if (v <= 0.0) throw ConfigurationError("conformal factor is not positive on the grid");
        break;
      }
      case MetricMode::GeneralFourier:
        for (int a = 0; a < n_; ++a)
          for (int b = a; b < n_; ++b) {
            const TorusElement& g = metric.component(a, b);
            if (TorusElement::max_abs_difference(g, metric.component(b, a)) > 1e-14) {
              throw ConfigurationError("metric components are not symmetric");
            }
            g_[a][b] = real_samples(g);
            for (int c = 0; c < n_; ++c) {
              dg_[c][a][b] = real_samples(Complex(0, 1) * g.derive(c));
              for (int d = c; d < n_; ++d) ddg_[c][d][a][b] = real_samples(-g.derive(c).derive(d));
            }
          }
        break;
    }
  }

  void jet(std::size_t p, Jet& j) const {
    j = Jet{};
    switch (metric_.mode) {
      case MetricMode::Flat:
        for (int a = 0; a < n_; ++a) j.g[a][a] = 1.0;
        return;
      case MetricMode::ConformallyFlat: {
        const double e = metric_.exponent;
        const double f = phi_[p];
        const double g0 = std::pow(f, e);
        const double g1 = e * std::pow(f, e - 1.0);
        const double g2 = e * (e - 1.0) * std::pow(f, e - 2.0);
        double dg[D]{}, ddg[D][D]{};
        for (int c = 0; c < n_; ++c) dg[c] = g1 * dphi_[c][p];
        for (int c = 0; c < n_; ++c)
          for (int d = c; d < n_; ++d) {
            ddg[c][d] = g2 * dphi_[c][p] * dphi_[d][p] + g1 * ddphi_[c][d][p];
            ddg[d][c] = ddg[c][d];
          }
        for (int a = 0; a < n_; ++a) {
          j.g[a][a] = g0;
          for (int c = 0; c < n_; ++c) {
            j.dg[c][a][a] = dg[c];
            for (int d = 0; d < n_; ++d) j.ddg[c][d][a][a] = ddg[c][d];
          }
        }
        return;
      }
      case MetricMode::GeneralFourier:
        for (int a = 0; a < n_; ++a)
          for (int b = a; b < n_; ++b) {
            j.g[a][b] = j.g[b][a] = g_[a][b][p];
            for (int c = 0; c < n_; ++c) {
              j.dg[c][a][b] = j.dg[c][b][a] = dg_[c][a][b][p];
              for (int d = c; d < n_; ++d) {
                const double v = ddg_[c][d][a][b][p];
                j.ddg[c][d][a][b] = j.ddg[c][d][b][a] = j.ddg[d][c][a][b] = j.ddg[d][c][b][a] = v;
              }
            }
          }
        return;
    }
  }

 private:
  std::vector<double> real_samples(const TorusElement& f) const {
    auto s = sample(f, m_);
    double scale = 1.0;
    for (const auto& z : s) scale = std::max(scale, std::abs(z));
    if (max_imag(s) > 1e-10 * scale) throw ConfigurationError("metric data is not real-valued");
    std::vector<double> r(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) r[i] = s[i].real();
    return r;
  }

  int n_, m_;
  const MetricData& metric_;
  std::vector<double> phi_, dphi_[D], ddphi_[D][D];
  std::vector<double> g_[D][D], dg_[D][D][D], ddg_[D][D][D][D];
};

TensorField make_field(int rank, int n, int m) {
  TensorField t;
  t.rank = rank;
  t.n = n;
  t.m = m;
  t.values.assign(t.points() * t.stride(), 0.0);
  return t;
}

// Runs body(p) over all grid points in contiguous chunks.
template <class F>
void for_points(std::size_t points, F&& body) {
  const std::size_t chunks = std::max<std::size_t>(1, std::min<std::size_t>(points, 64));
  parallel_for(chunks, [&](std::size_t c) {
    const std::size_t lo = points * c / chunks, hi = points * (c + 1) / chunks;
    for (std::size_t p = lo; p < hi; ++p) body(p);
  });
}

}  // namespace

std::vector<Complex> sample(const TorusElement& f, int m) {
  require_commutative(f.deformation());
  const int n = f.dimension();
  std::vector<Complex> grid(grid_points(n, m));
  for (const auto& t : f.terms()) {
    const LatticeIndex idx = unpack(t.key);
    std::size_t p = 0;
    for (int a = 0; a < n; ++a) {
      const int k = idx.left[static_cast<std::size_t>(a)] + idx.right[static_cast<std::size_t>(a)];
      if (2 * std::abs(k) >= m) throw ArgumentError("grid too coarse for the Fourier support");
      p = p * static_cast<std::size_t>(m) + static_cast<std::size_t>(wrap(k, m));
    }
    grid[p] += t.coeff;
  }
  dft(grid, n, m, FFTW_BACKWARD);
  return grid;
}

TorusElement fourier_from_samples(const DeformationPtr& defm, const std::vector<Complex>& values,
                                  int m, double drop, double* tail) {
  require_commutative(defm);
  const int n = defm->dimension();
  if (values.size() != grid_points(n, m)) throw ArgumentError("grid size mismatch");
  std::vector<Complex> c = values;
  dft(c, n, m, FFTW_FORWARD);
  const double norm = 1.0 / static_cast<double>(c.size());
  std::vector<TorusElement::Term> terms;
  double tail_max = 0.0;
  for (std::size_t p = 0; p < c.size(); ++p) {
    const Complex v = c[p] * norm;
    LatticeIndex idx;
    std::size_t rest = p;
    int inf = 0;
    for (int a = n - 1; a >= 0; --a) {
      const int k = frequency(static_cast<int>(rest % static_cast<std::size_t>(m)), m);
      rest /= static_cast<std::size_t>(m);
      idx.left[static_cast<std::size_t>(a)] = k;
      inf = std::max(inf, std::abs(k));
    }
    if (inf >= m / 2 - 1) tail_max = std::max(tail_max, std::abs(v));
    if (std::abs(v) <= drop || (m % 2 == 0 && inf == m / 2) || inf > 127) continue;
    terms.push_back({pack(idx), v});
  }
  if (tail) *tail = tail_max;
  return TorusElement::from_terms(defm, std::move(terms));
}

std::vector<Complex> spectral_derivative(const std::vector<Complex>& values, int n, int m,
                                         int axis) {
  std::vector<Complex> c = values;
  dft(c, n, m, FFTW_FORWARD);
  const double norm = 1.0 / static_cast<double>(c.size());
  std::size_t inner = 1;
  for (int a = axis + 1; a < n; ++a) inner *= static_cast<std::size_t>(m);
  for (std::size_t p = 0; p < c.size(); ++p) {
    const int j = static_cast<int>((p / inner) % static_cast<std::size_t>(m));
    const int k = (m % 2 == 0 && j == m / 2) ? 0 : frequency(j, m);
    c[p] *= Complex(0.0, k * norm);
  }
  dft(c, n, m, FFTW_BACKWARD);
  return c;
}

Complex grid_mean(const std::vector<Complex>& values) {
  Complex s{};
  for (const auto& v : values) s += v;
  return s / static_cast<double>(values.size());
}

std::size_t TensorField::points() const { return grid_points(n, m); }

std::size_t TensorField::stride() const {
  std::size_t s = 1;
  for (int r = 0; r < rank; ++r) s *= static_cast<std::size_t>(n);
  return s;
}

double TensorField::at(std::size_t point, std::initializer_list<int> idx) const {
  std::size_t off = 0;
  for (int i : idx) off = off * static_cast<std::size_t>(n) + static_cast<std::size_t>(i);
  return values[point * stride() + off];
}

std::vector<Complex> TensorField::component(std::initializer_list<int> idx) const {
  std::vector<Complex> out(points());
  for (std::size_t p = 0; p < out.size(); ++p) out[p] = at(p, idx);
  return out;
}

int default_grid(int n) {
  switch (n) {
    case 1: return 128;
    case 2: return 96;
    case 3: return 32;
    default: return 20;
  }
}

Curvature curvature_tensors(const MetricData& metric, int m) {
  const int n = metric.dimension();
  if (m <= 0) m = default_grid(n);
  JetSampler sampler(metric, m);
  Curvature c;
  c.n = n;
  c.m = m;
  c.metric = make_field(2, n, m);
  c.inverse = make_field(2, n, m);
  c.christoffel = make_field(3, n, m);
  c.ricci = make_field(2, n, m);
  c.scalar = make_field(0, n, m);
  c.einstein = make_field(2, n, m);
  c.einstein_up = make_field(2, n, m);
  c.sqrt_det.assign(c.metric.points(), 0.0);
  const std::size_t n2 = static_cast<std::size_t>(n * n);
  for_points(c.metric.points(), [&](std::size_t p) {
    Jet j;
    sampler.jet(p, j);
    PointCurvature pc;
    evaluate_point(j, n, pc);
    c.sqrt_det[p] = std::sqrt(pc.det);
    double ric[D][D]{};
    double r = 0.0;
    for (int b = 0; b < n; ++b)
      for (int d = 0; d < n; ++d) {
        for (int a = 0; a < n; ++a) ric[b][d] += pc.riemann[a][b][a][d];
        r += pc.ginv[b][d] * ric[b][d];
      }
    c.scalar.values[p] = r;
    double ein[D][D]{};
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        const std::size_t o = p * n2 + static_cast<std::size_t>(a * n + b);
        c.metric.values[o] = j.g[a][b];
        c.inverse.values[o] = pc.ginv[a][b];
        c.ricci.values[o] = ric[a][b];
        ein[a][b] = ric[a][b] - 0.5 * r * j.g[a][b];
        c.einstein.values[o] = ein[a][b];
        for (int e = 0; e < n; ++e)
          c.christoffel.values[p * n2 * static_cast<std::size_t>(n) +
                               static_cast<std::size_t>((a * n + b) * n + e)] = pc.gamma[a][b][e];
      }
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        double s = 0.0;
        for (int e = 0; e < n; ++e)
          for (int f = 0; f < n; ++f) s += pc.ginv[a][e] * pc.ginv[b][f] * ein[e][f];
        c.einstein_up.values[p * n2 + static_cast<std::size_t>(a * n + b)] = s;
      }
  });
  return c;
}

double bianchi_residual(const Curvature& c) {
  const int n = c.n;
  // dG[e][a][b] = ∂_e G_ab
  std::vector<std::vector<Complex>> dG(static_cast<std::size_t>(n * n * n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const auto comp = c.einstein.component({a, b});
      for (int e = 0; e < n; ++e)
        dG[static_cast<std::size_t>((e * n + a) * n + b)] = spectral_derivative(comp, n, c.m, e);
    }
  double worst = 0.0;
  for (std::size_t p = 0; p < c.metric.points(); ++p) {
    for (int b = 0; b < n; ++b) {
      double s = 0.0;
      for (int a = 0; a < n; ++a)
        for (int e = 0; e < n; ++e) {
          double cov = dG[static_cast<std::size_t>((e * n + a) * n + b)][p].real();
          for (int d = 0; d < n; ++d) {
            cov -= c.christoffel.at(p, {d, e, a}) * c.einstein.at(p, {d, b});
            cov -= c.christoffel.at(p, {d, e, b}) * c.einstein.at(p, {a, d});
          }
          s += c.inverse.at(p, {a, e}) * cov;
        }
      worst = std::max(worst, std::abs(s));
    }
  }
  return worst;
}

double riemann_symmetry_residual(const MetricData& metric, int m, int stride) {
  const int n = metric.dimension();
  if (m <= 0) m = default_grid(n);
  JetSampler sampler(metric, m);
  const std::size_t points = grid_points(n, m);
  double worst = 0.0;
  for (std::size_t p = 0; p < points; p += static_cast<std::size_t>(std::max(1, stride))) {
    Jet j;
    sampler.jet(p, j);
    PointCurvature pc;
    evaluate_point(j, n, pc);
    double R[D][D][D][D]{};
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int cc = 0; cc < n; ++cc)
          for (int d = 0; d < n; ++d)
            for (int e = 0; e < n; ++e) R[a][b][cc][d] += j.g[a][e] * pc.riemann[e][b][cc][d];
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int cc = 0; cc < n; ++cc)
          for (int d = 0; d < n; ++d) {
            const double r = R[a][b][cc][d];
            worst = std::max({worst, std::abs(r + R[b][a][cc][d]), std::abs(r + R[a][b][d][cc]),
                              std::abs(r - R[cc][d][a][b]),
                              std::abs(r + R[a][cc][d][b] + R[a][d][b][cc])});
          }
  }
  return worst;
}

Complex functional_oracle(const Curvature& c, OracleKind kind, const std::vector<TorusElement>& V,
                          const std::vector<TorusElement>& W, const TorusElement* f) {
  const int n = c.n;
  const std::size_t points = c.metric.points();
  const double v = sphere_volume(n);
  std::vector<Complex> fs(points, Complex(1.0));
  if (f) fs = sample(*f, c.m);
  std::vector<std::vector<Complex>> vs, ws;
  const bool needs_fields = kind != OracleKind::ScalarEH && kind != OracleKind::Volume;
  if (needs_fields) {
    if (static_cast<int>(V.size()) != n || static_cast<int>(W.size()) != n) {
      throw ArgumentError("vector data must have one component per axis");
    }
    for (int a = 0; a < n; ++a) {
      vs.push_back(sample(V[static_cast<std::size_t>(a)], c.m));
      ws.push_back(sample(W[static_cast<std::size_t>(a)], c.m));
    }
  }
  std::vector<Complex> integrand(points);
  for (std::size_t p = 0; p < points; ++p) {
    Complex s{};
    switch (kind) {
      case OracleKind::ScalarEH:
        s = c.scalar.values[p];
        break;
      case OracleKind::Volume:
        s = 1.0;
        break;
      default: {
        const TensorField& t = kind == OracleKind::Metric        ? c.metric
                               : kind == OracleKind::Einstein    ? c.einstein
                               : kind == OracleKind::FormMetric  ? c.inverse
                                                                 : c.einstein_up;
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b)
            s += t.at(p, {a, b}) * vs[static_cast<std::size_t>(a)][p] *
                 ws[static_cast<std::size_t>(b)][p];
      }
    }
    integrand[p] = c.sqrt_det[p] * fs[p] * s;
  }
  const Complex mean = grid_mean(integrand);
  const double spin = std::pow(2.0, n / 2);
  switch (kind) {
    case OracleKind::Metric: return -(v / n) * mean;
    case OracleKind::Einstein: return (v / 6.0) * mean;
    case OracleKind::ScalarEH: return ((n - 2) / 12.0) * v * mean;
    case OracleKind::Volume: return v * mean;
    case OracleKind::FormMetric: return spin * v * mean;
    case OracleKind::FormEinstein: return spin * (v / 6.0) * mean;
  }
  return {};
}

MetricFourier metric_fourier(const MetricData& metric, int m) {
  const int n = metric.dimension();
  if (m <= 0) m = default_grid(n);
  const int max_m = n <= 2 ? 256 : 40;
  while (true) {
    Curvature c = curvature_tensors(metric, m);
    MetricFourier out{{}, {}, {}, TorusElement(metric.defm), 0.0};
    std::vector<Complex> buf(c.metric.points());
    auto transform = [&](std::vector<TorusElement>& dst) {
      double tail = 0.0;
      dst.push_back(fourier_from_samples(metric.defm, buf, m, 1e-16, &tail));
      out.tail = std::max(out.tail, tail);
    };
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        for (std::size_t p = 0; p < buf.size(); ++p) buf[p] = c.inverse.at(p, {a, b});
        transform(out.inverse);
        for (std::size_t p = 0; p < buf.size(); ++p) buf[p] = c.metric.at(p, {a, b});
        transform(out.metric);
      }
    {
      for (std::size_t p = 0; p < buf.size(); ++p) buf[p] = c.sqrt_det[p];
      std::vector<TorusElement> one;
      transform(one);
      out.sqrt_det = std::move(one.front());
    }
    for (int e = 0; e < n; ++e) {
      for (std::size_t p = 0; p < buf.size(); ++p) {
        double s = 0.0;
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) s += c.inverse.at(p, {a, b}) * c.christoffel.at(p, {e, a, b});
        buf[p] = s;
      }
      transform(out.christoffel_trace);
    }
    if (out.tail < 1e-12) return out;
    if (m >= max_m) {
      throw NumericalError("metric Fourier tail " + std::to_string(out.tail) +
                           " above 1e-12 at the largest grid");
    }
    m = std::min(max_m, 2 * m);
  }
}

}  // namespace wodzicki
