#pragma once

#include <vector>

#include "wodzicki/metric.hpp"

namespace wodzicki {

/// Classical (θ = 0) differential geometry on a uniform grid of m^n points,
/// x_j = 2π j / m. Fourier data enter through exact spectral evaluation of the
/// input coefficients and their derivatives; nonlinear operations (inverse
/// metric, √det g, curvature) are pointwise.

/// Values of f at the grid points. f must live over a commutative
/// deformation; left and commutant copies are both read as functions.
std::vector<Complex> sample(const TorusElement& f, int m);

/// Fourier coefficients of grid values. Coefficients of modulus <= drop are
/// discarded. `tail` receives the largest coefficient modulus on the outer
/// shell |k|_∞ >= m/2 − 1 (aliasing indicator).
TorusElement fourier_from_samples(const DeformationPtr& defm, const std::vector<Complex>& values,
                                  int m, double drop, double* tail = nullptr);

/// Spectral derivative ∂_axis of periodic grid values.
std::vector<Complex> spectral_derivative(const std::vector<Complex>& values, int n, int m,
                                         int axis);

/// Mean over the grid: the normalised integral (1/(2π)^n) ∫ · dx.
Complex grid_mean(const std::vector<Complex>& values);

/// Per-point tensor values; component (p, i_1..i_r) at
/// values[p · n^r + Σ i_k n^(r−k)].
struct TensorField {
  int rank = 0;
  int n = 0;
  int m = 0;
  std::vector<double> values;

  std::size_t points() const;
  std::size_t stride() const;
  double at(std::size_t point, std::initializer_list<int> idx) const;
  /// Grid values of one component.
  std::vector<Complex> component(std::initializer_list<int> idx) const;
};

/// Levi-Civita data. christoffel(p, a, b, c) = Γ^a_bc. ricci_ab = R^c_acb,
/// einstein = Ric − ½ R g (covariant) and einstein_up its contravariant form.
struct Curvature {
  int n = 0;
  int m = 0;
  TensorField metric, inverse, christoffel, ricci, scalar, einstein, einstein_up;
  std::vector<double> sqrt_det;
};

/// Grid size used when none is given: 96 for n <= 2, 20 for n = 4.
int default_grid(int n);

/// Throws ConfigurationError for θ ≠ 0, complex metric samples or a metric
/// that is not positive definite at some grid point.
Curvature curvature_tensors(const MetricData& metric, int m = 0);

/// max_b |∇^a G_ab| with the covariant derivative of G taken spectrally.
double bianchi_residual(const Curvature& c);

/// Largest violation of R_abcd = −R_bacd = −R_abdc = R_cdab and
/// R_a[bcd] = 0 over every `stride`-th grid point.
double riemann_symmetry_residual(const MetricData& metric, int m = 0, int stride = 1);

enum class OracleKind {
  Metric,       // −(v/n) ∫ g(V, W) vol
  Einstein,     // (v/6) ∫ G(V, W) vol
  ScalarEH,     // ((n−2)/12) v ∫ f R vol
  Volume,       // v ∫ f vol
  FormMetric,   // 2^m v ∫ g^{ab} v_a w_b vol
  FormEinstein  // 2^m (v/6) ∫ G^{ab} v_a w_b vol
};

/// Classical value of the spectral functional in the normalisation of the
/// engine: ∫ ... vol is replaced by τ(√det g · ...), i.e. divided by (2π)^n.
/// V and W are the geometric components (or form components); f is the
/// localising function (absent: 1).
Complex functional_oracle(const Curvature& c, OracleKind kind, const std::vector<TorusElement>& V,
                          const std::vector<TorusElement>& W,
                          const TorusElement* f = nullptr);

/// Fourier data of g^{ab} (row-major) and of g^{ab}Γ^c_ab (index c); used
/// for Laplace-type operators with a general metric.
struct MetricFourier {
  std::vector<TorusElement> metric;
  std::vector<TorusElement> inverse;
  std::vector<TorusElement> christoffel_trace;
  TorusElement sqrt_det;
  double tail = 0.0;
};
MetricFourier metric_fourier(const MetricData& metric, int m = 0);

}  // namespace wodzicki
