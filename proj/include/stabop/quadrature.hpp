#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "stabop/manifold.hpp"

namespace stabop {

struct quad_rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Legendre on [-1, 1], nodes symmetrized. Exact for polynomials of
// degree <= 2n - 1.
inline quad_rule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  quad_rule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Newton from the Chebyshev-angle estimate
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.weights[i] = w;
    rule.nodes[n - 1 - i] = x;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

// Gauss-Chebyshev (second kind): integrates f(u) (1-u^2)^{1/2} exactly for
// polynomial f of degree <= 2n - 1; closed-form nodes and weights.
inline quad_rule gauss_chebyshev2(int n) {
  if (n < 1) throw std::invalid_argument("gauss_chebyshev2: n must be >= 1");
  quad_rule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    const double theta = std::numbers::pi * (i + 1) / (n + 1);
    rule.nodes[i] = std::cos(theta);
    const double s = std::sin(theta);
    rule.weights[i] = std::numbers::pi / (n + 1) * s * s;
  }
  return rule;
}

// One quadrature node on an embedded factor: ambient coordinates and weight.
struct factor_node {
  std::vector<double> x;
  double w = 0.0;
};

// Product rule on S^m(radius) in spherical coordinates
//   x0 = r cos t1, x1 = r sin t1 cos t2, ..., x_m = r sin t1 ... sin t_{m-1} sin phi,
// area element r^m prod_j sin^{m-j}(t_j) dt_j dphi. Each polar cosine gets a
// Gauss rule matched to the parity of its leftover sine power (Legendre for
// even, Chebyshev-2 for odd), so polynomial integrands of degree <= ~2n-"m"
// integrate exactly; the azimuth is a uniform (offset) rule.
inline std::vector<factor_node> sphere_rule(int m, double radius, int n_polar,
                                            int n_azimuth) {
  if (m < 1) throw std::invalid_argument("sphere_rule: m must be >= 1");
  std::vector<factor_node> nodes;
  double radial = 1.0;
  for (int i = 0; i < m; ++i) radial *= radius;

  if (m == 1) {
    nodes.reserve(n_azimuth);
    for (int i = 0; i < n_azimuth; ++i) {
      const double phi = 2.0 * std::numbers::pi * (i + 0.5) / n_azimuth;
      nodes.push_back({{radius * std::cos(phi), radius * std::sin(phi)},
                       radial * 2.0 * std::numbers::pi / n_azimuth});
    }
    return nodes;
  }

  // 1D rules for the m-1 polar angles: leftover sine power p = m - j - 1
  std::vector<quad_rule> polar(m - 1);
  for (int j = 1; j <= m - 1; ++j) {
    const int p = m - j - 1;
    quad_rule base = (p % 2 == 0) ? gauss_legendre(n_polar) : gauss_chebyshev2(n_polar);
    const int poly_power = (p % 2 == 0) ? p / 2 : (p - 1) / 2; // (1-u^2)^poly_power stays in the weight
    for (std::size_t i = 0; i < base.nodes.size(); ++i) {
      const double u = base.nodes[i];
      double extra = 1.0;
      for (int q = 0; q < poly_power; ++q) extra *= 1.0 - u * u;
      base.weights[i] *= extra;
    }
    polar[j - 1] = std::move(base);
  }

  std::vector<int> idx(m - 1, 0);
  for (;;) {
    // cartesian coordinates and combined weight for this polar multi-index
    double w = radial;
    double sin_prod = 1.0;
    std::vector<double> x(m + 1, 0.0);
    for (int j = 0; j < m - 1; ++j) {
      const double u = polar[j].nodes[idx[j]];
      w *= polar[j].weights[idx[j]];
      x[j] = radius * sin_prod * u;
      sin_prod *= std::sqrt(std::max(0.0, 1.0 - u * u));
    }
    for (int i = 0; i < n_azimuth; ++i) {
      const double phi = 2.0 * std::numbers::pi * (i + 0.5) / n_azimuth;
      std::vector<double> pt = x;
      pt[m - 1] = radius * sin_prod * std::cos(phi);
      pt[m] = radius * sin_prod * std::sin(phi);
      nodes.push_back({std::move(pt), w * 2.0 * std::numbers::pi / n_azimuth});
    }
    int j = m - 2;
    while (j >= 0 && ++idx[j] == static_cast<int>(polar[j].nodes.size())) idx[j--] = 0;
    if (j < 0) break;
  }
  return nodes;
}

namespace detail {

inline double pairwise_sum(std::vector<double>& buf, std::size_t lo, std::size_t hi) {
  if (hi - lo <= 8) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += buf[i];
    return s;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum(buf, lo, mid) + pairwise_sum(buf, mid, hi);
}

}  // namespace detail

// Tensor-product quadrature over all factors of a product manifold. The cost
// guard rejects total dimension > 4.
class product_quadrature {
public:
  product_quadrature(const product_manifold& m, int n_polar, int n_azimuth) {
    if (m.total_dim() > 4)
      throw std::invalid_argument("product_quadrature: total dimension > 4 rejected");
    for (const auto& f : m.factors())
      factor_nodes_.push_back(
          sphere_rule(f.dim, std::sqrt(f.radius_sq.to_double()), n_polar, n_azimuth));
  }

  std::size_t size() const {
    std::size_t n = 1;
    for (const auto& fn : factor_nodes_) n *= fn.size();
    return n;
  }

  // f receives per-factor ambient coordinates; accumulation is pairwise in a
  // fixed traversal order, so results do not depend on scheduling.
  template <class F>
  double integrate(F&& f) const {
    std::vector<double> contributions;
    contributions.reserve(size());
    std::vector<std::vector<double>> pt(factor_nodes_.size());
    const auto rec = [&](auto&& self, std::size_t i, double w) -> void {
      if (i == factor_nodes_.size()) {
        contributions.push_back(w * f(pt));
        return;
      }
      for (const auto& node : factor_nodes_[i]) {
        pt[i] = node.x;
        self(self, i + 1, w * node.w);
      }
    };
    rec(rec, 0, 1.0);
    return detail::pairwise_sum(contributions, 0, contributions.size());
  }

private:
  std::vector<std::vector<factor_node>> factor_nodes_;
};

// Integral of a black-box function over a product manifold of total
// dimension <= 4.
template <class F>
double quadrature_integral(const product_manifold& m, F&& f, int n_polar = 16,
                           int n_azimuth = 32) {
  return product_quadrature(m, n_polar, n_azimuth).integrate(std::forward<F>(f));
}

}  // namespace stabop
