#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "stabop/harmonics.hpp"
#include "stabop/operators.hpp"
#include "stabop/quadrature.hpp"
#include "stabop/rng.hpp"

namespace stabop {

// A point of the embedded product: one ambient vector per factor, each of
// norm rho_i. Tangent vectors share the representation (component i lies in
// the tangent space of factor i).
using point_coords = std::vector<std::vector<double>>;

namespace detail {

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

}  // namespace detail

// Point at arclength |w| along the great circle from p in direction w/|w|,
// for tangent w (p.w = 0). Renormalized back onto the sphere, so the radius
// is exact to ~1e-16 relative.
inline std::vector<double> sphere_exp(double radius, std::span<const double> p,
                                      std::span<const double> w) {
  const double len = detail::norm(w);
  std::vector<double> out(p.begin(), p.end());
  if (len == 0.0) return out;
  const double theta = len / radius;
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = c * p[i] + radius * s * (w[i] / len);
  const double scale = radius / detail::norm(out);
  for (auto& v : out) v *= scale;
  return out;
}

// Unit-speed geodesic of one factor evaluated at arclength t; v is any
// nonzero tangent vector at p giving the direction.
inline std::vector<double> geodesic(const sphere_factor& f, std::span<const double> p,
                                    std::span<const double> v, double t) {
  const double radius = std::sqrt(f.radius_sq.to_double());
  if (p.size() != static_cast<std::size_t>(f.dim + 1) || v.size() != p.size())
    throw std::invalid_argument("geodesic: wrong ambient dimension");
  if (std::fabs(detail::norm(p) - radius) > 1e-9 * radius)
    throw std::invalid_argument("geodesic: point not on the sphere");
  const double vn = detail::norm(v);
  if (vn == 0.0) throw std::invalid_argument("geodesic: zero direction");
  if (std::fabs(detail::dot(p, v)) > 1e-9 * radius * vn)
    throw std::invalid_argument("geodesic: direction not tangent");
  std::vector<double> w(v.begin(), v.end());
  for (auto& c : w) c *= t / vn;
  return sphere_exp(radius, p, w);
}

// Exponential map of the product at p applied to t * dir (factor-wise great
// circles; dir need not be unit).
inline point_coords product_exp(const product_manifold& m, const point_coords& p,
                                const point_coords& dir, double t) {
  point_coords out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    std::vector<double> w = dir[i];
    for (auto& c : w) c *= t;
    out[i] = sphere_exp(std::sqrt(m.factors()[i].radius_sq.to_double()), p[i], w);
  }
  return out;
}

// Orthonormal tangent frame at p; frame vector j lives entirely in factor
// factor_of[j]. Euclidean-unit tangent vectors of the embedding are unit for
// the round metric, so this is a g-orthonormal frame.
struct tangent_frame {
  std::vector<point_coords> dirs;
  std::vector<std::size_t> factor_of;
};

namespace detail {

inline point_coords zero_tangent(const product_manifold& m) {
  point_coords z;
  for (const auto& f : m.factors()) z.emplace_back(f.dim + 1, 0.0);
  return z;
}

inline void append_factor_frame(const product_manifold& m, const point_coords& p,
                                std::size_t fi, std::vector<std::vector<double>> raw,
                                tangent_frame& frame) {
  const auto& f = m.factors()[fi];
  const double radius = std::sqrt(f.radius_sq.to_double());
  std::vector<double> phat = p[fi];
  for (auto& c : phat) c /= radius;
  std::vector<std::vector<double>> accepted;
  for (auto& cand : raw) {
    const double pc = dot(phat, cand);
    for (std::size_t i = 0; i < cand.size(); ++i) cand[i] -= pc * phat[i];
    for (const auto& a : accepted) {
      const double ac = dot(a, cand);
      for (std::size_t i = 0; i < cand.size(); ++i) cand[i] -= ac * a[i];
    }
    const double n = norm(cand);
    if (n < 1e-6) continue;
    for (auto& c : cand) c /= n;
    accepted.push_back(cand);
    if (accepted.size() == static_cast<std::size_t>(f.dim)) break;
  }
  if (accepted.size() != static_cast<std::size_t>(f.dim))
    throw std::runtime_error("tangent frame: degenerate construction");
  for (auto& a : accepted) {
    point_coords dir = zero_tangent(m);
    dir[fi] = std::move(a);
    frame.dirs.push_back(std::move(dir));
    frame.factor_of.push_back(fi);
  }
}

}  // namespace detail

inline tangent_frame orthonormal_frame(const product_manifold& m, const point_coords& p) {
  tangent_frame frame;
  for (std::size_t fi = 0; fi < m.factor_count(); ++fi) {
    const int d = m.factors()[fi].dim + 1;
    std::vector<std::vector<double>> axes;
    for (int a = 0; a < d; ++a) {
      std::vector<double> e(d, 0.0);
      e[a] = 1.0;
      axes.push_back(std::move(e));
    }
    detail::append_factor_frame(m, p, fi, std::move(axes), frame);
  }
  return frame;
}

inline tangent_frame randomized_frame(const product_manifold& m, const point_coords& p,
                                      splitmix64& rng) {
  tangent_frame frame;
  for (std::size_t fi = 0; fi < m.factor_count(); ++fi) {
    const int d = m.factors()[fi].dim + 1;
    std::vector<std::vector<double>> raw;
    for (int a = 0; a < 2 * d; ++a) {
      std::vector<double> v(d);
      for (auto& c : v) c = rng.gaussian();
      raw.push_back(std::move(v));
    }
    detail::append_factor_frame(m, p, fi, std::move(raw), frame);
  }
  return frame;
}

inline point_coords random_point(const product_manifold& m, splitmix64& rng) {
  point_coords p;
  for (const auto& f : m.factors()) {
    const double radius = std::sqrt(f.radius_sq.to_double());
    std::vector<double> v(f.dim + 1);
    double n = 0.0;
    do {
      for (auto& c : v) c = rng.gaussian();
      n = detail::norm(v);
    } while (n < 1e-6);
    for (auto& c : v) c *= radius / n;
    p.push_back(std::move(v));
  }
  return p;
}

// ---------------------------------------------------------------------------
// Finite differences. Second differences along geodesics through p recover
// Hessian diagonal entries exactly to O(eps^2) because geodesics kill the
// first-order connection term; off-diagonal entries come from polarization.
// richardson2 combines F(eps) and F(eps/2) into an O(eps^4) value.
// ---------------------------------------------------------------------------

template <class G>
double richardson2(G&& g, double eps) {
  return (4.0 * g(eps / 2.0) - g(eps)) / 3.0;
}

template <class F>
double fd_second_derivative(const product_manifold& m, F&& phi, const point_coords& p,
                            const point_coords& dir, double eps) {
  const double fp = phi(product_exp(m, p, dir, eps));
  const double fm = phi(product_exp(m, p, dir, -eps));
  const double f0 = phi(p);
  return (fp - 2.0 * f0 + fm) / (eps * eps);
}

template <class F>
double fd_directional_derivative(const product_manifold& m, F&& phi, const point_coords& p,
                                 const point_coords& dir, double eps) {
  const double fp = phi(product_exp(m, p, dir, eps));
  const double fm = phi(product_exp(m, p, dir, -eps));
  return (fp - fm) / (2.0 * eps);
}

template <class F>
double fd_laplacian(const product_manifold& m, F&& phi, const point_coords& p,
                    const tangent_frame& frame, double eps) {
  double acc = 0.0;
  for (const auto& dir : frame.dirs) acc += fd_second_derivative(m, phi, p, dir, eps);
  return acc;
}

template <class F>
double fd_partial_laplacian(const product_manifold& m, F&& phi, const point_coords& p,
                            const tangent_frame& frame, std::size_t factor_index,
                            double eps) {
  double acc = 0.0;
  for (std::size_t j = 0; j < frame.dirs.size(); ++j)
    if (frame.factor_of[j] == factor_index)
      acc += fd_second_derivative(m, phi, p, frame.dirs[j], eps);
  return acc;
}

namespace detail {

inline point_coords combine_dirs(const point_coords& a, const point_coords& b,
                                 double ca, double cb) {
  point_coords out = a;
  for (std::size_t i = 0; i < out.size(); ++i)
    for (std::size_t j = 0; j < out[i].size(); ++j)
      out[i][j] = ca * a[i][j] + cb * b[i][j];
  return out;
}

}  // namespace detail

template <class F>
double fd_hessian_entry(const product_manifold& m, F&& phi, const point_coords& p,
                        const tangent_frame& frame, std::size_t i, std::size_t j,
                        double eps) {
  if (i == j) return fd_second_derivative(m, phi, p, frame.dirs[i], eps);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const auto plus = detail::combine_dirs(frame.dirs[i], frame.dirs[j], inv_sqrt2, inv_sqrt2);
  const auto minus = detail::combine_dirs(frame.dirs[i], frame.dirs[j], inv_sqrt2, -inv_sqrt2);
  return (fd_second_derivative(m, phi, p, plus, eps) -
          fd_second_derivative(m, phi, p, minus, eps)) /
         2.0;
}

template <class F>
std::vector<std::vector<double>> fd_hessian(const product_manifold& m, F&& phi,
                                            const point_coords& p,
                                            const tangent_frame& frame, double eps) {
  const std::size_t n = frame.dirs.size();
  std::vector<std::vector<double>> h(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const double v = fd_hessian_entry(m, phi, p, frame, i, j, eps);
      h[i][j] = v;
      h[j][i] = v;
    }
  return h;
}

// ---------------------------------------------------------------------------
// Separated eigenfunctions: products of one harmonic polynomial per factor,
// restricted to the embedded product.
// ---------------------------------------------------------------------------

struct separated_eigenfunction {
  std::vector<int> levels;
  std::vector<harmonic_polynomial> polys; // one per factor
  joint_eigenvalue mode;                  // exact eigenvalue data

  double eval(const point_coords& p) const {
    double acc = 1.0;
    for (std::size_t i = 0; i < polys.size(); ++i) acc *= polys[i].eval(p[i]);
    return acc;
  }
};

inline separated_eigenfunction make_separated_eigenfunction(const product_manifold& m,
                                                            const std::vector<int>& levels) {
  if (levels.size() != m.factor_count())
    throw std::invalid_argument("make_separated_eigenfunction: level count mismatch");
  separated_eigenfunction f;
  f.levels = levels;
  f.mode.levels = levels;
  f.mode.total = rational(0);
  f.mode.multiplicity = 1;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const auto& fac = m.factors()[i];
    const auto fm = factor_mode_at(fac, levels[i]);
    f.mode.components.push_back(fm.eigenvalue);
    f.mode.total += fm.eigenvalue;
    f.mode.multiplicity *= fm.multiplicity;
    f.polys.push_back(levels[i] == 0 ? constant_one(fac.dim + 1)
                                     : harmonic_basis(fac.dim, levels[i]).front());
  }
  return f;
}

// A(phi)(p) by finite differences: the Laplacian and the per-factor partial
// Laplacians are Richardson-refined second differences; Lap^2 phi = L^2 phi
// comes from the eigenfunction structure (fourth-order differences would be
// noise-dominated).
inline double oracle_apply_A(const geometry_data& geom, const separated_eigenfunction& phi,
                             const point_coords& p, double eps) {
  const auto& m = geom.manifold;
  const auto frame = orthonormal_frame(m, p);
  const auto f = [&](const point_coords& q) { return phi.eval(q); };
  const double lap = richardson2(
      [&](double e) { return fd_laplacian(m, f, p, frame, e); }, eps);
  const double L = phi.mode.total.to_double();
  double ricci = 0.0;
  for (std::size_t i = 0; i < m.factor_count(); ++i) {
    const double lap_i = richardson2(
        [&](double e) { return fd_partial_laplacian(m, f, p, frame, i, e); }, eps);
    ricci += geom.ricci_eigs[i].to_double() * lap_i;
  }
  const double fp = phi.eval(p);
  return (geom.n - 1) * L * L * fp + 2.0 * geom.s.to_double() * lap - ricci +
         geom.ricci_norm_sq.to_double() * fp;
}

// ---------------------------------------------------------------------------
// Quadrature verifications (total dimension <= 4).
// ---------------------------------------------------------------------------

struct oracle_options {
  double epsilon = 1e-3;
  int n_polar = 12;
  int n_azimuth = 24;
  double tolerance = 1e-4;
};

struct identity_report {
  std::string check;
  double lhs = 0.0;       // finite-difference + quadrature route
  double rhs = 0.0;       // exact spectral route
  double phi_norm_sq = 0.0;
  double scale = 0.0;     // magnitude the relative error is measured against
  double rel_error = 0.0;
  bool pass = false;
  std::vector<std::pair<std::string, double>> breakdown;
};

namespace detail {

// sum of |term| of the symbol: an honest magnitude scale even when the
// symbol itself cancels to zero
inline double symbol_magnitude(const geometry_data& geom, const joint_eigenvalue& mode) {
  const double L = mode.total.to_double();
  double ricci = 0.0;
  for (std::size_t i = 0; i < mode.components.size(); ++i)
    ricci += std::fabs(geom.ricci_eigs[i].to_double() * mode.components[i].to_double());
  return (geom.n - 1) * L * L + 2.0 * std::fabs(geom.s.to_double()) * L + ricci +
         geom.ricci_norm_sq.to_double();
}

}  // namespace detail

// Checks integral |s'*phi|^2 = symbol(A, mode) * integral phi^2, with
// s'*phi = Hess phi - (Lap phi) g - phi r evaluated pointwise from
// Richardson-refined finite differences and integrated by the product rule.
inline identity_report verify_lstar_identity(const geometry_data& geom,
                                             const std::vector<int>& levels,
                                             const oracle_options& opts = {}) {
  const auto& m = geom.manifold;
  const auto phi = make_separated_eigenfunction(m, levels);
  const auto f = [&](const point_coords& q) { return phi.eval(q); };
  const product_quadrature rule(m, opts.n_polar, opts.n_azimuth);

  const double norm_sq = rule.integrate([&](const point_coords& q) {
    const double v = phi.eval(q);
    return v * v;
  });

  const double lhs = rule.integrate([&](const point_coords& q) {
    const auto frame = orthonormal_frame(m, q);
    const std::size_t n = frame.dirs.size();
    std::vector<std::vector<double>> h(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        const double v = richardson2(
            [&](double e) { return fd_hessian_entry(m, f, q, frame, i, j, e); },
            opts.epsilon);
        h[i][j] = v;
        h[j][i] = v;
      }
    double trace = 0.0;
    for (std::size_t i = 0; i < n; ++i) trace += h[i][i];
    const double fq = phi.eval(q);
    double frob = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double t = h[i][j];
        if (i == j) t -= trace + fq * geom.ricci_eigs[frame.factor_of[i]].to_double();
        frob += t * t;
      }
    return frob;
  });

  const double q_val = symbol(geom, operator_kind::A(), phi.mode).to_double();
  const double rhs = q_val * norm_sq;

  identity_report rep;
  rep.check = "lstar_identity";
  rep.lhs = lhs;
  rep.rhs = rhs;
  rep.phi_norm_sq = norm_sq;
  rep.scale = std::max(detail::symbol_magnitude(geom, phi.mode) * norm_sq, 1e-300);
  rep.rel_error = std::fabs(lhs - rhs) / rep.scale;
  rep.pass = rep.rel_error <= opts.tolerance;
  rep.breakdown = {{"symbol", q_val}, {"norm_sq", norm_sq}};
  return rep;
}

// Checks the four integrals of integral{ n (Lap phi)^2 - 2s |dphi|^2
// - |Hess phi|^2 + phi^2 |r|^2 } against the exact per-mode totals and their
// sum against symbol(A, mode) * integral phi^2.
inline identity_report verify_bochner(const geometry_data& geom,
                                      const std::vector<int>& levels,
                                      const oracle_options& opts = {}) {
  const auto& m = geom.manifold;
  const auto phi = make_separated_eigenfunction(m, levels);
  const auto f = [&](const point_coords& q) { return phi.eval(q); };
  const product_quadrature rule(m, opts.n_polar, opts.n_azimuth);

  const double norm_sq = rule.integrate([&](const point_coords& q) {
    const double v = phi.eval(q);
    return v * v;
  });

  double lap_sq = 0.0, grad_sq = 0.0, hess_sq = 0.0;
  lap_sq = rule.integrate([&](const point_coords& q) {
    const auto frame = orthonormal_frame(m, q);
    const double lap = richardson2(
        [&](double e) { return fd_laplacian(m, f, q, frame, e); }, opts.epsilon);
    return lap * lap;
  });
  grad_sq = rule.integrate([&](const point_coords& q) {
    const auto frame = orthonormal_frame(m, q);
    double acc = 0.0;
    for (const auto& dir : frame.dirs) {
      const double g = richardson2(
          [&](double e) { return fd_directional_derivative(m, f, q, dir, e); },
          opts.epsilon);
      acc += g * g;
    }
    return acc;
  });
  hess_sq = rule.integrate([&](const point_coords& q) {
    const auto frame = orthonormal_frame(m, q);
    double acc = 0.0;
    const std::size_t n = frame.dirs.size();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        const double v = richardson2(
            [&](double e) { return fd_hessian_entry(m, f, q, frame, i, j, e); },
            opts.epsilon);
        acc += (i == j ? 1.0 : 2.0) * v * v;
      }
    return acc;
  });

  const auto analytic = bochner_identity_terms(geom, phi.mode);
  const double a_lap = analytic.laplacian_term.to_double() * norm_sq;
  const double a_grad = analytic.gradient_term.to_double() * norm_sq;
  const double a_hess = analytic.hessian_term.to_double() * norm_sq;
  const double a_zero = analytic.zeroth_term.to_double() * norm_sq;

  const double f_lap = geom.n * lap_sq;
  const double f_grad = -2.0 * geom.s.to_double() * grad_sq;
  const double f_hess = -hess_sq;
  const double f_zero = geom.ricci_norm_sq.to_double() * norm_sq;

  identity_report rep;
  rep.check = "bochner";
  rep.lhs = f_lap + f_grad + f_hess + f_zero;
  rep.rhs = symbol(geom, operator_kind::A(), phi.mode).to_double() * norm_sq;
  rep.phi_norm_sq = norm_sq;
  rep.scale = std::max(detail::symbol_magnitude(geom, phi.mode) * norm_sq, 1e-300);
  double worst = std::fabs(rep.lhs - rep.rhs) / rep.scale;
  const std::pair<double, double> pairs[] = {
      {f_lap, a_lap}, {f_grad, a_grad}, {f_hess, a_hess}, {f_zero, a_zero}};
  for (const auto& [fd, exact] : pairs)
    worst = std::max(worst, std::fabs(fd - exact) / rep.scale);
  rep.rel_error = worst;
  rep.pass = rep.rel_error <= opts.tolerance;
  rep.breakdown = {{"laplacian_fd", f_lap}, {"laplacian_exact", a_lap},
                   {"gradient_fd", f_grad}, {"gradient_exact", a_grad},
                   {"hessian_fd", f_hess},  {"hessian_exact", a_hess},
                   {"zeroth_fd", f_zero},   {"zeroth_exact", a_zero}};
  return rep;
}

// Least-squares slope of log(err) against log(eps); the convergence order of
// the finite-difference operators.
template <class ErrFn>
double convergence_slope(ErrFn&& err, std::span<const double> epsilons) {
  const std::size_t n = epsilons.size();
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (double eps : epsilons) {
    const double x = std::log(eps);
    const double y = std::log(std::max(err(eps), 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace stabop
