#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "stabop/rational.hpp"
#include "stabop/spectrum.hpp"

namespace stabop {

// Homogeneous polynomial in ambient coordinates, stored as an exact
// coefficient table over monomial exponent vectors.
struct poly_term {
  std::vector<int> exps;
  rational coef;
};

struct harmonic_polynomial {
  int ambient_dim = 0;
  int degree = 0;
  std::vector<poly_term> terms;

  double eval(std::span<const double> x) const {
    double acc = 0.0;
    for (const auto& t : terms) {
      double mono = t.coef.to_double();
      for (int i = 0; i < ambient_dim; ++i)
        for (int e = 0; e < t.exps[i]; ++e) mono *= x[i];
      acc += mono;
    }
    return acc;
  }

  // ambient gradient; for tangent directions this is also the differential of
  // the restriction to the sphere
  std::vector<double> gradient(std::span<const double> x) const {
    std::vector<double> g(ambient_dim, 0.0);
    for (const auto& t : terms)
      for (int i = 0; i < ambient_dim; ++i) {
        if (t.exps[i] == 0) continue;
        double mono = t.coef.to_double() * t.exps[i];
        for (int j = 0; j < ambient_dim; ++j) {
          const int e = t.exps[j] - (j == i ? 1 : 0);
          for (int r = 0; r < e; ++r) mono *= x[j];
        }
        g[i] += mono;
      }
    return g;
  }

  // u . (ambient Hessian) . v
  double second_directional(std::span<const double> x, std::span<const double> u,
                            std::span<const double> v) const {
    double acc = 0.0;
    for (int i = 0; i < ambient_dim; ++i)
      for (int j = 0; j < ambient_dim; ++j) {
        double hij = 0.0;
        for (const auto& t : terms) {
          std::vector<int> e = t.exps;
          long long factor = e[i];
          if (factor == 0) continue;
          --e[i];
          factor *= e[j];
          if (factor == 0) continue;
          --e[j];
          double mono = t.coef.to_double() * static_cast<double>(factor);
          for (int r = 0; r < ambient_dim; ++r)
            for (int q = 0; q < e[r]; ++q) mono *= x[r];
          hij += mono;
        }
        acc += u[i] * hij * v[j];
      }
    return acc;
  }
};

inline harmonic_polynomial constant_one(int ambient_dim) {
  harmonic_polynomial p;
  p.ambient_dim = ambient_dim;
  p.degree = 0;
  p.terms.push_back({std::vector<int>(ambient_dim, 0), rational(1)});
  return p;
}

namespace detail {

inline std::vector<std::vector<int>> monomial_exponents(int dim, int degree) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(dim, 0);
  const auto rec = [&](auto&& self, int i, int rest) -> void {
    if (i == dim - 1) {
      cur[i] = rest;
      out.push_back(cur);
      return;
    }
    for (int e = rest; e >= 0; --e) {
      cur[i] = e;
      self(self, i + 1, rest - e);
    }
  };
  rec(rec, 0, degree);
  return out;
}

}  // namespace detail

// Symbolic ambient Laplacian of the coefficient table (degree drops by 2).
inline harmonic_polynomial ambient_laplacian(const harmonic_polynomial& p) {
  harmonic_polynomial out;
  out.ambient_dim = p.ambient_dim;
  out.degree = p.degree >= 2 ? p.degree - 2 : 0;
  const auto rows = detail::monomial_exponents(p.ambient_dim, out.degree);
  if (p.degree < 2) return out;
  std::vector<rational> coefs(rows.size(), rational(0));
  for (const auto& t : p.terms)
    for (int i = 0; i < p.ambient_dim; ++i) {
      if (t.exps[i] < 2) continue;
      std::vector<int> e = t.exps;
      e[i] -= 2;
      const rational c = t.coef * rational(static_cast<long long>(t.exps[i]) * (t.exps[i] - 1));
      for (std::size_t r = 0; r < rows.size(); ++r)
        if (rows[r] == e) {
          coefs[r] += c;
          break;
        }
    }
  for (std::size_t r = 0; r < rows.size(); ++r)
    if (!coefs[r].is_zero()) out.terms.push_back({rows[r], coefs[r]});
  return out;
}

// Exact basis of the degree-k harmonic homogeneous polynomials in m+1
// variables: the nullspace of the monomial Laplacian map, computed by
// rational Gauss-Jordan elimination. The basis size equals harmonic_dim(m, k)
// by construction; generated, never hard-coded.
inline std::vector<harmonic_polynomial> harmonic_basis(int m, int k) {
  if (m < 1 || k < 0) throw std::invalid_argument("harmonic_basis: need m >= 1, k >= 0");
  const int d = m + 1;
  const auto cols = detail::monomial_exponents(d, k);
  std::vector<harmonic_polynomial> basis;

  const auto emit = [&](const std::vector<rational>& coefs) {
    harmonic_polynomial p;
    p.ambient_dim = d;
    p.degree = k;
    for (std::size_t c = 0; c < cols.size(); ++c)
      if (!coefs[c].is_zero()) p.terms.push_back({cols[c], coefs[c]});
    basis.push_back(std::move(p));
  };

  if (k < 2) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      std::vector<rational> v(cols.size(), rational(0));
      v[c] = rational(1);
      emit(v);
    }
    return basis;
  }

  const auto rows = detail::monomial_exponents(d, k - 2);
  std::vector<std::vector<rational>> mat(rows.size(),
                                         std::vector<rational>(cols.size(), rational(0)));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (int i = 0; i < d; ++i) {
      std::vector<int> alpha = rows[r];
      alpha[i] += 2;
      for (std::size_t c = 0; c < cols.size(); ++c)
        if (cols[c] == alpha) {
          mat[r][c] = rational(static_cast<long long>(alpha[i]) * (alpha[i] - 1));
          break;
        }
    }

  // Gauss-Jordan to reduced row echelon form
  std::vector<std::size_t> pivot_col;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols.size() && rank < rows.size(); ++col) {
    std::size_t pr = rank;
    while (pr < rows.size() && mat[pr][col].is_zero()) ++pr;
    if (pr == rows.size()) continue;
    std::swap(mat[pr], mat[rank]);
    const rational inv = rational(1) / mat[rank][col];
    for (auto& v : mat[rank]) v *= inv;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || mat[r][col].is_zero()) continue;
      const rational f = mat[r][col];
      for (std::size_t c = col; c < cols.size(); ++c) mat[r][c] -= f * mat[rank][c];
    }
    pivot_col.push_back(col);
    ++rank;
  }

  std::vector<bool> is_pivot(cols.size(), false);
  for (auto c : pivot_col) is_pivot[c] = true;
  for (std::size_t free_col = 0; free_col < cols.size(); ++free_col) {
    if (is_pivot[free_col]) continue;
    std::vector<rational> v(cols.size(), rational(0));
    v[free_col] = rational(1);
    for (std::size_t r = 0; r < rank; ++r) v[pivot_col[r]] = -mat[r][free_col];
    emit(v);
  }
  return basis;
}

}  // namespace stabop
