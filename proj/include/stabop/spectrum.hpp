#pragma once

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <vector>

#include "stabop/manifold.hpp"
#include "stabop/rational.hpp"

namespace stabop {

// dim of the degree-k spherical harmonics on S^m: C(k+m, m) - C(k+m-2, m),
// terms with k < 2 dropped. Covers circles too (m = 1 gives 1, 2, 2, ...).
inline long long harmonic_dim(int m, int k) {
  if (m < 1) throw std::invalid_argument("harmonic_dim: m must be >= 1");
  if (k < 0) throw std::invalid_argument("harmonic_dim: k must be >= 0");
  const auto binom = [](long long n, long long r) -> __int128 {
    if (r < 0 || r > n) return 0;
    r = std::min(r, n - r);
    constexpr __int128 guard = static_cast<__int128>(1) << 100;
    __int128 v = 1;
    for (long long i = 1; i <= r; ++i) {
      if (v > guard / (n - r + i))
        throw std::overflow_error("harmonic_dim: binomial exceeds the integer range");
      v = v * (n - r + i) / i;
    }
    return v;
  };
  const __int128 d = binom(k + m, m) - binom(k + m - 2, m);
  if (d > std::numeric_limits<long long>::max())
    throw std::overflow_error("harmonic_dim: multiplicity exceeds 64-bit range");
  return static_cast<long long>(d);
}

// One Laplace level of a single factor. eigenvalue = k(k+m-1)/rho^2, which for
// a circle (m = 1) reduces to k^2/rho^2.
struct factor_mode {
  int level = 0;
  rational eigenvalue;
  long long multiplicity = 1;
};

inline factor_mode factor_mode_at(const sphere_factor& f, int k) {
  if (k < 0) throw std::invalid_argument("factor_mode_at: level must be >= 0");
  factor_mode fm;
  fm.level = k;
  fm.eigenvalue = rational(static_cast<long long>(k) * (k + f.dim - 1)) / f.radius_sq;
  fm.multiplicity = harmonic_dim(f.dim, k);
  return fm;
}

// A joint Laplace eigenmode of the product: one level per factor. The total
// eigenvalue is the sum of the per-factor eigenvalues, the multiplicity the
// product of the per-factor harmonic dimensions.
struct joint_eigenvalue {
  std::vector<int> levels;
  std::vector<rational> components;
  rational total;
  long long multiplicity = 1;

  bool is_constant() const {
    for (int k : levels)
      if (k != 0) return false;
    return true;
  }

  friend bool operator==(const joint_eigenvalue& a, const joint_eigenvalue& b) {
    return a.levels == b.levels;
  }
};

// Every joint mode with total <= cutoff, exactly once, sorted by total
// (lexicographic level order within equal totals). Terminates because each
// factor's eigenvalues strictly increase with its level.
inline std::vector<joint_eigenvalue> enumerate_joint(const product_manifold& m,
                                                     const rational& cutoff) {
  if (cutoff < rational(0))
    throw std::invalid_argument("enumerate_joint: cutoff must be >= 0");
  const auto& fs = m.factors();
  std::vector<joint_eigenvalue> out;
  joint_eigenvalue cur;
  cur.levels.resize(fs.size());
  cur.components.resize(fs.size());

  const auto recurse = [&](auto&& self, std::size_t i, const rational& used,
                           long long mult) -> void {
    if (i == fs.size()) {
      joint_eigenvalue j = cur;
      j.total = used;
      j.multiplicity = mult;
      out.push_back(std::move(j));
      return;
    }
    for (int k = 0;; ++k) {
      const factor_mode fm = factor_mode_at(fs[i], k);
      const rational next = used + fm.eigenvalue;
      if (next > cutoff) break;
      cur.levels[i] = k;
      cur.components[i] = fm.eigenvalue;
      const __int128 prod = static_cast<__int128>(mult) * fm.multiplicity;
      if (prod > std::numeric_limits<long long>::max())
        throw std::overflow_error("enumerate_joint: multiplicity exceeds 64-bit range");
      self(self, i + 1, next, static_cast<long long>(prod));
    }
  };
  recurse(recurse, 0, rational(0), 1);

  std::stable_sort(out.begin(), out.end(),
                   [](const joint_eigenvalue& a, const joint_eigenvalue& b) {
                     return a.total < b.total;
                   });
  return out;
}

// Smallest nonzero total eigenvalue: the least first-level eigenvalue over
// the factors.
inline rational first_nonzero_eigenvalue(const product_manifold& m) {
  rational best;
  bool first = true;
  for (const auto& f : m.factors()) {
    const rational e = factor_mode_at(f, 1).eigenvalue;
    if (first || e < best) {
      best = e;
      first = false;
    }
  }
  return best;
}

}  // namespace stabop
