#pragma once

#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "stabop/bounds.hpp"

namespace stabop {

namespace detail {

// index-sliced parallel loop; results must be written to pre-sized slots so
// the outcome is independent of scheduling
template <class Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const std::size_t nthreads = std::min<std::size_t>(threads, n);
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  for (std::size_t t = 0; t < nthreads; ++t)
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < n; i += nthreads) fn(i);
    });
  for (auto& th : pool) th.join();
}

}  // namespace detail

// One-parameter family: a manifold pattern with '@' standing for the swept
// radius_sq, and a rational grid start..stop with `count` evenly spaced
// points.
struct sweep_spec {
  std::string pattern; // e.g. "S2(@)xS2(1)"
  rational start;
  rational stop;
  long long count = 0;
  std::optional<rational> k_override;
};

struct sweep_point {
  rational param;
  std::string manifold;
  rational nu_value;
  long long kernel_dim = 0;
  std::vector<bound_report> bounds;
};

inline product_manifold instantiate_pattern(const std::string& pattern,
                                            const rational& param) {
  const auto at = pattern.find('@');
  if (at == std::string::npos)
    throw std::invalid_argument("sweep pattern must contain '@': " + pattern);
  std::string spec = pattern;
  spec.replace(at, 1, param.str());
  return product_manifold::parse(spec);
}

inline std::vector<rational> sweep_grid(const rational& start, const rational& stop,
                                        long long count) {
  if (count < 0) throw std::invalid_argument("sweep grid: count must be >= 0");
  std::vector<rational> grid;
  if (count == 0) return grid;
  if (count == 1) {
    grid.push_back(start);
    return grid;
  }
  const rational step = (stop - start) / rational(count - 1);
  for (long long j = 0; j < count; ++j) grid.push_back(start + rational(j) * step);
  return grid;
}

inline std::vector<sweep_point> run_sweep(const sweep_spec& spec, int threads = 1) {
  const auto grid = sweep_grid(spec.start, spec.stop, spec.count);
  std::vector<sweep_point> out(grid.size());
  detail::parallel_for(grid.size(), threads, [&](std::size_t i) {
    const auto m = instantiate_pattern(spec.pattern, grid[i]);
    const auto g = geometry(m);
    const auto nr = nu(g);
    out[i].param = grid[i];
    out[i].manifold = m.str();
    out[i].nu_value = nr.value;
    out[i].kernel_dim = nr.kernel_dim;
    out[i].bounds = bound_suite(g, spec.k_override);
  });
  return out;
}

}  // namespace stabop
