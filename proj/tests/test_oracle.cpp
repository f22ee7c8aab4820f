#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "stabop/oracle.hpp"
#include "stabop/variational.hpp"

using namespace stabop;
using std::numbers::pi;

namespace {

// Analytic targets for the finite-difference operators on a separated
// eigenfunction, from the ambient polynomial calculus: restricted to the
// sphere, d phi(u) is the ambient directional derivative, and
// Hess(u, v) = u . H_amb . v - (k/rho^2) H(p) <u, v> for tangent u, v.
double partial_value(const separated_eigenfunction& f, const point_coords& p,
                     std::size_t skip) {
  double acc = 1.0;
  for (std::size_t i = 0; i < f.polys.size(); ++i)
    if (i != skip) acc *= f.polys[i].eval(p[i]);
  return acc;
}

double analytic_gradient(const separated_eigenfunction& f, const point_coords& p,
                         const tangent_frame& frame, std::size_t j) {
  const std::size_t a = frame.factor_of[j];
  const auto g = f.polys[a].gradient(p[a]);
  double du = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) du += g[i] * frame.dirs[j][a][i];
  return du * partial_value(f, p, a);
}

double analytic_hessian(const product_manifold& m, const separated_eigenfunction& f,
                        const point_coords& p, const tangent_frame& frame,
                        std::size_t i, std::size_t j) {
  const std::size_t a = frame.factor_of[i];
  const std::size_t b = frame.factor_of[j];
  if (a == b) {
    const auto& u = frame.dirs[i][a];
    const auto& v = frame.dirs[j][a];
    double uv = 0.0;
    for (std::size_t c = 0; c < u.size(); ++c) uv += u[c] * v[c];
    const double rho_sq = m.factors()[a].radius_sq.to_double();
    const double second = f.polys[a].second_directional(p[a], u, v) -
                          f.levels[a] / rho_sq * f.polys[a].eval(p[a]) * uv;
    return second * partial_value(f, p, a);
  }
  double rest = 1.0;
  for (std::size_t c = 0; c < f.polys.size(); ++c)
    if (c != a && c != b) rest *= f.polys[c].eval(p[c]);
  const auto ga = f.polys[a].gradient(p[a]);
  const auto gb = f.polys[b].gradient(p[b]);
  double da = 0.0, db = 0.0;
  for (std::size_t c = 0; c < ga.size(); ++c) da += ga[c] * frame.dirs[i][a][c];
  for (std::size_t c = 0; c < gb.size(); ++c) db += gb[c] * frame.dirs[j][b][c];
  return da * db * rest;
}

}  // namespace

TEST_CASE("geodesics on round factor spheres") {
  const sphere_factor s2{2, rational(1)};
  const std::vector<double> p{1.0, 0.0, 0.0};
  const std::vector<double> v{0.0, 0.0, 2.0}; // non-unit tangent

  SUBCASE("t = 0 returns the base point") {
    const auto q = geodesic(s2, p, v, 0.0);
    for (int i = 0; i < 3; ++i) CHECK(q[i] == doctest::Approx(p[i]).epsilon(1e-15));
  }
  SUBCASE("the great circle closes at 2 pi") {
    const auto q = geodesic(s2, p, v, 2.0 * pi);
    for (int i = 0; i < 3; ++i) CHECK(q[i] == doctest::Approx(p[i]).epsilon(1e-12));
  }
  SUBCASE("quarter turn from the equator reaches the pole") {
    const auto q = geodesic(s2, p, v, pi / 2);
    CHECK(std::fabs(q[0]) < 1e-14);
    CHECK(std::fabs(q[1]) < 1e-14);
    CHECK(q[2] == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("stays on the sphere") {
    splitmix64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
      const double t = rng.uniform(-4.0, 4.0);
      const auto q = geodesic(s2, p, v, t);
      CHECK(std::fabs(q[0] * q[0] + q[1] * q[1] + q[2] * q[2] - 1.0) < 1e-14);
    }
  }
  SUBCASE("rejects bad input") {
    CHECK_THROWS_AS(geodesic(s2, p, std::vector<double>{1.0, 0.0, 0.0}, 1.0),
                    std::invalid_argument); // not tangent
    CHECK_THROWS_AS(geodesic(s2, p, std::vector<double>{0.0, 0.0, 0.0}, 1.0),
                    std::invalid_argument); // zero direction
    CHECK_THROWS_AS(geodesic(s2, std::vector<double>{2.0, 0.0, 0.0}, v, 1.0),
                    std::invalid_argument); // off the sphere
  }
}

TEST_CASE("product exponential moves factors independently") {
  const auto m = product_manifold::parse("S2xS3");
  splitmix64 rng(5);
  const auto p = random_point(m, rng);
  auto dir = point_coords{{0.0, 0.0, 0.0}, {0.0, 0.0, 0.0, 0.0}};
  // tangent direction only in factor 0
  const auto frame = orthonormal_frame(m, p);
  dir = frame.dirs[0];
  const auto q = product_exp(m, p, dir, 0.3);
  for (int i = 0; i < 4; ++i) CHECK(q[1][i] == doctest::Approx(p[1][i]).epsilon(1e-15));
  double moved = 0.0;
  for (int i = 0; i < 3; ++i) moved += std::fabs(q[0][i] - p[0][i]);
  CHECK(moved > 0.1);
}

TEST_CASE("orthonormal frames are orthonormal and tangent") {
  const auto m = product_manifold::parse("S2(4)xS3");
  splitmix64 rng(9);
  for (int trial = 0; trial < 5; ++trial) {
    const auto p = random_point(m, rng);
    for (const auto& frame : {orthonormal_frame(m, p), randomized_frame(m, p, rng)}) {
      REQUIRE(frame.dirs.size() == 5);
      for (std::size_t i = 0; i < frame.dirs.size(); ++i) {
        const std::size_t fi = frame.factor_of[i];
        double pdot = 0.0, nrm = 0.0;
        for (std::size_t c = 0; c < p[fi].size(); ++c) {
          pdot += frame.dirs[i][fi][c] * p[fi][c];
          nrm += frame.dirs[i][fi][c] * frame.dirs[i][fi][c];
        }
        CHECK(std::fabs(pdot) < 1e-12);
        CHECK(nrm == doctest::Approx(1.0).epsilon(1e-12));
        for (std::size_t j = i + 1; j < frame.dirs.size(); ++j) {
          if (frame.factor_of[j] != fi) continue;
          double dd = 0.0;
          for (std::size_t c = 0; c < p[fi].size(); ++c)
            dd += frame.dirs[i][fi][c] * frame.dirs[j][fi][c];
          CHECK(std::fabs(dd) < 1e-12);
        }
      }
    }
  }
}

TEST_CASE("finite differences converge at second order") {
  const std::array<double, 3> eps{1e-2, 5e-3, 2.5e-3};
  splitmix64 rng(17);

  SUBCASE("laplacian on S2, level 2") {
    const auto m = product_manifold::parse("S2");
    const auto f = make_separated_eigenfunction(m, {2});
    const auto phi = [&](const point_coords& q) { return f.eval(q); };
    const auto p = random_point(m, rng);
    const auto frame = orthonormal_frame(m, p);
    const double target = -f.mode.total.to_double() * f.eval(p);
    const double slope = convergence_slope(
        [&](double e) { return std::fabs(fd_laplacian(m, phi, p, frame, e) - target); },
        eps);
    CHECK(slope == doctest::Approx(2.0).epsilon(0.15));
  }

  SUBCASE("partial laplacians, gradient, and hessian entries on S2 x S2") {
    // level 2 in both factors keeps every truncation term generic
    const auto m = product_manifold::parse("S2xS2");
    const auto f = make_separated_eigenfunction(m, {2, 2});
    const auto phi = [&](const point_coords& q) { return f.eval(q); };
    const auto p = random_point(m, rng);
    const auto frame = orthonormal_frame(m, p);

    for (std::size_t fi = 0; fi < 2; ++fi) {
      const double target = -f.mode.components[fi].to_double() * f.eval(p);
      const double slope = convergence_slope(
          [&](double e) {
            return std::fabs(fd_partial_laplacian(m, phi, p, frame, fi, e) - target);
          },
          eps);
      CHECK(slope == doctest::Approx(2.0).epsilon(0.15));
    }
    {
      const double target = analytic_gradient(f, p, frame, 1);
      const double slope = convergence_slope(
          [&](double e) {
            return std::fabs(fd_directional_derivative(m, phi, p, frame.dirs[1], e) -
                             target);
          },
          eps);
      CHECK(slope == doctest::Approx(2.0).epsilon(0.15));
    }
    // hessian: same-factor diagonal, same-factor off-diagonal, cross-factor
    const std::pair<std::size_t, std::size_t> entries[] = {{0, 0}, {0, 1}, {1, 3}};
    for (const auto& [i, j] : entries) {
      const double target = analytic_hessian(m, f, p, frame, i, j);
      const double slope = convergence_slope(
          [&](double e) {
            return std::fabs(fd_hessian_entry(m, phi, p, frame, i, j, e) - target);
          },
          eps);
      CAPTURE(i);
      CAPTURE(j);
      CHECK(slope == doctest::Approx(2.0).epsilon(0.15));
    }
  }
}

TEST_CASE("richardson refinement reaches fourth order") {
  const auto m = product_manifold::parse("S2");
  const auto f = make_separated_eigenfunction(m, {2});
  const auto phi = [&](const point_coords& q) { return f.eval(q); };
  splitmix64 rng(29);
  const auto p = random_point(m, rng);
  const auto frame = orthonormal_frame(m, p);
  const double target = -f.mode.total.to_double() * f.eval(p);
  const std::array<double, 3> eps{2e-2, 1e-2, 5e-3};
  const double slope = convergence_slope(
      [&](double e) {
        return std::fabs(
            richardson2([&](double ee) { return fd_laplacian(m, phi, p, frame, ee); }, e) -
            target);
      },
      eps);
  CHECK(slope > 3.3);
  CHECK(slope < 5.5);
}

TEST_CASE("laplacian is frame independent to FD accuracy") {
  const double eps = 1e-3;
  splitmix64 rng(31);
  for (const char* spec : {"S3", "S2xS2"}) {
    const auto m = product_manifold::parse(spec);
    std::vector<int> levels(m.factor_count(), 1);
    const auto f = make_separated_eigenfunction(m, levels);
    const auto phi = [&](const point_coords& q) { return f.eval(q); };
    const auto p = random_point(m, rng);
    double lo = 1e300, hi = -1e300;
    for (int trial = 0; trial < 10; ++trial) {
      const auto frame = randomized_frame(m, p, rng);
      const double v = fd_laplacian(m, phi, p, frame, eps);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    CAPTURE(spec);
    CHECK(hi - lo <= 10.0 * eps * eps);
  }
}

TEST_CASE("oracle application of A matches the exact symbol") {
  const double eps = 1e-3;
  splitmix64 rng(41);

  SUBCASE("S2 x S2 mode (1,0): ratio tends to 2") {
    const auto m = product_manifold::parse("S2xS2");
    const auto g = geometry(m);
    const auto f = make_separated_eigenfunction(m, {1, 0});
    for (int accepted = 0; accepted < 20;) {
      const auto p = random_point(m, rng);
      const double fp = f.eval(p);
      if (std::fabs(fp) < 0.2) continue; // stay away from the nodal set
      ++accepted;
      CHECK(oracle_apply_A(g, f, p, eps) / fp == doctest::Approx(2.0).epsilon(1e-6));
    }
  }
  SUBCASE("S2 x S3 kernel mode: A phi vanishes") {
    const auto m = product_manifold::parse("S2xS3");
    const auto g = geometry(m);
    const auto f = make_separated_eigenfunction(m, {1, 0});
    for (int trial = 0; trial < 20; ++trial) {
      const auto p = random_point(m, rng);
      CHECK(std::fabs(oracle_apply_A(g, f, p, eps)) < 1e-7);
    }
  }
  SUBCASE("constants: A phi = |r|^2 phi up to FD noise") {
    const auto m = product_manifold::parse("S2xS2");
    const auto g = geometry(m);
    const auto f = make_separated_eigenfunction(m, {0, 0});
    const auto p = random_point(m, rng);
    CHECK(oracle_apply_A(g, f, p, eps) ==
          doctest::Approx(g.ricci_norm_sq.to_double()).epsilon(1e-12));
  }
}

TEST_CASE("oracle agrees with the symbol on every low mode of every dim <= 4 manifold") {
  const double eps = 1e-3;
  splitmix64 rng(53);
  for (const char* spec : {"S2", "S3", "S4", "S2xS2", "S2xS1xS1", "S1xS1", "S2(4)"}) {
    const auto m = product_manifold::parse(spec);
    const auto g = geometry(m);
    for (const auto& j : enumerate_joint(m, rational(6))) {
      const auto phi = make_separated_eigenfunction(m, j.levels);
      const double exact = symbol(g, operator_kind::A(), phi.mode).to_double();
      double scale = 0.0;
      std::vector<point_coords> pts;
      for (int i = 0; i < 24; ++i) {
        auto q = random_point(m, rng);
        scale = std::max(scale, std::fabs(phi.eval(q)));
        pts.push_back(std::move(q));
      }
      int used = 0;
      for (const auto& q : pts) {
        const double fq = phi.eval(q);
        if (std::fabs(fq) < 0.2 * scale) continue;
        CAPTURE(spec);
        CHECK(std::fabs(oracle_apply_A(g, phi, q, eps) / fq - exact) < 1e-5);
        if (++used == 5) break;
      }
      CHECK(used == 5);
    }
  }
}

TEST_CASE("lstar identity via FD and quadrature") {
  oracle_options opts;
  opts.n_polar = 10;
  opts.n_azimuth = 20;

  SUBCASE("S2 x S2 mode (1,0): both sides approach 2 * norm^2") {
    const auto g = geometry(product_manifold::parse("S2xS2"));
    const auto rep = verify_lstar_identity(g, {1, 0}, opts);
    CHECK(rep.pass);
    CHECK(rep.rel_error <= opts.tolerance);
    CHECK(rep.lhs / rep.phi_norm_sq == doctest::Approx(2.0).epsilon(1e-5));
  }
  SUBCASE("round S3 level 1: both sides vanish") {
    const auto g = geometry(product_manifold::parse("S3"));
    const auto rep = verify_lstar_identity(g, {1}, opts);
    CHECK(rep.pass);
    CHECK(std::fabs(rep.rhs) < 1e-12);
    CHECK(std::fabs(rep.lhs) < 1e-8);
  }
  SUBCASE("constant mode: both sides equal |r|^2 vol") {
    const auto g = geometry(product_manifold::parse("S2xS2"));
    const auto rep = verify_lstar_identity(g, {0, 0}, opts);
    CHECK(rep.pass);
    const double vol = 16.0 * pi * pi;
    CHECK(rep.lhs == doctest::Approx(4.0 * vol).epsilon(1e-9));
    CHECK(rep.rhs == doctest::Approx(4.0 * vol).epsilon(1e-12));
  }
}

TEST_CASE("bochner rearrangement via FD and quadrature") {
  oracle_options opts;
  opts.n_polar = 10;
  opts.n_azimuth = 20;

  SUBCASE("dimension 5 is rejected") {
    const auto g = geometry(product_manifold::parse("S2xS3"));
    CHECK_THROWS_AS(verify_bochner(g, {1, 0}, opts), std::invalid_argument);
  }
  SUBCASE("S2 level 1: total vanishes") {
    const auto g = geometry(product_manifold::parse("S2"));
    const auto rep = verify_bochner(g, {1}, opts);
    CHECK(rep.pass);
    CHECK(std::fabs(rep.rhs) < 1e-12);
  }
  SUBCASE("S2 x S2 mode (1,0): total is 2 * norm^2") {
    const auto g = geometry(product_manifold::parse("S2xS2"));
    const auto rep = verify_bochner(g, {1, 0}, opts);
    CHECK(rep.pass);
    CHECK(rep.lhs / rep.phi_norm_sq == doctest::Approx(2.0).epsilon(1e-5));
  }
  SUBCASE("constant mode: only the zeroth term survives") {
    const auto g = geometry(product_manifold::parse("S2xS2"));
    const auto rep = verify_bochner(g, {0, 0}, opts);
    CHECK(rep.pass);
    CHECK(rep.lhs == doctest::Approx(4.0 * 16.0 * pi * pi).epsilon(1e-9));
  }
}

TEST_CASE("separated eigenfunction mode data matches the spectrum module") {
  const auto m = product_manifold::parse("S2(1/4)xS3");
  const auto f = make_separated_eigenfunction(m, {2, 1});
  CHECK(f.mode.total == factor_mode_at(m.factors()[0], 2).eigenvalue +
                            factor_mode_at(m.factors()[1], 1).eigenvalue);
  CHECK(f.mode.multiplicity ==
        factor_mode_at(m.factors()[0], 2).multiplicity *
            factor_mode_at(m.factors()[1], 1).multiplicity);
  CHECK_THROWS_AS(make_separated_eigenfunction(m, {1}), std::invalid_argument);
}
