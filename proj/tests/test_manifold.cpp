#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "stabop/manifold.hpp"

using namespace stabop;

TEST_CASE("invalid manifolds are rejected") {
  CHECK_THROWS_AS(product_manifold({}), std::invalid_argument);
  CHECK_THROWS_AS(product_manifold({{0, rational(1)}}), std::invalid_argument);
  CHECK_THROWS_AS(product_manifold({{2, rational(0)}}), std::invalid_argument);
  CHECK_THROWS_AS(product_manifold({{2, rational(-1)}}), std::invalid_argument);
  // a lone circle has total dimension 1
  CHECK_THROWS_AS(product_manifold({{1, rational(1)}}), std::invalid_argument);
  CHECK_NOTHROW(product_manifold({{1, rational(1)}, {1, rational(1)}}));
}

TEST_CASE("geometry of S2 x S3") {
  const auto g = geometry(product_manifold::parse("S2xS3"));
  CHECK(g.n == 5);
  CHECK(g.s == rational(8));
  CHECK(g.ricci_norm_sq == rational(14));
  CHECK(g.ricci_eigs == std::vector<rational>{rational(1), rational(2)});
  CHECK(g.ricci_lower == rational(1));
  CHECK(g.z_norm_sq == rational(14) - rational(64, 5));
  CHECK_FALSE(g.einstein);
  CHECK_FALSE(g.ricci_flat);
}

TEST_CASE("geometry of S^n x S^{n+1}") {
  for (int n = 2; n <= 5; ++n) {
    std::vector<sphere_factor> fs{{n, rational(1)}, {n + 1, rational(1)}};
    const auto g = geometry(product_manifold(fs));
    CHECK(g.s == rational(2LL * n * n));
    CHECK(g.ricci_norm_sq == rational(static_cast<long long>(n) * (2LL * n * n - n + 1)));
    CHECK_FALSE(g.einstein);
  }
}

TEST_CASE("geometry of S^m x S^m") {
  for (int m = 2; m <= 5; ++m) {
    std::vector<sphere_factor> fs{{m, rational(1)}, {m, rational(1)}};
    const auto g = geometry(product_manifold(fs));
    CHECK(g.s == rational(2LL * m * (m - 1)));
    CHECK(g.ricci_norm_sq == rational(2LL * m * (m - 1) * (m - 1)));
    CHECK(g.einstein); // r = (m-1) g
    CHECK(g.ricci_lower == rational(m - 1));
  }
}

TEST_CASE("flat torus is Ricci-flat") {
  const auto g = geometry(product_manifold::parse("S1xS1"));
  CHECK(g.s == rational(0));
  CHECK(g.ricci_norm_sq == rational(0));
  CHECK(g.ricci_flat);
  CHECK(g.z_norm_sq == rational(0));
}

TEST_CASE("z vanishes exactly on single round spheres") {
  for (int n = 2; n <= 6; ++n) {
    const auto g = geometry(product_manifold({{n, rational(3, 2)}}));
    CHECK(g.z_norm_sq == rational(0));
    CHECK(g.einstein);
  }
}

TEST_CASE("einstein detection distinguishes equal and unequal factors") {
  CHECK(geometry(product_manifold::parse("S3xS3")).einstein);
  CHECK_FALSE(geometry(product_manifold::parse("S3xS4")).einstein);
  CHECK_FALSE(geometry(product_manifold::parse("S2(1)xS2(2)")).einstein);
}

TEST_CASE("scale") {
  const auto m = product_manifold::parse("S2");
  CHECK(scale(m, rational(1)).str() == m.str());
  const auto g4 = geometry(scale(m, rational(4)));
  CHECK(g4.s == rational(1, 2)); // s = n(n-1)/rho^2 with n=2, rho^2=4
  CHECK_THROWS_AS(scale(m, rational(0)), std::invalid_argument);
  CHECK_THROWS_AS(scale(m, rational(-2)), std::invalid_argument);
}

TEST_CASE("scaling laws s -> s/t^2 and |r|^2 -> |r|^2/t^4 hold exactly") {
  const rational tsqs[] = {rational(1, 4), rational(1), rational(4), rational(9, 7)};
  const char* specs[] = {"S2xS3", "S2(1/4)xS2", "S4xS5", "S1(2)xS3(3/5)"};
  for (const char* spec : specs) {
    const auto m = product_manifold::parse(spec);
    const auto g = geometry(m);
    for (const auto& tsq : tsqs) {
      const auto gs = geometry(scale(m, tsq));
      CHECK(gs.s * tsq == g.s);
      CHECK(gs.ricci_norm_sq * tsq * tsq == g.ricci_norm_sq);
    }
  }
}

TEST_CASE("inline parse grammar") {
  CHECK(product_manifold::parse("S2xS3").str() == "S2(1)xS3(1)");
  CHECK(product_manifold::parse("s2 x s3").str() == "S2(1)xS3(1)");
  CHECK(product_manifold::parse("S2(1/4)xS2(1)").str() == "S2(1/4)xS2(1)");
  CHECK(product_manifold::parse("S5(9/4)").str() == "S5(9/4)");
  CHECK(product_manifold::parse("S2*S2").str() == "S2(1)xS2(1)");
  CHECK_THROWS_AS(product_manifold::parse(""), std::invalid_argument);
  CHECK_THROWS_AS(product_manifold::parse("T2"), std::invalid_argument);
  CHECK_THROWS_AS(product_manifold::parse("S2(1"), std::invalid_argument);
  CHECK_THROWS_AS(product_manifold::parse("S2yS3"), std::invalid_argument);
  CHECK_THROWS_AS(product_manifold::parse("S2(0)"), std::invalid_argument);
}

TEST_CASE("descriptor file round-trips the inline form") {
  const char* path = "manifold_test_descriptor.txt";
  {
    std::ofstream out(path);
    out << "# product of a small and a unit sphere\n";
    out << "sphere 2 1/4\n";
    out << "\n";
    out << "sphere 3 1   # unit radius\n";
  }
  const auto m = product_manifold::load(path);
  CHECK(m.str() == "S2(1/4)xS3(1)");
  CHECK(m.str() == product_manifold::parse("S2(1/4)xS3(1)").str());
  std::remove(path);

  {
    std::ofstream out(path);
    out << "circle 1 1\n";
  }
  CHECK_THROWS_AS(product_manifold::load(path), std::invalid_argument);
  std::remove(path);
  CHECK_THROWS_AS(product_manifold::load("no_such_file_here.txt"), std::runtime_error);
}
