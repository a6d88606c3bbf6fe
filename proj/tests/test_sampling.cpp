#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "hcela/ordering.hpp"
#include "hcela/sampling.hpp"

using namespace hcela;

namespace {

bool all_inside(const OrderedSample& s, const SearchSpace& space) {
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (!space.contains(s.points[k])) return false;
  }
  return true;
}

// Grid cell of a cell-centred point.
GridPoint cell_of(std::span<const double> x, const SearchSpace& space, unsigned p) {
  return quantise(x, space, p);
}

}  // namespace

TEST_CASE("seed derivation separates tasks", "[sampling]") {
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
  CHECK(derive_seed(5, 9) == derive_seed(5, 9));
}

TEST_CASE("hilbert sampler order", "[sampling]") {
  CHECK(hilbert_sampler_order(2, 4) == 3);
  CHECK(hilbert_sampler_order(2, 64) == 3);
  CHECK(hilbert_sampler_order(2, 65) == 4);
  CHECK(hilbert_sampler_order(5, 500) == 3);
  CHECK(hilbert_sampler_order(5, 32769) == 4);
  CHECK(hilbert_sampler_order(30, 30000) == 3);
}

TEST_CASE("hilbert sample with vanishing noise returns curve vertices in index order", "[sampling]") {
  const auto space = SearchSpace::cube(2, -5, 5);
  Rng rng(3);
  const auto s = hilbert_sample(space, 4, StochasticityStrategy::vertex_gaussian(1e-12), rng);
  REQUIRE(s.size() == 4);
  CHECK(s.ordered);
  const CurveParams params{2, 3};
  HilbertIndex prev = -1;
  for (std::size_t k = 0; k < 4; ++k) {
    const auto g = cell_of(s.points[k], space, 3);
    const auto h = point_to_index(params, g);
    CHECK(h > prev);
    prev = h;
    // Exactly the scaled vertex (cell centre).
    for (int i = 0; i < 2; ++i) {
      CHECK(s.points[k][i] == Catch::Approx(-5.0 + (g[i] + 0.5) * 10.0 / 8.0).margin(1e-9));
    }
  }
}

TEST_CASE("hilbert sample indices are distinct and increasing", "[sampling]") {
  const auto space = SearchSpace::cube(3, 0, 1);
  Rng rng(11);
  const std::size_t n = 300;
  const auto s = hilbert_sample(space, n, StochasticityStrategy::vertex_gaussian(1e-12), rng);
  const CurveParams params{3, hilbert_sampler_order(3, n)};
  HilbertIndex prev = -1;
  for (std::size_t k = 0; k < n; ++k) {
    const auto h = point_to_index(params, cell_of(s.points[k], space, params.order));
    CHECK(h > prev);
    prev = h;
  }
}

TEST_CASE("sampling every vertex yields the full curve", "[sampling]") {
  const auto space = SearchSpace::cube(2, 0, 8);
  Rng rng(1);
  const auto s = hilbert_sample(space, 64, StochasticityStrategy::vertex_gaussian(1e-12), rng);
  const CurveParams params{2, 3};
  for (std::size_t k = 0; k < 64; ++k) CHECK(point_to_index(params, cell_of(s.points[k], space, 3)) == k);
}

TEST_CASE("all samplers stay inside the box", "[sampling]") {
  const SearchSpace space{{-1.0, 0.0, 10.0}, {1.0, 0.5, 20.0}};
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Rng rng(seed);
    CHECK(all_inside(hilbert_sample(space, 200, StochasticityStrategy::vertex_gaussian(2.0), rng), space));
    CHECK(all_inside(hilbert_sample(space, 200, StochasticityStrategy::edge_uniform(), rng), space));
    CHECK(all_inside(lhs_sample(space, 200, rng), space));
    CHECK(all_inside(random_walk_sample(space, 500, 3.0, rng), space));
    CHECK(all_inside(uniform_sample(space, 200, rng), space));
  }
}

TEST_CASE("edge-uniform points lie on segments between consecutive vertices", "[sampling]") {
  const auto space = SearchSpace::cube(2, 0, 8);
  Rng rng(5);
  const auto s = hilbert_sample(space, 64, StochasticityStrategy::edge_uniform(), rng);
  REQUIRE(s.size() == 64);
  // All 64 vertices are selected, so each interior point sits on a unit edge of the curve.
  const CurveParams params{2, 3};
  const auto v0 = index_to_point(params, 0);
  CHECK(s.points[0][0] == Catch::Approx(v0[0] + 0.5));
  CHECK(s.points[0][1] == Catch::Approx(v0[1] + 0.5));
  for (std::size_t k = 1; k < 64; ++k) {
    const auto a = index_to_point(params, k - 1);
    const auto b = index_to_point(params, k);
    for (int i = 0; i < 2; ++i) {
      const double lo = std::min(a[i], b[i]) + 0.5, hi = std::max(a[i], b[i]) + 0.5;
      CHECK(s.points[k][i] >= lo - 1e-12);
      CHECK(s.points[k][i] <= hi + 1e-12);
    }
  }
}

TEST_CASE("hilbert sampler errors", "[sampling]") {
  const auto space = SearchSpace::cube(2, 0, 1);
  Rng rng(0);
  CHECK_THROWS_AS(hilbert_sample(space, 1, {}, rng), DomainError);
  CHECK_THROWS_AS(hilbert_sample(space, 0, {}, rng), DomainError);
  CHECK_THROWS_AS(hilbert_sample(space, 10, StochasticityStrategy::vertex_gaussian(0.0), rng), DomainError);
  CHECK_THROWS_AS(hilbert_sample(SearchSpace::cube(2, 1, 1), 10, {}, rng), DomainError);
  // 2^(1*32) vertices at most on a 1-D curve.
  CHECK_THROWS_AS(hilbert_sampler_order(1, (std::uint64_t{1} << 32) + 1), CapacityError);
}

TEST_CASE("full-vertex 2-D gaussian walk has its step mode near one grid unit", "[sampling]") {
  const auto space = SearchSpace::cube(2, 0, 256);  // one grid unit = 1 box unit at order 8
  Rng rng(2024);
  const std::size_t n = 65536;
  const auto s = hilbert_sample(space, n, StochasticityStrategy::vertex_gaussian(0.3), rng);
  REQUIRE(hilbert_sampler_order(2, n) == 8);
  const auto steps = step_sizes(s);
  REQUIRE(steps.size() == 65535);
  // Histogram with 0.05-wide bins.
  std::map<int, int> hist;
  for (double st : steps) ++hist[static_cast<int>(st / 0.05)];
  const auto mode = std::max_element(hist.begin(), hist.end(), [](auto a, auto b) { return a.second < b.second; });
  const double centre = (mode->first + 0.5) * 0.05;
  CHECK(centre > 0.8);
  CHECK(centre < 1.2);
}

TEST_CASE("LHS has one point per stratum", "[sampling]") {
  SECTION("1-D, four strata") {
    Rng rng(9);
    const auto s = lhs_sample(SearchSpace::cube(1, 0, 4), 4, rng);
    CHECK_FALSE(s.ordered);
    std::vector<double> x;
    for (std::size_t k = 0; k < 4; ++k) x.push_back(s.points[k][0]);
    std::sort(x.begin(), x.end());
    for (int k = 0; k < 4; ++k) {
      CHECK(x[k] >= k);
      CHECK(x[k] < k + 1);
    }
  }
  SECTION("2-D, 100 strata per axis") {
    Rng rng(10);
    const auto s = lhs_sample(SearchSpace::cube(2, -5, 5), 100, rng);
    for (int i = 0; i < 2; ++i) {
      std::vector<int> count(100, 0);
      for (std::size_t k = 0; k < 100; ++k) ++count[std::min(99, static_cast<int>((s.points[k][i] + 5.0) * 10.0))];
      CHECK(std::all_of(count.begin(), count.end(), [](int c) { return c == 1; }));
    }
  }
  SECTION("single point") {
    Rng rng(1);
    const auto s = lhs_sample(SearchSpace::cube(3, 0, 1), 1, rng);
    CHECK(s.size() == 1);
    CHECK(SearchSpace::cube(3, 0, 1).contains(s.points[0]));
  }
}

TEST_CASE("random walk steps are bounded and symmetric", "[sampling]") {
  Rng rng(4);
  const auto s = random_walk_sample(SearchSpace::cube(3, -5, 5), 2000, 1.0, rng);
  CHECK(s.ordered);
  for (std::size_t k = 1; k < s.size(); ++k) {
    for (int i = 0; i < 3; ++i) CHECK(std::abs(s.points[k][i] - s.points[k - 1][i]) <= 1.0 + 1e-12);
  }
  Rng rng1(8);
  const auto w = random_walk_sample(SearchSpace::cube(1, 0, 10), 10001, 1.0, rng1);
  double mean = 0.0;
  for (std::size_t k = 1; k < w.size(); ++k) mean += w.points[k][0] - w.points[k - 1][0];
  mean /= 10000.0;
  CHECK(std::abs(mean) < 0.02);
  Rng rng2(1);
  CHECK(random_walk_sample(SearchSpace::cube(2, 0, 1), 1, 1.0, rng2).size() == 1);
  CHECK_THROWS_AS(random_walk_sample(SearchSpace::cube(2, 0, 1), 5, 0.0, rng2), DomainError);
}

TEST_CASE("reflection folds back into the interval", "[sampling]") {
  CHECK(detail::reflect_into(11.0, 0.0, 10.0) == Catch::Approx(9.0));
  CHECK(detail::reflect_into(-0.5, 0.0, 10.0) == Catch::Approx(0.5));
  CHECK(detail::reflect_into(25.0, 0.0, 10.0) == Catch::Approx(5.0));
  CHECK(detail::reflect_into(3.0, 0.0, 10.0) == 3.0);
}

TEST_CASE("uniform sample mean approaches the box centre", "[sampling]") {
  Rng rng(12);
  const std::size_t n = 4000;
  const auto s = uniform_sample(SearchSpace::cube(4, -5, 5), n, rng);
  const double bound = 3.0 * (10.0 / std::sqrt(12.0)) / std::sqrt(static_cast<double>(n));
  for (int i = 0; i < 4; ++i) {
    double m = 0.0;
    for (std::size_t k = 0; k < n; ++k) m += s.points[k][i];
    CHECK(std::abs(m / n) < bound);
  }
}

TEST_CASE("samplers are deterministic in the seed", "[sampling]") {
  const auto space = SearchSpace::cube(3, -5, 5);
  auto draw = [&](std::uint64_t seed) {
    Rng a(seed);
    return std::vector<PointSet>{hilbert_sample(space, 50, {}, a).points, lhs_sample(space, 50, a).points,
                                 random_walk_sample(space, 50, 1.0, a).points, uniform_sample(space, 50, a).points};
  };
  CHECK(draw(42) == draw(42));
  CHECK_FALSE(draw(42) == draw(43));
}
