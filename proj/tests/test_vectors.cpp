#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "qpow/rng.hpp"
#include "qpow/vectors.hpp"

using namespace qpow;

TEST_SUITE("vectors") {

TEST_CASE("make_sparse sorts entries and rejects bad input") {
  SparseVector v = make_sparse(10, {{7, -4.0}, {2, 3.0}});
  REQUIRE(v.entries.size() == 2);
  CHECK(v.entries[0].first == 2);
  CHECK(v.entries[1].first == 7);
  CHECK_THROWS_AS(make_sparse(10, {{3, 1.0}, {3, 2.0}}), std::invalid_argument);
  CHECK_THROWS_AS(make_sparse(10, {{10, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(make_sparse(10, {{-1, 1.0}}), std::invalid_argument);
  CHECK(make_sparse(4, {{1, 0.0}}).entries.empty());
}

TEST_CASE("norms") {
  SparseVector v = make_sparse(5, {{0, 3.0}, {2, -4.0}});
  CHECK(norm1(v) == 7.0);
  CHECK(norm2(v) == 5.0);
  CHECK(norm0(v) == 2);
  CHECK(norm1(make_sparse(5, {})) == 0.0);
}

TEST_CASE("dot walks the shared support") {
  SparseVector u = make_sparse(6, {{0, 1.0}, {2, 2.0}, {5, -1.0}});
  SparseVector v = make_sparse(6, {{2, 4.0}, {3, 9.0}, {5, 2.0}});
  CHECK(dot(u, v) == 6.0);
  CHECK(dot(u, make_sparse(6, {{1, 3.0}})) == 0.0);
  CHECK_THROWS_AS(dot(u, make_sparse(7, {})), std::invalid_argument);
}

TEST_CASE("value_at") {
  SparseVector v = make_sparse(6, {{1, 2.5}, {4, -1.0}});
  CHECK(value_at(v, 1) == 2.5);
  CHECK(value_at(v, 4) == -1.0);
  CHECK(value_at(v, 0) == 0.0);
  CHECK(value_at(v, 5) == 0.0);
}

TEST_CASE("axpy merges and prunes cancellations") {
  SparseVector x = make_sparse(4, {{0, 1.0}, {2, 2.0}});
  SparseVector y = make_sparse(4, {{1, 5.0}, {2, -4.0}});
  SparseVector r = axpy(2.0, x, y);
  REQUIRE(r.entries.size() == 2);
  CHECK(value_at(r, 0) == 2.0);
  CHECK(value_at(r, 1) == 5.0);
  CHECK(value_at(r, 2) == 0.0);
  CHECK(axpy(-1.0, x, x).entries.empty());
}

TEST_CASE("normalized gives a unit 2-norm vector") {
  SparseVector v = make_sparse(3, {{0, 3.0}, {1, 4.0}});
  SparseVector n = normalized(v);
  CHECK(value_at(n, 0) == 0.6);
  CHECK(value_at(n, 1) == 0.8);
  CHECK_THROWS_AS(normalized(make_sparse(3, {})), std::domain_error);
}

TEST_CASE("tan_angle basics") {
  SparseVector e0 = make_sparse(2, {{0, 1.0}});
  SparseVector diag = make_sparse(2, {{0, 1.0}, {1, 1.0}});
  SparseVector e1 = make_sparse(2, {{1, 1.0}});
  auto t = tan_angle(e0, diag);
  REQUIRE(t.has_value());
  CHECK(*t == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_FALSE(tan_angle(e0, e1).has_value());
  auto zero = tan_angle(e0, scaled(e0, -2.0));
  REQUIRE(zero.has_value());
  CHECK(*zero == 0.0);
  CHECK_THROWS_AS(tan_angle(e0, make_sparse(2, {})), std::domain_error);
}

TEST_CASE("tan_angle is scale invariant") {
  SparseVector u = make_sparse(5, {{0, 0.3}, {1, -1.2}, {3, 0.7}});
  SparseVector v = make_sparse(5, {{0, 1.0}, {2, 0.4}, {3, -0.5}});
  const double base = *tan_angle(u, v);
  CHECK(*tan_angle(u, scaled(v, 4.0)) == base);  // power of two: exact
  CHECK(*tan_angle(scaled(u, -0.5), v) == base);
  CHECK(*tan_angle(u, scaled(v, 1e3)) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("round_stochastic thresholds on the fractional part") {
  CHECK(round_stochastic(2.3, 0.29) == 3);
  CHECK(round_stochastic(2.3, 0.31) == 2);
  CHECK(round_stochastic(5.0, 0.999) == 5);
  CHECK(round_stochastic(0.0, 0.5) == 0);
  CHECK_THROWS_AS(round_stochastic(-0.1, 0.5), std::domain_error);
}

TEST_CASE("round_stochastic is unbiased in expectation") {
  CounterRng rng(100, 0, 0, 0);
  const double q = 0.7;
  const int n = 100000;
  long long acc = 0;
  for (int i = 0; i < n; ++i) acc += round_stochastic(q, rng.uniform01());
  // Bernoulli(0.7) mean with a 5 sigma band.
  const double mean = static_cast<double>(acc) / n;
  const double se = std::sqrt(0.7 * 0.3 / n);
  CHECK(std::abs(mean - q) < 5.0 * se);
}

TEST_CASE("walker ensembles track signed counts") {
  WalkerEnsemble w{8, {}};
  add_walkers(w, 3, 5);
  add_walkers(w, 6, -2);
  add_walkers(w, 3, -5);
  CHECK(w.counts.count(3) == 0);
  CHECK(total_walkers(w) == 2);
  add_walkers(w, 1, 4);
  SparseVector v = to_sparse(w);
  REQUIRE(v.entries.size() == 2);
  CHECK(v.entries[0].first == 1);
  CHECK(v.entries[0].second == 4.0);
  CHECK(v.entries[1].first == 6);
  CHECK(v.entries[1].second == -2.0);
  const auto locs = sorted_locations(w);
  REQUIRE(locs.size() == 2);
  CHECK(locs[0] == 1);
  CHECK(locs[1] == 6);
}

}  // TEST_SUITE
