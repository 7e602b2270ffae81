#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "qpow/dense_eig.hpp"
#include "qpow/dense_matrix.hpp"
#include "qpow/file_matrix.hpp"
#include "qpow/hubbard.hpp"
#include "qpow/iteration_matrix.hpp"
#include "qpow/rng.hpp"

using namespace qpow;

TEST_SUITE("hamiltonian") {

TEST_CASE("dispersion is exact at the lattice angles") {
  HubbardMomentum h2(2, 1, 1, 4.0);
  CHECK(h2.dispersion(0) == -4.0);  // (0,0)
  CHECK(h2.dispersion(1) == 0.0);   // (1,0): cos(pi) = -1 exactly
  CHECK(h2.dispersion(2) == 0.0);
  CHECK(h2.dispersion(3) == 4.0);

  HubbardMomentum h4(4, 1, 1, 4.0);
  CHECK(h4.dispersion(0) == -4.0);
  CHECK(h4.dispersion(1) == -2.0);  // cos(pi/2) = 0 exactly
  CHECK(h4.dispersion(2) == 0.0);
  CHECK(h4.dispersion(10) == 4.0);  // (2,2)
}

TEST_CASE("small lattice dimensions and reference determinant") {
  HubbardMomentum h(2, 1, 1, 4.0);
  CHECK(h.dim() == 16);
  CHECK(h.reference_up() == 1);
  CHECK(h.reference_down() == 1);
  CHECK(h.reference_index() == 0);
  CHECK(h.diagonal(h.reference_index()) == -7.0);
}

TEST_CASE("reference column couples to the momentum conserving doubles") {
  HubbardMomentum h(2, 1, 1, 4.0);
  auto col = h.offdiag_column(h.reference_index());
  REQUIRE(col.size() == 3);
  CHECK(col[0].row == 5);
  CHECK(col[1].row == 10);
  CHECK(col[2].row == 15);
  for (const auto& e : col) CHECK(e.value == 1.0);
  CHECK(h.offdiag_count(h.reference_index()) == 3);
}

TEST_CASE("zero interaction leaves the matrix diagonal") {
  HubbardMomentum h(2, 1, 1, 0.0);
  for (index_t k = 0; k < h.dim(); ++k) {
    CHECK(h.offdiag_column(k).empty());
    CHECK(h.offdiag_count(k) == 0);
  }
  CounterRng rng(1, 0, 0, 0);
  CHECK_FALSE(h.sample_offdiag(0, rng).has_value());
}

TEST_CASE("rank and unrank invert each other") {
  HubbardMomentum h(4, 3, 2, 4.0);
  for (index_t k = 0; k < h.dim(); k += 97) {
    auto [up, down] = h.unrank(k);
    CHECK(h.rank(up, down) == k);
  }
  auto [u0, d0] = h.unrank(h.dim() - 1);
  CHECK(h.rank(u0, d0) == h.dim() - 1);
}

TEST_CASE("columns are symmetric and conserve momentum") {
  HubbardMomentum h(2, 2, 1, 4.0);
  std::map<std::pair<index_t, index_t>, double> upper;
  for (index_t k = 0; k < h.dim(); ++k) {
    auto [up_k, down_k] = h.unrank(k);
    const auto mom_k = h.total_momentum(up_k, down_k);
    index_t prev = -1;
    for (const auto& e : h.offdiag_column(k)) {
      CHECK(e.row != k);
      CHECK(e.row > prev);  // sorted ascending, no duplicates
      prev = e.row;
      auto [up_r, down_r] = h.unrank(e.row);
      CHECK(h.total_momentum(up_r, down_r) == mom_k);
      if (e.row > k) {
        upper[{k, e.row}] = e.value;
      } else {
        auto it = upper.find({e.row, k});
        REQUIRE(it != upper.end());
        CHECK(it->second == e.value);
        upper.erase(it);
      }
    }
  }
  CHECK(upper.empty());
}

TEST_CASE("uniform column sampling matches the stated probabilities") {
  HubbardMomentum h(2, 1, 1, 4.0);
  const index_t k = h.reference_index();
  std::map<index_t, int> hits;
  std::map<index_t, double> ploc;
  const int reps = 9000;
  for (int r = 0; r < reps; ++r) {
    CounterRng rng(3, static_cast<std::uint64_t>(r), 0,
                   stream_entity(StreamPurpose::spawn, 0));
    auto s = h.sample_offdiag(k, rng);
    REQUIRE(s.has_value());
    ++hits[s->row];
    ploc[s->row] = s->p_loc;
  }
  double total_p = 0.0;
  for (const auto& e : h.offdiag_column(k)) {
    REQUIRE(ploc.count(e.row) == 1);
    const double p = ploc[e.row];
    total_p += p;
    const double se = std::sqrt(p * (1.0 - p) * reps);
    CHECK(std::abs(hits[e.row] - p * reps) < 5.0 * se);
  }
  CHECK(total_p == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("rejection sampling reports consistent proposal probabilities") {
  HubbardMomentum h(2, 2, 1, 4.0, HubbardMomentum::Sampling::rejection);
  index_t k = 0;
  while (h.offdiag_count(k) == 0) ++k;
  std::map<index_t, int> hits;
  std::map<index_t, double> ploc;
  const int reps = 12000;
  for (int r = 0; r < reps; ++r) {
    CounterRng rng(5, static_cast<std::uint64_t>(r), 0,
                   stream_entity(StreamPurpose::spawn, 0));
    auto s = h.sample_offdiag(k, rng);
    if (!s) continue;
    ++hits[s->row];
    ploc[s->row] = s->p_loc;
  }
  REQUIRE_FALSE(hits.empty());
  int drawn = 0;
  for (const auto& [row, n] : hits) drawn += n;
  for (const auto& [row, n] : hits) {
    const double p = ploc[row] * reps / drawn;  // condition on acceptance
    const double se = std::sqrt(p * std::max(0.0, 1.0 - p) * drawn);
    CHECK(std::abs(n - p * drawn) < 5.0 * se + 1.0);
  }
}

TEST_CASE("half filled four site lattice reproduces the known ground state") {
  HubbardMomentum h(2, 1, 1, 4.0);
  DenseMatrix dense = dense_from_oracle(h);
  SmallestEig eig = dense_eig_smallest(dense);
  CHECK(eig.value == doctest::Approx(-7.254426010593324).epsilon(1e-12));
}

TEST_CASE("large lattice reference energy is exact") {
  HubbardMomentum h(4, 5, 5, 4.0);
  CHECK(h.diagonal(h.reference_index()) == -17.75);
}

TEST_CASE("invalid lattice parameters are rejected") {
  CHECK_THROWS_AS(HubbardMomentum(0, 1, 1, 4.0), std::invalid_argument);
  CHECK_THROWS_AS(HubbardMomentum(2, 0, 0, 4.0), std::invalid_argument);
  CHECK_THROWS_AS(HubbardMomentum(2, 5, 1, 4.0), std::invalid_argument);
}

TEST_CASE("coordinate files load into a symmetric oracle") {
  std::istringstream in(
      "# tiny test matrix\n"
      "3\n"
      "1 1 -1.5\n"
      "1 2 0.25\n"
      "3 3 2.0\n");
  FileMatrix m = FileMatrix::parse(in, "mini");
  CHECK(m.dim() == 3);
  CHECK(m.diagonal(0) == -1.5);
  CHECK(m.diagonal(1) == 0.0);
  CHECK(m.diagonal(2) == 2.0);
  auto col0 = m.offdiag_column(0);
  REQUIRE(col0.size() == 1);
  CHECK(col0[0].row == 1);
  CHECK(col0[0].value == 0.25);
  auto col1 = m.offdiag_column(1);
  REQUIRE(col1.size() == 1);
  CHECK(col1[0].row == 0);
  CHECK(col1[0].value == 0.25);
}

TEST_CASE("coordinate file errors carry the line number") {
  auto expect_error = [](const std::string& text) {
    std::istringstream in(text);
    try {
      FileMatrix::parse(in, "bad");
      FAIL("expected parse failure");
    } catch (const std::runtime_error& err) {
      const std::string what = err.what();
      CAPTURE(what);
      CHECK(what.find("bad:") != std::string::npos);
    }
  };
  expect_error("2\n2 1 0.5\n");           // lower-triangle entry
  expect_error("2\n1 2 0.5\n1 2 0.5\n");  // duplicate
  expect_error("2\n1 3 0.5\n");           // out of range
  expect_error("x\n");                    // bad dimension
}

TEST_CASE("iteration matrix applies the shifted linear map") {
  HubbardMomentum h(4, 5, 5, 4.0);
  IterationMatrix a(h, 0.01, -17.75);
  const index_t hf = h.reference_index();
  CHECK(a.dim() == h.dim());
  CHECK(a.diagonal(hf) == 1.0);
  auto col = a.offdiag_column(hf);
  auto raw = h.offdiag_column(hf);
  REQUIRE(col.size() == raw.size());
  for (std::size_t i = 0; i < col.size(); ++i) {
    CHECK(col[i].row == raw[i].row);
    CHECK(col[i].value == -0.01 * raw[i].value);
  }
  CHECK(a.shift() == -17.75);
  a.set_shift(-18.0);
  CHECK(a.diagonal(hf) == doctest::Approx(1.0 - 0.01 * 0.25).epsilon(1e-15));
  CHECK(a.energy_from_eigenvalue(1.0) == -18.0);
}

}  // TEST_SUITE
