#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "qpow/dense_eig.hpp"
#include "qpow/dense_matrix.hpp"
#include "qpow/estimators.hpp"
#include "qpow/experiment.hpp"
#include "qpow/hubbard.hpp"
#include "qpow/iteration_matrix.hpp"
#include "qpow/power_iteration.hpp"
#include "qpow/vectors.hpp"

using namespace qpow;

namespace {

SparseVector from_dense(const std::vector<double>& x) {
  std::vector<std::pair<index_t, double>> entries;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] != 0.0) entries.emplace_back(static_cast<index_t>(i), x[i]);
  }
  return make_sparse(static_cast<index_t>(x.size()), std::move(entries));
}

}  // namespace

TEST_SUITE("driver") {

TEST_CASE("power iteration isolates the dominant eigenpair of a diagonal") {
  DenseMatrix a(2);
  a.set_symmetric(0, 0, 3.0);
  a.set_symmetric(1, 1, 1.0);
  SparseVector v0 = normalized(make_sparse(2, {{0, 1.0}, {1, 1.0}}));
  PowerIterationResult r = exact_power_iteration(a, v0, 500, 1e-12);
  CHECK(r.converged);
  CHECK_FALSE(r.stagnation);
  CHECK(r.lambda == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(std::abs(value_at(r.u, 0)) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(std::abs(value_at(r.u, 1)) < 1e-5);
}

TEST_CASE("an exact eigenvector start is a fixed point") {
  DenseMatrix a(2);
  a.set_symmetric(0, 0, 3.0);
  a.set_symmetric(1, 1, 1.0);
  SparseVector e1 = make_sparse(2, {{1, 1.0}});
  PowerIterationResult r = exact_power_iteration(a, e1, 100, 1e-12);
  CHECK(r.converged);
  CHECK(r.lambda == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("power iteration matches the dense solver on a gapped matrix") {
  DenseMatrix h = dense_random_hamiltonian(50, 0.5, 11);
  DenseEig eig = jacobi_eigensystem(h);
  REQUIRE(eig.values.size() == 50);
  CHECK(eig.values[0] == doctest::Approx(-1.5).epsilon(1e-10));

  std::vector<std::pair<index_t, double>> ones;
  for (index_t i = 0; i < 50; ++i) ones.emplace_back(i, 1.0);
  SparseVector v0 = normalized(make_sparse(50, std::move(ones)));
  PowerIterationResult r = exact_power_iteration(h, v0, 2000, 1e-14);
  CHECK(r.converged);
  CHECK(r.lambda == doctest::Approx(eig.values[0]).epsilon(1e-10));
  CHECK(std::abs(dot(r.u, from_dense(eig.vectors[0]))) ==
        doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("flat Rayleigh quotient with a large residual reports stagnation") {
  DenseMatrix a(2);
  a.set_symmetric(0, 0, 1.0);
  a.set_symmetric(1, 1, -1.0);
  SparseVector v0 = normalized(make_sparse(2, {{0, 1.0}, {1, 1.0}}));
  PowerIterationResult r = exact_power_iteration(a, v0, 500, 1e-10);
  CHECK_FALSE(r.converged);
  CHECK(r.stagnation);
  CHECK(r.residual2 > 0.5);
}

TEST_CASE("jacobi solves small examples exactly") {
  DenseMatrix d(2);
  d.set_symmetric(0, 0, -2.0);
  d.set_symmetric(1, 1, 5.0);
  DenseEig eig = jacobi_eigensystem(d);
  CHECK(eig.values[0] == doctest::Approx(-2.0).epsilon(1e-14));
  CHECK(eig.values[1] == doctest::Approx(5.0).epsilon(1e-14));
  SmallestEig s = dense_eig_smallest(d);
  CHECK(s.value == doctest::Approx(-2.0).epsilon(1e-14));
  CHECK(std::abs(s.vector[0]) == doctest::Approx(1.0).epsilon(1e-12));

  DenseMatrix x(2);
  x.set_symmetric(0, 1, 1.0);
  SmallestEig sx = dense_eig_smallest(x);
  CHECK(sx.value == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(std::abs(sx.vector[0]) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-10));
  CHECK(sx.vector[0] * sx.vector[1] < 0.0);
}

TEST_CASE("dense solver and power iteration agree on the lattice model") {
  HubbardMomentum h(2, 1, 1, 4.0);
  DenseMatrix dense = dense_from_oracle(h);
  SmallestEig eig = dense_eig_smallest(dense);
  CHECK(eig.value == doctest::Approx(-7.254426010593324).epsilon(1e-12));

  IterationMatrix a(h, 0.01, 0.0);
  SparseVector v0 = make_sparse(h.dim(), {{h.reference_index(), 1.0}});
  PowerIterationResult r = exact_power_iteration(a, v0, 20000, 1e-16);
  CHECK(r.converged);
  CHECK(a.energy_from_eigenvalue(r.lambda) ==
        doctest::Approx(eig.value).epsilon(1e-8));
  CHECK(std::abs(value_at(r.u, h.reference_index()))
        == doctest::Approx(0.9884462262042656).epsilon(1e-6));
}

TEST_CASE("projected energy at the reference is the reference diagonal") {
  HubbardMomentum h(4, 5, 5, 4.0);
  SparseVector ref = make_sparse(h.dim(), {{h.reference_index(), 1.0}});
  CHECK(projected_energy(h, ref, ref) == -17.75);

  WalkerEnsemble w{h.dim(), {}};
  add_walkers(w, h.reference_index(), 10);
  CHECK(projected_energy(h, ref, w) == -17.75);
}

TEST_CASE("projected energy of an eigenvector is its eigenvalue") {
  HubbardMomentum h(2, 1, 1, 4.0);
  SmallestEig eig = dense_eig_smallest(dense_from_oracle(h));
  SparseVector u1 = from_dense(eig.vector);
  SparseVector ref = make_sparse(h.dim(), {{h.reference_index(), 1.0}});
  CHECK(projected_energy(h, ref, u1) ==
        doctest::Approx(eig.value).epsilon(1e-9));
  CHECK(projected_energy(h, u1, u1) ==
        doctest::Approx(eig.value).epsilon(1e-9));
}

TEST_CASE("projected energy ignores vector scale") {
  HubbardMomentum h(2, 1, 1, 4.0);
  SparseVector ref = make_sparse(h.dim(), {{h.reference_index(), 1.0}});
  SparseVector v = make_sparse(h.dim(), {{0, 0.8}, {5, -0.3}, {10, 0.1}});
  const double base = projected_energy(h, ref, v);
  CHECK(projected_energy(h, ref, scaled(v, 2.0)) == base);
  CHECK(projected_energy(h, ref, scaled(v, -0.25)) == base);
  CHECK(projected_energy(h, ref, scaled(v, 3.0)) ==
        doctest::Approx(base).epsilon(1e-14));
}

TEST_CASE("mixed walker ensemble projects to a hand computed quotient") {
  HubbardMomentum h(2, 1, 1, 4.0);
  SparseVector ref = make_sparse(h.dim(), {{0, 1.0}});
  WalkerEnsemble w{h.dim(), {}};
  add_walkers(w, 0, 2);
  add_walkers(w, 5, 1);
  // numerator 2 H(0,0) + H(0,5) = -14 + 1, denominator 2
  CHECK(projected_energy(h, ref, w) == -6.5);
}

TEST_CASE("degenerate projections are rejected") {
  HubbardMomentum h(2, 1, 1, 4.0);
  SparseVector ref = make_sparse(h.dim(), {{0, 1.0}});
  SparseVector disjoint = make_sparse(h.dim(), {{5, 1.0}});
  CHECK_THROWS_AS(projected_energy(h, ref, disjoint), std::domain_error);
  SparseVector wrong_dim = make_sparse(4, {{0, 1.0}});
  CHECK_THROWS_AS(projected_energy(h, ref, wrong_dim), std::invalid_argument);
}

}  // TEST_SUITE
