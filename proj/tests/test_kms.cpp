#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ssg/errors.hpp"
#include "ssg/kms.hpp"
#include "ssg/models.hpp"
#include "support.hpp"

using namespace ssg;
using ssg::test::path;

namespace {

using C = std::complex<double>;

struct Setup {
  ActionSystem sys;
  PerronData data;
  PeriodicityLattice lattice;
};

Setup setup(ActionSystem sys, int ball = 2) {
  PerronData data = spectral_data(sys.graph());
  PeriodicityLattice lattice = periodicity_group(sys, data, {4, ball, 1e-9});
  return {std::move(sys), std::move(data), std::move(lattice)};
}

ComplexElement random_element(std::mt19937_64& rng, const std::vector<Monomial>& pool, int terms) {
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::normal_distribution<double> coeff;
  ComplexElement a;
  for (int t = 0; t < terms; ++t) a.add(pool[pick(rng)], C(coeff(rng), coeff(rng)));
  return a;
}

}  // namespace

TEST_CASE("trace specifications") {
  CHECK(TraceSpec::haar()({0}) == C(1));
  CHECK(TraceSpec::haar()({2}) == C(0));
  const auto chi = TraceSpec::character({0.25});
  CHECK(std::abs(chi({1}) - C(0, 1)) < 1e-15);
  CHECK(std::abs(chi({2}) - C(-1, 0)) < 1e-15);
  const auto mix = TraceSpec::mix({{0.5, {0.25}}, {0.5, {0.75}}});
  CHECK(std::abs(mix({1})) < 1e-15);
  CHECK(std::abs(mix({0}) - C(1)) < 1e-15);
}

TEST_CASE("evaluation on simple elements") {
  auto s = setup(build_odometer({2, 3}));
  KmsState phi(s.sys, s.data, s.lattice, TraceSpec::haar());
  CHECK(std::abs(phi.evaluate(identity_element<C>(s.sys)) - C(1)) < 1e-12);
  const Path x = path(s.sys.graph(), {{1, 0}});
  CHECK(std::abs(phi.evaluate_monomial({x, s.sys.identity(), x}) - C(0.5)) < 1e-12);
  CHECK(std::abs(phi.evaluate_monomial({x, s.sys.identity(), path(s.sys.graph(), {{2, 0}})})) < 1e-15);
  CHECK(std::abs(phi.evaluate(unitary<C>(s.sys, s.sys.generator(0)))) < 1e-15);

  for (const auto& m : builtin_models()) {
    INFO(m.name);
    auto t = setup(m.build(), 1);
    KmsState psi(t.sys, t.data, t.lattice, TraceSpec::haar());
    CHECK(std::abs(psi.evaluate(identity_element<C>(t.sys)) - C(1)) < 1e-12);
  }
}

TEST_CASE("periodicity unitary under a character") {
  const double theta = 0.3;
  auto s = setup(build_odometer({2, 2}));
  REQUIRE(s.lattice.basis == std::vector<IntVector>{{1, -1}});
  KmsState phi(s.sys, s.data, s.lattice, TraceSpec::character({theta}));
  const auto v = periodicity_unitary<C>(s.sys, {1, 0}, {0, 1}, s.sys.group_ball(2));
  const C expected = std::exp(C(0, 2 * std::numbers::pi * theta));
  CHECK(std::abs(phi.evaluate(v) - expected) < 1e-12);
  CHECK(std::abs(phi.trace_at({2, -2}) - expected * expected) < 1e-12);
  CHECK_THROWS_AS((void)phi.trace_at({1, 0}), NotInLattice);

  KmsState haar(s.sys, s.data, s.lattice, TraceSpec::haar());
  CHECK(std::abs(haar.evaluate(v)) < 1e-15);
}

TEST_CASE("KMS condition") {
  SUBCASE("vertex projections") {
    auto s = setup(build_odometer({2, 2}));
    KmsState phi(s.sys, s.data, s.lattice, TraceSpec::character({0.3}));
    const ComplexElement p = vertex_projection<C>(s.sys, 0);
    const C lhs = phi.evaluate(multiply(s.sys, p, p));
    const C rhs = phi.evaluate(multiply(s.sys, p, modular_shift(s.data, p)));
    CHECK(std::abs(lhs - rhs) == 0.0);
  }
  SUBCASE("an edge and its adjoint") {
    auto s = setup(build_odometer({2, 2}));
    KmsState phi(s.sys, s.data, s.lattice, TraceSpec::character({0.3}));
    const ComplexElement x = edge_monomial<C>(s.sys, 0);
    const ComplexElement y = adjoint(s.sys, x);
    const C lhs = phi.evaluate(multiply(s.sys, x, y));
    const C rhs = phi.evaluate(multiply(s.sys, y, modular_shift(s.data, x)));
    CHECK(std::abs(lhs - C(0.5)) < 1e-12);
    CHECK(std::abs(lhs - rhs) < 1e-12);
  }
  SUBCASE("sampled pairs") {
    auto s = setup(build_odometer({2, 3}));
    KmsState phi(s.sys, s.data, s.lattice, TraceSpec::haar());
    KmsSampling sampling;
    sampling.exhaustive_bound = {1, 0};
    sampling.random_bound = {2, 2};
    sampling.random_pairs = 500;
    const auto rep = verify_kms(phi, sampling, 1e-9);
    CHECK(rep.passed);
    CHECK(rep.max_deviation < 1e-9);
    CHECK(rep.pairs_checked >= 500);
  }
}

TEST_CASE("state factors through the conditional expectation") {
  auto s = setup(build_odometer({2, 2}));
  KmsState phi(s.sys, s.data, s.lattice, TraceSpec::character({0.17}));
  CyclineOracle oracle(s.sys);
  const auto pool = monomials_up_to(s.sys, {2, 2}, s.sys.group_ball(1));
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = random_element(rng, pool, 5);
    CHECK(std::abs(phi.evaluate(a) - phi.evaluate(expectation(oracle, a))) < 1e-9);
  }
}

TEST_CASE("trace property on the cycline subalgebra") {
  auto s = setup(build_odometer({2, 2}));
  KmsState phi(s.sys, s.data, s.lattice, TraceSpec::character({0.4}));
  const auto group = s.sys.group_ball(1);
  std::vector<Monomial> cycline;
  for (const auto& [m, n] : std::vector<std::pair<Degree, Degree>>{{{1, 0}, {0, 1}}, {{0, 1}, {1, 0}}, {{1, 1}, {1, 1}}})
    for (const auto& t : cycline_triples(s.sys, m, n, group)) cycline.push_back(t);
  REQUIRE(cycline.size() >= 4);
  for (const auto& a : cycline)
    for (const auto& b : cycline) {
      const ComplexElement x(a), y(b);
      CHECK(std::abs(phi.evaluate(multiply(s.sys, x, y)) - phi.evaluate(multiply(s.sys, y, x))) < 1e-12);
    }
}

TEST_CASE("diagonal restriction is the Perron state") {
  auto s = setup(build_katsura({{2, 1}, {1, 2}}, {{1, 1}, {1, 1}}), 1);
  KmsState phi(s.sys, s.data, s.lattice, TraceSpec::haar());
  const auto d = restrict_to_diagonal(phi, {3});
  CHECK(d.max_deviation < 1e-12);
  CHECK(d.paths_checked > 0);
  CHECK(d.invariant);
}

TEST_CASE("modular shift scales by the spectral radii") {
  auto s = setup(build_odometer({2, 3}));
  const KGraph& g = s.sys.graph();
  const Monomial m{path(g, {{1, 0}}), s.sys.identity(), path(g, {{2, 1}})};
  const auto shifted = modular_shift(s.data, ComplexElement(m));
  REQUIRE(shifted.size() == 1);
  // rho^{-(1,-1)} = 3/2
  CHECK(std::abs(shifted.terms().begin()->second - C(1.5)) < 1e-12);
}

TEST_CASE("simplex classification") {
  auto p23 = setup(build_odometer({2, 3}));
  const auto a = simplex_summary(p23.sys, p23.data, p23.lattice);
  CHECK(a.exists);
  CHECK(a.rank == 0);
  CHECK(a.verdict == "unique KMS state");

  auto p22 = setup(build_odometer({2, 2}));
  const auto b = simplex_summary(p22.sys, p22.data, p22.lattice);
  CHECK(b.rank == 1);
  CHECK(b.verdict.find("1-torus") != std::string::npos);

  auto kat = setup(build_katsura({{2}}, {{1}}));
  CHECK(simplex_summary(kat.sys, kat.data, kat.lattice).verdict == "unique KMS state");

  auto swap = setup(fixture_vertex_swap(), 1);
  const auto c = simplex_summary(swap.sys, swap.data, swap.lattice);
  CHECK_FALSE(c.exists);
  CHECK(c.verdict.rfind("empty", 0) == 0);
  CHECK_THROWS_AS(KmsState(swap.sys, swap.data, swap.lattice, TraceSpec::haar()), SimplexEmpty);
}
