#include <doctest.h>

#include <set>

#include "ssg/errors.hpp"
#include "ssg/models.hpp"
#include "support.hpp"

using namespace ssg;
using ssg::test::path;

TEST_CASE("odometer square rule") {
  const auto sys = build_odometer({2, 3});
  const KGraph& g = sys.graph();
  // 1 + 2*2 = 5 = 2 + 1*3
  CHECK(path(g, {{1, 1}, {2, 2}}) == path(g, {{2, 2}, {1, 1}}));
  CHECK(g.exchange(*g.find_edge(0, 1), *g.find_edge(1, 2)) == std::pair{*g.find_edge(1, 2), *g.find_edge(0, 1)});
  CHECK(g.squares().size() == 6);
}

TEST_CASE("commuting digit words") {
  const std::vector<int> n = {2, 3};
  SUBCASE("zero words") {
    const auto r = odometer_commute(n, {{0, {0, 0}}}, {{1, {0}}});
    CHECK(r.left[0].digits == std::vector<int>{0, 0});
    CHECK(r.right[0].digits == std::vector<int>{0});
  }
  SUBCASE("single digits") {
    const auto r = odometer_commute(n, {{0, {1}}}, {{1, {2}}});
    CHECK(r.right[0].digits == std::vector<int>{2});
    CHECK(r.left[0].digits == std::vector<int>{1});
  }
  SUBCASE("two digits against one") {
    // 3 + 2*4 = 11 = 2 + 3*3
    const auto r = odometer_commute(n, {{0, {1, 1}}}, {{1, {2}}});
    CHECK(r.left[0].digits == std::vector<int>{1, 1});
    CHECK(r.right[0].digits == std::vector<int>{2});
  }
  SUBCASE("agrees with path composition") {
    const auto sys = build_odometer(n);
    const KGraph& g = sys.graph();
    for (int s0 = 0; s0 < 2; ++s0)
      for (int s1 = 0; s1 < 2; ++s1)
        for (int t = 0; t < 3; ++t) {
          const auto r = odometer_commute(n, {{0, {s0, s1}}}, {{1, {t}}});
          const Path lhs = path(g, {{1, static_cast<std::uint32_t>(s0)}, {1, static_cast<std::uint32_t>(s1)},
                                    {2, static_cast<std::uint32_t>(t)}});
          const Path rhs = path(g, {{2, static_cast<std::uint32_t>(r.right[0].digits[0])},
                                    {1, static_cast<std::uint32_t>(r.left[0].digits[0])},
                                    {1, static_cast<std::uint32_t>(r.left[0].digits[1])}});
          CHECK(lhs == rhs);
        }
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(odometer_commute(n, {{0, {1}}}, {{0, {1}}}), DomainError);
    CHECK_THROWS_AS(odometer_commute(n, {{0, {2}}}, {{1, {0}}}), DomainError);
  }
}

TEST_CASE("gamma bijection") {
  const std::vector<int> n = {2, 4};
  const auto sys = build_odometer(n);
  const KGraph& g = sys.graph();
  std::set<Path> images;
  for (const Path& mu : g.paths_of_degree({2, 0})) {
    const Path nu = gamma_bijection(n, g, {2, 0}, {0, 1}, mu);
    CHECK(nu.degree() == Degree{0, 1});
    CHECK(odometer_value(n, g, nu) == odometer_value(n, g, mu));
    images.insert(nu);
  }
  CHECK(images.size() == 4);
  CHECK_THROWS_AS(gamma_bijection(n, g, {1, 0}, {0, 1}, g.paths_of_degree({1, 0})[0]), NotBalanced);
  CHECK(odometer_value(n, g, path(g, {{1, 1}, {1, 1}, {2, 3}})) == "15");
}

TEST_CASE("Katsura models") {
  SUBCASE("T = [[2]], B = [[1]] is the binary odometer") {
    const auto kat = build_katsura({{2}}, {{1}});
    const auto odo = build_odometer({2});
    REQUIRE(kat.graph().num_edges() == odo.graph().num_edges());
    CHECK(kat.tables()[0].image == odo.tables()[0].image);
    CHECK(kat.tables()[0].restriction == odo.tables()[0].restriction);
  }
  SUBCASE("parameter checks") {
    CHECK_THROWS_AS(build_katsura({{1}}, {{1}}), SpecViolation);
    CHECK_THROWS_AS(build_katsura({{2, 1}, {1, 2}}, {{1, 0}, {1, 1}}), SpecViolation);
    CHECK_THROWS_AS(build_katsura({{3}}, {{2}}), SpecViolation);
    CHECK(katsura_spec_violations({{2, 1}, {1, 2}}, {{1, 1}, {1, 1}}).empty());
  }
  SUBCASE("edge layout") {
    const auto sys = build_katsura({{2, 1}, {1, 2}}, {{1, 1}, {1, 1}});
    const KGraph& g = sys.graph();
    CHECK(g.num_edges() == 6);
    CHECK(g.edges_into(0, 0).size() == 3);
    CHECK(g.edges_out_of(1, 0).size() == 3);
  }
}

TEST_CASE("odometer periodicity oracle") {
  CHECK(expected_odometer_per({2, 3}).empty());
  CHECK(expected_odometer_per({2, 2}) == std::vector<IntVector>{{1, -1}});
  CHECK(expected_odometer_per({2, 4}) == std::vector<IntVector>{{2, -1}});
  CHECK(expected_odometer_per({6, 2, 3}) == std::vector<IntVector>{{1, -1, -1}});
  CHECK(expected_odometer_per({4, 8}) == std::vector<IntVector>{{3, -2}});
}

TEST_CASE("degenerate property") {
  for (const auto& m : builtin_models()) {
    if (m.family == "graph") continue;
    INFO(m.name);
    auto sys = m.build();
    CHECK(check_degenerate_property(sys) == Tristate::yes);
  }
  // Swapping two loops with itself as restriction never reaches the identity.
  auto graph = std::make_shared<const KGraph>(1, 1, std::vector<Edge>{{0, 0, 0, 0}, {0, 1, 0, 0}}, std::vector<Square>{});
  auto sys = ActionSystem::from_tables(graph, {GeneratorTable{"a", {1, 0}, {{1}, {1}}, std::nullopt}});
  CHECK(check_degenerate_property(sys) == Tristate::no);
  CHECK(check_degenerate_property(sys, 1) == Tristate::no);
  CHECK(to_string(Tristate::unknown) == "unknown");
}

TEST_CASE("registry") {
  std::set<std::string> names;
  for (const auto& m : builtin_models()) {
    INFO(m.name);
    CHECK(names.insert(m.name).second);
    auto sys = m.build();
    CHECK(validate_kgraph(sys.graph()).ok());
    CHECK(validate_action(sys).ok());
    if (m.family == "odometer") CHECK(sys.graph().k() == static_cast<int>(m.odometer_n.size()));
  }
  CHECK(names.count("odometer_6_2_3"));
  CHECK(names.count("katsura_2_1"));
}

TEST_CASE("fixtures") {
  auto swap = fixture_vertex_swap();
  CHECK(validate_action(swap).mentions("automorphism violated"));
  auto triv = fixture_trivial_generator();
  CHECK(triv.collapsed_generators() == std::vector<std::size_t>{1});
}
