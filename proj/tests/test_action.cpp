#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>

#include "ssg/action.hpp"
#include "ssg/errors.hpp"
#include "ssg/model_io.hpp"
#include "ssg/models.hpp"
#include "support.hpp"

using namespace ssg;
using ssg::test::edge;
using ssg::test::path;

namespace {

// The same model with the generic automaton backend.
ActionSystem as_automaton(const ActionSystem& sys) { return parse_model(dump_canonical(emit_model(sys))); }

std::vector<int> random_word(std::mt19937_64& rng, std::size_t generators, int max_len) {
  std::uniform_int_distribution<int> len(0, max_len);
  std::uniform_int_distribution<int> letter(1, static_cast<int>(generators));
  std::bernoulli_distribution sign;
  std::vector<int> w(static_cast<std::size_t>(len(rng)));
  for (int& x : w) x = letter(rng) * (sign(rng) ? 1 : -1);
  return w;
}

std::vector<Path> all_paths_up_to(const KGraph& g, int length) {
  std::vector<Path> out;
  for (const auto& d : [&] {
         std::vector<Degree> ds;
         const int k = g.k();
         std::vector<int> cur(static_cast<std::size_t>(k), 0);
         while (true) {
           if (total(cur) <= length) ds.push_back(cur);
           int c = 0;
           while (c < k && ++cur[static_cast<std::size_t>(c)] > length) cur[static_cast<std::size_t>(c++)] = 0;
           if (c == k) break;
         }
         return ds;
       }()) {
    auto p = g.paths_of_degree(d);
    out.insert(out.end(), p.begin(), p.end());
  }
  return out;
}

// Pseudo-freeness by brute force over short paths and a finite element set.
bool brute_pseudo_free(ActionSystem& sys, const std::vector<GroupElement>& elements, int length) {
  const auto paths = all_paths_up_to(sys.graph(), length);
  for (auto g : elements) {
    if (sys.is_identity(g)) continue;
    for (const auto& mu : paths)
      if (!mu.is_vertex() && sys.act_path(g, mu) == mu && sys.is_identity(sys.restrict_path(g, mu))) return false;
  }
  return true;
}

// Local faithfulness by brute force: some g != 1 fixes every path of
// length <= `length` at some vertex.
bool brute_locally_faithful(ActionSystem& sys, const std::vector<GroupElement>& elements, int length) {
  const KGraph& gr = sys.graph();
  const auto paths = all_paths_up_to(gr, length);
  for (auto g : elements) {
    if (sys.is_identity(g)) continue;
    for (VertexId v = 0; v < gr.num_vertices(); ++v) {
      bool fixes_all = true;
      for (const auto& mu : paths)
        if (mu.range() == v && sys.act_path(g, mu) != mu) fixes_all = false;
      if (fixes_all) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("binary odometer action") {
  auto sys = build_odometer({2});
  const KGraph& g = sys.graph();
  const GroupElement one = sys.generator(0);
  const Path x0 = g.edge_path(edge(g, 1, 0)), x1 = g.edge_path(edge(g, 1, 1));

  CHECK(sys.act_path(sys.identity(), x1) == x1);
  CHECK(sys.act_path(one, x1) == x0);
  CHECK(sys.act_path(one, x0) == x1);
  CHECK(sys.act_path(one, path(g, {{1, 1}, {1, 1}})) == path(g, {{1, 0}, {1, 0}}));
  CHECK(sys.restrict_path(sys.identity(), x1) == sys.identity());
  CHECK(sys.restrict_path(one, x0) == sys.identity());
  CHECK(sys.restrict_path(one, x1) == one);
  CHECK(sys.restrict_path(one, path(g, {{1, 1}, {1, 1}})) == one);

  const GroupElement two = sys.element_from_word(std::vector<int>{1, 1});
  CHECK(sys.equal(sys.multiply(one, one), two));
  CHECK_FALSE(sys.equal(two, sys.identity()));
  CHECK(sys.equal(sys.multiply(one, sys.inverse(one)), sys.identity()));
}

TEST_CASE("binary odometer with the automaton backend") {
  auto sys = as_automaton(build_odometer({2}));
  CHECK(sys.backend_kind() == "automaton");
  const GroupElement one = sys.generator(0);
  const GroupElement two = sys.multiply(one, one);
  CHECK_FALSE(sys.equal(two, sys.identity()));
  CHECK(sys.equal(sys.multiply(two, sys.inverse(two)), sys.identity()));
  CHECK(bisimulation_equal(sys, sys.multiply(sys.inverse(one), two), one));
  CHECK_FALSE(bisimulation_equal(sys, two, sys.identity()));
}

TEST_CASE("restriction closures") {
  auto bin = build_odometer({2});
  const GroupElement id = bin.identity();
  CHECK(bin.restriction_closure(std::vector<GroupElement>{id}).size() == 1);
  const auto c = bin.restriction_closure(bin.generators());
  CHECK(c.size() == 2);
  CHECK(std::count(c.begin(), c.end(), id) == 1);

  auto odo = build_odometer({2, 3});
  CHECK(odo.restriction_closure(odo.generators()).size() == 2);
  auto generic = as_automaton(odo);
  CHECK(generic.restriction_closure(generic.generators()).size() == 2);
}

TEST_CASE("automaton equality agrees with integer arithmetic") {
  for (const std::vector<int>& n : std::vector<std::vector<int>>{{2}, {2, 3}, {3, 3}}) {
    auto integer = build_odometer(n);
    auto generic = as_automaton(integer);
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 150; ++trial) {
      const auto u = random_word(rng, 1, 10), v = random_word(rng, 1, 10);
      const bool expect = integer.element_from_word(u) == integer.element_from_word(v);
      const GroupElement gu = generic.element_from_word(u), gv = generic.element_from_word(v);
      CHECK(generic.equal(gu, gv) == expect);
      CHECK(bisimulation_equal(generic, gu, gv) == expect);
    }
  }
}

TEST_CASE("action laws hold on random elements and paths") {
  std::vector<std::pair<std::string, ActionSystem>> systems;
  systems.emplace_back("odometer 2,3", build_odometer({2, 3}));
  systems.emplace_back("odometer 2,3 automaton", as_automaton(build_odometer({2, 3})));
  systems.emplace_back("katsura two vertex", build_katsura({{2, 1}, {1, 2}}, {{1, 1}, {1, 1}}));
  systems.emplace_back("katsura two vertex automaton", as_automaton(build_katsura({{2, 1}, {1, 2}}, {{1, 1}, {1, 1}})));
  systems.emplace_back("not pseudo free", fixture_not_pseudo_free());
  for (auto& [name, sys] : systems) {
    INFO(name);
    const KGraph& g = sys.graph();
    std::mt19937_64 rng(3);
    const Degree d = g.k() == 1 ? Degree{2} : Degree{1, 1};
    const Degree d2 = g.k() == 1 ? Degree{1} : Degree{0, 1};
    for (int trial = 0; trial < 40; ++trial) {
      const GroupElement a = sys.element_from_word(random_word(rng, sys.num_generators(), 5));
      const GroupElement b = sys.element_from_word(random_word(rng, sys.num_generators(), 5));
      const GroupElement ab = sys.multiply(a, b);
      for (const Path& mu : g.paths_of_degree(d)) {
        CHECK(sys.act_path(ab, mu) == sys.act_path(a, sys.act_path(b, mu)));
        CHECK(sys.restrict_path(ab, mu) ==
              sys.multiply(sys.restrict_path(a, sys.act_path(b, mu)), sys.restrict_path(b, mu)));
        for (const Path& nu : g.paths_of_degree(d2, mu.source())) {
          const Path munu = g.compose(mu, nu);
          const Path expect = g.compose(sys.act_path(a, mu), sys.act_path(sys.restrict_path(a, mu), nu));
          CHECK(sys.act_path(a, munu) == expect);
          CHECK(sys.restrict_path(a, munu) == sys.restrict_path(sys.restrict_path(a, mu), nu));
        }
      }
      CHECK(sys.multiply(a, sys.inverse(a)) == sys.identity());
    }
  }
}

TEST_CASE("built-in models satisfy the standing hypotheses") {
  for (const auto& m : builtin_models()) {
    if (m.family == "graph") continue;
    INFO(m.name);
    auto sys = m.build();
    CHECK(validate_action(sys).ok());
    const auto states = sys.restriction_closure(sys.generators());
    CHECK(states.size() == 2);
    CHECK(check_pseudo_free(sys, states).holds);
    CHECK(check_locally_faithful(sys, states).holds);
    auto ball = sys.group_ball(2);
    CHECK(brute_pseudo_free(sys, ball, 3));
    CHECK(brute_locally_faithful(sys, ball, 3));
  }
}

TEST_CASE("negative fixtures return witnesses") {
  SUBCASE("not pseudo free") {
    auto sys = fixture_not_pseudo_free();
    auto states = sys.restriction_closure(sys.generators());
    const auto v = check_pseudo_free(sys, states);
    CHECK_FALSE(v.holds);
    REQUIRE(v.witness.has_value());
    CHECK_FALSE(sys.is_identity(v.witness->element));
    CHECK(sys.act_path(v.witness->element, v.witness->path) == v.witness->path);
    CHECK(sys.is_identity(sys.restrict_path(v.witness->element, v.witness->path)));
    CHECK_FALSE(brute_pseudo_free(sys, states, 2));
    CHECK(check_locally_faithful(sys, states).holds);
    CHECK(brute_locally_faithful(sys, sys.group_ball(2), 3));
  }
  SUBCASE("not locally faithful") {
    auto sys = fixture_not_locally_faithful();
    auto states = sys.restriction_closure(sys.generators());
    const auto v = check_locally_faithful(sys, states);
    CHECK_FALSE(v.holds);
    REQUIRE(v.witness.has_value());
    CHECK_FALSE(sys.is_identity(v.witness->element));
    for (const Path& mu : sys.graph().paths_of_degree({3}, v.witness->path.range()))
      CHECK(sys.act_path(v.witness->element, mu) == mu);
    CHECK_FALSE(brute_locally_faithful(sys, states, 3));
  }
  SUBCASE("generator acting as the identity") {
    auto sys = fixture_trivial_generator();
    auto states = sys.restriction_closure(sys.generators());
    const auto pf = check_pseudo_free(sys, states);
    CHECK_FALSE(pf.holds);
    REQUIRE(pf.witness.has_value());
    CHECK(pf.witness->path.length() == 1);
    CHECK_FALSE(check_locally_faithful(sys, states).holds);
  }
}

TEST_CASE("action validation messages") {
  auto odo = build_odometer({2, 3});
  const KGraph& g = odo.graph();

  SUBCASE("color change") {
    auto tables = odo.tables();
    std::swap(tables[0].image[edge(g, 1, 0)], tables[0].image[edge(g, 2, 0)]);
    CHECK(validate_generator_tables(g, tables).mentions("color preservation violated"));
  }
  SUBCASE("not a bijection") {
    auto tables = odo.tables();
    tables[0].image[edge(g, 1, 0)] = tables[0].image[edge(g, 1, 1)];
    CHECK(validate_generator_tables(g, tables).mentions("bijection violated"));
  }
  SUBCASE("square incompatibility") {
    // Rotating color 2 without carry breaks the factorization rule.
    auto tables = odo.tables();
    for (std::uint32_t t = 0; t < 3; ++t) {
      tables[0].image[edge(g, 2, t)] = edge(g, 2, (t + 1) % 3);
      tables[0].restriction[edge(g, 2, t)] = {};
    }
    auto sys = ActionSystem::from_tables(odo.graph_ptr(), tables);
    CHECK(validate_action(sys).mentions("square compatibility violated"));
  }
  SUBCASE("unknown restriction letter") {
    auto tables = odo.tables();
    tables[0].restriction[0] = {2};
    CHECK(validate_generator_tables(g, tables).mentions("restriction word references unknown generator"));
  }
  SUBCASE("odometers are valid") { CHECK(validate_action(odo).ok()); }
}

TEST_CASE("closure cap is enforced") {
  // Multiplier 3 over two residues: the restrictions of n grow like 3n/2.
  auto integer = build_division_graph({{2}}, {{3}});
  CHECK_THROWS_AS(integer.restriction_closure(integer.generators(), 8), ClosureExceeded);
  // The automaton backend materializes every restriction up front, so the
  // same tables are rejected while building.
  CHECK_THROWS_AS(ActionSystem::from_tables(integer.graph_ptr(), integer.tables(), ActionCaps{64, 64}), ClosureExceeded);
}
