#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "ssg/action.hpp"
#include "ssg/kgraph.hpp"
#include "ssg/lattice.hpp"

namespace ssg {

using IntGrid = std::vector<std::vector<std::int64_t>>;

// One vertex, n_i loops x^i_0..x^i_{n_i - 1} of color i, Z acting by the
// mixed-radix carry.
ActionSystem build_odometer(const std::vector<int>& n);

// Katsura-style 1-graph from an edge-count matrix and a multiplier matrix.
ActionSystem build_katsura(const IntGrid& t, const IntGrid& b);
std::vector<std::string> katsura_spec_violations(const IntGrid& t, const IntGrid& b);
// The same Euclidean-division construction without the Katsura parameter checks.
ActionSystem build_division_graph(const IntGrid& t, const IntGrid& b);

// Plain 1-graph from an adjacency matrix (entry (v, w) counts edges w -> v)
// with the trivial group.
ActionSystem build_matrix_graph(const IntGrid& t);

// A digit word in one color, least significant digit first.
struct ColorWord {
  int color = 0;  // 0-based
  std::vector<int> digits;
};

struct CommuteResult {
  std::vector<ColorWord> left;   // u' with the colors of u
  std::vector<ColorWord> right;  // v' with the colors of v
};

// Rewrites x_u x_v as x_{v'} x_{u'} when u and v use disjoint colors.
CommuteResult odometer_commute(const std::vector<int>& n, const std::vector<ColorWord>& u,
                               const std::vector<ColorWord>& v);

// Mixed-radix value of an odometer path (colors ascending, first edge least significant).
std::string odometer_value(const std::vector<int>& n, const KGraph& g, const Path& mu);

// Path of degree q with the same mixed-radix value as mu; needs n^p = n^q.
Path gamma_bijection(const std::vector<int>& n, const KGraph& g, const Degree& p, const Degree& q, const Path& mu);

// Exact kernel {z : prod n_i^{z_i} = 1} via prime exponents.
std::vector<IntVector> expected_odometer_per(const std::vector<int>& n);

enum class Tristate { yes, no, unknown };
std::string to_string(Tristate t);

// For every restriction-closure state and vertex, search for a path from that
// vertex along which the state restricts to the identity.
Tristate check_degenerate_property(ActionSystem& sys, std::size_t depth_cap = 64);

struct BuiltinModel {
  std::string name;
  std::string family;  // odometer, katsura, graph, fixture
  std::vector<int> odometer_n;
  std::function<ActionSystem()> build;
};

// Registry of named models shipped with the library.
std::vector<BuiltinModel> builtin_models();

// Handcrafted fixtures for negative tests.
ActionSystem fixture_not_pseudo_free();
ActionSystem fixture_not_locally_faithful();
ActionSystem fixture_vertex_swap();
ActionSystem fixture_trivial_generator();

}  // namespace ssg
