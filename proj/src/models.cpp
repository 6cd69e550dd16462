#include "ssg/models.hpp"

#include <map>
#include <queue>
#include <set>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

#include "ssg/errors.hpp"

namespace ssg {

using boost::multiprecision::cpp_int;

namespace {

void check_radices(const std::vector<int>& n) {
  if (n.empty()) throw DomainError("odometer needs at least one color");
  for (int x : n)
    if (x < 2) throw DomainError("odometer radices must be at least 2");
}

cpp_int word_value(const std::vector<int>& n, const ColorWord& w) {
  cpp_int v = 0, scale = 1;
  for (int d : w.digits) {
    v += scale * d;
    scale *= n[static_cast<std::size_t>(w.color)];
  }
  return v;
}

cpp_int block_modulus(const std::vector<int>& n, const ColorWord& w) {
  cpp_int m = 1;
  for (std::size_t t = 0; t < w.digits.size(); ++t) m *= n[static_cast<std::size_t>(w.color)];
  return m;
}

void check_words(const std::vector<int>& n, const std::vector<ColorWord>& ws) {
  for (const auto& w : ws) {
    if (w.color < 0 || static_cast<std::size_t>(w.color) >= n.size()) throw DomainError("word color out of range");
    for (int d : w.digits)
      if (d < 0 || d >= n[static_cast<std::size_t>(w.color)])
        throw DomainError("digit " + std::to_string(d) + " out of range for color " + std::to_string(w.color + 1));
  }
}

// Mixed-radix value of a sequence of blocks, the first block least significant.
std::pair<cpp_int, cpp_int> blocks_value(const std::vector<int>& n, const std::vector<ColorWord>& ws) {
  cpp_int v = 0, scale = 1;
  for (const auto& w : ws) {
    v += scale * word_value(n, w);
    scale *= block_modulus(n, w);
  }
  return {v, scale};
}

std::vector<ColorWord> split_value(const std::vector<int>& n, cpp_int value, const std::vector<ColorWord>& shape) {
  std::vector<ColorWord> out;
  for (const auto& w : shape) {
    ColorWord r{w.color, {}};
    const int radix = n[static_cast<std::size_t>(w.color)];
    for (std::size_t t = 0; t < w.digits.size(); ++t) {
      r.digits.push_back(static_cast<int>(value % radix));
      value /= radix;
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<ColorWord> path_blocks(const KGraph& g, const Path& mu) {
  std::vector<ColorWord> blocks;
  for (EdgeId e : mu.edges()) {
    const Edge& ed = g.edge(e);
    if (blocks.empty() || blocks.back().color != ed.color) blocks.push_back({ed.color, {}});
    blocks.back().digits.push_back(static_cast<int>(ed.label));
  }
  return blocks;
}

std::vector<ColorWord> degree_shape(const Degree& d) {
  std::vector<ColorWord> shape;
  for (std::size_t c = 0; c < d.size(); ++c)
    if (d[c] > 0) shape.push_back({static_cast<int>(c), std::vector<int>(static_cast<std::size_t>(d[c]), 0)});
  return shape;
}

cpp_int radix_power(const std::vector<int>& n, const Degree& d) {
  cpp_int m = 1;
  for (std::size_t c = 0; c < d.size(); ++c)
    for (int t = 0; t < d[c]; ++t) m *= n[c];
  return m;
}

}  // namespace

ActionSystem build_odometer(const std::vector<int>& n) {
  check_radices(n);
  const int k = static_cast<int>(n.size());
  std::vector<Edge> edges;
  std::vector<EdgeId> offset;
  for (int c = 0; c < k; ++c) {
    offset.push_back(static_cast<EdgeId>(edges.size()));
    for (int s = 0; s < n[static_cast<std::size_t>(c)]; ++s)
      edges.push_back({c, static_cast<std::uint32_t>(s), 0, 0});
  }
  std::vector<Square> squares;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      const int ni = n[static_cast<std::size_t>(i)], nj = n[static_cast<std::size_t>(j)];
      for (int s = 0; s < ni; ++s)
        for (int t = 0; t < nj; ++t) {
          const int x = s + t * ni;
          squares.push_back({offset[static_cast<std::size_t>(i)] + static_cast<EdgeId>(s),
                             offset[static_cast<std::size_t>(j)] + static_cast<EdgeId>(t),
                             offset[static_cast<std::size_t>(j)] + static_cast<EdgeId>(x % nj),
                             offset[static_cast<std::size_t>(i)] + static_cast<EdgeId>(x / nj)});
        }
    }
  auto graph = std::make_shared<const KGraph>(k, 1, std::move(edges), std::move(squares));
  std::vector<DivisionClass> classes;
  for (int c = 0; c < k; ++c) {
    DivisionClass cls;
    for (int s = 0; s < n[static_cast<std::size_t>(c)]; ++s)
      cls.members.push_back(offset[static_cast<std::size_t>(c)] + static_cast<EdgeId>(s));
    classes.push_back(std::move(cls));
  }
  return ActionSystem::integer_division(graph, std::move(classes));
}

std::vector<std::string> katsura_spec_violations(const IntGrid& t, const IntGrid& b) {
  std::vector<std::string> out;
  const std::size_t nv = t.size();
  if (nv == 0) out.push_back("matrix must be nonempty");
  if (b.size() != nv) out.push_back("multiplier matrix must match the count matrix in shape");
  for (std::size_t v = 0; v < nv && b.size() == nv; ++v) {
    if (t[v].size() != nv || b[v].size() != nv) {
      out.push_back("matrices must be square");
      return out;
    }
    for (std::size_t w = 0; w < nv; ++w) {
      const std::string at = "(" + std::to_string(v) + "," + std::to_string(w) + ")";
      if (t[v][w] < 0) out.push_back("count matrix entry " + at + " is negative");
      if (v == w && t[v][v] < 2) out.push_back("diagonal count " + at + " must be at least 2");
      if (v == w && b[v][v] != 1) out.push_back("diagonal multiplier " + at + " must equal 1");
      if (std::abs(b[v][w]) > t[v][w]) out.push_back("multiplier " + at + " exceeds the count in absolute value");
      if ((b[v][w] == 0) != (t[v][w] == 0)) out.push_back("multiplier " + at + " is zero exactly when the count is");
    }
  }
  return out;
}

ActionSystem build_katsura(const IntGrid& t, const IntGrid& b) {
  const auto bad = katsura_spec_violations(t, b);
  if (!bad.empty()) {
    std::string msg;
    for (const auto& s : bad) msg += (msg.empty() ? "" : "; ") + s;
    throw SpecViolation(msg);
  }
  return build_division_graph(t, b);
}

ActionSystem build_division_graph(const IntGrid& t, const IntGrid& b) {
  const std::size_t nv = t.size();
  if (b.size() != nv) throw DomainError("multiplier matrix must match the count matrix in shape");
  std::vector<Edge> edges;
  std::vector<DivisionClass> classes;
  for (std::size_t v = 0; v < nv; ++v)
    for (std::size_t w = 0; w < nv; ++w) {
      if (t[v].at(w) < 0) throw DomainError("negative edge count");
      if (t[v][w] == 0) continue;
      DivisionClass cls;
      cls.multiplier = b[v].at(w);
      for (std::int64_t m = 0; m < t[v][w]; ++m) {
        cls.members.push_back(static_cast<EdgeId>(edges.size()));
        edges.push_back({0, static_cast<std::uint32_t>(edges.size()), static_cast<VertexId>(w), static_cast<VertexId>(v)});
      }
      classes.push_back(std::move(cls));
    }
  auto graph = std::make_shared<const KGraph>(1, nv, std::move(edges), std::vector<Square>{});
  return ActionSystem::integer_division(graph, std::move(classes));
}

ActionSystem build_matrix_graph(const IntGrid& t) {
  const std::size_t nv = t.size();
  std::vector<Edge> edges;
  for (std::size_t v = 0; v < nv; ++v)
    for (std::size_t w = 0; w < nv; ++w)
      for (std::int64_t m = 0; m < t[v].at(w); ++m)
        edges.push_back({0, static_cast<std::uint32_t>(edges.size()), static_cast<VertexId>(w), static_cast<VertexId>(v)});
  return ActionSystem::trivial(std::make_shared<const KGraph>(1, nv, std::move(edges), std::vector<Square>{}));
}

CommuteResult odometer_commute(const std::vector<int>& n, const std::vector<ColorWord>& u,
                               const std::vector<ColorWord>& v) {
  check_radices(n);
  check_words(n, u);
  check_words(n, v);
  std::set<int> cu, cv;
  for (const auto& w : u) cu.insert(w.color);
  for (const auto& w : v) cv.insert(w.color);
  for (int c : cu)
    if (cv.count(c)) throw DomainError("the two sides share color " + std::to_string(c + 1));
  const auto [m, mod_u] = blocks_value(n, u);
  const auto [nn, mod_v] = blocks_value(n, v);
  const cpp_int x = m + nn * mod_u;
  return {split_value(n, x / mod_v, u), split_value(n, x % mod_v, v)};
}

std::string odometer_value(const std::vector<int>& n, const KGraph& g, const Path& mu) {
  return blocks_value(n, path_blocks(g, mu)).first.str();
}

Path gamma_bijection(const std::vector<int>& n, const KGraph& g, const Degree& p, const Degree& q, const Path& mu) {
  check_radices(n);
  if (radix_power(n, p) != radix_power(n, q)) throw NotBalanced("n^p differs from n^q");
  if (mu.degree() != p) throw DomainError("path degree differs from p");
  const cpp_int value = blocks_value(n, path_blocks(g, mu)).first;
  if (total(q) == 0) return g.vertex_path(0);
  std::vector<EdgeId> edges;
  for (const auto& w : split_value(n, value, degree_shape(q)))
    for (int d : w.digits) edges.push_back(*g.find_edge(w.color, static_cast<std::uint32_t>(d)));
  return Path(0, 0, std::move(edges), q);
}

std::vector<IntVector> expected_odometer_per(const std::vector<int>& n) {
  check_radices(n);
  std::map<std::int64_t, IntVector> rows;
  for (std::size_t i = 0; i < n.size(); ++i)
    for (auto [p, e] : factorize(n[i])) {
      auto& row = rows.try_emplace(p, IntVector(n.size(), 0)).first->second;
      row[i] = e;
    }
  std::vector<IntVector> a;
  for (auto& [p, row] : rows) a.push_back(row);
  return integer_kernel(a, n.size());
}

std::string to_string(Tristate t) {
  switch (t) {
    case Tristate::yes:
      return "true";
    case Tristate::no:
      return "false";
    case Tristate::unknown:
      return "unknown";
  }
  return "unknown";
}

Tristate check_degenerate_property(ActionSystem& sys, std::size_t depth_cap) {
  std::vector<GroupElement> closure;
  try {
    closure = sys.restriction_closure(sys.generators());
  } catch (const ClosureExceeded&) {
    return Tristate::unknown;
  }
  const KGraph& g = sys.graph();
  bool capped = false;
  for (auto start : closure)
    for (VertexId v = 0; v < g.num_vertices(); ++v) {
      if (sys.is_identity(start)) continue;
      std::set<std::pair<GroupElement, VertexId>> seen{{start, v}};
      std::vector<std::pair<GroupElement, VertexId>> frontier{{start, v}};
      bool found = false;
      for (std::size_t depth = 0; depth < depth_cap && !frontier.empty() && !found; ++depth) {
        std::vector<std::pair<GroupElement, VertexId>> next;
        for (const auto& [h, w] : frontier)
          for (int c = 0; c < g.k() && !found; ++c)
            for (EdgeId e : g.edges_into(w, c)) {
              const auto r = sys.restriction(h, e);
              if (sys.is_identity(r)) {
                found = true;
                break;
              }
              if (seen.insert({r, g.edge(e).source}).second) next.emplace_back(r, g.edge(e).source);
            }
        frontier.swap(next);
      }
      if (found) continue;
      if (frontier.empty()) return Tristate::no;
      capped = true;
    }
  return capped ? Tristate::unknown : Tristate::yes;
}

namespace {

std::shared_ptr<const KGraph> one_graph(std::size_t nv, const std::vector<std::pair<VertexId, VertexId>>& range_source) {
  std::vector<Edge> edges;
  for (const auto& [r, s] : range_source)
    edges.push_back({0, static_cast<std::uint32_t>(edges.size()), s, r});
  return std::make_shared<const KGraph>(1, nv, std::move(edges), std::vector<Square>{});
}

GeneratorTable plain_table(std::string name, std::vector<EdgeId> image) {
  GeneratorTable t;
  t.name = std::move(name);
  t.restriction.assign(image.size(), {});
  t.image = std::move(image);
  return t;
}

}  // namespace

ActionSystem fixture_not_pseudo_free() {
  // One vertex with three loops; the generator fixes the first loop with
  // trivial restriction and swaps the other two.
  auto g = one_graph(1, {{0, 0}, {0, 0}, {0, 0}});
  return ActionSystem::from_tables(g, {plain_table("a", {0, 2, 1})});
}

ActionSystem fixture_not_locally_faithful() {
  // Two vertices with two loops each and one edge each way; the generator
  // is trivial on everything entering v0 and swaps the loops at v1.
  auto g = one_graph(2, {{0, 0}, {0, 0}, {1, 1}, {1, 1}, {1, 0}, {0, 1}});
  return ActionSystem::from_tables(g, {plain_table("a", {0, 1, 3, 2, 4, 5})});
}

ActionSystem fixture_vertex_swap() {
  // Fibonacci graph with a generator that swaps the two vertices but fixes
  // every edge, so it is not a graph automorphism.
  auto g = one_graph(2, {{0, 0}, {0, 1}, {1, 0}});
  GeneratorTable t = plain_table("a", {0, 1, 2});
  t.vertex_image = std::vector<VertexId>{1, 0};
  return ActionSystem::from_tables(g, {t});
}

ActionSystem fixture_trivial_generator() {
  ActionSystem base = build_odometer({2});
  std::vector<GeneratorTable> tables = base.tables();
  tables.push_back(plain_table("b", {0, 1}));
  return ActionSystem::from_tables(base.graph_ptr(), tables);
}

std::vector<BuiltinModel> builtin_models() {
  std::vector<BuiltinModel> out;
  for (const std::vector<int>& n : std::vector<std::vector<int>>{{2}, {3}, {2, 2}, {2, 3}, {2, 4}, {3, 3}, {6, 2, 3}}) {
    std::string name = "odometer";
    for (int x : n) name += "_" + std::to_string(x);
    out.push_back({name, "odometer", n, [n] { return build_odometer(n); }});
  }
  out.push_back({"katsura_2_1", "katsura", {}, [] { return build_katsura({{2}}, {{1}}); }});
  // Off the Katsura parameter range (diagonal multiplier 2), but still a
  // finite-state self-similar action worth checking.
  out.push_back({"division_3_2", "katsura", {}, [] { return build_division_graph({{3}}, {{2}}); }});
  out.push_back({"katsura_two_vertex", "katsura", {},
                 [] { return build_katsura({{2, 1}, {1, 2}}, {{1, 1}, {1, 1}}); }});
  out.push_back({"fibonacci", "graph", {}, [] { return build_matrix_graph({{1, 1}, {1, 0}}); }});
  return out;
}

}  // namespace ssg
