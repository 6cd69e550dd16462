#include "ssg/kgraph.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <queue>
#include <set>
#include <sstream>

#include "ssg/errors.hpp"

namespace ssg {

Degree zero_degree(int k) { return Degree(static_cast<std::size_t>(k), 0); }

Degree unit_degree(int k, int color) {
  Degree d = zero_degree(k);
  d.at(static_cast<std::size_t>(color)) = 1;
  return d;
}

Degree operator+(const Degree& a, const Degree& b) {
  Degree r(a);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}

Degree operator-(const Degree& a, const Degree& b) {
  Degree r(a);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  return r;
}

Degree join(const Degree& a, const Degree& b) {
  Degree r(a);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = std::max(a[i], b[i]);
  return r;
}

Degree meet(const Degree& a, const Degree& b) {
  Degree r(a);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = std::min(a[i], b[i]);
  return r;
}

bool leq(const Degree& a, const Degree& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

int total(const Degree& d) {
  int t = 0;
  for (int x : d) t += x;
  return t;
}

std::string to_string(const Degree& d) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < d.size(); ++i) os << (i ? "," : "") << d[i];
  os << ')';
  return os.str();
}

bool ValidationReport::mentions(const std::string& needle) const {
  return std::any_of(issues.begin(), issues.end(),
                     [&](const std::string& s) { return s.find(needle) != std::string::npos; });
}

namespace {

std::vector<int> canonical_colors(const Degree& d) {
  std::vector<int> colors;
  for (std::size_t c = 0; c < d.size(); ++c)
    for (int t = 0; t < d[c]; ++t) colors.push_back(static_cast<int>(c));
  return colors;
}

}  // namespace

KGraph::KGraph(int k, std::size_t num_vertices, std::vector<Edge> edges, std::vector<Square> squares)
    : k_(k), num_vertices_(num_vertices), edges_(std::move(edges)), squares_(std::move(squares)) {
  const std::size_t kk = static_cast<std::size_t>(k_);
  into_.assign(num_vertices_ * kk, {});
  out_of_.assign(num_vertices_ * kk, {});
  for (EdgeId e = 0; e < edges_.size(); ++e) {
    const Edge& ed = edges_[e];
    if (ed.color < 0 || ed.color >= k_ || ed.range >= num_vertices_ || ed.source >= num_vertices_)
      continue;  // reported by validate_kgraph
    into_[ed.range * kk + static_cast<std::size_t>(ed.color)].push_back(e);
    out_of_[ed.source * kk + static_cast<std::size_t>(ed.color)].push_back(e);
  }
  const std::size_t n = edges_.size();
  swap_table_.assign(n * n, {kNone, kNone});
  auto put = [&](EdgeId a, EdgeId b, EdgeId c, EdgeId d) {
    if (a >= n || b >= n || c >= n || d >= n) return;
    auto& slot = swap_table_[a * n + b];
    if (slot.first == kNone) slot = {c, d};
  };
  for (const Square& s : squares_) {
    put(s.f, s.g, s.g2, s.f2);
    put(s.g2, s.f2, s.f, s.g);
  }
}

std::optional<EdgeId> KGraph::find_edge(int color, std::uint32_t label) const {
  for (EdgeId e = 0; e < edges_.size(); ++e)
    if (edges_[e].color == color && edges_[e].label == label) return e;
  return std::nullopt;
}

const std::vector<EdgeId>& KGraph::edges_into(VertexId v, int color) const {
  return into_.at(v * static_cast<std::size_t>(k_) + static_cast<std::size_t>(color));
}

const std::vector<EdgeId>& KGraph::edges_out_of(VertexId v, int color) const {
  return out_of_.at(v * static_cast<std::size_t>(k_) + static_cast<std::size_t>(color));
}

std::optional<std::pair<EdgeId, EdgeId>> KGraph::try_exchange(EdgeId first, EdgeId second) const {
  const auto& slot = swap_table_.at(first * edges_.size() + second);
  if (slot.first == kNone) return std::nullopt;
  return slot;
}

std::pair<EdgeId, EdgeId> KGraph::exchange(EdgeId first, EdgeId second) const {
  auto r = try_exchange(first, second);
  if (!r) {
    std::ostringstream os;
    os << "no factorization square for edges " << first << "," << second;
    throw InvalidGraph(os.str());
  }
  return *r;
}

std::vector<EdgeId> KGraph::reorder(std::vector<EdgeId> seq, std::span<const int> colors) const {
  for (std::size_t t = 0; t < seq.size(); ++t) {
    std::size_t j = t;
    while (j < seq.size() && edges_[seq[j]].color != colors[t]) ++j;
    if (j == seq.size()) throw BadRange("color pattern does not match the path degree");
    for (; j > t; --j) {
      auto [a, b] = exchange(seq[j - 1], seq[j]);
      seq[j - 1] = a;
      seq[j] = b;
    }
  }
  return seq;
}

Path KGraph::vertex_path(VertexId v) const { return Path(v, v, {}, zero_degree(k_)); }

Path KGraph::edge_path(EdgeId e) const {
  const Edge& ed = edges_.at(e);
  return Path(ed.range, ed.source, {e}, unit_degree(k_, ed.color));
}

Path KGraph::path_from_edges(std::span<const EdgeId> edges) const {
  if (edges.empty()) throw BadRange("empty edge sequence has no vertex");
  Degree d = zero_degree(k_);
  for (std::size_t t = 0; t < edges.size(); ++t) {
    const Edge& ed = edges_.at(edges[t]);
    if (t > 0 && edges_[edges[t - 1]].source != ed.range)
      throw NonComposable("edge sequence is not composable");
    ++d[static_cast<std::size_t>(ed.color)];
  }
  std::vector<EdgeId> seq(edges.begin(), edges.end());
  const auto colors = canonical_colors(d);
  seq = reorder(std::move(seq), colors);
  return Path(edges_[edges.front()].range, edges_[edges.back()].source, std::move(seq), std::move(d));
}

Path KGraph::compose(const Path& mu, const Path& nu) const {
  if (mu.source() != nu.range()) {
    std::ostringstream os;
    os << "source " << mu.source() << " != range " << nu.range();
    throw NonComposable(os.str());
  }
  if (mu.is_vertex()) return nu;
  if (nu.is_vertex()) return mu;
  std::vector<EdgeId> seq = mu.edges();
  seq.insert(seq.end(), nu.edges().begin(), nu.edges().end());
  Degree d = mu.degree() + nu.degree();
  seq = reorder(std::move(seq), canonical_colors(d));
  return Path(mu.range(), nu.source(), std::move(seq), std::move(d));
}

Path KGraph::segment(const Path& mu, const Degree& from, const Degree& to) const {
  const Degree zero = zero_degree(k_);
  if (!leq(zero, from) || !leq(from, to) || !leq(to, mu.degree()))
    throw BadRange("need 0 <= " + to_string(from) + " <= " + to_string(to) + " <= " +
                   to_string(mu.degree()));
  std::vector<int> pattern = canonical_colors(from);
  const auto mid = canonical_colors(to - from);
  const auto tail = canonical_colors(mu.degree() - to);
  pattern.insert(pattern.end(), mid.begin(), mid.end());
  pattern.insert(pattern.end(), tail.begin(), tail.end());
  const std::vector<EdgeId> seq = reorder(mu.edges(), pattern);
  const std::size_t a = static_cast<std::size_t>(total(from));
  const std::size_t b = static_cast<std::size_t>(total(to));
  if (a == b) {
    const VertexId v = a == 0 ? mu.range() : edges_[seq[a - 1]].source;
    return vertex_path(v);
  }
  std::vector<EdgeId> piece(seq.begin() + static_cast<std::ptrdiff_t>(a),
                            seq.begin() + static_cast<std::ptrdiff_t>(b));
  const VertexId r = edges_[piece.front()].range;
  const VertexId s = edges_[piece.back()].source;
  return Path(r, s, std::move(piece), to - from);
}

std::vector<Path> KGraph::paths_of_degree(const Degree& n, std::optional<VertexId> range,
                                          std::optional<VertexId> source) const {
  std::vector<Path> out;
  const auto colors = canonical_colors(n);
  std::vector<EdgeId> stack;
  // Depth-first over the canonical color pattern.
  auto dfs = [&](auto&& self, VertexId start, VertexId at) -> void {
    if (stack.size() == colors.size()) {
      if (!source || *source == at) out.emplace_back(start, at, stack, n);
      return;
    }
    for (EdgeId e : edges_into(at, colors[stack.size()])) {
      stack.push_back(e);
      self(self, start, edges_[e].source);
      stack.pop_back();
    }
  };
  for (VertexId v = 0; v < num_vertices_; ++v) {
    if (range && *range != v) continue;
    dfs(dfs, v, v);
  }
  if (!colors.empty())
    std::sort(out.begin(), out.end(),
              [](const Path& a, const Path& b) { return a.edges() < b.edges(); });
  return out;
}

std::vector<std::pair<Path, Path>> KGraph::lambda_min(const Path& mu, const Path& nu) const {
  std::vector<std::pair<Path, Path>> out;
  if (mu.range() != nu.range()) return out;
  const Degree m = join(mu.degree(), nu.degree());
  for (const Path& alpha : paths_of_degree(m - mu.degree(), mu.source())) {
    const Path lambda = compose(mu, alpha);
    if (segment(lambda, zero_degree(k_), nu.degree()) != nu) continue;
    out.emplace_back(alpha, segment(lambda, nu.degree(), m));
  }
  return out;
}

std::string KGraph::describe(const Path& p) const {
  std::ostringstream os;
  if (p.is_vertex()) {
    os << "v" << p.range();
    return os.str();
  }
  for (std::size_t t = 0; t < p.edges().size(); ++t) {
    const Edge& e = edges_[p.edges()[t]];
    os << (t ? " " : "") << "x" << e.color + 1 << "_" << e.label;
  }
  return os.str();
}

ValidationReport validate_kgraph(const KGraph& g) {
  ValidationReport rep;
  const int k = g.k();
  const std::size_t n = g.num_edges();
  if (k < 1) rep.add("rank k must be at least 1");
  if (g.num_vertices() == 0) rep.add("graph has no vertices");
  bool edges_ok = true;
  std::set<std::pair<int, std::uint32_t>> labels;
  for (EdgeId e = 0; e < n; ++e) {
    const Edge& ed = g.edge(e);
    std::ostringstream os;
    if (ed.color < 0 || ed.color >= k) {
      os << "edge " << e << " has color " << ed.color + 1 << " outside 1.." << k;
      rep.add(os.str());
      edges_ok = false;
    } else if (ed.source >= g.num_vertices() || ed.range >= g.num_vertices()) {
      os << "edge " << e << " has an endpoint outside the vertex set";
      rep.add(os.str());
      edges_ok = false;
    }
    if (!labels.insert({ed.color, ed.label}).second) {
      std::ostringstream d;
      d << "duplicate edge id " << ed.label << " in color " << ed.color + 1;
      rep.add(d.str());
    }
  }
  if (!edges_ok || k < 1) return rep;

  for (VertexId v = 0; v < g.num_vertices(); ++v)
    for (int c = 0; c < k; ++c) {
      if (g.edges_into(v, c).empty()) {
        std::ostringstream os;
        os << "source-free violated: vertex " << v << " is the range of no color-" << c + 1 << " edge";
        rep.add(os.str());
      }
      if (g.edges_out_of(v, c).empty()) {
        std::ostringstream os;
        os << "sink-free violated: vertex " << v << " is the source of no color-" << c + 1 << " edge";
        rep.add(os.str());
      }
    }

  // Square tables: per color pair, the keys must be exactly the composable
  // (i,j) pairs and the values exactly the composable (j,i) pairs.
  bool squares_ok = true;
  std::map<std::pair<int, int>, std::set<std::pair<EdgeId, EdgeId>>> keys, values;
  for (const Square& s : g.squares()) {
    if (s.f >= n || s.g >= n || s.g2 >= n || s.f2 >= n) {
      rep.add("square references an unknown edge");
      squares_ok = false;
      continue;
    }
    const Edge &f = g.edge(s.f), &gg = g.edge(s.g), &g2 = g.edge(s.g2), &f2 = g.edge(s.f2);
    const int i = f.color, j = gg.color;
    if (!(i < j) || f2.color != i || g2.color != j) {
      rep.add("square colors are inconsistent");
      squares_ok = false;
      continue;
    }
    if (f.source != gg.range || g2.source != f2.range || g2.range != f.range || f2.source != gg.source) {
      std::ostringstream os;
      os << "square endpoints violated for edges x" << i + 1 << "_" << f.label << " x" << j + 1 << "_"
         << gg.label;
      rep.add(os.str());
      squares_ok = false;
    }
    if (!keys[{i, j}].insert({s.f, s.g}).second || !values[{i, j}].insert({s.g2, s.f2}).second) {
      std::ostringstream os;
      os << "bijection violated: colors " << i + 1 << "," << j + 1 << " have a repeated square entry";
      rep.add(os.str());
      squares_ok = false;
    }
  }
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      std::set<std::pair<EdgeId, EdgeId>> ij, ji;
      for (EdgeId a = 0; a < n; ++a)
        for (EdgeId b = 0; b < n; ++b) {
          const Edge &ea = g.edge(a), &eb = g.edge(b);
          if (ea.source != eb.range) continue;
          if (ea.color == i && eb.color == j) ij.insert({a, b});
          if (ea.color == j && eb.color == i) ji.insert({a, b});
        }
      if (keys[{i, j}] != ij || values[{i, j}] != ji) {
        std::ostringstream os;
        os << "bijection violated: square table for colors " << i + 1 << "," << j + 1
           << " does not match the composable pairs (" << ij.size() << " and " << ji.size()
           << " expected, " << keys[{i, j}].size() << " given)";
        rep.add(os.str());
        squares_ok = false;
      }
    }

  if (squares_ok && k >= 3) {
    for (EdgeId a = 0; a < n; ++a)
      for (EdgeId b : [&] {
             std::vector<EdgeId> v;
             for (int c = g.edge(a).color + 1; c < k; ++c)
               for (EdgeId x : g.edges_into(g.edge(a).source, c)) v.push_back(x);
             return v;
           }())
        for (int c = g.edge(b).color + 1; c < k; ++c)
          for (EdgeId cc : g.edges_into(g.edge(b).source, c)) {
            std::array<EdgeId, 3> left{a, b, cc}, right{a, b, cc};
            auto swap_at = [&](std::array<EdgeId, 3>& t, int pos) {
              auto [x, y] = g.exchange(t[pos], t[pos + 1]);
              t[pos] = x;
              t[pos + 1] = y;
            };
            swap_at(left, 0), swap_at(left, 1), swap_at(left, 0);
            swap_at(right, 1), swap_at(right, 0), swap_at(right, 1);
            if (left != right) {
              std::ostringstream os;
              os << "associativity violated on edges " << a << "," << b << "," << cc;
              rep.add(os.str());
            }
          }
  }
  return rep;
}

IntMatrix coordinate_matrix(const KGraph& g, int color) {
  const auto nv = static_cast<Eigen::Index>(g.num_vertices());
  IntMatrix t = IntMatrix::Zero(nv, nv);
  for (const Edge& e : g.edges())
    if (e.color == color) t(e.range, e.source) += 1;
  return t;
}

bool strongly_connected(const KGraph& g) {
  const std::size_t nv = g.num_vertices();
  if (nv == 0) return false;
  auto reach = [&](bool forward) {
    std::vector<char> seen(nv, 0);
    std::queue<VertexId> q;
    q.push(0);
    seen[0] = 1;
    while (!q.empty()) {
      const VertexId v = q.front();
      q.pop();
      for (const Edge& e : g.edges()) {
        const VertexId from = forward ? e.source : e.range;
        const VertexId to = forward ? e.range : e.source;
        if (from == v && !seen[to]) {
          seen[to] = 1;
          q.push(to);
        }
      }
    }
    return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
  };
  return reach(true) && reach(false);
}

}  // namespace ssg
