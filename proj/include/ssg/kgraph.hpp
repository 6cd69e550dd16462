#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace ssg {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;  // dense index into KGraph::edges()
using Degree = std::vector<int>;

Degree zero_degree(int k);
Degree unit_degree(int k, int color);
Degree operator+(const Degree& a, const Degree& b);
Degree operator-(const Degree& a, const Degree& b);
Degree join(const Degree& a, const Degree& b);  // coordinatewise max
Degree meet(const Degree& a, const Degree& b);  // coordinatewise min
bool leq(const Degree& a, const Degree& b);
int total(const Degree& d);
std::string to_string(const Degree& d);

// Colors are 0-based internally; `label` is the edge id within its color class.
struct Edge {
  int color = 0;
  std::uint32_t label = 0;
  VertexId source = 0;
  VertexId range = 0;
};

// Factorization square for colors i < j: the composable pair f g (f of color i,
// g of color j) is the same morphism as g2 f2 (g2 of color j, f2 of color i).
struct Square {
  EdgeId f = 0;
  EdgeId g = 0;
  EdgeId g2 = 0;
  EdgeId f2 = 0;
};

// A morphism in canonical form: edges listed with colors in ascending order,
// read from the range end.
class Path {
 public:
  Path() = default;
  Path(VertexId range, VertexId source, std::vector<EdgeId> edges, Degree degree)
      : range_(range), source_(source), edges_(std::move(edges)), degree_(std::move(degree)) {}

  VertexId range() const { return range_; }
  VertexId source() const { return source_; }
  const std::vector<EdgeId>& edges() const { return edges_; }
  const Degree& degree() const { return degree_; }
  bool is_vertex() const { return edges_.empty(); }
  std::size_t length() const { return edges_.size(); }

  friend bool operator==(const Path&, const Path&) = default;
  friend std::strong_ordering operator<=>(const Path& a, const Path& b) {
    if (auto c = a.range_ <=> b.range_; c != 0) return c;
    if (auto c = a.degree_ <=> b.degree_; c != 0) return c;
    if (auto c = a.edges_ <=> b.edges_; c != 0) return c;
    return a.source_ <=> b.source_;
  }

 private:
  VertexId range_ = 0;
  VertexId source_ = 0;
  std::vector<EdgeId> edges_;
  Degree degree_;
};

using IntMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

class KGraph {
 public:
  // Does not validate; use validate_kgraph for a report. Edge ids in squares are
  // dense indices.
  KGraph(int k, std::size_t num_vertices, std::vector<Edge> edges, std::vector<Square> squares);

  int k() const { return k_; }
  std::size_t num_vertices() const { return num_vertices_; }
  std::size_t num_edges() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(EdgeId e) const { return edges_.at(e); }
  const std::vector<Square>& squares() const { return squares_; }
  std::optional<EdgeId> find_edge(int color, std::uint32_t label) const;

  // Edges of one color with the given range (resp. source), in id order.
  const std::vector<EdgeId>& edges_into(VertexId v, int color) const;
  const std::vector<EdgeId>& edges_out_of(VertexId v, int color) const;

  // Rewrites a composable pair of edges of distinct colors into the other
  // order. Throws InvalidGraph if the square table has no entry.
  std::pair<EdgeId, EdgeId> exchange(EdgeId first, EdgeId second) const;
  std::optional<std::pair<EdgeId, EdgeId>> try_exchange(EdgeId first, EdgeId second) const;

  Path vertex_path(VertexId v) const;
  Path edge_path(EdgeId e) const;
  // Any composable edge sequence, rewritten to canonical form.
  Path path_from_edges(std::span<const EdgeId> edges) const;

  Path compose(const Path& mu, const Path& nu) const;
  Path segment(const Path& mu, const Degree& from, const Degree& to) const;
  std::vector<Path> paths_of_degree(const Degree& n, std::optional<VertexId> range = {},
                                    std::optional<VertexId> source = {}) const;
  // Pairs (alpha, beta) with mu alpha = nu beta of degree d(mu) v d(nu).
  std::vector<std::pair<Path, Path>> lambda_min(const Path& mu, const Path& nu) const;

  // Reorders a composable edge sequence so that its colors follow `colors`.
  std::vector<EdgeId> reorder(std::vector<EdgeId> seq, std::span<const int> colors) const;

  std::string describe(const Path& p) const;

 private:
  static constexpr EdgeId kNone = static_cast<EdgeId>(-1);

  int k_;
  std::size_t num_vertices_;
  std::vector<Edge> edges_;
  std::vector<Square> squares_;
  std::vector<std::vector<EdgeId>> into_;    // index v * k + color
  std::vector<std::vector<EdgeId>> out_of_;  // index v * k + color
  std::vector<std::pair<EdgeId, EdgeId>> swap_table_;  // index first * E + second
};

struct ValidationReport {
  std::vector<std::string> issues;
  bool ok() const { return issues.empty(); }
  void add(std::string s) { issues.push_back(std::move(s)); }
  void merge(const ValidationReport& other) {
    issues.insert(issues.end(), other.issues.begin(), other.issues.end());
  }
  bool mentions(const std::string& needle) const;
};

ValidationReport validate_kgraph(const KGraph& g);
IntMatrix coordinate_matrix(const KGraph& g, int color);
bool strongly_connected(const KGraph& g);

}  // namespace ssg
