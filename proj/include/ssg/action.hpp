#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ssg/kgraph.hpp"

namespace ssg {

// Opaque handle. Within one ActionSystem two handles are equal exactly when the
// elements act identically, so handle comparison is group equality.
struct GroupElement {
  std::int64_t handle = 0;
  friend auto operator<=>(const GroupElement&, const GroupElement&) = default;
};

// Raw generator data as read from a model file. Restriction words are signed
// 1-based generator indices; the empty word is the identity.
struct GeneratorTable {
  std::string name;
  std::vector<EdgeId> image;
  std::vector<std::vector<int>> restriction;
  std::optional<std::vector<VertexId>> vertex_image;
};

// Edges sharing a residue class for the integer action: n acts on the m-th edge
// of a class of size T with multiplier B by n*B + m = h*T + r, sending it to the
// r-th edge with restriction h.
struct DivisionClass {
  std::vector<EdgeId> members;
  std::int64_t multiplier = 1;
};

struct ActionCaps {
  std::size_t max_states = 4096;
  std::size_t max_word_length = 64;
};

class ActionBackend {
 public:
  virtual ~ActionBackend() = default;
  virtual EdgeId act(GroupElement g, EdgeId e) const = 0;
  virtual GroupElement restriction(GroupElement g, EdgeId e) const = 0;
  virtual VertexId act_vertex(GroupElement g, VertexId v) const = 0;
  virtual GroupElement multiply(GroupElement g, GroupElement h) = 0;
  virtual GroupElement inverse(GroupElement g) = 0;
  virtual std::optional<std::vector<int>> word(GroupElement g) const = 0;
  virtual std::size_t state_count() const = 0;
  virtual std::string kind() const = 0;
};

class ActionSystem {
 public:
  static ActionSystem from_tables(std::shared_ptr<const KGraph> graph, std::vector<GeneratorTable> tables,
                                  ActionCaps caps = {});
  static ActionSystem integer_division(std::shared_ptr<const KGraph> graph, std::vector<DivisionClass> classes,
                                       std::string generator_name = "a", ActionCaps caps = {});
  // The trivial group acting on a bare k-graph.
  static ActionSystem trivial(std::shared_ptr<const KGraph> graph);

  const KGraph& graph() const { return *graph_; }
  std::shared_ptr<const KGraph> graph_ptr() const { return graph_; }
  const ActionCaps& caps() const { return caps_; }
  std::string backend_kind() const { return backend_->kind(); }
  std::size_t state_count() const { return backend_->state_count(); }

  std::size_t num_generators() const { return generators_.size(); }
  GroupElement generator(std::size_t i) const { return generators_.at(i); }
  const std::string& generator_name(std::size_t i) const { return names_.at(i); }
  const std::vector<GroupElement>& generators() const { return generators_; }
  // Generators that were declared but act exactly as the identity.
  const std::vector<std::size_t>& collapsed_generators() const { return collapsed_; }
  const std::vector<GeneratorTable>& tables() const { return tables_; }

  GroupElement identity() const { return GroupElement{0}; }
  bool is_identity(GroupElement g) const { return g.handle == 0; }
  bool equal(GroupElement g, GroupElement h) const { return g == h; }

  EdgeId act(GroupElement g, EdgeId e) const { return backend_->act(g, e); }
  GroupElement restriction(GroupElement g, EdgeId e) const { return backend_->restriction(g, e); }
  VertexId act_vertex(GroupElement g, VertexId v) const { return backend_->act_vertex(g, v); }
  Path act_path(GroupElement g, const Path& mu) const;
  GroupElement restrict_path(GroupElement g, const Path& mu) const;

  GroupElement multiply(GroupElement g, GroupElement h) { return backend_->multiply(g, h); }
  GroupElement inverse(GroupElement g) { return backend_->inverse(g); }
  GroupElement element_from_word(std::span<const int> word);
  std::vector<int> word_of(GroupElement g) const;
  std::string describe(GroupElement g) const;

  std::vector<GroupElement> restriction_closure(std::span<const GroupElement> seeds,
                                                std::optional<std::size_t> cap = {}) const;
  // Restriction closure of every element given by a word of length <= radius.
  std::vector<GroupElement> group_ball(int radius);

 private:
  ActionSystem() = default;

  std::shared_ptr<const KGraph> graph_;
  std::unique_ptr<ActionBackend> backend_;
  std::vector<GroupElement> generators_;
  std::vector<std::string> names_;
  std::vector<std::size_t> collapsed_;
  std::vector<GeneratorTable> tables_;
  ActionCaps caps_;
};

struct Witness {
  GroupElement element;
  Path path;
  std::string detail;
};

struct PropertyVerdict {
  bool holds = true;
  std::optional<Witness> witness;
};

PropertyVerdict check_pseudo_free(ActionSystem& sys, std::span<const GroupElement> states);
PropertyVerdict check_locally_faithful(ActionSystem& sys, std::span<const GroupElement> states);

// Structural checks on raw tables: color preservation, bijectivity, vertex
// consistency and well-formed restriction words.
ValidationReport validate_generator_tables(const KGraph& g, const std::vector<GeneratorTable>& tables);
// Law checks on a built system over the generators and their restriction closure.
ValidationReport validate_action(ActionSystem& sys);

// Independent equality decision by exploring the pair automaton of (g, h).
bool bisimulation_equal(const ActionSystem& sys, GroupElement g, GroupElement h, std::size_t cap = 1u << 16);

}  // namespace ssg
