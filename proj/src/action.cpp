#include "ssg/action.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <queue>
#include <set>
#include <sstream>

#include "ssg/errors.hpp"

namespace ssg {

namespace {

std::vector<int> free_reduce(const std::vector<int>& w) {
  std::vector<int> out;
  for (int x : w) {
    if (!out.empty() && out.back() == -x)
      out.pop_back();
    else
      out.push_back(x);
  }
  return out;
}

std::vector<int> inverse_word(const std::vector<int>& w) {
  std::vector<int> out(w.rbegin(), w.rend());
  for (int& x : out) x = -x;
  return out;
}

template <class T>
std::vector<T> invert_permutation(const std::vector<T>& p) {
  std::vector<T> inv(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) inv[p[i]] = static_cast<T>(i);
  return inv;
}

std::vector<VertexId> induced_vertex_map(const KGraph& g, const GeneratorTable& t) {
  if (t.vertex_image) return *t.vertex_image;
  std::vector<VertexId> vmap(g.num_vertices());
  for (VertexId v = 0; v < g.num_vertices(); ++v) vmap[v] = v;
  std::vector<char> set(g.num_vertices(), 0);
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const VertexId r = g.edge(e).range;
    if (!set[r]) {
      vmap[r] = g.edge(t.image[e]).range;
      set[r] = 1;
    }
  }
  return vmap;
}

// Mealy-automaton registry. State 0 is the identity; distinct states are never
// bisimilar, which is maintained by interning every new automaton fragment
// through Moore partition refinement against the existing states.
class AutomatonRegistry final : public ActionBackend {
 public:
  AutomatonRegistry(const KGraph& g, ActionCaps caps) : graph_(g), caps_(caps) {
    State id;
    id.image.resize(g.num_edges());
    for (EdgeId e = 0; e < g.num_edges(); ++e) id.image[e] = e;
    id.vimage.resize(g.num_vertices());
    for (VertexId v = 0; v < g.num_vertices(); ++v) id.vimage[v] = v;
    id.restr.assign(g.num_edges(), 0);
    id.word = std::vector<int>{};
    add_state(std::move(id));
  }

  std::vector<GroupElement> bootstrap(const std::vector<GeneratorTable>& tables);

  EdgeId act(GroupElement g, EdgeId e) const override { return state(g).image.at(e); }
  GroupElement restriction(GroupElement g, EdgeId e) const override {
    return GroupElement{state(g).restr.at(e)};
  }
  VertexId act_vertex(GroupElement g, VertexId v) const override { return state(g).vimage.at(v); }
  GroupElement multiply(GroupElement g, GroupElement h) override;
  GroupElement inverse(GroupElement g) override;
  std::optional<std::vector<int>> word(GroupElement g) const override { return state(g).word; }
  std::size_t state_count() const override { return states_.size(); }
  std::string kind() const override { return "automaton"; }

 private:
  struct State {
    std::vector<EdgeId> image;
    std::vector<VertexId> vimage;
    std::vector<std::int64_t> restr;
    std::optional<std::vector<int>> word;
  };
  // Restriction targets: >= 0 is a registry state, < 0 is temp node -(i+1).
  struct TempNode {
    std::vector<EdgeId> image;
    std::vector<VertexId> vimage;
    std::vector<std::int64_t> restr;
    std::optional<std::vector<int>> word;
  };
  static std::int64_t temp_ref(std::size_t i) { return -static_cast<std::int64_t>(i) - 1; }

  const State& state(GroupElement g) const { return states_.at(static_cast<std::size_t>(g.handle)); }
  std::optional<std::vector<int>> capped(std::vector<int> w) const {
    if (w.size() > caps_.max_word_length) return std::nullopt;
    return w;
  }
  std::vector<std::int64_t> intern(const std::vector<TempNode>& temps);
  void add_state(State s) {
    by_signature_[{s.image, s.vimage}].push_back(static_cast<std::int64_t>(states_.size()));
    states_.push_back(std::move(s));
  }
  void check_temp_count(std::size_t n) const {
    if (n > caps_.max_states) throw ClosureExceeded("automaton fragment exceeds the state cap");
  }

  const KGraph& graph_;
  ActionCaps caps_;
  std::vector<State> states_;
  // States grouped by their one-step action, the first refinement key.
  std::map<std::pair<std::vector<EdgeId>, std::vector<VertexId>>, std::vector<std::int64_t>> by_signature_;
  std::map<std::pair<std::int64_t, std::int64_t>, std::int64_t> mul_memo_;
  std::map<std::int64_t, std::int64_t> inv_memo_;
};

std::vector<std::int64_t> AutomatonRegistry::intern(const std::vector<TempNode>& temps) {
  const std::size_t nt = temps.size();
  const std::size_t ne = graph_.num_edges();
  // Any registry state bisimilar to a fragment node shares its one-step
  // action, so those states and everything reachable from the fragment or
  // from them take part in the refinement.
  std::vector<std::int64_t> regs;
  std::map<std::int64_t, std::size_t> reg_pos;
  std::queue<std::int64_t> q;
  auto touch = [&](std::int64_t s) {
    if (s >= 0 && !reg_pos.count(s)) {
      reg_pos[s] = nt + regs.size();
      regs.push_back(s);
      q.push(s);
    }
  };
  for (const auto& t : temps) {
    for (auto r : t.restr) touch(r);
    if (auto it = by_signature_.find({t.image, t.vimage}); it != by_signature_.end())
      for (auto s : it->second) touch(s);
  }
  while (!q.empty()) {
    const auto s = q.front();
    q.pop();
    for (auto r : states_[static_cast<std::size_t>(s)].restr) touch(r);
  }
  const std::size_t n = nt + regs.size();
  auto image_of = [&](std::size_t i) -> const std::vector<EdgeId>& {
    return i < nt ? temps[i].image : states_[static_cast<std::size_t>(regs[i - nt])].image;
  };
  auto vimage_of = [&](std::size_t i) -> const std::vector<VertexId>& {
    return i < nt ? temps[i].vimage : states_[static_cast<std::size_t>(regs[i - nt])].vimage;
  };
  auto target = [&](std::size_t i, EdgeId e) -> std::size_t {
    const std::int64_t r = i < nt ? temps[i].restr[e] : states_[static_cast<std::size_t>(regs[i - nt])].restr[e];
    return r >= 0 ? reg_pos.at(r) : static_cast<std::size_t>(-r - 1);
  };

  std::vector<std::size_t> block(n);
  std::size_t blocks = 0;
  {
    std::map<std::pair<std::vector<EdgeId>, std::vector<VertexId>>, std::size_t> ids;
    for (std::size_t i = 0; i < n; ++i) {
      auto [it, fresh] = ids.try_emplace({image_of(i), vimage_of(i)}, ids.size());
      block[i] = it->second;
    }
    blocks = ids.size();
  }
  while (true) {
    std::map<std::vector<std::size_t>, std::size_t> ids;
    std::vector<std::size_t> next(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<std::size_t> key;
      key.reserve(ne + 1);
      key.push_back(block[i]);
      for (EdgeId e = 0; e < ne; ++e) key.push_back(block[target(i, e)]);
      auto [it, fresh] = ids.try_emplace(std::move(key), ids.size());
      next[i] = it->second;
    }
    block.swap(next);
    if (ids.size() == blocks) break;
    blocks = ids.size();
  }

  std::vector<std::int64_t> canon(blocks, -1);
  for (std::size_t i = nt; i < n; ++i) {
    assert(canon[block[i]] == -1 || canon[block[i]] == regs[i - nt]);
    canon[block[i]] = regs[i - nt];
  }
  std::vector<std::size_t> fresh;
  for (std::size_t i = 0; i < nt; ++i)
    if (canon[block[i]] == -1) {
      canon[block[i]] = static_cast<std::int64_t>(states_.size() + fresh.size());
      fresh.push_back(i);
    }
  if (states_.size() + fresh.size() > caps_.max_states)
    throw ClosureExceeded("registry would exceed " + std::to_string(caps_.max_states) + " states");
  for (std::size_t i : fresh) {
    State s;
    s.image = temps[i].image;
    s.vimage = temps[i].vimage;
    s.word = temps[i].word;
    s.restr.resize(ne);
    for (EdgeId e = 0; e < ne; ++e) s.restr[e] = canon[block[target(i, e)]];
    add_state(std::move(s));
  }
  std::vector<std::int64_t> out(nt);
  for (std::size_t i = 0; i < nt; ++i) out[i] = canon[block[i]];
  return out;
}

std::vector<GroupElement> AutomatonRegistry::bootstrap(const std::vector<GeneratorTable>& tables) {
  const std::size_t ne = graph_.num_edges();
  const std::size_t nv = graph_.num_vertices();
  std::vector<std::vector<EdgeId>> inv_image;
  std::vector<std::vector<VertexId>> vmap, inv_vmap;
  for (const auto& t : tables) {
    inv_image.push_back(invert_permutation(t.image));
    vmap.push_back(induced_vertex_map(graph_, t));
    inv_vmap.push_back(invert_permutation(vmap.back()));
  }
  auto letter_act = [&](int l, EdgeId e) {
    const auto i = static_cast<std::size_t>(std::abs(l) - 1);
    return l > 0 ? tables[i].image[e] : inv_image[i][e];
  };
  auto letter_vertex = [&](int l, VertexId v) {
    const auto i = static_cast<std::size_t>(std::abs(l) - 1);
    return l > 0 ? vmap[i][v] : inv_vmap[i][v];
  };
  auto letter_restr = [&](int l, EdgeId e) {
    const auto i = static_cast<std::size_t>(std::abs(l) - 1);
    return l > 0 ? tables[i].restriction[e] : inverse_word(tables[i].restriction[inv_image[i][e]]);
  };

  // Temp nodes are reduced words; a word's restriction is the concatenation of
  // its letters' restrictions at the edges they see.
  std::vector<TempNode> temps;
  std::map<std::vector<int>, std::size_t> index;
  std::vector<std::vector<int>> pending;
  auto ref = [&](std::vector<int> w) -> std::int64_t {
    w = free_reduce(w);
    if (w.empty()) return 0;
    if (w.size() > caps_.max_word_length)
      throw ClosureExceeded("restriction word longer than " + std::to_string(caps_.max_word_length));
    auto [it, fresh] = index.try_emplace(w, index.size());
    if (fresh) {
      check_temp_count(index.size());
      pending.push_back(w);
    }
    return temp_ref(it->second);
  };
  for (std::size_t i = 0; i < tables.size(); ++i) ref({static_cast<int>(i + 1)});
  while (temps.size() < pending.size()) {
    const std::vector<int> w = pending[temps.size()];
    TempNode node;
    node.word = w;
    node.image.resize(ne);
    node.vimage.resize(nv);
    node.restr.resize(ne);
    for (VertexId v = 0; v < nv; ++v) {
      VertexId cur = v;
      for (auto it = w.rbegin(); it != w.rend(); ++it) cur = letter_vertex(*it, cur);
      node.vimage[v] = cur;
    }
    for (EdgeId e = 0; e < ne; ++e) {
      std::vector<EdgeId> at(w.size());
      EdgeId cur = e;
      for (std::size_t t = w.size(); t-- > 0;) {
        at[t] = cur;
        cur = letter_act(w[t], cur);
      }
      node.image[e] = cur;
      std::vector<int> r;
      for (std::size_t t = 0; t < w.size(); ++t) {
        const auto piece = letter_restr(w[t], at[t]);
        r.insert(r.end(), piece.begin(), piece.end());
      }
      node.restr[e] = ref(std::move(r));
    }
    temps.push_back(std::move(node));
  }
  const auto canon = intern(temps);
  std::vector<GroupElement> gens;
  for (std::size_t i = 0; i < tables.size(); ++i)
    gens.push_back(GroupElement{canon[index.at({static_cast<int>(i + 1)})]});
  return gens;
}

GroupElement AutomatonRegistry::multiply(GroupElement g, GroupElement h) {
  if (g.handle == 0) return h;
  if (h.handle == 0) return g;
  if (auto it = mul_memo_.find({g.handle, h.handle}); it != mul_memo_.end()) return GroupElement{it->second};
  const std::size_t ne = graph_.num_edges();
  std::vector<TempNode> temps;
  std::vector<std::pair<std::int64_t, std::int64_t>> keys;
  std::map<std::pair<std::int64_t, std::int64_t>, std::size_t> index;
  auto ref = [&](std::int64_t a, std::int64_t b) -> std::int64_t {
    if (a == 0) return b;
    if (b == 0) return a;
    if (auto it = mul_memo_.find({a, b}); it != mul_memo_.end()) return it->second;
    auto [it, fresh] = index.try_emplace({a, b}, index.size());
    if (fresh) {
      check_temp_count(index.size());
      keys.emplace_back(a, b);
    }
    return temp_ref(it->second);
  };
  ref(g.handle, h.handle);
  while (temps.size() < keys.size()) {
    const auto [a, b] = keys[temps.size()];
    const State& sa = states_[static_cast<std::size_t>(a)];
    const State& sb = states_[static_cast<std::size_t>(b)];
    TempNode node;
    node.image.resize(ne);
    node.restr.resize(ne);
    node.vimage.resize(sb.vimage.size());
    for (std::size_t v = 0; v < sb.vimage.size(); ++v) node.vimage[v] = sa.vimage[sb.vimage[v]];
    for (EdgeId e = 0; e < ne; ++e) {
      node.image[e] = sa.image[sb.image[e]];
      node.restr[e] = ref(sa.restr[sb.image[e]], sb.restr[e]);
    }
    if (sa.word && sb.word) {
      std::vector<int> w = *sa.word;
      w.insert(w.end(), sb.word->begin(), sb.word->end());
      node.word = capped(free_reduce(w));
    }
    temps.push_back(std::move(node));
  }
  const auto canon = intern(temps);
  for (std::size_t i = 0; i < keys.size(); ++i) mul_memo_[keys[i]] = canon[i];
  return GroupElement{canon[0]};
}

GroupElement AutomatonRegistry::inverse(GroupElement g) {
  if (g.handle == 0) return g;
  if (auto it = inv_memo_.find(g.handle); it != inv_memo_.end()) return GroupElement{it->second};
  const std::size_t ne = graph_.num_edges();
  std::vector<TempNode> temps;
  std::vector<std::int64_t> keys;
  std::map<std::int64_t, std::size_t> index;
  auto ref = [&](std::int64_t a) -> std::int64_t {
    if (a == 0) return 0;
    if (auto it = inv_memo_.find(a); it != inv_memo_.end()) return it->second;
    auto [it, fresh] = index.try_emplace(a, index.size());
    if (fresh) {
      check_temp_count(index.size());
      keys.push_back(a);
    }
    return temp_ref(it->second);
  };
  ref(g.handle);
  while (temps.size() < keys.size()) {
    const State& sa = states_[static_cast<std::size_t>(keys[temps.size()])];
    TempNode node;
    node.image = invert_permutation(sa.image);
    node.vimage = invert_permutation(sa.vimage);
    node.restr.resize(ne);
    for (EdgeId e = 0; e < ne; ++e) node.restr[e] = ref(sa.restr[node.image[e]]);
    if (sa.word) node.word = inverse_word(*sa.word);
    temps.push_back(std::move(node));
  }
  const auto canon = intern(temps);
  for (std::size_t i = 0; i < keys.size(); ++i) {
    inv_memo_[keys[i]] = canon[i];
    inv_memo_[canon[i]] = keys[i];
  }
  return GroupElement{canon[0]};
}

// Integers acting by residue-class division.
class IntegerDivisionAction final : public ActionBackend {
 public:
  IntegerDivisionAction(const KGraph& g, std::vector<DivisionClass> classes) : classes_(std::move(classes)) {
    slot_.assign(g.num_edges(), {kUnset, 0});
    for (std::size_t c = 0; c < classes_.size(); ++c) {
      if (classes_[c].members.empty()) throw DomainError("empty division class");
      for (std::size_t m = 0; m < classes_[c].members.size(); ++m) {
        auto& s = slot_.at(classes_[c].members[m]);
        if (s.first != kUnset) throw DomainError("edge listed in two division classes");
        s = {c, static_cast<std::int64_t>(m)};
      }
    }
    for (const auto& s : slot_)
      if (s.first == kUnset) throw DomainError("edge missing from the division classes");
  }

  EdgeId act(GroupElement g, EdgeId e) const override { return divide(g, e).first; }
  GroupElement restriction(GroupElement g, EdgeId e) const override { return GroupElement{divide(g, e).second}; }
  VertexId act_vertex(GroupElement, VertexId v) const override { return v; }
  GroupElement multiply(GroupElement g, GroupElement h) override { return GroupElement{g.handle + h.handle}; }
  GroupElement inverse(GroupElement g) override { return GroupElement{-g.handle}; }
  std::optional<std::vector<int>> word(GroupElement g) const override {
    const auto n = static_cast<std::size_t>(g.handle < 0 ? -g.handle : g.handle);
    return std::vector<int>(n, g.handle < 0 ? -1 : 1);
  }
  std::size_t state_count() const override { return 0; }
  std::string kind() const override { return "integer"; }

 private:
  static constexpr std::size_t kUnset = static_cast<std::size_t>(-1);

  std::pair<EdgeId, std::int64_t> divide(GroupElement g, EdgeId e) const {
    const auto [c, m] = slot_.at(e);
    const auto& cls = classes_[c];
    const auto t = static_cast<std::int64_t>(cls.members.size());
    const std::int64_t value = g.handle * cls.multiplier + m;
    std::int64_t h = value / t;
    std::int64_t r = value % t;
    if (r < 0) {
      r += t;
      --h;
    }
    return {cls.members[static_cast<std::size_t>(r)], h};
  }

  std::vector<DivisionClass> classes_;
  std::vector<std::pair<std::size_t, std::int64_t>> slot_;
};

}  // namespace

ActionSystem ActionSystem::from_tables(std::shared_ptr<const KGraph> graph, std::vector<GeneratorTable> tables,
                                       ActionCaps caps) {
  const ValidationReport rep = validate_generator_tables(*graph, tables);
  for (const auto& issue : rep.issues)
    if (issue.find("automorphism") == std::string::npos)
      throw ValidationError(issue);
  ActionSystem sys;
  sys.graph_ = graph;
  sys.caps_ = caps;
  auto registry = std::make_unique<AutomatonRegistry>(*graph, caps);
  sys.generators_ = registry->bootstrap(tables);
  sys.backend_ = std::move(registry);
  for (std::size_t i = 0; i < tables.size(); ++i) {
    sys.names_.push_back(tables[i].name);
    if (sys.generators_[i].handle == 0) sys.collapsed_.push_back(i);
  }
  sys.tables_ = std::move(tables);
  return sys;
}

ActionSystem ActionSystem::integer_division(std::shared_ptr<const KGraph> graph, std::vector<DivisionClass> classes,
                                            std::string generator_name, ActionCaps caps) {
  ActionSystem sys;
  sys.graph_ = graph;
  sys.caps_ = caps;
  sys.backend_ = std::make_unique<IntegerDivisionAction>(*graph, std::move(classes));
  sys.generators_ = {GroupElement{1}};
  sys.names_ = {std::move(generator_name)};
  // Tables are derived so the model can be written out.
  GeneratorTable t;
  t.name = sys.names_[0];
  for (EdgeId e = 0; e < graph->num_edges(); ++e) {
    t.image.push_back(sys.act(GroupElement{1}, e));
    t.restriction.push_back(sys.word_of(sys.restriction(GroupElement{1}, e)));
  }
  sys.tables_ = {std::move(t)};
  return sys;
}

ActionSystem ActionSystem::trivial(std::shared_ptr<const KGraph> graph) { return from_tables(std::move(graph), {}); }

Path ActionSystem::act_path(GroupElement g, const Path& mu) const {
  if (mu.is_vertex()) return graph_->vertex_path(act_vertex(g, mu.range()));
  std::vector<EdgeId> out;
  out.reserve(mu.length());
  GroupElement cur = g;
  for (EdgeId e : mu.edges()) {
    out.push_back(act(cur, e));
    cur = restriction(cur, e);
  }
  // Colors are preserved, so the image of a canonical path is canonical.
  const VertexId r = graph_->edge(out.front()).range;
  const VertexId s = graph_->edge(out.back()).source;
  return Path(r, s, std::move(out), mu.degree());
}

GroupElement ActionSystem::restrict_path(GroupElement g, const Path& mu) const {
  GroupElement cur = g;
  for (EdgeId e : mu.edges()) cur = restriction(cur, e);
  return cur;
}

GroupElement ActionSystem::element_from_word(std::span<const int> word) {
  if (word.size() > caps_.max_word_length)
    throw ClosureExceeded("word longer than " + std::to_string(caps_.max_word_length));
  GroupElement g = identity();
  for (int l : word) {
    if (l == 0 || static_cast<std::size_t>(std::abs(l)) > generators_.size())
      throw DomainError("word letter " + std::to_string(l) + " names no generator");
    const GroupElement x = generators_[static_cast<std::size_t>(std::abs(l) - 1)];
    g = multiply(g, l > 0 ? x : inverse(x));
  }
  return g;
}

std::vector<int> ActionSystem::word_of(GroupElement g) const {
  auto w = backend_->word(g);
  if (!w) throw ClosureExceeded("no representative word within the length cap");
  return *w;
}

std::string ActionSystem::describe(GroupElement g) const {
  if (backend_kind() == "integer") return std::to_string(g.handle);
  if (g.handle == 0) return "1";
  auto w = backend_->word(g);
  if (!w) return "#" + std::to_string(g.handle);
  std::ostringstream os;
  for (std::size_t t = 0; t < w->size(); ++t) {
    const int l = (*w)[t];
    os << (t ? "*" : "") << names_.at(static_cast<std::size_t>(std::abs(l) - 1)) << (l < 0 ? "^-1" : "");
  }
  return os.str();
}

std::vector<GroupElement> ActionSystem::restriction_closure(std::span<const GroupElement> seeds,
                                                            std::optional<std::size_t> cap) const {
  const std::size_t limit = cap.value_or(caps_.max_states);
  std::vector<GroupElement> out;
  std::set<GroupElement> seen;
  auto add = [&](GroupElement g) {
    if (seen.insert(g).second) {
      if (seen.size() > limit)
        throw ClosureExceeded("restriction closure exceeds " + std::to_string(limit) + " elements");
      out.push_back(g);
    }
  };
  for (auto g : seeds) add(g);
  for (std::size_t i = 0; i < out.size(); ++i)
    for (EdgeId e = 0; e < graph_->num_edges(); ++e) add(restriction(out[i], e));
  return out;
}

std::vector<GroupElement> ActionSystem::group_ball(int radius) {
  std::vector<GroupElement> layer{identity()};
  std::set<GroupElement> ball{identity()};
  std::vector<GroupElement> letters;
  for (auto g : generators_) {
    letters.push_back(g);
    letters.push_back(inverse(g));
  }
  for (int r = 0; r < radius; ++r) {
    std::vector<GroupElement> next;
    for (auto g : layer)
      for (auto l : letters) {
        const auto x = multiply(g, l);
        if (ball.insert(x).second) next.push_back(x);
      }
    layer.swap(next);
  }
  std::vector<GroupElement> seeds(ball.begin(), ball.end());
  return restriction_closure(seeds);
}

PropertyVerdict check_pseudo_free(ActionSystem& sys, std::span<const GroupElement> states) {
  const KGraph& g = sys.graph();
  if (!sys.collapsed_generators().empty() && g.num_edges() > 0) {
    const std::size_t i = sys.collapsed_generators().front();
    return {false, Witness{sys.generator(i), g.edge_path(0),
                           "generator " + sys.generator_name(i) + " fixes every edge with trivial restriction"}};
  }
  // Breadth-first search over (element, vertex) along fixed edges.
  using Node = std::pair<GroupElement, VertexId>;
  std::map<Node, std::pair<Node, EdgeId>> parent;
  std::queue<Node> q;
  const auto closure = sys.restriction_closure(states);
  for (auto h : closure) {
    if (sys.is_identity(h)) continue;
    for (VertexId v = 0; v < g.num_vertices(); ++v) {
      const Node n{h, v};
      parent.emplace(n, std::make_pair(n, EdgeId{0}));
      q.push(n);
    }
  }
  while (!q.empty()) {
    const Node n = q.front();
    q.pop();
    for (int c = 0; c < g.k(); ++c)
      for (EdgeId e : g.edges_into(n.second, c)) {
        if (sys.act(n.first, e) != e) continue;
        const Node m{sys.restriction(n.first, e), g.edge(e).source};
        if (parent.count(m)) continue;
        parent.emplace(m, std::make_pair(n, e));
        if (sys.is_identity(m.first)) {
          std::vector<EdgeId> edges;
          Node cur = m;
          while (parent.at(cur).first != cur) {
            edges.push_back(parent.at(cur).second);
            cur = parent.at(cur).first;
          }
          std::reverse(edges.begin(), edges.end());
          return {false, Witness{cur.first, g.path_from_edges(edges),
                                 sys.describe(cur.first) + " fixes the path with trivial restriction"}};
        }
        q.push(m);
      }
  }
  return {};
}

PropertyVerdict check_locally_faithful(ActionSystem& sys, std::span<const GroupElement> states) {
  const KGraph& g = sys.graph();
  if (!sys.collapsed_generators().empty()) {
    const std::size_t i = sys.collapsed_generators().front();
    return {false, Witness{sys.generator(i), g.vertex_path(0),
                           "generator " + sys.generator_name(i) + " acts as the identity"}};
  }
  const auto closure = sys.restriction_closure(states);
  std::map<std::pair<GroupElement, VertexId>, bool> alive;
  for (auto h : closure)
    for (VertexId v = 0; v < g.num_vertices(); ++v) alive[{h, v}] = true;
  // Greatest fixpoint: (h, v) survives while h fixes every edge into v and the
  // restrictions survive at the sources.
  for (bool changed = true; changed;) {
    changed = false;
    for (auto& [node, ok] : alive) {
      if (!ok || sys.is_identity(node.first)) continue;
      for (int c = 0; c < g.k() && ok; ++c)
        for (EdgeId e : g.edges_into(node.second, c)) {
          if (sys.act(node.first, e) != e || !alive.at({sys.restriction(node.first, e), g.edge(e).source})) {
            ok = false;
            changed = true;
            break;
          }
        }
    }
  }
  for (const auto& [node, ok] : alive)
    if (ok && !sys.is_identity(node.first))
      return {false, Witness{node.first, g.vertex_path(node.second),
                             sys.describe(node.first) + " fixes every path with range v" +
                                 std::to_string(node.second)}};
  return {};
}

ValidationReport validate_generator_tables(const KGraph& g, const std::vector<GeneratorTable>& tables) {
  ValidationReport rep;
  const std::size_t ne = g.num_edges();
  const std::size_t nv = g.num_vertices();
  for (const auto& t : tables) {
    const std::string who = "generator " + t.name + ": ";
    if (t.image.size() != ne || t.restriction.size() != ne) {
      rep.add(who + "edge action must cover every edge exactly once");
      continue;
    }
    bool perm_ok = true;
    std::vector<char> hit(ne, 0);
    for (EdgeId e = 0; e < ne; ++e) {
      const EdgeId f = t.image[e];
      if (f >= ne) {
        rep.add(who + "image of edge " + std::to_string(e) + " is not an edge");
        perm_ok = false;
        continue;
      }
      if (g.edge(f).color != g.edge(e).color) {
        std::ostringstream os;
        os << who << "color preservation violated: x" << g.edge(e).color + 1 << "_" << g.edge(e).label
           << " maps to x" << g.edge(f).color + 1 << "_" << g.edge(f).label;
        rep.add(os.str());
        perm_ok = false;
      }
      if (hit[f]++) {
        rep.add(who + "bijection violated: edge " + std::to_string(f) + " has two preimages");
        perm_ok = false;
      }
      for (int l : t.restriction[e])
        if (l == 0 || static_cast<std::size_t>(std::abs(l)) > tables.size())
          rep.add(who + "restriction word references unknown generator " + std::to_string(l));
    }
    if (!perm_ok) continue;
    if (t.vertex_image) {
      const auto& vm = *t.vertex_image;
      std::vector<char> vhit(nv, 0);
      bool ok = vm.size() == nv;
      for (std::size_t v = 0; ok && v < nv; ++v) ok = vm[v] < nv && !vhit[vm[v]]++;
      if (!ok) {
        rep.add(who + "automorphism violated: vertex map is not a bijection");
        continue;
      }
    }
    const auto vmap = induced_vertex_map(g, t);
    for (EdgeId e = 0; e < ne; ++e) {
      const Edge& ed = g.edge(e);
      const Edge& im = g.edge(t.image[e]);
      if (vmap[ed.range] != im.range || vmap[ed.source] != im.source) {
        std::ostringstream os;
        os << who << "automorphism violated: edge x" << ed.color + 1 << "_" << ed.label
           << " and its image disagree with the vertex map";
        rep.add(os.str());
        break;
      }
    }
  }
  return rep;
}

ValidationReport validate_action(ActionSystem& sys) {
  ValidationReport rep;
  const KGraph& g = sys.graph();
  const std::size_t ne = g.num_edges();
  std::vector<GroupElement> seeds = sys.generators();
  for (auto x : sys.generators()) seeds.push_back(sys.inverse(x));
  const auto states = sys.restriction_closure(seeds);
  for (auto a : states) {
    const std::string who = sys.describe(a) + ": ";
    std::vector<char> hit(ne, 0);
    for (EdgeId e = 0; e < ne; ++e) {
      const EdgeId f = sys.act(a, e);
      if (g.edge(f).color != g.edge(e).color) rep.add(who + "color preservation violated");
      if (hit[f]++) rep.add(who + "bijection violated");
      if (sys.act_vertex(a, g.edge(e).range) != g.edge(f).range ||
          sys.act_vertex(a, g.edge(e).source) != g.edge(f).source) {
        rep.add(who + "automorphism violated at edge " + std::to_string(e));
        break;
      }
    }
    for (const Square& sq : g.squares()) {
      const EdgeId x1 = sys.act(a, sq.f);
      const GroupElement b1 = sys.restriction(a, sq.f);
      const EdgeId y1 = sys.act(b1, sq.g);
      const GroupElement c1 = sys.restriction(b1, sq.g);
      const EdgeId x2 = sys.act(a, sq.g2);
      const GroupElement b2 = sys.restriction(a, sq.g2);
      const EdgeId y2 = sys.act(b2, sq.f2);
      const GroupElement c2 = sys.restriction(b2, sq.f2);
      const auto swapped = g.try_exchange(x2, y2);
      if (!swapped || swapped->first != x1 || swapped->second != y1 || c1 != c2) {
        std::ostringstream os;
        os << who << "square compatibility violated on x" << g.edge(sq.f).color + 1 << "_" << g.edge(sq.f).label
           << " x" << g.edge(sq.g).color + 1 << "_" << g.edge(sq.g).label;
        rep.add(os.str());
        break;
      }
    }
  }
  for (EdgeId e = 0; e < ne; ++e)
    if (sys.act(sys.identity(), e) != e || !sys.is_identity(sys.restriction(sys.identity(), e)))
      rep.add("identity acts nontrivially");
  for (auto x : sys.generators()) {
    if (!sys.is_identity(sys.multiply(x, sys.inverse(x)))) rep.add(sys.describe(x) + ": inverse law violated");
    for (auto y : sys.generators()) {
      const auto xy = sys.multiply(x, y);
      for (EdgeId e = 0; e < ne; ++e) {
        if (sys.act(xy, e) != sys.act(x, sys.act(y, e)) ||
            sys.restriction(xy, e) != sys.multiply(sys.restriction(x, sys.act(y, e)), sys.restriction(y, e))) {
          rep.add(sys.describe(x) + "," + sys.describe(y) + ": product restriction law violated");
          break;
        }
      }
    }
  }
  return rep;
}

bool bisimulation_equal(const ActionSystem& sys, GroupElement g, GroupElement h, std::size_t cap) {
  const KGraph& gr = sys.graph();
  std::set<std::pair<GroupElement, GroupElement>> seen{{g, h}};
  std::queue<std::pair<GroupElement, GroupElement>> q;
  q.push({g, h});
  while (!q.empty()) {
    const auto [a, b] = q.front();
    q.pop();
    for (VertexId v = 0; v < gr.num_vertices(); ++v)
      if (sys.act_vertex(a, v) != sys.act_vertex(b, v)) return false;
    for (EdgeId e = 0; e < gr.num_edges(); ++e) {
      if (sys.act(a, e) != sys.act(b, e)) return false;
      const std::pair next{sys.restriction(a, e), sys.restriction(b, e)};
      if (seen.insert(next).second) {
        if (seen.size() > cap) throw ClosureExceeded("pair automaton exceeds cap");
        q.push(next);
      }
    }
  }
  return true;
}

}  // namespace ssg
