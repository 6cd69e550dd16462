#include "ssg/periodicity.hpp"

#include <algorithm>
#include <queue>
#include <set>

#include "ssg/errors.hpp"

namespace ssg {

namespace {

constexpr std::size_t kMaxCyclineStates = 2000000;

std::vector<int> colors_of(const Degree& d) {
  std::vector<int> out;
  for (std::size_t c = 0; c < d.size(); ++c)
    for (int t = 0; t < d[c]; ++t) out.push_back(static_cast<int>(c));
  return out;
}

// Appends one edge of color `color` to a canonical path and splits the result
// into its first color-`color` edge and the canonical remainder.
std::pair<EdgeId, Path> extend_and_shift(const KGraph& g, const Path& p, EdgeId e, int color) {
  std::vector<EdgeId> seq = p.edges();
  seq.push_back(e);
  std::vector<int> pattern{color};
  const auto rest = colors_of(p.degree());
  pattern.insert(pattern.end(), rest.begin(), rest.end());
  seq = g.reorder(std::move(seq), pattern);
  const EdgeId first = seq.front();
  if (seq.size() == 1) return {first, g.vertex_path(g.edge(first).source)};
  std::vector<EdgeId> tail(seq.begin() + 1, seq.end());
  const VertexId r = g.edge(tail.front()).range;
  const VertexId s = g.edge(tail.back()).source;
  return {first, Path(r, s, std::move(tail), p.degree())};
}

}  // namespace

std::pair<Degree, Degree> split_degree(const IntVector& z) {
  Degree p(z.size()), q(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    p[i] = static_cast<int>(std::max<std::int64_t>(z[i], 0));
    q[i] = static_cast<int>(std::max<std::int64_t>(-z[i], 0));
  }
  return {p, q};
}

CyclineCertificate is_cycline(ActionSystem& sys, const Path& mu, GroupElement g, const Path& nu) {
  const KGraph& gr = sys.graph();
  if (mu.source() != sys.act_vertex(g, nu.source()))
    throw PreconditionViolated("s(mu) must equal g . s(nu)");
  CyclineCertificate cert;
  const Degree zero = zero_degree(gr.k());
  const Degree c = meet(mu.degree(), nu.degree());
  if (gr.segment(mu, zero, c) != gr.segment(nu, zero, c)) return cert;
  const Triple start{gr.segment(mu, c, mu.degree()), g, gr.segment(nu, c, nu.degree())};
  cert.reduced = start;

  std::vector<Triple> states{start};
  std::map<Triple, std::size_t> index{{start, 0}};
  std::vector<std::vector<std::size_t>> preds(1);
  std::vector<char> dead(1, 0);
  for (std::size_t i = 0; i < states.size(); ++i) {
    const Triple s = states[i];
    std::vector<std::size_t> succ;
    bool ok = true;
    for (int color = 0; color < gr.k() && ok; ++color)
      for (EdgeId e : gr.edges_into(s.nu.source(), color)) {
        const auto [lhead, ltail] = extend_and_shift(gr, s.mu, sys.act(s.g, e), color);
        const auto [rhead, rtail] = extend_and_shift(gr, s.nu, e, color);
        if (lhead != rhead) {
          ok = false;
          break;
        }
        Triple next{ltail, sys.restriction(s.g, e), rtail};
        auto [it, fresh] = index.try_emplace(std::move(next), states.size());
        if (fresh) {
          if (states.size() >= kMaxCyclineStates) throw ClosureExceeded("cycline search state cap reached");
          states.push_back(it->first);
          preds.emplace_back();
          dead.push_back(0);
        }
        succ.push_back(it->second);
      }
    if (!ok) {
      dead[i] = 1;
      if (i == 0) break;
      continue;
    }
    for (auto j : succ) preds[j].push_back(i);
  }
  cert.explored = states.size();
  // Remove failing states and everything that can reach them.
  std::queue<std::size_t> q;
  for (std::size_t i = 0; i < states.size(); ++i)
    if (dead[i]) q.push(i);
  while (!q.empty()) {
    const auto i = q.front();
    q.pop();
    for (auto j : preds[i])
      if (!dead[j]) {
        dead[j] = 1;
        q.push(j);
      }
  }
  cert.cycline = !dead[0];
  if (cert.cycline)
    for (std::size_t i = 0; i < states.size(); ++i)
      if (!dead[i]) cert.surviving.push_back(states[i]);
  return cert;
}

bool CyclineOracle::operator()(const Path& mu, GroupElement g, const Path& nu) {
  Triple key{mu, g, nu};
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  const bool r = is_cycline(sys_, mu, g, nu).cycline;
  memo_.emplace(std::move(key), r);
  return r;
}

namespace {

// For each (mu, h) there is at most one nu making (mu, h, nu) cycline: it is
// the degree-n prefix of mu (h . lambda) for any lambda from h^-1 . s(mu).
template <class Visit>
void scan_candidates(ActionSystem& sys, const Degree& m, const Degree& n, std::span<const GroupElement> group,
                     Visit&& visit) {
  const KGraph& gr = sys.graph();
  const Degree zero = zero_degree(gr.k());
  std::map<VertexId, std::optional<Path>> first_from;
  auto first_path = [&](VertexId w) -> const std::optional<Path>& {
    auto it = first_from.find(w);
    if (it == first_from.end()) {
      auto ps = gr.paths_of_degree(n, w);
      it = first_from.emplace(w, ps.empty() ? std::nullopt : std::optional<Path>(ps.front())).first;
    }
    return it->second;
  };
  for (const Path& mu : gr.paths_of_degree(m))
    for (GroupElement h : group) {
      std::optional<VertexId> w;
      for (VertexId v = 0; v < gr.num_vertices(); ++v)
        if (sys.act_vertex(h, v) == mu.source()) w = v;
      if (!w) continue;
      const auto& lambda = first_path(*w);
      if (!lambda) continue;
      const Path nu = gr.segment(gr.compose(mu, sys.act_path(h, *lambda)), zero, n);
      if (nu.source() != *w) continue;
      if (is_cycline(sys, mu, h, nu).cycline && !visit(Triple{mu, h, nu})) return;
    }
}

}  // namespace

std::vector<Triple> cycline_triples(ActionSystem& sys, const Degree& m, const Degree& n,
                                    std::span<const GroupElement> group) {
  std::vector<Triple> out;
  scan_candidates(sys, m, n, group, [&](Triple t) {
    out.push_back(std::move(t));
    return true;
  });
  return out;
}

bool has_cycline_triple(ActionSystem& sys, const Degree& m, const Degree& n, std::span<const GroupElement> group) {
  bool found = false;
  scan_candidates(sys, m, n, group, [&](const Triple&) {
    found = true;
    return false;
  });
  return found;
}

bool sigma_contains(ActionSystem& sys, const Degree& p, const Degree& q, GroupElement g, VertexId v) {
  const KGraph& gr = sys.graph();
  const Degree top = join(p, q);
  for (const Path& kappa : gr.paths_of_degree(top, v)) {
    const Path moved = sys.act_path(g, kappa);
    const Path a = gr.segment(moved, q, top);
    const Path b = gr.segment(kappa, p, top);
    if (!is_cycline(sys, a, sys.restrict_path(g, kappa), b).cycline) return false;
  }
  return true;
}

PeriodicityLattice periodicity_group(ActionSystem& sys, const PerronData& data, const PeriodicityParams& params) {
  const auto k = static_cast<std::size_t>(sys.graph().k());
  PeriodicityLattice lat;
  lat.k = k;
  lat.box = params.box;
  lat.ball = params.ball;
  const auto group = sys.group_ball(params.ball);
  lat.group_elements_searched = group.size();
  std::set<IntVector> members;
  for (const auto& z : box_points(k, params.box)) {
    if (std::all_of(z.begin(), z.end(), [](auto x) { return x == 0; })) {
      members.insert(z);
      continue;
    }
    if (!in_rho_kernel(data, z, params.tol)) continue;
    const auto [p, q] = split_degree(z);
    if (has_cycline_triple(sys, p, q, group)) members.insert(z);
  }
  auto in_box = [&](const IntVector& z) {
    return std::all_of(z.begin(), z.end(), [&](auto x) { return std::abs(x) <= params.box; });
  };
  for (const auto& a : members) {
    IntVector neg(a);
    for (auto& x : neg) x = -x;
    if (!members.count(neg)) throw BoxClosureViolation(to_string(a) + " found without its negative");
    for (const auto& b : members) {
      IntVector s(a);
      for (std::size_t i = 0; i < k; ++i) s[i] += b[i];
      if (in_box(s) && !members.count(s))
        throw BoxClosureViolation(to_string(a) + " + " + to_string(b) + " missing");
    }
  }
  lat.members.assign(members.begin(), members.end());
  lat.basis = hermite_normal_form(lat.members, k);
  return lat;
}

AperiodicityVerdict is_g_aperiodic(ActionSystem& sys, const PerronData& data, const PeriodicityParams& params) {
  const auto lat = periodicity_group(sys, data, params);
  return {lat.rank() == 0, params.box, params.ball};
}

}  // namespace ssg
