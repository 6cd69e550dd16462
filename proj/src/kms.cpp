#include "ssg/kms.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace ssg {

TraceSpec TraceSpec::character(std::vector<double> theta) {
  TraceSpec t;
  t.kind = Kind::character;
  t.theta = std::move(theta);
  return t;
}

TraceSpec TraceSpec::mix(std::vector<std::pair<double, std::vector<double>>> parts) {
  double total = 0;
  for (const auto& [w, th] : parts) {
    if (w < 0) throw DomainError("mixture weights must be nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw DomainError("mixture weights must sum to one");
  TraceSpec t;
  t.kind = Kind::mixture;
  t.mixture = std::move(parts);
  return t;
}

namespace {

std::complex<double> character_value(const std::vector<double>& theta, const IntVector& coords) {
  if (theta.size() != coords.size()) throw DomainError("character dimension does not match the lattice rank");
  double phase = 0;
  for (std::size_t i = 0; i < coords.size(); ++i) phase += theta[i] * static_cast<double>(coords[i]);
  return std::polar(1.0, 2 * std::numbers::pi * phase);
}

}  // namespace

std::complex<double> TraceSpec::operator()(const IntVector& coords) const {
  switch (kind) {
    case Kind::haar:
      for (auto c : coords)
        if (c != 0) return 0.0;
      return 1.0;
    case Kind::character:
      return character_value(theta, coords);
    case Kind::mixture: {
      std::complex<double> v = 0;
      for (const auto& [w, th] : mixture) v += w * character_value(th, coords);
      return v;
    }
  }
  return 0.0;
}

KmsState::KmsState(ActionSystem& sys, PerronData data, PeriodicityLattice lattice, TraceSpec trace)
    : sys_(sys), data_(std::move(data)), lattice_(std::move(lattice)), trace_(std::move(trace)), cycline_(sys) {
  if (!check_g_invariance(data_, sys_)) throw SimplexEmpty("the Perron vector is not invariant under the action");
}

std::complex<double> KmsState::trace_at(const IntVector& z) const {
  const auto coords = lattice_coordinates(lattice_.basis, z);
  if (!coords) throw NotInLattice(to_string(z) + " is outside the computed periodicity lattice");
  return trace_(*coords);
}

std::complex<double> KmsState::evaluate_monomial(const Monomial& m) {
  if (!cycline_(m.mu, m.g, m.nu)) return 0.0;
  const Degree diff = m.mu.degree() - m.nu.degree();
  return pf_state_value(data_, m.mu) * trace_at(IntVector(diff.begin(), diff.end()));
}

std::complex<double> KmsState::evaluate(const ComplexElement& a) {
  std::complex<double> v = 0;
  for (const auto& [m, c] : a.terms()) v += c * evaluate_monomial(m);
  return v;
}

ComplexElement modular_shift(const PerronData& data, const ComplexElement& a) {
  ComplexElement out;
  for (const auto& [m, c] : a.terms()) {
    double f = 1;
    for (std::size_t i = 0; i < data.rho.size(); ++i)
      f *= std::pow(data.rho[i], -(m.mu.degree()[i] - m.nu.degree()[i]));
    out.add(m, c * f);
  }
  return out;
}

std::vector<Monomial> monomials_up_to(ActionSystem& sys, const Degree& bound, std::span<const GroupElement> group) {
  const KGraph& gr = sys.graph();
  std::vector<Path> paths;
  // Degrees 0 <= d <= bound in lexicographic order.
  Degree d = zero_degree(gr.k());
  while (true) {
    for (auto& p : gr.paths_of_degree(d)) paths.push_back(std::move(p));
    std::size_t i = d.size();
    while (i > 0 && d[i - 1] == bound[i - 1]) d[--i] = 0;
    if (i == 0) break;
    ++d[i - 1];
  }
  std::vector<Monomial> out;
  for (const auto& mu : paths)
    for (auto g : group)
      for (const auto& nu : paths)
        if (mu.source() == sys.act_vertex(g, nu.source())) out.push_back({mu, g, nu});
  return out;
}

KmsReport verify_kms(KmsState& state, const KmsSampling& sampling, double tol) {
  ActionSystem& sys = state.system();
  const auto group = sys.group_ball(sampling.ball);
  KmsReport rep;
  auto check = [&](const Monomial& x, const Monomial& y) {
    const ComplexElement ex(x), ey(y);
    const auto lhs = state.evaluate(multiply(sys, ex, ey));
    const auto rhs = state.evaluate(multiply(sys, ey, modular_shift(state.perron(), ex)));
    const double dev = std::abs(lhs - rhs);
    ++rep.pairs_checked;
    if (dev >= rep.max_deviation) {
      rep.max_deviation = dev;
      rep.worst_x = x;
      rep.worst_y = y;
    }
  };
  const auto small = monomials_up_to(sys, sampling.exhaustive_bound, group);
  for (const auto& x : small)
    for (const auto& y : small) check(x, y);
  if (sampling.random_pairs > 0) {
    const auto large = monomials_up_to(sys, sampling.random_bound, group);
    std::mt19937_64 rng(sampling.seed);
    std::uniform_int_distribution<std::size_t> pick(0, large.size() - 1);
    for (std::size_t i = 0; i < sampling.random_pairs; ++i) check(large[pick(rng)], large[pick(rng)]);
  }
  rep.passed = rep.max_deviation < tol;
  return rep;
}

SimplexSummary simplex_summary(const ActionSystem& sys, const PerronData& data, const PeriodicityLattice& lattice) {
  SimplexSummary s;
  s.box = lattice.box;
  s.ball = lattice.ball;
  s.exists = check_g_invariance(data, sys);
  if (!s.exists) {
    s.verdict = "empty: the Perron vector is not invariant under the action";
    return s;
  }
  s.rank = lattice.rank();
  if (s.rank == 0)
    s.verdict = "unique KMS state";
  else
    s.verdict = "affinely homeomorphic to the probability measures on the " + std::to_string(s.rank) + "-torus";
  return s;
}

DiagonalCheck restrict_to_diagonal(KmsState& state, const Degree& bound) {
  ActionSystem& sys = state.system();
  DiagonalCheck out;
  const GroupElement one = sys.identity();
  for (const auto& m : monomials_up_to(sys, bound, std::span<const GroupElement>(&one, 1))) {
    if (m.mu != m.nu) continue;
    const double dev = std::abs(state.evaluate_monomial(m) - pf_state_value(state.perron(), m.mu));
    out.max_deviation = std::max(out.max_deviation, dev);
    ++out.paths_checked;
  }
  out.invariant = true;
  for (auto g : sys.generators())
    for (VertexId v = 0; v < sys.graph().num_vertices(); ++v) {
      const Path pv = sys.graph().vertex_path(v);
      const Path gv = sys.graph().vertex_path(sys.act_vertex(g, v));
      if (std::abs(state.evaluate_monomial({pv, one, pv}) - state.evaluate_monomial({gv, one, gv})) > 1e-12)
        out.invariant = false;
    }
  return out;
}

}  // namespace ssg
