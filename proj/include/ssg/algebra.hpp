#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include <boost/rational.hpp>

#include "ssg/action.hpp"
#include "ssg/errors.hpp"
#include "ssg/periodicity.hpp"

namespace ssg {

// s_mu u_g s_nu^*, with s(mu) = g . s(nu).
using Monomial = Triple;

struct GaussianRational {
  boost::rational<std::int64_t> re{0}, im{0};

  GaussianRational() = default;
  GaussianRational(std::int64_t r) : re(r) {}  // NOLINT: implicit from integers
  GaussianRational(boost::rational<std::int64_t> r, boost::rational<std::int64_t> i) : re(r), im(i) {}

  friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend bool operator==(const GaussianRational&, const GaussianRational&) = default;
};

template <class S>
struct Scalar;

template <>
struct Scalar<std::complex<double>> {
  static constexpr double kTol = 1e-12;
  static bool is_zero(const std::complex<double>& a) { return a == 0.0; }
  static bool near(const std::complex<double>& a, const std::complex<double>& b) { return std::abs(a - b) <= kTol; }
  static std::complex<double> conj(const std::complex<double>& a) { return std::conj(a); }
};

template <>
struct Scalar<GaussianRational> {
  static bool is_zero(const GaussianRational& a) { return a.re.numerator() == 0 && a.im.numerator() == 0; }
  static bool near(const GaussianRational& a, const GaussianRational& b) { return a == b; }
  static GaussianRational conj(const GaussianRational& a) { return {a.re, -a.im}; }
};

// Finite formal combination of monomials.
template <class S>
class Element {
 public:
  using Terms = std::map<Monomial, S>;

  Element() = default;
  Element(const Monomial& m, S c = S(1)) { add(m, c); }

  void add(const Monomial& m, const S& c) {
    auto [it, fresh] = terms_.try_emplace(m, c);
    if (!fresh) it->second = it->second + c;
    if (Scalar<S>::is_zero(it->second)) terms_.erase(it);
  }
  const Terms& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  Element& operator+=(const Element& o) {
    for (const auto& [m, c] : o.terms_) add(m, c);
    return *this;
  }
  friend Element operator+(Element a, const Element& b) { return a += b; }
  friend Element operator-(Element a, const Element& b) {
    for (const auto& [m, c] : b.terms_) a.add(m, S(0) - c);
    return a;
  }
  Element scaled(const S& s) const {
    Element out;
    for (const auto& [m, c] : terms_) out.add(m, c * s);
    return out;
  }

 private:
  Terms terms_;
};

using ComplexElement = Element<std::complex<double>>;
using ExactElement = Element<GaussianRational>;

// Product of two monomials as a sum of monomials with coefficient one.
std::vector<Monomial> monomial_product(ActionSystem& sys, const Monomial& a, const Monomial& b);
Monomial monomial_adjoint(ActionSystem& sys, const Monomial& a);
// Rewrites a monomial through the Cuntz-Krieger relation so that its right
// path has degree `target` (requires d(nu) <= target).
std::vector<Monomial> expand_monomial(ActionSystem& sys, const Monomial& a, const Degree& target);

template <class S>
Element<S> multiply(ActionSystem& sys, const Element<S>& a, const Element<S>& b) {
  Element<S> out;
  for (const auto& [ma, ca] : a.terms())
    for (const auto& [mb, cb] : b.terms()) {
      const S c = ca * cb;
      for (const auto& m : monomial_product(sys, ma, mb)) out.add(m, c);
    }
  return out;
}

template <class S>
Element<S> adjoint(ActionSystem& sys, const Element<S>& a) {
  Element<S> out;
  for (const auto& [m, c] : a.terms()) out.add(monomial_adjoint(sys, m), Scalar<S>::conj(c));
  return out;
}

template <class S>
Element<S> identity_element(const ActionSystem& sys) {
  Element<S> out;
  for (VertexId v = 0; v < sys.graph().num_vertices(); ++v) {
    const Path p = sys.graph().vertex_path(v);
    out.add({p, sys.identity(), p}, S(1));
  }
  return out;
}

template <class S>
Element<S> vertex_projection(const ActionSystem& sys, VertexId v) {
  const Path p = sys.graph().vertex_path(v);
  return Element<S>({p, sys.identity(), p});
}

template <class S>
Element<S> path_monomial(const ActionSystem& sys, const Path& mu) {
  return Element<S>({mu, sys.identity(), sys.graph().vertex_path(mu.source())});
}

template <class S>
Element<S> edge_monomial(const ActionSystem& sys, EdgeId e) {
  return path_monomial<S>(sys, sys.graph().edge_path(e));
}

template <class S>
Element<S> unitary(const ActionSystem& sys, GroupElement g) {
  Element<S> out;
  for (VertexId v = 0; v < sys.graph().num_vertices(); ++v)
    out.add({sys.graph().vertex_path(sys.act_vertex(g, v)), g, sys.graph().vertex_path(v)}, S(1));
  return out;
}

// Every monomial rewritten with right path of degree `target`.
template <class S>
Element<S> refine(ActionSystem& sys, const Element<S>& a, const Degree& target) {
  Element<S> out;
  for (const auto& [m, c] : a.terms())
    for (const auto& x : expand_monomial(sys, m, target)) out.add(x, c);
  return out;
}

// Equality in the algebra: both sides refined to a common right degree, where
// monomials are linearly independent for a pseudo-free action.
template <class S>
bool equivalent(ActionSystem& sys, const Element<S>& a, const Element<S>& b) {
  Degree target = zero_degree(sys.graph().k());
  for (const auto* e : {&a, &b})
    for (const auto& [m, c] : e->terms()) target = join(target, m.nu.degree());
  const auto ra = refine(sys, a, target);
  const auto rb = refine(sys, b, target);
  for (const auto& [m, c] : ra.terms()) {
    auto it = rb.terms().find(m);
    if (!Scalar<S>::near(c, it == rb.terms().end() ? S(0) : it->second)) return false;
  }
  for (const auto& [m, c] : rb.terms())
    if (!ra.terms().count(m) && !Scalar<S>::near(c, S(0))) return false;
  return true;
}

// Conditional expectation onto the cycline subalgebra.
template <class S>
Element<S> expectation(CyclineOracle& cycline, const Element<S>& a) {
  Element<S> out;
  for (const auto& [m, c] : a.terms())
    if (cycline(m.mu, m.g, m.nu)) out.add(m, c);
  return out;
}

// Sum of all cycline monomials of degree (m, n) with group part in `group`.
template <class S>
Element<S> periodicity_unitary(ActionSystem& sys, const Degree& m, const Degree& n,
                               std::span<const GroupElement> group) {
  const auto triples = cycline_triples(sys, m, n, group);
  if (triples.empty()) throw NotPeriodic(to_string(m - n) + " carries no cycline triple");
  const auto expected = sys.graph().paths_of_degree(m).size();
  if (triples.size() != expected)
    throw WitnessIncomplete(std::to_string(triples.size()) + " cycline triples found, " + std::to_string(expected) +
                            " expected; enlarge the group ball");
  Element<S> out;
  for (const auto& t : triples) out.add(t, S(1));
  return out;
}

template <class S>
bool is_central_on_generators(ActionSystem& sys, const Element<S>& a) {
  std::vector<Element<S>> gens;
  for (VertexId v = 0; v < sys.graph().num_vertices(); ++v) gens.push_back(vertex_projection<S>(sys, v));
  for (EdgeId e = 0; e < sys.graph().num_edges(); ++e) {
    gens.push_back(edge_monomial<S>(sys, e));
    gens.push_back(adjoint(sys, gens.back()));
  }
  for (auto g : sys.generators()) {
    gens.push_back(unitary<S>(sys, g));
    gens.push_back(unitary<S>(sys, sys.inverse(g)));
  }
  for (const auto& x : gens)
    if (!equivalent(sys, multiply(sys, a, x), multiply(sys, x, a))) return false;
  return true;
}

}  // namespace ssg
