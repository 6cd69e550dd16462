#include "ssg/algebra.hpp"

namespace ssg {

std::vector<Monomial> monomial_product(ActionSystem& sys, const Monomial& a, const Monomial& b) {
  const KGraph& gr = sys.graph();
  std::vector<Monomial> out;
  if (a.nu.range() != b.mu.range()) return out;
  const GroupElement h_inv = sys.inverse(b.g);
  // s_nu^* s_alpha expands over the minimal common extensions.
  for (const auto& [lambda, omega] : gr.lambda_min(a.nu, b.mu)) {
    const Path w = sys.act_path(h_inv, omega);
    out.push_back({gr.compose(a.mu, sys.act_path(a.g, lambda)),
                   sys.multiply(sys.restrict_path(a.g, lambda), sys.restrict_path(b.g, w)),
                   gr.compose(b.nu, w)});
  }
  return out;
}

Monomial monomial_adjoint(ActionSystem& sys, const Monomial& a) { return {a.nu, sys.inverse(a.g), a.mu}; }

std::vector<Monomial> expand_monomial(ActionSystem& sys, const Monomial& a, const Degree& target) {
  const KGraph& gr = sys.graph();
  if (!leq(a.nu.degree(), target)) throw BadRange("cannot refine below the current right degree");
  std::vector<Monomial> out;
  for (const Path& lambda : gr.paths_of_degree(target - a.nu.degree(), a.nu.source()))
    out.push_back({gr.compose(a.mu, sys.act_path(a.g, lambda)), sys.restrict_path(a.g, lambda),
                   gr.compose(a.nu, lambda)});
  return out;
}

}  // namespace ssg
