#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "ssg/algebra.hpp"
#include "ssg/perron.hpp"
#include "ssg/periodicity.hpp"

namespace ssg {

// A state on the group algebra of the periodicity lattice, described in the
// coordinates of its HNF basis.
struct TraceSpec {
  enum class Kind { haar, character, mixture };
  Kind kind = Kind::haar;
  std::vector<double> theta;                                   // character
  std::vector<std::pair<double, std::vector<double>>> mixture;  // weight, character

  static TraceSpec haar() { return {}; }
  static TraceSpec character(std::vector<double> theta);
  static TraceSpec mix(std::vector<std::pair<double, std::vector<double>>> parts);

  // Value at the lattice point with the given basis coordinates.
  std::complex<double> operator()(const IntVector& coords) const;
};

class KmsState {
 public:
  // Throws SimplexEmpty when the Perron vector is not invariant under the action.
  KmsState(ActionSystem& sys, PerronData data, PeriodicityLattice lattice, TraceSpec trace);

  const PerronData& perron() const { return data_; }
  const PeriodicityLattice& lattice() const { return lattice_; }
  ActionSystem& system() { return sys_; }

  std::complex<double> evaluate_monomial(const Monomial& m);
  std::complex<double> evaluate(const ComplexElement& a);
  // Trace value at a lattice point; throws NotInLattice.
  std::complex<double> trace_at(const IntVector& z) const;

 private:
  ActionSystem& sys_;
  PerronData data_;
  PeriodicityLattice lattice_;
  TraceSpec trace_;
  CyclineOracle cycline_;
};

// The modular automorphism at inverse temperature one, applied to a monomial
// coefficient: multiplication by rho^{-(d(mu) - d(nu))}.
ComplexElement modular_shift(const PerronData& data, const ComplexElement& a);

// Monomials with both paths of degree <= bound and group part in `group`.
std::vector<Monomial> monomials_up_to(ActionSystem& sys, const Degree& bound, std::span<const GroupElement> group);

struct KmsSampling {
  Degree exhaustive_bound;   // all pairs with both degrees <= this
  Degree random_bound;       // random pairs drawn below this
  std::size_t random_pairs = 500;
  int ball = 1;
  std::uint64_t seed = 20240601;
};

struct KmsReport {
  double max_deviation = 0;
  std::size_t pairs_checked = 0;
  Monomial worst_x, worst_y;
  bool passed = false;
};

KmsReport verify_kms(KmsState& state, const KmsSampling& sampling, double tol = 1e-9);

struct SimplexSummary {
  bool exists = false;
  std::size_t rank = 0;
  std::string verdict;
  int box = 0;
  int ball = 0;
};

SimplexSummary simplex_summary(const ActionSystem& sys, const PerronData& data, const PeriodicityLattice& lattice);

struct DiagonalCheck {
  double max_deviation = 0;
  std::size_t paths_checked = 0;
  bool invariant = false;
};

// Compares the state on diagonal projections with the Perron state value and
// checks invariance of vertex projections under the generators.
DiagonalCheck restrict_to_diagonal(KmsState& state, const Degree& bound);

}  // namespace ssg
