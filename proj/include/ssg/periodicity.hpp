#pragma once

#include <map>
#include <span>
#include <tuple>
#include <vector>

#include "ssg/action.hpp"
#include "ssg/kgraph.hpp"
#include "ssg/lattice.hpp"
#include "ssg/perron.hpp"

namespace ssg {

struct Triple {
  Path mu;
  GroupElement g;
  Path nu;
  friend auto operator<=>(const Triple&, const Triple&) = default;
  friend bool operator==(const Triple&, const Triple&) = default;
};

struct CyclineCertificate {
  bool cycline = false;
  // Triple after stripping the common prefix; empty paths if the prefixes differ.
  std::optional<Triple> reduced;
  // States of the greatest post-fixpoint reachable from the reduced triple.
  std::vector<Triple> surviving;
  std::size_t explored = 0;
};

// Decides mu (g . x) = nu x for every infinite path x from s(nu).
CyclineCertificate is_cycline(ActionSystem& sys, const Path& mu, GroupElement g, const Path& nu);

// Memoizing front end used by the algebra and state layers.
class CyclineOracle {
 public:
  explicit CyclineOracle(ActionSystem& sys) : sys_(sys) {}
  bool operator()(const Path& mu, GroupElement g, const Path& nu);
  ActionSystem& system() { return sys_; }

 private:
  ActionSystem& sys_;
  std::map<Triple, bool> memo_;
};

std::vector<Triple> cycline_triples(ActionSystem& sys, const Degree& m, const Degree& n,
                                    std::span<const GroupElement> group);
bool has_cycline_triple(ActionSystem& sys, const Degree& m, const Degree& n, std::span<const GroupElement> group);

// sigma^p(x) = sigma^q(g . x) for every x in v Lambda^infinity.
bool sigma_contains(ActionSystem& sys, const Degree& p, const Degree& q, GroupElement g, VertexId v);

struct PeriodicityParams {
  int box = 4;
  int ball = 3;
  double tol = 1e-9;
};

struct PeriodicityLattice {
  std::size_t k = 0;
  std::vector<IntVector> basis;  // HNF
  std::vector<IntVector> members;  // all members found in the box
  int box = 0;
  int ball = 0;
  std::size_t group_elements_searched = 0;

  std::size_t rank() const { return basis.size(); }
  bool contains(const IntVector& z) const { return lattice_coordinates(basis, z).has_value(); }
};

PeriodicityLattice periodicity_group(ActionSystem& sys, const PerronData& data, const PeriodicityParams& params);

struct AperiodicityVerdict {
  bool aperiodic = false;
  int box = 0;
  int ball = 0;
};
AperiodicityVerdict is_g_aperiodic(ActionSystem& sys, const PerronData& data, const PeriodicityParams& params);

// Splits z into its positive and negative parts.
std::pair<Degree, Degree> split_degree(const IntVector& z);

}  // namespace ssg
