#pragma once

#include <optional>
#include <vector>

#include "ssg/action.hpp"
#include "ssg/kgraph.hpp"
#include "ssg/lattice.hpp"

namespace ssg {

struct PerronData {
  std::vector<double> rho;                        // spectral radius per color
  std::vector<double> x;                          // positive, sums to 1
  std::vector<double> residuals;                  // |T_i x - rho_i x|_1 per color
  std::vector<std::optional<std::int64_t>> exact_rho;  // set when certified integral
  int iterations = 0;

  bool all_integral() const;
};

struct PerronOptions {
  double tol = 1e-12;
  int max_iter = 100000;
};

PerronData spectral_data(const KGraph& g, PerronOptions opts = {});

// rho^{-d(mu)} x(s(mu))
double pf_state_value(const PerronData& data, const Path& mu);

bool check_g_invariance(const PerronData& data, const ActionSystem& sys, double tol = 1e-9);

// Whether prod rho_i^{z_i} = 1; exact when every rho_i is certified integral.
bool in_rho_kernel(const PerronData& data, const IntVector& z, double tol = 1e-9);

// HNF basis of the lattice generated by kernel points in the box.
std::vector<IntVector> rho_kernel_lattice(const PerronData& data, int box, double tol = 1e-9);

}  // namespace ssg
