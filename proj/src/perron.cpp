#include "ssg/perron.hpp"

#include <cmath>
#include <map>
#include <numeric>

#include <Eigen/Dense>

#include "ssg/errors.hpp"

namespace ssg {

namespace {

// Best rational approximation with denominator <= max_den (continued fractions).
std::pair<std::int64_t, std::int64_t> rationalize(double v, std::int64_t max_den) {
  std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double frac = v;
  for (int it = 0; it < 64; ++it) {
    const double a = std::floor(frac);
    const auto ai = static_cast<std::int64_t>(a);
    const std::int64_t q2 = q0 + ai * q1;
    if (q2 > max_den) break;
    const std::int64_t p2 = p0 + ai * p1;
    p0 = p1, q0 = q1, p1 = p2, q1 = q2;
    const double rest = frac - a;
    if (rest < 1e-13) break;
    frac = 1.0 / rest;
  }
  return {p1, q1};
}

// Tries to certify integral spectral radii: a positive rational eigenvector
// checked exactly against every coordinate matrix.
void certify_integral(const KGraph& g, PerronData& data) {
  const std::size_t nv = g.num_vertices();
  data.exact_rho.assign(data.rho.size(), std::nullopt);
  std::vector<std::int64_t> candidate(data.rho.size());
  for (std::size_t i = 0; i < data.rho.size(); ++i) {
    const double r = std::round(data.rho[i]);
    if (std::abs(data.rho[i] - r) > 1e-9) return;
    candidate[i] = static_cast<std::int64_t>(r);
  }
  std::vector<std::pair<std::int64_t, std::int64_t>> ratios(nv);
  std::int64_t common = 1;
  for (std::size_t v = 0; v < nv; ++v) {
    ratios[v] = rationalize(data.x[v] / data.x[0], 1000000);
    if (ratios[v].first <= 0) return;
    common = std::lcm(common, ratios[v].second);
    if (common > (std::int64_t{1} << 40)) return;
  }
  std::vector<__int128> y(nv);
  for (std::size_t v = 0; v < nv; ++v) y[v] = static_cast<__int128>(ratios[v].first) * (common / ratios[v].second);
  for (int c = 0; c < g.k(); ++c) {
    const IntMatrix t = coordinate_matrix(g, c);
    for (std::size_t v = 0; v < nv; ++v) {
      __int128 s = 0;
      for (std::size_t w = 0; w < nv; ++w)
        s += static_cast<__int128>(t(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(w))) * y[w];
      if (s != static_cast<__int128>(candidate[static_cast<std::size_t>(c)]) * y[v]) return;
    }
  }
  for (std::size_t i = 0; i < data.rho.size(); ++i) data.exact_rho[i] = candidate[i];
}

}  // namespace

bool PerronData::all_integral() const {
  for (const auto& r : exact_rho)
    if (!r) return false;
  return !exact_rho.empty();
}

PerronData spectral_data(const KGraph& g, PerronOptions opts) {
  if (!strongly_connected(g)) throw NotStronglyConnected("the 1-skeleton is not strongly connected");
  const auto nv = static_cast<Eigen::Index>(g.num_vertices());
  std::vector<Eigen::MatrixXd> t;
  // I + sum of the coordinate matrices is primitive for a strongly connected
  // skeleton and shares the common positive eigenvector.
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(nv, nv);
  for (int c = 0; c < g.k(); ++c) {
    t.push_back(coordinate_matrix(g, c).cast<double>());
    m += t.back();
  }
  Eigen::VectorXd x = Eigen::VectorXd::Constant(nv, 1.0 / static_cast<double>(nv));
  PerronData data;
  bool converged = false;
  for (int it = 1; it <= opts.max_iter; ++it) {
    Eigen::VectorXd y = m * x;
    y /= y.sum();
    const double diff = (y - x).lpNorm<1>();
    x = y;
    data.iterations = it;
    if (diff < opts.tol) {
      converged = true;
      break;
    }
  }
  auto residuals = [&](const Eigen::VectorXd& v, std::vector<double>& rho, std::vector<double>& res) {
    rho.clear(), res.clear();
    for (const auto& tc : t) {
      const Eigen::VectorXd tv = tc * v;
      const double r = tv.lpNorm<1>() / v.lpNorm<1>();
      rho.push_back(r);
      res.push_back((tv - r * v).lpNorm<1>());
    }
  };
  residuals(x, data.rho, data.residuals);
  auto within = [&](const PerronData& d) {
    for (std::size_t i = 0; i < d.rho.size(); ++i)
      if (d.residuals[i] > 100 * std::max(opts.tol, 1e-14) * (1.0 + d.rho[i])) return false;
    return true;
  };
  if (!converged || !within(data)) {
    // Shifted inverse iteration around the current eigenvalue estimate.
    const double lambda = (m * x).sum() / x.sum();
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(m - (lambda + 1e-9 * (1 + lambda)) * Eigen::MatrixXd::Identity(nv, nv));
    for (int it = 0; it < 3; ++it) {
      Eigen::VectorXd y = lu.solve(x);
      x = y / y.sum();
    }
    residuals(x, data.rho, data.residuals);
    if (!within(data)) throw NoConvergence("power iteration did not reach the residual tolerance");
  }
  if ((x.array() <= 0).any()) throw NoConvergence("eigenvector is not strictly positive");
  data.x.assign(x.data(), x.data() + nv);
  certify_integral(g, data);
  return data;
}

double pf_state_value(const PerronData& data, const Path& mu) {
  double v = data.x.at(mu.source());
  for (std::size_t i = 0; i < mu.degree().size(); ++i) v *= std::pow(data.rho[i], -mu.degree()[i]);
  return v;
}

bool check_g_invariance(const PerronData& data, const ActionSystem& sys, double tol) {
  for (auto g : sys.generators())
    for (VertexId v = 0; v < sys.graph().num_vertices(); ++v)
      if (std::abs(data.x[sys.act_vertex(g, v)] - data.x[v]) >= tol) return false;
  return true;
}

bool in_rho_kernel(const PerronData& data, const IntVector& z, double tol) {
  if (data.all_integral()) {
    std::map<std::int64_t, std::int64_t> exponent;
    for (std::size_t i = 0; i < z.size(); ++i)
      for (auto [p, e] : factorize(*data.exact_rho[i])) exponent[p] += z[i] * e;
    for (auto [p, e] : exponent)
      if (e != 0) return false;
    return true;
  }
  double s = 0;
  for (std::size_t i = 0; i < z.size(); ++i) s += static_cast<double>(z[i]) * std::log(data.rho[i]);
  return std::abs(s) < tol;
}

std::vector<IntVector> rho_kernel_lattice(const PerronData& data, int box, double tol) {
  std::vector<IntVector> members;
  for (auto& z : box_points(data.rho.size(), box))
    if (in_rho_kernel(data, z, tol)) members.push_back(z);
  return hermite_normal_form(std::move(members), data.rho.size());
}

}  // namespace ssg
