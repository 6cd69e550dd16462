#include "ssg/lattice.hpp"

#include <cstdlib>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace ssg {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

void axpy(IntVector& row, std::int64_t q, const IntVector& pivot) {
  for (std::size_t j = 0; j < row.size(); ++j) row[j] -= q * pivot[j];
}

bool is_zero(const IntVector& v) {
  for (auto x : v)
    if (x != 0) return false;
  return true;
}

}  // namespace

std::vector<IntVector> hermite_normal_form(std::vector<IntVector> rows, std::size_t dim) {
  std::vector<IntVector> a;
  for (auto& r : rows) {
    if (r.size() != dim) throw std::invalid_argument("hermite_normal_form: dimension mismatch");
    if (!is_zero(r)) a.push_back(std::move(r));
  }
  std::size_t top = 0;
  for (std::size_t col = 0; col < dim && top < a.size(); ++col) {
    while (true) {
      std::size_t best = a.size();
      for (std::size_t i = top; i < a.size(); ++i)
        if (a[i][col] != 0 && (best == a.size() || std::llabs(a[i][col]) < std::llabs(a[best][col])))
          best = i;
      if (best == a.size()) break;
      std::swap(a[top], a[best]);
      bool done = true;
      for (std::size_t i = top + 1; i < a.size(); ++i) {
        if (a[i][col] == 0) continue;
        axpy(a[i], a[i][col] / a[top][col], a[top]);
        if (a[i][col] != 0) done = false;
      }
      if (done) break;
    }
    if (a[top][col] == 0) continue;
    if (a[top][col] < 0)
      for (auto& x : a[top]) x = -x;
    for (std::size_t i = 0; i < top; ++i) axpy(a[i], floor_div(a[i][col], a[top][col]), a[top]);
    ++top;
  }
  a.resize(top);
  return a;
}

std::optional<IntVector> lattice_coordinates(const std::vector<IntVector>& hnf, const IntVector& z) {
  IntVector rest = z;
  IntVector coords(hnf.size(), 0);
  for (std::size_t r = 0; r < hnf.size(); ++r) {
    std::size_t col = 0;
    while (hnf[r][col] == 0) ++col;
    if (rest[col] % hnf[r][col] != 0) return std::nullopt;
    coords[r] = rest[col] / hnf[r][col];
    axpy(rest, coords[r], hnf[r]);
  }
  if (!is_zero(rest)) return std::nullopt;
  return coords;
}

std::vector<IntVector> box_points(std::size_t dim, int radius) {
  std::vector<IntVector> out;
  IntVector z(dim, -radius);
  while (true) {
    out.push_back(z);
    std::size_t i = dim;
    while (i > 0 && z[i - 1] == radius) z[--i] = -radius;
    if (i == 0) return out;
    ++z[i - 1];
  }
}

std::vector<IntVector> integer_kernel(const std::vector<IntVector>& a_rows, std::size_t dim) {
  // Column reduction of the stacked matrix [A; I]: every column whose A-part
  // vanishes carries a kernel vector in its identity part.
  const std::size_t m = a_rows.size();
  std::vector<IntVector> cols(dim, IntVector(m + dim, 0));
  for (std::size_t j = 0; j < dim; ++j) {
    for (std::size_t i = 0; i < m; ++i) cols[j][i] = a_rows[i].at(j);
    cols[j][m + j] = 1;
  }
  std::size_t left = 0;
  for (std::size_t row = 0; row < m && left < dim; ++row) {
    while (true) {
      std::size_t best = dim;
      for (std::size_t j = left; j < dim; ++j)
        if (cols[j][row] != 0 && (best == dim || std::llabs(cols[j][row]) < std::llabs(cols[best][row])))
          best = j;
      if (best == dim) break;
      std::swap(cols[left], cols[best]);
      bool done = true;
      for (std::size_t j = left + 1; j < dim; ++j) {
        if (cols[j][row] == 0) continue;
        axpy(cols[j], cols[j][row] / cols[left][row], cols[left]);
        if (cols[j][row] != 0) done = false;
      }
      if (done) break;
    }
    if (cols[left][row] != 0) ++left;
  }
  std::vector<IntVector> kernel;
  for (std::size_t j = left; j < dim; ++j) kernel.emplace_back(cols[j].begin() + static_cast<std::ptrdiff_t>(m), cols[j].end());
  return hermite_normal_form(std::move(kernel), dim);
}

std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n) {
  if (n < 1) throw std::invalid_argument("factorize: n must be positive");
  std::vector<std::pair<std::int64_t, int>> out;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e) out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

std::string to_string(const IntVector& z) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < z.size(); ++i) os << (i ? "," : "") << z[i];
  os << ')';
  return os.str();
}

}  // namespace ssg
