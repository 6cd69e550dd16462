#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ssg {

using IntVector = std::vector<std::int64_t>;

// Row-style Hermite normal form of the lattice spanned by `rows`: upper
// echelon, positive pivots, entries above each pivot reduced into [0, pivot).
// Zero rows are dropped.
std::vector<IntVector> hermite_normal_form(std::vector<IntVector> rows, std::size_t dim);

// Integer coordinates of z in an HNF basis, or nullopt if z is not in the lattice.
std::optional<IntVector> lattice_coordinates(const std::vector<IntVector>& hnf, const IntVector& z);

// All points of {-radius..radius}^dim in lexicographic order.
std::vector<IntVector> box_points(std::size_t dim, int radius);

// Basis of the integer kernel {z : A z = 0}, A given by rows, as an HNF.
std::vector<IntVector> integer_kernel(const std::vector<IntVector>& a_rows, std::size_t dim);

// Prime factorization as (prime, exponent) pairs; n >= 1.
std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n);

std::string to_string(const IntVector& z);

}  // namespace ssg
