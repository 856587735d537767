#pragma once

#include <cstddef>
#include <cstdint>

#include <Eigen/Dense>

#include "jdef/coeffs.hpp"
#include "jdef/powers.hpp"

namespace jdef {

/// Dense (n x n) truncation of a scalar Jacobi matrix.
Eigen::MatrixXd truncated_jacobi(const ScalarJacobi& jacobi, std::size_t n);

/// Top-left (depth+1) corner of the k-th power of the (depth+1+k) truncation.
Eigen::MatrixXd truncated_power_corner(const ScalarJacobi& jacobi, std::size_t k, std::size_t depth);

/// Random block sequence with Hermitian A_j (entries in [-1,1] + i[-1,1]) and
/// B_j = U diag(s) V* with s in [0.5, 2], U, V unitary. Deterministic in seed.
CoefficientSequence random_block_sequence(std::size_t m, std::size_t length, std::uint64_t seed);

} // namespace jdef
