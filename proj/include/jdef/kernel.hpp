#pragma once

#include <cstddef>
#include <vector>

#include "jdef/coeffs.hpp"

namespace jdef {

enum class KernelRoute { direct, recursive };

/// Lower triangle K_{ji}, 0 <= i <= j <= depth, of m x m blocks stored packed.
class KernelTable {
public:
    KernelTable(std::size_t depth, std::size_t block_size, KernelRoute route);

    std::size_t depth() const noexcept { return depth_; }
    std::size_t block_size() const noexcept { return m_; }
    KernelRoute route() const noexcept { return route_; }

    /// Set when P or Q at z = 0 hit the growth guard; depth() is then the
    /// last fully computable row.
    bool truncated() const noexcept { return truncated_; }
    std::size_t requested_depth() const noexcept { return requested_depth_; }

    Eigen::Map<Matrix> at(std::size_t j, std::size_t i);
    Eigen::Map<const Matrix> at(std::size_t j, std::size_t i) const;

private:
    friend KernelTable k_direct(const CoefficientSequence&, std::size_t);

    std::size_t offset(std::size_t j, std::size_t i) const;

    std::size_t depth_;
    std::size_t m_;
    KernelRoute route_;
    bool truncated_ = false;
    std::size_t requested_depth_;
    std::vector<Complex> data_;
};

/// K_{ji} = Q_j(0) P_i(0)* - P_j(0) Q_i(0)*.
KernelTable k_direct(const CoefficientSequence& seq, std::size_t depth);

/// K_{ji} = K0_{ji} - sum_{k=i}^{j} K0_{jk} A_k K_{ki}, filled column by column.
KernelTable k_recursive(const CoefficientSequence& seq, std::size_t depth);

/// Kernel of the A = 0 matrix: zero at even distance,
/// (-1)^s B_{i+2s}^{-1} B*_{i+2s-1} ... B*_{i+1} B_i^{-1} at distance 2s+1.
Matrix k_zero(const CoefficientSequence& seq, std::size_t j, std::size_t i);

/// Explicit product formula for K_{n+j,n}, j in 1..4.
Matrix k_closed_form(const CoefficientSequence& seq, std::size_t n, std::size_t j);

/// Two terms of the closed form K_{n+4,n} that make up the first series of
/// the fourth-diagonal corollary, and the triple-A term of the second.
struct K4Parts {
    Matrix mixed;  // B^{-1}_{n+3}B*_{n+2}B^{-1}_{n+1}A_{n+1}B^{-1}_n + B^{-1}_{n+3}A_{n+3}B^{-1}_{n+2}B*_{n+1}B^{-1}_n
    Matrix triple; // B^{-1}_{n+3}A_{n+3}B^{-1}_{n+2}A_{n+2}B^{-1}_{n+1}A_{n+1}B^{-1}_n
};
K4Parts k4_parts(const CoefficientSequence& seq, std::size_t n);

/// Two terms of K_{n+3,n}: -B^{-1}_{n+2}B*_{n+1}B^{-1}_n and B^{-1}_{n+2}A_{n+2}B^{-1}_{n+1}A_{n+1}B^{-1}_n.
struct K3Parts {
    Matrix chain;
    Matrix double_a;
};
K3Parts k3_parts(const CoefficientSequence& seq, std::size_t n);

struct CdResidual {
    double value = 0.0;
    bool inconclusive = false; // P overflowed before n + 1
};

/// Relative residual of
///   (conj(z) - z) sum_{j<=n} P_j* P_j = P*_{n+1} B*_n P_n - P*_n B_n P_{n+1},
/// scaled by 1 + the norms of the three sides.
CdResidual christoffel_darboux_residual(const CoefficientSequence& seq, Complex z, std::size_t n);

} // namespace jdef
