#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace jdef {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Matrix norm used by every series criterion. The spectral norm is the
/// default; Frobenius is an upper bound for it.
enum class NormKind { spectral, frobenius };

double norm(const Eigen::Ref<const Matrix>& a, NormKind kind = NormKind::spectral);

std::string_view to_string(NormKind kind);
NormKind parse_norm(std::string_view name);

/// Solves b·x = rhs by partial-pivot LU. Callers validate invertibility.
Matrix lu_solve(const Matrix& b, const Matrix& rhs);

/// Raised when a block at a given index violates a structural requirement
/// (singular B_j, non-Hermitian A_j, zero outer band entry, singular A_n).
class BlockError : public std::runtime_error {
public:
    BlockError(std::size_t index, const std::string& what)
        : std::runtime_error(what + " at index " + std::to_string(index))
        , index_(index)
    {
    }

    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

} // namespace jdef
