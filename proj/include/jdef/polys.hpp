#pragma once

#include <cstddef>
#include <vector>

#include "jdef/coeffs.hpp"

namespace jdef {

enum class SolutionKind { first, second, custom };

/// Matrix solution u_0..u_N of (lu)_j = z u_j, j >= 1, at a fixed z.
///
/// When the growth guard fires, `blocks` holds u_0..u_{last} with every
/// entry finite and `overflow` is set; `requested_depth` keeps the depth
/// that was asked for.
struct SolutionSequence {
    Complex z;
    std::vector<Matrix> blocks;
    SolutionKind kind = SolutionKind::custom;
    bool overflow = false;
    std::size_t requested_depth = 0;

    std::size_t last_index() const { return blocks.empty() ? 0 : blocks.size() - 1; }
    bool complete() const { return !overflow; }
};

/// Growth guard for solution sequences.
inline constexpr double kOverflowGuard = 1e250;

/// u_{j+1} = B_j^{-1}((z - A_j) u_j - B*_{j-1} u_{j-1}) for j = 1..depth-1.
/// Row 0 is not imposed. Throws BlockError if a B_j is singular.
SolutionSequence solve_recurrence(const CoefficientSequence& seq,
                                  Complex z,
                                  const Matrix& u0,
                                  const Matrix& u1,
                                  std::size_t depth,
                                  SolutionKind kind = SolutionKind::custom);

/// P_0 = I, P_1 = B_0^{-1}(z - A_0).
SolutionSequence first_kind(const CoefficientSequence& seq, Complex z, std::size_t depth);

/// Q_0 = O, Q_1 = B_0^{-1}.
SolutionSequence second_kind(const CoefficientSequence& seq, Complex z, std::size_t depth);

/// (lu)_0 = A_0 u_0 + B_0 u_1 and (lu)_j = B*_{j-1} u_{j-1} + A_j u_j + B_j u_{j+1}
/// for j = 1..N-1.
std::vector<Matrix> apply_l(const CoefficientSequence& seq, const SolutionSequence& u);

/// ||B*_{j-1}u_{j-1} + A_j u_j + B_j u_{j+1} - z u_j|| relative to 1 plus the
/// norms of the four summed terms.
double recurrence_residual(const CoefficientSequence& seq, const SolutionSequence& u, std::size_t j);

} // namespace jdef
