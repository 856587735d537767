#include "jdef/polys.hpp"

#include <stdexcept>

namespace jdef {

namespace {

bool within_guard(const Matrix& u)
{
    if (!u.allFinite()) {
        return false;
    }
    return u.size() == 0 || u.cwiseAbs().maxCoeff() <= kOverflowGuard;
}

} // namespace

SolutionSequence solve_recurrence(const CoefficientSequence& seq,
                                  Complex z,
                                  const Matrix& u0,
                                  const Matrix& u1,
                                  std::size_t depth,
                                  SolutionKind kind)
{
    const auto m = static_cast<Eigen::Index>(seq.block_size());
    if (depth < 1) {
        throw std::invalid_argument("solve_recurrence needs depth >= 1");
    }
    if (u0.rows() != m || u1.rows() != m || u0.cols() != u1.cols()) {
        throw std::invalid_argument("initial blocks do not match the block size");
    }

    SolutionSequence out;
    out.z = z;
    out.kind = kind;
    out.requested_depth = depth;
    out.blocks.reserve(depth + 1);
    out.blocks.push_back(u0);
    if (!within_guard(u1)) {
        out.overflow = true;
        return out;
    }
    out.blocks.push_back(u1);

    const Matrix identity = Matrix::Identity(m, m);
    BlockPair prev = seq.at(0);
    for (std::size_t j = 1; j < depth; ++j) {
        BlockPair cur = seq.at(j);
        const Matrix rhs = (z * identity - cur.a) * out.blocks[j] - prev.b.adjoint() * out.blocks[j - 1];
        Matrix next = lu_solve(cur.b, rhs);
        if (!within_guard(next)) {
            out.overflow = true;
            break;
        }
        out.blocks.push_back(std::move(next));
        prev = std::move(cur);
    }
    return out;
}

SolutionSequence first_kind(const CoefficientSequence& seq, Complex z, std::size_t depth)
{
    const auto m = static_cast<Eigen::Index>(seq.block_size());
    const BlockPair b0 = seq.at(0);
    const Matrix identity = Matrix::Identity(m, m);
    const Matrix p1 = lu_solve(b0.b, z * identity - b0.a);
    return solve_recurrence(seq, z, identity, p1, depth, SolutionKind::first);
}

SolutionSequence second_kind(const CoefficientSequence& seq, Complex z, std::size_t depth)
{
    const auto m = static_cast<Eigen::Index>(seq.block_size());
    const BlockPair b0 = seq.at(0);
    const Matrix q1 = lu_solve(b0.b, Matrix::Identity(m, m));
    return solve_recurrence(seq, z, Matrix::Zero(m, m), q1, depth, SolutionKind::second);
}

std::vector<Matrix> apply_l(const CoefficientSequence& seq, const SolutionSequence& u)
{
    if (u.blocks.size() < 2) {
        throw std::invalid_argument("apply_l needs at least two blocks");
    }
    std::vector<Matrix> out;
    out.reserve(u.blocks.size() - 1);
    Matrix b_prev = Matrix::Zero(seq.block_size(), seq.block_size());
    for (std::size_t j = 0; j + 1 < u.blocks.size(); ++j) {
        const BlockPair cur = seq.at(j);
        Matrix row = cur.a * u.blocks[j] + cur.b * u.blocks[j + 1];
        if (j > 0) {
            row += b_prev.adjoint() * u.blocks[j - 1];
        }
        out.push_back(std::move(row));
        b_prev = cur.b;
    }
    return out;
}

double recurrence_residual(const CoefficientSequence& seq, const SolutionSequence& u, std::size_t j)
{
    if (j == 0 || j + 1 >= u.blocks.size()) {
        throw std::out_of_range("residual index must be interior");
    }
    const BlockPair cur = seq.at(j);
    const Matrix b_prev = seq.b_prev(j);
    const Matrix& lo = u.blocks[j - 1];
    const Matrix& mid = u.blocks[j];
    const Matrix& hi = u.blocks[j + 1];
    const Matrix t0 = b_prev.adjoint() * lo;
    const Matrix t1 = cur.a * mid;
    const Matrix t2 = cur.b * hi;
    const Matrix r = t0 + t1 + t2 - u.z * mid;
    // Scaled by the magnitudes of the summed terms; equals 1 + sum ||u|| for O(1) coefficients.
    const double scale = 1.0 + norm(t0) + norm(t1) + norm(t2) + std::abs(u.z) * norm(mid);
    return norm(r) / scale;
}

} // namespace jdef
