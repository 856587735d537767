#include "jdef/kernel.hpp"

#include <stdexcept>

#include "jdef/polys.hpp"

namespace jdef {

KernelTable::KernelTable(std::size_t depth, std::size_t block_size, KernelRoute route)
    : depth_(depth)
    , m_(block_size)
    , route_(route)
    , requested_depth_(depth)
    , data_((depth + 1) * (depth + 2) / 2 * block_size * block_size, Complex(0.0))
{
}

std::size_t KernelTable::offset(std::size_t j, std::size_t i) const
{
    if (i > j || j > depth_) {
        throw std::out_of_range("kernel index (" + std::to_string(j) + ", " + std::to_string(i) +
                                ") outside the lower triangle of depth " + std::to_string(depth_));
    }
    return (j * (j + 1) / 2 + i) * m_ * m_;
}

Eigen::Map<Matrix> KernelTable::at(std::size_t j, std::size_t i)
{
    const auto m = static_cast<Eigen::Index>(m_);
    return Eigen::Map<Matrix>(data_.data() + offset(j, i), m, m);
}

Eigen::Map<const Matrix> KernelTable::at(std::size_t j, std::size_t i) const
{
    const auto m = static_cast<Eigen::Index>(m_);
    return Eigen::Map<const Matrix>(data_.data() + offset(j, i), m, m);
}

KernelTable k_direct(const CoefficientSequence& seq, std::size_t depth)
{
    if (depth < 1) {
        throw std::invalid_argument("kernel depth must be >= 1");
    }
    const SolutionSequence p = first_kind(seq, Complex(0.0), depth);
    const SolutionSequence q = second_kind(seq, Complex(0.0), depth);
    const std::size_t usable = std::min(p.last_index(), q.last_index());

    KernelTable table(usable, seq.block_size(), KernelRoute::direct);
    table.requested_depth_ = depth;
    table.truncated_ = usable < depth;
    for (std::size_t i = 0; i <= usable; ++i) {
        const Matrix pi = p.blocks[i].adjoint();
        const Matrix qi = q.blocks[i].adjoint();
        for (std::size_t j = i + 1; j <= usable; ++j) {
            table.at(j, i) = q.blocks[j] * pi - p.blocks[j] * qi;
        }
    }
    return table;
}

Matrix k_zero(const CoefficientSequence& seq, std::size_t j, std::size_t i)
{
    const auto m = static_cast<Eigen::Index>(seq.block_size());
    if (j < i || (j - i) % 2 == 0) {
        return Matrix::Zero(m, m);
    }
    Matrix acc = lu_solve(seq.b(i), Matrix::Identity(m, m));
    for (std::size_t k = i + 2; k <= j - 1; k += 2) {
        acc = -lu_solve(seq.b(k), seq.b(k - 1).adjoint() * acc);
    }
    return acc;
}

KernelTable k_recursive(const CoefficientSequence& seq, std::size_t depth)
{
    if (depth < 1) {
        throw std::invalid_argument("kernel depth must be >= 1");
    }
    const auto m = static_cast<Eigen::Index>(seq.block_size());
    std::vector<BlockPair> blocks;
    blocks.reserve(depth + 1);
    for (std::size_t k = 0; k <= depth; ++k) {
        blocks.push_back(seq.at(k));
    }

    // K0 columns by the closed-form product, extended two rows at a time.
    KernelTable k0(depth, seq.block_size(), KernelRoute::recursive);
    for (std::size_t i = 0; i < depth; ++i) {
        Matrix acc = lu_solve(blocks[i].b, Matrix::Identity(m, m));
        k0.at(i + 1, i) = acc;
        for (std::size_t k = i + 2; k + 1 <= depth; k += 2) {
            acc = -lu_solve(blocks[k].b, blocks[k - 1].b.adjoint() * acc);
            k0.at(k + 1, i) = acc;
        }
    }

    KernelTable table(depth, seq.block_size(), KernelRoute::recursive);
    for (std::size_t i = 0; i <= depth; ++i) {
        for (std::size_t j = i + 1; j <= depth; ++j) {
            Matrix value = k0.at(j, i);
            // k = i and k = j contribute nothing (K_ii = 0, K0_jj = 0); kept for fidelity.
            for (std::size_t k = i; k <= j; ++k) {
                value -= k0.at(j, k) * blocks[k].a * table.at(k, i);
            }
            table.at(j, i) = value;
        }
    }
    return table;
}

namespace {

struct Chain {
    const CoefficientSequence& seq;
    Eigen::Index m;

    Matrix binv(std::size_t k, const Matrix& rhs) const { return lu_solve(seq.b(k), rhs); }
    Matrix bstar(std::size_t k, const Matrix& rhs) const { return seq.b(k).adjoint() * rhs; }
    Matrix a(std::size_t k, const Matrix& rhs) const { return seq.a(k) * rhs; }
    Matrix id() const { return Matrix::Identity(m, m); }
};

} // namespace

K3Parts k3_parts(const CoefficientSequence& seq, std::size_t n)
{
    const Chain c{seq, static_cast<Eigen::Index>(seq.block_size())};
    const Matrix bn = c.binv(n, c.id());
    K3Parts parts;
    parts.chain = -c.binv(n + 2, c.bstar(n + 1, bn));
    parts.double_a = c.binv(n + 2, c.a(n + 2, c.binv(n + 1, c.a(n + 1, bn))));
    return parts;
}

K4Parts k4_parts(const CoefficientSequence& seq, std::size_t n)
{
    const Chain c{seq, static_cast<Eigen::Index>(seq.block_size())};
    const Matrix bn = c.binv(n, c.id());
    K4Parts parts;
    const Matrix first = c.binv(n + 3, c.bstar(n + 2, c.binv(n + 1, c.a(n + 1, bn))));
    const Matrix second = c.binv(n + 3, c.a(n + 3, c.binv(n + 2, c.bstar(n + 1, bn))));
    parts.mixed = first + second;
    parts.triple = c.binv(n + 3, c.a(n + 3, c.binv(n + 2, c.a(n + 2, c.binv(n + 1, c.a(n + 1, bn))))));
    return parts;
}

Matrix k_closed_form(const CoefficientSequence& seq, std::size_t n, std::size_t j)
{
    const Chain c{seq, static_cast<Eigen::Index>(seq.block_size())};
    switch (j) {
    case 1:
        return c.binv(n, c.id());
    case 2:
        // Signed so that it equals the table entry; norms are unaffected.
        return -c.binv(n + 1, c.a(n + 1, c.binv(n, c.id())));
    case 3: {
        const K3Parts parts = k3_parts(seq, n);
        return parts.chain + parts.double_a;
    }
    case 4: {
        const K4Parts parts = k4_parts(seq, n);
        return parts.mixed - parts.triple;
    }
    default:
        throw std::invalid_argument("closed forms exist for j in 1..4 only, got " + std::to_string(j));
    }
}

CdResidual christoffel_darboux_residual(const CoefficientSequence& seq, Complex z, std::size_t n)
{
    const SolutionSequence p = first_kind(seq, z, n + 1);
    CdResidual out;
    if (p.overflow) {
        out.inconclusive = true;
        return out;
    }
    const auto m = static_cast<Eigen::Index>(seq.block_size());
    Matrix gram = Matrix::Zero(m, m);
    for (std::size_t j = 0; j <= n; ++j) {
        gram += p.blocks[j].adjoint() * p.blocks[j];
    }
    const Matrix lhs = (std::conj(z) - z) * gram;
    const Matrix bn = seq.b(n);
    const Matrix t1 = p.blocks[n + 1].adjoint() * bn.adjoint() * p.blocks[n];
    const Matrix t2 = p.blocks[n].adjoint() * bn * p.blocks[n + 1];
    const double scale = 1.0 + norm(lhs) + norm(t1) + norm(t2);
    out.value = norm(lhs - (t1 - t2)) / scale;
    return out;
}

} // namespace jdef
