#include "jdef/reference.hpp"

#include <memory>
#include <random>
#include <vector>

#include <Eigen/QR>

namespace jdef {

Eigen::MatrixXd truncated_jacobi(const ScalarJacobi& jacobi, std::size_t n)
{
    const auto size = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(size, size);
    for (Eigen::Index i = 0; i < size; ++i) {
        out(i, i) = jacobi.a(static_cast<std::size_t>(i));
        if (i + 1 < size) {
            out(i, i + 1) = out(i + 1, i) = jacobi.b(static_cast<std::size_t>(i));
        }
    }
    return out;
}

Eigen::MatrixXd truncated_power_corner(const ScalarJacobi& jacobi, std::size_t k, std::size_t depth)
{
    const Eigen::MatrixXd j = truncated_jacobi(jacobi, depth + 1 + k);
    Eigen::MatrixXd acc = j;
    for (std::size_t s = 1; s < k; ++s) {
        acc = acc * j;
    }
    const auto n = static_cast<Eigen::Index>(depth + 1);
    return acc.topLeftCorner(n, n);
}

namespace {

Matrix random_unitary(std::size_t m, std::mt19937_64& rng)
{
    std::normal_distribution<double> g;
    const auto n = static_cast<Eigen::Index>(m);
    Matrix x(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index c = 0; c < n; ++c) {
            x(r, c) = Complex(g(rng), g(rng));
        }
    }
    Eigen::HouseholderQR<Matrix> qr(x);
    return qr.householderQ() * Matrix::Identity(n, n);
}

} // namespace

CoefficientSequence random_block_sequence(std::size_t m, std::size_t length, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_real_distribution<double> sv(0.5, 2.0);
    const auto n = static_cast<Eigen::Index>(m);

    auto blocks = std::make_shared<std::vector<BlockPair>>();
    for (std::size_t j = 0; j < length; ++j) {
        Matrix x(n, n);
        for (Eigen::Index r = 0; r < n; ++r) {
            for (Eigen::Index c = 0; c < n; ++c) {
                x(r, c) = Complex(unit(rng), unit(rng));
            }
        }
        Matrix a = 0.5 * (x + x.adjoint());
        Eigen::VectorXd s(n);
        for (Eigen::Index r = 0; r < n; ++r) {
            s(r) = sv(rng);
        }
        const Matrix u = random_unitary(m, rng);
        const Matrix v = random_unitary(m, rng);
        Matrix b = u * s.cast<Complex>().asDiagonal() * v.adjoint();
        blocks->push_back(BlockPair{std::move(a), std::move(b), j});
    }
    return CoefficientSequence(
        m, [blocks](std::size_t j) { return blocks->at(j); }, "random", {}, length);
}

} // namespace jdef
