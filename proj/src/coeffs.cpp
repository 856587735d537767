#include "jdef/coeffs.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <memory>
#include <sstream>
#include <stdexcept>

namespace jdef {

std::optional<std::string> check_block(const BlockPair& block, const Tolerances& tol)
{
    const auto m = block.a.rows();
    if (block.a.cols() != m || block.b.rows() != m || block.b.cols() != m) {
        return "block shape mismatch";
    }
    if (!block.a.allFinite() || !block.b.allFinite()) {
        return "non-finite block entry";
    }
    const double scale = 1.0 + block.a.cwiseAbs().maxCoeff();
    const double skew = (block.a - block.a.adjoint()).cwiseAbs().maxCoeff();
    if (skew > tol.hermitian * scale) {
        return "A is not self-adjoint";
    }
    if (m == 1) {
        if (block.b(0, 0) == Complex(0.0)) {
            return "B is singular";
        }
        return std::nullopt;
    }
    if (tol.triangular_b) {
        const Eigen::VectorXd d = block.b.diagonal().cwiseAbs();
        if (!(d.minCoeff() >= tol.invertibility * d.maxCoeff())) {
            return "B is singular";
        }
        return std::nullopt;
    }
    Eigen::JacobiSVD<Matrix> svd(block.b);
    const auto& s = svd.singularValues();
    if (!(s(m - 1) >= tol.invertibility * s(0)) || s(0) == 0.0) {
        return "B is singular";
    }
    return std::nullopt;
}

std::string_view to_string(Family family)
{
    switch (family) {
    case Family::constant: return "constant";
    case Family::power: return "power";
    case Family::alternating_power: return "alternating_power";
    case Family::table: return "table";
    case Family::example1: return "example1";
    case Family::band_wrap: return "band_wrap";
    case Family::custom: return "custom";
    }
    return "custom";
}

Family parse_family(std::string_view name)
{
    for (auto f : {Family::constant, Family::power, Family::alternating_power, Family::table,
                   Family::example1, Family::band_wrap}) {
        if (name == to_string(f)) {
            return f;
        }
    }
    throw std::invalid_argument("unknown family tag '" + std::string(name) + "'");
}

CoefficientSequence::CoefficientSequence(std::size_t block_size,
                                         Generator generator,
                                         std::string family_tag,
                                         Tolerances tolerances,
                                         std::optional<std::size_t> length)
    : block_size_(block_size)
    , generator_(std::move(generator))
    , family_tag_(std::move(family_tag))
    , tolerances_(tolerances)
    , length_(length)
{
    if (block_size_ == 0) {
        throw std::invalid_argument("block size must be at least 1");
    }
}

BlockPair CoefficientSequence::raw(std::size_t j) const
{
    if (length_ && j >= *length_) {
        throw BlockError(j, "coefficient table exhausted (length " + std::to_string(*length_) + ")");
    }
    BlockPair block = generator_(j);
    block.index = j;
    return block;
}

BlockPair CoefficientSequence::at(std::size_t j) const
{
    BlockPair block = raw(j);
    if (auto err = check_block(block, tolerances_)) {
        throw BlockError(j, *err);
    }
    return block;
}

Matrix CoefficientSequence::b_prev(std::size_t j) const
{
    if (j == 0) {
        return Matrix::Zero(block_size_, block_size_);
    }
    return at(j - 1).b;
}

Complex CoefficientSequence::entry(std::size_t row, std::size_t col) const
{
    const std::size_t m = block_size_;
    const std::size_t bi = row / m;
    const std::size_t bj = col / m;
    const auto r = static_cast<Eigen::Index>(row % m);
    const auto c = static_cast<Eigen::Index>(col % m);
    if (bi == bj) {
        return raw(bi).a(r, c);
    }
    if (bj == bi + 1) {
        return raw(bi).b(r, c);
    }
    if (bi == bj + 1) {
        return std::conj(raw(bj).b(c, r));
    }
    return Complex(0.0);
}

CoefficientSequence CoefficientSequence::with_tolerances(Tolerances tol) const
{
    CoefficientSequence copy = *this;
    copy.tolerances_ = tol;
    return copy;
}

namespace {

Matrix scalar_block(double v)
{
    return Matrix::Constant(1, 1, Complex(v));
}

void require_positive_b(double b)
{
    if (!(b > 0.0)) {
        throw std::invalid_argument("scalar families require b > 0");
    }
}

} // namespace

BandSpec example1_band(std::size_t p, std::size_t m)
{
    if (m < 2 || p < 1 || p >= m) {
        throw std::invalid_argument("example1 requires 1 <= p <= m-1");
    }
    BandSpec spec;
    spec.bandwidth = m;
    spec.entry = [p, m](std::size_t i, std::size_t j) {
        const std::size_t lo = std::min(i, j);
        const std::size_t dist = std::max(i, j) - lo;
        double v = 0.0;
        if (dist == p) {
            const double t = static_cast<double>(lo) + 1.0;
            v += t * t;
        }
        if (dist == m) {
            v += 1.0;
        }
        return Complex(v);
    };
    return spec;
}

CoefficientSequence band_to_block(const BandSpec& spec, Tolerances tol)
{
    const std::size_t m = spec.bandwidth;
    if (m == 0 || !spec.entry) {
        throw std::invalid_argument("band spec needs bandwidth >= 1 and an entry function");
    }
    auto gen = [spec, m](std::size_t k) {
        BlockPair block{Matrix(m, m), Matrix(m, m), k};
        const std::size_t base = k * m;
        for (std::size_t r = 0; r < m; ++r) {
            for (std::size_t s = 0; s < m; ++s) {
                const auto ri = static_cast<Eigen::Index>(r);
                const auto si = static_cast<Eigen::Index>(s);
                block.a(ri, si) = spec.entry(base + r, base + s);
                // Entries with s > r lie outside the band.
                block.b(ri, si) = s <= r ? spec.entry(base + r, base + m + s) : Complex(0.0);
            }
            if (spec.entry(base + r, base + r + m) == Complex(0.0)) {
                throw BlockError(base + r, "zero outer band entry c_{j,j+m}");
            }
        }
        return block;
    };
    tol.triangular_b = true;
    return CoefficientSequence(m, gen, "band_wrap", tol);
}

CoefficientSequence make_family(Family family, const FamilyParams& p)
{
    switch (family) {
    case Family::constant: {
        require_positive_b(p.b);
        const double a = p.a;
        const double b = p.b;
        return CoefficientSequence(
            1, [a, b](std::size_t j) { return BlockPair{scalar_block(a), scalar_block(b), j}; },
            "constant", p.tolerances);
    }
    case Family::power: {
        require_positive_b(p.b);
        const double a = p.a, b = p.b, alpha = p.alpha, beta = p.beta;
        return CoefficientSequence(
            1,
            [=](std::size_t j) {
                const double t = static_cast<double>(j) + 1.0;
                return BlockPair{scalar_block(a * std::pow(t, beta)), scalar_block(b * std::pow(t, alpha)), j};
            },
            "power", p.tolerances);
    }
    case Family::alternating_power: {
        require_positive_b(p.b);
        const double a = p.a, b = p.b, alpha = p.alpha;
        return CoefficientSequence(
            1,
            [=](std::size_t j) {
                const double t = std::pow(static_cast<double>(j) + 1.0, alpha);
                const double sign = (j % 2 == 0) ? 1.0 : -1.0;
                return BlockPair{scalar_block(sign * a * t), scalar_block(b * t), j};
            },
            "alternating_power", p.tolerances);
    }
    case Family::table: {
        if (p.table.empty()) {
            throw std::invalid_argument("table family needs at least one block pair");
        }
        const auto m = static_cast<std::size_t>(p.table.front().a.rows());
        auto blocks = std::make_shared<const std::vector<BlockPair>>(p.table);
        return CoefficientSequence(
            m, [blocks](std::size_t j) { return (*blocks)[j]; }, "table", p.tolerances, blocks->size());
    }
    case Family::example1: {
        CoefficientSequence seq = band_to_block(example1_band(p.p, p.m), p.tolerances);
        return CoefficientSequence(
            seq.block_size(), [seq](std::size_t j) { return seq.raw(j); }, "example1", seq.tolerances());
    }
    case Family::band_wrap:
        if (!p.band) {
            throw std::invalid_argument("band_wrap family needs a band spec");
        }
        return band_to_block(*p.band, p.tolerances);
    case Family::custom:
        break;
    }
    throw std::invalid_argument("custom sequences are built with the CoefficientSequence constructor");
}

Complex parse_complex(std::string_view s)
{
    auto fail = [&]() -> Complex {
        throw std::invalid_argument("malformed complex literal '" + std::string(s) + "'");
    };
    if (s.empty()) {
        return fail();
    }
    auto parse_real = [&](std::string_view t) -> double {
        if (t.empty() || t == "+") {
            return 1.0;
        }
        if (t == "-") {
            return -1.0;
        }
        if (t.front() == '+') {
            t.remove_prefix(1);
        }
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (ec != std::errc() || ptr != t.data() + t.size()) {
            fail();
        }
        return v;
    };
    if (s.back() != 'i') {
        return Complex(parse_real(s), 0.0);
    }
    std::string_view body = s.substr(0, s.size() - 1);
    // Split at the last sign that is not the leading one and not part of an exponent.
    std::size_t split = std::string_view::npos;
    for (std::size_t k = body.size(); k-- > 1;) {
        if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    if (split == std::string_view::npos) {
        return Complex(0.0, parse_real(body));
    }
    const std::string_view re = body.substr(0, split);
    if (re.empty()) {
        return fail();
    }
    return Complex(parse_real(re), parse_real(body.substr(split)));
}

std::vector<BlockPair> read_block_table(std::istream& in)
{
    std::vector<std::vector<Complex>> rows;
    std::vector<Matrix> blocks;
    std::size_t width = 0;
    std::size_t line_no = 0;

    auto flush = [&]() {
        if (rows.empty()) {
            return;
        }
        const std::size_t m = rows.size();
        if (width == 0) {
            width = m;
        }
        if (m != width) {
            throw std::invalid_argument("block ending at line " + std::to_string(line_no) + " has " +
                                        std::to_string(m) + " rows, expected " + std::to_string(width));
        }
        Matrix block(m, m);
        for (std::size_t r = 0; r < m; ++r) {
            if (rows[r].size() != m) {
                throw std::invalid_argument("block ending at line " + std::to_string(line_no) +
                                            " is not square");
            }
            for (std::size_t c = 0; c < m; ++c) {
                block(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
            }
        }
        blocks.push_back(std::move(block));
        rows.clear();
    };

    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        const bool comment = line.find('#') != std::string::npos;
        if (comment) {
            line.erase(line.find('#'));
        }
        std::istringstream tokens(line);
        std::vector<Complex> row;
        std::string tok;
        while (tokens >> tok) {
            row.push_back(parse_complex(tok));
        }
        if (row.empty()) {
            // Blank lines separate blocks; comment-only lines do not.
            if (!comment) {
                flush();
            }
            continue;
        }
        rows.push_back(std::move(row));
    }
    flush();

    if (blocks.size() % 2 != 0) {
        throw std::invalid_argument("block table must contain A_j, B_j pairs (odd block count)");
    }
    std::vector<BlockPair> pairs;
    for (std::size_t k = 0; k < blocks.size(); k += 2) {
        pairs.push_back(BlockPair{blocks[k], blocks[k + 1], k / 2});
    }
    return pairs;
}

std::vector<BlockPair> read_block_table_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open table file '" + path + "'");
    }
    return read_block_table(in);
}

} // namespace jdef
