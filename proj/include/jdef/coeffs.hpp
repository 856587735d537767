#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "jdef/linalg.hpp"

namespace jdef {

/// Diagonal block A_j and superdiagonal block B_j of a block Jacobi matrix.
struct BlockPair {
    Matrix a;
    Matrix b;
    std::size_t index = 0;
};

/// Relative tolerances for the BlockPair invariants.
struct Tolerances {
    double hermitian = 1e-12;     // max|a - a*| <= hermitian * (1 + max|a|)
    double invertibility = 1e-10; // sigma_min(b) >= invertibility * sigma_max(b)
    // b is lower triangular (reblocked band); the test is then
    // min|b_rr| >= invertibility * max|b_rr|, since det b is the diagonal product.
    bool triangular_b = false;
};

/// Returns a description of the first violated invariant, or nothing.
std::optional<std::string> check_block(const BlockPair& block, const Tolerances& tol = {});

/// Hermitian band matrix with c_ij = 0 for |i - j| > bandwidth.
struct BandSpec {
    std::size_t bandwidth = 1;
    std::function<Complex(std::size_t, std::size_t)> entry;
};

enum class Family { constant, power, alternating_power, table, example1, band_wrap, custom };

std::string_view to_string(Family family);
Family parse_family(std::string_view name);

/// Coefficient sequence j -> (A_j, B_j). Closed-form families are evaluated
/// on demand and have unbounded depth; table sequences have a length.
class CoefficientSequence {
public:
    using Generator = std::function<BlockPair(std::size_t)>;

    CoefficientSequence(std::size_t block_size,
                        Generator generator,
                        std::string family_tag,
                        Tolerances tolerances = {},
                        std::optional<std::size_t> length = std::nullopt);

    std::size_t block_size() const noexcept { return block_size_; }
    const std::string& family_tag() const noexcept { return family_tag_; }
    const Tolerances& tolerances() const noexcept { return tolerances_; }
    std::optional<std::size_t> length() const noexcept { return length_; }

    /// Validated block pair; throws BlockError on invariant violation or
    /// when j is past the end of a table.
    BlockPair at(std::size_t j) const;

    /// Unvalidated generator output.
    BlockPair raw(std::size_t j) const;

    Matrix a(std::size_t j) const { return at(j).a; }
    Matrix b(std::size_t j) const { return at(j).b; }

    /// B_{j-1}; the zero matrix for j = 0 (row 0 has no subdiagonal term).
    Matrix b_prev(std::size_t j) const;

    /// Scalar entry c_{rc} of the expanded (block_size * n) matrix.
    Complex entry(std::size_t row, std::size_t col) const;

    CoefficientSequence with_tolerances(Tolerances tol) const;

private:
    std::size_t block_size_;
    Generator generator_;
    std::string family_tag_;
    Tolerances tolerances_;
    std::optional<std::size_t> length_;
};

/// Parameters for make_family. Only the fields relevant to the family are read.
struct FamilyParams {
    double a = 0.0;
    double b = 1.0;
    double alpha = 1.0;
    double beta = 0.0;
    std::size_t p = 1;
    std::size_t m = 2;
    std::vector<BlockPair> table;
    std::optional<BandSpec> band;
    Tolerances tolerances;
};

/// constant:          a_n = a, b_n = b
/// power:             a_n = a (n+1)^beta, b_n = b (n+1)^alpha
/// alternating_power: a_n = (-1)^n a (n+1)^alpha, b_n = b (n+1)^alpha
/// example1:          J_p + J_m with c'_{j,j+p} = (j+1)^2 and c''_{j,j+m} = 1
/// table:             explicit blocks
/// band_wrap:         band_to_block(params.band)
CoefficientSequence make_family(Family family, const FamilyParams& params);

/// Reblocks a band matrix of bandwidth m into m x m blocks; B_j is lower
/// triangular with diagonal c_{km+r, km+r+m}.
CoefficientSequence band_to_block(const BandSpec& spec, Tolerances tol = {});

/// Band entries of J_p + J_m with c_{j,j+p} = (j+1)^2, c_{j,j+m} = 1 (p < m).
BandSpec example1_band(std::size_t p, std::size_t m);

/// Reads a block table: whitespace-separated complex literals ("1", "-2.5",
/// "3i", "1+2i", "1e-3-4.5e2i"), one block row per line, blocks separated by
/// blank lines, '#' starts a comment. Blocks are A_0, B_0, A_1, B_1, ...
std::vector<BlockPair> read_block_table(std::istream& in);
std::vector<BlockPair> read_block_table_file(const std::string& path);

Complex parse_complex(std::string_view literal);

} // namespace jdef
