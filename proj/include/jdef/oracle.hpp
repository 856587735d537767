#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "jdef/coeffs.hpp"
#include "jdef/polys.hpp"

namespace jdef {

/// Partial sums are sampled on a grid obtained by halving `depth` down to
/// min_depth. With d_k the increments between grid points:
///   summable      the last two ratios d_k / d_{k-1} are <= ratio_conv and
///                 d_last / S_last <= tail_tol;
///   non_summable  overflow, or the last two ratios are >= ratio_div and the
///                 latest one has not dropped by more than decel_tol;
///   inconclusive  anything else.
struct OracleConfig {
    double tail_tol = 1e-2;
    double ratio_conv = 0.8;
    double ratio_div = 0.98;
    double decel_tol = 0.01;
    std::size_t min_depth = 16;

    void validate() const;
};

enum class Summability { summable, non_summable, inconclusive };
enum class IndeterminacyState { completely_indeterminate, not_completely, inconclusive };
enum class ScalarState { indeterminate, determinate, inconclusive };

std::string_view to_string(Summability s);
std::string_view to_string(IndeterminacyState s);
std::string_view to_string(ScalarState s);

/// depth, depth/2, depth/4, ... down to min_depth, ascending.
std::vector<std::size_t> checkpoint_grid(std::size_t depth, std::size_t min_depth);

struct SummabilityEstimate {
    std::vector<std::size_t> checkpoints;
    std::vector<double> partial_sums;
    Summability trend = Summability::inconclusive;
    std::size_t last_index = 0;
    bool overflow = false;
};

/// Classifies nondecreasing partial sums sampled at consecutive grid points.
Summability classify_partial_sums(const std::vector<double>& sums, bool overflow, const OracleConfig& config);

/// One estimate per column r of u_j e_r for the first- or second-kind solution at z.
std::vector<SummabilityEstimate> summability_probe(const CoefficientSequence& seq, Complex z, SolutionKind kind,
                                                   std::size_t depth, const OracleConfig& config = {});

struct IndeterminacyReport {
    IndeterminacyState state = IndeterminacyState::inconclusive;
    std::vector<SummabilityEstimate> columns; // P columns first, then Q columns
};

/// All 2m solutions of the z = 0 recurrence in l^2?
IndeterminacyReport complete_indeterminacy_probe(const CoefficientSequence& seq, std::size_t depth,
                                                 const OracleConfig& config = {});

/// Scalar J at z = i: indeterminate iff sum |P_n|^2 and sum |Q_n|^2 both converge.
ScalarState scalar_indeterminacy_probe(const CoefficientSequence& seq, std::size_t depth,
                                       const OracleConfig& config = {});

struct DeficiencyEstimate {
    std::size_t n_plus_estimate = 0;
    bool conclusive = false;
    std::size_t block_size = 0;
    std::size_t depth = 0;
    double threshold = 0.0;

    // Flag directions of the 2m-dimensional solution space at z = i.
    std::vector<Summability> direction_trends;
    std::vector<double> direction_log_norms;

    // Eigenvalues of sum_{j<=n} P_j(i)* P_j(i) (ascending) at each checkpoint
    // reached before overflow; gram_eigenvalues is the last of them.
    std::vector<std::size_t> gram_checkpoints;
    std::vector<std::vector<double>> gram_trajectory;
    std::vector<double> gram_eigenvalues;

    std::vector<std::string> notes;
};

/// Estimate of n_+ from the l^2 solutions of the rows j >= 1 at z = i:
/// their dimension is m + n_+. The solution space is propagated as an
/// orthonormal flag (QR at every step) and each flag direction is classified
/// by the partial sums of its squared growth factors.
DeficiencyEstimate deficiency_estimate(const CoefficientSequence& seq, std::size_t depth,
                                       const OracleConfig& config = {});

} // namespace jdef
