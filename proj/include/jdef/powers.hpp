#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "jdef/coeffs.hpp"
#include "jdef/criteria.hpp"

namespace jdef {

struct OracleConfig;

/// Real tridiagonal Jacobi matrix with diagonal a_n and off-diagonal b_n > 0.
struct ScalarJacobi {
    std::function<double(std::size_t)> a;
    std::function<double(std::size_t)> b;
};

/// Scalar view of a 1 x 1 sequence with real entries.
ScalarJacobi scalar_view(const CoefficientSequence& seq);

/// Entries c^{(k)}_{n,n+s}, 0 <= s <= k, 0 <= n <= depth, of the formal power J^k.
class PowerBand {
public:
    PowerBand(const ScalarJacobi& jacobi, std::size_t k, std::size_t depth);

    std::size_t k() const noexcept { return k_; }
    std::size_t depth() const noexcept { return depth_; }

    /// c^{(k)}_{n,n+s}; throws for s > k or n > depth.
    double upper(std::size_t n, std::size_t s) const;

    /// Symmetric lookup c^{(k)}_{ij}; zero outside the band. Valid while min(i,j) <= depth.
    double at(std::size_t i, std::size_t j) const;

    BandSpec as_band() const;

private:
    std::size_t k_;
    std::size_t depth_;
    // rows_[n][s] = c^{(k)}_{n,n+s}
    std::vector<std::vector<double>> rows_;
};

/// Builds J^k by c^{(k+1)}_{n,n+s} = b_{n-1}c^{(k)}_{n-1,n+s} + a_n c^{(k)}_{n,n+s} + b_n c^{(k)}_{n+1,n+s}
/// with c^{(1)}_{nn} = a_n, c^{(1)}_{n,n+1} = b_n; out-of-band and negative indices contribute 0.
PowerBand power_coeffs(const ScalarJacobi& jacobi, std::size_t k, std::size_t depth);

/// band_limsup applied to J^k; a limsup below one makes the operator of J self-adjoint.
CriterionVerdict power_limsup_criterion(const ScalarJacobi& jacobi, std::size_t k, std::size_t depth,
                                        const TrendClassifier& classifier);

/// (b_{n-1}b_{n-2} + |a_{n-1}+a_n| b_{n-1} + |a_n+a_{n+1}| b_n + b_n b_{n+1}) / (b_{n-1}^2 + a_n^2 + b_n^2).
double k2_ratio(const ScalarJacobi& jacobi, std::size_t n);

/// limsup of k2_ratio estimated over n in [depth/2, depth].
CriterionVerdict k2_limsup(const ScalarJacobi& jacobi, std::size_t depth, const TrendClassifier& classifier);

enum class ConsistencyState { consistent, inconsistent, inconclusive };
std::string_view to_string(ConsistencyState state);

struct ConsistencyReport {
    std::size_t k = 0;
    std::string scalar_state; // indeterminate | determinate | inconclusive
    std::string power_state;  // completely_indeterminate | not_completely | inconclusive
    ConsistencyState state = ConsistencyState::inconclusive;
    std::size_t scalar_depth = 0;
    std::size_t block_depth = 0;
};

/// J indeterminate iff J^k completely indeterminate: the scalar probe of J at z = i
/// against the z = 0 block probe of J^k reblocked into k x k blocks.
ConsistencyReport power_consistency_probe(const ScalarJacobi& jacobi, std::size_t k, std::size_t depth,
                                          const OracleConfig& config);

} // namespace jdef
