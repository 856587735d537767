#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "jdef/coeffs.hpp"
#include "jdef/kernel.hpp"

namespace jdef {

enum class CriterionId {
    carleman_a,
    dennis_wall_b,
    k_diag_j3,
    k_diag_j4,
    corollary2,
    corollary3,
    kernel_total,
    segment_sum,
    band_limsup,
    velazquez_q0,
    velazquez_q1,
    velazquez_q2,
    k2_limsup,
    power_limsup,
};

/// Series criteria report convergent/divergent; limsup criteria report
/// below_one/not_below_one for the estimate against 1 - margin.
enum class Trend { divergent, convergent, inconclusive, below_one, not_below_one };

enum class Verdict { self_adjoint, maximal_deficiency, not_maximal, no_conclusion };

std::string_view to_string(CriterionId id);
std::string_view to_string(Trend trend);
std::string_view to_string(Verdict verdict);
CriterionId parse_criterion(std::string_view name);
std::span<const CriterionId> all_criteria();

struct CriterionVerdict {
    CriterionId id = CriterionId::carleman_a;
    double partial_value = 0.0;
    Trend trend = Trend::inconclusive;
    Verdict verdict = Verdict::no_conclusion;
    std::size_t depth = 0;
    NormKind norm_used = NormKind::spectral;
    bool applicable = true;
    std::string note;
};

/// Finite-depth surrogate for convergence statements about sum_n t_n.
///
/// Let s be the log-log slope of the last `window` nonzero terms and
/// rho_0, rho_1 the ratios of consecutive dyadic block sums
/// S(N) - S(N/2), S(N/2) - S(N/4), S(N/4) - S(N/8).
///   divergent:  a non-finite term; or s >= -1 + eps with rho_0 >= 1; or
///               |s + 1| < eps with rho_0, rho_1 >= ratio_threshold_div
///               (partial sums growing at least logarithmically).
///   convergent: every term in the window is zero; or s <= -1 - eps,
///               rho_0 <= ratio_threshold_conv and the power-law tail
///               t_N N / (-s - 1) is below tail_tol relative to S(N).
///   otherwise inconclusive, as is anything shorter than min_depth.
struct TrendClassifier {
    std::size_t window = 64;
    double epsilon = 0.1;
    double tail_tol = 1e-6;
    double ratio_threshold_div = 0.99;
    double ratio_threshold_conv = 0.933; // 2^{-epsilon}
    std::size_t min_depth = 16;
    double margin = 0.05; // limsup < 1 - margin

    void validate() const;
};

struct SeriesAnalysis {
    Trend trend = Trend::inconclusive;
    double partial_sum = 0.0;
    double slope = 0.0;
    double tail_estimate = 0.0;
    double block_ratio = 0.0;
};

/// terms[k] is the term with index first_index + k.
SeriesAnalysis analyze_series(std::span<const double> terms, std::size_t first_index,
                              const TrendClassifier& classifier);

/// Sum over 1 <= i < j <= depth of ||K_ji|| (convergence => maximal deficiency).
CriterionVerdict kernel_total_sum(const KernelTable& table, const TrendClassifier& classifier,
                                  NormKind norm_kind = NormKind::spectral);

/// Sum_{n=1}^{depth} ||K_{n+j,n}|| via closed forms, j in 1..4
/// (divergence => not maximal). j = 1 is Carleman's test, j = 2 Dennis-Wall.
CriterionVerdict kernel_diagonal_sum(const CoefficientSequence& seq, std::size_t j, std::size_t depth,
                                     const TrendClassifier& classifier,
                                     NormKind norm_kind = NormKind::spectral);

/// First series convergent and second divergent => not maximal.
/// corollary2: ||B^{-1}_{n+2}B*_{n+1}B^{-1}_n|| and ||B^{-1}_{n+2}A_{n+2}B^{-1}_{n+1}A_{n+1}B^{-1}_n||.
CriterionVerdict corollary2_check(const CoefficientSequence& seq, std::size_t depth,
                                  const TrendClassifier& classifier,
                                  NormKind norm_kind = NormKind::spectral);

/// One of the two K_{n+4,n} component series convergent, the other divergent => not maximal.
CriterionVerdict corollary3_check(const CoefficientSequence& seq, std::size_t depth,
                                  const TrendClassifier& classifier,
                                  NormKind norm_kind = NormKind::spectral);

using Segment = std::pair<std::size_t, std::size_t>;

/// sum_k ( sum_{j=n_k}^{m_k} sum_{i=n_k}^{j} ||K_ji||^2 )^{1/2}.
/// Segments must satisfy n_k <= m_k, m_k <= n_{k+1} < m_{k+1}, m_k <= depth.
double segment_sum_diagnostic(const KernelTable& table, std::span<const Segment> segments,
                              NormKind norm_kind = NormKind::spectral);

/// [1, 2], [2, 4], ..., [2^k, 2^{k+1}] up to max_index.
std::vector<Segment> dyadic_segments(std::size_t max_index);

/// Segment-sum report: the value over dyadic segments; never a verdict.
CriterionVerdict segment_sum_report(const KernelTable& table, const TrendClassifier& classifier,
                                    NormKind norm_kind = NormKind::spectral);

/// (sum_{k=1}^{m} |c_{j,j-k}| + |c_{j,j+k}|) / sqrt(|c_jj|^2 + 1); indices below 0 contribute 0.
double band_row_ratio(const BandSpec& spec, std::size_t j);

/// limsup estimated as the max of band_row_ratio over j in [depth/2, depth].
CriterionVerdict band_limsup(const BandSpec& spec, std::size_t depth, const TrendClassifier& classifier);

/// Band view of a block sequence (bandwidth 2m - 1 for m > 1, 1 for scalar).
BandSpec block_band(const CoefficientSequence& seq);

/// F_{0,n} = 1, F_{1,n} = ||A_n^{-1}B_n|| + ||A_n^{-1}B*_{n-1}||, F_{2,n} as displayed for
/// the self-adjointness series. Throws BlockError naming the index of a singular A.
double f_factor(const CoefficientSequence& seq, std::size_t q, std::size_t n,
                NormKind norm_kind = NormKind::spectral);

/// sum_{n=q+1}^{depth} 1 / (||B_n|| F_{q,n}) (divergence => self-adjoint).
CriterionVerdict velazquez_series(const CoefficientSequence& seq, std::size_t q, std::size_t depth,
                                  const TrendClassifier& classifier,
                                  NormKind norm_kind = NormKind::spectral);

struct InequalityCheck {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};

struct QqReport {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
    bool inconclusive = false;
    std::vector<InequalityCheck> chain;
};

/// 1/(||B_n|| F_{q,n}) <= ||x||^{-2} ||P_{n+1}(i)x|| sum_{k=0}^{q} ||P_{n-q+2k}(i)x||,
/// together with the chain of intermediate bounds that lead to it.
QqReport verify_qq_inequality(const CoefficientSequence& seq, std::size_t q, std::size_t n,
                              const Vector& x, NormKind norm_kind = NormKind::spectral);

} // namespace jdef
