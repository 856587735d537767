#include "jdef/criteria.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "jdef/polys.hpp"

namespace jdef {

namespace {

constexpr std::array kAllCriteria{
    CriterionId::carleman_a,   CriterionId::dennis_wall_b, CriterionId::k_diag_j3,
    CriterionId::k_diag_j4,    CriterionId::corollary2,    CriterionId::corollary3,
    CriterionId::kernel_total, CriterionId::segment_sum,   CriterionId::band_limsup,
    CriterionId::velazquez_q0, CriterionId::velazquez_q1,  CriterionId::velazquez_q2,
    CriterionId::k2_limsup,    CriterionId::power_limsup,
};

struct TermSeries {
    std::vector<double> terms;
    std::string note;
};

// Evaluates term(n) for n = first..last; a BlockError (e.g. non-finite
// coefficients past some index) truncates the series with a note.
TermSeries collect_terms(std::size_t first, std::size_t last, const std::function<double(std::size_t)>& term)
{
    TermSeries out;
    if (last >= first) {
        out.terms.reserve(last - first + 1);
    }
    for (std::size_t n = first; n <= last; ++n) {
        try {
            out.terms.push_back(term(n));
        } catch (const BlockError& e) {
            out.note = std::string("series truncated: ") + e.what();
            break;
        }
    }
    return out;
}

double block_sum(std::span<const double> terms, std::size_t first, std::size_t lo_exclusive, std::size_t hi)
{
    double s = 0.0;
    for (std::size_t n = std::max(first, lo_exclusive + 1); n <= hi; ++n) {
        s += terms[n - first];
    }
    return s;
}

double safe_ratio(double num, double den)
{
    if (den > 0.0) {
        return num / den;
    }
    return num > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
}

Matrix checked_inverse_times(const Matrix& a, const Matrix& rhs, std::size_t index, const Tolerances& tol)
{
    const auto m = a.rows();
    bool singular = false;
    if (m == 1) {
        singular = a(0, 0) == Complex(0.0);
    } else {
        Eigen::JacobiSVD<Matrix> svd(a);
        const auto& s = svd.singularValues();
        singular = s(0) == 0.0 || s(m - 1) < tol.invertibility * s(0);
    }
    if (singular) {
        throw BlockError(index, "A is singular");
    }
    return lu_solve(a, rhs);
}

CriterionVerdict make_verdict(CriterionId id, std::size_t depth, NormKind norm_kind)
{
    CriterionVerdict v;
    v.id = id;
    v.depth = depth;
    v.norm_used = norm_kind;
    return v;
}

} // namespace

std::string_view to_string(CriterionId id)
{
    switch (id) {
    case CriterionId::carleman_a: return "carleman_a";
    case CriterionId::dennis_wall_b: return "dennis_wall_b";
    case CriterionId::k_diag_j3: return "k_diag_j3";
    case CriterionId::k_diag_j4: return "k_diag_j4";
    case CriterionId::corollary2: return "corollary2";
    case CriterionId::corollary3: return "corollary3";
    case CriterionId::kernel_total: return "kernel_total";
    case CriterionId::segment_sum: return "segment_sum";
    case CriterionId::band_limsup: return "band_limsup";
    case CriterionId::velazquez_q0: return "velazquez_q0";
    case CriterionId::velazquez_q1: return "velazquez_q1";
    case CriterionId::velazquez_q2: return "velazquez_q2";
    case CriterionId::k2_limsup: return "k2_limsup";
    case CriterionId::power_limsup: return "power_limsup";
    }
    return "unknown";
}

std::string_view to_string(Trend trend)
{
    switch (trend) {
    case Trend::divergent: return "divergent";
    case Trend::convergent: return "convergent";
    case Trend::inconclusive: return "inconclusive";
    case Trend::below_one: return "below_one";
    case Trend::not_below_one: return "not_below_one";
    }
    return "inconclusive";
}

std::string_view to_string(Verdict verdict)
{
    switch (verdict) {
    case Verdict::self_adjoint: return "self_adjoint";
    case Verdict::maximal_deficiency: return "maximal_deficiency";
    case Verdict::not_maximal: return "not_maximal";
    case Verdict::no_conclusion: return "no_conclusion";
    }
    return "no_conclusion";
}

CriterionId parse_criterion(std::string_view name)
{
    for (auto id : kAllCriteria) {
        if (to_string(id) == name) {
            return id;
        }
    }
    throw std::invalid_argument("unknown criterion id '" + std::string(name) + "'");
}

std::span<const CriterionId> all_criteria()
{
    return kAllCriteria;
}

void TrendClassifier::validate() const
{
    if (window < 2 || min_depth < 8) {
        throw std::invalid_argument("classifier window must be >= 2 and min_depth >= 8");
    }
    if (!(epsilon > 0.0 && epsilon < 1.0) || !(tail_tol > 0.0)) {
        throw std::invalid_argument("classifier epsilon must be in (0,1) and tail_tol > 0");
    }
    if (!(ratio_threshold_conv > 0.0 && ratio_threshold_conv < 1.0 && ratio_threshold_div > ratio_threshold_conv)) {
        throw std::invalid_argument("classifier ratio thresholds must satisfy 0 < conv < 1 and div > conv");
    }
    if (!(margin >= 0.0 && margin < 1.0)) {
        throw std::invalid_argument("limsup margin must be in [0,1)");
    }
}

SeriesAnalysis analyze_series(std::span<const double> terms, std::size_t first_index,
                              const TrendClassifier& cls)
{
    SeriesAnalysis out;
    for (double t : terms) {
        if (!std::isfinite(t)) {
            out.trend = Trend::divergent;
            out.partial_sum = std::numeric_limits<double>::infinity();
            return out;
        }
        out.partial_sum += t;
    }
    if (terms.size() < cls.min_depth) {
        return out;
    }
    const std::size_t first = std::max<std::size_t>(first_index, 1);
    const std::size_t last = first + terms.size() - 1;
    const auto shifted = terms.subspan(first - first_index);

    // Log-log fit over the trailing window.
    const std::size_t w = std::min(cls.window, shifted.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t count = 0;
    for (std::size_t n = last + 1 - w; n <= last; ++n) {
        const double t = shifted[n - first];
        if (t > 0.0) {
            const double x = std::log(static_cast<double>(n));
            const double y = std::log(t);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            ++count;
        }
    }
    if (count == 0) {
        out.trend = Trend::convergent;
        return out;
    }
    if (count < 3) {
        return out;
    }
    const double cnt = static_cast<double>(count);
    const double denom = cnt * sxx - sx * sx;
    if (!(denom > 0.0)) {
        return out;
    }
    out.slope = (cnt * sxy - sx * sy) / denom;
    const double intercept = (sy - out.slope * sx) / cnt;

    const double d0 = block_sum(shifted, first, last / 2, last);
    const double d1 = block_sum(shifted, first, last / 4, last / 2);
    const double d2 = block_sum(shifted, first, last / 8, last / 4);
    const double rho0 = safe_ratio(d0, d1);
    const double rho1 = safe_ratio(d1, d2);
    out.block_ratio = rho0;

    const double s = out.slope;
    const double eps = cls.epsilon;
    if ((s >= -1.0 + eps && rho0 >= 1.0) ||
        (std::abs(s + 1.0) < eps && rho0 >= cls.ratio_threshold_div && rho1 >= cls.ratio_threshold_div)) {
        out.trend = Trend::divergent;
        return out;
    }
    if (s <= -1.0 - eps && rho0 <= cls.ratio_threshold_conv) {
        const double n_last = static_cast<double>(last);
        out.tail_estimate = std::exp(intercept + s * std::log(n_last)) * n_last / (-s - 1.0);
        if (out.tail_estimate <= cls.tail_tol * out.partial_sum) {
            out.trend = Trend::convergent;
        }
    }
    return out;
}

CriterionVerdict kernel_total_sum(const KernelTable& table, const TrendClassifier& classifier, NormKind norm_kind)
{
    auto v = make_verdict(CriterionId::kernel_total, table.depth(), norm_kind);
    std::vector<double> rows;
    for (std::size_t j = 2; j <= table.depth(); ++j) {
        double row = 0.0;
        for (std::size_t i = 1; i < j; ++i) {
            row += norm(table.at(j, i), norm_kind);
        }
        rows.push_back(row);
    }
    const SeriesAnalysis a = analyze_series(rows, 2, classifier);
    v.partial_value = a.partial_sum;
    v.trend = a.trend;
    v.verdict = a.trend == Trend::convergent ? Verdict::maximal_deficiency : Verdict::no_conclusion;
    if (table.truncated()) {
        v.note = "kernel rows beyond " + std::to_string(table.depth()) + " overflowed; requested depth " +
                 std::to_string(table.requested_depth());
    }
    return v;
}

CriterionVerdict kernel_diagonal_sum(const CoefficientSequence& seq, std::size_t j, std::size_t depth,
                                     const TrendClassifier& classifier, NormKind norm_kind)
{
    static constexpr std::array ids{CriterionId::carleman_a, CriterionId::dennis_wall_b, CriterionId::k_diag_j3,
                                    CriterionId::k_diag_j4};
    if (j < 1 || j > 4) {
        throw std::invalid_argument("kernel_diagonal_sum needs j in 1..4");
    }
    auto v = make_verdict(ids[j - 1], depth, norm_kind);
    const TermSeries series =
        collect_terms(1, depth, [&](std::size_t n) { return norm(k_closed_form(seq, n, j), norm_kind); });
    const SeriesAnalysis a = analyze_series(series.terms, 1, classifier);
    v.partial_value = a.partial_sum;
    v.trend = a.trend;
    v.verdict = a.trend == Trend::divergent ? Verdict::not_maximal : Verdict::no_conclusion;
    v.note = series.note;
    return v;
}

namespace {

struct PairOutcome {
    SeriesAnalysis first;
    SeriesAnalysis second;
    std::string note;
};

PairOutcome analyze_pair(std::size_t depth, const TrendClassifier& classifier,
                         const std::function<std::pair<double, double>(std::size_t)>& terms)
{
    std::vector<double> first_terms;
    std::vector<double> second_terms;
    PairOutcome out;
    for (std::size_t n = 1; n <= depth; ++n) {
        try {
            const auto [t1, t2] = terms(n);
            first_terms.push_back(t1);
            second_terms.push_back(t2);
        } catch (const BlockError& e) {
            out.note = std::string("series truncated: ") + e.what();
            break;
        }
    }
    out.first = analyze_series(first_terms, 1, classifier);
    out.second = analyze_series(second_terms, 1, classifier);
    return out;
}

std::string pair_note(const PairOutcome& p)
{
    std::string note = "first series " + std::string(to_string(p.first.trend)) + " (partial " +
                       std::to_string(p.first.partial_sum) + "), second series " +
                       std::string(to_string(p.second.trend));
    if (!p.note.empty()) {
        note += "; " + p.note;
    }
    return note;
}

} // namespace

CriterionVerdict corollary2_check(const CoefficientSequence& seq, std::size_t depth,
                                  const TrendClassifier& classifier, NormKind norm_kind)
{
    if (depth < 3) {
        throw std::invalid_argument("corollary2_check needs depth >= 3");
    }
    auto v = make_verdict(CriterionId::corollary2, depth, norm_kind);
    const PairOutcome p = analyze_pair(depth, classifier, [&](std::size_t n) {
        const K3Parts parts = k3_parts(seq, n);
        return std::pair{norm(parts.chain, norm_kind), norm(parts.double_a, norm_kind)};
    });
    const bool licensed = p.first.trend == Trend::convergent && p.second.trend == Trend::divergent;
    v.partial_value = p.second.partial_sum;
    v.trend = licensed ? Trend::divergent
                       : (p.first.trend == Trend::inconclusive ? Trend::inconclusive : p.second.trend);
    v.verdict = licensed ? Verdict::not_maximal : Verdict::no_conclusion;
    v.note = pair_note(p);
    return v;
}

CriterionVerdict corollary3_check(const CoefficientSequence& seq, std::size_t depth,
                                  const TrendClassifier& classifier, NormKind norm_kind)
{
    if (depth < 3) {
        throw std::invalid_argument("corollary3_check needs depth >= 3");
    }
    auto v = make_verdict(CriterionId::corollary3, depth, norm_kind);
    const PairOutcome p = analyze_pair(depth, classifier, [&](std::size_t n) {
        const K4Parts parts = k4_parts(seq, n);
        return std::pair{norm(parts.mixed, norm_kind), norm(parts.triple, norm_kind)};
    });
    const bool licensed = (p.first.trend == Trend::convergent && p.second.trend == Trend::divergent) ||
                          (p.first.trend == Trend::divergent && p.second.trend == Trend::convergent);
    v.partial_value = p.first.trend == Trend::divergent ? p.first.partial_sum : p.second.partial_sum;
    if (licensed) {
        v.trend = Trend::divergent;
    } else if (p.first.trend == Trend::inconclusive || p.second.trend == Trend::inconclusive) {
        v.trend = Trend::inconclusive;
    } else {
        v.trend = p.second.trend;
    }
    v.verdict = licensed ? Verdict::not_maximal : Verdict::no_conclusion;
    v.note = pair_note(p);
    return v;
}

double segment_sum_diagnostic(const KernelTable& table, std::span<const Segment> segments, NormKind norm_kind)
{
    for (std::size_t k = 0; k < segments.size(); ++k) {
        const auto [lo, hi] = segments[k];
        if (lo > hi) {
            throw std::invalid_argument("segment " + std::to_string(k) + " is reversed");
        }
        if (hi > table.depth()) {
            throw std::invalid_argument("segment " + std::to_string(k) + " exceeds the kernel depth");
        }
        if (k > 0) {
            const auto [prev_lo, prev_hi] = segments[k - 1];
            if (prev_hi > lo || lo >= hi) {
                throw std::invalid_argument("segments " + std::to_string(k - 1) + " and " + std::to_string(k) +
                                            " overlap or are out of order");
            }
            (void)prev_lo;
        }
    }
    double total = 0.0;
    for (const auto& [lo, hi] : segments) {
        double inner = 0.0;
        for (std::size_t j = lo; j <= hi; ++j) {
            for (std::size_t i = lo; i <= j; ++i) {
                const double v = norm(table.at(j, i), norm_kind);
                inner += v * v;
            }
        }
        total += std::sqrt(inner);
    }
    return total;
}

std::vector<Segment> dyadic_segments(std::size_t max_index)
{
    std::vector<Segment> out;
    for (std::size_t lo = 1; 2 * lo <= max_index; lo *= 2) {
        out.emplace_back(lo, 2 * lo);
    }
    return out;
}

CriterionVerdict segment_sum_report(const KernelTable& table, const TrendClassifier&, NormKind norm_kind)
{
    auto v = make_verdict(CriterionId::segment_sum, table.depth(), norm_kind);
    const auto segments = dyadic_segments(table.depth());
    v.partial_value = segment_sum_diagnostic(table, segments, norm_kind);
    v.note = "dyadic segments up to " + std::to_string(table.depth()) +
             "; the condition ranges over all segment families, so no verdict is drawn";
    return v;
}

double band_row_ratio(const BandSpec& spec, std::size_t j)
{
    double off = 0.0;
    for (std::size_t k = 1; k <= spec.bandwidth; ++k) {
        if (j >= k) {
            off += std::abs(spec.entry(j, j - k));
        }
        off += std::abs(spec.entry(j, j + k));
    }
    const double d = std::abs(spec.entry(j, j));
    return off / std::sqrt(d * d + 1.0);
}

CriterionVerdict band_limsup(const BandSpec& spec, std::size_t depth, const TrendClassifier& classifier)
{
    if (depth < spec.bandwidth) {
        throw std::invalid_argument("band_limsup needs depth >= bandwidth");
    }
    auto v = make_verdict(CriterionId::band_limsup, depth, NormKind::spectral);
    double estimate = 0.0;
    for (std::size_t j = depth / 2; j <= depth; ++j) {
        estimate = std::max(estimate, band_row_ratio(spec, j));
    }
    v.partial_value = estimate;
    if (estimate < 1.0 - classifier.margin) {
        v.trend = Trend::below_one;
        v.verdict = Verdict::self_adjoint;
    } else if (estimate >= 1.0) {
        v.trend = Trend::not_below_one;
    }
    return v;
}

BandSpec block_band(const CoefficientSequence& seq)
{
    BandSpec spec;
    spec.bandwidth = seq.block_size();
    spec.entry = [seq](std::size_t i, std::size_t j) { return seq.entry(i, j); };
    return spec;
}

double f_factor(const CoefficientSequence& seq, std::size_t q, std::size_t n, NormKind norm_kind)
{
    if (q == 0) {
        return 1.0;
    }
    if (q > 2) {
        throw std::invalid_argument("F_{q,n} is available for q in 0..2 only");
    }
    if (n < q) {
        throw std::invalid_argument("F_{q,n} needs n >= q");
    }
    const Tolerances& tol = seq.tolerances();
    // ||A_k^{-1} B_k|| and ||A_k^{-1} B*_{k-1}||
    auto fwd = [&](std::size_t k) {
        return norm(checked_inverse_times(seq.a(k), seq.b(k), k, tol), norm_kind);
    };
    auto back = [&](std::size_t k) {
        return norm(checked_inverse_times(seq.a(k), seq.b_prev(k).adjoint(), k, tol), norm_kind);
    };
    if (q == 1) {
        return fwd(n) + back(n);
    }
    return back(n) * (back(n - 1) + fwd(n - 1)) + fwd(n) * (back(n + 1) + fwd(n + 1));
}

CriterionVerdict velazquez_series(const CoefficientSequence& seq, std::size_t q, std::size_t depth,
                                  const TrendClassifier& classifier, NormKind norm_kind)
{
    static constexpr std::array ids{CriterionId::velazquez_q0, CriterionId::velazquez_q1,
                                    CriterionId::velazquez_q2};
    if (q > 2) {
        throw std::invalid_argument("velazquez_series supports q in 0..2");
    }
    auto v = make_verdict(ids[q], depth, norm_kind);
    std::vector<double> terms;
    try {
        for (std::size_t n = q + 1; n <= depth; ++n) {
            terms.push_back(1.0 / (norm(seq.b(n), norm_kind) * f_factor(seq, q, n, norm_kind)));
        }
    } catch (const BlockError& e) {
        v.applicable = false;
        v.note = std::string("inapplicable: ") + e.what();
        return v;
    }
    const SeriesAnalysis a = analyze_series(terms, q + 1, classifier);
    v.partial_value = a.partial_sum;
    v.trend = a.trend;
    v.verdict = a.trend == Trend::divergent ? Verdict::self_adjoint : Verdict::no_conclusion;
    return v;
}

QqReport verify_qq_inequality(const CoefficientSequence& seq, std::size_t q, std::size_t n, const Vector& x,
                              NormKind norm_kind)
{
    if (q > 2) {
        throw std::invalid_argument("inequality chain is available for q in 0..2");
    }
    if (n < q) {
        throw std::invalid_argument("inequality chain needs n >= q");
    }
    const double xnorm = x.norm();
    if (!(xnorm > 0.0)) {
        throw std::invalid_argument("inequality chain needs x != 0");
    }
    QqReport report;
    const SolutionSequence p = first_kind(seq, Complex(0.0, 1.0), n + q + 1);
    if (p.overflow) {
        report.inconclusive = true;
        return report;
    }
    const double c = 1.0 / (xnorm * xnorm);
    auto px = [&](std::size_t k) { return (p.blocks[k] * x).norm(); };
    const double bn = norm(seq.b(n), norm_kind);

    auto add = [&](std::string name, double lhs, double rhs) {
        report.chain.push_back({std::move(name), lhs, rhs, lhs <= rhs * (1.0 + 1e-9)});
    };
    add("cd_lower_bound", 1.0 / bn, c * px(n + 1) * px(n));

    const Tolerances& tol = seq.tolerances();
    if (n >= 1 && q >= 1) {
        const Matrix a_inv_b = checked_inverse_times(seq.a(n), seq.b(n), n, tol);
        const Matrix a_inv_bs = checked_inverse_times(seq.a(n), seq.b(n - 1).adjoint(), n, tol);
        add("step_bound", px(n), norm(a_inv_b, norm_kind) * px(n + 1) + norm(a_inv_bs, norm_kind) * px(n - 1));
        const double f1 = f_factor(seq, 1, n, norm_kind);
        add("f1_bound", 1.0 / (bn * f1), c * px(n + 1) * (px(n + 1) + px(n - 1)));
    }
    if (q == 2) {
        const double f2 = f_factor(seq, 2, n, norm_kind);
        add("two_step_bound", px(n), f2 * (px(n - 2) + px(n) + px(n + 2)));
    }

    double sum = 0.0;
    for (std::size_t k = 0; k <= q; ++k) {
        sum += px(n - q + 2 * k);
    }
    report.lhs = 1.0 / (bn * f_factor(seq, q, n, norm_kind));
    report.rhs = c * px(n + 1) * sum;
    report.holds = report.lhs <= report.rhs * (1.0 + 1e-9);
    add("fq_bound", report.lhs, report.rhs);
    return report;
}

} // namespace jdef
