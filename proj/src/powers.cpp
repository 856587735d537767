#include "jdef/powers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "jdef/oracle.hpp"

namespace jdef {

ScalarJacobi scalar_view(const CoefficientSequence& seq)
{
    if (seq.block_size() != 1) {
        throw std::invalid_argument("scalar view needs block size 1");
    }
    ScalarJacobi out;
    out.a = [seq](std::size_t n) { return seq.at(n).a(0, 0).real(); };
    out.b = [seq](std::size_t n) { return seq.at(n).b(0, 0).real(); };
    return out;
}

PowerBand::PowerBand(const ScalarJacobi& jacobi, std::size_t k, std::size_t depth)
    : k_(k)
    , depth_(depth)
{
    if (k < 1) {
        throw std::invalid_argument("power must be >= 1");
    }
    // Level kappa needs rows up to depth + (k - kappa): the next level reads row n + 1.
    const std::size_t top = depth + k;
    std::vector<double> a(top + 1), b(top + 1);
    for (std::size_t n = 0; n <= top; ++n) {
        a[n] = jacobi.a(n);
        b[n] = jacobi.b(n);
        if (!(b[n] > 0.0)) {
            throw BlockError(n, "power construction needs b_n > 0");
        }
    }

    std::vector<std::vector<double>> level(top + 1);
    for (std::size_t n = 0; n <= top; ++n) {
        level[n] = {a[n], b[n]};
    }
    for (std::size_t kappa = 1; kappa < k; ++kappa) {
        const std::size_t rows = depth + (k - kappa - 1);
        auto lookup = [&](std::size_t i, std::size_t j) -> double {
            const std::size_t lo = std::min(i, j);
            const std::size_t dist = std::max(i, j) - lo;
            return dist <= kappa ? level[lo][dist] : 0.0;
        };
        std::vector<std::vector<double>> next(rows + 1, std::vector<double>(kappa + 2, 0.0));
        for (std::size_t n = 0; n <= rows; ++n) {
            for (std::size_t s = 0; s <= kappa + 1; ++s) {
                double v = a[n] * lookup(n, n + s) + b[n] * lookup(n + 1, n + s);
                if (n > 0) {
                    v += b[n - 1] * lookup(n - 1, n + s);
                }
                next[n][s] = v;
            }
        }
        level = std::move(next);
    }
    level.resize(depth + 1);
    rows_ = std::move(level);
}

double PowerBand::upper(std::size_t n, std::size_t s) const
{
    if (s > k_ || n > depth_) {
        throw std::out_of_range("power band entry (" + std::to_string(n) + ", +" + std::to_string(s) +
                                ") outside k = " + std::to_string(k_) + ", depth = " + std::to_string(depth_));
    }
    return rows_[n][s];
}

double PowerBand::at(std::size_t i, std::size_t j) const
{
    const std::size_t lo = std::min(i, j);
    const std::size_t dist = std::max(i, j) - lo;
    return dist > k_ ? 0.0 : upper(lo, dist);
}

BandSpec PowerBand::as_band() const
{
    BandSpec spec;
    spec.bandwidth = k_;
    spec.entry = [self = *this](std::size_t i, std::size_t j) { return Complex(self.at(i, j)); };
    return spec;
}

PowerBand power_coeffs(const ScalarJacobi& jacobi, std::size_t k, std::size_t depth)
{
    return PowerBand(jacobi, k, depth);
}

CriterionVerdict power_limsup_criterion(const ScalarJacobi& jacobi, std::size_t k, std::size_t depth,
                                        const TrendClassifier& classifier)
{
    const PowerBand band(jacobi, k, depth + k);
    CriterionVerdict v = band_limsup(band.as_band(), depth, classifier);
    v.id = CriterionId::power_limsup;
    v.note = "k = " + std::to_string(k);
    return v;
}

double k2_ratio(const ScalarJacobi& j, std::size_t n)
{
    auto a = [&](std::ptrdiff_t i) { return i < 0 ? 0.0 : j.a(static_cast<std::size_t>(i)); };
    auto b = [&](std::ptrdiff_t i) { return i < 0 ? 0.0 : j.b(static_cast<std::size_t>(i)); };
    const auto k = static_cast<std::ptrdiff_t>(n);
    const double num = b(k - 1) * b(k - 2) + std::abs(a(k - 1) + a(k)) * b(k - 1) +
                       std::abs(a(k) + a(k + 1)) * b(k) + b(k) * b(k + 1);
    const double den = b(k - 1) * b(k - 1) + a(k) * a(k) + b(k) * b(k);
    return num / den;
}

CriterionVerdict k2_limsup(const ScalarJacobi& jacobi, std::size_t depth, const TrendClassifier& classifier)
{
    if (depth < 4) {
        throw std::invalid_argument("k2_limsup needs depth >= 4");
    }
    CriterionVerdict v;
    v.id = CriterionId::k2_limsup;
    v.depth = depth;
    double estimate = 0.0;
    for (std::size_t n = depth / 2; n <= depth; ++n) {
        estimate = std::max(estimate, k2_ratio(jacobi, n));
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

std::string_view to_string(ConsistencyState state)
{
    switch (state) {
    case ConsistencyState::consistent: return "consistent";
    case ConsistencyState::inconsistent: return "inconsistent";
    case ConsistencyState::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

ConsistencyReport power_consistency_probe(const ScalarJacobi& jacobi, std::size_t k, std::size_t depth,
                                          const OracleConfig& config)
{
    if (k < 1) {
        throw std::invalid_argument("power must be >= 1");
    }
    ConsistencyReport report;
    report.k = k;
    report.scalar_depth = depth;
    report.block_depth = std::max<std::size_t>(depth / k, 16);

    const CoefficientSequence scalar(
        1,
        [jacobi](std::size_t n) {
            return BlockPair{Matrix::Constant(1, 1, Complex(jacobi.a(n))), Matrix::Constant(1, 1, Complex(jacobi.b(n))),
                             n};
        },
        "scalar");
    const ScalarState scalar_state = scalar_indeterminacy_probe(scalar, depth, config);
    report.scalar_state = std::string(to_string(scalar_state));

    const PowerBand band(jacobi, k, k * (report.block_depth + 2));
    const CoefficientSequence blocks = band_to_block(band.as_band());
    const IndeterminacyState power_state = complete_indeterminacy_probe(blocks, report.block_depth, config).state;
    report.power_state = std::string(to_string(power_state));

    if (scalar_state == ScalarState::inconclusive || power_state == IndeterminacyState::inconclusive) {
        report.state = ConsistencyState::inconclusive;
    } else {
        const bool lhs = scalar_state == ScalarState::indeterminate;
        const bool rhs = power_state == IndeterminacyState::completely_indeterminate;
        report.state = lhs == rhs ? ConsistencyState::consistent : ConsistencyState::inconsistent;
    }
    return report;
}

} // namespace jdef
