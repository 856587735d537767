#include "jdef/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

namespace jdef {

void OracleConfig::validate() const
{
    if (!(tail_tol > 0.0) || !(ratio_conv > 0.0) || !(ratio_div > ratio_conv) || !(decel_tol >= 0.0) ||
        min_depth < 4) {
        throw std::invalid_argument("invalid oracle thresholds");
    }
}

std::string_view to_string(Summability s)
{
    switch (s) {
    case Summability::summable: return "summable";
    case Summability::non_summable: return "non_summable";
    case Summability::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

std::string_view to_string(IndeterminacyState s)
{
    switch (s) {
    case IndeterminacyState::completely_indeterminate: return "completely_indeterminate";
    case IndeterminacyState::not_completely: return "not_completely";
    case IndeterminacyState::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

std::string_view to_string(ScalarState s)
{
    switch (s) {
    case ScalarState::indeterminate: return "indeterminate";
    case ScalarState::determinate: return "determinate";
    case ScalarState::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

std::vector<std::size_t> checkpoint_grid(std::size_t depth, std::size_t min_depth)
{
    std::vector<std::size_t> grid;
    for (std::size_t n = depth; n >= min_depth && n > 0; n /= 2) {
        grid.push_back(n);
    }
    std::reverse(grid.begin(), grid.end());
    return grid;
}

Summability classify_partial_sums(const std::vector<double>& sums, bool overflow, const OracleConfig& config)
{
    if (overflow) {
        return Summability::non_summable;
    }
    if (sums.size() < 3) {
        return Summability::inconclusive;
    }
    std::vector<double> inc;
    for (std::size_t k = 1; k < sums.size(); ++k) {
        inc.push_back(std::max(0.0, sums[k] - sums[k - 1]));
    }
    const double last = inc.back();
    const double total = sums.back();
    if (last == 0.0) {
        return Summability::summable;
    }

    auto ratio = [&](std::size_t k) {
        return inc[k - 1] == 0.0 ? std::numeric_limits<double>::infinity() : inc[k] / inc[k - 1];
    };
    std::vector<double> ratios;
    for (std::size_t k = inc.size() - 1; k >= 1 && ratios.size() < 2; --k) {
        ratios.push_back(ratio(k)); // newest first
    }

    const bool shrinking = std::all_of(ratios.begin(), ratios.end(), [&](double r) { return r <= config.ratio_conv; });
    if (shrinking && last <= config.tail_tol * total) {
        return Summability::summable;
    }
    const bool growing = std::all_of(ratios.begin(), ratios.end(), [&](double r) { return r >= config.ratio_div; });
    const bool decelerating = ratios.size() == 2 && std::isfinite(ratios[1]) &&
                              ratios[0] < ratios[1] * (1.0 - config.decel_tol);
    if (growing && !decelerating) {
        return Summability::non_summable;
    }
    return Summability::inconclusive;
}

std::vector<SummabilityEstimate> summability_probe(const CoefficientSequence& seq, Complex z, SolutionKind kind,
                                                   std::size_t depth, const OracleConfig& config)
{
    if (depth < config.min_depth) {
        throw std::invalid_argument("summability probe needs depth >= " + std::to_string(config.min_depth));
    }
    SolutionSequence u;
    switch (kind) {
    case SolutionKind::first: u = first_kind(seq, z, depth); break;
    case SolutionKind::second: u = second_kind(seq, z, depth); break;
    default: throw std::invalid_argument("summability probe needs kind first or second");
    }
    const std::vector<std::size_t> grid = checkpoint_grid(depth, config.min_depth);
    const auto m = static_cast<Eigen::Index>(seq.block_size());

    std::vector<SummabilityEstimate> out;
    for (Eigen::Index r = 0; r < m; ++r) {
        SummabilityEstimate est;
        est.overflow = u.overflow;
        est.last_index = u.last_index();
        double sum = 0.0;
        auto next = grid.begin();
        for (std::size_t j = 0; j <= u.last_index(); ++j) {
            sum += u.blocks[j].col(r).squaredNorm();
            if (next != grid.end() && j == *next) {
                est.checkpoints.push_back(j);
                est.partial_sums.push_back(sum);
                ++next;
            }
        }
        est.trend = classify_partial_sums(est.partial_sums, est.overflow, config);
        out.push_back(std::move(est));
    }
    return out;
}

IndeterminacyReport complete_indeterminacy_probe(const CoefficientSequence& seq, std::size_t depth,
                                                 const OracleConfig& config)
{
    IndeterminacyReport report;
    report.columns = summability_probe(seq, Complex(0.0), SolutionKind::first, depth, config);
    auto q = summability_probe(seq, Complex(0.0), SolutionKind::second, depth, config);
    report.columns.insert(report.columns.end(), q.begin(), q.end());

    auto count = [&](Summability s) {
        return std::count_if(report.columns.begin(), report.columns.end(),
                             [s](const SummabilityEstimate& e) { return e.trend == s; });
    };
    if (count(Summability::non_summable) > 0) {
        report.state = IndeterminacyState::not_completely;
    } else if (count(Summability::summable) == static_cast<std::ptrdiff_t>(report.columns.size())) {
        report.state = IndeterminacyState::completely_indeterminate;
    } else {
        report.state = IndeterminacyState::inconclusive;
    }
    return report;
}

ScalarState scalar_indeterminacy_probe(const CoefficientSequence& seq, std::size_t depth, const OracleConfig& config)
{
    if (seq.block_size() != 1) {
        throw std::invalid_argument("scalar indeterminacy probe needs block size 1");
    }
    const Complex z(0.0, 1.0);
    const Summability p = summability_probe(seq, z, SolutionKind::first, depth, config).front().trend;
    const Summability q = summability_probe(seq, z, SolutionKind::second, depth, config).front().trend;
    if (p == Summability::non_summable || q == Summability::non_summable) {
        return ScalarState::determinate;
    }
    if (p == Summability::summable && q == Summability::summable) {
        return ScalarState::indeterminate;
    }
    return ScalarState::inconclusive;
}

namespace {

double log_add(double a, double b)
{
    if (a == -std::numeric_limits<double>::infinity()) {
        return b;
    }
    if (b == -std::numeric_limits<double>::infinity()) {
        return a;
    }
    const double hi = std::max(a, b);
    return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

} // namespace

DeficiencyEstimate deficiency_estimate(const CoefficientSequence& seq, std::size_t depth, const OracleConfig& config)
{
    if (depth < 64) {
        throw std::invalid_argument("deficiency estimate needs depth >= 64");
    }
    const std::size_t m = seq.block_size();
    const auto mi = static_cast<Eigen::Index>(m);
    const Complex z(0.0, 1.0);
    const std::vector<std::size_t> grid = checkpoint_grid(depth, config.min_depth);
    const double guard = 0.5 * std::log(kOverflowGuard);
    const double neg_inf = -std::numeric_limits<double>::infinity();

    DeficiencyEstimate est;
    est.block_size = m;
    est.depth = depth;
    est.threshold = config.tail_tol;

    // Flag propagation of the state [u_j; u_{j+1}].
    Matrix y = Matrix::Identity(2 * mi, 2 * mi);
    std::vector<double> log_norm(2 * m, 0.0);
    std::vector<double> log_sum(2 * m, neg_inf);
    std::vector<bool> overflow(2 * m, false);
    std::vector<std::vector<double>> sums(2 * m);
    const Matrix id = Matrix::Identity(mi, mi);

    auto next = grid.begin();
    for (std::size_t j = 0; j <= depth; ++j) {
        for (std::size_t d = 0; d < 2 * m; ++d) {
            if (log_norm[d] > guard) {
                overflow[d] = true;
            }
            if (!overflow[d]) {
                log_sum[d] = log_add(log_sum[d], 2.0 * log_norm[d]);
            }
        }
        if (next != grid.end() && j == *next) {
            for (std::size_t d = 0; d < 2 * m; ++d) {
                sums[d].push_back(std::exp(log_sum[d]));
            }
            ++next;
        }
        if (j == depth) {
            break;
        }
        const BlockPair cur = seq.at(j + 1);
        const Matrix bprev = seq.b(j);
        const Matrix u0 = y.topRows(mi);
        const Matrix u1 = y.bottomRows(mi);
        const Matrix u2 = lu_solve(cur.b, (z * id - cur.a) * u1 - bprev.adjoint() * u0);
        y.topRows(mi) = u1;
        y.bottomRows(mi) = u2;
        Eigen::HouseholderQR<Matrix> qr(y);
        const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
        for (std::size_t d = 0; d < 2 * m; ++d) {
            log_norm[d] += std::log(std::abs(r(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d))));
        }
        y = qr.householderQ() * Matrix::Identity(2 * mi, 2 * mi);
    }

    std::size_t summable = 0;
    std::size_t undecided = 0;
    for (std::size_t d = 0; d < 2 * m; ++d) {
        const Summability t = classify_partial_sums(sums[d], overflow[d], config);
        est.direction_trends.push_back(t);
        est.direction_log_norms.push_back(log_norm[d]);
        summable += t == Summability::summable ? 1 : 0;
        undecided += t == Summability::inconclusive ? 1 : 0;
    }
    const std::size_t raw = summable > m ? summable - m : 0;
    est.n_plus_estimate = std::min(raw, m);
    est.conclusive = undecided == 0 && summable >= m;
    if (summable < m) {
        est.notes.push_back("fewer than m summable directions (" + std::to_string(summable) + ")");
    }
    if (undecided > 0) {
        est.notes.push_back(std::to_string(undecided) + " direction(s) inconclusive; estimate is a lower bound");
    }

    // Forward Gram of the first-kind solution.
    const SolutionSequence p = first_kind(seq, z, depth);
    Matrix gram = Matrix::Zero(mi, mi);
    auto snapshot = [&](std::size_t j) {
        Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
        const Eigen::VectorXd ev = eig.eigenvalues();
        est.gram_checkpoints.push_back(j);
        est.gram_trajectory.emplace_back(ev.data(), ev.data() + ev.size());
    };
    next = grid.begin();
    const double gram_guard = std::sqrt(kOverflowGuard);
    std::size_t gram_end = p.last_index() + 1;
    for (std::size_t j = 0; j <= p.last_index(); ++j) {
        if (p.blocks[j].cwiseAbs().maxCoeff() > gram_guard) {
            gram_end = j;
            break;
        }
        gram += p.blocks[j].adjoint() * p.blocks[j];
        if (next != grid.end() && j == *next) {
            snapshot(j);
            ++next;
        }
    }
    if (gram_end > 0 && (est.gram_checkpoints.empty() || est.gram_checkpoints.back() != gram_end - 1)) {
        snapshot(gram_end - 1);
    }
    est.gram_eigenvalues = est.gram_trajectory.back();
    if (gram_end <= depth) {
        est.notes.push_back("Gram accumulation stopped at index " + std::to_string(gram_end) + " (growth guard)");
    }
    return est;
}

} // namespace jdef
