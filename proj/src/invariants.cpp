#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include "jdef/cli.hpp"
#include "jdef/kernel.hpp"
#include "jdef/reference.hpp"

namespace jdef {

namespace {

void record(SuiteResult& r, double residual, bool ok, const std::string& what, bool count = true)
{
    r.samples += count ? 1 : 0;
    if (std::isfinite(residual)) {
        r.max_residual = std::max(r.max_residual, residual);
    }
    if (!ok) {
        r.passed = false;
        if (r.failures.size() < 10) {
            r.failures.push_back(what);
        }
    }
}

std::string describe(const char* fmt_head, double value)
{
    std::ostringstream os;
    os << fmt_head << std::setprecision(3) << value;
    return os.str();
}

} // namespace

SuiteResult suite_coeffs(const CoefficientSequence& seq, std::size_t depth)
{
    SuiteResult r;
    r.name = "coeffs";
    const std::size_t last = seq.length() ? std::min(depth, *seq.length() - 1) : depth;
    for (std::size_t j = 0; j <= last; ++j) {
        const auto problem = check_block(seq.raw(j), seq.tolerances());
        record(r, 0.0, !problem, problem ? *problem + " at index " + std::to_string(j) : "");
    }
    return r;
}

SuiteResult suite_christoffel_darboux(std::size_t samples, std::uint64_t seed)
{
    SuiteResult r;
    r.name = "christoffel_darboux";
    const Complex zs[] = {Complex(0.0, 1.0), Complex(2.0, 3.0)};
    const Complex real_z[] = {Complex(0.0), Complex(0.7)};
    for (std::size_t s = 0; s < samples; ++s) {
        const std::size_t m = 1 + s % 4;
        const CoefficientSequence seq = random_block_sequence(m, 60, seed + s);
        for (std::size_t n = 0; n <= 50; n += 5) {
            for (Complex z : zs) {
                const CdResidual res = christoffel_darboux_residual(seq, z, n);
                if (!res.inconclusive) {
                    std::ostringstream what;
                    what << "sample " << s << " m=" << m << " z=" << z << " n=" << n << " residual " << res.value;
                    record(r, res.value, res.value <= 1e-9, what.str());
                }
            }
            for (Complex z : real_z) {
                const CdResidual res = christoffel_darboux_residual(seq, z, n);
                if (!res.inconclusive) {
                    std::ostringstream what;
                    what << "sample " << s << " m=" << m << " real z=" << z.real() << " n=" << n << " wronskian "
                         << res.value;
                    record(r, res.value, res.value <= 1e-10, what.str());
                }
            }
        }
    }
    return r;
}

SuiteResult suite_kernel_routes(std::size_t samples, std::uint64_t seed)
{
    SuiteResult r;
    r.name = "kernel_routes";
    constexpr std::size_t depth = 30;
    for (std::size_t s = 0; s < samples; ++s) {
        const CoefficientSequence seq = random_block_sequence(2, depth + 8, seed + 1000 + s);
        const KernelTable direct = k_direct(seq, depth);
        const KernelTable recursive = k_recursive(seq, depth);
        double worst = 0.0;
        for (std::size_t j = 1; j <= direct.depth(); ++j) {
            for (std::size_t i = 0; i < j; ++i) {
                const double scale = std::max(norm(direct.at(j, i)), norm(recursive.at(j, i)));
                if (scale > 0.0) {
                    worst = std::max(worst, norm(direct.at(j, i) - recursive.at(j, i)) / scale);
                }
            }
        }
        record(r, worst, worst <= 1e-8 && !direct.truncated(),
               describe(("routes, sample " + std::to_string(s) + ": ").c_str(), worst));

        double closed = 0.0;
        for (std::size_t n = 0; n + 4 <= direct.depth(); ++n) {
            for (std::size_t jj = 1; jj <= 4; ++jj) {
                const Matrix cf = k_closed_form(seq, n, jj);
                const auto entry = recursive.at(n + jj, n);
                closed = std::max(closed, norm(cf - entry) / std::max(norm(entry), 1e-300));
            }
        }
        record(r, closed, closed <= 1e-9,
               describe(("closed forms, sample " + std::to_string(s) + ": ").c_str(), closed));
    }
    return r;
}

SuiteResult suite_qq_inequalities(std::size_t samples, std::uint64_t seed, NormKind norm_kind)
{
    SuiteResult r;
    r.name = "qq_inequalities";
    std::mt19937_64 rng(seed + 2000);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::size_t attempts = 0;
    while (r.samples < samples && attempts < 50 * samples) {
        ++attempts;
        const std::size_t m = 1 + rng() % 3;
        const std::size_t q = rng() % 3;
        const std::size_t n = std::max<std::size_t>(q, 1) + rng() % 30;
        const CoefficientSequence seq = random_block_sequence(m, 40, rng());
        Vector x(static_cast<Eigen::Index>(m));
        for (Eigen::Index k = 0; k < x.size(); ++k) {
            x(k) = Complex(unit(rng), unit(rng));
        }
        QqReport rep;
        try {
            rep = verify_qq_inequality(seq, q, n, x, norm_kind);
        } catch (const BlockError&) {
            continue; // singular A_n: inequality not defined for this sample
        }
        if (rep.inconclusive) {
            continue;
        }
        for (const auto& link : rep.chain) {
            const double excess = link.rhs > 0.0 ? link.lhs / link.rhs - 1.0 : link.lhs;
            std::ostringstream what;
            what << link.name << " q=" << q << " n=" << n << " m=" << m << ": " << link.lhs << " > " << link.rhs;
            record(r, std::max(excess, 0.0), link.holds, what.str(), false);
        }
        ++r.samples;
    }
    if (r.samples < samples) {
        r.passed = false;
        r.failures.push_back("only " + std::to_string(r.samples) + " usable samples");
    }
    return r;
}

SuiteResult suite_power_truncation(std::uint64_t seed)
{
    SuiteResult r;
    r.name = "power_truncation";
    constexpr std::size_t depth = 60;
    std::mt19937_64 rng(seed + 3000);
    std::uniform_int_distribution<int> ia(-5, 5);
    std::uniform_int_distribution<int> ib(1, 5);
    std::uniform_real_distribution<double> fa(-2.0, 2.0);
    std::uniform_real_distribution<double> fb(0.1, 3.0);

    for (bool integer : {true, false}) {
        std::vector<double> a(depth + 8), b(depth + 8);
        for (std::size_t n = 0; n < a.size(); ++n) {
            a[n] = integer ? ia(rng) : fa(rng);
            b[n] = integer ? ib(rng) : fb(rng);
        }
        const ScalarJacobi jac{[a](std::size_t n) { return a.at(n); }, [b](std::size_t n) { return b.at(n); }};
        for (std::size_t k = 2; k <= 4; ++k) {
            const PowerBand band(jac, k, depth);
            const Eigen::MatrixXd ref = truncated_power_corner(jac, k, depth);
            double diff = 0.0;
            for (Eigen::Index i = 0; i < ref.rows(); ++i) {
                for (Eigen::Index j = 0; j < ref.cols(); ++j) {
                    diff = std::max(diff, std::abs(ref(i, j) -
                                                   band.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j))));
                }
            }
            const double rel = diff / ref.cwiseAbs().maxCoeff();
            const bool ok = integer ? diff == 0.0 : rel <= 1e-12;
            record(r, rel, ok,
                   describe((std::string(integer ? "integer" : "float") + " k=" + std::to_string(k) + ": ").c_str(),
                            rel));
        }
    }
    return r;
}

std::vector<SuiteResult> check_invariants(const RunConfig& config)
{
    std::vector<SuiteResult> out;
    try {
        const CoefficientSequence seq = build_sequence(config);
        out.push_back(suite_coeffs(seq, std::min<std::size_t>(config.effective_depth(), 1000)));
    } catch (const std::exception& e) {
        SuiteResult r;
    r.name = "coeffs";
        r.passed = false;
        r.failures.push_back(e.what());
        out.push_back(r);
    }
    out.push_back(suite_christoffel_darboux(config.samples, config.seed));
    out.push_back(suite_kernel_routes(config.samples, config.seed));
    out.push_back(suite_qq_inequalities(10 * config.samples, config.seed, config.norm));
    out.push_back(suite_power_truncation(config.seed));
    return out;
}

void write_power_corner(std::ostream& out, const PowerBand& band)
{
    out << "# k = " << band.k() << ", rows 0.." << band.depth() << ", columns c_{n,n+s} for s = 0.." << band.k()
        << "\n";
    out << std::setprecision(17);
    for (std::size_t n = 0; n <= band.depth(); ++n) {
        out << n;
        for (std::size_t s = 0; s <= band.k(); ++s) {
            out << ' ' << band.upper(n, s);
        }
        out << '\n';
    }
}

} // namespace jdef
