#include <doctest.h>

#include <cmath>
#include <vector>

#include "jdef/criteria.hpp"
#include "jdef/reference.hpp"

using namespace jdef;

namespace {

std::vector<double> terms(std::size_t n, double (*f)(double))
{
    std::vector<double> out;
    for (std::size_t k = 1; k <= n; ++k) {
        out.push_back(f(static_cast<double>(k)));
    }
    return out;
}

CoefficientSequence scalar_power(double a, double b, double alpha, double beta = 0.0)
{
    FamilyParams p;
    p.a = a;
    p.b = b;
    p.alpha = alpha;
    p.beta = beta;
    return make_family(Family::power, p);
}

} // namespace

TEST_SUITE("criteria") {

TEST_CASE("series trends")
{
    const TrendClassifier cls;
    CHECK(analyze_series(terms(10000, [](double n) { return 1.0 / n; }), 1, cls).trend == Trend::divergent);
    CHECK(analyze_series(terms(10000, [](double n) { return 1.0; }), 1, cls).trend == Trend::divergent);
    CHECK(analyze_series(terms(10000, [](double n) { return 1.0 / std::sqrt(n); }), 1, cls).trend ==
          Trend::divergent);
    CHECK(analyze_series(terms(10000, [](double n) { return 1.0 / (n * n * n); }), 1, cls).trend ==
          Trend::convergent);
    CHECK(analyze_series(terms(10000, [](double n) { return std::exp(-n); }), 1, cls).trend == Trend::convergent);
    CHECK(analyze_series(terms(10000, [](double) { return 0.0; }), 1, cls).trend == Trend::convergent);
    // Slow convergence sits in the grey zone.
    CHECK(analyze_series(terms(10000, [](double n) { return std::pow(n, -1.05); }), 1, cls).trend ==
          Trend::inconclusive);
    CHECK(analyze_series(terms(8, [](double n) { return 1.0 / n; }), 1, cls).trend == Trend::inconclusive);

    std::vector<double> bad = terms(100, [](double n) { return 1.0 / n; });
    bad[50] = INFINITY;
    CHECK(analyze_series(bad, 1, cls).trend == Trend::divergent);

    const auto harmonic = analyze_series(terms(1000, [](double n) { return 1.0 / n; }), 1, cls);
    CHECK(harmonic.slope == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(harmonic.partial_sum == doctest::Approx(7.485470860550345).epsilon(1e-12));
}

TEST_CASE("classifier validation")
{
    TrendClassifier cls;
    CHECK_NOTHROW(cls.validate());
    cls.epsilon = 0.0;
    CHECK_THROWS(cls.validate());
    cls = {};
    cls.ratio_threshold_div = 0.5;
    CHECK_THROWS(cls.validate());
}

TEST_CASE("criterion ids round trip")
{
    for (CriterionId id : all_criteria()) {
        CHECK(parse_criterion(to_string(id)) == id);
    }
    CHECK(all_criteria().size() == 14);
    CHECK_THROWS(parse_criterion("bogus"));
}

TEST_CASE("Carleman series on b_n = n + 1")
{
    const auto seq = scalar_power(0.0, 1.0, 1.0);
    const TrendClassifier cls;
    const auto v = kernel_diagonal_sum(seq, 1, 2000, cls);
    CHECK(v.id == CriterionId::carleman_a);
    CHECK(v.trend == Trend::divergent);
    CHECK(v.verdict == Verdict::not_maximal);
    // sum_{n=1}^{2000} 1/(n+1)
    double h = 0.0;
    for (int n = 2; n <= 2001; ++n) {
        h += 1.0 / n;
    }
    CHECK(v.partial_value == doctest::Approx(h).epsilon(1e-12));

    const auto q0 = velazquez_series(seq, 0, 2000, cls);
    CHECK(q0.verdict == Verdict::self_adjoint);
    CHECK(q0.trend == Trend::divergent);
}

TEST_CASE("Dennis-Wall series on constant coefficients")
{
    const auto seq = scalar_power(1.0, 1.0, 0.0);
    const auto v = kernel_diagonal_sum(seq, 2, 5000, TrendClassifier{});
    CHECK(v.id == CriterionId::dennis_wall_b);
    CHECK(v.verdict == Verdict::not_maximal);
    CHECK(v.partial_value == doctest::Approx(5000.0));
}

TEST_CASE("convergent diagonal series draw no conclusion")
{
    const auto seq = scalar_power(0.0, 1.0, 3.0);
    const auto v = kernel_diagonal_sum(seq, 1, 10000, TrendClassifier{});
    CHECK(v.trend == Trend::convergent);
    CHECK(v.verdict == Verdict::no_conclusion);

    // An n^-2 tail of ~1e-4 at this depth is above the default tail tolerance.
    const auto slow = kernel_diagonal_sum(scalar_power(0.0, 1.0, 2.0), 1, 10000, TrendClassifier{});
    CHECK(slow.trend == Trend::inconclusive);
    TrendClassifier loose;
    loose.tail_tol = 1e-3;
    CHECK(kernel_diagonal_sum(scalar_power(0.0, 1.0, 2.0), 1, 10000, loose).trend == Trend::convergent);
}

TEST_CASE("kernel_total row sums")
{
    // Hand sum for b_n = 1, a_n = 0, depth 4: |K_ji| = 1 at odd distance.
    const auto seq = scalar_power(0.0, 1.0, 0.0);
    const KernelTable k = k_direct(seq, 4);
    TrendClassifier cls;
    const auto v = kernel_total_sum(k, cls);
    // i in 1..j-1: (2,1) (3,2) (4,3) (4,1) -> 4
    CHECK(v.partial_value == doctest::Approx(4.0));
    CHECK(v.trend == Trend::inconclusive); // too short to classify

    // b_n = (n+1)^2: |K_ji| ~ 1/(ij), the double sum grows like (log N)^2.
    const auto sq = scalar_power(0.0, 1.0, 2.0);
    const auto big = kernel_total_sum(k_direct(sq, 2000), cls);
    CHECK(big.trend == Trend::divergent);
    CHECK(big.verdict == Verdict::no_conclusion);
}

TEST_CASE("corollaries")
{
    const TrendClassifier cls;
    // b = 1, a = 0: chain term |1| diverges, double-A term is 0.
    const auto free = scalar_power(0.0, 1.0, 0.0);
    const auto c2 = corollary2_check(free, 4000, cls);
    CHECK(c2.verdict == Verdict::no_conclusion);
    CHECK(c2.note.find("first series divergent") != std::string::npos);

    // b_n = (n+1)^3, a_n = (n+1)^4.5: chain ~ n^-3 converges, double-A ~ 1 diverges.
    const auto seq = scalar_power(1.0, 1.0, 3.0, 4.5);
    const auto v = corollary2_check(seq, 4000, cls);
    CHECK(v.verdict == Verdict::not_maximal);
    CHECK(v.trend == Trend::divergent);

    CHECK_THROWS(corollary2_check(seq, 2, cls));
    CHECK_THROWS(corollary3_check(seq, 2, cls));
}

TEST_CASE("segment sums")
{
    const auto seq = scalar_power(0.0, 1.0, 0.0);
    const KernelTable k = k_direct(seq, 8);
    // One segment [1, 2]: entries (1,1) (2,1) (2,2) -> sqrt(0 + 1 + 0)
    const std::vector<Segment> one{{1, 2}};
    CHECK(segment_sum_diagnostic(k, one) == doctest::Approx(1.0));
    const std::vector<Segment> two{{1, 2}, {2, 4}};
    // [2,4]: (3,2) (4,3) -> sqrt(2)
    CHECK(segment_sum_diagnostic(k, two) == doctest::Approx(1.0 + std::sqrt(2.0)));
    CHECK_THROWS(segment_sum_diagnostic(k, std::vector<Segment>{{3, 2}}));
    CHECK_THROWS(segment_sum_diagnostic(k, std::vector<Segment>{{1, 9}}));
    CHECK_THROWS(segment_sum_diagnostic(k, std::vector<Segment>{{1, 4}, {3, 5}}));
    CHECK(dyadic_segments(8) == std::vector<Segment>{{1, 2}, {2, 4}, {4, 8}});
    const auto report = segment_sum_report(k, TrendClassifier{});
    CHECK(report.verdict == Verdict::no_conclusion);
}

TEST_CASE("band row ratio and limsup")
{
    BandSpec spec{1, [](std::size_t i, std::size_t j) {
                      if (i == j) return Complex(3.0);
                      return Complex(std::max(i, j) - std::min(i, j) == 1 ? 2.0 : 0.0);
                  }};
    CHECK(band_row_ratio(spec, 0) == doctest::Approx(2.0 / std::sqrt(10.0)));
    CHECK(band_row_ratio(spec, 5) == doctest::Approx(4.0 / std::sqrt(10.0)));
    const auto v = band_limsup(spec, 100, TrendClassifier{});
    CHECK(v.trend == Trend::not_below_one);
    CHECK(v.verdict == Verdict::no_conclusion);

    BandSpec diag{1, [](std::size_t i, std::size_t j) {
                      if (i == j) return Complex(10.0 * (static_cast<double>(i) + 1));
                      return Complex(std::max(i, j) - std::min(i, j) == 1 ? 1.0 : 0.0);
                  }};
    const auto d = band_limsup(diag, 100, TrendClassifier{});
    CHECK(d.verdict == Verdict::self_adjoint);
    CHECK(d.trend == Trend::below_one);
}

TEST_CASE("F factors")
{
    // a_n = 2(n+1), b_n = (n+1): F_1 = b_n/|a_n| + b_{n-1}/|a_n|
    const auto seq = scalar_power(2.0, 1.0, 1.0, 1.0);
    CHECK(f_factor(seq, 0, 3) == 1.0);
    CHECK(f_factor(seq, 1, 3) == doctest::Approx(4.0 / 8.0 + 3.0 / 8.0));
    auto fwd = [](double n) { return (n + 1) / (2 * (n + 1)); };
    auto back = [](double n) { return n / (2 * (n + 1)); };
    const double f2 = back(3) * (back(2) + fwd(2)) + fwd(3) * (back(4) + fwd(4));
    CHECK(f_factor(seq, 2, 3) == doctest::Approx(f2));
    CHECK_THROWS(f_factor(seq, 3, 3));
    CHECK_THROWS(f_factor(seq, 2, 1));

    const auto singular = scalar_power(0.0, 1.0, 1.0);
    try {
        f_factor(singular, 1, 4);
        FAIL("expected BlockError");
    } catch (const BlockError& e) {
        CHECK(e.index() == 4);
    }
    const auto v = velazquez_series(singular, 1, 100, TrendClassifier{});
    CHECK_FALSE(v.applicable);
    CHECK(v.note.find("inapplicable") != std::string::npos);
}

TEST_CASE("inequality chain")
{
    for (std::uint64_t s = 0; s < 20; ++s) {
        const auto seq = random_block_sequence(2, 40, 500 + s);
        Vector x(2);
        x << Complex(1.0, 0.5), Complex(-0.3, 0.2);
        for (std::size_t q = 0; q <= 2; ++q) {
            const QqReport r = verify_qq_inequality(seq, q, 10 + s, x);
            CHECK(r.holds);
            for (const auto& link : r.chain) {
                CHECK_MESSAGE(link.holds, link.name);
            }
        }
    }
    const auto seq = random_block_sequence(2, 40, 1);
    CHECK_THROWS(verify_qq_inequality(seq, 2, 1, Vector::Ones(2)));
    CHECK_THROWS(verify_qq_inequality(seq, 0, 3, Vector::Zero(2)));
}

TEST_CASE("Frobenius norm is carried through")
{
    const auto seq = random_block_sequence(2, 200, 9);
    const auto v = kernel_diagonal_sum(seq, 1, 100, TrendClassifier{}, NormKind::frobenius);
    CHECK(v.norm_used == NormKind::frobenius);
    double expected = 0.0;
    for (std::size_t n = 1; n <= 100; ++n) {
        expected += seq.b(n).inverse().norm();
    }
    CHECK(v.partial_value == doctest::Approx(expected).epsilon(1e-10));
}

}
