#include <doctest.h>

#include <cmath>

#include "jdef/oracle.hpp"
#include "jdef/powers.hpp"
#include "jdef/reference.hpp"

using namespace jdef;

namespace {

ScalarJacobi example2(double a, double b)
{
    return {[a](std::size_t n) { return (n % 2 == 0 ? 1.0 : -1.0) * a * std::pow(n + 1.0, 2); },
            [b](std::size_t n) { return b * std::pow(n + 1.0, 2); }};
}

ScalarJacobi integer_jacobi()
{
    return {[](std::size_t n) { return static_cast<double>(static_cast<int>(n % 5) - 2); },
            [](std::size_t n) { return static_cast<double>(1 + n % 3); }};
}

} // namespace

TEST_SUITE("powers") {

TEST_CASE("J^2 entries")
{
    const ScalarJacobi j = integer_jacobi();
    const PowerBand band(j, 2, 30);
    for (std::size_t n = 0; n <= 30; ++n) {
        const double bm1 = n == 0 ? 0.0 : j.b(n - 1);
        CHECK(band.upper(n, 0) == bm1 * bm1 + j.a(n) * j.a(n) + j.b(n) * j.b(n));
        CHECK(band.upper(n, 1) == j.b(n) * (j.a(n) + j.a(n + 1)));
        CHECK(band.upper(n, 2) == j.b(n) * j.b(n + 1));
    }
    CHECK(band.at(5, 3) == band.upper(3, 2));
    CHECK(band.at(3, 9) == 0.0);
    CHECK_THROWS_AS(band.upper(3, 3), std::out_of_range);
    CHECK_THROWS_AS(band.upper(31, 0), std::out_of_range);
}

TEST_CASE("J^1 is J")
{
    const ScalarJacobi j = integer_jacobi();
    const PowerBand band = power_coeffs(j, 1, 10);
    for (std::size_t n = 0; n <= 10; ++n) {
        CHECK(band.upper(n, 0) == j.a(n));
        CHECK(band.upper(n, 1) == j.b(n));
    }
}

TEST_CASE("band equals the truncated product corner")
{
    const ScalarJacobi j = integer_jacobi();
    for (std::size_t k = 2; k <= 4; ++k) {
        const PowerBand band(j, k, 60);
        const Eigen::MatrixXd ref = truncated_power_corner(j, k, 60);
        for (Eigen::Index r = 0; r < ref.rows(); ++r) {
            for (Eigen::Index c = 0; c < ref.cols(); ++c) {
                CHECK(band.at(r, c) == ref(r, c));
            }
        }
    }
    const ScalarJacobi f{[](std::size_t n) { return std::sin(0.3 * n); },
                         [](std::size_t n) { return 1.0 + 0.5 * std::cos(0.7 * n); }};
    const PowerBand band(f, 3, 60);
    const Eigen::MatrixXd ref = truncated_power_corner(f, 3, 60);
    double diff = 0.0;
    for (Eigen::Index r = 0; r < ref.rows(); ++r) {
        for (Eigen::Index c = 0; c < ref.cols(); ++c) {
            diff = std::max(diff, std::abs(band.at(r, c) - ref(r, c)));
        }
    }
    CHECK(diff <= 1e-12 * ref.cwiseAbs().maxCoeff());
}

TEST_CASE("reblocked power is a block Jacobi matrix")
{
    const PowerBand band(integer_jacobi(), 3, 40);
    const CoefficientSequence seq = band_to_block(band.as_band());
    CHECK(seq.block_size() == 3);
    for (std::size_t k = 0; k < 10; ++k) {
        CHECK_NOTHROW(seq.at(k));
        CHECK(seq.b(k)(0, 1) == Complex(0.0));
    }
}

TEST_CASE("alternating quadratic ratio tends to 2b^2/(a^2+2b^2)")
{
    for (auto [a, b] : {std::pair{1.0, 1.0}, std::pair{2.0, 1.0}, std::pair{1.0, 3.0}}) {
        const auto v = k2_limsup(example2(a, b), 10000, TrendClassifier{});
        CHECK(v.partial_value == doctest::Approx(2 * b * b / (a * a + 2 * b * b)).epsilon(1e-3));
        CHECK(v.verdict == Verdict::self_adjoint);
        CHECK(v.id == CriterionId::k2_limsup);
    }
}

TEST_CASE("k2 ratio and the J^2 band ratio differ by c_nn / sqrt(c_nn^2 + 1)")
{
    const ScalarJacobi j = example2(1.0, 1.0);
    const PowerBand band(j, 2, 400);
    const BandSpec spec = band.as_band();
    for (std::size_t n = 0; n <= 390; ++n) {
        const double c = band.upper(n, 0);
        CHECK(band_row_ratio(spec, n) == doctest::Approx(k2_ratio(j, n) * c / std::sqrt(c * c + 1)).epsilon(1e-12));
    }
    const auto k2 = k2_limsup(j, 10000, TrendClassifier{});
    const auto pw = power_limsup_criterion(j, 2, 10000, TrendClassifier{});
    CHECK(std::abs(k2.partial_value - pw.partial_value) <= 1e-9);
    CHECK(pw.id == CriterionId::power_limsup);
    CHECK(pw.verdict == Verdict::self_adjoint);
}

TEST_CASE("k2 ratio boundary")
{
    const ScalarJacobi j{[](std::size_t) { return 1.0; }, [](std::size_t) { return 1.0; }};
    // n = 0: (|a_0+a_1| b_0 + b_0 b_1) / (a_0^2 + b_0^2)
    CHECK(k2_ratio(j, 0) == doctest::Approx(3.0 / 2.0));
    CHECK(k2_ratio(j, 5) == doctest::Approx(6.0 / 3.0));
    CHECK(k2_limsup(j, 100, TrendClassifier{}).trend == Trend::not_below_one);
    CHECK_THROWS(k2_limsup(j, 2, TrendClassifier{}));
}

TEST_CASE("power consistency")
{
    const ScalarJacobi indeterminate{[](std::size_t) { return 0.0; },
                                     [](std::size_t n) { return std::pow(n + 1.0, 2); }};
    const auto r = power_consistency_probe(indeterminate, 2, 10000, OracleConfig{});
    CHECK(r.scalar_state == "indeterminate");
    CHECK(r.power_state == "completely_indeterminate");
    CHECK(r.state == ConsistencyState::consistent);

    const ScalarJacobi free{[](std::size_t) { return 0.0; }, [](std::size_t) { return 1.0; }};
    const auto f = power_consistency_probe(free, 2, 10000, OracleConfig{});
    CHECK(f.scalar_state == "determinate");
    CHECK(f.power_state == "not_completely");
    CHECK(f.state == ConsistencyState::consistent);
}

}
