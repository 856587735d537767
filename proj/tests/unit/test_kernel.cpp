#include <doctest.h>

#include "jdef/kernel.hpp"
#include "jdef/reference.hpp"

using namespace jdef;

TEST_SUITE("kernel") {

TEST_CASE("diagonal and first subdiagonal")
{
    const auto seq = random_block_sequence(3, 30, 21);
    const KernelTable k = k_direct(seq, 20);
    CHECK_FALSE(k.truncated());
    for (std::size_t i = 0; i < 20; ++i) {
        CHECK(k.at(i, i).norm() < 1e-12);
        const Matrix binv = seq.b(i).inverse();
        CHECK((k.at(i + 1, i) - binv).norm() < 1e-9 * (1 + binv.norm()));
    }
    CHECK_THROWS_AS(k.at(3, 4), std::out_of_range);
    CHECK_THROWS_AS(k.at(21, 0), std::out_of_range);
}

TEST_CASE("A = 0 kernel equals K0")
{
    // b_n = n + 1, a_n = 0: K_ji = K0_ji, zero at even distance,
    // (-1)^s b_{i+1} b_{i+3} ... b_{i+2s-1} / (b_i b_{i+2} ... b_{i+2s}) at distance 2s + 1.
    FamilyParams p;
    p.alpha = 1.0;
    const auto seq = make_family(Family::power, p);
    const KernelTable k = k_direct(seq, 15);
    auto b = [](std::size_t n) { return static_cast<double>(n + 1); };
    for (std::size_t i = 0; i <= 15; ++i) {
        for (std::size_t j = i; j <= 15; ++j) {
            double expected = 0.0;
            if ((j - i) % 2 == 1) {
                const std::size_t s = (j - i - 1) / 2;
                expected = (s % 2 == 0 ? 1.0 : -1.0) / b(i);
                for (std::size_t t = 1; t <= s; ++t) {
                    expected *= b(i + 2 * t - 1) / b(i + 2 * t);
                }
            }
            CHECK(k.at(j, i)(0, 0).real() == doctest::Approx(expected).epsilon(1e-12));
            CHECK(k_zero(seq, j, i)(0, 0).real() == doctest::Approx(expected).epsilon(1e-12));
        }
    }
}

TEST_CASE("direct and recursive routes agree")
{
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto seq = random_block_sequence(2, 40, 100 + seed);
        const KernelTable d = k_direct(seq, 30);
        const KernelTable r = k_recursive(seq, 30);
        CHECK(r.route() == KernelRoute::recursive);
        for (std::size_t j = 0; j <= 30; ++j) {
            for (std::size_t i = 0; i <= j; ++i) {
                const double scale = std::max(d.at(j, i).norm(), r.at(j, i).norm());
                CHECK((d.at(j, i) - r.at(j, i)).norm() <= 1e-8 * std::max(scale, 1e-300));
            }
        }
    }
}

TEST_CASE("closed forms match the table")
{
    const auto seq = random_block_sequence(2, 40, 7);
    const KernelTable r = k_recursive(seq, 30);
    for (std::size_t n = 0; n + 4 <= 30; ++n) {
        for (std::size_t j = 1; j <= 4; ++j) {
            const Matrix cf = k_closed_form(seq, n, j);
            CHECK((cf - r.at(n + j, n)).norm() <= 1e-9 * r.at(n + j, n).norm());
        }
    }
    CHECK_THROWS_AS(k_closed_form(seq, 0, 5), std::invalid_argument);
}

TEST_CASE("scalar K_{n+2,n} carries a minus sign")
{
    FamilyParams p;
    p.a = 1.0;
    p.b = 1.0;
    const auto seq = make_family(Family::constant, p);
    // Q_2(0) = -a_1 / (b_0 b_1) = -1 = K_{2,0}.
    CHECK(k_closed_form(seq, 0, 2)(0, 0).real() == doctest::Approx(-1.0));
    CHECK(k_direct(seq, 4).at(2, 0)(0, 0).real() == doctest::Approx(-1.0));
}

TEST_CASE("Christoffel-Darboux identity")
{
    for (std::size_t m = 1; m <= 4; ++m) {
        const auto seq = random_block_sequence(m, 60, 40 + m);
        for (std::size_t n : {0u, 1u, 10u, 50u}) {
            for (Complex z : {Complex(0, 1), Complex(2, 3)}) {
                const CdResidual r = christoffel_darboux_residual(seq, z, n);
                CHECK_FALSE(r.inconclusive);
                CHECK(r.value <= 1e-9);
            }
            CHECK(christoffel_darboux_residual(seq, Complex(0.4), n).value <= 1e-10);
        }
    }
}

TEST_CASE("truncation when the solutions overflow")
{
    const auto seq = make_family(Family::example1, FamilyParams{});
    const KernelTable k = k_direct(seq, 200);
    CHECK(k.truncated());
    CHECK(k.requested_depth() == 200);
    CHECK(k.depth() < 200);
}

}
