// Acceptance suite: one line per criterion, nonzero exit if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "jdef/cli.hpp"

using namespace jdef;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
};

struct Criterion {
    int number;
    std::string name;
    double budget_seconds;
    std::function<Outcome()> run;
};

std::string fmt(double x)
{
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

Outcome from_suite(const SuiteResult& s)
{
    Outcome o;
    o.detail = s.name + " samples=" + std::to_string(s.samples) + " max_residual=" + fmt(s.max_residual);
    if (!s.passed) {
        o.pass = false;
        for (const auto& f : s.failures) {
            o.detail += "; " + f;
        }
    }
    return o;
}

RunConfig scalar_config(Family family, double a, double b, double alpha)
{
    RunConfig c;
    c.kind = OperatorKind::scalar;
    c.family = family;
    c.params.a = a;
    c.params.b = b;
    c.params.alpha = alpha;
    c.depth = 10000;
    return c;
}

RunConfig example2_config()
{
    RunConfig c = scalar_config(Family::alternating_power, 1.0, 1.0, 2.0);
    c.criteria = {CriterionId::k2_limsup};
    return c;
}

const CriterionVerdict* find(const ClassificationReport& r, CriterionId id)
{
    for (const auto& v : r.verdicts) {
        if (v.id == id) {
            return &v;
        }
    }
    return nullptr;
}

void expect_verdict(Outcome& o, const std::string& tag, const ClassificationReport& r, CriterionId id, Verdict want)
{
    const CriterionVerdict* v = find(r, id);
    if (!v) {
        o.require(false, tag + " " + std::string(to_string(id)) + " missing");
        return;
    }
    o.require(v->verdict == want, tag + " " + std::string(to_string(id)) + " gave " +
                                      std::string(to_string(v->verdict)) + " (" + std::string(to_string(v->trend)) +
                                      ", " + fmt(v->partial_value) + "), expected " + std::string(to_string(want)));
}

void expect_estimate(Outcome& o, const std::string& tag, const ClassificationReport& r, std::size_t want)
{
    if (!r.oracle) {
        o.require(false, tag + " oracle missing");
        return;
    }
    const auto& e = r.oracle->estimate;
    o.require(e.conclusive && e.n_plus_estimate == want,
              tag + " oracle estimate " + std::to_string(e.n_plus_estimate) + (e.conclusive ? "" : " (inconclusive)") +
                  ", expected " + std::to_string(want));
}

void expect_no_contradiction(Outcome& o, const std::string& tag, const ClassificationReport& r)
{
    for (const auto& c : r.contradictions) {
        std::string who;
        for (const auto& s : c.sources) {
            who += (who.empty() ? "" : "/") + s;
        }
        o.require(false, tag + " contradiction " + who + ": " + c.reason);
    }
}

Outcome example2_limit()
{
    Outcome o;
    const ScalarJacobi j{[](std::size_t n) { return (n % 2 == 0 ? 1.0 : -1.0) * std::pow(n + 1.0, 2); },
                         [](std::size_t n) { return std::pow(n + 1.0, 2); }};
    const CriterionVerdict v = k2_limsup(j, 10000, TrendClassifier{});
    o.detail = "k2_limsup=" + fmt(v.partial_value) + " verdict=" + std::string(to_string(v.verdict));
    o.require(std::abs(v.partial_value - 2.0 / 3.0) <= 1e-3, "estimate off 2/3 by more than 1e-3");
    o.require(v.verdict == Verdict::self_adjoint, "verdict not self_adjoint");
    return o;
}

Outcome battery()
{
    Outcome o;
    {
        const auto r = classify(scalar_config(Family::power, 0.0, 1.0, 1.0));
        expect_verdict(o, "(a)", r, CriterionId::velazquez_q0, Verdict::self_adjoint);
        expect_estimate(o, "(a)", r, 0);
        expect_no_contradiction(o, "(a)", r);
    }
    {
        const auto r = classify(scalar_config(Family::power, 0.0, 1.0, 2.0));
        expect_verdict(o, "(b)", r, CriterionId::kernel_total, Verdict::maximal_deficiency);
        expect_estimate(o, "(b)", r, 1);
        o.require(r.oracle && r.oracle->complete.state == IndeterminacyState::completely_indeterminate,
                  "(b) complete indeterminacy not reported");
        expect_no_contradiction(o, "(b)", r);
    }
    {
        const auto r = classify(scalar_config(Family::constant, 1.0, 1.0, 0.0));
        expect_verdict(o, "(c)", r, CriterionId::dennis_wall_b, Verdict::not_maximal);
        expect_estimate(o, "(c)", r, 0);
        expect_no_contradiction(o, "(c)", r);
    }
    {
        RunConfig c;
        c.kind = OperatorKind::band;
        c.family = Family::example1;
        c.params.p = 1;
        c.params.m = 2;
        c.depth = 1000;
        const auto r = classify(c);
        expect_estimate(o, "(d)", r, 1);
        o.require(r.oracle && r.oracle->complete.state == IndeterminacyState::not_completely,
                  "(d) complete indeterminacy probe not not_completely");
        expect_no_contradiction(o, "(d)", r);
    }
    {
        RunConfig c = example2_config();
        c.criteria.clear();
        const auto r = classify(c);
        expect_verdict(o, "(e)", r, CriterionId::k2_limsup, Verdict::self_adjoint);
        expect_estimate(o, "(e)", r, 0);
        expect_no_contradiction(o, "(e)", r);
    }
    {
        const auto r = classify(scalar_config(Family::power, 0.0, 1.0, 1.05));
        expect_no_contradiction(o, "(f)", r);
        if (o.detail.empty()) {
            o.detail = "(f) final " + std::string(to_string(r.final_classification));
        }
    }
    if (o.pass) {
        o.detail = "six families concordant; " + o.detail;
    }
    return o;
}

Outcome consistency()
{
    Outcome o;
    const ScalarJacobi linear{[](std::size_t) { return 0.0; }, [](std::size_t n) { return n + 1.0; }};
    const ScalarJacobi quadratic{[](std::size_t) { return 0.0; }, [](std::size_t n) { return std::pow(n + 1.0, 2); }};
    for (auto [tag, j] : {std::pair{"(a)", linear}, std::pair{"(b)", quadratic}}) {
        const ConsistencyReport r = power_consistency_probe(j, 2, 10000, OracleConfig{});
        o.detail += std::string(o.detail.empty() ? "" : " ") + tag + " " + r.scalar_state + "/" + r.power_state;
        o.require(r.state == ConsistencyState::consistent,
                  std::string(tag) + " reported " + std::string(to_string(r.state)));
    }
    return o;
}

Outcome determinism()
{
    Outcome o;
    const RunConfig c = example2_config();
    const std::string first = to_json(classify(c), false).dump(2);
    const std::string second = to_json(classify(c), false).dump(2);
    o.detail = std::to_string(first.size()) + " bytes";
    o.require(first == second, "reports differ");
    return o;
}

} // namespace

int main()
{
    const std::uint64_t seed = 1;
    const std::vector<Criterion> criteria = {
        {1, "example2_limit", 5.0, example2_limit},
        {2, "christoffel_darboux", 10.0, [&] { return from_suite(suite_christoffel_darboux(20, seed)); }},
        {3, "kernel_routes", 0.0, [&] { return from_suite(suite_kernel_routes(20, seed)); }},
        {4, "power_truncation", 0.0, [&] { return from_suite(suite_power_truncation(seed)); }},
        {5, "battery_concordance", 60.0, battery},
        {6, "qq_inequalities", 0.0,
         [&] { return from_suite(suite_qq_inequalities(200, seed, NormKind::spectral)); }},
        {7, "power_consistency", 30.0, consistency},
        {8, "report_determinism", 0.0, determinism},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("threw: ") + e.what();
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.budget_seconds > 0.0 && seconds >= c.budget_seconds) {
            o.require(false, "runtime " + fmt(seconds) + " s over budget " + fmt(c.budget_seconds) + " s");
        }
        failed += o.pass ? 0 : 1;
        std::printf("%s %d %-20s %8.3f s  %s\n", o.pass ? "PASS" : "FAIL", c.number, c.name.c_str(), seconds,
                    o.detail.c_str());
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
