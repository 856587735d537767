#include <algorithm>
#include <chrono>
#include <set>

#include "jdef/cli.hpp"
#include "jdef/kernel.hpp"

namespace jdef {

std::string_view to_string(FinalClass c)
{
    switch (c) {
    case FinalClass::self_adjoint: return "self_adjoint";
    case FinalClass::maximal_deficiency: return "maximal_deficiency";
    case FinalClass::not_maximal: return "not_maximal";
    case FinalClass::indeterminate_scalar: return "indeterminate_scalar";
    case FinalClass::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

namespace {

// Table sequences end; probes need one block past the depth.
std::size_t usable_depth(const CoefficientSequence& seq, std::size_t depth)
{
    if (const auto len = seq.length()) {
        return std::min(depth, *len > 1 ? *len - 1 : 0);
    }
    return depth;
}

CriterionVerdict inapplicable(CriterionId id, std::size_t depth, NormKind norm, std::string why)
{
    CriterionVerdict v;
    v.id = id;
    v.depth = depth;
    v.norm_used = norm;
    v.applicable = false;
    v.note = std::move(why);
    return v;
}

} // namespace

CriterionVerdict run_criterion(CriterionId id, const CoefficientSequence& seq, const RunConfig& config,
                               const KernelTable* kernel)
{
    const std::size_t depth = usable_depth(seq, config.effective_depth());
    const NormKind norm = config.norm;
    const TrendClassifier& cls = config.classifier;
    try {
        switch (id) {
        case CriterionId::carleman_a: return kernel_diagonal_sum(seq, 1, depth, cls, norm);
        case CriterionId::dennis_wall_b: return kernel_diagonal_sum(seq, 2, depth, cls, norm);
        case CriterionId::k_diag_j3: return kernel_diagonal_sum(seq, 3, depth, cls, norm);
        case CriterionId::k_diag_j4: return kernel_diagonal_sum(seq, 4, depth, cls, norm);
        case CriterionId::corollary2: return corollary2_check(seq, depth, cls, norm);
        case CriterionId::corollary3: return corollary3_check(seq, depth, cls, norm);
        case CriterionId::kernel_total:
        case CriterionId::segment_sum:
            if (kernel == nullptr) {
                return inapplicable(id, depth, norm, "kernel table unavailable");
            }
            return id == CriterionId::kernel_total ? kernel_total_sum(*kernel, cls, norm)
                                                   : segment_sum_report(*kernel, cls, norm);
        case CriterionId::band_limsup:
            return band_limsup(block_band(seq), depth * seq.block_size(), cls);
        case CriterionId::velazquez_q0: return velazquez_series(seq, 0, depth, cls, norm);
        case CriterionId::velazquez_q1: return velazquez_series(seq, 1, depth, cls, norm);
        case CriterionId::velazquez_q2: return velazquez_series(seq, 2, depth, cls, norm);
        case CriterionId::k2_limsup:
        case CriterionId::power_limsup: {
            if (seq.block_size() != 1) {
                return inapplicable(id, depth, norm, "inapplicable: scalar operators only");
            }
            const ScalarJacobi j = scalar_view(seq);
            const std::size_t d = seq.length() ? depth - std::min(depth, config.power_k + 2) : depth;
            return id == CriterionId::k2_limsup ? k2_limsup(j, d, cls)
                                                : power_limsup_criterion(j, config.power_k, d, cls);
        }
        }
    } catch (const std::exception& e) {
        return inapplicable(id, depth, norm, std::string("failed: ") + e.what());
    }
    return inapplicable(id, depth, norm, "unknown criterion");
}

OracleSummary run_oracle(const CoefficientSequence& seq, const RunConfig& config)
{
    OracleSummary out;
    out.depth = usable_depth(seq, config.effective_oracle_depth());
    try {
        out.estimate = deficiency_estimate(seq, out.depth, config.oracle);
    } catch (const std::exception& e) {
        out.errors.push_back(std::string("deficiency_estimate: ") + e.what());
    }
    try {
        out.complete = complete_indeterminacy_probe(seq, out.depth, config.oracle);
    } catch (const std::exception& e) {
        out.errors.push_back(std::string("complete_indeterminacy_probe: ") + e.what());
    }
    if (seq.block_size() == 1) {
        try {
            out.scalar = scalar_indeterminacy_probe(seq, out.depth, config.oracle);
        } catch (const std::exception& e) {
            out.errors.push_back(std::string("scalar_indeterminacy_probe: ") + e.what());
        }
        if (config.consistency_k > 0 && !seq.length()) {
            try {
                out.consistency = power_consistency_probe(scalar_view(seq), config.consistency_k, out.depth,
                                                          config.oracle);
            } catch (const std::exception& e) {
                out.errors.push_back(std::string("power_consistency_probe: ") + e.what());
            }
        }
    }
    return out;
}

void aggregate(ClassificationReport& report)
{
    report.contradictions.clear();
    const std::size_t m = report.block_size;

    std::vector<const CriterionVerdict*> backed;
    for (const auto& v : report.verdicts) {
        if (v.applicable && v.verdict != Verdict::no_conclusion) {
            backed.push_back(&v);
        }
    }

    auto incompatible = [](Verdict x, Verdict y) {
        auto is = [&](Verdict a, Verdict b) { return (x == a && y == b) || (x == b && y == a); };
        return is(Verdict::self_adjoint, Verdict::maximal_deficiency) ||
               is(Verdict::maximal_deficiency, Verdict::not_maximal);
    };
    for (std::size_t i = 0; i < backed.size(); ++i) {
        for (std::size_t k = i + 1; k < backed.size(); ++k) {
            if (incompatible(backed[i]->verdict, backed[k]->verdict)) {
                report.contradictions.push_back(
                    {{std::string(to_string(backed[i]->id)), std::string(to_string(backed[k]->id))},
                     std::string(to_string(backed[i]->verdict)) + " vs " + std::string(to_string(backed[k]->verdict))});
            }
        }
    }

    if (report.oracle) {
        const OracleSummary& o = *report.oracle;
        const IndeterminacyState ci = o.complete.state;
        for (const CriterionVerdict* v : backed) {
            std::string why;
            const std::size_t n = o.estimate.n_plus_estimate;
            switch (v->verdict) {
            case Verdict::self_adjoint:
                if (o.estimate.conclusive && n != 0) {
                    why = "oracle estimate " + std::to_string(n) + ", expected 0";
                } else if (ci == IndeterminacyState::completely_indeterminate) {
                    why = "oracle reports complete indeterminacy";
                }
                break;
            case Verdict::maximal_deficiency:
                if (o.estimate.conclusive && n != m) {
                    why = "oracle estimate " + std::to_string(n) + ", expected " + std::to_string(m);
                } else if (ci == IndeterminacyState::not_completely) {
                    why = "oracle reports not completely indeterminate";
                }
                break;
            case Verdict::not_maximal:
                if (o.estimate.conclusive && n == m) {
                    why = "oracle estimate " + std::to_string(n) + " equals m";
                } else if (ci == IndeterminacyState::completely_indeterminate) {
                    why = "oracle reports complete indeterminacy";
                }
                break;
            case Verdict::no_conclusion:
                break;
            }
            if (!why.empty()) {
                report.contradictions.push_back({{std::string(to_string(v->id)), "oracle"}, why});
            }
        }
    }

    auto any = [&](Verdict x) {
        return std::any_of(backed.begin(), backed.end(), [x](const CriterionVerdict* v) { return v->verdict == x; });
    };
    if (any(Verdict::self_adjoint)) {
        report.final_classification = FinalClass::self_adjoint;
    } else if (any(Verdict::maximal_deficiency)) {
        report.final_classification = FinalClass::maximal_deficiency;
    } else if (any(Verdict::not_maximal)) {
        report.final_classification = FinalClass::not_maximal;
    } else if (m == 1 && report.oracle &&
               report.oracle->complete.state == IndeterminacyState::completely_indeterminate) {
        report.final_classification = FinalClass::indeterminate_scalar;
    } else {
        report.final_classification = FinalClass::inconclusive;
    }
}

ClassificationReport classify(const RunConfig& config)
{
    const auto start = std::chrono::steady_clock::now();
    config.validate();
    const CoefficientSequence seq = build_sequence(config);

    ClassificationReport report;
    report.config = config_echo(config);
    report.block_size = seq.block_size();

    const std::vector<CriterionId> ids = config.selected_criteria();
    std::optional<KernelTable> kernel;
    std::string kernel_error;
    const bool needs_kernel = std::any_of(ids.begin(), ids.end(), [](CriterionId id) {
        return id == CriterionId::kernel_total || id == CriterionId::segment_sum;
    });
    if (needs_kernel) {
        const std::size_t kdepth =
            std::min(usable_depth(seq, config.effective_depth()), config.effective_kernel_cap(seq.block_size()));
        try {
            kernel = k_direct(seq, kdepth);
        } catch (const std::exception& e) {
            kernel_error = e.what();
        }
    }

    for (CriterionId id : ids) {
        CriterionVerdict v = run_criterion(id, seq, config, kernel ? &*kernel : nullptr);
        if (!kernel_error.empty() && (id == CriterionId::kernel_total || id == CriterionId::segment_sum)) {
            v.note = "kernel table failed: " + kernel_error;
        }
        report.verdicts.push_back(std::move(v));
    }
    if (config.oracle_enabled) {
        report.oracle = run_oracle(seq, config);
    }
    aggregate(report);
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

nlohmann::ordered_json to_json(const CriterionVerdict& v)
{
    return {{"id", to_string(v.id)},
            {"partial_value", v.partial_value},
            {"trend", to_string(v.trend)},
            {"verdict", to_string(v.verdict)},
            {"depth", v.depth},
            {"norm", to_string(v.norm_used)},
            {"applicable", v.applicable},
            {"note", v.note}};
}

nlohmann::ordered_json to_json(const OracleSummary& o)
{
    nlohmann::ordered_json j;
    const DeficiencyEstimate& e = o.estimate;
    j["depth"] = o.depth;
    nlohmann::ordered_json directions = nlohmann::ordered_json::array();
    for (std::size_t d = 0; d < e.direction_trends.size(); ++d) {
        directions.push_back({{"trend", to_string(e.direction_trends[d])}, {"log_norm", e.direction_log_norms[d]}});
    }
    j["deficiency"] = {{"n_plus_estimate", e.n_plus_estimate},
                       {"conclusive", e.conclusive},
                       {"threshold", e.threshold},
                       {"directions", directions},
                       {"gram_checkpoint", e.gram_checkpoints.empty() ? 0 : e.gram_checkpoints.back()},
                       {"gram_eigenvalues", e.gram_eigenvalues},
                       {"notes", e.notes}};
    nlohmann::ordered_json columns = nlohmann::ordered_json::array();
    for (const auto& c : o.complete.columns) {
        columns.push_back({{"trend", to_string(c.trend)},
                           {"last_index", c.last_index},
                           {"overflow", c.overflow},
                           {"partial_sum", c.partial_sums.empty() ? 0.0 : c.partial_sums.back()}});
    }
    j["complete_indeterminacy"] = {{"state", to_string(o.complete.state)}, {"columns", columns}};
    if (o.scalar) {
        j["scalar_indeterminacy"] = to_string(*o.scalar);
    }
    if (o.consistency) {
        const ConsistencyReport& c = *o.consistency;
        j["power_consistency"] = {{"k", c.k},
                                  {"scalar_state", c.scalar_state},
                                  {"power_state", c.power_state},
                                  {"state", to_string(c.state)},
                                  {"block_depth", c.block_depth}};
    }
    j["errors"] = o.errors;
    return j;
}

nlohmann::ordered_json to_json(const ClassificationReport& r, bool with_timing)
{
    nlohmann::ordered_json j;
    j["config"] = r.config;
    j["block_size"] = r.block_size;
    nlohmann::ordered_json verdicts = nlohmann::ordered_json::array();
    for (const auto& v : r.verdicts) {
        verdicts.push_back(to_json(v));
    }
    j["criteria"] = verdicts;
    j["oracle"] = r.oracle ? to_json(*r.oracle) : nlohmann::ordered_json(nullptr);
    j["final_classification"] = to_string(r.final_classification);
    nlohmann::ordered_json contradictions = nlohmann::ordered_json::array();
    for (const auto& c : r.contradictions) {
        contradictions.push_back({{"sources", c.sources}, {"reason", c.reason}});
    }
    j["contradictions"] = contradictions;
    if (with_timing) {
        j["timing"] = {{"seconds", r.seconds}};
    }
    return j;
}

} // namespace jdef
