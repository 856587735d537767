#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "jdef/cli.hpp"

namespace {

struct Options {
    std::string config_path;
    std::optional<std::size_t> depth;
    std::optional<std::string> norm;
    std::optional<std::string> report;
    std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, Options& opt, bool config_required)
{
    auto* c = cmd->add_option("--config", opt.config_path, "INI config file");
    if (config_required) {
        c->required();
    }
    cmd->add_option("--depth", opt.depth, "depth override");
    cmd->add_option("--norm", opt.norm, "spectral or frobenius");
    cmd->add_option("--report", opt.report, "report output path");
    cmd->add_option("--seed", opt.seed, "seed for randomized suites");
}

jdef::RunConfig resolve(const Options& opt)
{
    jdef::RunConfig config;
    if (!opt.config_path.empty()) {
        config = jdef::load_config(opt.config_path);
    }
    if (opt.depth) {
        config.depth = *opt.depth;
    }
    if (opt.norm) {
        try {
            config.norm = jdef::parse_norm(*opt.norm);
        } catch (const std::exception& e) {
            throw jdef::ConfigError(std::string("--norm: ") + e.what());
        }
    }
    if (opt.report) {
        config.report_path = *opt.report;
    }
    if (opt.seed) {
        config.seed = *opt.seed;
    }
    config.validate();
    return config;
}

void emit(const std::string& path, const std::string& text)
{
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write report '" + path + "'");
    }
    out << text;
}

int run_classify(const Options& opt)
{
    const jdef::RunConfig config = resolve(opt);
    const jdef::ClassificationReport report = jdef::classify(config);
    emit(config.report_path, jdef::to_json(report).dump(2) + "\n");
    if (!config.report_path.empty()) {
        std::cout << "final_classification: " << jdef::to_string(report.final_classification) << "\n";
        for (const auto& v : report.verdicts) {
            std::cout << "  " << jdef::to_string(v.id) << ": " << jdef::to_string(v.verdict) << " ("
                      << jdef::to_string(v.trend) << ", " << v.partial_value << ")\n";
        }
        if (report.oracle) {
            std::cout << "  oracle n_plus_estimate: " << report.oracle->estimate.n_plus_estimate
                      << (report.oracle->estimate.conclusive ? "" : " (inconclusive)") << "\n";
        }
    }
    for (const auto& c : report.contradictions) {
        std::cerr << "contradiction:";
        for (const auto& s : c.sources) {
            std::cerr << ' ' << s;
        }
        std::cerr << ": " << c.reason << "\n";
    }
    return report.exit_status();
}

int run_probe(const Options& opt)
{
    const jdef::RunConfig config = resolve(opt);
    const jdef::CoefficientSequence seq = jdef::build_sequence(config);
    nlohmann::ordered_json j;
    j["config"] = jdef::config_echo(config);
    j["oracle"] = jdef::to_json(jdef::run_oracle(seq, config));
    emit(config.report_path, j.dump(2) + "\n");
    return jdef::kExitOk;
}

int run_power(const Options& opt)
{
    const jdef::RunConfig config = resolve(opt);
    if (config.kind != jdef::OperatorKind::scalar) {
        throw jdef::ConfigError("power needs a scalar operator");
    }
    const jdef::CoefficientSequence seq = jdef::build_sequence(config);
    const std::size_t depth = opt.depth ? *opt.depth : std::min<std::size_t>(config.effective_depth(), 60);
    const jdef::PowerBand band(jdef::scalar_view(seq), config.power_k, depth);
    std::ostringstream text;
    jdef::write_power_corner(text, band);
    emit(config.report_path, text.str());
    return jdef::kExitOk;
}

int run_check(const Options& opt)
{
    const jdef::RunConfig config = resolve(opt);
    const auto suites = jdef::check_invariants(config);
    std::ostringstream text;
    bool ok = true;
    for (const auto& s : suites) {
        ok = ok && s.passed;
        text << "suite " << s.name << ": " << (s.passed ? "pass" : "FAIL") << " samples=" << s.samples
             << " max_residual=" << s.max_residual << "\n";
        for (const auto& f : s.failures) {
            text << "  failure: " << s.name << ": " << f << "\n";
        }
    }
    emit(config.report_path, text.str());
    if (!config.report_path.empty()) {
        std::cout << text.str();
    }
    return ok ? jdef::kExitOk : jdef::kExitSuiteFailure;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Deficiency-index classification for Jacobi matrices"};
    app.require_subcommand(1);
    Options classify_opt, probe_opt, power_opt, check_opt;
    auto* classify = app.add_subcommand("classify", "run the criteria battery and the oracle");
    add_common(classify, classify_opt, true);
    auto* probe = app.add_subcommand("probe", "run the oracle only");
    add_common(probe, probe_opt, true);
    auto* power = app.add_subcommand("power", "print the band of J^k");
    add_common(power, power_opt, true);
    auto* check = app.add_subcommand("check-invariants", "run the property suites");
    add_common(check, check_opt, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? jdef::kExitOk : jdef::kExitInvalidConfig;
    }

    try {
        if (*classify) return run_classify(classify_opt);
        if (*probe) return run_probe(probe_opt);
        if (*power) return run_power(power_opt);
        if (*check) return run_check(check_opt);
    } catch (const jdef::ConfigError& e) {
        std::cerr << "invalid config: " << e.what() << "\n";
        return jdef::kExitInvalidConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return jdef::kExitInvalidConfig;
    }
    return jdef::kExitOk;
}
