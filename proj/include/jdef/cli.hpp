#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "jdef/coeffs.hpp"
#include "jdef/criteria.hpp"
#include "jdef/oracle.hpp"
#include "jdef/powers.hpp"

namespace jdef {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalidConfig = 1;
inline constexpr int kExitContradiction = 2;
inline constexpr int kExitSuiteFailure = 3;

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class OperatorKind { scalar, block, band };

struct RunConfig {
    // [operator]
    OperatorKind kind = OperatorKind::scalar;
    Family family = Family::power;
    std::string table_path;

    // [coeffs]
    FamilyParams params;

    // [criteria]
    std::vector<CriterionId> criteria; // empty selects all
    std::optional<std::size_t> depth;       // unset: 10000 scalar, 1000 otherwise
    std::optional<std::size_t> kernel_cap;  // unset: 2000 for m = 1, 300 for m <= 4, 100 beyond
    NormKind norm = NormKind::spectral;
    TrendClassifier classifier;
    std::size_t power_k = 2;
    std::size_t samples = 20;
    std::uint64_t seed = 1;

    // [oracle]
    bool oracle_enabled = true;
    std::optional<std::size_t> oracle_depth; // unset: same as depth
    OracleConfig oracle;
    std::size_t consistency_k = 0; // 0: skip the power consistency probe

    // [output]
    std::string report_path;

    std::size_t effective_depth() const;
    std::size_t effective_kernel_cap(std::size_t block_size) const;
    std::size_t effective_oracle_depth() const;
    std::vector<CriterionId> selected_criteria() const;

    /// Throws ConfigError.
    void validate() const;
};

/// INI text with sections [operator], [coeffs], [criteria], [oracle], [output].
/// Unknown sections or keys, malformed values and failed validation throw ConfigError.
/// Relative table paths are resolved against base_dir.
RunConfig parse_config(std::istream& in, const std::string& base_dir = ".");
RunConfig load_config(const std::string& path);

/// Builds the coefficient sequence (reading the table file if needed).
CoefficientSequence build_sequence(const RunConfig& config);

nlohmann::ordered_json config_echo(const RunConfig& config);

struct OracleSummary {
    DeficiencyEstimate estimate;
    IndeterminacyReport complete;
    std::optional<ScalarState> scalar;
    std::optional<ConsistencyReport> consistency;
    std::size_t depth = 0;
    std::vector<std::string> errors;
};

struct Contradiction {
    std::vector<std::string> sources;
    std::string reason;
};

enum class FinalClass { self_adjoint, maximal_deficiency, not_maximal, indeterminate_scalar, inconclusive };
std::string_view to_string(FinalClass c);

struct ClassificationReport {
    nlohmann::ordered_json config;
    std::size_t block_size = 1;
    std::vector<CriterionVerdict> verdicts;
    std::optional<OracleSummary> oracle;
    FinalClass final_classification = FinalClass::inconclusive;
    std::vector<Contradiction> contradictions;
    double seconds = 0.0;

    int exit_status() const { return contradictions.empty() ? kExitOk : kExitContradiction; }
};

OracleSummary run_oracle(const CoefficientSequence& seq, const RunConfig& config);

/// Runs one criterion; failures are recorded in the verdict (applicable = false).
CriterionVerdict run_criterion(CriterionId id, const CoefficientSequence& seq, const RunConfig& config,
                               const KernelTable* kernel);

/// Precedence self_adjoint > maximal_deficiency > not_maximal > indeterminate_scalar > inconclusive;
/// incompatible verdict pairs and oracle disagreements are listed as contradictions.
void aggregate(ClassificationReport& report);

ClassificationReport classify(const RunConfig& config);

nlohmann::ordered_json to_json(const CriterionVerdict& v);
nlohmann::ordered_json to_json(const OracleSummary& o);
nlohmann::ordered_json to_json(const ClassificationReport& r, bool with_timing = true);

struct SuiteResult {
    std::string name;
    bool passed = true;
    std::size_t samples = 0;
    double max_residual = 0.0;
    std::vector<std::string> failures;
};

/// coeffs, christoffel_darboux, kernel_routes, qq_inequalities, power_truncation.
std::vector<SuiteResult> check_invariants(const RunConfig& config);

SuiteResult suite_coeffs(const CoefficientSequence& seq, std::size_t depth);
SuiteResult suite_christoffel_darboux(std::size_t samples, std::uint64_t seed);
SuiteResult suite_kernel_routes(std::size_t samples, std::uint64_t seed);
SuiteResult suite_qq_inequalities(std::size_t samples, std::uint64_t seed, NormKind norm);
SuiteResult suite_power_truncation(std::uint64_t seed);

/// Upper band rows n = 0..depth of J^k as text, one row per line.
void write_power_corner(std::ostream& out, const PowerBand& band);

} // namespace jdef
