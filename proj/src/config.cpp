#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "jdef/cli.hpp"

namespace jdef {

namespace {

const std::map<std::string, std::set<std::string>>& known_keys()
{
    static const std::map<std::string, std::set<std::string>> keys = {
        {"operator", {"kind", "family", "table"}},
        {"coeffs", {"a", "b", "alpha", "beta", "p", "m", "hermitian_tol", "invertibility_tol"}},
        {"criteria",
         {"select", "depth", "kernel_cap", "norm", "window", "epsilon", "tail_tol", "ratio_div", "ratio_conv",
          "min_depth", "margin", "power_k", "samples", "seed"}},
        {"oracle", {"enabled", "depth", "tail_tol", "ratio_conv", "ratio_div", "decel_tol", "min_depth", "consistency_k"}},
        {"output", {"report"}},
    };
    return keys;
}

std::string where(const std::string& section, const std::string& key)
{
    return "[" + section + "] " + key;
}

double to_double(const std::string& section, const std::string& key, const std::string& value)
{
    double v = 0.0;
    const char* end = value.data() + value.size();
    auto [ptr, ec] = std::from_chars(value.data(), end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
        throw ConfigError(where(section, key) + ": expected a number, got '" + value + "'");
    }
    return v;
}

std::uint64_t to_unsigned(const std::string& section, const std::string& key, const std::string& value)
{
    std::uint64_t v = 0;
    const char* end = value.data() + value.size();
    auto [ptr, ec] = std::from_chars(value.data(), end, v);
    if (ec != std::errc() || ptr != end) {
        throw ConfigError(where(section, key) + ": expected a non-negative integer, got '" + value + "'");
    }
    return v;
}

bool to_bool(const std::string& section, const std::string& key, const std::string& value)
{
    if (value == "true" || value == "on" || value == "yes" || value == "1") {
        return true;
    }
    if (value == "false" || value == "off" || value == "no" || value == "0") {
        return false;
    }
    throw ConfigError(where(section, key) + ": expected true or false, got '" + value + "'");
}

std::string trim(std::string s)
{
    const auto ws = " \t\r\n";
    s.erase(0, s.find_first_not_of(ws));
    s.erase(s.find_last_not_of(ws) + 1);
    return s;
}

void apply(RunConfig& c, const std::string& section, const std::string& key, const std::string& value,
           const std::string& base_dir)
{
    auto num = [&] { return to_double(section, key, value); };
    auto count = [&] { return static_cast<std::size_t>(to_unsigned(section, key, value)); };

    if (section == "operator") {
        if (key == "kind") {
            if (value == "scalar") {
                c.kind = OperatorKind::scalar;
            } else if (value == "block") {
                c.kind = OperatorKind::block;
            } else if (value == "band") {
                c.kind = OperatorKind::band;
            } else {
                throw ConfigError(where(section, key) + ": expected scalar, block or band, got '" + value + "'");
            }
        } else if (key == "family") {
            try {
                c.family = parse_family(value);
            } catch (const std::exception& e) {
                throw ConfigError(where(section, key) + ": " + e.what());
            }
        } else if (key == "table") {
            const std::filesystem::path p(value);
            c.table_path = p.is_absolute() ? p.string() : (std::filesystem::path(base_dir) / p).string();
        }
    } else if (section == "coeffs") {
        if (key == "a") c.params.a = num();
        else if (key == "b") c.params.b = num();
        else if (key == "alpha") c.params.alpha = num();
        else if (key == "beta") c.params.beta = num();
        else if (key == "p") c.params.p = count();
        else if (key == "m") c.params.m = count();
        else if (key == "hermitian_tol") c.params.tolerances.hermitian = num();
        else if (key == "invertibility_tol") c.params.tolerances.invertibility = num();
    } else if (section == "criteria") {
        if (key == "select") {
            c.criteria.clear();
            std::stringstream ss(value);
            std::string item;
            while (std::getline(ss, item, ',')) {
                item = trim(item);
                if (item.empty()) {
                    continue;
                }
                if (item == "all") {
                    c.criteria.clear();
                    break;
                }
                try {
                    c.criteria.push_back(parse_criterion(item));
                } catch (const std::exception&) {
                    throw ConfigError(where(section, key) + ": unknown criterion '" + item + "'");
                }
            }
        } else if (key == "depth") c.depth = count();
        else if (key == "kernel_cap") c.kernel_cap = count();
        else if (key == "norm") {
            try {
                c.norm = parse_norm(value);
            } catch (const std::exception& e) {
                throw ConfigError(where(section, key) + ": " + e.what());
            }
        }
        else if (key == "window") c.classifier.window = count();
        else if (key == "epsilon") c.classifier.epsilon = num();
        else if (key == "tail_tol") c.classifier.tail_tol = num();
        else if (key == "ratio_div") c.classifier.ratio_threshold_div = num();
        else if (key == "ratio_conv") c.classifier.ratio_threshold_conv = num();
        else if (key == "min_depth") c.classifier.min_depth = count();
        else if (key == "margin") c.classifier.margin = num();
        else if (key == "power_k") c.power_k = count();
        else if (key == "samples") c.samples = count();
        else if (key == "seed") c.seed = to_unsigned(section, key, value);
    } else if (section == "oracle") {
        if (key == "enabled") c.oracle_enabled = to_bool(section, key, value);
        else if (key == "depth") c.oracle_depth = count();
        else if (key == "tail_tol") c.oracle.tail_tol = num();
        else if (key == "ratio_conv") c.oracle.ratio_conv = num();
        else if (key == "ratio_div") c.oracle.ratio_div = num();
        else if (key == "decel_tol") c.oracle.decel_tol = num();
        else if (key == "min_depth") c.oracle.min_depth = count();
        else if (key == "consistency_k") c.consistency_k = count();
    } else if (section == "output") {
        if (key == "report") c.report_path = value;
    }
}

} // namespace

std::size_t RunConfig::effective_depth() const
{
    if (depth) {
        return *depth;
    }
    return kind == OperatorKind::scalar ? 10000 : 1000;
}

std::size_t RunConfig::effective_kernel_cap(std::size_t block_size) const
{
    if (kernel_cap) {
        return *kernel_cap;
    }
    if (block_size == 1) {
        return 2000;
    }
    return block_size <= 4 ? 300 : 100;
}

std::size_t RunConfig::effective_oracle_depth() const
{
    return oracle_depth ? *oracle_depth : effective_depth();
}

std::vector<CriterionId> RunConfig::selected_criteria() const
{
    if (!criteria.empty()) {
        return criteria;
    }
    const auto all = all_criteria();
    return {all.begin(), all.end()};
}

void RunConfig::validate() const
{
    if ((depth && *depth == 0) || (kernel_cap && *kernel_cap == 0) || (oracle_depth && *oracle_depth == 0)) {
        throw ConfigError("depths must be positive");
    }
    try {
        classifier.validate();
        oracle.validate();
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    if (effective_depth() < classifier.min_depth) {
        throw ConfigError("depth must be >= " + std::to_string(classifier.min_depth));
    }
    if (oracle_enabled && effective_oracle_depth() < 64) {
        throw ConfigError("oracle depth must be >= 64");
    }
    if (power_k < 1) {
        throw ConfigError("power_k must be >= 1");
    }
    if (samples < 1) {
        throw ConfigError("samples must be >= 1");
    }
    if (!(params.tolerances.hermitian > 0.0) || !(params.tolerances.invertibility > 0.0)) {
        throw ConfigError("tolerances must be positive");
    }

    const bool scalar_family = family == Family::constant || family == Family::power ||
                               family == Family::alternating_power;
    switch (kind) {
    case OperatorKind::scalar:
        if (!scalar_family && family != Family::table) {
            throw ConfigError("scalar operators take families constant, power, alternating_power or table");
        }
        break;
    case OperatorKind::block:
        if (family != Family::table && family != Family::example1) {
            throw ConfigError("block operators take families table or example1");
        }
        break;
    case OperatorKind::band:
        if (family != Family::example1) {
            throw ConfigError("band operators take family example1");
        }
        break;
    }
    if (scalar_family && !(params.b > 0.0)) {
        throw ConfigError("[coeffs] b must be positive");
    }
    if (family == Family::example1 && (params.p < 1 || params.p >= params.m)) {
        throw ConfigError("example1 needs 1 <= p < m");
    }
    if (family == Family::table && table_path.empty()) {
        throw ConfigError("table family needs [operator] table");
    }
}

RunConfig parse_config(std::istream& in, const std::string& base_dir)
{
    boost::property_tree::ptree tree;
    try {
        boost::property_tree::ini_parser::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
    RunConfig config;
    for (const auto& [section, body] : tree) {
        const auto found = known_keys().find(section);
        if (found == known_keys().end()) {
            if (body.empty()) {
                throw ConfigError("key '" + section + "' outside a section");
            }
            throw ConfigError("unknown section [" + section + "]");
        }
        for (const auto& [key, node] : body) {
            if (!found->second.count(key)) {
                throw ConfigError("unknown key " + where(section, key));
            }
            apply(config, section, key, trim(node.get_value<std::string>()), base_dir);
        }
    }
    config.validate();
    return config;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config '" + path + "'");
    }
    const auto dir = std::filesystem::path(path).parent_path();
    return parse_config(in, dir.empty() ? "." : dir.string());
}

CoefficientSequence build_sequence(const RunConfig& config)
{
    FamilyParams params = config.params;
    if (config.family == Family::table) {
        try {
            params.table = read_block_table_file(config.table_path);
        } catch (const std::exception& e) {
            throw ConfigError(std::string("table: ") + e.what());
        }
        const auto m = static_cast<std::size_t>(params.table.front().a.rows());
        if (config.kind == OperatorKind::scalar && m != 1) {
            throw ConfigError("scalar operator needs 1 x 1 table blocks");
        }
    }
    return make_family(config.family, params);
}

nlohmann::ordered_json config_echo(const RunConfig& c)
{
    nlohmann::ordered_json j;
    const char* kinds[] = {"scalar", "block", "band"};
    j["operator"] = {{"kind", kinds[static_cast<int>(c.kind)]}, {"family", to_string(c.family)}};
    if (!c.table_path.empty()) {
        j["operator"]["table"] = c.table_path;
    }
    j["coeffs"] = {{"a", c.params.a},
                   {"b", c.params.b},
                   {"alpha", c.params.alpha},
                   {"beta", c.params.beta},
                   {"p", c.params.p},
                   {"m", c.params.m},
                   {"hermitian_tol", c.params.tolerances.hermitian},
                   {"invertibility_tol", c.params.tolerances.invertibility}};
    nlohmann::ordered_json ids = nlohmann::ordered_json::array();
    for (auto id : c.selected_criteria()) {
        ids.push_back(to_string(id));
    }
    j["criteria"] = {{"select", ids},
                     {"depth", c.effective_depth()},
                     {"kernel_cap", c.kernel_cap ? nlohmann::ordered_json(*c.kernel_cap) : nlohmann::ordered_json("auto")},
                     {"norm", to_string(c.norm)},
                     {"window", c.classifier.window},
                     {"epsilon", c.classifier.epsilon},
                     {"tail_tol", c.classifier.tail_tol},
                     {"ratio_div", c.classifier.ratio_threshold_div},
                     {"ratio_conv", c.classifier.ratio_threshold_conv},
                     {"min_depth", c.classifier.min_depth},
                     {"margin", c.classifier.margin},
                     {"power_k", c.power_k}};
    j["oracle"] = {{"enabled", c.oracle_enabled},
                   {"depth", c.effective_oracle_depth()},
                   {"tail_tol", c.oracle.tail_tol},
                   {"ratio_conv", c.oracle.ratio_conv},
                   {"ratio_div", c.oracle.ratio_div},
                   {"decel_tol", c.oracle.decel_tol},
                   {"min_depth", c.oracle.min_depth},
                   {"consistency_k", c.consistency_k}};
    return j;
}

} // namespace jdef
