#include "qforge/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qforge/format.hpp"

namespace qforge {

namespace {

using nlohmann::json;

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
    throw ConfigError("field '" + field + "': " + what);
}

const json& require(const json& doc, const char* field) {
    const auto it = doc.find(field);
    if (it == doc.end()) {
        field_error(field, "missing");
    }
    return *it;
}

const json& require_nonempty_array(const json& doc, const char* field) {
    const json& v = require(doc, field);
    if (!v.is_array() || v.empty()) {
        field_error(field, "must be a non-empty list");
    }
    return v;
}

double as_number(const json& v, const std::string& field) {
    if (!v.is_number()) {
        field_error(field, "must be a number");
    }
    return v.get<double>();
}

std::uint64_t as_unsigned(const json& v, const std::string& field) {
    if (!v.is_number_unsigned()) {
        field_error(field, "must be a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

std::string at_index(const char* field, std::size_t k) {
    return std::string(field) + "[" + std::to_string(k) + "]";
}

std::vector<DistributionSpec> parse_distributions(const json& doc) {
    const json& list = require_nonempty_array(doc, "distributions");
    std::vector<DistributionSpec> out;
    for (std::size_t k = 0; k < list.size(); ++k) {
        const std::string where = at_index("distributions", k);
        const json& item = list[k];
        if (!item.is_object() || !item.contains("family") || !item["family"].is_string()) {
            field_error(where, "expected {\"family\": <name>, \"params\": [...]}");
        }
        std::vector<double> params;
        if (item.contains("params")) {
            if (!item["params"].is_array()) {
                field_error(where + ".params", "must be a list of numbers");
            }
            for (std::size_t p = 0; p < item["params"].size(); ++p) {
                params.push_back(as_number(item["params"][p], where + ".params"));
            }
        }
        try {
            out.push_back(DistributionSpec::parse(item["family"].get<std::string>(), params));
        } catch (const ParameterError& e) {
            field_error(where, e.what());
        }
    }
    return out;
}

std::vector<EstimatorId> parse_estimators(const json& doc) {
    const json& list = require_nonempty_array(doc, "estimators");
    std::vector<EstimatorId> out;
    for (std::size_t k = 0; k < list.size(); ++k) {
        const std::string where = at_index("estimators", k);
        if (!list[k].is_string()) {
            field_error(where, "must be an estimator name such as \"HF7\" or \"Q11(2,3)\"");
        }
        try {
            out.push_back(EstimatorId::parse(list[k].get<std::string>()));
        } catch (const ParameterError& e) {
            field_error(where, e.what());
        }
    }
    return out;
}

std::vector<int> parse_sample_sizes(const json& doc) {
    const json& list = require_nonempty_array(doc, "sample_sizes");
    std::vector<int> out;
    for (std::size_t k = 0; k < list.size(); ++k) {
        const std::string where = at_index("sample_sizes", k);
        const std::uint64_t n = as_unsigned(list[k], where);
        if (n < 2 || n > 1000000) {
            field_error(where, "sample size must be in 2..1000000");
        }
        out.push_back(static_cast<int>(n));
    }
    return out;
}

std::vector<double> parse_q_values(const json& doc) {
    const json& grid = require(doc, "q_grid");
    try {
        if (grid.is_object()) {
            return expand_q_range(as_number(require(grid, "start"), "q_grid.start"),
                                  as_number(require(grid, "stop"), "q_grid.stop"),
                                  as_number(require(grid, "step"), "q_grid.step"));
        }
        if (grid.is_array() && !grid.empty()) {
            std::vector<double> out;
            for (std::size_t k = 0; k < grid.size(); ++k) {
                const double q = as_number(grid[k], at_index("q_grid", k));
                if (!(q > 0.0 && q < 1.0)) {
                    field_error(at_index("q_grid", k), "must lie in (0, 1)");
                }
                out.push_back(q);
            }
            return out;
        }
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        if (msg.rfind("field", 0) == 0) {
            throw;
        }
        field_error("q_grid", msg);
    }
    field_error("q_grid", "must be {\"start\", \"stop\", \"step\"} or a non-empty list");
}

}  // namespace

std::vector<double> expand_q_range(double start, double stop, double step) {
    if (!(std::isfinite(start) && std::isfinite(stop) && std::isfinite(step))) {
        throw ConfigError("q grid bounds must be finite");
    }
    if (!(step > 0.0)) {
        throw ConfigError("q grid step must be positive");
    }
    if (!(start > 0.0 && stop < 1.0 && start <= stop)) {
        throw ConfigError("q grid must satisfy 0 < start <= stop < 1");
    }
    const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count));
    for (long k = 0; k < count; ++k) {
        out.push_back(std::round((start + static_cast<double>(k) * step) * 1e12) / 1e12);
    }
    return out;
}

std::vector<double> parse_q_grid(std::string_view text) {
    double parts[3];
    std::size_t pos = 0;
    for (int k = 0; k < 3; ++k) {
        const std::size_t end = k < 2 ? text.find(':', pos) : text.size();
        if (end == std::string_view::npos) {
            throw ConfigError("q grid must look like start:stop:step, got '" + std::string(text) + "'");
        }
        const std::string_view piece = text.substr(pos, end - pos);
        const auto res = std::from_chars(piece.data(), piece.data() + piece.size(), parts[k]);
        if (res.ec != std::errc() || res.ptr != piece.data() + piece.size()) {
            throw ConfigError("q grid component '" + std::string(piece) + "' is not a number");
        }
        pos = end + 1;
    }
    return expand_q_range(parts[0], parts[1], parts[2]);
}

RunConfig parse_run_config(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        const std::size_t byte = std::min(e.byte, json_text.size());
        const auto before = json_text.substr(0, byte);
        const auto line = 1 + std::count(before.begin(), before.end(), '\n');
        const auto nl = before.rfind('\n');
        const auto column = nl == std::string_view::npos ? byte : byte - nl - 1;
        throw ConfigError("JSON syntax error at line " + std::to_string(line) + ", column " +
                          std::to_string(column) + ": " + e.what());
    }
    if (!doc.is_object()) {
        throw ConfigError("configuration must be a JSON object");
    }

    RunConfig cfg;
    cfg.distributions = parse_distributions(doc);
    cfg.estimators = parse_estimators(doc);
    cfg.sample_sizes = parse_sample_sizes(doc);
    cfg.q_values = parse_q_values(doc);
    cfg.trials = as_unsigned(require(doc, "trials"), "trials");
    if (cfg.trials < 1) {
        field_error("trials", "must be >= 1");
    }
    if (doc.contains("seed")) {
        cfg.seed = as_unsigned(doc["seed"], "seed");
    }
    if (doc.contains("output_path")) {
        if (!doc["output_path"].is_string()) {
            field_error("output_path", "must be a string");
        }
        cfg.output_path = doc["output_path"].get<std::string>();
    }
    return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open config file '" + path.string() + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_run_config(buf.str());
}

std::vector<CellSpec> build_cells(const RunConfig& config) {
    std::vector<CellSpec> cells;
    for (const auto& dist : config.distributions) {
        for (const auto& est : config.estimators) {
            for (int n : config.sample_sizes) {
                for (double q : config.q_values) {
                    cells.push_back({dist, est, n, QuantileLevel(q), config.trials, config.seed});
                }
            }
        }
    }
    return cells;
}

std::string format_result_row(const CellResult& r) {
    const auto& s = r.spec;
    const auto& m = r.metrics;
    std::string row;
    row += s.dist.name();
    row += ',' + s.dist.params_text();
    row += ',' + s.estimator.name();
    row += ',' + std::to_string(s.n);
    row += ',' + format_double(s.q.value());
    row += ',' + std::to_string(m.trials);
    row += ',' + format_double(m.true_quantile);
    row += ',' + format_double(m.bias);
    row += ',' + format_double(m.variance);
    row += ',' + format_double(m.mse);
    row += ',' + format_double(m.se_bias);
    row += ',' + std::to_string(s.seed);
    return row;
}

void write_results_csv(std::ostream& out, std::span<const CellResult> results) {
    out << kCsvHeader << '\n';
    for (const auto& r : results) {
        out << format_result_row(r) << '\n';
    }
}

}  // namespace qforge
