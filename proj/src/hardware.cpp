#include "roofsim/hardware.hpp"

#include <cmath>
#include <set>

#include <json.hpp>

namespace roofsim {

namespace {

using nlohmann::json;

double require_number(const json& obj, const std::string& field,
                      const std::string& ctx) {
    if (!obj.contains(field)) {
        throw ConfigError(ctx + ": missing field '" + field + "'");
    }
    if (!obj[field].is_number()) {
        throw ConfigError(ctx + ": field '" + field + "' must be a number");
    }
    return obj[field].get<double>();
}

int require_positive_int(const json& obj, const std::string& field,
                         const std::string& ctx) {
    double v = require_number(obj, field, ctx);
    if (v <= 0 || v != std::floor(v)) {
        throw ConfigError(ctx + ": field '" + field +
                          "' must be a positive integer");
    }
    return static_cast<int>(v);
}

json parse_document(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
}

} // namespace

void validate_gpu_spec(const GpuSpec& spec) {
    const std::string ctx = "gpu '" + spec.name + "'";
    if (spec.name.empty()) throw ConfigError("gpu entry: empty name");
    if (!(spec.tflops > 0)) throw ConfigError(ctx + ": tflops must be positive");
    if (!(spec.mem_capacity_gb > 0))
        throw ConfigError(ctx + ": mem_capacity_gb must be positive");
    if (!(spec.mem_bw_gbps > 0))
        throw ConfigError(ctx + ": mem_bw_gbps must be positive");
    if (!(spec.net_bw_gbps > 0))
        throw ConfigError(ctx + ": net_bw_gbps must be positive");
    if (spec.sms <= 0) throw ConfigError(ctx + ": sms must be positive");
    if (spec.max_gpus <= 0) throw ConfigError(ctx + ": max_gpus must be positive");
}

void validate_die_spec(const DieSpec& die) {
    if (die.area_cm2 < 0) throw ConfigError("die: area_cm2 must be >= 0");
    if (die.defect_density_per_cm2 < 0)
        throw ConfigError("die: defect_density_per_cm2 must be >= 0");
    if (!(die.cluster_alpha > 0))
        throw ConfigError("die: cluster_alpha must be positive");
}

std::vector<GpuSpec> load_gpu_specs(const std::string& config_text) {
    json doc = parse_document(config_text);
    if (!doc.contains("gpus") || !doc["gpus"].is_array()) {
        throw ConfigError("config: missing 'gpus' array");
    }
    std::vector<GpuSpec> specs;
    std::set<std::string> seen;
    int idx = 0;
    for (const auto& entry : doc["gpus"]) {
        const std::string ctx = "gpus[" + std::to_string(idx) + "]";
        if (!entry.is_object()) throw ConfigError(ctx + ": expected an object");
        GpuSpec spec;
        if (!entry.contains("name") || !entry["name"].is_string()) {
            throw ConfigError(ctx + ": missing string field 'name'");
        }
        spec.name = entry["name"].get<std::string>();
        spec.tflops = require_number(entry, "tflops", ctx);
        spec.mem_capacity_gb = require_number(entry, "mem_capacity_gb", ctx);
        spec.mem_bw_gbps = require_number(entry, "mem_bw_gbps", ctx);
        spec.net_bw_gbps = require_number(entry, "net_bw_gbps", ctx);
        spec.sms = require_positive_int(entry, "sms", ctx);
        spec.max_gpus = require_positive_int(entry, "max_gpus", ctx);
        validate_gpu_spec(spec);
        if (!seen.insert(spec.name).second) {
            throw ConfigError("gpu '" + spec.name + "': duplicate name");
        }
        specs.push_back(std::move(spec));
        ++idx;
    }
    if (specs.empty()) throw ConfigError("config: 'gpus' array is empty");
    return specs;
}

std::optional<DieSpec> load_die_spec(const std::string& config_text) {
    json doc = parse_document(config_text);
    if (!doc.contains("die")) return std::nullopt;
    const auto& entry = doc["die"];
    DieSpec die;
    die.area_cm2 = require_number(entry, "area_cm2", "die");
    die.defect_density_per_cm2 =
        require_number(entry, "defect_density_per_cm2", "die");
    die.cluster_alpha = require_number(entry, "cluster_alpha", "die");
    validate_die_spec(die);
    return die;
}

GpuSpec derive_lite_spec(const GpuSpec& base, int split_factor,
                         const LiteOverrides& overrides,
                         const std::string& name) {
    validate_gpu_spec(base);
    if (split_factor < 1) {
        throw std::invalid_argument("derive_lite_spec: split_factor must be >= 1");
    }
    if (base.sms % split_factor != 0) {
        throw std::invalid_argument("derive_lite_spec: sms (" +
                                    std::to_string(base.sms) +
                                    ") not divisible by split factor " +
                                    std::to_string(split_factor));
    }
    GpuSpec lite;
    lite.name = name.empty()
                    ? base.name + "-lite" + std::to_string(split_factor)
                    : name;
    const double k = static_cast<double>(split_factor);
    lite.tflops = base.tflops / k * overrides.tflops_mult;
    lite.mem_capacity_gb = base.mem_capacity_gb / k * overrides.mem_capacity_mult;
    lite.mem_bw_gbps = base.mem_bw_gbps / k * overrides.mem_bw_mult;
    lite.net_bw_gbps = base.net_bw_gbps / k * overrides.net_bw_mult;
    lite.sms = base.sms / split_factor;
    lite.max_gpus = base.max_gpus * split_factor;
    validate_gpu_spec(lite);
    return lite;
}

double shoreline_bandwidth_ratio(int split_factor) {
    if (split_factor < 1) {
        throw std::invalid_argument(
            "shoreline_bandwidth_ratio: split_factor must be >= 1");
    }
    return std::sqrt(static_cast<double>(split_factor));
}

double die_yield(const DieSpec& die) {
    validate_die_spec(die);
    const double load =
        die.area_cm2 * die.defect_density_per_cm2 / die.cluster_alpha;
    return std::pow(1.0 + load, -die.cluster_alpha);
}

double relative_cost_per_compute(const DieSpec& base_die, int split_factor) {
    if (split_factor < 1) {
        throw std::invalid_argument(
            "relative_cost_per_compute: split_factor must be >= 1");
    }
    DieSpec split = base_die;
    split.area_cm2 = base_die.area_cm2 / static_cast<double>(split_factor);
    return die_yield(base_die) / die_yield(split);
}

} // namespace roofsim
