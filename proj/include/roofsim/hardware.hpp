#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace roofsim {

// Raised on malformed or invariant-violating config input. The message
// carries the offending field/line context.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// One GPU type: peak capabilities per device.
struct GpuSpec {
    std::string name;
    double tflops = 0.0;           // peak compute, TFLOP/s
    double mem_capacity_gb = 0.0;  // HBM capacity, GB
    double mem_bw_gbps = 0.0;      // memory bandwidth, GB/s
    double net_bw_gbps = 0.0;      // per-GPU network injection bandwidth, GB/s
    int sms = 0;                   // streaming multiprocessor count
    int max_gpus = 0;              // largest cluster size for this type

    double flops_per_s() const { return tflops * 1e12; }
    double mem_bytes_per_s() const { return mem_bw_gbps * 1e9; }
    double net_bytes_per_s() const { return net_bw_gbps * 1e9; }
};

// Compute-die parameters for the negative-binomial yield model
// Y = (1 + A*D0/alpha)^(-alpha).
struct DieSpec {
    double area_cm2 = 8.14;                // H100-class die
    double defect_density_per_cm2 = 0.1;
    double cluster_alpha = 10.0;
};

// Per-field multipliers applied after an even package split.
struct LiteOverrides {
    double tflops_mult = 1.0;
    double mem_capacity_mult = 1.0;
    double mem_bw_mult = 1.0;
    double net_bw_mult = 1.0;
};

// Throws ConfigError naming the offending field.
void validate_gpu_spec(const GpuSpec& spec);
void validate_die_spec(const DieSpec& die);

// Parses a JSON document: {"gpus": [...], "die": {...}}. Field names are
// the struct member names. Names must be unique. Throws ConfigError.
std::vector<GpuSpec> load_gpu_specs(const std::string& config_text);
std::optional<DieSpec> load_die_spec(const std::string& config_text);

// Splits one package into `split_factor` dies with 1/k of every capability
// and k times the cluster size, then applies the per-field multipliers.
// sms must divide evenly; no rounding.
GpuSpec derive_lite_spec(const GpuSpec& base, int split_factor,
                         const LiteOverrides& overrides = {},
                         const std::string& name = "");

// Perimeter-to-area gain of replacing one square die of area A with k square
// dies of area A/k: total perimeter grows by sqrt(k).
double shoreline_bandwidth_ratio(int split_factor);

// Negative-binomial wafer yield; 1.0 for a zero-area or defect-free die,
// strictly decreasing in area and defect density otherwise.
double die_yield(const DieSpec& die);

// Cost of k small dies versus one large die at equal total compute, with raw
// die cost proportional to area: Y(A) / Y(A/k). Below 1 means the split is
// cheaper per unit of compute.
double relative_cost_per_compute(const DieSpec& base_die, int split_factor);

} // namespace roofsim
