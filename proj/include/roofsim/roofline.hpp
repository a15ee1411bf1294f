#pragma once

#include <string>
#include <vector>

#include "roofsim/hardware.hpp"
#include "roofsim/workload.hpp"

namespace roofsim {

enum class Resource { Compute, Memory, Network };

const char* resource_name(Resource r);

// Attainable fraction of each peak. 1.0 = ideal roofline.
struct EffFactors {
    double compute = 1.0;
    double memory = 1.0;
    double network = 1.0;
};

// A candidate deployment of one model instance.
struct ClusterConfig {
    GpuSpec gpu;
    int tp = 1;               // tensor-parallel degree = GPUs per instance
    long long batch = 1;
    long long prompt_len = 1500;
    long long decode_ctx = 1500;  // context at which a decode step is costed
    EffFactors eff;
    // Pipelines collective traffic against the compute/memory stage stream:
    // phase time becomes max(serialized stage time, total network time).
    // Off: stages fully serialize (collectives included).
    bool overlap_collectives = false;
    // Drops all network time; used for scaling studies.
    bool ignore_network = false;
};

// One stage through the roofline: per-resource times and the binding one.
struct StageTime {
    std::string label;
    double t_compute = 0.0;
    double t_memory = 0.0;
    double t_network = 0.0;
    double seconds = 0.0;  // max of the three
    Resource bottleneck = Resource::Compute;
};

struct PhaseBreakdown {
    double seconds = 0.0;  // phase latency under the configured overlap mode
    double serialized_seconds = 0.0;  // sum of per-stage roofline times
    double total_compute = 0.0;       // resource-time sums across stages
    double total_memory = 0.0;
    double total_network = 0.0;
    Resource bottleneck = Resource::Compute;  // largest attributed share
    std::vector<StageTime> stages;
};

struct PhaseResult {
    double ttft = 0.0;  // seconds
    double tbt = 0.0;   // seconds
    double prefill_tput = 0.0;        // prompt tokens/s
    double decode_tput = 0.0;         // generated tokens/s
    double prefill_tput_per_sm = 0.0; // tokens/s/SM
    double decode_tput_per_sm = 0.0;
    bool fits_memory = false;
    double weight_bytes_gpu = 0.0;
    double kv_bytes_gpu = 0.0;
    double mem_required_gb = 0.0;
    PhaseBreakdown prefill;
    PhaseBreakdown decode;
};

// Within-stage overlap: the stage takes as long as its slowest resource.
// Ties attribute compute over memory over network.
StageTime stage_time(const StageCost& cost, const GpuSpec& gpu,
                     const EffFactors& eff = {});

// Stages serialize; `seconds` additionally reflects the overlap mode.
PhaseBreakdown phase_latency(const PhaseWorkload& work, const GpuSpec& gpu,
                             const EffFactors& eff = {},
                             bool overlap_collectives = false,
                             bool ignore_network = false);

// Full evaluation of one (model, cluster) point: both phase latencies,
// throughputs, per-SM efficiency, and the memory-capacity check.
PhaseResult evaluate_config(const ModelSpec& model, const ClusterConfig& cfg);

void validate_cluster_config(const ModelSpec& model, const ClusterConfig& cfg);

} // namespace roofsim
