#include "roofsim/roofline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace roofsim {

const char* resource_name(Resource r) {
    switch (r) {
        case Resource::Compute: return "compute";
        case Resource::Memory: return "memory";
        case Resource::Network: return "network";
    }
    return "compute";
}

namespace {

void validate_eff(const EffFactors& eff) {
    auto ok = [](double v) { return v > 0.0 && v <= 1.0; };
    if (!ok(eff.compute) || !ok(eff.memory) || !ok(eff.network)) {
        throw std::invalid_argument("efficiency factors must be in (0, 1]");
    }
}

} // namespace

StageTime stage_time(const StageCost& cost, const GpuSpec& gpu,
                     const EffFactors& eff) {
    validate_gpu_spec(gpu);
    validate_eff(eff);
    if (cost.flops < 0 || cost.mem_bytes < 0 || cost.net_bytes < 0) {
        throw std::invalid_argument("stage '" + cost.label +
                                    "': negative resource demand");
    }
    StageTime t;
    t.label = cost.label;
    t.t_compute = cost.flops / (gpu.flops_per_s() * eff.compute);
    t.t_memory = cost.mem_bytes / (gpu.mem_bytes_per_s() * eff.memory);
    t.t_network = cost.net_bytes / (gpu.net_bytes_per_s() * eff.network);
    t.seconds = std::max({t.t_compute, t.t_memory, t.t_network});
    // Ties break compute > memory > network.
    if (t.t_compute >= t.t_memory && t.t_compute >= t.t_network) {
        t.bottleneck = Resource::Compute;
    } else if (t.t_memory >= t.t_network) {
        t.bottleneck = Resource::Memory;
    } else {
        t.bottleneck = Resource::Network;
    }
    return t;
}

PhaseBreakdown phase_latency(const PhaseWorkload& work, const GpuSpec& gpu,
                             const EffFactors& eff, bool overlap_collectives,
                             bool ignore_network) {
    if (work.stages.empty()) {
        throw std::invalid_argument("phase workload has no stages");
    }
    PhaseBreakdown out;
    out.stages.reserve(work.stages.size());
    double serial_no_net = 0.0;  // stage maxes with network excluded
    for (const auto& cost : work.stages) {
        StageTime t = stage_time(cost, gpu, eff);
        if (ignore_network) {
            t.t_network = 0.0;
            t.seconds = std::max(t.t_compute, t.t_memory);
            t.bottleneck = t.t_compute >= t.t_memory ? Resource::Compute
                                                     : Resource::Memory;
        }
        out.total_compute += t.t_compute;
        out.total_memory += t.t_memory;
        out.total_network += t.t_network;
        out.serialized_seconds += t.seconds;
        serial_no_net += std::max(t.t_compute, t.t_memory);
        out.stages.push_back(std::move(t));
    }
    out.seconds = overlap_collectives
                      ? std::max(serial_no_net, out.total_network)
                      : out.serialized_seconds;
    // Phase-level attribution: the resource holding the largest serialized
    // share, same tie order as stages.
    double share[3] = {0.0, 0.0, 0.0};
    for (const auto& t : out.stages) {
        share[static_cast<int>(t.bottleneck)] += t.seconds;
    }
    out.bottleneck = Resource::Compute;
    if (share[1] > share[static_cast<int>(out.bottleneck)])
        out.bottleneck = Resource::Memory;
    if (share[2] > share[static_cast<int>(out.bottleneck)])
        out.bottleneck = Resource::Network;
    return out;
}

void validate_cluster_config(const ModelSpec& model, const ClusterConfig& cfg) {
    validate_model_spec(model);
    validate_gpu_spec(cfg.gpu);
    validate_eff(cfg.eff);
    if (cfg.tp < 1 || cfg.tp > cfg.gpu.max_gpus) {
        throw std::invalid_argument("tp " + std::to_string(cfg.tp) +
                                    " outside [1, max_gpus=" +
                                    std::to_string(cfg.gpu.max_gpus) + "] for " +
                                    cfg.gpu.name);
    }
    if (model.heads % cfg.tp != 0) {
        throw std::invalid_argument("tp " + std::to_string(cfg.tp) +
                                    " does not divide attention heads " +
                                    std::to_string(model.heads));
    }
    if (cfg.batch < 1) throw std::invalid_argument("batch must be >= 1");
    if (cfg.prompt_len < 1)
        throw std::invalid_argument("prompt_len must be >= 1");
    if (cfg.decode_ctx < 1)
        throw std::invalid_argument("decode_ctx must be >= 1");
}

PhaseResult evaluate_config(const ModelSpec& model, const ClusterConfig& cfg) {
    validate_cluster_config(model, cfg);

    const PhaseWorkload prefill =
        prefill_stage_costs(model, cfg.batch, cfg.prompt_len, cfg.tp);
    const PhaseWorkload decode =
        decode_stage_costs(model, cfg.batch, cfg.decode_ctx, cfg.tp);

    PhaseResult res;
    res.prefill = phase_latency(prefill, cfg.gpu, cfg.eff,
                                cfg.overlap_collectives, cfg.ignore_network);
    res.decode = phase_latency(decode, cfg.gpu, cfg.eff,
                               cfg.overlap_collectives, cfg.ignore_network);
    res.ttft = res.prefill.seconds;
    res.tbt = res.decode.seconds;

    const double n_sms = static_cast<double>(cfg.tp) * cfg.gpu.sms;
    res.prefill_tput =
        static_cast<double>(cfg.batch) * cfg.prompt_len / res.ttft;
    res.decode_tput = static_cast<double>(cfg.batch) / res.tbt;
    res.prefill_tput_per_sm = res.prefill_tput / n_sms;
    res.decode_tput_per_sm = res.decode_tput / n_sms;

    // Capacity: resident weights plus the KV cache at its peak context.
    res.weight_bytes_gpu = weight_bytes_per_gpu(model, cfg.tp);
    const long long peak_ctx = std::max(cfg.prompt_len, cfg.decode_ctx);
    res.kv_bytes_gpu = kv_cache_bytes(model, cfg.batch, peak_ctx, cfg.tp);
    res.mem_required_gb = (res.weight_bytes_gpu + res.kv_bytes_gpu) / 1e9;
    res.fits_memory = res.mem_required_gb <= cfg.gpu.mem_capacity_gb;
    return res;
}

} // namespace roofsim
