#include "roofsim/search.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace roofsim {

namespace {

ClusterConfig make_config(const GpuSpec& gpu, const GridPoint& p,
                          const Constraints& constraints,
                          const SweepOptions& options) {
    ClusterConfig cfg;
    cfg.gpu = gpu;
    cfg.tp = p.tp;
    cfg.batch = p.batch;
    cfg.prompt_len = constraints.prompt_len;
    cfg.decode_ctx = options.decode_ctx;
    cfg.eff = options.eff;
    cfg.overlap_collectives = options.overlap_collectives;
    cfg.ignore_network = options.ignore_network;
    return cfg;
}

std::string format_seconds(double s) {
    std::ostringstream os;
    os << s * 1e3 << " ms";
    return os.str();
}

// Largest batch in [1, hi] whose metric stays within `limit`. Latency is
// non-decreasing in batch, so binary search applies.
template <typename Metric>
long long latency_knee(Metric metric, double limit, long long hi) {
    if (metric(1) > limit) return 0;
    long long lo = 1;
    while (lo < hi) {
        long long mid = lo + (hi - lo + 1) / 2;
        if (metric(mid) <= limit) lo = mid;
        else hi = mid - 1;
    }
    return lo;
}

} // namespace

void validate_constraints(const Constraints& c) {
    // Zero limits are allowed: they make every config infeasible, which the
    // sweep reports rather than rejects.
    if (c.max_ttft < 0 || c.max_tbt < 0) {
        throw std::invalid_argument("latency limits must be non-negative");
    }
    if (c.prompt_len < 1) {
        throw std::invalid_argument("prompt_len must be >= 1");
    }
}

std::vector<GridPoint> build_grid(const ModelSpec& model, const GpuSpec& gpu,
                                  const Constraints& constraints,
                                  const SweepGrid& grid,
                                  const SweepOptions& options) {
    validate_model_spec(model);
    validate_gpu_spec(gpu);
    validate_constraints(constraints);

    std::vector<int> tps = grid.tp_values;
    if (tps.empty()) {
        for (int tp = 1; tp <= gpu.max_gpus; tp *= 2) {
            if (model.heads % tp == 0) tps.push_back(tp);
        }
    } else {
        tps.erase(std::remove_if(tps.begin(), tps.end(),
                                 [&](int tp) {
                                     return tp < 1 || tp > gpu.max_gpus ||
                                            model.heads % tp != 0;
                                 }),
                  tps.end());
        std::sort(tps.begin(), tps.end());
        tps.erase(std::unique(tps.begin(), tps.end()), tps.end());
    }

    std::vector<GridPoint> points;
    for (int tp : tps) {
        std::set<long long> batches;
        if (!grid.batch_values.empty()) {
            for (long long b : grid.batch_values) {
                if (b >= 1) batches.insert(b);
            }
        } else {
            for (long long b = 1; b <= grid.max_batch_pow2; b *= 2) {
                batches.insert(b);
            }
            if (grid.add_capacity_knee) {
                // Largest batch whose weights + KV still fit one GPU.
                const double w = weight_bytes_per_gpu(model, tp);
                const long long peak_ctx =
                    std::max(constraints.prompt_len, options.decode_ctx);
                const double kv1 = kv_cache_bytes(model, 1, peak_ctx, tp);
                const double room = gpu.mem_capacity_gb * 1e9 - w;
                if (room > 0 && kv1 > 0) {
                    const long long bmax =
                        static_cast<long long>(std::floor(room / kv1));
                    if (bmax >= 1) batches.insert(bmax);
                }
            }
            if (grid.add_latency_knees) {
                // Largest batch inside each latency limit at this tp; the
                // throughput knee usually sits there rather than on a power
                // of two.
                auto eval = [&](long long b) {
                    return evaluate_config(
                        model, make_config(gpu, {tp, b}, constraints, options));
                };
                const long long hi = 4096;
                long long k1 = latency_knee(
                    [&](long long b) { return eval(b).ttft; },
                    constraints.max_ttft, hi);
                if (k1 >= 1) batches.insert(k1);
                long long k2 = latency_knee(
                    [&](long long b) { return eval(b).tbt; },
                    constraints.max_tbt, hi);
                if (k2 >= 1) batches.insert(k2);
            }
        }
        for (long long b : batches) points.push_back({tp, b});
    }
    return points;
}

ModelSweep sweep(const ModelSpec& model, const std::vector<GpuSpec>& gpu_types,
                 const Constraints& constraints, const SweepGrid& grid,
                 const SweepOptions& options) {
    if (gpu_types.empty()) {
        throw std::invalid_argument("sweep: gpu_types is empty");
    }
    validate_constraints(constraints);

    ModelSweep out;
    out.model_name = model.name;
    for (const GpuSpec& gpu : gpu_types) {
        GpuSweep gs;
        gs.gpu_name = gpu.name;
        int rejected_mem = 0, rejected_ttft = 0, rejected_tbt = 0;

        for (const GridPoint& p :
             build_grid(model, gpu, constraints, grid, options)) {
            const ClusterConfig cfg = make_config(gpu, p, constraints, options);
            const PhaseResult res = evaluate_config(model, cfg);

            std::vector<std::string> violations;
            if (!res.fits_memory) {
                ++rejected_mem;
                std::ostringstream os;
                os << "weights+kv " << res.mem_required_gb
                   << " GB exceed capacity " << gpu.mem_capacity_gb << " GB";
                violations.push_back(os.str());
            }
            if (res.ttft > constraints.max_ttft) {
                ++rejected_ttft;
                violations.push_back("ttft " + format_seconds(res.ttft) +
                                     " exceeds " +
                                     format_seconds(constraints.max_ttft));
            }
            if (res.tbt > constraints.max_tbt) {
                ++rejected_tbt;
                violations.push_back("tbt " + format_seconds(res.tbt) +
                                     " exceeds " +
                                     format_seconds(constraints.max_tbt));
            }

            if (!violations.empty()) {
                std::string reason = violations.front();
                for (size_t i = 1; i < violations.size(); ++i) {
                    reason += "; " + violations[i];
                }
                gs.infeasible.push_back({p, std::move(reason)});
                continue;
            }

            gs.feasible.push_back({p, res});
            auto consider = [&](std::optional<BestConfig>& best, double value) {
                if (!best || value > best->tput_per_sm) {
                    best = BestConfig{cfg, res, value};
                }
                // Equal throughput keeps the earlier (smaller tp, then
                // smaller batch) point thanks to canonical grid order.
            };
            consider(gs.best_prefill, res.prefill_tput_per_sm);
            consider(gs.best_decode, res.decode_tput_per_sm);
        }

        if (gs.feasible.empty()) {
            const int total = rejected_mem + rejected_ttft + rejected_tbt;
            std::string binding = "memory capacity";
            int top = rejected_mem;
            if (rejected_ttft > top) { binding = "ttft limit"; top = rejected_ttft; }
            if (rejected_tbt > top) { binding = "tbt limit"; }
            gs.no_feasible_reason =
                total == 0 ? "no valid grid points"
                           : "no feasible config; binding constraint: " + binding;
        }
        out.gpus.push_back(std::move(gs));
    }
    return out;
}

SweepResult sweep_models(const std::vector<ModelSpec>& models,
                         const std::vector<GpuSpec>& gpu_types,
                         const Constraints& constraints, const SweepGrid& grid,
                         const SweepOptions& options) {
    SweepResult out;
    out.constraints = constraints;
    out.options = options;
    for (const ModelSpec& model : models) {
        out.models.push_back(sweep(model, gpu_types, constraints, grid, options));
    }
    return out;
}

const ModelSweep* SweepResult::find_model(const std::string& name) const {
    for (const auto& m : models) {
        if (m.model_name == name) return &m;
    }
    return nullptr;
}

std::vector<ComparisonRow> compare_types(const SweepResult& sweep,
                                         const std::string& baseline) {
    std::vector<ComparisonRow> rows;
    for (const ModelSweep& ms : sweep.models) {
        const GpuSweep* base = nullptr;
        for (const auto& gs : ms.gpus) {
            if (gs.gpu_name == baseline) base = &gs;
        }
        if (base == nullptr) {
            throw std::invalid_argument("compare_types: unknown baseline '" +
                                        baseline + "'");
        }
        for (Phase phase : {Phase::Prefill, Phase::Decode}) {
            const auto& base_best = phase == Phase::Prefill
                                        ? base->best_prefill
                                        : base->best_decode;
            for (const auto& gs : ms.gpus) {
                const auto& best = phase == Phase::Prefill ? gs.best_prefill
                                                           : gs.best_decode;
                ComparisonRow row;
                row.model = ms.model_name;
                row.phase = phase;
                row.gpu = gs.gpu_name;
                row.feasible = best.has_value();
                row.tput_per_sm = best ? best->tput_per_sm : 0.0;
                row.normalized = (best && base_best && base_best->tput_per_sm > 0)
                                     ? best->tput_per_sm / base_best->tput_per_sm
                                     : 0.0;
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

} // namespace roofsim
