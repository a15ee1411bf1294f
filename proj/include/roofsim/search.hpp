#pragma once

#include <optional>
#include <string>
#include <vector>

#include "roofsim/roofline.hpp"

namespace roofsim {

// Feasibility criteria applied to every grid point, both phases at once.
struct Constraints {
    double max_ttft = 1.0;      // seconds
    double max_tbt = 0.050;     // seconds
    long long prompt_len = 1500;
};

void validate_constraints(const Constraints& c);

// Grid of candidate (tp, batch) points. Empty vectors select the default
// quantization: tp = powers of two up to max_gpus that divide the model's
// heads; batch = powers of two up to max_batch_pow2, the exact
// memory-capacity maximum, and (when add_latency_knees) the largest batch
// still inside each latency limit.
struct SweepGrid {
    std::vector<int> tp_values;
    std::vector<long long> batch_values;
    long long max_batch_pow2 = 2048;
    bool add_capacity_knee = true;
    bool add_latency_knees = true;
};

// Evaluation knobs shared by every point of a sweep.
struct SweepOptions {
    long long decode_ctx = 1500;
    EffFactors eff;
    bool overlap_collectives = false;
    bool ignore_network = false;
};

struct GridPoint {
    int tp = 1;
    long long batch = 1;
};

struct FeasiblePoint {
    GridPoint point;
    PhaseResult result;
};

struct RejectedPoint {
    GridPoint point;
    std::string reason;
};

struct BestConfig {
    ClusterConfig cfg;
    PhaseResult result;
    double tput_per_sm = 0.0;
};

// Sweep outcome for one (model, gpu type) pair.
struct GpuSweep {
    std::string gpu_name;
    std::optional<BestConfig> best_prefill;
    std::optional<BestConfig> best_decode;
    std::vector<FeasiblePoint> feasible;
    std::vector<RejectedPoint> infeasible;
    std::string no_feasible_reason;  // set when the feasible set is empty
};

struct ModelSweep {
    std::string model_name;
    std::vector<GpuSweep> gpus;
};

struct SweepResult {
    std::vector<ModelSweep> models;
    Constraints constraints;
    SweepOptions options;

    const ModelSweep* find_model(const std::string& name) const;
};

// Evaluates every grid point for one model on each GPU type, filters by
// TTFT, TBT, and memory capacity, and selects the feasible point with the
// highest tokens/s/SM per phase. Ties break toward smaller tp, then smaller
// batch. Deterministic: canonical (tp asc, batch asc) evaluation order.
ModelSweep sweep(const ModelSpec& model, const std::vector<GpuSpec>& gpu_types,
                 const Constraints& constraints, const SweepGrid& grid = {},
                 const SweepOptions& options = {});

SweepResult sweep_models(const std::vector<ModelSpec>& models,
                         const std::vector<GpuSpec>& gpu_types,
                         const Constraints& constraints,
                         const SweepGrid& grid = {},
                         const SweepOptions& options = {});

// The sweep grid actually used for one (model, gpu) pair, in evaluation
// order; exposed so oracles can replay the exact point set.
std::vector<GridPoint> build_grid(const ModelSpec& model, const GpuSpec& gpu,
                                  const Constraints& constraints,
                                  const SweepGrid& grid,
                                  const SweepOptions& options);

struct ComparisonRow {
    std::string model;
    Phase phase = Phase::Prefill;
    std::string gpu;
    double tput_per_sm = 0.0;     // 0 when no feasible config exists
    double normalized = 0.0;      // vs. the baseline type, same model+phase
    bool feasible = false;
};

// Normalizes each type's best tokens/s/SM to a baseline GPU type,
// per model and phase. Throws if the baseline is absent.
std::vector<ComparisonRow> compare_types(const SweepResult& sweep,
                                         const std::string& baseline);

} // namespace roofsim
