#pragma once

#include <string>
#include <vector>

#include "roofsim/hardware.hpp"

namespace roofsim {

enum class MlpKind { Gated, Plain };

// Transformer architecture constants. Costs are derived analytically from
// these fields; nothing here is measured.
struct ModelSpec {
    std::string name;
    int layers = 0;
    long long hidden = 0;
    int heads = 0;
    int kv_heads = 0;        // grouped-query attention; == heads for MHA
    long long head_dim = 0;  // hidden / heads unless overridden
    long long ffn_dim = 0;   // MLP inner width
    long long vocab = 0;
    double bytes_per_param = 2.0;  // weight datatype width
    double bytes_per_act = 2.0;    // activation / KV datatype width
    MlpKind mlp_kind = MlpKind::Gated;
    bool tied_embeddings = false;  // one matrix shared by embedding and LM head
    double nominal_params = 0.0;   // advertised size; 0 disables the self-check
};

// Resource demand of one execution stage, per GPU.
struct StageCost {
    std::string label;
    double flops = 0.0;
    double mem_bytes = 0.0;  // HBM traffic: weights + activations in/out
    double net_bytes = 0.0;  // network injection; nonzero only for collectives
};

enum class Phase { Prefill, Decode };

struct PhaseWorkload {
    Phase phase = Phase::Prefill;
    std::vector<StageCost> stages;  // in execution order
    double tokens_processed = 0.0;  // batch*seq for prefill, batch for decode
};

void validate_model_spec(const ModelSpec& model);

// Parses {"models": [...]}; accepts mlp_kind: "gated"|"plain". Validates the
// parameter count against nominal_params (within 5%) when present.
std::vector<ModelSpec> load_model_specs(const std::string& config_text);

// Total weights: attention (QKV with GQA + output) + MLP + embedding/LM head.
// Norm parameters and biases are ignored (sub-0.1%).
double param_count(const ModelSpec& model);

// Ring all-reduce: each participant injects 2*(tp-1)/tp of the payload.
double allreduce_bytes_per_gpu(double elements, double bytes_per_elem, int tp);

// Per-GPU KV cache footprint at a given context length. KV heads shard
// evenly across tp (ideal sharding; fractional per-GPU share beyond
// kv_heads, matching the rest of the per-GPU accounting).
double kv_cache_bytes(const ModelSpec& model, long long batch,
                      long long context_len, int tp);

// Weights resident per GPU, including the embedding table(s).
double weight_bytes_per_gpu(const ModelSpec& model, int tp);

// Per-layer stage sequence: QKV projection, fused attention (no seq^2 memory
// traffic), output projection, all-reduce, MLP, all-reduce; then one LM-head
// stage over all positions. Attention FLOPs are causal (seq^2 terms halved).
PhaseWorkload prefill_stage_costs(const ModelSpec& model, long long batch,
                                  long long seq, int tp);

// Same stage structure at seq = 1; fused attention additionally reads the
// full KV cache at context_len and appends one entry.
PhaseWorkload decode_stage_costs(const ModelSpec& model, long long batch,
                                 long long context_len, int tp);

} // namespace roofsim
