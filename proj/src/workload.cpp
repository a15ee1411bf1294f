#include "roofsim/workload.hpp"

#include <cmath>
#include <set>

#include <json.hpp>

namespace roofsim {

namespace {

using nlohmann::json;

constexpr const char* kStageQkv = "qkv_proj";
constexpr const char* kStageAttn = "fused_attn";
constexpr const char* kStageOutProj = "out_proj";
constexpr const char* kStageArAttn = "ar_attn";
constexpr const char* kStageMlp = "mlp";
constexpr const char* kStageArMlp = "ar_mlp";
constexpr const char* kStageLmHead = "lm_head";

void check_sharding(const ModelSpec& model, long long batch, int tp) {
    validate_model_spec(model);
    if (tp < 1) throw std::invalid_argument("tp must be >= 1");
    if (batch < 1) throw std::invalid_argument("batch must be >= 1");
    if (model.heads % tp != 0) {
        throw std::invalid_argument("tp " + std::to_string(tp) +
                                    " does not divide attention heads " +
                                    std::to_string(model.heads));
    }
}

struct ShardedDims {
    double q_width;    // per-GPU query projection width, heads/tp * head_dim
    double kv_width;   // per-GPU key or value width, kv_heads/tp * head_dim
    double ffn_width;  // per-GPU MLP inner width
    double q_heads;
    double kv_heads;
};

ShardedDims shard(const ModelSpec& model, int tp) {
    ShardedDims d;
    d.q_heads = static_cast<double>(model.heads) / tp;
    d.kv_heads = static_cast<double>(model.kv_heads) / tp;
    d.q_width = d.q_heads * static_cast<double>(model.head_dim);
    d.kv_width = d.kv_heads * static_cast<double>(model.head_dim);
    d.ffn_width = static_cast<double>(model.ffn_dim) / tp;
    return d;
}

// Shared stage emitter. Prefill and decode differ only in the token count,
// the attention inner loop, and the KV traffic.
PhaseWorkload build_stages(const ModelSpec& model, long long batch,
                           long long seq, long long context_len, int tp,
                           Phase phase) {
    check_sharding(model, batch, tp);
    if (seq < 1) throw std::invalid_argument("sequence length must be >= 1");

    const ShardedDims d = shard(model, tp);
    const double T = static_cast<double>(batch) * static_cast<double>(seq);
    const double hidden = static_cast<double>(model.hidden);
    const double bpp = model.bytes_per_param;
    const double bpa = model.bytes_per_act;
    const double mlp_mats = model.mlp_kind == MlpKind::Gated ? 3.0 : 2.0;
    // Full-width activations live sequence-sharded across the group
    // (Megatron-style sequence parallelism), so per-GPU reads and writes of
    // hidden-sized tensors carry 1/tp of the bytes.
    const double act_io = T * hidden * bpa / tp;

    StageCost qkv{kStageQkv, 0, 0, 0};
    qkv.flops = 2.0 * T * hidden * (d.q_width + 2.0 * d.kv_width);
    qkv.mem_bytes = hidden * (d.q_width + 2.0 * d.kv_width) * bpp + act_io +
                    T * (d.q_width + 2.0 * d.kv_width) * bpa;

    StageCost attn{kStageAttn, 0, 0, 0};
    if (phase == Phase::Prefill) {
        // Causal: half of the full seq^2 score/value work.
        attn.flops = 2.0 * static_cast<double>(batch) *
                     static_cast<double>(seq) * static_cast<double>(seq) *
                     d.q_heads * static_cast<double>(model.head_dim);
        // Fused kernel: reads Q, K, V once, writes the output; no seq^2
        // intermediate touches memory.
        attn.mem_bytes = T * (2.0 * d.q_width + 2.0 * d.kv_width) * bpa;
    } else {
        // One query token against context_len cached keys/values.
        attn.flops = 4.0 * static_cast<double>(batch) * d.q_heads *
                     static_cast<double>(model.head_dim) *
                     static_cast<double>(context_len);
        const double kv_read =
            kv_cache_bytes(model, batch, context_len, tp) / model.layers;
        const double kv_append = T * 2.0 * d.kv_width * bpa;
        attn.mem_bytes = kv_read + kv_append + T * 2.0 * d.q_width * bpa;
    }

    StageCost out_proj{kStageOutProj, 0, 0, 0};
    out_proj.flops = 2.0 * T * d.q_width * hidden;
    out_proj.mem_bytes =
        d.q_width * hidden * bpp + T * d.q_width * bpa + act_io;

    const double ar_bytes = allreduce_bytes_per_gpu(T * hidden, bpa, tp);
    StageCost ar_attn{kStageArAttn, 0, 0, ar_bytes};

    StageCost mlp{kStageMlp, 0, 0, 0};
    mlp.flops = 2.0 * T * hidden * d.ffn_width * mlp_mats;
    mlp.mem_bytes = mlp_mats * hidden * d.ffn_width * bpp + 2.0 * act_io;

    StageCost ar_mlp{kStageArMlp, 0, 0, ar_bytes};

    StageCost lm_head{kStageLmHead, 0, 0, 0};
    const double vocab_width = static_cast<double>(model.vocab) / tp;
    lm_head.flops = 2.0 * T * hidden * vocab_width;
    lm_head.mem_bytes = hidden * vocab_width * bpp + act_io +
                        T * vocab_width * bpa;

    PhaseWorkload work;
    work.phase = phase;
    work.tokens_processed = T;
    work.stages.reserve(static_cast<size_t>(model.layers) * 6 + 1);
    for (int layer = 0; layer < model.layers; ++layer) {
        work.stages.push_back(qkv);
        work.stages.push_back(attn);
        work.stages.push_back(out_proj);
        work.stages.push_back(ar_attn);
        work.stages.push_back(mlp);
        work.stages.push_back(ar_mlp);
    }
    work.stages.push_back(lm_head);
    return work;
}

} // namespace

void validate_model_spec(const ModelSpec& model) {
    const std::string ctx = "model '" + model.name + "'";
    if (model.name.empty()) throw ConfigError("model entry: empty name");
    if (model.layers < 0) throw ConfigError(ctx + ": layers must be >= 0");
    if (model.hidden <= 0) throw ConfigError(ctx + ": hidden must be positive");
    if (model.heads <= 0) throw ConfigError(ctx + ": heads must be positive");
    if (model.kv_heads <= 0)
        throw ConfigError(ctx + ": kv_heads must be positive");
    if (model.heads % model.kv_heads != 0)
        throw ConfigError(ctx + ": heads must be divisible by kv_heads");
    if (model.head_dim <= 0)
        throw ConfigError(ctx + ": head_dim must be positive");
    if (model.ffn_dim <= 0) throw ConfigError(ctx + ": ffn_dim must be positive");
    if (model.vocab <= 0) throw ConfigError(ctx + ": vocab must be positive");
    if (!(model.bytes_per_param > 0))
        throw ConfigError(ctx + ": bytes_per_param must be positive");
    if (!(model.bytes_per_act > 0))
        throw ConfigError(ctx + ": bytes_per_act must be positive");
    if (model.nominal_params > 0) {
        const double computed = param_count(model);
        const double rel =
            std::abs(computed - model.nominal_params) / model.nominal_params;
        if (rel > 0.05) {
            throw ConfigError(ctx + ": computed parameter count " +
                              std::to_string(computed) +
                              " deviates more than 5% from nominal_params " +
                              std::to_string(model.nominal_params));
        }
    }
}

std::vector<ModelSpec> load_model_specs(const std::string& config_text) {
    json doc;
    try {
        doc = json::parse(config_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    if (!doc.contains("models") || !doc["models"].is_array()) {
        throw ConfigError("config: missing 'models' array");
    }
    std::vector<ModelSpec> models;
    std::set<std::string> seen;
    int idx = 0;
    for (const auto& entry : doc["models"]) {
        const std::string ctx = "models[" + std::to_string(idx) + "]";
        if (!entry.is_object()) throw ConfigError(ctx + ": expected an object");
        ModelSpec m;
        if (!entry.contains("name") || !entry["name"].is_string()) {
            throw ConfigError(ctx + ": missing string field 'name'");
        }
        m.name = entry["name"].get<std::string>();
        auto num = [&](const char* field, bool required, double fallback) {
            if (!entry.contains(field)) {
                if (required)
                    throw ConfigError(ctx + ": missing field '" +
                                      std::string(field) + "'");
                return fallback;
            }
            if (!entry[field].is_number())
                throw ConfigError(ctx + ": field '" + std::string(field) +
                                  "' must be a number");
            return entry[field].get<double>();
        };
        m.layers = static_cast<int>(num("layers", true, 0));
        m.hidden = static_cast<long long>(num("hidden", true, 0));
        m.heads = static_cast<int>(num("heads", true, 0));
        m.kv_heads = static_cast<int>(num("kv_heads", true, 0));
        m.head_dim = static_cast<long long>(
            num("head_dim", false,
                m.heads > 0 ? static_cast<double>(m.hidden) / m.heads : 0));
        m.ffn_dim = static_cast<long long>(num("ffn_dim", true, 0));
        m.vocab = static_cast<long long>(num("vocab", true, 0));
        m.bytes_per_param = num("bytes_per_param", false, 2.0);
        m.bytes_per_act = num("bytes_per_act", false, 2.0);
        m.nominal_params = num("nominal_params", false, 0.0);
        if (entry.contains("mlp_kind")) {
            const std::string kind = entry["mlp_kind"].get<std::string>();
            if (kind == "gated") m.mlp_kind = MlpKind::Gated;
            else if (kind == "plain") m.mlp_kind = MlpKind::Plain;
            else
                throw ConfigError(ctx +
                                  ": mlp_kind must be 'gated' or 'plain'");
        }
        if (entry.contains("tied_embeddings")) {
            if (!entry["tied_embeddings"].is_boolean())
                throw ConfigError(ctx + ": tied_embeddings must be a boolean");
            m.tied_embeddings = entry["tied_embeddings"].get<bool>();
        }
        validate_model_spec(m);
        if (!seen.insert(m.name).second) {
            throw ConfigError("model '" + m.name + "': duplicate name");
        }
        models.push_back(std::move(m));
        ++idx;
    }
    if (models.empty()) throw ConfigError("config: 'models' array is empty");
    return models;
}

double param_count(const ModelSpec& model) {
    const double hidden = static_cast<double>(model.hidden);
    const double hd = static_cast<double>(model.head_dim);
    const double q = static_cast<double>(model.heads) * hd;
    const double kv = static_cast<double>(model.kv_heads) * hd;
    const double attn = hidden * q + 2.0 * hidden * kv + q * hidden;
    const double mlp_mats = model.mlp_kind == MlpKind::Gated ? 3.0 : 2.0;
    const double mlp = mlp_mats * hidden * static_cast<double>(model.ffn_dim);
    const double emb_mats = model.tied_embeddings ? 1.0 : 2.0;
    const double emb = emb_mats * static_cast<double>(model.vocab) * hidden;
    return static_cast<double>(model.layers) * (attn + mlp) + emb;
}

double allreduce_bytes_per_gpu(double elements, double bytes_per_elem,
                               int tp) {
    if (tp < 1) throw std::invalid_argument("allreduce: tp must be >= 1");
    if (elements < 0 || bytes_per_elem < 0) {
        throw std::invalid_argument("allreduce: payload must be non-negative");
    }
    return 2.0 * static_cast<double>(tp - 1) / static_cast<double>(tp) *
           elements * bytes_per_elem;
}

double kv_cache_bytes(const ModelSpec& model, long long batch,
                      long long context_len, int tp) {
    check_sharding(model, batch, tp);
    if (context_len < 0)
        throw std::invalid_argument("context_len must be >= 0");
    const double kv_per_gpu = static_cast<double>(model.kv_heads) / tp;
    return 2.0 * model.layers * kv_per_gpu *
           static_cast<double>(model.head_dim) *
           static_cast<double>(context_len) * static_cast<double>(batch) *
           model.bytes_per_act;
}

double weight_bytes_per_gpu(const ModelSpec& model, int tp) {
    validate_model_spec(model);
    if (tp < 1) throw std::invalid_argument("tp must be >= 1");
    return param_count(model) * model.bytes_per_param / tp;
}

PhaseWorkload prefill_stage_costs(const ModelSpec& model, long long batch,
                                  long long seq, int tp) {
    return build_stages(model, batch, seq, /*context_len=*/seq, tp,
                        Phase::Prefill);
}

PhaseWorkload decode_stage_costs(const ModelSpec& model, long long batch,
                                 long long context_len, int tp) {
    if (context_len < 1)
        throw std::invalid_argument("context_len must be >= 1");
    return build_stages(model, batch, /*seq=*/1, context_len, tp,
                        Phase::Decode);
}

} // namespace roofsim
