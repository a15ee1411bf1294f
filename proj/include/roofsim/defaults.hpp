#pragma once

namespace roofsim {

// Built-in copies of configs/gpus.json and configs/models.json so the CLI
// works from any directory; file arguments override them.

inline constexpr const char* kDefaultGpuConfig = R"json({
  "die": {
    "area_cm2": 8.14,
    "defect_density_per_cm2": 0.1,
    "cluster_alpha": 10.0
  },
  "gpus": [
    {"name": "H100",             "tflops": 2000, "mem_capacity_gb": 80, "mem_bw_gbps": 3352, "net_bw_gbps": 450,   "sms": 132, "max_gpus": 8},
    {"name": "Lite",             "tflops": 500,  "mem_capacity_gb": 20, "mem_bw_gbps": 838,  "net_bw_gbps": 112.5, "sms": 33,  "max_gpus": 32},
    {"name": "Lite+NetBW",       "tflops": 500,  "mem_capacity_gb": 20, "mem_bw_gbps": 838,  "net_bw_gbps": 225,   "sms": 33,  "max_gpus": 32},
    {"name": "Lite+NetBW+FLOPS", "tflops": 550,  "mem_capacity_gb": 20, "mem_bw_gbps": 419,  "net_bw_gbps": 225,   "sms": 33,  "max_gpus": 32},
    {"name": "Lite+MemBW",       "tflops": 500,  "mem_capacity_gb": 20, "mem_bw_gbps": 1675, "net_bw_gbps": 112.5, "sms": 33,  "max_gpus": 32},
    {"name": "Lite+MemBW+NetBW", "tflops": 500,  "mem_capacity_gb": 20, "mem_bw_gbps": 1675, "net_bw_gbps": 225,   "sms": 33,  "max_gpus": 32}
  ]
})json";

inline constexpr const char* kDefaultModelConfig = R"json({
  "models": [
    {
      "name": "llama3-70b",
      "layers": 80, "hidden": 8192, "heads": 64, "kv_heads": 8,
      "head_dim": 128, "ffn_dim": 28672, "vocab": 128256,
      "mlp_kind": "gated", "tied_embeddings": false,
      "bytes_per_param": 2, "bytes_per_act": 2,
      "nominal_params": 70.0e9
    },
    {
      "name": "gpt3-175b",
      "layers": 96, "hidden": 12288, "heads": 96, "kv_heads": 96,
      "head_dim": 128, "ffn_dim": 49152, "vocab": 50257,
      "mlp_kind": "plain", "tied_embeddings": true,
      "bytes_per_param": 1, "bytes_per_act": 1,
      "nominal_params": 175.0e9
    },
    {
      "name": "llama3-405b",
      "layers": 126, "hidden": 16384, "heads": 128, "kv_heads": 8,
      "head_dim": 128, "ffn_dim": 53248, "vocab": 128256,
      "mlp_kind": "gated", "tied_embeddings": false,
      "bytes_per_param": 1, "bytes_per_act": 1,
      "nominal_params": 405.0e9
    }
  ]
})json";

} // namespace roofsim
