#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "roofsim/defaults.hpp"
#include "roofsim/hardware.hpp"
#include "roofsim/report.hpp"
#include "roofsim/search.hpp"

namespace fs = std::filesystem;
using namespace roofsim;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;       // bad flags or config
constexpr int kExitInfeasible = 2;  // valid inputs, no feasible config

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

template <typename T>
const T* find_named(const std::vector<T>& items, const std::string& name) {
    for (const T& item : items) {
        if (lower(item.name) == lower(name)) return &item;
    }
    return nullptr;
}

std::vector<std::string> split_list(const std::string& csv) {
    std::vector<std::string> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

struct CommonInputs {
    std::vector<GpuSpec> gpus;
    std::vector<ModelSpec> models;
};

CommonInputs load_inputs(const std::string& gpus_file,
                         const std::string& models_file) {
    CommonInputs in;
    in.gpus = load_gpu_specs(gpus_file.empty() ? kDefaultGpuConfig
                                               : read_file(gpus_file));
    in.models = load_model_specs(models_file.empty() ? kDefaultModelConfig
                                                     : read_file(models_file));
    return in;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write file: " + path.string());
    out << content;
}

int run_sweep(const std::string& gpus_file, const std::string& models_file,
              const std::string& model_list, long long prompt_len,
              long long decode_ctx, double max_ttft, double max_tbt,
              const std::string& out_dir, const std::string& format,
              const std::string& normalize, bool overlap) {
    CommonInputs in = load_inputs(gpus_file, models_file);

    std::vector<ModelSpec> models;
    if (model_list.empty()) {
        models = in.models;
    } else {
        for (const std::string& name : split_list(model_list)) {
            const ModelSpec* m = find_named(in.models, name);
            if (!m) throw ConfigError("unknown model: " + name);
            models.push_back(*m);
        }
    }

    std::optional<std::string> baseline;
    if (!normalize.empty()) {
        const GpuSpec* g = find_named(in.gpus, normalize);
        if (!g) throw ConfigError("unknown gpu for --normalize: " + normalize);
        baseline = g->name;
    }

    Constraints constraints;
    constraints.max_ttft = max_ttft;
    constraints.max_tbt = max_tbt;
    constraints.prompt_len = prompt_len;

    SweepOptions options;
    options.decode_ctx = decode_ctx;
    options.overlap_collectives = overlap;

    const SweepResult result =
        sweep_models(models, in.gpus, constraints, SweepGrid{}, options);

    fs::create_directories(out_dir);
    const bool want_csv = format == "csv" || format == "both";
    const bool want_chart = format == "chart" || format == "both";
    if (want_csv) {
        write_file(fs::path(out_dir) / "sweep.csv",
                   emit_table(result, TableFormat::Csv));
        write_file(fs::path(out_dir) / "sweep.json",
                   emit_table(result, TableFormat::Json));
    }
    if (want_chart) {
        write_file(fs::path(out_dir) / "prefill.svg",
                   emit_barchart(chart_from_sweep(result, Phase::Prefill,
                                                  baseline)));
        write_file(fs::path(out_dir) / "decode.svg",
                   emit_barchart(chart_from_sweep(result, Phase::Decode,
                                                  baseline)));
    }

    std::cout << emit_table(result, TableFormat::Csv);
    if (baseline) {
        std::cout << "\nnormalized tokens/s/SM (baseline " << *baseline
                  << "):\nmodel,phase,gpu,normalized\n";
        for (const ComparisonRow& row : compare_types(result, *baseline)) {
            std::cout << row.model << ','
                      << (row.phase == Phase::Prefill ? "prefill" : "decode")
                      << ',' << row.gpu << ','
                      << (row.feasible ? format_double(row.normalized) : "n/a")
                      << "\n";
        }
    }

    bool any_infeasible_type = false;
    for (const ModelSweep& ms : result.models) {
        for (const GpuSweep& gs : ms.gpus) {
            if (gs.feasible.empty()) {
                any_infeasible_type = true;
                std::cerr << "no feasible config for " << gs.gpu_name << " on "
                          << ms.model_name << " (" << gs.no_feasible_reason
                          << ")\n";
            }
        }
    }
    return any_infeasible_type ? kExitInfeasible : kExitOk;
}

int run_eval(const std::string& gpus_file, const std::string& models_file,
             const std::string& model_name, const std::string& gpu_name,
             int tp, long long batch, long long prompt_len,
             long long decode_ctx, double max_ttft, double max_tbt,
             bool overlap) {
    CommonInputs in = load_inputs(gpus_file, models_file);
    const ModelSpec* model = find_named(in.models, model_name);
    if (!model) throw ConfigError("unknown model: " + model_name);
    const GpuSpec* gpu = find_named(in.gpus, gpu_name);
    if (!gpu) throw ConfigError("unknown gpu: " + gpu_name);

    ClusterConfig cfg;
    cfg.gpu = *gpu;
    cfg.tp = tp;
    cfg.batch = batch;
    cfg.prompt_len = prompt_len;
    cfg.decode_ctx = decode_ctx;
    cfg.overlap_collectives = overlap;

    const PhaseResult res = evaluate_config(*model, cfg);
    std::cout << model->name << " on " << gpu->name << " (tp " << tp
              << ", batch " << batch << ")\n"
              << explain(res);

    std::vector<std::string> violations;
    if (!res.fits_memory) {
        violations.push_back("weights+kv " + format_double(res.mem_required_gb) +
                             " GB exceed memory capacity " +
                             format_double(gpu->mem_capacity_gb) + " GB");
    }
    if (res.ttft > max_ttft) {
        violations.push_back("ttft " + format_double(res.ttft) +
                             " s exceeds " + format_double(max_ttft) + " s");
    }
    if (res.tbt > max_tbt) {
        violations.push_back("tbt " + format_double(res.tbt) + " s exceeds " +
                             format_double(max_tbt) + " s");
    }
    if (!violations.empty()) {
        for (const std::string& v : violations) {
            std::cout << "infeasible: " << v << "\n";
        }
        return kExitInfeasible;
    }
    std::cout << "feasible\n";
    return kExitOk;
}

int run_economics(double area, double defect_density, double alpha,
                  int split) {
    DieSpec die{area, defect_density, alpha};
    validate_die_spec(die);
    if (split < 1) throw ConfigError("--split must be >= 1");

    DieSpec split_die = die;
    split_die.area_cm2 = die.area_cm2 / split;

    const double y_full = die_yield(die);
    const double y_split = die_yield(split_die);
    std::cout << "die area " << format_double(die.area_cm2)
              << " cm2, defect density "
              << format_double(die.defect_density_per_cm2)
              << " /cm2, alpha " << format_double(die.cluster_alpha)
              << ", split " << split << "\n";
    std::cout << "yield at full area:    " << format_double(y_full) << "\n";
    std::cout << "yield at 1/" << split
              << " area:    " << format_double(y_split) << "\n";
    std::cout << "yield ratio:           " << format_double(y_split / y_full)
              << "\n";
    const double cost = relative_cost_per_compute(die, split);
    std::cout << "cost per compute:      " << format_double(cost) << " ("
              << format_double((1.0 - cost) * 100.0) << "% reduction)\n";
    std::cout << "shoreline bw ratio:    "
              << format_double(shoreline_bandwidth_ratio(split)) << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Roofline simulator for LLM inference on GPU clusters"};
    app.require_subcommand(1);

    // Shared flags; every flag can also come from ROOFSIM_* environment
    // variables (explicit flags win).
    std::string gpus_file, models_file;
    std::string model_list;
    long long prompt_len = 1500, decode_ctx = 1500;
    double max_ttft = 1.0, max_tbt = 0.05;
    bool overlap = true;

    auto* sweep_cmd = app.add_subcommand(
        "sweep", "Sweep batch size and GPU count per type; report the best "
                 "tokens/s/SM configurations");
    std::string out_dir = "out", format = "both", normalize;
    sweep_cmd->add_option("--models", model_list,
                          "Comma-separated model names (default: all)")
        ->envname("ROOFSIM_MODELS");
    sweep_cmd->add_option("--gpus", gpus_file, "GPU spec file (JSON)")
        ->envname("ROOFSIM_GPUS");
    sweep_cmd->add_option("--model-config", models_file,
                          "Model spec file (JSON)")
        ->envname("ROOFSIM_MODEL_CONFIG");
    sweep_cmd->add_option("--prompt-len", prompt_len, "Prompt tokens")
        ->envname("ROOFSIM_PROMPT_LEN");
    sweep_cmd->add_option("--decode-ctx", decode_ctx,
                          "Context length for decode costing")
        ->envname("ROOFSIM_DECODE_CTX");
    sweep_cmd->add_option("--max-ttft", max_ttft, "TTFT limit, seconds")
        ->envname("ROOFSIM_MAX_TTFT");
    sweep_cmd->add_option("--max-tbt", max_tbt, "TBT limit, seconds")
        ->envname("ROOFSIM_MAX_TBT");
    sweep_cmd->add_option("--out", out_dir, "Output directory")
        ->envname("ROOFSIM_OUT");
    sweep_cmd->add_option("--format", format, "csv | chart | both")
        ->check(CLI::IsMember({"csv", "chart", "both"}))
        ->envname("ROOFSIM_FORMAT");
    sweep_cmd->add_option("--normalize", normalize,
                          "Baseline GPU type for normalized output")
        ->envname("ROOFSIM_NORMALIZE");
    sweep_cmd->add_flag("--overlap,!--no-overlap", overlap,
                        "Pipeline collectives against compute (default on)")
        ->envname("ROOFSIM_OVERLAP");

    auto* eval_cmd = app.add_subcommand(
        "eval", "Evaluate a single (model, gpu, tp, batch) configuration");
    std::string eval_model, eval_gpu;
    int eval_tp = 1;
    long long eval_batch = 1;
    eval_cmd->add_option("--model", eval_model, "Model name")
        ->required()
        ->envname("ROOFSIM_MODEL");
    eval_cmd->add_option("--gpu", eval_gpu, "GPU type name")
        ->required()
        ->envname("ROOFSIM_GPU");
    eval_cmd->add_option("--tp", eval_tp, "Tensor-parallel degree")
        ->envname("ROOFSIM_TP");
    eval_cmd->add_option("--batch", eval_batch, "Batch size")
        ->envname("ROOFSIM_BATCH");
    eval_cmd->add_option("--gpus", gpus_file, "GPU spec file (JSON)")
        ->envname("ROOFSIM_GPUS");
    eval_cmd->add_option("--model-config", models_file,
                         "Model spec file (JSON)")
        ->envname("ROOFSIM_MODEL_CONFIG");
    eval_cmd->add_option("--prompt-len", prompt_len, "Prompt tokens")
        ->envname("ROOFSIM_PROMPT_LEN");
    eval_cmd->add_option("--decode-ctx", decode_ctx,
                         "Context length for decode costing")
        ->envname("ROOFSIM_DECODE_CTX");
    eval_cmd->add_option("--max-ttft", max_ttft, "TTFT limit, seconds")
        ->envname("ROOFSIM_MAX_TTFT");
    eval_cmd->add_option("--max-tbt", max_tbt, "TBT limit, seconds")
        ->envname("ROOFSIM_MAX_TBT");
    eval_cmd->add_flag("--overlap,!--no-overlap", overlap,
                       "Pipeline collectives against compute (default on)")
        ->envname("ROOFSIM_OVERLAP");

    auto* econ_cmd = app.add_subcommand(
        "economics", "Die yield, cost per compute, and shoreline scaling");
    double area = 8.14, defect_density = 0.1, alpha = 10.0;
    int split = 4;
    econ_cmd->add_option("--area", area, "Die area, cm^2")
        ->envname("ROOFSIM_AREA");
    econ_cmd->add_option("--defect-density", defect_density,
                         "Defects per cm^2")
        ->envname("ROOFSIM_DEFECT_DENSITY");
    econ_cmd->add_option("--alpha", alpha, "Defect clustering parameter")
        ->envname("ROOFSIM_ALPHA");
    econ_cmd->add_option("--split", split, "Package split factor")
        ->envname("ROOFSIM_SPLIT");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (sweep_cmd->parsed()) {
            return run_sweep(gpus_file, models_file, model_list, prompt_len,
                             decode_ctx, max_ttft, max_tbt, out_dir, format,
                             normalize, overlap);
        }
        if (eval_cmd->parsed()) {
            return run_eval(gpus_file, models_file, eval_model, eval_gpu,
                            eval_tp, eval_batch, prompt_len, decode_ctx,
                            max_ttft, max_tbt, overlap);
        }
        if (econ_cmd->parsed()) {
            return run_economics(area, defect_density, alpha, split);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
