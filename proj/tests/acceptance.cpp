// Acceptance suite: one line per criterion, exit code = number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "roofsim/defaults.hpp"
#include "roofsim/report.hpp"
#include "roofsim/search.hpp"

using namespace roofsim;

namespace {

struct Harness {
    int failures = 0;

    void criterion(int number, const std::string& title,
                   const std::function<void(std::vector<std::string>&)>& body,
                   double budget_seconds) {
        std::vector<std::string> problems;
        const auto start = std::chrono::steady_clock::now();
        try {
            body(problems);
        } catch (const std::exception& e) {
            problems.push_back(std::string("exception: ") + e.what());
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          start)
                .count();
        if (elapsed > budget_seconds) {
            char buf[128];
            std::snprintf(buf, sizeof(buf),
                          "exceeded time budget: %.2f s > %.0f s", elapsed,
                          budget_seconds);
            problems.push_back(buf);
        }
        if (problems.empty()) {
            std::printf("[PASS] criterion %d: %s (%.2f s)\n", number,
                        title.c_str(), elapsed);
        } else {
            ++failures;
            std::printf("[FAIL] criterion %d: %s (%.2f s)\n", number,
                        title.c_str(), elapsed);
            for (const auto& p : problems) {
                std::printf("       - %s\n", p.c_str());
            }
        }
        std::fflush(stdout);
    }
};

void expect(std::vector<std::string>& problems, bool ok,
            const std::string& msg) {
    if (!ok) problems.push_back(msg);
}

std::string fmt(double v) { return format_double(v); }

const GpuSpec* find_gpu(const std::vector<GpuSpec>& gpus,
                        const std::string& name) {
    for (const auto& g : gpus) {
        if (g.name == name) return &g;
    }
    return nullptr;
}

// Best tokens/s/SM per (model, gpu) for one phase; empty optional when no
// feasible config exists.
std::optional<double> best_per_sm(const SweepResult& sweep,
                                  const std::string& model,
                                  const std::string& gpu, Phase phase) {
    const ModelSweep* ms = sweep.find_model(model);
    if (!ms) return std::nullopt;
    for (const GpuSweep& gs : ms->gpus) {
        if (gs.gpu_name != gpu) continue;
        const auto& best =
            phase == Phase::Prefill ? gs.best_prefill : gs.best_decode;
        if (!best) return std::nullopt;
        return best->tput_per_sm;
    }
    return std::nullopt;
}

struct Ordered {
    std::vector<std::string>& problems;
    const SweepResult& sweep;
    Phase phase;

    std::optional<double> get(const std::string& model,
                              const std::string& gpu) const {
        auto v = best_per_sm(sweep, model, gpu, phase);
        if (!v) {
            problems.push_back("no feasible best for " + model + " on " + gpu);
        }
        return v;
    }
};

} // namespace

int main() {
    const std::vector<GpuSpec> gpus = load_gpu_specs(kDefaultGpuConfig);
    const std::vector<ModelSpec> models = load_model_specs(kDefaultModelConfig);
    Harness h;

    // ------------------------------------------------------------------
    h.criterion(1, "GPU table fidelity and package-split derivation",
                [&](std::vector<std::string>& problems) {
        expect(problems, gpus.size() == 6,
               "expected 6 shipped GPU rows, got " +
                   std::to_string(gpus.size()));
        struct Row {
            const char* name;
            double tflops, cap, mem_bw, net_bw;
            int sms, max_gpus;
        };
        const Row table[] = {
            {"H100", 2000, 80, 3352, 450, 132, 8},
            {"Lite", 500, 20, 838, 112.5, 33, 32},
            {"Lite+NetBW", 500, 20, 838, 225, 33, 32},
            {"Lite+NetBW+FLOPS", 550, 20, 419, 225, 33, 32},
            {"Lite+MemBW", 500, 20, 1675, 112.5, 33, 32},
            {"Lite+MemBW+NetBW", 500, 20, 1675, 225, 33, 32},
        };
        for (const Row& row : table) {
            const GpuSpec* g = find_gpu(gpus, row.name);
            if (!g) {
                problems.push_back(std::string("missing row ") + row.name);
                continue;
            }
            const bool exact = g->tflops == row.tflops &&
                               g->mem_capacity_gb == row.cap &&
                               g->mem_bw_gbps == row.mem_bw &&
                               g->net_bw_gbps == row.net_bw &&
                               g->sms == row.sms && g->max_gpus == row.max_gpus;
            expect(problems, exact,
                   std::string("row mismatch for ") + row.name);
        }
        const GpuSpec* h100 = find_gpu(gpus, "H100");
        const GpuSpec* lite = find_gpu(gpus, "Lite");
        if (h100 && lite) {
            const GpuSpec derived = derive_lite_spec(*h100, 4);
            const bool eq = derived.tflops == lite->tflops &&
                            derived.mem_capacity_gb == lite->mem_capacity_gb &&
                            derived.mem_bw_gbps == lite->mem_bw_gbps &&
                            derived.net_bw_gbps == lite->net_bw_gbps &&
                            derived.sms == lite->sms &&
                            derived.max_gpus == lite->max_gpus;
            expect(problems, eq,
                   "derive_lite_spec(H100, 4) does not equal the Lite row");
        }
    }, 1.0);

    // ------------------------------------------------------------------
    h.criterion(2, "die economics: yield ratio, cost reduction, shoreline",
                [&](std::vector<std::string>& problems) {
        const DieSpec die{};  // documented defaults
        DieSpec quarter = die;
        quarter.area_cm2 /= 4.0;
        const double ratio = die_yield(quarter) / die_yield(die);
        expect(problems, std::abs(ratio - 1.8) <= 0.05,
               "yield ratio at split 4 = " + fmt(ratio) +
                   ", expected 1.8 +/- 0.05");
        const double cost = relative_cost_per_compute(die, 4);
        const double reduction = 1.0 - cost;
        expect(problems, reduction > 0.40 && reduction < 0.50,
               "cost reduction = " + fmt(reduction * 100) +
                   "%, expected within (40%, 50%)");
        expect(problems, shoreline_bandwidth_ratio(4) == 2.0,
               "shoreline ratio at split 4 must be exactly 2.0");
    }, 1.0);

    // ------------------------------------------------------------------
    h.criterion(3, "scale equivalence of quarter GPUs at 4x parallelism",
                [&](std::vector<std::string>& problems) {
        const GpuSpec* h100 = find_gpu(gpus, "H100");
        if (!h100) {
            problems.push_back("missing H100");
            return;
        }
        const GpuSpec lite = derive_lite_spec(*h100, 4);
        for (const ModelSpec& m : models) {
            for (int k : {1, 2, 4, 8}) {
                for (long long batch : {1LL, 16LL}) {
                    ClusterConfig base;
                    base.gpu = *h100;
                    base.tp = k;
                    base.batch = batch;
                    base.ignore_network = true;
                    ClusterConfig quad = base;
                    quad.gpu = lite;
                    quad.tp = 4 * k;
                    const PhaseResult rb = evaluate_config(m, base);
                    const PhaseResult rq = evaluate_config(m, quad);
                    const double dp =
                        std::abs(rq.prefill_tput_per_sm -
                                 rb.prefill_tput_per_sm) /
                        rb.prefill_tput_per_sm;
                    const double dd = std::abs(rq.decode_tput_per_sm -
                                               rb.decode_tput_per_sm) /
                                      rb.decode_tput_per_sm;
                    expect(problems, dp <= 1e-9,
                           m.name + " k=" + std::to_string(k) +
                               " prefill rel diff " + fmt(dp));
                    expect(problems, dd <= 1e-9,
                           m.name + " k=" + std::to_string(k) +
                               " decode rel diff " + fmt(dd));
                }
            }
        }
    }, 10.0);

    // Case-study sweep shared by criteria 4-6: shipped configs, Splitwise
    // limits, collectives pipelined against compute.
    Constraints constraints;
    SweepOptions options;
    options.overlap_collectives = true;
    SweepResult study;

    // ------------------------------------------------------------------
    h.criterion(4, "prefill orderings at best-per-type configurations",
                [&](std::vector<std::string>& problems) {
        study = sweep_models(models, gpus, constraints, {}, options);
        Ordered ord{problems, study, Phase::Prefill};

        // (a) small model: quarter GPUs keep pace within 15%.
        auto h100_70 = ord.get("llama3-70b", "H100");
        auto lite_70 = ord.get("llama3-70b", "Lite");
        if (h100_70 && lite_70) {
            const double rel = std::abs(*lite_70 - *h100_70) / *h100_70;
            expect(problems, rel <= 0.15,
                   "(a) llama3-70b Lite " + fmt(*lite_70) + " vs H100 " +
                       fmt(*h100_70) + ": off by " + fmt(rel * 100) + "%");
        }

        // (b) largest model: collectives drag the quarter-GPU cluster down.
        auto h100_405 = ord.get("llama3-405b", "H100");
        auto lite_405 = ord.get("llama3-405b", "Lite");
        if (h100_405 && lite_405) {
            expect(problems, *lite_405 < *h100_405,
                   "(b) llama3-405b expected Lite < H100, got " +
                       fmt(*lite_405) + " vs " + fmt(*h100_405));
        }

        // (c) extra network bandwidth compensates on the big models.
        for (const char* model : {"gpt3-175b", "llama3-405b"}) {
            auto lite = ord.get(model, "Lite");
            auto net = ord.get(model, "Lite+NetBW");
            if (lite && net) {
                expect(problems, *net >= *lite,
                       std::string("(c) ") + model +
                           " expected Lite+NetBW >= Lite, got " + fmt(*net) +
                           " vs " + fmt(*lite));
            }
        }

        // (d) overclocking on top of extra network strictly wins everywhere.
        for (const ModelSpec& m : models) {
            auto net = ord.get(m.name, "Lite+NetBW");
            auto flops = ord.get(m.name, "Lite+NetBW+FLOPS");
            if (net && flops) {
                expect(problems, *flops > *net,
                       "(d) " + m.name +
                           " expected Lite+NetBW+FLOPS > Lite+NetBW, got " +
                           fmt(*flops) + " vs " + fmt(*net));
            }
        }
    }, 60.0);

    // ------------------------------------------------------------------
    h.criterion(5, "decode orderings at best-per-type configurations",
                [&](std::vector<std::string>& problems) {
        if (study.models.empty()) {
            study = sweep_models(models, gpus, constraints, {}, options);
        }
        Ordered ord{problems, study, Phase::Decode};

        // (a) plain quarter GPUs lose on decode for every model.
        for (const ModelSpec& m : models) {
            auto h100 = ord.get(m.name, "H100");
            auto lite = ord.get(m.name, "Lite");
            if (h100 && lite) {
                expect(problems, *lite < *h100,
                       "(a) " + m.name + " expected Lite < H100, got " +
                           fmt(*lite) + " vs " + fmt(*h100));
            }
        }

        // (b) the MHA model degrades more than the GQA model.
        auto h100_g = ord.get("gpt3-175b", "H100");
        auto lite_g = ord.get("gpt3-175b", "Lite");
        auto h100_l = ord.get("llama3-70b", "H100");
        auto lite_l = ord.get("llama3-70b", "Lite");
        if (h100_g && lite_g && h100_l && lite_l) {
            const double ratio_g = *lite_g / *h100_g;
            const double ratio_l = *lite_l / *h100_l;
            expect(problems, ratio_g < ratio_l,
                   "(b) expected gpt3-175b Lite/H100 (" + fmt(ratio_g) +
                       ") < llama3-70b Lite/H100 (" + fmt(ratio_l) + ")");
        }

        // (c) spending shoreline on memory bandwidth overtakes the baseline.
        for (const char* variant : {"Lite+MemBW", "Lite+MemBW+NetBW"}) {
            for (const ModelSpec& m : models) {
                auto h100 = ord.get(m.name, "H100");
                auto v = ord.get(m.name, variant);
                if (h100 && v) {
                    expect(problems, *v >= *h100,
                           std::string("(c) ") + m.name + " expected " +
                               variant + " >= H100, got " + fmt(*v) + " vs " +
                               fmt(*h100));
                }
            }
        }
    }, 60.0);

    // ------------------------------------------------------------------
    h.criterion(6, "constraint soundness under fuzzed limits",
                [&](std::vector<std::string>& problems) {
        auto audit = [&](const SweepResult& result, const Constraints& c,
                         const std::string& tag) {
            for (const ModelSweep& ms : result.models) {
                const ModelSpec* model = nullptr;
                for (const auto& m : models) {
                    if (m.name == ms.model_name) model = &m;
                }
                for (const GpuSweep& gs : ms.gpus) {
                    for (const auto* best : {&gs.best_prefill,
                                             &gs.best_decode}) {
                        if (!best->has_value()) continue;
                        const PhaseResult r =
                            evaluate_config(*model, (*best)->cfg);
                        const bool ok = r.fits_memory &&
                                        r.ttft <= c.max_ttft &&
                                        r.tbt <= c.max_tbt;
                        if (!ok) {
                            problems.push_back(
                                tag + ": best for " + ms.model_name + " on " +
                                gs.gpu_name + " violates constraints (ttft " +
                                fmt(r.ttft) + ", tbt " + fmt(r.tbt) +
                                ", fits=" + (r.fits_memory ? "1" : "0") + ")");
                        }
                    }
                }
            }
        };
        if (study.models.empty()) {
            study = sweep_models(models, gpus, constraints, {}, options);
        }
        audit(study, constraints, "case study");

        std::mt19937 rng(20250810);
        std::uniform_real_distribution<double> ttft_dist(0.01, 2.0);
        std::uniform_real_distribution<double> tbt_dist(0.001, 0.2);
        for (int draw = 0; draw < 100; ++draw) {
            Constraints fuzzed;
            fuzzed.max_ttft = ttft_dist(rng);
            fuzzed.max_tbt = tbt_dist(rng);
            const ModelSpec& m = models[draw % models.size()];
            const SweepResult res =
                sweep_models({m}, gpus, fuzzed, {}, options);
            audit(res, fuzzed, "draw " + std::to_string(draw));
        }
    }, 30.0);

    // ------------------------------------------------------------------
    h.criterion(7, "sweep equals brute force on a restricted grid",
                [&](std::vector<std::string>& problems) {
        SweepGrid grid;
        grid.tp_values = {1, 2, 4};
        grid.batch_values = {1, 4, 16};
        for (const ModelSpec& m : models) {
            const ModelSweep swept = sweep(m, gpus, constraints, grid, options);
            for (size_t gi = 0; gi < gpus.size(); ++gi) {
                std::optional<BestConfig> bp, bd;
                std::vector<GridPoint> feasible;
                for (int tp : grid.tp_values) {
                    if (tp > gpus[gi].max_gpus || m.heads % tp != 0) continue;
                    for (long long b : grid.batch_values) {
                        ClusterConfig cfg;
                        cfg.gpu = gpus[gi];
                        cfg.tp = tp;
                        cfg.batch = b;
                        cfg.prompt_len = constraints.prompt_len;
                        cfg.decode_ctx = options.decode_ctx;
                        cfg.overlap_collectives = options.overlap_collectives;
                        const PhaseResult r = evaluate_config(m, cfg);
                        if (!r.fits_memory || r.ttft > constraints.max_ttft ||
                            r.tbt > constraints.max_tbt) {
                            continue;
                        }
                        feasible.push_back({tp, b});
                        if (!bp || r.prefill_tput_per_sm > bp->tput_per_sm) {
                            bp = BestConfig{cfg, r, r.prefill_tput_per_sm};
                        }
                        if (!bd || r.decode_tput_per_sm > bd->tput_per_sm) {
                            bd = BestConfig{cfg, r, r.decode_tput_per_sm};
                        }
                    }
                }
                const GpuSweep& gs = swept.gpus[gi];
                bool same = gs.feasible.size() == feasible.size();
                for (size_t i = 0; same && i < feasible.size(); ++i) {
                    same = gs.feasible[i].point.tp == feasible[i].tp &&
                           gs.feasible[i].point.batch == feasible[i].batch;
                }
                expect(problems, same,
                       m.name + "/" + gpus[gi].name +
                           ": feasible sets differ from brute force");
                auto cmp = [&](const std::optional<BestConfig>& a,
                               const std::optional<BestConfig>& b,
                               const char* phase) {
                    if (a.has_value() != b.has_value()) {
                        problems.push_back(m.name + "/" + gpus[gi].name + " " +
                                           phase + ": best presence differs");
                        return;
                    }
                    if (!a) return;
                    const bool eq = a->cfg.tp == b->cfg.tp &&
                                    a->cfg.batch == b->cfg.batch &&
                                    a->tput_per_sm == b->tput_per_sm &&
                                    a->result.ttft == b->result.ttft &&
                                    a->result.tbt == b->result.tbt;
                    expect(problems, eq,
                           m.name + "/" + gpus[gi].name + " " + phase +
                               ": best differs from brute force "
                               "(bit-exact comparison)");
                };
                cmp(gs.best_prefill, bp, "prefill");
                cmp(gs.best_decode, bd, "decode");
            }
        }
    }, 5.0);

    // ------------------------------------------------------------------
    h.criterion(8, "workload conservation against closed-form oracles",
                [&](std::vector<std::string>& problems) {
        const std::map<std::string, double> nominal = {
            {"llama3-70b", 70e9},
            {"gpt3-175b", 175e9},
            {"llama3-405b", 405e9},
        };
        for (const ModelSpec& m : models) {
            const PhaseWorkload w = prefill_stage_costs(m, 1, 1500, 1);
            double flops = 0;
            for (const auto& st : w.stages) flops += st.flops;
            const double oracle =
                2.0 * param_count(m) * 1500 +
                2.0 * m.layers * 1500.0 * 1500.0 *
                    static_cast<double>(m.hidden);
            const double rel = std::abs(flops - oracle) / oracle;
            expect(problems, rel <= 0.02,
                   m.name + ": prefill flops " + fmt(flops) + " vs oracle " +
                       fmt(oracle) + " off by " + fmt(rel * 100) + "%");

            const double want = nominal.at(m.name);
            const double prel = std::abs(param_count(m) - want) / want;
            expect(problems, prel <= 0.05,
                   m.name + ": param count " + fmt(param_count(m)) +
                       " deviates " + fmt(prel * 100) + "% from nominal");
        }
    }, 1.0);

    std::printf("%d of 8 criteria passed\n", 8 - h.failures);
    return h.failures;
}
