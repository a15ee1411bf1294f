#pragma once

#include <optional>
#include <string>
#include <vector>

#include "roofsim/search.hpp"

namespace roofsim {

enum class TableFormat { Csv, Json };

// Grouped bar chart: models along x, one bar per GPU type, y = tokens/s/SM.
struct ChartSpec {
    std::string phase_label;
    std::vector<std::string> models;
    std::vector<std::string> gpu_types;
    // values[m][g]: model m, gpu type g; missing configs enter as 0.
    std::vector<std::vector<double>> values;
    std::optional<std::string> normalize_to;  // gpu type used as 1.0
    std::string y_label = "tokens/s/SM";
};

ChartSpec chart_from_sweep(const SweepResult& sweep, Phase phase,
                           const std::optional<std::string>& normalize_to);

// One row per feasible (gpu, model, phase) best. Columns, in order:
// gpu,model,phase,tp,batch,ttft_s,tbt_s,tput_tok_s,tput_per_sm,bottleneck.
// Numbers carry 6 significant digits, dot decimal separator.
std::string emit_table(const SweepResult& sweep, TableFormat format);

// Standalone SVG 1.1 document; bar heights proportional to values.
std::string emit_barchart(const ChartSpec& chart);

// Per-stage table of resource times and the binding resource for both
// phases, plus totals: the evidence behind a bottleneck claim.
std::string explain(const PhaseResult& result);

// Locale-independent rendering with 6 significant digits.
std::string format_double(double v);

} // namespace roofsim
