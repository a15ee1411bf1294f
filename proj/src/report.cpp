#include "roofsim/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

#include <json.hpp>

namespace roofsim {

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] =
        std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 6);
    return std::string(buf, ptr);
}

namespace {

const char* phase_label(Phase p) {
    return p == Phase::Prefill ? "prefill" : "decode";
}

struct TableRow {
    std::string gpu, model, phase;
    int tp;
    long long batch;
    double ttft_s, tbt_s, tput_tok_s, tput_per_sm;
    std::string bottleneck;
};

std::vector<TableRow> collect_rows(const SweepResult& sweep) {
    std::vector<TableRow> rows;
    for (const ModelSweep& ms : sweep.models) {
        for (const GpuSweep& gs : ms.gpus) {
            for (Phase phase : {Phase::Prefill, Phase::Decode}) {
                const auto& best = phase == Phase::Prefill ? gs.best_prefill
                                                           : gs.best_decode;
                if (!best) continue;
                TableRow row;
                row.gpu = gs.gpu_name;
                row.model = ms.model_name;
                row.phase = phase_label(phase);
                row.tp = best->cfg.tp;
                row.batch = best->cfg.batch;
                row.ttft_s = best->result.ttft;
                row.tbt_s = best->result.tbt;
                row.tput_tok_s = phase == Phase::Prefill
                                     ? best->result.prefill_tput
                                     : best->result.decode_tput;
                row.tput_per_sm = best->tput_per_sm;
                row.bottleneck = resource_name(
                    phase == Phase::Prefill ? best->result.prefill.bottleneck
                                            : best->result.decode.bottleneck);
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

} // namespace

ChartSpec chart_from_sweep(const SweepResult& sweep, Phase phase,
                           const std::optional<std::string>& normalize_to) {
    ChartSpec chart;
    chart.phase_label = phase_label(phase);
    chart.normalize_to = normalize_to;
    if (normalize_to) {
        chart.y_label = "tokens/s/SM vs " + *normalize_to;
    }
    for (const ModelSweep& ms : sweep.models) {
        chart.models.push_back(ms.model_name);
    }
    if (!sweep.models.empty()) {
        for (const GpuSweep& gs : sweep.models.front().gpus) {
            chart.gpu_types.push_back(gs.gpu_name);
        }
    }
    for (const ModelSweep& ms : sweep.models) {
        double base = 1.0;
        if (normalize_to) {
            base = 0.0;
            for (const GpuSweep& gs : ms.gpus) {
                if (gs.gpu_name != *normalize_to) continue;
                const auto& best = phase == Phase::Prefill ? gs.best_prefill
                                                           : gs.best_decode;
                if (best) base = best->tput_per_sm;
            }
        }
        std::vector<double> row;
        for (const GpuSweep& gs : ms.gpus) {
            const auto& best = phase == Phase::Prefill ? gs.best_prefill
                                                       : gs.best_decode;
            // A missing best, or a missing normalization baseline, renders
            // as a zero-height bar rather than an error.
            row.push_back(best && base > 0 ? best->tput_per_sm / base : 0.0);
        }
        chart.values.push_back(std::move(row));
    }
    return chart;
}

std::string emit_table(const SweepResult& sweep, TableFormat format) {
    const std::vector<TableRow> rows = collect_rows(sweep);
    if (format == TableFormat::Csv) {
        std::string out =
            "gpu,model,phase,tp,batch,ttft_s,tbt_s,tput_tok_s,tput_per_sm,"
            "bottleneck\n";
        for (const TableRow& r : rows) {
            out += r.gpu + ',' + r.model + ',' + r.phase + ',' +
                   std::to_string(r.tp) + ',' + std::to_string(r.batch) + ',' +
                   format_double(r.ttft_s) + ',' + format_double(r.tbt_s) +
                   ',' + format_double(r.tput_tok_s) + ',' +
                   format_double(r.tput_per_sm) + ',' + r.bottleneck + '\n';
        }
        return out;
    }
    nlohmann::json doc;
    doc["rows"] = nlohmann::json::array();
    for (const TableRow& r : rows) {
        doc["rows"].push_back({{"gpu", r.gpu},
                               {"model", r.model},
                               {"phase", r.phase},
                               {"tp", r.tp},
                               {"batch", r.batch},
                               {"ttft_s", r.ttft_s},
                               {"tbt_s", r.tbt_s},
                               {"tput_tok_s", r.tput_tok_s},
                               {"tput_per_sm", r.tput_per_sm},
                               {"bottleneck", r.bottleneck}});
    }
    return doc.dump(2) + "\n";
}

std::string emit_barchart(const ChartSpec& chart) {
    const size_t n_models = chart.models.size();
    const size_t n_types = chart.gpu_types.size();
    if (chart.values.size() != n_models) {
        throw std::invalid_argument("chart: values rows != models");
    }
    for (const auto& row : chart.values) {
        if (row.size() != n_types) {
            throw std::invalid_argument("chart: values cols != gpu types");
        }
        for (double v : row) {
            if (v < 0 || !std::isfinite(v)) {
                throw std::invalid_argument("chart: bar values must be >= 0");
            }
        }
    }

    const double width = 960, height = 420;
    const double ml = 70, mr = 230, mt = 40, mb = 60;
    const double plot_w = width - ml - mr, plot_h = height - mt - mb;

    double vmax = 0.0;
    for (const auto& row : chart.values)
        for (double v : row) vmax = std::max(vmax, v);
    if (vmax <= 0) vmax = 1.0;

    static const char* kPalette[] = {"#4878d0", "#ee854a", "#6acc64",
                                     "#d65f5f", "#956cb4", "#8c613c",
                                     "#dc7ec0", "#797979"};
    const size_t n_colors = sizeof(kPalette) / sizeof(kPalette[0]);

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
        << "width=\"" << format_double(width) << "\" height=\""
        << format_double(height) << "\" viewBox=\"0 0 "
        << format_double(width) << " " << format_double(height) << "\">\n"
        << "<rect x=\"0\" y=\"0\" width=\"" << format_double(width)
        << "\" height=\"" << format_double(height) << "\" fill=\"white\"/>\n"
        << "<text x=\"" << format_double(ml + plot_w / 2) << "\" y=\"22\" "
        << "text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
        << xml_escape(chart.phase_label) << "</text>\n";

    // Axes.
    svg << "<line x1=\"" << format_double(ml) << "\" y1=\""
        << format_double(mt) << "\" x2=\"" << format_double(ml) << "\" y2=\""
        << format_double(mt + plot_h) << "\" stroke=\"black\"/>\n"
        << "<line x1=\"" << format_double(ml) << "\" y1=\""
        << format_double(mt + plot_h) << "\" x2=\""
        << format_double(ml + plot_w) << "\" y2=\""
        << format_double(mt + plot_h) << "\" stroke=\"black\"/>\n";

    // Y ticks.
    const int n_ticks = 5;
    for (int i = 0; i <= n_ticks; ++i) {
        const double v = vmax * i / n_ticks;
        const double y = mt + plot_h - plot_h * i / n_ticks;
        svg << "<line x1=\"" << format_double(ml - 4) << "\" y1=\""
            << format_double(y) << "\" x2=\"" << format_double(ml)
            << "\" y2=\"" << format_double(y) << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << format_double(ml - 8) << "\" y=\""
            << format_double(y + 4) << "\" text-anchor=\"end\" "
            << "font-family=\"sans-serif\" font-size=\"11\">"
            << format_double(v) << "</text>\n";
    }
    svg << "<text x=\"16\" y=\"" << format_double(mt + plot_h / 2)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        << "font-size=\"12\" transform=\"rotate(-90 16 "
        << format_double(mt + plot_h / 2) << ")\">"
        << xml_escape(chart.y_label) << "</text>\n";

    // Grouped bars.
    const double group_w = n_models > 0 ? plot_w / n_models : plot_w;
    const double slot_w = n_types > 0 ? group_w / (n_types + 1) : group_w;
    for (size_t m = 0; m < n_models; ++m) {
        const double gx = ml + group_w * m + slot_w / 2;
        for (size_t g = 0; g < n_types; ++g) {
            const double v = chart.values[m][g];
            const double h = plot_h * (v / vmax);
            const double x = gx + slot_w * g;
            const double y = mt + plot_h - h;
            svg << "<rect class=\"bar\" x=\"" << format_double(x) << "\" y=\""
                << format_double(y) << "\" width=\""
                << format_double(slot_w * 0.85) << "\" height=\""
                << format_double(h) << "\" fill=\""
                << kPalette[g % n_colors] << "\"><title>"
                << xml_escape(chart.gpu_types[g]) << " / "
                << xml_escape(chart.models[m]) << ": " << format_double(v)
                << "</title></rect>\n";
        }
        svg << "<text x=\"" << format_double(ml + group_w * m + group_w / 2)
            << "\" y=\"" << format_double(mt + plot_h + 20)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
            << "font-size=\"12\">" << xml_escape(chart.models[m])
            << "</text>\n";
    }

    // Legend.
    for (size_t g = 0; g < n_types; ++g) {
        const double y = mt + 16.0 * g;
        svg << "<rect class=\"legend\" x=\"" << format_double(ml + plot_w + 16)
            << "\" y=\"" << format_double(y) << "\" width=\"12\" height=\"12\" "
            << "fill=\"" << kPalette[g % n_colors] << "\"/>\n"
            << "<text x=\"" << format_double(ml + plot_w + 34) << "\" y=\""
            << format_double(y + 10) << "\" font-family=\"sans-serif\" "
            << "font-size=\"11\">" << xml_escape(chart.gpu_types[g])
            << "</text>\n";
    }

    svg << "</svg>\n";
    return svg.str();
}

namespace {

struct StageGroup {
    std::string label;
    int count = 0;
    double t_compute = 0, t_memory = 0, t_network = 0, total = 0;
    Resource bottleneck = Resource::Compute;
};

void append_phase(std::ostringstream& os, const char* name,
                  const PhaseBreakdown& phase) {
    os << name << ": latency " << format_double(phase.seconds)
       << " s (serialized " << format_double(phase.serialized_seconds)
       << " s), dominant resource: " << resource_name(phase.bottleneck)
       << "\n";
    os << "  stage        count   t_compute_s   t_memory_s    t_network_s   "
          "total_s       bound-by\n";

    std::vector<StageGroup> groups;
    std::map<std::string, size_t> index;
    for (const StageTime& st : phase.stages) {
        auto it = index.find(st.label);
        if (it == index.end()) {
            index[st.label] = groups.size();
            StageGroup g;
            g.label = st.label;
            g.bottleneck = st.bottleneck;
            groups.push_back(g);
            it = index.find(st.label);
        }
        StageGroup& g = groups[it->second];
        ++g.count;
        g.t_compute += st.t_compute;
        g.t_memory += st.t_memory;
        g.t_network += st.t_network;
        g.total += st.seconds;
        g.bottleneck = st.bottleneck;
    }
    auto pad = [](std::string s, size_t w) {
        if (s.size() < w) s.append(w - s.size(), ' ');
        return s;
    };
    for (const StageGroup& g : groups) {
        os << "  " << pad(g.label, 13) << pad(std::to_string(g.count), 8)
           << pad(format_double(g.t_compute), 14)
           << pad(format_double(g.t_memory), 14)
           << pad(format_double(g.t_network), 14)
           << pad(format_double(g.total), 14) << resource_name(g.bottleneck)
           << "\n";
    }
    os << "  totals: compute " << format_double(phase.total_compute)
       << " s, memory " << format_double(phase.total_memory) << " s, network "
       << format_double(phase.total_network) << " s\n";
}

} // namespace

std::string explain(const PhaseResult& result) {
    std::ostringstream os;
    os << "ttft " << format_double(result.ttft) << " s, tbt "
       << format_double(result.tbt) << " s\n";
    os << "prefill " << format_double(result.prefill_tput)
       << " tok/s (" << format_double(result.prefill_tput_per_sm)
       << " tok/s/SM), decode " << format_double(result.decode_tput)
       << " tok/s (" << format_double(result.decode_tput_per_sm)
       << " tok/s/SM)\n";
    os << "memory per GPU: weights " << format_double(result.weight_bytes_gpu / 1e9)
       << " GB + kv " << format_double(result.kv_bytes_gpu / 1e9) << " GB = "
       << format_double(result.mem_required_gb) << " GB ("
       << (result.fits_memory ? "fits" : "does not fit") << ")\n";
    append_phase(os, "prefill", result.prefill);
    append_phase(os, "decode", result.decode);
    return os.str();
}

} // namespace roofsim
