#include "rknn/commands.hpp"

#include "rknn/affinity.hpp"
#include "rknn/knn_graph.hpp"
#include "rknn/metrics.hpp"
#include "rknn/svg.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace rknn {

namespace {

namespace fs = std::filesystem;

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open file for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("I/O error while writing " + path);
}

std::string config_echo(const ClusterConfig& c) {
    std::ostringstream os;
    os << "k_max=" << c.k_max << " baseline_n=" << c.baseline_n << " scale_k=" << c.scale_k
       << " c=" << (c.cluster_count > 0 ? std::to_string(c.cluster_count) : std::string("auto"))
       << " lambda_max=" << c.lambda_max << " seed=" << c.seed
       << " row_normalize=" << (c.row_normalize ? "on" : "off");
    return os.str();
}

std::vector<int> load_label_column(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::vector<int> labels;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (line.empty()) continue;
        // Accept trailing columns; the label is the last comma-separated cell.
        const auto comma = line.find_last_of(',');
        const std::string cell = comma == std::string::npos ? line : line.substr(comma + 1);
        try {
            labels.push_back(std::stoi(cell));
        } catch (const std::exception&) {
            throw std::runtime_error("non-integer label at line " + std::to_string(line_no) + " of " +
                                     path);
        }
    }
    if (labels.empty()) throw std::runtime_error("no labels in " + path);
    return labels;
}

struct Aggregate {
    std::vector<double> values;
    void add(double v) { values.push_back(v); }
    double mean() const {
        double s = 0.0;
        for (double v : values) s += v;
        return values.empty() ? 0.0 : s / static_cast<double>(values.size());
    }
    double stddev() const {
        if (values.size() < 2) return 0.0;
        const double m = mean();
        double s = 0.0;
        for (double v : values) s += (v - m) * (v - m);
        return std::sqrt(s / static_cast<double>(values.size()));
    }
};

}  // namespace

nlohmann::ordered_json report_to_json(const ClusteringReport& r) {
    nlohmann::ordered_json j;
    j["dataset"] = {{"name", r.dataset_name}, {"n", r.n}, {"dim", r.dim}};
    j["config"] = {{"k_max", r.config.k_max},
                   {"baseline_n", r.config.baseline_n},
                   {"scale_k", r.config.scale_k},
                   {"c", r.config.cluster_count > 0 ? nlohmann::ordered_json(r.config.cluster_count)
                                                    : nlohmann::ordered_json("auto")},
                   {"lambda_max", r.config.lambda_max},
                   {"seed", r.config.seed},
                   {"row_normalize", r.config.row_normalize},
                   {"eq7_gap", r.config.eq7_gap},
                   {"standardize", r.config.standardize_input}};
    j["cluster_count"] = r.cluster_count;
    j["auto_detected"] = r.auto_detected;
    j["low_confidence"] = r.low_confidence;
    if (r.gap) {
        j["gap"] = {{"gamma", r.gap->gamma},
                    {"running_mean", r.gap->running_mean},
                    {"running_std", r.gap->running_std},
                    {"detected_c", r.gap->detected_C},
                    {"triggered", r.gap->triggered}};
    }
    nlohmann::ordered_json cands = nlohmann::ordered_json::array();
    for (const auto& c : r.candidates)
        cands.push_back({{"dims_used", c.dims_used}, {"inter_cluster_weight", c.inter_cluster_weight}});
    j["candidates"] = cands;
    j["selected_candidate"] = r.selected_candidate;

    std::map<int, int> hist;
    for (int k : r.adaptive_k) ++hist[k];
    nlohmann::ordered_json hist_json = nlohmann::ordered_json::object();
    for (const auto& [k, count] : hist) hist_json[std::to_string(k)] = count;
    j["graph"] = {{"edge_count", r.edge_count},
                  {"e_percent", r.e_percent},
                  {"isolated", r.isolated},
                  {"components",
                   {{"total", r.components.total},
                    {"with_edges", r.components.with_edges},
                    {"isolated_count", r.components.isolated}}},
                  {"adaptive_k_histogram", hist_json},
                  {"degenerate_scales", r.degenerate_scales}};
    if (r.metrics)
        j["metrics"] = {{"acc", r.metrics->acc}, {"ari", r.metrics->ari}, {"nmi", r.metrics->nmi}};
    j["timing"] = {{"graph_seconds", r.graph_seconds},
                   {"eigen_seconds", r.eigen_seconds},
                   {"total_seconds", r.total_seconds}};
    return j;
}

void cmd_generate(const GenerateOptions& opts) {
    const PointSet ps = run_generator(opts.spec, opts.seed);
    save_csv(ps, opts.out_path);
}

ClusteringReport cmd_cluster(const ClusterOptions& opts) {
    if (opts.input_path.empty() == opts.generate_spec.empty())
        throw std::invalid_argument("cluster: exactly one of input path / generator spec is required");

    PointSet ps = opts.input_path.empty()
                      ? run_generator(parse_generator_spec(opts.generate_spec), opts.config.seed)
                      : load_csv(opts.input_path, opts.label_column);

    PipelineArtifacts artifacts;
    const ClusteringReport report = cluster(ps, opts.config, &artifacts);

    fs::create_directories(opts.out_dir);
    const fs::path dir(opts.out_dir);
    write_text_file((dir / "report.json").string(), report_to_json(report).dump(2) + "\n");

    std::ostringstream labels;
    for (int l : report.labels) labels << l << '\n';
    write_text_file((dir / "labels.csv").string(), labels.str());

    if (opts.write_svg && ps.dim() == 2) {
        write_scatter_svg(ps.points, report.labels, report.isolated,
                          "clusters (" + config_echo(report.config) + ")",
                          (dir / "scatter.svg").string());
    }
    if (opts.dump_graph) {
        write_edge_list(artifacts.graph, (dir / "edges.txt").string());
        write_text_file((dir / "graph.json").string(), graph_summary_json(artifacts.graph) + "\n");
    }
    if (opts.dump_affinity) write_affinity_coordinates(artifacts.affinity, (dir / "affinity.txt").string());
    return report;
}

MetricScores cmd_eval(const EvalOptions& opts) {
    const auto truth = load_label_column(opts.truth_path);
    const auto predicted = load_label_column(opts.predicted_path);
    if (truth.size() != predicted.size())
        throw std::runtime_error("eval: label files differ in length (" + std::to_string(truth.size()) +
                                 " vs " + std::to_string(predicted.size()) + ")");
    const MetricScores scores = evaluate_labels(truth, predicted);
    nlohmann::ordered_json j = {{"acc", scores.acc}, {"ari", scores.ari}, {"nmi", scores.nmi}};
    std::cout << j.dump(2) << std::endl;
    if (!opts.out_path.empty()) write_text_file(opts.out_path, j.dump(2) + "\n");
    return scores;
}

namespace {

struct BenchDataset {
    std::string name;
    std::string spec;  // generator spec without noise
    int true_c = 0;    // structural clusters (noise class excluded)
};

const std::vector<BenchDataset>& bench_datasets() {
    static const std::vector<BenchDataset> sets = {
        {"rings", "rings:n=300,300;r=4,12;jitter=0.05", 2},
        {"lines", "lines:n=250,250;length=10;sep=2.5;jitter=0.03", 2},
        {"blobs", "blobs:centers=0,0|10,0|0,10;n=100;spread=0.5", 3},
        {"sparse_blobs", "sparse_blobs:centers=0,0|8,0|4,7;n=300,60,60;spread=0.3,1.2,1.2", 3},
    };
    return sets;
}

struct RunOutcome {
    MetricScores scores;
    double e_percent = 0.0;
    double seconds = 0.0;
    int detected_c = 0;
};

RunOutcome run_once(const std::string& spec_text, double noise, int given_c, std::uint64_t seed) {
    GeneratorSpec spec = parse_generator_spec(spec_text);
    spec.noise_fraction = noise;
    const PointSet ps = run_generator(spec, seed);

    ClusterConfig config;
    config.seed = seed;
    config.cluster_count = given_c;  // 0 = auto
    const auto t0 = std::chrono::steady_clock::now();
    const ClusteringReport report = cluster(ps, config);
    RunOutcome outcome;
    outcome.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    outcome.scores = *report.metrics;
    outcome.e_percent = report.e_percent;
    outcome.detected_c = report.cluster_count;
    return outcome;
}

}  // namespace

void cmd_bench(const BenchOptions& opts) {
    if (opts.repeats < 1) throw std::invalid_argument("bench: repeats must be >= 1");
    if (opts.suite != "synthetic" && opts.suite != "noise")
        throw std::invalid_argument("bench: unknown suite \"" + opts.suite + "\"");

    fs::create_directories(opts.out_dir);
    const fs::path dir(opts.out_dir);
    const std::string csv_path = (dir / (opts.suite + "_summary.csv")).string();
    std::ofstream csv(csv_path);
    if (!csv) throw std::runtime_error("cannot open file for writing: " + csv_path);
    csv << "# suite=" << opts.suite << " repeats=" << opts.repeats << " seed=" << opts.seed << "\n";

    if (opts.suite == "synthetic") {
        csv << "dataset,c_mode,acc_mean,acc_std,ari_mean,ari_std,nmi_mean,nmi_std,e_percent_mean,"
               "seconds_mean\n";
        std::vector<ChartSeries> chart(2);
        chart[0].name = "C given";
        chart[1].name = "C auto";
        double x = 0.0;
        for (const auto& ds : bench_datasets()) {
            for (int mode = 0; mode < 2; ++mode) {
                const int given = mode == 0 ? ds.true_c : 0;
                Aggregate acc, ari_agg, nmi_agg, epct, secs;
                for (int r = 0; r < opts.repeats; ++r) {
                    const auto out = run_once(ds.spec, 0.0, given, opts.seed + static_cast<std::uint64_t>(r));
                    acc.add(out.scores.acc);
                    ari_agg.add(out.scores.ari);
                    nmi_agg.add(out.scores.nmi);
                    epct.add(out.e_percent);
                    secs.add(out.seconds);
                    csv.flush();  // keep partial results on interrupt
                }
                csv << ds.name << ',' << (mode == 0 ? "given" : "auto") << ',' << acc.mean() << ','
                    << acc.stddev() << ',' << ari_agg.mean() << ',' << ari_agg.stddev() << ','
                    << nmi_agg.mean() << ',' << nmi_agg.stddev() << ',' << epct.mean() << ','
                    << secs.mean() << '\n';
                csv.flush();
                chart[static_cast<std::size_t>(mode)].x.push_back(x);
                chart[static_cast<std::size_t>(mode)].y.push_back(ari_agg.mean());
            }
            x += 1.0;
        }
        write_line_chart_svg(chart, "dataset index (rings, lines, blobs, sparse_blobs)", "mean ARI",
                             "synthetic suite", (dir / "synthetic_ari.svg").string());
    } else {
        csv << "dataset,noise_percent,acc_mean,acc_std,ari_mean,ari_std,nmi_mean,nmi_std,"
               "e_percent_mean,seconds_mean\n";
        std::vector<ChartSeries> chart;
        for (const auto& ds : bench_datasets()) {
            if (ds.name != "lines" && ds.name != "rings") continue;
            ChartSeries series;
            series.name = ds.name;
            for (int noise_pct = 10; noise_pct <= 50; noise_pct += 10) {
                const double noise = noise_pct / 100.0;
                // Ground truth gains a dedicated noise class.
                const int given = ds.true_c + 1;
                Aggregate acc, ari_agg, nmi_agg, epct, secs;
                for (int r = 0; r < opts.repeats; ++r) {
                    const auto out = run_once(ds.spec, noise, given, opts.seed + static_cast<std::uint64_t>(r));
                    acc.add(out.scores.acc);
                    ari_agg.add(out.scores.ari);
                    nmi_agg.add(out.scores.nmi);
                    epct.add(out.e_percent);
                    secs.add(out.seconds);
                }
                csv << ds.name << ',' << noise_pct << ',' << acc.mean() << ',' << acc.stddev() << ','
                    << ari_agg.mean() << ',' << ari_agg.stddev() << ',' << nmi_agg.mean() << ','
                    << nmi_agg.stddev() << ',' << epct.mean() << ',' << secs.mean() << '\n';
                csv.flush();
                series.x.push_back(noise_pct);
                series.y.push_back(ari_agg.mean());
            }
            chart.push_back(std::move(series));
        }
        write_line_chart_svg(chart, "noise (% of N)", "mean ARI", "noise robustness",
                             (dir / "noise_ari.svg").string());
    }
}

}  // namespace rknn
