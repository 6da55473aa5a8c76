#include "rknn/commands.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <iostream>
#include <optional>
#include <string>

namespace {

std::string build_generator_text(const std::string& shape, const std::string& n, const std::string& r,
                                 const std::string& jitter, const std::string& length,
                                 const std::string& sep, const std::string& centers,
                                 const std::string& spread, double noise) {
    std::string text = shape + ":";
    auto append = [&text](const std::string& key, const std::string& value) {
        if (value.empty()) return;
        if (text.back() != ':') text += ';';
        text += key + "=" + value;
    };
    append("n", n);
    append("r", r);
    append("jitter", jitter);
    append("length", length);
    append("sep", sep);
    append("centers", centers);
    append("spread", spread);
    if (noise > 0.0) append("noise", std::to_string(noise));
    if (text.back() == ':') text.pop_back();
    return text;
}

int parse_cluster_count(const std::string& text) {
    if (text == "auto") return 0;
    const int c = std::stoi(text);
    if (c < 1) throw CLI::ValidationError("--c must be a positive integer or \"auto\"");
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral clustering on a refined k-nearest-neighbor graph"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "Generate a synthetic dataset CSV");
    std::string g_shape, g_n, g_r, g_jitter, g_length, g_sep, g_centers, g_spread, g_out = "dataset.csv";
    double g_noise = 0.0;
    std::uint64_t g_seed = 0;
    gen->add_option("shape", g_shape, "rings | lines | blobs | sparse_blobs")->required();
    gen->add_option("--n", g_n, "points per component, comma separated");
    gen->add_option("--r", g_r, "ring radii, comma separated");
    gen->add_option("--jitter", g_jitter, "Gaussian jitter std");
    gen->add_option("--length", g_length, "line length");
    gen->add_option("--sep", g_sep, "line separation");
    gen->add_option("--centers", g_centers, "blob centers, e.g. 0,0|10,0|0,10");
    gen->add_option("--spread", g_spread, "blob spread(s)");
    gen->add_option("--noise", g_noise, "noise fraction appended after generation");
    gen->add_option("--seed", g_seed, "RNG seed");
    gen->add_option("-o,--out", g_out, "output CSV path");

    // cluster
    auto* clu = app.add_subcommand("cluster", "Run the clustering pipeline");
    std::string c_input, c_input_flag, c_generate, c_c = "auto", c_row_normalize = "on",
                c_out_dir = "out";
    int c_label_col = -1;
    rknn::ClusterConfig config;
    bool c_no_svg = false, c_dump_graph = false, c_dump_affinity = false;
    clu->add_option("input", c_input, "input CSV path");
    clu->add_option("--input", c_input_flag, "input CSV path (flag form)");
    clu->add_option("--generate", c_generate, "generator spec, e.g. rings:n=300,300;r=1,3");
    clu->add_option("--label-col", c_label_col, "0-based ground-truth label column");
    clu->add_option("--k-max", config.k_max, "neighbor cap (0 = default)");
    clu->add_option("--baseline-n", config.baseline_n, "baseline neighbor count (default 7)");
    clu->add_option("--scale-k", config.scale_k, "local scale neighbor (default 7)");
    clu->add_option("--c", c_c, "cluster count or \"auto\"");
    clu->add_option("--lambda-max", config.lambda_max, "eigenpairs to compute (default 25)");
    clu->add_option("--seed", config.seed, "RNG seed");
    clu->add_option("--row-normalize", c_row_normalize, "on|off (default on)");
    clu->add_flag("--standardize", config.standardize_input, "zero-mean unit-variance per dimension");
    clu->add_flag("--eq7-gap", config.eq7_gap, "compare successor running mean in the gap scan");
    clu->add_option("--out-dir", c_out_dir, "output directory");
    clu->add_flag("--no-svg", c_no_svg, "skip scatter.svg");
    clu->add_flag("--dump-graph", c_dump_graph, "write edges.txt and graph.json");
    clu->add_flag("--dump-affinity", c_dump_affinity, "write affinity.txt coordinate dump");

    // eval
    auto* eva = app.add_subcommand("eval", "Score a predicted labeling against ground truth");
    std::string e_truth, e_pred, e_out;
    eva->add_option("truth", e_truth, "truth label CSV")->required();
    eva->add_option("predicted", e_pred, "predicted label CSV")->required();
    eva->add_option("-o,--out", e_out, "write metrics JSON here");

    // bench
    auto* ben = app.add_subcommand("bench", "Run a benchmark suite");
    rknn::BenchOptions bench;
    ben->add_option("suite", bench.suite, "synthetic | noise")->required();
    ben->add_option("--repeats", bench.repeats, "runs per configuration");
    ben->add_option("--seed", bench.seed, "base seed; run r uses seed+r");
    ben->add_option("--out-dir", bench.out_dir, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            rknn::GenerateOptions opts;
            opts.spec = rknn::parse_generator_spec(build_generator_text(
                g_shape, g_n, g_r, g_jitter, g_length, g_sep, g_centers, g_spread, g_noise));
            opts.seed = g_seed;
            opts.out_path = g_out;
            rknn::cmd_generate(opts);
            std::cout << "wrote " << g_out << std::endl;
        } else if (clu->parsed()) {
            rknn::ClusterOptions opts;
            opts.input_path = !c_input.empty() ? c_input : c_input_flag;
            opts.generate_spec = c_generate;
            if (c_label_col >= 0) opts.label_column = c_label_col;
            config.cluster_count = parse_cluster_count(c_c);
            if (c_row_normalize != "on" && c_row_normalize != "off")
                throw std::invalid_argument("--row-normalize expects on or off");
            config.row_normalize = c_row_normalize == "on";
            opts.config = config;
            opts.out_dir = c_out_dir;
            opts.write_svg = !c_no_svg;
            opts.dump_graph = c_dump_graph;
            opts.dump_affinity = c_dump_affinity;
            const auto report = rknn::cmd_cluster(opts);
            std::cout << "clusters: " << report.cluster_count
                      << (report.auto_detected ? " (auto)" : " (given)") << ", E%: " << report.e_percent
                      << ", outputs in " << c_out_dir << std::endl;
        } else if (eva->parsed()) {
            rknn::cmd_eval({e_truth, e_pred, e_out});
        } else if (ben->parsed()) {
            rknn::cmd_bench(bench);
            std::cout << "bench outputs in " << bench.out_dir << std::endl;
        }
    } catch (const std::exception& ex) {
        nlohmann::ordered_json err = {{"error", ex.what()}};
        std::cerr << err.dump() << std::endl;
        return 1;
    }
    return 0;
}
