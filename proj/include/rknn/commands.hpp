#pragma once

#include "rknn/dataset.hpp"
#include "rknn/spectral.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>

namespace rknn {

/// Report serialization used by the CLI and the test suites. Key order and
/// number formatting are deterministic; wall-clock measurements live under
/// the single "timing" key so reports can be compared modulo timing.
nlohmann::ordered_json report_to_json(const ClusteringReport& report);

struct GenerateOptions {
    GeneratorSpec spec;
    std::uint64_t seed = 0;
    std::string out_path;
};
void cmd_generate(const GenerateOptions& opts);

struct ClusterOptions {
    std::string input_path;         // CSV input, or
    std::string generate_spec;      // generator spec string (exactly one of the two)
    std::optional<int> label_column;
    ClusterConfig config;
    std::string out_dir = ".";
    bool write_svg = true;
    bool dump_graph = false;
    bool dump_affinity = false;
};
/// Writes report.json and labels.csv (plus scatter.svg for 2-D data and the
/// optional graph/affinity dumps). Returns the report.
ClusteringReport cmd_cluster(const ClusterOptions& opts);

struct EvalOptions {
    std::string truth_path;  // single-column integer CSVs
    std::string predicted_path;
    std::string out_path;  // empty = don't write
};
MetricScores cmd_eval(const EvalOptions& opts);

struct BenchOptions {
    std::string suite = "synthetic";  // "synthetic" or "noise"
    int repeats = 10;
    std::uint64_t seed = 0;
    std::string out_dir = ".";
};
void cmd_bench(const BenchOptions& opts);

}  // namespace rknn
