#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace rknn {

/// A point cloud with optional ground-truth labels.
///
/// Invariants: N >= 1, d >= 1, all coordinates finite. When labels are
/// present they have length N and form a contiguous 0-based id range with
/// every id used at least once.
struct PointSet {
    Eigen::MatrixXd points;  // N x d, row i = point i
    std::optional<std::vector<int>> labels;
    std::string name;

    int n() const { return static_cast<int>(points.rows()); }
    int dim() const { return static_cast<int>(points.cols()); }
    int label_count() const;  // 0 when labels absent

    void validate() const;  // throws std::invalid_argument on violation
};

/// Loads a CSV file (comma-separated, '.' decimal, optional header row
/// auto-detected by a non-numeric first row). If label_column is given the
/// column is removed from the coordinates and re-encoded to contiguous
/// 0-based ids in order of first appearance.
PointSet load_csv(const std::string& path, std::optional<int> label_column = std::nullopt);

/// Writes coordinates (and the label column last, when present and
/// write_labels is true) with shortest round-trip formatting, so a
/// load_csv of the output reproduces the coordinates bit-exactly.
void save_csv(const PointSet& ps, const std::string& path, bool write_labels = true);

struct RingsParams {
    std::vector<int> counts;    // points per ring
    std::vector<double> radii;  // one radius per ring, all distinct
    double jitter = 0.05;       // radial Gaussian std
};

struct LinesParams {
    std::vector<int> counts;   // points per line
    double length = 10.0;      // horizontal extent
    double separation = 2.5;   // vertical distance between consecutive lines
    double jitter = 0.03;      // vertical Gaussian std
};

struct BlobsParams {
    std::vector<std::vector<double>> centers;  // one center per blob, equal dims
    int points_per_blob = 100;
    double spread = 0.5;  // isotropic Gaussian std
};

// Blobs with per-component counts and spreads; low-count/high-spread entries
// produce the sparse clusters this graph refinement is designed to keep.
struct SparseBlobsParams {
    std::vector<std::vector<double>> centers;
    std::vector<int> counts;
    std::vector<double> spreads;
};

using GeneratorParams = std::variant<RingsParams, LinesParams, BlobsParams, SparseBlobsParams>;

/// Deterministic synthetic generator; labels are the generating component.
PointSet generate(const GeneratorParams& params, std::uint64_t seed);

/// Appends floor(fraction * N) uniform points over the bounding box of ps
/// expanded by 10% per side. Noise points get a dedicated label id (the
/// next unused id). Deterministic per seed.
PointSet inject_noise(const PointSet& ps, double fraction, std::uint64_t seed);

/// Per-dimension zero-mean unit-variance rescaling (population variance).
/// Dimensions with zero variance are centered only.
PointSet standardize(const PointSet& ps);

/// Parses a compact generator spec string, e.g.
///   "rings:n=300,300;r=1,3;jitter=0.05"
///   "lines:n=250,250;sep=1;jitter=0.04;noise=0.3"
///   "blobs:centers=0,0|10,0|0,10;n=100;spread=0.5"
///   "sparse_blobs:centers=0,0|8,0;n=300,60;spread=0.3,1.5"
/// The optional noise=f suffix applies inject_noise afterwards.
struct GeneratorSpec {
    GeneratorParams params;
    double noise_fraction = 0.0;  // 0 = none
};
GeneratorSpec parse_generator_spec(const std::string& text);

/// Runs a parsed spec: generate, then optional noise injection (noise seed
/// derived from the generation seed).
PointSet run_generator(const GeneratorSpec& spec, std::uint64_t seed);

}  // namespace rknn
