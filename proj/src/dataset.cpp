#include "rknn/dataset.hpp"

#include "rknn/rng.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace rknn {

namespace {

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) throw std::runtime_error("double formatting failed");
    return std::string(buf, ptr);
}

bool parse_double(const std::string& cell, double& out) {
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    while (first != last && (*first == ' ' || *first == '\t')) ++first;
    while (last != first && (*(last - 1) == ' ' || *(last - 1) == '\t' || *(last - 1) == '\r')) --last;
    if (first == last) return false;
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    cells.push_back(cur);
    return cells;
}

[[noreturn]] void cell_error(const std::string& what, std::size_t line_no, std::size_t col_no,
                             const std::string& cell) {
    std::ostringstream os;
    os << what << " at row " << line_no << ", column " << col_no << " (\"" << cell << "\")";
    throw std::runtime_error(os.str());
}

std::vector<int> encode_labels(const std::vector<std::string>& raw) {
    std::vector<int> out;
    out.reserve(raw.size());
    std::unordered_map<std::string, int> ids;
    for (const auto& r : raw) {
        auto [it, inserted] = ids.try_emplace(r, static_cast<int>(ids.size()));
        out.push_back(it->second);
    }
    return out;
}

}  // namespace

int PointSet::label_count() const {
    if (!labels) return 0;
    int mx = -1;
    for (int l : *labels) mx = std::max(mx, l);
    return mx + 1;
}

void PointSet::validate() const {
    if (points.rows() < 1 || points.cols() < 1)
        throw std::invalid_argument("PointSet requires N >= 1 and d >= 1");
    if (!points.allFinite()) throw std::invalid_argument("PointSet contains non-finite coordinates");
    if (labels) {
        if (static_cast<Eigen::Index>(labels->size()) != points.rows())
            throw std::invalid_argument("label vector length does not match point count");
        const int c = label_count();
        std::vector<bool> used(static_cast<std::size_t>(std::max(c, 0)), false);
        for (int l : *labels) {
            if (l < 0 || l >= c) throw std::invalid_argument("label id out of range");
            used[static_cast<std::size_t>(l)] = true;
        }
        for (bool u : used)
            if (!u) throw std::invalid_argument("label ids are not contiguous");
    }
}

PointSet load_csv(const std::string& path, std::optional<int> label_column) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);

    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        rows.push_back(split_line(line));
    }
    if (in.bad()) throw std::runtime_error("I/O error while reading " + path);
    if (rows.empty()) throw std::runtime_error("empty CSV file: " + path);

    const std::size_t arity = rows[0].size();
    if (label_column && (*label_column < 0 || static_cast<std::size_t>(*label_column) >= arity))
        throw std::runtime_error("label column index out of range");

    // Header detection: the first row is a header iff any non-label cell
    // fails to parse as a real.
    std::size_t first_data = 0;
    {
        double tmp;
        for (std::size_t c = 0; c < arity; ++c) {
            if (label_column && static_cast<std::size_t>(*label_column) == c) continue;
            if (!parse_double(rows[0][c], tmp)) {
                first_data = 1;
                break;
            }
        }
    }
    if (first_data >= rows.size()) throw std::runtime_error("CSV has a header but no data rows: " + path);

    const std::size_t n = rows.size() - first_data;
    const std::size_t d = arity - (label_column ? 1 : 0);
    if (d == 0) throw std::runtime_error("CSV has no coordinate columns");

    PointSet ps;
    ps.points.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    std::vector<std::string> raw_labels;
    raw_labels.reserve(label_column ? n : 0);

    for (std::size_t r = first_data; r < rows.size(); ++r) {
        const auto& cells = rows[r];
        const std::size_t line_no = r + 1;  // 1-based, counting the header
        if (cells.size() != arity) {
            std::ostringstream os;
            os << "ragged row at line " << line_no << ": expected " << arity << " cells, got "
               << cells.size();
            throw std::runtime_error(os.str());
        }
        std::size_t out_col = 0;
        for (std::size_t c = 0; c < arity; ++c) {
            if (label_column && static_cast<std::size_t>(*label_column) == c) {
                raw_labels.push_back(cells[c]);
                continue;
            }
            double v;
            if (!parse_double(cells[c], v)) cell_error("non-numeric cell", line_no, c + 1, cells[c]);
            if (!std::isfinite(v)) cell_error("non-finite value", line_no, c + 1, cells[c]);
            ps.points(static_cast<Eigen::Index>(r - first_data), static_cast<Eigen::Index>(out_col++)) = v;
        }
    }

    if (label_column) ps.labels = encode_labels(raw_labels);
    ps.name = path;
    ps.validate();
    return ps;
}

void save_csv(const PointSet& ps, const std::string& path, bool write_labels) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open file for writing: " + path);
    const bool with_labels = write_labels && ps.labels.has_value();
    for (int i = 0; i < ps.n(); ++i) {
        for (int j = 0; j < ps.dim(); ++j) {
            if (j) out << ',';
            out << format_double(ps.points(i, j));
        }
        if (with_labels) out << ',' << (*ps.labels)[static_cast<std::size_t>(i)];
        out << '\n';
    }
    if (!out) throw std::runtime_error("I/O error while writing " + path);
}

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

// Rings and lines place points at evenly spaced positions along the curve
// and jitter across it. Uniformly random positions leave exponential-size
// gaps that read as cluster boundaries to the local statistics; the evenly
// dotted curve is also what the target figures show.
PointSet generate_rings(const RingsParams& p, Rng& rng) {
    require(!p.counts.empty() && p.counts.size() == p.radii.size(),
            "rings: need matching, non-empty counts and radii");
    for (int c : p.counts) require(c >= 1, "rings: counts must be >= 1");
    for (double r : p.radii) require(r > 0.0, "rings: radii must be > 0");
    require(p.jitter > 0.0, "rings: jitter must be > 0");
    std::set<double> distinct(p.radii.begin(), p.radii.end());
    require(distinct.size() == p.radii.size(), "rings: radii must be distinct");

    int total = 0;
    for (int c : p.counts) total += c;
    PointSet ps;
    ps.points.resize(total, 2);
    ps.labels = std::vector<int>();
    ps.labels->reserve(static_cast<std::size_t>(total));
    int row = 0;
    for (std::size_t k = 0; k < p.counts.size(); ++k) {
        for (int i = 0; i < p.counts[k]; ++i) {
            const double theta = 6.283185307179586476925286766559 * i / p.counts[k];
            const double rho = p.radii[k] + p.jitter * rng.normal();
            ps.points(row, 0) = rho * std::cos(theta);
            ps.points(row, 1) = rho * std::sin(theta);
            ps.labels->push_back(static_cast<int>(k));
            ++row;
        }
    }
    ps.name = "rings";
    return ps;
}

PointSet generate_lines(const LinesParams& p, Rng& rng) {
    require(!p.counts.empty(), "lines: need at least one line");
    for (int c : p.counts) require(c >= 1, "lines: counts must be >= 1");
    require(p.length > 0.0, "lines: length must be > 0");
    require(p.separation > 0.0, "lines: separation must be > 0");
    require(p.jitter > 0.0, "lines: jitter must be > 0");

    int total = 0;
    for (int c : p.counts) total += c;
    PointSet ps;
    ps.points.resize(total, 2);
    ps.labels = std::vector<int>();
    ps.labels->reserve(static_cast<std::size_t>(total));
    int row = 0;
    for (std::size_t k = 0; k < p.counts.size(); ++k) {
        for (int i = 0; i < p.counts[k]; ++i) {
            ps.points(row, 0) = p.length * (i + 0.5) / p.counts[k];
            ps.points(row, 1) = static_cast<double>(k) * p.separation + p.jitter * rng.normal();
            ps.labels->push_back(static_cast<int>(k));
            ++row;
        }
    }
    ps.name = "lines";
    return ps;
}

PointSet generate_blob_family(const std::vector<std::vector<double>>& centers,
                              const std::vector<int>& counts, const std::vector<double>& spreads,
                              const std::string& name, Rng& rng) {
    require(!centers.empty(), name + ": need at least one center");
    require(centers.size() == counts.size() && centers.size() == spreads.size(),
            name + ": centers, counts and spreads must align");
    const std::size_t d = centers[0].size();
    require(d >= 1, name + ": centers need at least one coordinate");
    for (const auto& c : centers) require(c.size() == d, name + ": centers must share dimensionality");
    for (int c : counts) require(c >= 1, name + ": counts must be >= 1");
    for (double s : spreads) require(s > 0.0, name + ": spreads must be > 0");

    int total = 0;
    for (int c : counts) total += c;
    PointSet ps;
    ps.points.resize(total, static_cast<Eigen::Index>(d));
    ps.labels = std::vector<int>();
    ps.labels->reserve(static_cast<std::size_t>(total));
    int row = 0;
    for (std::size_t k = 0; k < centers.size(); ++k) {
        for (int i = 0; i < counts[k]; ++i) {
            for (std::size_t j = 0; j < d; ++j)
                ps.points(row, static_cast<Eigen::Index>(j)) = centers[k][j] + spreads[k] * rng.normal();
            ps.labels->push_back(static_cast<int>(k));
            ++row;
        }
    }
    ps.name = name;
    return ps;
}

}  // namespace

PointSet generate(const GeneratorParams& params, std::uint64_t seed) {
    Rng rng(seed);
    PointSet ps = std::visit(
        [&rng](const auto& p) -> PointSet {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, RingsParams>) {
                return generate_rings(p, rng);
            } else if constexpr (std::is_same_v<T, LinesParams>) {
                return generate_lines(p, rng);
            } else if constexpr (std::is_same_v<T, BlobsParams>) {
                std::vector<int> counts(p.centers.size(), p.points_per_blob);
                std::vector<double> spreads(p.centers.size(), p.spread);
                return generate_blob_family(p.centers, counts, spreads, "blobs", rng);
            } else {
                return generate_blob_family(p.centers, p.counts, p.spreads, "sparse_blobs", rng);
            }
        },
        params);
    ps.validate();
    return ps;
}

PointSet inject_noise(const PointSet& ps, double fraction, std::uint64_t seed) {
    if (ps.n() < 1) throw std::invalid_argument("inject_noise: empty PointSet");
    if (!(fraction > 0.0 && fraction <= 1.0))
        throw std::invalid_argument("inject_noise: fraction must be in (0, 1]");
    const int extra = static_cast<int>(std::floor(fraction * ps.n()));
    if (extra < 1) throw std::invalid_argument("inject_noise: fraction*N rounds to zero points");

    Eigen::VectorXd lo = ps.points.colwise().minCoeff();
    Eigen::VectorXd hi = ps.points.colwise().maxCoeff();
    // Expand the box 10% per side so noise surrounds the structure.
    for (int j = 0; j < ps.dim(); ++j) {
        const double w = hi[j] - lo[j];
        const double pad = (w > 0.0) ? 0.1 * w : 0.1 * std::max(std::abs(hi[j]), 1.0);
        lo[j] -= pad;
        hi[j] += pad;
    }

    PointSet out;
    out.name = ps.name;
    out.points.resize(ps.n() + extra, ps.dim());
    out.points.topRows(ps.n()) = ps.points;
    const int noise_id = ps.labels ? ps.label_count() : 1;
    out.labels = ps.labels ? *ps.labels : std::vector<int>(static_cast<std::size_t>(ps.n()), 0);

    Rng rng(seed);
    for (int i = 0; i < extra; ++i) {
        for (int j = 0; j < ps.dim(); ++j)
            out.points(ps.n() + i, j) = rng.uniform(lo[j], hi[j]);
        out.labels->push_back(noise_id);
    }
    out.validate();
    return out;
}

PointSet standardize(const PointSet& ps) {
    PointSet out = ps;
    for (int j = 0; j < ps.dim(); ++j) {
        const double mean = ps.points.col(j).mean();
        const double var = (ps.points.col(j).array() - mean).square().sum() / ps.n();
        out.points.col(j).array() -= mean;
        if (var > 0.0) out.points.col(j) /= std::sqrt(var);
    }
    return out;
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    parts.push_back(cur);
    return parts;
}

std::vector<double> parse_doubles(const std::string& s, const std::string& ctx) {
    std::vector<double> out;
    for (const auto& tok : split(s, ',')) {
        double v;
        if (!parse_double(tok, v)) throw std::runtime_error("generator spec: bad number in " + ctx);
        out.push_back(v);
    }
    return out;
}

std::vector<int> parse_ints(const std::string& s, const std::string& ctx) {
    std::vector<int> out;
    for (double v : parse_doubles(s, ctx)) out.push_back(static_cast<int>(v));
    return out;
}

std::vector<std::vector<double>> parse_centers(const std::string& s) {
    std::vector<std::vector<double>> out;
    for (const auto& grp : split(s, '|')) out.push_back(parse_doubles(grp, "centers"));
    return out;
}

}  // namespace

GeneratorSpec parse_generator_spec(const std::string& text) {
    const auto colon = text.find(':');
    const std::string shape = text.substr(0, colon);
    std::map<std::string, std::string> kv;
    if (colon != std::string::npos) {
        for (const auto& item : split(text.substr(colon + 1), ';')) {
            if (item.empty()) continue;
            const auto eq = item.find('=');
            if (eq == std::string::npos)
                throw std::runtime_error("generator spec: expected key=value, got \"" + item + "\"");
            kv[item.substr(0, eq)] = item.substr(eq + 1);
        }
    }
    auto get = [&kv](const std::string& key) -> std::optional<std::string> {
        auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        return it->second;
    };

    GeneratorSpec spec;
    if (shape == "rings") {
        RingsParams p;
        p.counts = parse_ints(get("n").value_or("300,300"), "n");
        p.radii = parse_doubles(get("r").value_or("4,12"), "r");
        if (auto j = get("jitter")) p.jitter = parse_doubles(*j, "jitter")[0];
        spec.params = p;
    } else if (shape == "lines") {
        LinesParams p;
        p.counts = parse_ints(get("n").value_or("250,250"), "n");
        if (auto v = get("length")) p.length = parse_doubles(*v, "length")[0];
        if (auto v = get("sep")) p.separation = parse_doubles(*v, "sep")[0];
        if (auto v = get("jitter")) p.jitter = parse_doubles(*v, "jitter")[0];
        spec.params = p;
    } else if (shape == "blobs") {
        BlobsParams p;
        p.centers = parse_centers(get("centers").value_or("0,0|10,0|0,10"));
        if (auto v = get("n")) p.points_per_blob = parse_ints(*v, "n")[0];
        if (auto v = get("spread")) p.spread = parse_doubles(*v, "spread")[0];
        spec.params = p;
    } else if (shape == "sparse_blobs") {
        SparseBlobsParams p;
        p.centers = parse_centers(get("centers").value_or("0,0|8,0|4,7"));
        p.counts = parse_ints(get("n").value_or("300,60,60"), "n");
        p.spreads = parse_doubles(get("spread").value_or("0.3,1.2,1.2"), "spread");
        spec.params = p;
    } else {
        throw std::runtime_error("unknown generator shape: \"" + shape + "\"");
    }
    if (auto v = get("noise")) spec.noise_fraction = parse_doubles(*v, "noise")[0];
    return spec;
}

PointSet run_generator(const GeneratorSpec& spec, std::uint64_t seed) {
    PointSet ps = generate(spec.params, seed);
    if (spec.noise_fraction > 0.0) ps = inject_noise(ps, spec.noise_fraction, derive_seed(seed, 0x6e6f6973));
    return ps;
}

}  // namespace rknn
