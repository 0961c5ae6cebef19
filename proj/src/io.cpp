#include "dge/io.hpp"

#include "dge/boundary.hpp"
#include "dge/eval.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace dge {

namespace {

constexpr char kMagic[4] = {'D', 'G', 'E', 'F'};
constexpr std::uint32_t kBinaryVersion = 1;

[[noreturn]] void io_fail(const std::string& path, const std::string& what) {
    throw std::runtime_error(path + ": " + what);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) io_fail(path, "cannot open for reading");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return std::move(buffer).str();
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) io_fail(path, "cannot open for writing");
    return out;
}

double parse_double(std::string_view text, const std::string& path, Index row, Index column) {
    double value = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end)
        io_fail(path, "row " + std::to_string(row + 1) + ", column " + std::to_string(column + 1) +
                          ": malformed number '" + std::string(text) + "'");
    return value;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    return s;
}

Matrix load_features_csv(const std::string& path, const std::string& content) {
    std::vector<std::vector<double>> rows;
    Index row_index = 0;
    size_t pos = 0;
    while (pos < content.size()) {
        size_t eol = content.find('\n', pos);
        if (eol == std::string::npos) eol = content.size();
        const std::string_view line = trim(std::string_view(content).substr(pos, eol - pos));
        pos = eol + 1;
        if (line.empty()) {
            ++row_index;
            continue;
        }
        std::vector<double> row;
        size_t field_start = 0;
        Index column = 0;
        while (true) {
            size_t comma = line.find(',', field_start);
            const std::string_view field =
                trim(line.substr(field_start, comma == std::string_view::npos ? std::string_view::npos
                                                                              : comma - field_start));
            row.push_back(parse_double(field, path, row_index, column));
            ++column;
            if (comma == std::string_view::npos) break;
            field_start = comma + 1;
        }
        if (!rows.empty() && row.size() != rows.front().size())
            io_fail(path, "row " + std::to_string(row_index + 1) + ": expected " +
                              std::to_string(rows.front().size()) + " columns, got " +
                              std::to_string(row.size()));
        rows.push_back(std::move(row));
        ++row_index;
    }
    if (rows.empty()) io_fail(path, "no feature rows");

    Matrix features(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
    for (Index r = 0; r < features.rows(); ++r)
        for (Index c = 0; c < features.cols(); ++c)
            features(r, c) = rows[static_cast<size_t>(r)][static_cast<size_t>(c)];
    return features;
}

Matrix load_features_binary(const std::string& path, const std::string& content) {
    const auto need = [&](size_t offset, size_t bytes, const char* what) {
        if (content.size() < offset + bytes)
            io_fail(path, std::string("truncated at byte ") + std::to_string(content.size()) +
                              ": expected " + what + " at offset " + std::to_string(offset));
    };
    need(0, 4, "magic");
    if (std::memcmp(content.data(), kMagic, 4) != 0) io_fail(path, "bad magic at byte 0");
    need(4, 4, "version");
    std::uint32_t version = 0;
    std::memcpy(&version, content.data() + 4, 4);
    if (version != kBinaryVersion)
        io_fail(path, "unsupported version " + std::to_string(version) + " at byte 4");
    need(8, 16, "dimensions");
    std::uint64_t n_frames = 0, n_features = 0;
    std::memcpy(&n_frames, content.data() + 8, 8);
    std::memcpy(&n_features, content.data() + 16, 8);
    if (n_frames == 0 || n_features == 0) io_fail(path, "empty dimensions at byte 8");
    const size_t values = static_cast<size_t>(n_frames) * static_cast<size_t>(n_features);
    need(24, values * 4, "value block");

    Matrix features(static_cast<Index>(n_frames), static_cast<Index>(n_features));
    const char* cursor = content.data() + 24;
    for (Index r = 0; r < features.rows(); ++r)
        for (Index c = 0; c < features.cols(); ++c) {
            float value = 0.0f;
            std::memcpy(&value, cursor, 4);
            cursor += 4;
            features(r, c) = static_cast<double>(value);
        }
    return features;
}

std::vector<Index> load_index_lines(const std::string& path, bool allow_negative) {
    const std::string content = read_file(path);
    std::vector<Index> values;
    size_t pos = 0;
    Index line_index = 0;
    while (pos < content.size()) {
        size_t eol = content.find('\n', pos);
        if (eol == std::string::npos) eol = content.size();
        const std::string_view line = trim(std::string_view(content).substr(pos, eol - pos));
        pos = eol + 1;
        ++line_index;
        if (line.empty()) continue;
        Index value = 0;
        const char* begin = line.data();
        const char* end = begin + line.size();
        auto [ptr, ec] = std::from_chars(begin, end, value);
        if (ec != std::errc() || ptr != end)
            io_fail(path, "line " + std::to_string(line_index) + ": not an integer '" +
                              std::string(line) + "'");
        if (!allow_negative && value < 0)
            io_fail(path, "line " + std::to_string(line_index) + ": negative index");
        values.push_back(value);
    }
    return values;
}

void save_index_lines(const std::vector<Index>& values, const std::string& path) {
    std::ofstream out = open_out(path);
    for (const Index value : values) out << value << '\n';
    if (!out) io_fail(path, "write failed");
}

nlohmann::json timings_json(const std::vector<std::pair<std::string, double>>& stage_seconds) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [stage, seconds] : stage_seconds) j[stage] = seconds;
    return j;
}

}  // namespace

Matrix load_features(const std::string& path, FeatureFormat format) {
    const std::string content = read_file(path);
    if (format == FeatureFormat::kAuto)
        format = (content.size() >= 4 && std::memcmp(content.data(), kMagic, 4) == 0)
                     ? FeatureFormat::kBinary
                     : FeatureFormat::kCsv;
    return format == FeatureFormat::kBinary ? load_features_binary(path, content)
                                            : load_features_csv(path, content);
}

void save_features_csv(const Matrix& features, const std::string& path) {
    std::ofstream out = open_out(path);
    char buffer[40];
    for (Index r = 0; r < features.rows(); ++r) {
        for (Index c = 0; c < features.cols(); ++c) {
            std::snprintf(buffer, sizeof(buffer), "%.17g", features(r, c));
            out << (c == 0 ? "" : ",") << buffer;
        }
        out << '\n';
    }
    if (!out) io_fail(path, "write failed");
}

void save_features_binary(const Matrix& features, const std::string& path) {
    std::ofstream out = open_out(path);
    out.write(kMagic, 4);
    const std::uint32_t version = kBinaryVersion;
    out.write(reinterpret_cast<const char*>(&version), 4);
    const std::uint64_t n_frames = static_cast<std::uint64_t>(features.rows());
    const std::uint64_t n_features = static_cast<std::uint64_t>(features.cols());
    out.write(reinterpret_cast<const char*>(&n_frames), 8);
    out.write(reinterpret_cast<const char*>(&n_features), 8);
    for (Index r = 0; r < features.rows(); ++r)
        for (Index c = 0; c < features.cols(); ++c) {
            const float value = static_cast<float>(features(r, c));
            out.write(reinterpret_cast<const char*>(&value), 4);
        }
    if (!out) io_fail(path, "write failed");
}

BoundaryList load_boundaries(const std::string& path) {
    BoundaryList values = load_index_lines(path, false);
    BoundaryList sorted = values;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    if (sorted != values)
        warn(path + ": boundary indices were reordered or deduplicated on load");
    return sorted;
}

void save_boundaries(const BoundaryList& boundaries, const std::string& path) {
    save_index_lines(boundaries, path);
}

std::vector<Index> load_labels(const std::string& path) { return load_index_lines(path, true); }

void save_labels(const std::vector<Index>& labels, const std::string& path) {
    save_index_lines(labels, path);
}

void dump_graph_heatmap(const Matrix& graph, const std::string& path, double threshold_fraction) {
    if (!(threshold_fraction >= 0.0 && threshold_fraction <= 1.0))
        throw std::invalid_argument("threshold fraction out of range");

    double max_all = 0.0;
    double max_off = 0.0;
    for (Index r = 0; r < graph.rows(); ++r)
        for (Index c = 0; c < graph.cols(); ++c) {
            max_all = std::max(max_all, graph(r, c));
            if (r != c) max_off = std::max(max_off, graph(r, c));
        }
    const double threshold = threshold_fraction * max_off;

    std::ofstream out = open_out(path);
    out << "P5\n" << graph.cols() << " " << graph.rows() << "\n255\n";
    for (Index r = 0; r < graph.rows(); ++r)
        for (Index c = 0; c < graph.cols(); ++c) {
            const double value = graph(r, c);
            double scaled = 0.0;
            if (max_all > 0.0 && value > 0.0 && value >= threshold)
                scaled = 255.0 * value / max_all;
            const long pixel = std::lround(std::clamp(scaled, 0.0, 255.0));
            out.put(static_cast<char>(static_cast<unsigned char>(pixel)));
        }
    if (!out) io_fail(path, "write failed");
}

nlohmann::json hyperparams_to_json(const Hyperparams& p) {
    return nlohmann::json{{"M", p.patch_halfwidth},
                          {"L", p.search_halfwidth},
                          {"h", p.nl_decay},
                          {"lhat", p.feature_kernel_decay},
                          {"ltilde", p.embed_kernel_decay},
                          {"d", p.embed_dim},
                          {"K", p.dge_iterations},
                          {"alpha", p.loss_mix},
                          {"p", p.average_kernel_size},
                          {"eta", p.temporal_shrink},
                          {"mu", p.semantic_shrink},
                          {"nc", p.cluster_count},
                          {"gd_iters", p.descent_iterations},
                          {"window", p.detector_window},
                          {"z", p.detector_z},
                          {"min_sep", p.detector_min_separation},
                          {"seed", p.seed}};
}

Hyperparams hyperparams_from_json(const nlohmann::json& j) {
    Hyperparams p;
    p.patch_halfwidth = j.at("M").get<int>();
    p.search_halfwidth = j.at("L").get<int>();
    p.nl_decay = j.at("h").get<double>();
    p.feature_kernel_decay = j.at("lhat").get<double>();
    p.embed_kernel_decay = j.at("ltilde").get<double>();
    p.embed_dim = j.at("d").get<int>();
    p.dge_iterations = j.at("K").get<int>();
    p.loss_mix = j.at("alpha").get<double>();
    p.average_kernel_size = j.at("p").get<int>();
    p.temporal_shrink = j.at("eta").get<double>();
    p.semantic_shrink = j.at("mu").get<double>();
    p.cluster_count = j.at("nc").get<int>();
    p.descent_iterations = j.at("gd_iters").get<int>();
    p.detector_window = j.at("window").get<int>();
    p.detector_z = j.at("z").get<double>();
    p.detector_min_separation = j.at("min_sep").get<int>();
    p.seed = j.at("seed").get<std::uint64_t>();
    return p;
}

RunDiagnostics make_diagnostics(const SegmentOutcome& outcome, const Hyperparams& params,
                                Index n_features, const BoundaryList* gt) {
    RunDiagnostics diag;
    diag.params = params;
    diag.n_frames = outcome.dge.embedding.rows();
    diag.n_features = n_features;
    diag.boundaries = outcome.boundaries;
    diag.stage_seconds = outcome.stage_seconds;

    for (const DgeState& state : outcome.dge.history) {
        RunDiagnostics::Iteration entry;
        entry.iteration = state.iteration;
        entry.objective_initial = state.descent.initial_objective;
        entry.objective_final = state.descent.objectives.empty()
                                    ? state.descent.initial_objective
                                    : state.descent.objectives.back();
        entry.steps = static_cast<int>(state.descent.objectives.size());
        if (gt != nullptr) {
            const BoundaryScores scores = boundary_scores(state.embedding, params.detector_window);
            const BoundaryList pred =
                detect_boundaries(scores, params.detector_z, params.detector_min_separation);
            const PrfReport report = prf_at_tolerance(pred, *gt, 5);
            entry.has_metrics = true;
            entry.f_score = report.f_score;
            entry.precision = report.precision;
            entry.recall = report.recall;
        }
        diag.iterations.push_back(entry);
    }
    return diag;
}

nlohmann::json diagnostics_to_json(const RunDiagnostics& diag, bool include_timings) {
    nlohmann::json iterations = nlohmann::json::array();
    for (const auto& entry : diag.iterations) {
        nlohmann::json j{{"iteration", entry.iteration},
                         {"objective_initial", entry.objective_initial},
                         {"objective_final", entry.objective_final},
                         {"steps", entry.steps}};
        if (entry.has_metrics) {
            j["f_score"] = entry.f_score;
            j["precision"] = entry.precision;
            j["recall"] = entry.recall;
        }
        iterations.push_back(std::move(j));
    }
    nlohmann::json j{{"hyperparameters", hyperparams_to_json(diag.params)},
                     {"n_frames", diag.n_frames},
                     {"n_features", diag.n_features},
                     {"iterations", std::move(iterations)},
                     {"boundaries", diag.boundaries}};
    if (include_timings) j["timings_seconds"] = timings_json(diag.stage_seconds);
    return j;
}

void write_diagnostics(const RunDiagnostics& diag, const std::string& path, bool include_timings) {
    std::ofstream out = open_out(path);
    out << diagnostics_to_json(diag, include_timings).dump(2) << '\n';
    if (!out) io_fail(path, "write failed");
}

}  // namespace dge
