#include "graphseg/data_io.hpp"

#include "graphseg/error.hpp"
#include "graphseg/rng.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <string>

namespace graphseg {

void LabeledDataset::validate() const {
    if (static_cast<Eigen::Index>(labels.size()) != features.rows()) {
        throw ValidationError("dataset has " + std::to_string(features.rows()) + " feature rows but " +
                              std::to_string(labels.size()) + " labels");
    }
    if (n_classes < 1) throw ValidationError("dataset needs at least one class");
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] < 0 || labels[i] >= n_classes) {
            throw ValidationError("label " + std::to_string(labels[i]) + " of sample " + std::to_string(i) +
                                  " outside [0, " + std::to_string(n_classes) + ")");
        }
    }
    const auto sizes = class_sizes();
    for (int k = 0; k < n_classes; ++k) {
        if (sizes[k] == 0) throw ValidationError("class " + std::to_string(k) + " has no samples");
    }
}

std::vector<int> LabeledDataset::class_sizes() const {
    std::vector<int> sizes(static_cast<std::size_t>(std::max(n_classes, 0)), 0);
    for (int l : labels) {
        if (l >= 0 && l < n_classes) ++sizes[l];
    }
    return sizes;
}

LabeledDataset generate_three_moons(const MoonsSpec& spec) {
    if (spec.points_per_class < 1 || spec.dimension < 2 || !(spec.noise >= 0.0) || !(spec.top_radius > 0.0) ||
        !(spec.bottom_radius > 0.0)) {
        throw ValidationError("invalid three-moons specification");
    }
    struct Arc {
        double cx, cy, r, start;
    };
    const std::array<Arc, 3> arcs{{
        {spec.left_center_x, 0.0, spec.top_radius, 0.0},
        {spec.right_center_x, 0.0, spec.top_radius, 0.0},
        {spec.bottom_center_x, spec.bottom_center_y, spec.bottom_radius, std::numbers::pi},
    }};

    const int n = 3 * spec.points_per_class;
    LabeledDataset out;
    out.n_classes = 3;
    out.features = FeatureMatrix::Zero(n, spec.dimension);
    out.labels.resize(n);
    Rng rng(spec.seed);
    int row = 0;
    for (int k = 0; k < 3; ++k) {
        const Arc& arc = arcs[k];
        for (int p = 0; p < spec.points_per_class; ++p, ++row) {
            const double theta = arc.start + std::numbers::pi * rng.uniform();
            out.features(row, 0) = arc.cx + arc.r * std::cos(theta);
            out.features(row, 1) = arc.cy + arc.r * std::sin(theta);
            if (spec.noise > 0.0) {
                for (int d = 0; d < spec.dimension; ++d) out.features(row, d) += spec.noise * rng.normal();
            }
            out.labels[row] = k;
        }
    }
    return out;
}

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

template <class T>
T parse_cell(std::string_view cell, std::size_t lineno) {
    cell = trim(cell);
    T value{};
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    if (!cell.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (cell.empty() || ec != std::errc() || ptr != last) {
        throw FormatError("non-numeric cell '" + std::string(cell) + "'", lineno);
    }
    return value;
}

}  // namespace

FeatureMatrix load_features_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open feature file " + path.string());
    std::vector<double> values;
    std::size_t cols = 0;
    std::size_t rows = 0;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string_view text = trim(line);
        if (text.empty()) continue;
        std::size_t count = 0;
        std::size_t pos = 0;
        while (true) {
            const std::size_t comma = text.find(',', pos);
            const std::string_view cell = text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos);
            const double x = parse_cell<double>(cell, lineno);
            if (!std::isfinite(x)) throw FormatError("non-finite value", lineno);
            values.push_back(x);
            ++count;
            if (comma == std::string_view::npos) break;
            pos = comma + 1;
        }
        if (rows == 0) {
            cols = count;
        } else if (count != cols) {
            throw FormatError("ragged row: expected " + std::to_string(cols) + " columns, got " + std::to_string(count),
                              lineno);
        }
        ++rows;
    }
    if (rows == 0) throw FormatError("feature file " + path.string() + " is empty");
    return Eigen::Map<const FeatureMatrix>(values.data(), static_cast<Eigen::Index>(rows),
                                           static_cast<Eigen::Index>(cols));
}

void write_features_csv(const FeatureMatrix& features, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write " + path.string());
    out.precision(17);
    for (Eigen::Index i = 0; i < features.rows(); ++i) {
        for (Eigen::Index j = 0; j < features.cols(); ++j) out << (j ? "," : "") << features(i, j);
        out << '\n';
    }
    if (!out) throw ValidationError("error writing " + path.string());
}

std::vector<int> load_labels_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open label file " + path.string());
    std::vector<int> labels;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string_view text = trim(line);
        if (text.empty()) continue;
        if (text.find(',') != std::string_view::npos) throw FormatError("expected one label per line", lineno);
        const int label = parse_cell<int>(text, lineno);
        if (label < 0) throw FormatError("negative label", lineno);
        labels.push_back(label);
    }
    if (labels.empty()) throw FormatError("label file " + path.string() + " is empty");
    return labels;
}

void write_labels(const std::vector<int>& labels, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write " + path.string());
    for (int l : labels) out << l << '\n';
    if (!out) throw ValidationError("error writing " + path.string());
}

LabeledDataset make_dataset(FeatureMatrix features, std::vector<int> labels, int n_classes) {
    if (static_cast<Eigen::Index>(labels.size()) != features.rows()) {
        throw ValidationError("label count " + std::to_string(labels.size()) + " does not match feature rows " +
                              std::to_string(features.rows()));
    }
    LabeledDataset out;
    out.features = std::move(features);
    out.labels = std::move(labels);
    out.n_classes = n_classes > 0 ? n_classes
                                  : (out.labels.empty() ? 0 : *std::max_element(out.labels.begin(), out.labels.end()) + 1);
    out.validate();
    return out;
}

namespace {

std::uint32_t read_be32(std::istream& in, const std::filesystem::path& path) {
    unsigned char b[4];
    if (!in.read(reinterpret_cast<char*>(b), 4)) throw FormatError("truncated IDX header in " + path.string());
    return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) | (std::uint32_t{b[2]} << 8) | b[3];
}

void write_be32(std::ostream& out, std::uint32_t v) {
    const char b[4] = {static_cast<char>(v >> 24), static_cast<char>(v >> 16), static_cast<char>(v >> 8),
                       static_cast<char>(v)};
    out.write(b, 4);
}

constexpr std::uint32_t kImageMagic = 0x00000803;
constexpr std::uint32_t kLabelMagic = 0x00000801;

}  // namespace

LabeledDataset load_mnist_idx(const std::filesystem::path& images, const std::filesystem::path& labels) {
    std::ifstream img(images, std::ios::binary);
    if (!img) throw ValidationError("cannot open IDX image file " + images.string());
    std::ifstream lab(labels, std::ios::binary);
    if (!lab) throw ValidationError("cannot open IDX label file " + labels.string());

    if (read_be32(img, images) != kImageMagic) throw FormatError("bad IDX image magic in " + images.string());
    const std::uint32_t count = read_be32(img, images);
    const std::uint32_t rows = read_be32(img, images);
    const std::uint32_t cols = read_be32(img, images);
    if (read_be32(lab, labels) != kLabelMagic) throw FormatError("bad IDX label magic in " + labels.string());
    const std::uint32_t label_count = read_be32(lab, labels);
    if (label_count != count) {
        throw ValidationError("IDX files disagree: " + std::to_string(count) + " images, " +
                              std::to_string(label_count) + " labels");
    }
    const std::size_t pixels = static_cast<std::size_t>(rows) * cols;
    if (count == 0 || pixels == 0) throw FormatError("empty IDX payload in " + images.string());

    std::vector<unsigned char> raw(static_cast<std::size_t>(count) * pixels);
    if (!img.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()))) {
        throw FormatError("truncated IDX image payload in " + images.string());
    }
    std::vector<unsigned char> raw_labels(count);
    if (!lab.read(reinterpret_cast<char*>(raw_labels.data()), static_cast<std::streamsize>(count))) {
        throw FormatError("truncated IDX label payload in " + labels.string());
    }

    FeatureMatrix features(count, static_cast<Eigen::Index>(pixels));
    for (std::size_t i = 0; i < raw.size(); ++i) features.data()[i] = raw[i] / 255.0;
    std::vector<int> label_vec(raw_labels.begin(), raw_labels.end());
    for (int l : label_vec) {
        if (l > 9) throw FormatError("IDX label " + std::to_string(l) + " outside 0-9");
    }
    return make_dataset(std::move(features), std::move(label_vec));
}

void write_mnist_idx(const LabeledDataset& data, int rows, int cols, const std::filesystem::path& images,
                     const std::filesystem::path& labels) {
    data.validate();
    if (static_cast<Eigen::Index>(rows) * cols != data.features.cols()) {
        throw ValidationError("IDX image shape does not match the feature width");
    }
    std::ofstream img(images, std::ios::binary);
    std::ofstream lab(labels, std::ios::binary);
    if (!img || !lab) throw ValidationError("cannot write IDX files");
    const auto n = static_cast<std::uint32_t>(data.features.rows());
    write_be32(img, kImageMagic);
    write_be32(img, n);
    write_be32(img, static_cast<std::uint32_t>(rows));
    write_be32(img, static_cast<std::uint32_t>(cols));
    for (Eigen::Index i = 0; i < data.features.size(); ++i) {
        const double v = std::clamp(data.features.data()[i], 0.0, 1.0);
        img.put(static_cast<char>(static_cast<unsigned char>(std::lround(v * 255.0))));
    }
    write_be32(lab, kLabelMagic);
    write_be32(lab, n);
    for (int l : data.labels) lab.put(static_cast<char>(l));
    if (!img || !lab) throw ValidationError("error writing IDX files");
}

std::vector<int> proportional_quotas(const std::vector<int>& class_sizes, double fraction) {
    if (!(fraction > 0.0) || fraction > 1.0) throw ValidationError("fidelity fraction must lie in (0, 1]");
    const long total_size = std::accumulate(class_sizes.begin(), class_sizes.end(), 0L);
    const long target = std::lround(fraction * static_cast<double>(total_size));
    std::vector<int> quotas(class_sizes.size());
    std::vector<std::pair<double, std::size_t>> remainders;
    long assigned = 0;
    for (std::size_t k = 0; k < class_sizes.size(); ++k) {
        const double exact = fraction * class_sizes[k];
        quotas[k] = static_cast<int>(std::floor(exact));
        assigned += quotas[k];
        remainders.emplace_back(exact - quotas[k], k);
    }
    // Largest remainder first, lower class index on ties.
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t t = 0; assigned < target && t < remainders.size(); ++t, ++assigned) {
        ++quotas[remainders[t].second];
    }
    return quotas;
}

FidelitySet sample_fidelity(const LabeledDataset& data, const FidelityQuota& quota, std::uint64_t seed) {
    data.validate();
    const auto sizes = data.class_sizes();
    std::vector<int> quotas;
    if (const auto* count = std::get_if<PerClassCount>(&quota)) {
        if (count->count < 1) throw ValidationError("fidelity count per class must be >= 1");
        quotas.assign(sizes.size(), count->count);
    } else {
        quotas = proportional_quotas(sizes, std::get<ClassFraction>(quota).fraction);
    }

    std::vector<std::vector<int>> members(sizes.size());
    for (std::size_t i = 0; i < data.labels.size(); ++i) members[data.labels[i]].push_back(static_cast<int>(i));

    FidelitySet out;
    out.n_vertices = static_cast<int>(data.labels.size());
    out.n_classes = data.n_classes;
    Rng rng(seed);
    for (std::size_t k = 0; k < members.size(); ++k) {
        if (quotas[k] > static_cast<int>(members[k].size())) {
            throw ValidationError("class " + std::to_string(k) + " has " + std::to_string(members[k].size()) +
                                  " samples, fewer than the requested " + std::to_string(quotas[k]));
        }
        rng.shuffle(members[k]);
        for (int t = 0; t < quotas[k]; ++t) {
            out.indices.push_back(members[k][t]);
            out.classes.push_back(static_cast<int>(k));
        }
    }
    out.validate();
    return out;
}

LabeledDataset stratified_subset(const LabeledDataset& data, int per_class, std::uint64_t seed) {
    const FidelitySet pick = sample_fidelity(data, PerClassCount{per_class}, seed);
    std::vector<int> rows = pick.indices;
    std::sort(rows.begin(), rows.end());
    FeatureMatrix features(static_cast<Eigen::Index>(rows.size()), data.features.cols());
    std::vector<int> labels;
    labels.reserve(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        features.row(static_cast<Eigen::Index>(r)) = data.features.row(rows[r]);
        labels.push_back(data.labels[rows[r]]);
    }
    return make_dataset(std::move(features), std::move(labels), data.n_classes);
}

}  // namespace graphseg
