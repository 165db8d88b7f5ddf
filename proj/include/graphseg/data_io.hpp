#pragma once

#include "graphseg/graph.hpp"
#include "graphseg/label_field.hpp"

#include <cstdint>
#include <filesystem>
#include <variant>
#include <vector>

namespace graphseg {

struct LabeledDataset {
    FeatureMatrix features;
    std::vector<int> labels;
    int n_classes = 0;

    /// Label range, row agreement, and non-empty classes.
    void validate() const;
    std::vector<int> class_sizes() const;
};

/// Three noisy half circles embedded in a high-dimensional space.
struct MoonsSpec {
    int points_per_class = 500;
    double left_center_x = 0.0;   // top half of a unit circle at (0, 0)
    double right_center_x = 3.0;  // top half of a unit circle at (3, 0)
    double top_radius = 1.0;
    double bottom_center_x = 1.5;  // bottom half of a circle at (1.5, 0.4)
    double bottom_center_y = 0.4;
    double bottom_radius = 1.5;
    int dimension = 100;
    double noise = 0.14;
    std::uint64_t seed = 0;
};

/// Labels come in three contiguous blocks: left top circle, right top
/// circle, bottom circle. Angles are uniform on each half circle; Gaussian
/// noise is added to every coordinate of the embedded point.
LabeledDataset generate_three_moons(const MoonsSpec& spec);

/// Headerless CSV, one sample per row. Errors carry the line number.
FeatureMatrix load_features_csv(const std::filesystem::path& path);
void write_features_csv(const FeatureMatrix& features, const std::filesystem::path& path);

/// One 0-based class index per line.
std::vector<int> load_labels_csv(const std::filesystem::path& path);
void write_labels(const std::vector<int>& labels, const std::filesystem::path& path);

/// Pairs features with labels; K is max label + 1 unless given.
LabeledDataset make_dataset(FeatureMatrix features, std::vector<int> labels, int n_classes = 0);

/// MNIST IDX pair: images (magic 0x00000803) scaled to [0, 1] by 1/255 and
/// flattened row-major; labels (magic 0x00000801). K is the largest label + 1.
LabeledDataset load_mnist_idx(const std::filesystem::path& images, const std::filesystem::path& labels);
/// Writes an IDX pair; pixels are rounded from [0, 1] back to bytes.
void write_mnist_idx(const LabeledDataset& data, int rows, int cols, const std::filesystem::path& images,
                     const std::filesystem::path& labels);

/// Fidelity quota: a fixed count per class, or a fraction of each class
/// rounded by largest remainder so the total is round(fraction * N_D).
struct PerClassCount {
    int count;
};
struct ClassFraction {
    double fraction;
};
using FidelityQuota = std::variant<PerClassCount, ClassFraction>;

/// Uniform sampling without replacement within each class. The result is
/// ordered by class, then by draw order.
FidelitySet sample_fidelity(const LabeledDataset& data, const FidelityQuota& quota, std::uint64_t seed);

/// Largest-remainder split of round(fraction * total) over class sizes.
std::vector<int> proportional_quotas(const std::vector<int>& class_sizes, double fraction);

/// Stratified subset: the first `per_class` samples of each class after a
/// seeded shuffle, in original order.
LabeledDataset stratified_subset(const LabeledDataset& data, int per_class, std::uint64_t seed);

}  // namespace graphseg
