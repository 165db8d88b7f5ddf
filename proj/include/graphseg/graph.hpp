#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <filesystem>
#include <span>
#include <variant>
#include <vector>

namespace graphseg {

/// One sample per row.
using FeatureMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Rejects empty matrices, fewer than two rows, and non-finite entries.
void validate_features(const FeatureMatrix& features);

struct Edge {
    int i;
    int j;
    double w;

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Undirected weighted graph stored as an upper-triangular edge list.
///
/// Edges are kept sorted by (i, j) with i < j and w finite and positive.
/// Degrees are recomputed from the edge list on construction, so
/// d_i = sum_j w(i, j) holds for the stored values.
class SparseWeightGraph {
public:
    /// Validates and canonicalizes: pairs are reordered so i < j and sorted.
    /// Throws ValidationError on self-edges, duplicate pairs, out-of-range
    /// vertices, or weights that are not finite and positive.
    SparseWeightGraph(int n_vertices, std::vector<Edge> edges);

    int n_vertices() const noexcept { return n_; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    const std::vector<double>& degrees() const noexcept { return degrees_; }

    /// Full symmetric weight matrix W.
    Eigen::SparseMatrix<double> weight_matrix() const;

    friend bool operator==(const SparseWeightGraph&, const SparseWeightGraph&) = default;

private:
    int n_;
    std::vector<Edge> edges_;
    std::vector<double> degrees_;
};

struct GaussianKernel {
    double sigma;
};

/// Zelnik-Manor/Perona local scaling: the bandwidth at each vertex is the
/// distance to its M-th nearest neighbor (the vertex itself not counted).
/// M may exceed the neighbor count N of the graph.
struct LocalScalingKernel {
    int m;
};

struct CosineKernel {};

using WeightKind = std::variant<GaussianKernel, LocalScalingKernel, CosineKernel>;

struct WeightSpec {
    WeightKind kind;
    int neighbors = 10;
};

enum class Metric { euclidean, cosine_distance };

void validate(const WeightSpec& spec);

/// exp(-d^2 / sigma^2)
double gaussian_weight(double distance, double sigma);

/// exp(-d^2 / sqrt(tau_i tau_j)), where tau is the squared local scale.
double local_scaling_weight(double distance, double tau_i, double tau_j);

/// Cosine similarity, clamped below at 0.
double cosine_weight(std::span<const double> x, std::span<const double> y);

/// Union-symmetrized N-nearest-neighbor graph: i and j are joined when either
/// is among the other's N nearest neighbors. Neighbor search is exact; ties in
/// distance go to the lower vertex index. Edges whose weight underflows to
/// zero are dropped.
SparseWeightGraph knn_graph(const FeatureMatrix& features, const WeightSpec& spec,
                            Metric metric = Metric::euclidean);

/// Pairwise distance under `metric` between two feature rows.
double distance(std::span<const double> x, std::span<const double> y, Metric metric);

/// L_s = I - D^{-1/2} W D^{-1/2}.
class NormalizedLaplacian {
public:
    /// Throws ValidationError naming the first isolated vertex, if any.
    explicit NormalizedLaplacian(const SparseWeightGraph& graph);

    int size() const noexcept { return static_cast<int>(matrix_.rows()); }
    const Eigen::SparseMatrix<double>& matrix() const noexcept { return matrix_; }
    /// sqrt(d_i) per vertex; spans the kernel of L_s.
    const Eigen::VectorXd& sqrt_degrees() const noexcept { return sqrt_degrees_; }

    Eigen::VectorXd apply(const Eigen::VectorXd& u) const { return matrix_ * u; }

private:
    Eigen::SparseMatrix<double> matrix_;
    Eigen::VectorXd sqrt_degrees_;
};

inline NormalizedLaplacian normalized_laplacian(const SparseWeightGraph& graph) {
    return NormalizedLaplacian(graph);
}

/// Graph cache: header `graphseg-edges v1 <N_D>`, then one `i j w` line per
/// edge with w printed to 17 significant digits.
void write_graph(const SparseWeightGraph& graph, const std::filesystem::path& path);
SparseWeightGraph read_graph(const std::filesystem::path& path);

}  // namespace graphseg
