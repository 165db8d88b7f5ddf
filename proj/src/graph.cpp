#include "graphseg/graph.hpp"

#include "graphseg/error.hpp"
#include "graphseg/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

namespace graphseg {

void validate_features(const FeatureMatrix& features) {
    if (features.rows() < 2 || features.cols() < 1) {
        throw ValidationError("feature matrix needs at least 2 rows and 1 column, got " +
                              std::to_string(features.rows()) + "x" +
                              std::to_string(features.cols()));
    }
    if (!features.allFinite()) {
        throw ValidationError("feature matrix contains non-finite entries");
    }
}

SparseWeightGraph::SparseWeightGraph(int n_vertices, std::vector<Edge> edges)
    : n_(n_vertices), edges_(std::move(edges)), degrees_(static_cast<std::size_t>(std::max(n_vertices, 0)), 0.0) {
    if (n_ < 1) throw ValidationError("graph needs at least one vertex");
    for (auto& e : edges_) {
        if (e.i > e.j) std::swap(e.i, e.j);
        if (e.i < 0 || e.j >= n_) {
            throw ValidationError("edge (" + std::to_string(e.i) + ", " + std::to_string(e.j) +
                                  ") out of range for " + std::to_string(n_) + " vertices");
        }
        if (e.i == e.j) throw ValidationError("self-edge at vertex " + std::to_string(e.i));
        if (!std::isfinite(e.w) || e.w <= 0.0) {
            throw ValidationError("edge (" + std::to_string(e.i) + ", " + std::to_string(e.j) +
                                  ") has non-positive or non-finite weight");
        }
    }
    std::sort(edges_.begin(), edges_.end(),
              [](const Edge& a, const Edge& b) { return a.i != b.i ? a.i < b.i : a.j < b.j; });
    for (std::size_t k = 1; k < edges_.size(); ++k) {
        if (edges_[k].i == edges_[k - 1].i && edges_[k].j == edges_[k - 1].j) {
            throw ValidationError("duplicate edge (" + std::to_string(edges_[k].i) + ", " +
                                  std::to_string(edges_[k].j) + ")");
        }
    }
    for (const auto& e : edges_) {
        degrees_[e.i] += e.w;
        degrees_[e.j] += e.w;
    }
}

Eigen::SparseMatrix<double> SparseWeightGraph::weight_matrix() const {
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(2 * edges_.size());
    for (const auto& e : edges_) {
        triplets.emplace_back(e.i, e.j, e.w);
        triplets.emplace_back(e.j, e.i, e.w);
    }
    Eigen::SparseMatrix<double> w(n_, n_);
    w.setFromTriplets(triplets.begin(), triplets.end());
    return w;
}

void validate(const WeightSpec& spec) {
    if (spec.neighbors < 1) throw ValidationError("neighbor count N must be >= 1");
    if (const auto* g = std::get_if<GaussianKernel>(&spec.kind)) {
        if (!(g->sigma > 0.0) || !std::isfinite(g->sigma)) {
            throw ValidationError("gaussian sigma must be positive and finite");
        }
    } else if (const auto* ls = std::get_if<LocalScalingKernel>(&spec.kind)) {
        if (ls->m < 1) throw ValidationError("local scaling index M must be >= 1");
    }
}

double gaussian_weight(double distance, double sigma) {
    if (!(sigma > 0.0)) throw ValidationError("gaussian sigma must be positive");
    if (!(distance >= 0.0)) throw ValidationError("distance must be nonnegative");
    return std::exp(-(distance * distance) / (sigma * sigma));
}

double local_scaling_weight(double distance, double tau_i, double tau_j) {
    if (!(tau_i > 0.0) || !(tau_j > 0.0)) {
        throw ValidationError("local scale must be positive (duplicate points at the M-th neighbor?)");
    }
    if (!(distance >= 0.0)) throw ValidationError("distance must be nonnegative");
    return std::exp(-(distance * distance) / std::sqrt(tau_i * tau_j));
}

namespace {

double dot(std::span<const double> x, std::span<const double> y) {
    // Four fixed lanes: vectorizes, and the summation order is the same for
    // (x, y) and (y, x).
    double a0 = 0, a1 = 0, a2 = 0, a3 = 0;
    const std::size_t n = x.size();
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        a0 += x[k] * y[k];
        a1 += x[k + 1] * y[k + 1];
        a2 += x[k + 2] * y[k + 2];
        a3 += x[k + 3] * y[k + 3];
    }
    for (; k < n; ++k) a0 += x[k] * y[k];
    return (a0 + a1) + (a2 + a3);
}

double squared_euclidean(std::span<const double> x, std::span<const double> y) {
    double a0 = 0, a1 = 0, a2 = 0, a3 = 0;
    const std::size_t n = x.size();
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        const double d0 = x[k] - y[k], d1 = x[k + 1] - y[k + 1];
        const double d2 = x[k + 2] - y[k + 2], d3 = x[k + 3] - y[k + 3];
        a0 += d0 * d0;
        a1 += d1 * d1;
        a2 += d2 * d2;
        a3 += d3 * d3;
    }
    for (; k < n; ++k) {
        const double d = x[k] - y[k];
        a0 += d * d;
    }
    return (a0 + a1) + (a2 + a3);
}

std::span<const double> row(const FeatureMatrix& m, Eigen::Index i) {
    return {m.data() + i * m.cols(), static_cast<std::size_t>(m.cols())};
}

// Distances between rows of a feature matrix. For the cosine metric rows are
// normalized once up front.
class DistanceTable {
public:
    DistanceTable(const FeatureMatrix& features, Metric metric) : metric_(metric), rows_(features) {
        if (metric_ == Metric::cosine_distance) {
            for (Eigen::Index i = 0; i < rows_.rows(); ++i) {
                const double norm = rows_.row(i).norm();
                if (norm == 0.0) {
                    throw ValidationError("cosine metric: sample " + std::to_string(i) + " is the zero vector");
                }
                rows_.row(i) /= norm;
            }
        }
    }

    double operator()(Eigen::Index i, Eigen::Index j) const {
        if (metric_ == Metric::euclidean) return std::sqrt(squared_euclidean(row(rows_, i), row(rows_, j)));
        return std::max(0.0, 1.0 - dot(row(rows_, i), row(rows_, j)));
    }

    double similarity(Eigen::Index i, Eigen::Index j) const { return dot(row(rows_, i), row(rows_, j)); }

private:
    Metric metric_;
    FeatureMatrix rows_;
};

struct Neighbor {
    double d;
    int j;
    bool operator<(const Neighbor& o) const { return d != o.d ? d < o.d : j < o.j; }
};

}  // namespace

double cosine_weight(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ValidationError("cosine_weight: dimension mismatch");
    const double nx = std::sqrt(dot(x, x));
    const double ny = std::sqrt(dot(y, y));
    if (nx == 0.0 || ny == 0.0) throw ValidationError("cosine_weight: zero vector");
    return std::max(0.0, dot(x, y) / (nx * ny));
}

double distance(std::span<const double> x, std::span<const double> y, Metric metric) {
    if (x.size() != y.size()) throw ValidationError("distance: dimension mismatch");
    if (metric == Metric::euclidean) return std::sqrt(squared_euclidean(x, y));
    const double nx = std::sqrt(dot(x, x));
    const double ny = std::sqrt(dot(y, y));
    if (nx == 0.0 || ny == 0.0) throw ValidationError("cosine distance: zero vector");
    return std::max(0.0, 1.0 - dot(x, y) / (nx * ny));
}

SparseWeightGraph knn_graph(const FeatureMatrix& features, const WeightSpec& spec, Metric metric) {
    validate_features(features);
    validate(spec);
    const int n = static_cast<int>(features.rows());
    const int k = spec.neighbors;
    if (k >= n) {
        throw ValidationError("neighbor count N=" + std::to_string(k) + " must be below the sample count " +
                              std::to_string(n));
    }
    if (std::holds_alternative<CosineKernel>(spec.kind) && metric != Metric::cosine_distance) {
        throw ValidationError("cosine weights require the cosine distance metric");
    }

    // The local scale may reach past the N-th neighbor.
    int search = k;
    if (const auto* ls = std::get_if<LocalScalingKernel>(&spec.kind)) {
        if (ls->m >= n) {
            throw ValidationError("local scaling index M=" + std::to_string(ls->m) +
                                  " must be below the sample count " + std::to_string(n));
        }
        search = std::max(k, ls->m);
    }

    const DistanceTable dist(features, metric);

    // Nearest neighbors per row, ascending by (distance, index).
    std::vector<std::vector<Neighbor>> nearest(n);
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t begin, std::size_t end) {
        std::vector<Neighbor> candidates;
        candidates.reserve(n - 1);
        for (std::size_t qi = begin; qi < end; ++qi) {
            const int q = static_cast<int>(qi);
            candidates.clear();
            for (int j = 0; j < n; ++j) {
                if (j != q) candidates.push_back({dist(q, j), j});
            }
            std::partial_sort(candidates.begin(), candidates.begin() + search, candidates.end());
            nearest[q].assign(candidates.begin(), candidates.begin() + search);
        }
    });

    std::vector<double> tau;
    if (const auto* ls = std::get_if<LocalScalingKernel>(&spec.kind)) {
        tau.resize(n);
        for (int i = 0; i < n; ++i) {
            const double scale = nearest[i][ls->m - 1].d;
            if (!(scale > 0.0)) {
                throw ValidationError("vertex " + std::to_string(i) + " has zero local scale: its " +
                                      std::to_string(ls->m) + "-th neighbor is a duplicate point");
            }
            tau[i] = scale * scale;
        }
    }

    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(static_cast<std::size_t>(n) * k);
    for (int i = 0; i < n; ++i) {
        for (int r = 0; r < k; ++r) {
            const int j = nearest[i][r].j;
            pairs.emplace_back(std::min(i, j), std::max(i, j));
        }
    }
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());

    std::vector<Edge> edges;
    edges.reserve(pairs.size());
    for (const auto& [i, j] : pairs) {
        double w = 0.0;
        if (const auto* g = std::get_if<GaussianKernel>(&spec.kind)) {
            w = gaussian_weight(dist(i, j), g->sigma);
        } else if (std::holds_alternative<LocalScalingKernel>(spec.kind)) {
            w = local_scaling_weight(dist(i, j), tau[i], tau[j]);
        } else {
            w = std::max(0.0, dist.similarity(i, j));
        }
        if (w > 0.0) edges.push_back({i, j, w});
    }
    return SparseWeightGraph(n, std::move(edges));
}

NormalizedLaplacian::NormalizedLaplacian(const SparseWeightGraph& graph) {
    const int n = graph.n_vertices();
    const auto& deg = graph.degrees();
    sqrt_degrees_.resize(n);
    for (int i = 0; i < n; ++i) {
        if (!(deg[i] > 0.0)) {
            throw ValidationError("vertex " + std::to_string(i) + " is isolated (zero degree)");
        }
        sqrt_degrees_[i] = std::sqrt(deg[i]);
    }
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(2 * graph.edges().size() + n);
    for (int i = 0; i < n; ++i) triplets.emplace_back(i, i, 1.0);
    for (const auto& e : graph.edges()) {
        const double v = -e.w / (sqrt_degrees_[e.i] * sqrt_degrees_[e.j]);
        triplets.emplace_back(e.i, e.j, v);
        triplets.emplace_back(e.j, e.i, v);
    }
    matrix_.resize(n, n);
    matrix_.setFromTriplets(triplets.begin(), triplets.end());
}

void write_graph(const SparseWeightGraph& graph, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write graph file " + path.string());
    out << "graphseg-edges v1 " << graph.n_vertices() << '\n';
    out.precision(17);
    for (const auto& e : graph.edges()) out << e.i << ' ' << e.j << ' ' << e.w << '\n';
    if (!out) throw ValidationError("error writing graph file " + path.string());
}

SparseWeightGraph read_graph(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open graph file " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw FormatError("empty graph file " + path.string(), 1);
    std::istringstream header(line);
    std::string magic, version;
    long long n = -1;
    header >> magic >> version >> n;
    if (magic != "graphseg-edges" || version != "v1" || n < 1 || header.fail()) {
        throw FormatError("bad graph header in " + path.string(), 1);
    }
    std::string rest;
    if (header >> rest) throw FormatError("trailing tokens in graph header", 1);

    std::vector<Edge> edges;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream fields(line);
        Edge e{};
        if (!(fields >> e.i >> e.j >> e.w) || (fields >> rest)) {
            throw FormatError("malformed edge line in " + path.string(), lineno);
        }
        if (e.i >= e.j) throw FormatError("edge must satisfy i < j", lineno);
        edges.push_back(e);
    }
    try {
        return SparseWeightGraph(static_cast<int>(n), std::move(edges));
    } catch (const FormatError&) {
        throw;
    } catch (const ValidationError& err) {
        throw FormatError(std::string("invalid graph file ") + path.string() + ": " + err.what());
    }
}

}  // namespace graphseg
