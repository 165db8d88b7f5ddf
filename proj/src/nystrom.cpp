#include "graphseg/error.hpp"
#include "graphseg/manifest.hpp"
#include "graphseg/rng.hpp"
#include "graphseg/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace graphseg {

namespace {

std::span<const double> row_span(const FeatureMatrix& m, Eigen::Index i) {
    return {m.data() + i * m.cols(), static_cast<std::size_t>(m.cols())};
}

// Pairwise kernel over feature rows, self-similarity included.
class Kernel {
public:
    Kernel(const FeatureMatrix& features, const WeightSpec& spec, Metric metric)
        : features_(features), spec_(spec), metric_(metric) {
        validate_features(features);
        validate(spec);
        if (std::holds_alternative<CosineKernel>(spec.kind) && metric != Metric::cosine_distance) {
            throw ValidationError("cosine weights require the cosine distance metric");
        }
        if (const auto* ls = std::get_if<LocalScalingKernel>(&spec.kind)) {
            const Eigen::Index n = features.rows();
            if (ls->m >= n) throw ValidationError("local scaling index M must be below the sample count");
            tau_.resize(n);
            std::vector<double> d(n - 1);
            for (Eigen::Index i = 0; i < n; ++i) {
                std::size_t c = 0;
                for (Eigen::Index j = 0; j < n; ++j) {
                    if (j != i) d[c++] = (*this).dist(i, j);
                }
                std::nth_element(d.begin(), d.begin() + (ls->m - 1), d.end());
                const double scale = d[ls->m - 1];
                if (!(scale > 0.0)) {
                    throw ValidationError("vertex " + std::to_string(i) +
                                          " has zero local scale: its M-th neighbor is a duplicate point");
                }
                tau_[i] = scale * scale;
            }
        }
    }

    double operator()(Eigen::Index i, Eigen::Index j) const {
        if (const auto* g = std::get_if<GaussianKernel>(&spec_.kind)) return gaussian_weight(dist(i, j), g->sigma);
        if (std::holds_alternative<LocalScalingKernel>(spec_.kind)) {
            return local_scaling_weight(dist(i, j), tau_[i], tau_[j]);
        }
        return cosine_weight(row_span(features_, i), row_span(features_, j));
    }

private:
    double dist(Eigen::Index i, Eigen::Index j) const {
        return distance(row_span(features_, i), row_span(features_, j), metric_);
    }

    const FeatureMatrix& features_;
    const WeightSpec& spec_;
    Metric metric_;
    std::vector<double> tau_;
};

}  // namespace

Eigen::MatrixXd dense_kernel(const FeatureMatrix& features, const WeightSpec& spec, Metric metric) {
    const Kernel kernel(features, spec, metric);
    const Eigen::Index n = features.rows();
    Eigen::MatrixXd w(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) w(i, j) = w(j, i) = kernel(i, j);
    }
    return w;
}

// Landmark set A drawn uniformly without replacement; C holds the kernel
// between every sample and every landmark, so W ~ C A^+ C^T. Degrees are the
// row sums of that approximation, which makes D^{1/2} 1 an exact null vector
// of the approximate Laplacian. A thin QR of the normalized C turns the
// rank-p approximation into an orthonormal eigendecomposition through a
// p x p symmetric eigenproblem.
SpectralBasis nystrom_eigenpairs(const FeatureMatrix& features, const WeightSpec& spec, int sample_size, int n_e,
                                 std::uint64_t seed, Metric metric) {
    const Kernel kernel(features, spec, metric);
    const Eigen::Index n = features.rows();
    if (n_e < 1 || n_e > sample_size || sample_size > n) {
        throw ValidationError("Nystrom requires 1 <= n_e <= sample_size <= N_D (n_e=" + std::to_string(n_e) +
                              ", sample=" + std::to_string(sample_size) + ", N_D=" + std::to_string(n) + ")");
    }
    const Eigen::Index p = sample_size;

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    Rng rng(seed);
    rng.shuffle(order);
    std::vector<Eigen::Index> landmarks(order.begin(), order.begin() + p);
    std::sort(landmarks.begin(), landmarks.end());
    log(LogLevel::info, "nystrom: sampled " + std::to_string(p) + " of " + std::to_string(n) + " landmarks");

    Eigen::MatrixXd c(n, p);
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index a = 0; a < p; ++a) c(r, a) = kernel(r, landmarks[a]);
    }
    Eigen::MatrixXd a_block(p, p);
    for (Eigen::Index a = 0; a < p; ++a) a_block.row(a) = c.row(landmarks[a]);

    // Pseudo-inverse of the landmark block with a relative eigenvalue cutoff.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> a_eig(a_block);
    const Eigen::VectorXd& s = a_eig.eigenvalues();
    const double s_max = s.cwiseAbs().maxCoeff();
    const double cutoff = 1e-10 * s_max;
    Eigen::VectorXd s_inv = Eigen::VectorXd::Zero(p);
    int rank = 0;
    for (Eigen::Index i = 0; i < p; ++i) {
        if (std::abs(s[i]) > cutoff) {
            s_inv[i] = 1.0 / s[i];
            ++rank;
        }
    }
    if (rank < n_e || s_max == 0.0) {
        throw ValidationError("Nystrom landmark block is near-singular (numerical rank " + std::to_string(rank) +
                              " < n_e " + std::to_string(n_e) + "); increase the sample size");
    }
    if (rank < p) {
        log(LogLevel::info, "nystrom: landmark block rank " + std::to_string(rank) + " of " + std::to_string(p) +
                                "; using pseudo-inverse");
    }
    const Eigen::MatrixXd a_pinv = a_eig.eigenvectors() * s_inv.asDiagonal() * a_eig.eigenvectors().transpose();

    const Eigen::VectorXd col_sums = c.transpose() * Eigen::VectorXd::Ones(n);
    Eigen::VectorXd degrees = c * (a_pinv * col_sums);
    double min_positive = std::numeric_limits<double>::infinity();
    int clipped = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (degrees[i] > 0.0) min_positive = std::min(min_positive, degrees[i]);
    }
    if (!std::isfinite(min_positive)) throw NumericalError("Nystrom: no positive approximate degree");
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!(degrees[i] > 0.0)) {
            degrees[i] = min_positive;
            ++clipped;
        }
    }
    if (clipped > 0) {
        log(LogLevel::warn, "nystrom: clipped " + std::to_string(clipped) +
                                " nonpositive approximate degrees to the smallest positive degree");
    }

    const Eigen::VectorXd inv_sqrt_deg = degrees.cwiseSqrt().cwiseInverse();
    const Eigen::MatrixXd c_norm = inv_sqrt_deg.asDiagonal() * c;

    Eigen::HouseholderQR<Eigen::MatrixXd> qr(c_norm);
    const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, p);
    const Eigen::MatrixXd r = qr.matrixQR().topRows(p).triangularView<Eigen::Upper>();
    const Eigen::MatrixXd core = r * a_pinv * r.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> core_eig(0.5 * (core + core.transpose()));
    log(LogLevel::info, "nystrom: orthogonalized extension via thin QR of the normalized kernel columns");

    SpectralBasis out;
    out.method = SpectralMethod::nystrom;
    out.sample_size = sample_size;
    out.eigenvalues.resize(n_e);
    out.eigenvectors.resize(n, n_e);
    for (int k = 0; k < n_e; ++k) {
        const Eigen::Index idx = p - 1 - k;  // largest kernel eigenvalue = smallest Laplacian eigenvalue
        out.eigenvalues[k] = 1.0 - core_eig.eigenvalues()[idx];
        out.eigenvectors.col(k) = q * core_eig.eigenvectors().col(idx);
    }
    fix_signs(out.eigenvectors);
    return out;
}

}  // namespace graphseg
