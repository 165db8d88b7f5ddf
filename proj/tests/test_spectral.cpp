#include "graphseg/error.hpp"
#include "graphseg/spectral.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <filesystem>

using namespace graphseg;

namespace {

struct DenseSpectrum {
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
};

DenseSpectrum dense_smallest(const Eigen::MatrixXd& l, int k) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(l);
    return {es.eigenvalues().head(k), es.eigenvectors().leftCols(k)};
}

// Full kernel with self-similarity, normalized Laplacian, dense eigensolve.
DenseSpectrum dense_kernel_spectrum(const FeatureMatrix& f, double sigma, int k) {
    const Eigen::Index n = f.rows();
    Eigen::MatrixXd w(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) w(i, j) = std::exp(-(f.row(i) - f.row(j)).squaredNorm() / (sigma * sigma));
    }
    return dense_smallest(oracle::dense_laplacian(w), k);
}

FeatureMatrix blobs(int n, Rng& rng) {
    FeatureMatrix f(n, 2);
    for (int i = 0; i < n; ++i) {
        const double cx = (i % 3) * 2.5;
        f(i, 0) = cx + 0.5 * rng.normal();
        f(i, 1) = 0.5 * rng.normal();
    }
    return f;
}

}  // namespace

TEST_CASE("two-vertex spectrum") {
    const NormalizedLaplacian l(SparseWeightGraph(2, {{0, 1, 3.0}}));
    const auto b = smallest_eigenpairs(l, 2);
    CHECK(b.eigenvalues[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(b.eigenvalues[1] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("complete graph spectrum") {
    for (int n : {3, 5, 12}) {
        std::vector<Edge> edges;
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) edges.push_back({i, j, 1.0});
        }
        const NormalizedLaplacian l(SparseWeightGraph(n, edges));
        const auto b = smallest_eigenpairs(l, n);
        CHECK(std::abs(b.eigenvalues[0]) <= 1e-10);
        for (int k = 1; k < n; ++k) CHECK(b.eigenvalues[k] == doctest::Approx(n / (n - 1.0)).epsilon(1e-10));
        // Repeated eigenvalues still give an orthonormal basis.
        const Eigen::MatrixXd gram = b.eigenvectors.transpose() * b.eigenvectors;
        CHECK((gram - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-10);
    }
}

TEST_CASE("eigensolver against a dense oracle on kNN graphs") {
    Rng rng(42);
    for (int trial = 0; trial < 5; ++trial) {
        const int n = 50 + 10 * trial;
        const auto f = oracle::gaussian_cloud(n, 4, rng);
        const auto g = knn_graph(f, {LocalScalingKernel{7}, 6});
        const NormalizedLaplacian l(g);
        const int k = 10;
        const auto b = smallest_eigenpairs(l, k);
        const auto ref = dense_smallest(oracle::dense_laplacian(oracle::dense_weights(n, g.edges())), k);
        CHECK((b.eigenvalues - ref.values).cwiseAbs().maxCoeff() <= 1e-8);

        // Vectors are compared only where the eigenvalue is simple.
        Eigen::MatrixXd fixed = ref.vectors;
        fix_signs(fixed);
        for (int c = 0; c < k; ++c) {
            const double gap_lo = c > 0 ? ref.values[c] - ref.values[c - 1] : 1.0;
            const double gap_hi = c + 1 < k ? ref.values[c + 1] - ref.values[c] : 1.0;
            if (std::min(gap_lo, gap_hi) < 1e-3) continue;
            CHECK((b.eigenvectors.col(c) - fixed.col(c)).cwiseAbs().maxCoeff() <= 1e-6);
        }

        for (int c = 0; c < k; ++c) {
            const Eigen::VectorXd x = b.eigenvectors.col(c);
            CHECK((l.apply(x) - b.eigenvalues[c] * x).norm() <= 1e-8);
            CHECK(b.eigenvalues[c] >= -1e-10);
        }
        // The first vector is parallel to sqrt(d).
        const Eigen::VectorXd s = l.sqrt_degrees().normalized();
        CHECK(std::abs(s.dot(b.eigenvectors.col(0))) >= 1.0 - 1e-8);
        CHECK(b.eigenvalues[0] <= 1e-10);
    }
}

TEST_CASE("sign convention: largest-magnitude entry positive") {
    Rng rng(4);
    const auto g = knn_graph(oracle::gaussian_cloud(70, 3, rng), {LocalScalingKernel{5}, 5});
    const auto b = smallest_eigenpairs(NormalizedLaplacian(g), 6);
    for (int c = 0; c < 6; ++c) {
        Eigen::Index at;
        b.eigenvectors.col(c).cwiseAbs().maxCoeff(&at);
        CHECK(b.eigenvectors(at, c) > 0.0);
    }
}

TEST_CASE("eigensolver is deterministic and validates input") {
    Rng rng(6);
    const auto g = knn_graph(oracle::gaussian_cloud(90, 3, rng), {LocalScalingKernel{5}, 5});
    const NormalizedLaplacian l(g);
    const auto a = smallest_eigenpairs(l, 8);
    const auto b = smallest_eigenpairs(l, 8);
    CHECK(a.eigenvalues == b.eigenvalues);
    CHECK(a.eigenvectors == b.eigenvectors);
    CHECK_THROWS_AS(smallest_eigenpairs(l, 0), ValidationError);
    CHECK_THROWS_AS(smallest_eigenpairs(l, 91), ValidationError);
}

TEST_CASE("eigensolver budget exhaustion carries residuals") {
    Rng rng(12);
    const auto g = knn_graph(oracle::gaussian_cloud(300, 3, rng), {LocalScalingKernel{5}, 5});
    EigenSolverOptions opts;
    opts.max_matvecs = 30;
    opts.subspace = 30;
    opts.tol = 1e-14;
    try {
        smallest_eigenpairs(NormalizedLaplacian(g), 20, opts);
        FAIL("expected non-convergence");
    } catch (const ConvergenceError& e) {
        CHECK(e.residuals().size() == 20u);
    }
}

TEST_CASE("Nystrom with every point sampled equals the dense computation") {
    Rng rng(10);
    const auto f = blobs(60, rng);
    const int k = 6;
    const auto b = nystrom_eigenpairs(f, {GaussianKernel{1.5}, 10}, 60, k, 3);
    const auto ref = dense_kernel_spectrum(f, 1.5, k);
    CHECK((b.eigenvalues - ref.values).cwiseAbs().maxCoeff() <= 1e-6);
    CHECK(oracle::max_column_gap(b.eigenvectors, ref.vectors) <= 1e-6);
    CHECK(b.method_tag() == "nystrom:60");
}

TEST_CASE("Nystrom smallest eigenvalue is zero") {
    Rng rng(13);
    const auto f = blobs(150, rng);
    for (int p : {20, 40, 80}) {
        const auto b = nystrom_eigenpairs(f, {GaussianKernel{2.0}, 10}, p, 5, 17);
        CHECK(std::abs(b.eigenvalues[0]) <= 1e-6);
        const Eigen::MatrixXd gram = b.eigenvectors.transpose() * b.eigenvectors;
        CHECK((gram - Eigen::MatrixXd::Identity(5, 5)).cwiseAbs().maxCoeff() <= 1e-10);
    }
}

TEST_CASE("Nystrom with 50 of 200 samples approximates the leading kernel eigenvalues") {
    Rng rng(21);
    const auto f = blobs(200, rng);
    const int k = 4;
    const auto b = nystrom_eigenpairs(f, {GaussianKernel{2.0}, 10}, 50, k, 5);
    const auto ref = dense_kernel_spectrum(f, 2.0, k);
    // Leading eigenvalues of D^{-1/2} W D^{-1/2} are 1 - lambda.
    for (int c = 0; c < k; ++c) {
        const double approx = 1.0 - b.eigenvalues[c];
        const double exact = 1.0 - ref.values[c];
        CHECK(std::abs(approx - exact) <= 0.05 * std::abs(exact));
    }
}

TEST_CASE("Nystrom rejects a near-singular landmark block") {
    FeatureMatrix f(30, 2);
    for (int i = 0; i < 30; ++i) {
        f(i, 0) = 1e-9 * i;
        f(i, 1) = 0.0;
    }
    CHECK_THROWS_AS(nystrom_eigenpairs(f, {GaussianKernel{100.0}, 10}, 10, 3, 0), ValidationError);
    CHECK_THROWS_AS(nystrom_eigenpairs(f, {GaussianKernel{1.0}, 10}, 40, 3, 0), ValidationError);
}

TEST_CASE("eigencache round trip and spectrum cache") {
    Rng rng(14);
    const auto g = knn_graph(oracle::gaussian_cloud(60, 3, rng), {LocalScalingKernel{5}, 5});
    const auto b = smallest_eigenpairs(NormalizedLaplacian(g), 7);
    const auto dir = std::filesystem::temp_directory_path() / "graphseg_test_cache";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);

    write_basis(b, dir / "x.eigs");
    const auto back = read_basis(dir / "x.eigs");
    CHECK(back.eigenvalues == b.eigenvalues);
    CHECK(back.eigenvectors == b.eigenvectors);
    CHECK(back.method_tag() == "exact");

    const SpectrumCache cache(dir / "cache");
    const auto first = cache.get_or_compute(g, 7, {});
    const auto key = spectrum_cache_key(g, 7, {});
    CHECK(std::filesystem::exists(cache.path_for(key)));
    const auto second = cache.get_or_compute(g, 7, {});
    CHECK(first.eigenvectors == second.eigenvectors);
    EigenSolverOptions other;
    other.seed = 1;
    CHECK(spectrum_cache_key(g, 7, other) != key);
    CHECK(spectrum_cache_key(g, 6, {}) != key);

    std::filesystem::remove_all(dir);
}

TEST_CASE("truncation keeps the leading pairs") {
    Rng rng(15);
    const auto g = knn_graph(oracle::gaussian_cloud(40, 3, rng), {LocalScalingKernel{5}, 5});
    const auto b = smallest_eigenpairs(NormalizedLaplacian(g), 6);
    const auto t = b.truncated(4);
    CHECK(t.n_e() == 4);
    CHECK(t.eigenvectors == b.eigenvectors.leftCols(4));
    CHECK_THROWS_AS(b.truncated(7), ValidationError);
}
