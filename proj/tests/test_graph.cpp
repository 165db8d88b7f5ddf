#include "graphseg/error.hpp"
#include "graphseg/graph.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>

using namespace graphseg;

namespace {

std::vector<std::pair<int, int>> pairs_of(const SparseWeightGraph& g) {
    std::vector<std::pair<int, int>> out;
    for (const auto& e : g.edges()) out.emplace_back(e.i, e.j);
    return out;
}

}  // namespace

TEST_CASE("scalar weight functions") {
    CHECK(gaussian_weight(0.0, 1.3) == 1.0);
    CHECK(gaussian_weight(2.0, 2.0) == doctest::Approx(0.36787944117144233).epsilon(1e-15));
    CHECK(gaussian_weight(0.5, 1.0) > gaussian_weight(0.6, 1.0));
    CHECK_THROWS_AS(gaussian_weight(1.0, 0.0), ValidationError);

    CHECK(local_scaling_weight(0.0, 0.3, 0.7) == 1.0);
    CHECK(local_scaling_weight(1.5, 2.25, 2.25) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    CHECK(local_scaling_weight(0.8, 0.3, 1.9) == local_scaling_weight(0.8, 1.9, 0.3));
    CHECK_THROWS_AS(local_scaling_weight(1.0, 0.0, 1.0), ValidationError);

    const std::vector<double> a{1.0, 0.0}, b{1.0, 1.0}, c{0.0, 2.0}, zero{0.0, 0.0};
    CHECK(cosine_weight(b, b) == doctest::Approx(1.0));
    CHECK(cosine_weight(a, c) == 0.0);
    CHECK(cosine_weight(a, b) == doctest::Approx(0.70710678118654752).epsilon(1e-15));
    const std::vector<double> neg{-1.0, 0.0};
    CHECK(cosine_weight(a, neg) == 0.0);
    CHECK_THROWS_AS(cosine_weight(a, zero), ValidationError);
}

TEST_CASE("three collinear points with one neighbor") {
    const auto f = oracle::column({0.0, 1.0, 3.0});
    const auto g = knn_graph(f, {GaussianKernel{1.0}, 1});
    CHECK(pairs_of(g) == std::vector<std::pair<int, int>>{{0, 1}, {1, 2}});
    CHECK(g.edges()[0].w == doctest::Approx(std::exp(-1.0)));
    CHECK(g.edges()[1].w == doctest::Approx(std::exp(-4.0)));
}

TEST_CASE("N = N_D - 1 yields the complete graph") {
    Rng rng(3);
    const auto f = oracle::gaussian_cloud(9, 4, rng);
    const auto g = knn_graph(f, {LocalScalingKernel{3}, 8});
    CHECK(g.edges().size() == 36u);
    for (const auto& e : g.edges()) CHECK(e.i < e.j);
}

TEST_CASE("knn_graph against a brute-force neighbor oracle") {
    Rng rng(11);
    const int n = 60;
    const auto f = oracle::gaussian_cloud(n, 5, rng);
    const int k = 6;
    const double sigma = 2.0;
    std::map<std::pair<int, int>, double> expected;
    for (int i = 0; i < n; ++i) {
        std::vector<std::pair<double, int>> d;
        for (int j = 0; j < n; ++j) {
            if (j != i) d.emplace_back((f.row(i) - f.row(j)).norm(), j);
        }
        std::sort(d.begin(), d.end());
        for (int r = 0; r < k; ++r) {
            const int j = d[r].second;
            expected[{std::min(i, j), std::max(i, j)}] = std::exp(-d[r].first * d[r].first / (sigma * sigma));
        }
    }
    const auto g = knn_graph(f, {GaussianKernel{sigma}, k});
    REQUIRE(g.edges().size() == expected.size());
    for (const auto& e : g.edges()) {
        const auto it = expected.find({e.i, e.j});
        REQUIRE(it != expected.end());
        CHECK(e.w == doctest::Approx(it->second).epsilon(1e-12));
    }
}

TEST_CASE("local scaling uses the M-th neighbor excluding the point itself") {
    const auto f = oracle::column({0.0, 1.0, 3.0, 7.0});
    const auto g = knn_graph(f, {LocalScalingKernel{2}, 1});
    // sqrt(tau): 0 -> 3, 1 -> 2, 3 -> 3, 7 -> 6
    const double s[4] = {3.0, 2.0, 3.0, 6.0};
    for (const auto& e : g.edges()) {
        const double d = std::abs(f(e.i, 0) - f(e.j, 0));
        CHECK(e.w == doctest::Approx(std::exp(-d * d / (s[e.i] * s[e.j]))).epsilon(1e-14));
    }
}

TEST_CASE("local scaling index may exceed the neighbor count") {
    Rng rng(5);
    const auto f = oracle::gaussian_cloud(40, 3, rng);
    CHECK_NOTHROW(knn_graph(f, {LocalScalingKernel{17}, 10}));
    CHECK_THROWS_AS(knn_graph(f, {LocalScalingKernel{40}, 10}), ValidationError);
}

TEST_CASE("knn_graph input errors") {
    const auto f = oracle::column({0.0, 1.0, 3.0});
    CHECK_THROWS_AS(knn_graph(f, {GaussianKernel{1.0}, 3}), ValidationError);
    CHECK_THROWS_AS(knn_graph(f, {GaussianKernel{0.0}, 1}), ValidationError);
    const auto dup = oracle::column({0.0, 0.0, 0.0, 5.0});
    try {
        knn_graph(dup, {LocalScalingKernel{1}, 1});
        FAIL("expected a zero local scale error");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("vertex 0") != std::string::npos);
    }
    CHECK_THROWS_AS(knn_graph(f, {CosineKernel{}, 1}, Metric::euclidean), ValidationError);
}

TEST_CASE("cosine kernel graph") {
    FeatureMatrix f(4, 2);
    f << 1, 0, 1, 0.1, 0, 1, 0.1, 1;
    const auto g = knn_graph(f, {CosineKernel{}, 1}, Metric::cosine_distance);
    CHECK(pairs_of(g) == std::vector<std::pair<int, int>>{{0, 1}, {2, 3}});
    CHECK(g.edges()[0].w == doctest::Approx(1.0 / std::sqrt(1.01)));
}

TEST_CASE("permuting the input rows permutes the graph") {
    Rng rng(7);
    const int n = 80;
    const auto f = oracle::gaussian_cloud(n, 6, rng);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(perm);
    FeatureMatrix g_rows(n, 6);
    for (int i = 0; i < n; ++i) g_rows.row(perm[i]) = f.row(i);
    const WeightSpec spec{LocalScalingKernel{7}, 5};
    const auto a = knn_graph(f, spec);
    const auto b = knn_graph(g_rows, spec);
    std::vector<Edge> mapped;
    for (const auto& e : a.edges()) mapped.push_back({perm[e.i], perm[e.j], e.w});
    const SparseWeightGraph expected(n, mapped);
    REQUIRE(expected.edges().size() == b.edges().size());
    for (std::size_t k = 0; k < b.edges().size(); ++k) {
        CHECK(b.edges()[k].i == expected.edges()[k].i);
        CHECK(b.edges()[k].j == expected.edges()[k].j);
        CHECK(b.edges()[k].w == doctest::Approx(expected.edges()[k].w).epsilon(1e-13));
    }
}

TEST_CASE("SparseWeightGraph validation and degrees") {
    CHECK_THROWS_AS(SparseWeightGraph(3, {{0, 0, 1.0}}), ValidationError);
    CHECK_THROWS_AS(SparseWeightGraph(3, {{0, 3, 1.0}}), ValidationError);
    CHECK_THROWS_AS(SparseWeightGraph(3, {{0, 1, 1.0}, {1, 0, 2.0}}), ValidationError);
    CHECK_THROWS_AS(SparseWeightGraph(3, {{0, 1, -1.0}}), ValidationError);
    CHECK_THROWS_AS(SparseWeightGraph(3, {{0, 1, std::nan("")}}), ValidationError);

    Rng rng(9);
    for (int t = 0; t < 20; ++t) {
        const int n = 5 + static_cast<int>(rng.index(30));
        const auto edges = oracle::random_connected_edges(n, 2 * n, rng);
        const SparseWeightGraph g(n, edges);
        const Eigen::VectorXd d = oracle::dense_weights(n, edges).rowwise().sum();
        for (int i = 0; i < n; ++i) CHECK(g.degrees()[i] == doctest::Approx(d[i]).epsilon(1e-15));
        // Degrees recomputed from the stored edges are reproduced exactly.
        std::vector<double> again(n, 0.0);
        for (const auto& e : g.edges()) {
            again[e.i] += e.w;
            again[e.j] += e.w;
        }
        CHECK(again == g.degrees());
    }
}

TEST_CASE("two-vertex Laplacian") {
    for (double w : {0.01, 1.0, 37.5}) {
        const NormalizedLaplacian l(SparseWeightGraph(2, {{0, 1, w}}));
        const Eigen::MatrixXd m = Eigen::MatrixXd(l.matrix());
        CHECK(m(0, 0) == doctest::Approx(1.0));
        CHECK(m(1, 1) == doctest::Approx(1.0));
        CHECK(m(0, 1) == doctest::Approx(-1.0));
        CHECK(m(1, 0) == doctest::Approx(-1.0));
    }
}

TEST_CASE("isolated vertex is named") {
    try {
        NormalizedLaplacian l(SparseWeightGraph(4, {{0, 1, 1.0}, {1, 3, 1.0}}));
        FAIL("expected an isolated vertex error");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("vertex 2") != std::string::npos);
    }
}

TEST_CASE("quadratic form identity on 100 random graphs") {
    Rng rng(2024);
    for (int t = 0; t < 100; ++t) {
        const int n = 3 + static_cast<int>(rng.index(40));
        const auto edges = oracle::random_connected_edges(n, static_cast<int>(rng.index(3 * n)), rng);
        const SparseWeightGraph g(n, edges);
        const NormalizedLaplacian l(g);
        const Eigen::MatrixXd w = oracle::dense_weights(n, edges);

        // sqrt(d) spans the kernel.
        CHECK(l.apply(l.sqrt_degrees()).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + l.sqrt_degrees().norm()));
        for (int r = 0; r < 100; ++r) {
            Eigen::VectorXd u(n);
            for (int i = 0; i < n; ++i) u[i] = rng.normal();
            const double form = u.dot(l.apply(u));
            CHECK(std::abs(form - oracle::pairwise_form(w, u)) <= 1e-9 * (1.0 + std::abs(form)));
            CHECK(form >= -1e-12);
        }
    }
}

TEST_CASE("sparse Laplacian matches the dense definition") {
    Rng rng(1);
    const auto edges = oracle::random_connected_edges(25, 60, rng);
    const NormalizedLaplacian l(SparseWeightGraph(25, edges));
    const Eigen::MatrixXd dense = oracle::dense_laplacian(oracle::dense_weights(25, edges));
    CHECK((Eigen::MatrixXd(l.matrix()) - dense).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("graph file round trip") {
    Rng rng(8);
    const auto f = oracle::gaussian_cloud(50, 3, rng);
    const auto g = knn_graph(f, {LocalScalingKernel{7}, 10});
    const auto path = std::filesystem::temp_directory_path() / "graphseg_test_graph.edges";
    write_graph(g, path);
    CHECK(read_graph(path) == g);

    {
        std::ofstream out(path);
        out << "graphseg-edges v1 3\n0 1 0.5\n1 1 0.5\n";
    }
    CHECK_THROWS_AS(read_graph(path), ValidationError);
    {
        std::ofstream out(path);
        out << "graphseg-edges v1 3\n0 1 abc\n";
    }
    CHECK_THROWS_AS(read_graph(path), ValidationError);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(read_graph(path), ValidationError);
}
