#include "graphseg/error.hpp"
#include "graphseg/eval.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

using namespace graphseg;

TEST_CASE("accuracy") {
    const std::vector<int> truth{0, 1, 2, 1};
    CHECK(accuracy(truth, truth) == 1.0);
    CHECK(accuracy(std::vector<int>{1, 0, 0, 0}, truth) == 0.0);
    CHECK(accuracy(std::vector<int>{0, 1, 2, 2}, truth) == 0.75);
    CHECK_THROWS_AS(accuracy(std::vector<int>{0}, truth), ValidationError);
}

TEST_CASE("confusion matrix") {
    const std::vector<int> truth{0, 1, 0, 1, 0, 1, 0, 1, 0, 1};
    const auto perfect = confusion(truth, truth, 2);
    CHECK(perfect.counts(0, 0) == 5);
    CHECK(perfect.counts(1, 1) == 5);
    CHECK(perfect.counts(0, 1) == 0);

    const std::vector<int> t2{0, 0, 0, 1, 1};
    const auto all0 = confusion(std::vector<int>(5, 0), t2, 2);
    CHECK(all0.counts(0, 0) == 3);
    CHECK(all0.counts(0, 1) == 2);
    CHECK(all0.counts(1, 0) == 0);
    CHECK(all0.counts(1, 1) == 0);

    Rng rng(500);
    std::vector<int> p(200), t(200);
    for (int i = 0; i < 200; ++i) {
        p[i] = static_cast<int>(rng.index(4));
        t[i] = static_cast<int>(rng.index(4));
    }
    const auto c = confusion(p, t, 4);
    CHECK(c.total() == 200);
    CHECK(static_cast<double>(c.correct()) / 200.0 == accuracy(p, t));
    for (int k = 0; k < 4; ++k) CHECK(c.counts.col(k).sum() == std::count(t.begin(), t.end(), k));
    CHECK_THROWS_AS(confusion(std::vector<int>{4}, std::vector<int>{0}, 4), ValidationError);
}

TEST_CASE("graph total variation") {
    const SparseWeightGraph pair(2, {{0, 1, 2.5}});
    const std::vector<double> f{1.0, 0.0};
    CHECK(graph_tv(pair, f) == 2.5);
    CHECK(graph_tv(pair, std::vector<double>{3.0, 3.0}) == 0.0);
    CHECK_THROWS_AS(graph_tv(pair, std::vector<double>{1.0}), ValidationError);
}

TEST_CASE("total variation of indicators equals the cut on small graphs") {
    Rng rng(501);
    for (int n = 2; n <= 8; ++n) {
        for (int t = 0; t < 5; ++t) {
            const auto edges = oracle::random_connected_edges(n, static_cast<int>(rng.index(2 * n)), rng);
            const SparseWeightGraph g(n, edges);
            const Eigen::MatrixXd w = oracle::dense_weights(n, edges);
            for (unsigned mask = 0; mask < (1u << n); ++mask) {
                std::vector<int> side(n);
                std::vector<double> f(n);
                for (int i = 0; i < n; ++i) f[i] = side[i] = (mask >> i) & 1u;
                CHECK(graph_tv(g, f) == doctest::Approx(oracle::cut_value(w, side)).epsilon(1e-13));
            }
        }
    }
}

TEST_CASE("benchmark harness") {
    MoonsSpec spec;
    spec.points_per_class = 100;
    spec.dimension = 20;
    const auto data = generate_three_moons(spec);
    BenchmarkConfig cfg;
    cfg.weights = {LocalScalingKernel{10}, 8};
    cfg.n_e = 12;
    cfg.fidelity = PerClassCount{10};
    cfg.n_seeds = 1;
    cfg.base_seed = 5;
    const auto one = run_benchmark(data, cfg);
    REQUIRE(one.runs.size() == 1u);
    CHECK(one.mean_accuracy == one.runs[0].accuracy);
    CHECK(one.runs[0].seed == 5u);

    cfg.n_seeds = 4;
    const auto a = run_benchmark(data, cfg);
    const auto b = run_benchmark(data, cfg);
    CHECK(report_json(a, cfg) == report_json(b, cfg));
    CHECK(a.runs[0].labels == one.runs[0].labels);
    for (std::size_t r = 0; r < a.runs.size(); ++r) CHECK(a.runs[r].seed == 5 + r);
    CHECK(a.first_run_confusion.total() == 300);

    cfg.solver = SolverKind::gl;
    const auto g = run_benchmark(data, cfg);
    CHECK(g.mean_accuracy > 0.5);
    const auto j = report_json(g, cfg);
    CHECK(j["solver"] == "gl");
    CHECK(j["runs"].size() == 4u);
    CHECK(j["runs"][0].contains("final_energy"));
    CHECK(report_table(g).find("multiclass GL") != std::string::npos);

    cfg.n_seeds = 0;
    CHECK_THROWS_AS(run_benchmark(data, cfg), ValidationError);
}
