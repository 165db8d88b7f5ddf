#include "graphseg/eval.hpp"

#include "graphseg/error.hpp"
#include "graphseg/parallel.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace graphseg {

double accuracy(std::span<const int> predicted, std::span<const int> truth) {
    if (predicted.size() != truth.size()) {
        throw ValidationError("accuracy: " + std::to_string(predicted.size()) + " predictions vs " +
                              std::to_string(truth.size()) + " truth labels");
    }
    if (truth.empty()) throw ValidationError("accuracy: empty label set");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) hits += predicted[i] == truth[i];
    return static_cast<double>(hits) / static_cast<double>(truth.size());
}

ConfusionMatrix confusion(std::span<const int> predicted, std::span<const int> truth, int n_classes) {
    if (predicted.size() != truth.size()) throw ValidationError("confusion: length mismatch");
    if (n_classes < 1) throw ValidationError("confusion: need at least one class");
    ConfusionMatrix out;
    out.counts.setZero(n_classes, n_classes);
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (predicted[i] < 0 || predicted[i] >= n_classes || truth[i] < 0 || truth[i] >= n_classes) {
            throw ValidationError("confusion: label out of range at position " + std::to_string(i));
        }
        ++out.counts(predicted[i], truth[i]);
    }
    return out;
}

double graph_tv(const SparseWeightGraph& graph, std::span<const double> f) {
    if (static_cast<int>(f.size()) != graph.n_vertices()) throw ValidationError("graph_tv: size mismatch");
    double tv = 0.0;
    // Each stored edge appears twice in the symmetric sum, cancelling the 1/2.
    for (const auto& e : graph.edges()) tv += e.w * std::abs(f[e.i] - f[e.j]);
    if (!std::isfinite(tv)) throw ValidationError("graph_tv: non-finite input");
    return tv;
}

const char* to_string(SolverKind s) { return s == SolverKind::gl ? "gl" : "mbo"; }

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

BenchmarkReport run_benchmark(const LabeledDataset& data, const BenchmarkConfig& config) {
    data.validate();
    double graph_seconds = 0.0;
    double eigen_seconds = 0.0;
    SpectralBasis basis;
    if (config.nystrom_sample) {
        const auto t0 = Clock::now();
        basis = nystrom_eigenpairs(data.features, config.weights, *config.nystrom_sample, config.n_e,
                                   config.eigen.seed, config.metric);
        eigen_seconds = seconds_since(t0);
    } else {
        auto t0 = Clock::now();
        const SparseWeightGraph graph = knn_graph(data.features, config.weights, config.metric);
        graph_seconds = seconds_since(t0);
        t0 = Clock::now();
        basis = smallest_eigenpairs(NormalizedLaplacian(graph), config.n_e, config.eigen);
        eigen_seconds = seconds_since(t0);
    }
    BenchmarkReport report = run_seeds(data, basis, config);
    report.graph_seconds = graph_seconds;
    report.eigen_seconds = eigen_seconds;
    return report;
}

BenchmarkReport run_seeds(const LabeledDataset& data, const SpectralBasis& basis, const BenchmarkConfig& config) {
    data.validate();
    if (config.n_seeds < 1) throw ValidationError("benchmark needs at least one seed");
    if (basis.n_vertices() != static_cast<int>(data.labels.size())) {
        throw ValidationError("spectrum size does not match the dataset");
    }
    if (config.solver == SolverKind::gl) {
        config.gl.validate();
    } else {
        config.mbo.validate();
    }

    BenchmarkReport report;
    report.dataset_name = config.dataset_name;
    report.solver = config.solver;
    report.n_vertices = static_cast<int>(data.labels.size());
    report.n_classes = data.n_classes;
    report.runs.resize(static_cast<std::size_t>(config.n_seeds));

    parallel_for(report.runs.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t r = begin; r < end; ++r) {
            RunRecord& run = report.runs[r];
            run.seed = config.base_seed + r;
            const FidelitySet fidelity = sample_fidelity(data, config.fidelity, run.seed);
            const auto t0 = Clock::now();
            if (config.solver == SolverKind::gl) {
                GLConfig cfg = config.gl;
                cfg.seed = run.seed;
                GLResult res = gl_segment(basis, fidelity, cfg);
                run.iterations = res.iterations;
                run.converged = res.converged;
                run.initial_energy = res.initial_energy;
                run.final_energy = res.final_energy;
                run.labels = std::move(res.labels);
            } else {
                MBOConfig cfg = config.mbo;
                cfg.seed = run.seed;
                MBOResult res = mbo_segment(basis, fidelity, cfg);
                run.iterations = res.iterations;
                run.converged = res.converged;
                run.labels = std::move(res.labels);
            }
            run.solver_seconds = seconds_since(t0);
            run.accuracy = accuracy(run.labels, data.labels);
        }
    });

    double acc = 0.0, iters = 0.0, secs = 0.0;
    for (const auto& run : report.runs) {
        acc += run.accuracy;
        iters += run.iterations;
        secs += run.solver_seconds;
    }
    const double n = static_cast<double>(report.runs.size());
    report.mean_accuracy = acc / n;
    report.mean_iterations = iters / n;
    report.mean_solver_seconds = secs / n;
    report.first_run_confusion = confusion(report.runs.front().labels, data.labels, data.n_classes);
    return report;
}

nlohmann::json to_json(const WeightSpec& spec, Metric metric) {
    nlohmann::json j;
    j["neighbors"] = spec.neighbors;
    j["metric"] = metric == Metric::euclidean ? "euclidean" : "cosine";
    if (const auto* g = std::get_if<GaussianKernel>(&spec.kind)) {
        j["kind"] = "gaussian";
        j["sigma"] = g->sigma;
    } else if (const auto* ls = std::get_if<LocalScalingKernel>(&spec.kind)) {
        j["kind"] = "local_scaling";
        j["m"] = ls->m;
    } else {
        j["kind"] = "cosine";
    }
    return j;
}

nlohmann::json to_json(const GLConfig& cfg) {
    return {{"epsilon", cfg.epsilon}, {"dt", cfg.dt},   {"mu", cfg.mu},
            {"n_e", cfg.n_e},         {"eta", cfg.eta}, {"c", cfg.c()},
            {"max_iters", cfg.max_iters}, {"seed", cfg.seed}};
}

nlohmann::json to_json(const MBOConfig& cfg) {
    return {{"dt", cfg.dt},   {"mu", cfg.mu},   {"n_e", cfg.n_e},          {"n_s", cfg.n_s},
            {"eta", cfg.eta}, {"max_iters", cfg.max_iters}, {"seed", cfg.seed}};
}

nlohmann::json report_json(const BenchmarkReport& report, const BenchmarkConfig& config) {
    nlohmann::json j;
    j["dataset"] = report.dataset_name;
    j["solver"] = to_string(report.solver);
    j["n_vertices"] = report.n_vertices;
    j["n_classes"] = report.n_classes;
    j["graph"] = to_json(config.weights, config.metric);
    j["spectrum"] = {{"n_e", config.n_e},
                     {"method", config.nystrom_sample ? "nystrom" : "exact"},
                     {"tol", config.eigen.tol},
                     {"seed", config.eigen.seed}};
    if (config.nystrom_sample) j["spectrum"]["sample_size"] = *config.nystrom_sample;
    j["config"] = config.solver == SolverKind::gl ? to_json(config.gl) : to_json(config.mbo);
    j["config"].erase("seed");
    if (const auto* c = std::get_if<PerClassCount>(&config.fidelity)) {
        j["fidelity"] = {{"per_class", c->count}};
    } else {
        j["fidelity"] = {{"fraction", std::get<ClassFraction>(config.fidelity).fraction}};
    }
    j["base_seed"] = config.base_seed;
    j["n_seeds"] = config.n_seeds;
    j["mean_accuracy"] = report.mean_accuracy;
    j["mean_iterations"] = report.mean_iterations;
    nlohmann::json runs = nlohmann::json::array();
    for (const auto& run : report.runs) {
        nlohmann::json r = {{"seed", run.seed},
                            {"accuracy", run.accuracy},
                            {"iterations", run.iterations},
                            {"converged", run.converged}};
        if (report.solver == SolverKind::gl) {
            r["initial_energy"] = run.initial_energy;
            r["final_energy"] = run.final_energy;
        }
        runs.push_back(std::move(r));
    }
    j["runs"] = std::move(runs);
    nlohmann::json conf = nlohmann::json::array();
    for (Eigen::Index o = 0; o < report.first_run_confusion.counts.rows(); ++o) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index t = 0; t < report.first_run_confusion.counts.cols(); ++t) {
            row.push_back(report.first_run_confusion.counts(o, t));
        }
        conf.push_back(std::move(row));
    }
    j["confusion_first_run"] = std::move(conf);
    return j;
}

nlohmann::json timings_json(const BenchmarkReport& report) {
    nlohmann::json j;
    j["graph_seconds"] = report.graph_seconds;
    j["eigen_seconds"] = report.eigen_seconds;
    j["mean_solver_seconds"] = report.mean_solver_seconds;
    nlohmann::json per_run = nlohmann::json::array();
    for (const auto& run : report.runs) per_run.push_back(run.solver_seconds);
    j["solver_seconds"] = std::move(per_run);
    return j;
}

std::string report_table(const BenchmarkReport& report) {
    std::ostringstream out;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s, multiclass %s, %d samples, %d classes, %zu runs\n",
                  report.dataset_name.c_str(), report.solver == SolverKind::gl ? "GL" : "MBO", report.n_vertices,
                  report.n_classes, report.runs.size());
    out << buf << '\n';
    out << "Method               | Accuracy\n";
    std::snprintf(buf, sizeof buf, "multiclass %-9s | %.2f%%\n", report.solver == SolverKind::gl ? "GL" : "MBO",
                  100.0 * report.mean_accuracy);
    out << buf << '\n';
    out << "Stage                   | Seconds\n";
    std::snprintf(buf, sizeof buf, "Graph calculation       | %.3f\n", report.graph_seconds);
    out << buf;
    std::snprintf(buf, sizeof buf, "Eigenvector calculation | %.3f\n", report.eigen_seconds);
    out << buf;
    std::snprintf(buf, sizeof buf, "Solver (mean per run)   | %.3f\n", report.mean_solver_seconds);
    out << buf;
    std::snprintf(buf, sizeof buf, "Iterations (mean)       | %.1f\n\n", report.mean_iterations);
    out << buf;

    out << "Run | Seed | Accuracy | Iterations\n";
    for (std::size_t r = 0; r < report.runs.size(); ++r) {
        const auto& run = report.runs[r];
        std::snprintf(buf, sizeof buf, "%3zu | %4llu | %7.2f%% | %d%s\n", r, static_cast<unsigned long long>(run.seed),
                      100.0 * run.accuracy, run.iterations, run.converged ? "" : " (not converged)");
        out << buf;
    }

    const auto& counts = report.first_run_confusion.counts;
    out << "\nConfusion matrix, first run (rows obtained, columns true)\n";
    out << "   ";
    for (Eigen::Index t = 0; t < counts.cols(); ++t) {
        std::snprintf(buf, sizeof buf, " %6ld", static_cast<long>(t));
        out << buf;
    }
    out << '\n';
    for (Eigen::Index o = 0; o < counts.rows(); ++o) {
        std::snprintf(buf, sizeof buf, "%3ld", static_cast<long>(o));
        out << buf;
        for (Eigen::Index t = 0; t < counts.cols(); ++t) {
            std::snprintf(buf, sizeof buf, " %6ld", counts(o, t));
            out << buf;
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace graphseg
