#pragma once

#include "graphseg/data_io.hpp"
#include "graphseg/gl_solver.hpp"
#include "graphseg/graph.hpp"
#include "graphseg/mbo_solver.hpp"
#include "graphseg/spectral.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace graphseg {

/// Fraction of positions where predicted equals truth.
double accuracy(std::span<const int> predicted, std::span<const int> truth);

/// K x K counts; entry (obtained, true).
struct ConfusionMatrix {
    Eigen::Matrix<long, Eigen::Dynamic, Eigen::Dynamic> counts;

    long total() const { return counts.sum(); }
    long correct() const { return counts.trace(); }
};

ConfusionMatrix confusion(std::span<const int> predicted, std::span<const int> truth, int n_classes);

/// (1/2) sum_{i,j} w(i,j) |f_i - f_j| over the symmetric weight matrix.
double graph_tv(const SparseWeightGraph& graph, std::span<const double> f);

enum class SolverKind { gl, mbo };

const char* to_string(SolverKind s);

struct BenchmarkConfig {
    std::string dataset_name = "custom";
    WeightSpec weights{LocalScalingKernel{17}, 10};
    Metric metric = Metric::euclidean;
    int n_e = 20;                        // pairs computed for the shared spectrum
    EigenSolverOptions eigen;
    std::optional<int> nystrom_sample;   // set: Nystrom instead of the exact solver
    SolverKind solver = SolverKind::mbo;
    GLConfig gl;
    MBOConfig mbo;
    FidelityQuota fidelity = PerClassCount{25};
    int n_seeds = 10;
    std::uint64_t base_seed = 0;         // run r uses base_seed + r
};

struct RunRecord {
    std::uint64_t seed = 0;
    double accuracy = 0.0;
    int iterations = 0;
    bool converged = false;
    double initial_energy = 0.0;  // GL only
    double final_energy = 0.0;    // GL only
    double solver_seconds = 0.0;
    std::vector<int> labels;
};

struct BenchmarkReport {
    std::string dataset_name;
    SolverKind solver = SolverKind::mbo;
    int n_vertices = 0;
    int n_classes = 0;
    std::vector<RunRecord> runs;
    double mean_accuracy = 0.0;
    double mean_iterations = 0.0;
    double graph_seconds = 0.0;
    double eigen_seconds = 0.0;
    double mean_solver_seconds = 0.0;
    ConfusionMatrix first_run_confusion;
};

/// Graph and spectrum are computed once and shared by all seeded runs.
BenchmarkReport run_benchmark(const LabeledDataset& data, const BenchmarkConfig& config);

/// The seeded runs alone, over a precomputed spectrum.
BenchmarkReport run_seeds(const LabeledDataset& data, const SpectralBasis& basis, const BenchmarkConfig& config);

/// Deterministic report contents (no wall times).
nlohmann::json report_json(const BenchmarkReport& report, const BenchmarkConfig& config);
/// Stage wall times.
nlohmann::json timings_json(const BenchmarkReport& report);
/// Human-readable summary: accuracy, timings and iterations, and the
/// confusion matrix of the first run.
std::string report_table(const BenchmarkReport& report);

nlohmann::json to_json(const WeightSpec& spec, Metric metric);
nlohmann::json to_json(const GLConfig& cfg);
nlohmann::json to_json(const MBOConfig& cfg);

}  // namespace graphseg
