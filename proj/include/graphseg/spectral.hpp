#pragma once

#include "graphseg/graph.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace graphseg {

enum class SpectralMethod { exact, nystrom };

/// The n_e smallest eigenpairs of a normalized graph Laplacian.
///
/// Eigenvalues ascend; eigenvectors are the columns of an N_D x n_e matrix,
/// orthonormal for the exact path and orthonormal by construction of the
/// extension for the Nystrom path. Each column is signed so that its
/// largest-magnitude entry is positive.
struct SpectralBasis {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd eigenvectors;
    SpectralMethod method = SpectralMethod::exact;
    int sample_size = 0;  // landmarks, Nystrom only

    int n_vertices() const noexcept { return static_cast<int>(eigenvectors.rows()); }
    int n_e() const noexcept { return static_cast<int>(eigenvalues.size()); }
    /// "exact" or "nystrom:<sample_size>"
    std::string method_tag() const;

    /// Leading `count` pairs.
    SpectralBasis truncated(int count) const;
};

struct EigenSolverOptions {
    double tol = 1e-8;                  // per-pair residual ||L x - lambda x||_2
    std::optional<long> max_matvecs;    // default: 40 * n_e, but at least one full subspace
    int subspace = 0;                   // Krylov subspace size; 0 picks max(2 n_e + 1, n_e + 20)
    std::uint64_t seed = 0;             // start vector
};

/// The n_e algebraically smallest eigenpairs of L_s.
///
/// Thick-restart Lanczos with full reorthogonalization on 2I - L_s, whose
/// largest eigenpairs are the smallest of L_s. Invariant subspaces are
/// escaped with fresh random directions, so repeated eigenvalues are
/// resolved. Throws ConvergenceError carrying the best residuals when the
/// matrix-application budget runs out.
SpectralBasis smallest_eigenpairs(const NormalizedLaplacian& laplacian, int n_e,
                                  const EigenSolverOptions& options = {});

/// Approximate eigenpairs of the normalized Laplacian of the fully connected
/// kernel matrix over `features` (self-similarity included), from
/// `sample_size` uniformly drawn landmarks. spec.neighbors is ignored except
/// for validating the local-scaling index, whose scales come from an exact
/// neighbor search over all samples.
SpectralBasis nystrom_eigenpairs(const FeatureMatrix& features, const WeightSpec& spec, int sample_size,
                                 int n_e, std::uint64_t seed, Metric metric = Metric::euclidean);

/// Dense kernel matrix used by the Nystrom path, exposed for testing.
Eigen::MatrixXd dense_kernel(const FeatureMatrix& features, const WeightSpec& spec, Metric metric);

/// Flips column signs so each column's largest-magnitude entry is positive.
void fix_signs(Eigen::MatrixXd& vectors);

/// Eigencache: `graphseg-eigs v1 <N_D> <N_e> <method>`, a line of ascending
/// eigenvalues, then the eigenvector matrix row-major as CSV, all with 17
/// significant digits.
void write_basis(const SpectralBasis& basis, const std::filesystem::path& path);
SpectralBasis read_basis(const std::filesystem::path& path);

/// Cache key for an exact decomposition: content hash of the graph and the
/// solver parameters.
std::string spectrum_cache_key(const SparseWeightGraph& graph, int n_e, const EigenSolverOptions& options);

/// Directory of eigencache files named by cache key.
class SpectrumCache {
public:
    explicit SpectrumCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

    std::optional<SpectralBasis> load(const std::string& key) const;
    void store(const std::string& key, const SpectralBasis& basis) const;
    std::filesystem::path path_for(const std::string& key) const;

    /// Cached decomposition of `graph`, computing and storing it on a miss.
    SpectralBasis get_or_compute(const SparseWeightGraph& graph, int n_e, const EigenSolverOptions& options) const;

private:
    std::filesystem::path dir_;
};

}  // namespace graphseg
