#pragma once

#include "graphseg/graph.hpp"
#include "graphseg/label_field.hpp"
#include "graphseg/spectral.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace graphseg {

struct GLConfig {
    double epsilon = 1.0;
    double dt = 0.1;
    double mu = 30.0;
    int n_e = 0;                     // 0: use every pair in the basis
    double eta = 1e-7;
    std::optional<double> convexity;  // C; defaults to mu + 1/epsilon
    int max_iters = 500;
    std::uint64_t seed = 0;

    double c() const { return convexity.value_or(mu + 1.0 / epsilon); }
    /// Positivity and C >= mu + 1/epsilon.
    void validate() const;
};

/// prod_k (1/4) ||u - e_k||_1^2 for one row.
double well_potential(std::span<const double> row);

/// Row-wise gradient of the product well:
/// T_ik = sum_l (1/2)(1 - 2 delta_kl) ||u_i - e_l||_1 prod_{m != l} (1/4) ||u_i - e_m||_1^2.
/// Valid for rows in [0, 1]^K, where the L1 sign pattern is fixed.
Eigen::MatrixXd well_derivative(const LabelField& u);

/// (eps/2) tr(U^T L_s U) + (1/(2 eps)) sum_i well(u_i) + sum_i (mu_i/2) ||u_i - uhat_i||^2
double multiclass_energy(const LabelField& u, const NormalizedLaplacian& laplacian, const FidelitySet& fidelity,
                         double mu, double epsilon);
/// Same energy with the smoothing term evaluated in the truncated basis.
double multiclass_energy(const LabelField& u, const SpectralBasis& basis, const FidelitySet& fidelity, double mu,
                         double epsilon);

/// One convex-splitting step followed by row projection onto the simplex.
LabelField gl_step(const LabelField& u, const SpectralBasis& basis, const FidelitySet& fidelity,
                   const GLConfig& cfg);

/// The update before projection: the exact minimizer of the implicit
/// (convex) part in the span of the basis.
LabelField gl_step_unprojected(const LabelField& u, const SpectralBasis& basis, const FidelitySet& fidelity,
                               const GLConfig& cfg);

struct GLResult {
    LabelField field;
    std::vector<int> labels;
    int iterations = 0;
    bool converged = false;
    double initial_energy = 0.0;  // truncated-basis energy of the starting field
    double final_energy = 0.0;
};

/// Iterates gl_step from the random initialization until the relative change
/// drops below eta or max_iters is reached.
GLResult gl_segment(const SpectralBasis& basis, const FidelitySet& fidelity, const GLConfig& cfg);
GLResult gl_segment_from(LabelField initial, const SpectralBasis& basis, const FidelitySet& fidelity,
                         const GLConfig& cfg);

}  // namespace graphseg
