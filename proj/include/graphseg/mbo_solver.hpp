#pragma once

#include "graphseg/label_field.hpp"
#include "graphseg/spectral.hpp"

#include <cstdint>
#include <vector>

namespace graphseg {

struct MBOConfig {
    double dt = 0.1;  // full step per outer iteration, split over n_s sub-steps
    double mu = 30.0;
    int n_e = 0;      // 0: use every pair in the basis
    int n_s = 3;
    double eta = 1e-7;
    int max_iters = 500;
    std::uint64_t seed = 0;

    /// dt may be 0 (identity propagator) for testing; everything else positive.
    void validate() const;
};

/// One diffusion sub-step:
/// U <- X (I + (dt/n_s) Lambda)^{-1} X^T [U - (dt/n_s) mu (U - Uhat)].
LabelField mbo_diffusion_step(const LabelField& u, const SpectralBasis& basis, const FidelitySet& fidelity,
                              const MBOConfig& cfg);

struct MBOResult {
    LabelField field;  // thresholded: every row is a simplex vertex
    std::vector<int> labels;
    int iterations = 0;
    bool converged = false;
};

/// Repeats n_s diffusion sub-steps, row projection and nearest-vertex
/// thresholding until the relative change of the thresholded field drops
/// below eta (no node changed class) or max_iters is reached.
MBOResult mbo_segment(const SpectralBasis& basis, const FidelitySet& fidelity, const MBOConfig& cfg);
MBOResult mbo_segment_from(LabelField initial, const SpectralBasis& basis, const FidelitySet& fidelity,
                           const MBOConfig& cfg);

/// Scalar two-class MBO on u in {-1, +1}: diffusion with forcing toward
/// +1 (class 0) / -1 (class 1), then u_i <- +1 if u_i >= 0 else -1.
struct BinaryMBOResult {
    Eigen::VectorXd u;
    std::vector<int> labels;  // +1 -> class 0, -1 -> class 1
    int iterations = 0;
    bool converged = false;
};
BinaryMBOResult binary_mbo_from(Eigen::VectorXd initial, const SpectralBasis& basis, const FidelitySet& fidelity,
                                const MBOConfig& cfg);

struct BinaryAgreement {
    double agreement = 0.0;  // fraction of nodes with equal labels
    std::vector<int> multiclass_labels;
    std::vector<int> binary_labels;
    int multiclass_iterations = 0;
    int binary_iterations = 0;
};

/// Runs K=2 multiclass MBO and scalar binary MBO from matched initial states
/// (u = U_0 - U_1, which is 2 U_0 - 1 on the simplex) and compares the labels.
BinaryAgreement binary_equivalence_check(const SpectralBasis& basis, const FidelitySet& fidelity,
                                         const MBOConfig& cfg);

}  // namespace graphseg
