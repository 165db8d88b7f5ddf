#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace graphseg {

/// N_D x K phase field; row i is node i's class composition on the simplex.
using LabelField = Eigen::MatrixXd;

/// Labeled nodes and their classes. The fidelity strength lives in the
/// solver configuration and is applied uniformly to these nodes.
struct FidelitySet {
    int n_vertices = 0;
    int n_classes = 0;
    std::vector<int> indices;  // distinct, in [0, n_vertices)
    std::vector<int> classes;  // parallel to indices, in [0, n_classes)

    /// Throws ValidationError on size mismatch, duplicates, or out-of-range values.
    void validate() const;
    bool covers_all_classes() const;

    /// mu on labeled nodes, 0 elsewhere.
    Eigen::VectorXd strengths(double mu) const;
    /// One-hot rows for labeled nodes, zero rows elsewhere.
    Eigen::MatrixXd targets() const;
};

/// Uniform(0,1) entries drawn row by row, each row projected to the simplex,
/// then fidelity rows overwritten by their one-hot targets.
LabelField initial_field(const FidelitySet& fidelity, std::uint64_t seed);

/// max_i ||next_i - prev_i||^2 / max_i ||next_i||^2
double relative_change(const LabelField& next, const LabelField& prev);

/// Nearest simplex vertex per row.
std::vector<int> field_labels(const LabelField& u);

/// Throws NumericalError if any entry is NaN or infinite.
void check_finite(const Eigen::MatrixXd& m, const char* what, int iteration);

}  // namespace graphseg
