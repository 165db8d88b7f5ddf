#include "graphseg/label_field.hpp"

#include "graphseg/error.hpp"
#include "graphseg/rng.hpp"
#include "graphseg/simplex.hpp"

#include <limits>
#include <string>

namespace graphseg {

void FidelitySet::validate() const {
    if (n_vertices < 1 || n_classes < 1) throw ValidationError("fidelity set needs positive vertex and class counts");
    if (indices.size() != classes.size()) throw ValidationError("fidelity indices and classes differ in length");
    std::vector<char> seen(static_cast<std::size_t>(n_vertices), 0);
    for (std::size_t t = 0; t < indices.size(); ++t) {
        const int i = indices[t];
        if (i < 0 || i >= n_vertices) throw ValidationError("fidelity index " + std::to_string(i) + " out of range");
        if (seen[i]) throw ValidationError("duplicate fidelity index " + std::to_string(i));
        seen[i] = 1;
        if (classes[t] < 0 || classes[t] >= n_classes) {
            throw ValidationError("fidelity class " + std::to_string(classes[t]) + " out of range");
        }
    }
}

bool FidelitySet::covers_all_classes() const {
    std::vector<char> present(static_cast<std::size_t>(n_classes), 0);
    for (int c : classes) {
        if (c >= 0 && c < n_classes) present[c] = 1;
    }
    for (char p : present) {
        if (!p) return false;
    }
    return true;
}

Eigen::VectorXd FidelitySet::strengths(double mu) const {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(n_vertices);
    for (int i : indices) out[i] = mu;
    return out;
}

Eigen::MatrixXd FidelitySet::targets() const {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n_vertices, n_classes);
    for (std::size_t t = 0; t < indices.size(); ++t) out(indices[t], classes[t]) = 1.0;
    return out;
}

LabelField initial_field(const FidelitySet& fidelity, std::uint64_t seed) {
    fidelity.validate();
    Rng rng(seed);
    LabelField u(fidelity.n_vertices, fidelity.n_classes);
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
        for (Eigen::Index k = 0; k < u.cols(); ++k) u(i, k) = rng.uniform_open();
    }
    project_rows_to_simplex(u);
    for (std::size_t t = 0; t < fidelity.indices.size(); ++t) {
        u.row(fidelity.indices[t]).setZero();
        u(fidelity.indices[t], fidelity.classes[t]) = 1.0;
    }
    return u;
}

double relative_change(const LabelField& next, const LabelField& prev) {
    const double num = (next - prev).rowwise().squaredNorm().maxCoeff();
    const double den = next.rowwise().squaredNorm().maxCoeff();
    if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return num / den;
}

std::vector<int> field_labels(const LabelField& u) {
    std::vector<int> out(static_cast<std::size_t>(u.rows()));
    Eigen::VectorXd row(u.cols());
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
        row = u.row(i).transpose();
        out[i] = nearest_vertex(row);
    }
    return out;
}

void check_finite(const Eigen::MatrixXd& m, const char* what, int iteration) {
    if (!m.allFinite()) {
        throw NumericalError(std::string("non-finite values in ") + what + " at iteration " + std::to_string(iteration));
    }
}

}  // namespace graphseg
