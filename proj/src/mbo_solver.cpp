#include "graphseg/mbo_solver.hpp"

#include "graphseg/error.hpp"
#include "graphseg/simplex.hpp"

#include <cmath>
#include <string>

namespace graphseg {

void MBOConfig::validate() const {
    if (!(dt >= 0.0) || !std::isfinite(dt)) throw ValidationError("dt must be nonnegative");
    if (!(mu >= 0.0) || !std::isfinite(mu)) throw ValidationError("mu must be nonnegative");
    if (n_s < 1) throw ValidationError("n_s must be >= 1");
    if (!(eta > 0.0)) throw ValidationError("eta must be positive");
    if (n_e < 0) throw ValidationError("n_e must be nonnegative (0 selects the whole basis)");
    if (max_iters < 1) throw ValidationError("max_iters must be >= 1");
}

namespace {

// X (I + (dt/n_s) Lambda)^{-1} X^T in factored form.
struct DiffusionPropagator {
    Eigen::MatrixXd x;
    Eigen::VectorXd inv_diag;
    double sub_dt;

    DiffusionPropagator(const SpectralBasis& basis, const MBOConfig& cfg) {
        int ne = cfg.n_e == 0 ? basis.n_e() : cfg.n_e;
        if (ne > basis.n_e()) {
            throw ValidationError("configuration asks for n_e=" + std::to_string(ne) + " but the basis holds " +
                                  std::to_string(basis.n_e()) + " pairs");
        }
        sub_dt = cfg.dt / cfg.n_s;
        x = basis.eigenvectors.leftCols(ne);
        inv_diag = (1.0 + sub_dt * basis.eigenvalues.head(ne).array()).inverse();
    }

    template <class Field>
    Field apply(const Field& u, const Eigen::VectorXd& mu_i, const Field& targets) const {
        const Field forced = u - sub_dt * (mu_i.asDiagonal() * (u - targets));
        return x * (inv_diag.asDiagonal() * (x.transpose() * forced));
    }
};

void check_inputs(const LabelField& u, const SpectralBasis& basis, const FidelitySet& fidelity) {
    if (u.rows() != fidelity.n_vertices || u.cols() != fidelity.n_classes) {
        throw ValidationError("label field shape does not match the fidelity set");
    }
    if (basis.n_vertices() != u.rows()) throw ValidationError("basis size does not match the label field");
}

void threshold_rows(LabelField& u) {
    std::vector<double> row(static_cast<std::size_t>(u.cols()));
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
        for (Eigen::Index c = 0; c < u.cols(); ++c) row[c] = u(i, c);
        project_to_simplex(row);
        const int k = nearest_vertex(row);
        u.row(i).setZero();
        u(i, k) = 1.0;
    }
}

}  // namespace

LabelField mbo_diffusion_step(const LabelField& u, const SpectralBasis& basis, const FidelitySet& fidelity,
                              const MBOConfig& cfg) {
    cfg.validate();
    fidelity.validate();
    check_inputs(u, basis, fidelity);
    const DiffusionPropagator prop(basis, cfg);
    const Eigen::MatrixXd targets = fidelity.targets();
    return prop.apply<Eigen::MatrixXd>(u, fidelity.strengths(cfg.mu), targets);
}

MBOResult mbo_segment(const SpectralBasis& basis, const FidelitySet& fidelity, const MBOConfig& cfg) {
    return mbo_segment_from(initial_field(fidelity, cfg.seed), basis, fidelity, cfg);
}

namespace {

MBOResult run_mbo(LabelField initial, const SpectralBasis& basis, const FidelitySet& fidelity, const MBOConfig& cfg) {
    const DiffusionPropagator prop(basis, cfg);
    const Eigen::VectorXd mu_i = fidelity.strengths(cfg.mu);
    const Eigen::MatrixXd targets = fidelity.targets();

    MBOResult result;
    result.field = std::move(initial);
    for (int it = 1; it <= cfg.max_iters; ++it) {
        LabelField next = result.field;
        for (int s = 0; s < cfg.n_s; ++s) next = prop.apply<Eigen::MatrixXd>(next, mu_i, targets);
        check_finite(next, "MBO diffusion", it);
        threshold_rows(next);
        const double change = relative_change(next, result.field);
        result.field = std::move(next);
        result.iterations = it;
        if (change < cfg.eta) {
            result.converged = true;
            break;
        }
    }
    result.labels = field_labels(result.field);
    return result;
}

}  // namespace

MBOResult mbo_segment_from(LabelField initial, const SpectralBasis& basis, const FidelitySet& fidelity,
                           const MBOConfig& cfg) {
    cfg.validate();
    fidelity.validate();
    check_inputs(initial, basis, fidelity);
    if (!fidelity.covers_all_classes()) {
        throw ValidationError("fidelity set must contain at least one sample of every class");
    }
    return run_mbo(std::move(initial), basis, fidelity, cfg);
}

BinaryMBOResult binary_mbo_from(Eigen::VectorXd initial, const SpectralBasis& basis, const FidelitySet& fidelity,
                                const MBOConfig& cfg) {
    cfg.validate();
    fidelity.validate();
    if (fidelity.n_classes != 2) throw ValidationError("binary MBO needs a two-class fidelity set");
    if (initial.size() != fidelity.n_vertices || basis.n_vertices() != fidelity.n_vertices) {
        throw ValidationError("binary MBO: size mismatch");
    }
    const DiffusionPropagator prop(basis, cfg);
    const Eigen::VectorXd mu_i = fidelity.strengths(cfg.mu);
    Eigen::VectorXd targets = Eigen::VectorXd::Zero(fidelity.n_vertices);
    for (std::size_t t = 0; t < fidelity.indices.size(); ++t) {
        targets[fidelity.indices[t]] = fidelity.classes[t] == 0 ? 1.0 : -1.0;
    }

    BinaryMBOResult result;
    result.u = std::move(initial);
    for (int it = 1; it <= cfg.max_iters; ++it) {
        Eigen::VectorXd next = result.u;
        for (int s = 0; s < cfg.n_s; ++s) next = prop.apply<Eigen::VectorXd>(next, mu_i, targets);
        if (!next.allFinite()) throw NumericalError("non-finite values in binary MBO at iteration " + std::to_string(it));
        for (Eigen::Index i = 0; i < next.size(); ++i) next[i] = next[i] >= 0.0 ? 1.0 : -1.0;
        const double num = (next - result.u).cwiseAbs2().maxCoeff();
        const double den = next.cwiseAbs2().maxCoeff();
        result.u = std::move(next);
        result.iterations = it;
        if (num / den < cfg.eta) {
            result.converged = true;
            break;
        }
    }
    result.labels.resize(static_cast<std::size_t>(result.u.size()));
    for (Eigen::Index i = 0; i < result.u.size(); ++i) result.labels[i] = result.u[i] > 0.0 ? 0 : 1;
    return result;
}

BinaryAgreement binary_equivalence_check(const SpectralBasis& basis, const FidelitySet& fidelity,
                                         const MBOConfig& cfg) {
    if (fidelity.n_classes != 2) throw ValidationError("binary equivalence check needs K = 2");
    const LabelField start = initial_field(fidelity, cfg.seed);
    const Eigen::VectorXd scalar_start = start.col(0) - start.col(1);

    cfg.validate();
    fidelity.validate();
    check_inputs(start, basis, fidelity);
    // Class coverage is not required here: the comparison is meaningful for
    // any two-class fidelity set, including one labeled node.
    const MBOResult multi = run_mbo(start, basis, fidelity, cfg);
    const BinaryMBOResult binary = binary_mbo_from(scalar_start, basis, fidelity, cfg);

    BinaryAgreement report;
    report.multiclass_labels = multi.labels;
    report.binary_labels = binary.labels;
    report.multiclass_iterations = multi.iterations;
    report.binary_iterations = binary.iterations;
    std::size_t same = 0;
    for (std::size_t i = 0; i < multi.labels.size(); ++i) same += multi.labels[i] == binary.labels[i];
    report.agreement = multi.labels.empty() ? 1.0 : static_cast<double>(same) / static_cast<double>(multi.labels.size());
    return report;
}

}  // namespace graphseg
