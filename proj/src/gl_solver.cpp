#include "graphseg/gl_solver.hpp"

#include "graphseg/error.hpp"
#include "graphseg/simplex.hpp"

#include <cmath>
#include <string>

namespace graphseg {

void GLConfig::validate() const {
    auto positive = [](double x) { return x > 0.0 && std::isfinite(x); };
    if (!positive(epsilon)) throw ValidationError("epsilon must be positive");
    if (!positive(dt)) throw ValidationError("dt must be positive");
    if (!(mu >= 0.0) || !std::isfinite(mu)) throw ValidationError("mu must be nonnegative");
    if (!positive(eta)) throw ValidationError("eta must be positive");
    if (n_e < 0) throw ValidationError("n_e must be nonnegative (0 selects the whole basis)");
    if (max_iters < 1) throw ValidationError("max_iters must be >= 1");
    const double bound = mu + 1.0 / epsilon;
    // Compare with a relative slack so C = mu + 1/eps parsed from text passes.
    if (!(c() >= bound * (1.0 - 1e-12))) {
        throw ValidationError("convexity constant C=" + std::to_string(c()) + " is below mu + 1/epsilon = " +
                              std::to_string(bound));
    }
}

double well_potential(std::span<const double> row) {
    const std::size_t k = row.size();
    double total = 0.0;
    for (double x : row) total += std::abs(x);
    double product = 1.0;
    for (std::size_t l = 0; l < k; ++l) {
        // ||u - e_l||_1 = sum_m |u_m| - |u_l| + |u_l - 1|
        const double dist = total - std::abs(row[l]) + std::abs(row[l] - 1.0);
        product *= 0.25 * dist * dist;
    }
    return product;
}

Eigen::MatrixXd well_derivative(const LabelField& u) {
    const Eigen::Index n = u.rows();
    const Eigen::Index k = u.cols();
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n, k);
    std::vector<double> dist(static_cast<std::size_t>(k));
    std::vector<double> quarter_sq(static_cast<std::size_t>(k));
    for (Eigen::Index i = 0; i < n; ++i) {
        double total = 0.0;
        for (Eigen::Index m = 0; m < k; ++m) total += std::abs(u(i, m));
        for (Eigen::Index l = 0; l < k; ++l) {
            dist[l] = total - std::abs(u(i, l)) + std::abs(u(i, l) - 1.0);
            quarter_sq[l] = 0.25 * dist[l] * dist[l];
        }
        for (Eigen::Index l = 0; l < k; ++l) {
            double others = 1.0;
            for (Eigen::Index m = 0; m < k; ++m) {
                if (m != l) others *= quarter_sq[m];
            }
            const double coeff = 0.5 * dist[l] * others;
            for (Eigen::Index c = 0; c < k; ++c) t(i, c) += (c == l ? -coeff : coeff);
        }
    }
    return t;
}

namespace {

void check_shapes(const LabelField& u, const FidelitySet& fidelity) {
    if (u.rows() != fidelity.n_vertices || u.cols() != fidelity.n_classes) {
        throw ValidationError("label field is " + std::to_string(u.rows()) + "x" + std::to_string(u.cols()) +
                              " but the fidelity set expects " + std::to_string(fidelity.n_vertices) + "x" +
                              std::to_string(fidelity.n_classes));
    }
}

double potential_and_fidelity(const LabelField& u, const FidelitySet& fidelity, double mu, double epsilon) {
    double potential = 0.0;
    std::vector<double> row(static_cast<std::size_t>(u.cols()));
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
        for (Eigen::Index c = 0; c < u.cols(); ++c) row[c] = u(i, c);
        potential += well_potential(row);
    }
    double fit = 0.0;
    const Eigen::MatrixXd targets = fidelity.targets();
    for (int i : fidelity.indices) fit += 0.5 * mu * (u.row(i) - targets.row(i)).squaredNorm();
    return potential / (2.0 * epsilon) + fit;
}

int effective_n_e(const SpectralBasis& basis, int requested) {
    if (requested == 0) return basis.n_e();
    if (requested > basis.n_e()) {
        throw ValidationError("configuration asks for n_e=" + std::to_string(requested) + " but the basis holds " +
                              std::to_string(basis.n_e()) + " pairs");
    }
    return requested;
}

// Holds Y = [(1 + C dt) I + eps dt Lambda]^{-1} X^T in factored form.
struct GLPropagator {
    Eigen::MatrixXd x;          // N_D x n_e
    Eigen::VectorXd inv_diag;   // n_e
    double c;

    GLPropagator(const SpectralBasis& basis, const GLConfig& cfg) {
        const int ne = effective_n_e(basis, cfg.n_e);
        x = basis.eigenvectors.leftCols(ne);
        c = cfg.c();
        inv_diag = ((1.0 + c * cfg.dt) + cfg.epsilon * cfg.dt * basis.eigenvalues.head(ne).array()).inverse();
    }

    LabelField apply(const LabelField& u, const Eigen::VectorXd& mu_i, const Eigen::MatrixXd& targets,
                     const GLConfig& cfg) const {
        const Eigen::MatrixXd t = well_derivative(u);
        const Eigen::MatrixXd rhs = (1.0 + c * cfg.dt) * u - (cfg.dt / (2.0 * cfg.epsilon)) * t -
                                    cfg.dt * (mu_i.asDiagonal() * (u - targets));
        const Eigen::MatrixXd z = inv_diag.asDiagonal() * (x.transpose() * rhs);
        return x * z;
    }
};

}  // namespace

double multiclass_energy(const LabelField& u, const NormalizedLaplacian& laplacian, const FidelitySet& fidelity,
                         double mu, double epsilon) {
    check_shapes(u, fidelity);
    if (laplacian.size() != u.rows()) throw ValidationError("Laplacian size does not match the label field");
    const double smoothing = (u.transpose() * (laplacian.matrix() * u)).trace();
    return 0.5 * epsilon * smoothing + potential_and_fidelity(u, fidelity, mu, epsilon);
}

double multiclass_energy(const LabelField& u, const SpectralBasis& basis, const FidelitySet& fidelity, double mu,
                         double epsilon) {
    check_shapes(u, fidelity);
    if (basis.n_vertices() != u.rows()) throw ValidationError("basis size does not match the label field");
    const Eigen::MatrixXd coeffs = basis.eigenvectors.transpose() * u;  // n_e x K
    const double smoothing = (basis.eigenvalues.asDiagonal() * coeffs.cwiseAbs2()).sum();
    return 0.5 * epsilon * smoothing + potential_and_fidelity(u, fidelity, mu, epsilon);
}

LabelField gl_step_unprojected(const LabelField& u, const SpectralBasis& basis, const FidelitySet& fidelity,
                               const GLConfig& cfg) {
    cfg.validate();
    check_shapes(u, fidelity);
    if (basis.n_vertices() != u.rows()) throw ValidationError("basis size does not match the label field");
    const GLPropagator prop(basis, cfg);
    return prop.apply(u, fidelity.strengths(cfg.mu), fidelity.targets(), cfg);
}

LabelField gl_step(const LabelField& u, const SpectralBasis& basis, const FidelitySet& fidelity,
                   const GLConfig& cfg) {
    LabelField next = gl_step_unprojected(u, basis, fidelity, cfg);
    check_finite(next, "GL update", 0);
    project_rows_to_simplex(next);
    return next;
}

GLResult gl_segment(const SpectralBasis& basis, const FidelitySet& fidelity, const GLConfig& cfg) {
    return gl_segment_from(initial_field(fidelity, cfg.seed), basis, fidelity, cfg);
}

GLResult gl_segment_from(LabelField initial, const SpectralBasis& basis, const FidelitySet& fidelity,
                         const GLConfig& cfg) {
    cfg.validate();
    fidelity.validate();
    check_shapes(initial, fidelity);
    if (basis.n_vertices() != initial.rows()) throw ValidationError("basis size does not match the label field");
    if (!fidelity.covers_all_classes()) {
        throw ValidationError("fidelity set must contain at least one sample of every class");
    }

    const GLPropagator prop(basis, cfg);
    const Eigen::VectorXd mu_i = fidelity.strengths(cfg.mu);
    const Eigen::MatrixXd targets = fidelity.targets();

    GLResult result;
    result.field = std::move(initial);
    result.initial_energy = multiclass_energy(result.field, basis.truncated(prop.x.cols()), fidelity, cfg.mu, cfg.epsilon);
    for (int it = 1; it <= cfg.max_iters; ++it) {
        LabelField next = prop.apply(result.field, mu_i, targets, cfg);
        check_finite(next, "GL update", it);
        project_rows_to_simplex(next);
        const double change = relative_change(next, result.field);
        result.field = std::move(next);
        result.iterations = it;
        if (change < cfg.eta) {
            result.converged = true;
            break;
        }
    }
    result.final_energy = multiclass_energy(result.field, basis.truncated(prop.x.cols()), fidelity, cfg.mu, cfg.epsilon);
    result.labels = field_labels(result.field);
    return result;
}

}  // namespace graphseg
