#include "graphseg/spectral.hpp"

#include "graphseg/error.hpp"
#include "graphseg/manifest.hpp"
#include "graphseg/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace graphseg {

std::string SpectralBasis::method_tag() const {
    return method == SpectralMethod::exact ? "exact" : "nystrom:" + std::to_string(sample_size);
}

SpectralBasis SpectralBasis::truncated(int count) const {
    if (count < 1 || count > n_e()) {
        throw ValidationError("cannot truncate a basis of " + std::to_string(n_e()) + " pairs to " +
                              std::to_string(count));
    }
    SpectralBasis out = *this;
    out.eigenvalues = eigenvalues.head(count);
    out.eigenvectors = eigenvectors.leftCols(count);
    return out;
}

void fix_signs(Eigen::MatrixXd& vectors) {
    for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
        Eigen::Index arg = 0;
        double best = -1.0;
        for (Eigen::Index r = 0; r < vectors.rows(); ++r) {
            const double a = std::abs(vectors(r, c));
            if (a > best) {
                best = a;
                arg = r;
            }
        }
        if (vectors(arg, c) < 0.0) vectors.col(c) *= -1.0;
    }
}

namespace {

// Orthogonalizes w against the first `cols` columns of v twice (classical
// Gram-Schmidt with one reorthogonalization pass); returns the coefficients.
Eigen::VectorXd orthogonalize(const Eigen::MatrixXd& v, Eigen::Index cols, Eigen::VectorXd& w) {
    Eigen::VectorXd h = v.leftCols(cols).transpose() * w;
    w.noalias() -= v.leftCols(cols) * h;
    const Eigen::VectorXd h2 = v.leftCols(cols).transpose() * w;
    w.noalias() -= v.leftCols(cols) * h2;
    return h + h2;
}

Eigen::VectorXd random_unit(Rng& rng, Eigen::Index n) {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = rng.normal();
    return v / v.norm();
}

}  // namespace

SpectralBasis smallest_eigenpairs(const NormalizedLaplacian& laplacian, int n_e, const EigenSolverOptions& options) {
    const Eigen::Index n = laplacian.size();
    if (n_e < 1 || n_e > n) {
        throw ValidationError("n_e must satisfy 1 <= n_e <= N_D (n_e=" + std::to_string(n_e) +
                              ", N_D=" + std::to_string(n) + ")");
    }
    if (!(options.tol > 0.0)) throw ValidationError("eigensolver tolerance must be positive");

    const Eigen::SparseMatrix<double>& lap = laplacian.matrix();
    // Shifted operator 2I - L_s: spectrum in [0, 2], wanted pairs on top.
    auto apply = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd { return 2.0 * x - lap * x; };

    const Eigen::Index k = n_e;
    Eigen::Index m = options.subspace > 0 ? options.subspace : std::max<Eigen::Index>(2 * k + 1, k + 20);
    m = std::clamp<Eigen::Index>(m, k, n);
    const long budget = std::max<long>(options.max_matvecs.value_or(40L * n_e), static_cast<long>(m));

    Rng rng(options.seed);
    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(n, m + 1);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(m + 1, m);
    v.col(0) = random_unit(rng, n);
    const double breakdown = 1e-12;

    Eigen::Index kept = 0;
    long matvecs = 0;
    std::vector<double> best_residuals(static_cast<std::size_t>(k), std::numeric_limits<double>::infinity());

    while (true) {
        for (Eigen::Index j = kept; j < m; ++j) {
            Eigen::VectorXd w = apply(v.col(j));
            ++matvecs;
            h.col(j).head(j + 1) = orthogonalize(v, j + 1, w);
            double beta = w.norm();
            if (beta < breakdown) {
                // Invariant subspace: continue from a fresh direction.
                beta = 0.0;
                if (j + 1 < n) {
                    for (int attempt = 0; attempt < 5; ++attempt) {
                        Eigen::VectorXd r = random_unit(rng, n);
                        orthogonalize(v, j + 1, r);
                        const double rn = r.norm();
                        if (rn > 1e-8) {
                            w = r / rn;
                            break;
                        }
                    }
                } else {
                    w.setZero();
                }
            } else {
                w /= beta;
            }
            h(j + 1, j) = beta;
            v.col(j + 1) = w;
        }

        const Eigen::MatrixXd t = 0.5 * (h.topRows(m) + h.topRows(m).transpose());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ritz(t);
        const Eigen::VectorXd& theta = ritz.eigenvalues();  // ascending
        const Eigen::MatrixXd& y = ritz.eigenvectors();
        const double beta_m = h(m, m - 1);

        // Wanted: top k Ritz pairs, largest first.
        bool estimates_ok = true;
        for (Eigen::Index c = 0; c < k; ++c) {
            const Eigen::Index idx = m - 1 - c;
            const double est = std::abs(beta_m * y(m - 1, idx));
            if (est > 0.5 * options.tol) estimates_ok = false;
        }

        if (estimates_ok || m == n) {
            SpectralBasis out;
            out.method = SpectralMethod::exact;
            out.eigenvalues.resize(k);
            out.eigenvectors.resize(n, k);
            for (Eigen::Index c = 0; c < k; ++c) {
                const Eigen::Index idx = m - 1 - c;
                Eigen::VectorXd x = v.leftCols(m) * y.col(idx);
                x.normalize();
                out.eigenvectors.col(c) = x;
                out.eigenvalues[c] = 2.0 - theta[idx];
            }
            bool residuals_ok = true;
            for (Eigen::Index c = 0; c < k; ++c) {
                const double r = (lap * out.eigenvectors.col(c) - out.eigenvalues[c] * out.eigenvectors.col(c)).norm();
                best_residuals[c] = std::min(best_residuals[c], r);
                if (r > options.tol) residuals_ok = false;
            }
            if (residuals_ok) {
                fix_signs(out.eigenvectors);
                return out;
            }
        } else {
            for (Eigen::Index c = 0; c < k; ++c) {
                const double est = std::abs(beta_m * y(m - 1, m - 1 - c));
                best_residuals[c] = std::min(best_residuals[c], est);
            }
        }

        if (matvecs >= budget) {
            throw ConvergenceError("eigensolver did not converge within " + std::to_string(budget) +
                                       " matrix applications",
                                   best_residuals);
        }

        // Thick restart: keep the leading Ritz vectors plus the residual direction.
        const Eigen::Index p = std::min<Eigen::Index>(m - 1, k + (m - k) / 2);
        Eigen::MatrixXd kept_vectors = v.leftCols(m) * y.rightCols(p);
        Eigen::VectorXd residual_dir = v.col(m);
        h.setZero();
        for (Eigen::Index c = 0; c < p; ++c) {
            const Eigen::Index idx = m - p + c;
            h(c, c) = theta[idx];
            h(p, c) = beta_m * y(m - 1, idx);
        }
        v.setZero();
        v.leftCols(p) = kept_vectors;
        v.col(p) = residual_dir;
        if (beta_m == 0.0) {
            // The previous sweep ended on an exhausted space; pick any new direction.
            Eigen::VectorXd r = random_unit(rng, n);
            orthogonalize(v, p, r);
            v.col(p) = r / r.norm();
        }
        kept = p;
    }
}

void write_basis(const SpectralBasis& basis, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write eigencache " + path.string());
    out << "graphseg-eigs v1 " << basis.n_vertices() << ' ' << basis.n_e() << ' ' << basis.method_tag() << '\n';
    out.precision(17);
    for (int c = 0; c < basis.n_e(); ++c) out << (c ? "," : "") << basis.eigenvalues[c];
    out << '\n';
    for (int r = 0; r < basis.n_vertices(); ++r) {
        for (int c = 0; c < basis.n_e(); ++c) out << (c ? "," : "") << basis.eigenvectors(r, c);
        out << '\n';
    }
    if (!out) throw ValidationError("error writing eigencache " + path.string());
}

namespace {

std::vector<double> parse_csv_doubles(const std::string& line, std::size_t lineno) {
    std::vector<double> values;
    std::size_t pos = 0;
    while (pos <= line.size()) {
        const std::size_t comma = std::min(line.find(',', pos), line.size());
        const std::string cell = line.substr(pos, comma - pos);
        std::size_t used = 0;
        double x = 0.0;
        try {
            x = std::stod(cell, &used);
        } catch (const std::exception&) {
            throw FormatError("non-numeric value '" + cell + "'", lineno);
        }
        if (cell.find_first_not_of(" \t\r", used) != std::string::npos) {
            throw FormatError("non-numeric value '" + cell + "'", lineno);
        }
        values.push_back(x);
        pos = comma + 1;
    }
    return values;
}

}  // namespace

SpectralBasis read_basis(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open eigencache " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw FormatError("empty eigencache " + path.string(), 1);
    std::istringstream header(line);
    std::string magic, version, method;
    long long nd = -1, ne = -1;
    header >> magic >> version >> nd >> ne >> method;
    if (header.fail() || magic != "graphseg-eigs" || version != "v1" || nd < 1 || ne < 1 || ne > nd) {
        throw FormatError("bad eigencache header in " + path.string(), 1);
    }
    SpectralBasis basis;
    if (method == "exact") {
        basis.method = SpectralMethod::exact;
    } else if (method.rfind("nystrom:", 0) == 0) {
        basis.method = SpectralMethod::nystrom;
        try {
            basis.sample_size = std::stoi(method.substr(8));
        } catch (const std::exception&) {
            throw FormatError("bad method tag '" + method + "'", 1);
        }
    } else {
        throw FormatError("unknown method tag '" + method + "'", 1);
    }

    if (!std::getline(in, line)) throw FormatError("missing eigenvalue line", 2);
    const auto lambdas = parse_csv_doubles(line, 2);
    if (static_cast<long long>(lambdas.size()) != ne) throw FormatError("eigenvalue count mismatch", 2);
    basis.eigenvalues = Eigen::Map<const Eigen::VectorXd>(lambdas.data(), ne);
    for (long long c = 1; c < ne; ++c) {
        if (basis.eigenvalues[c] < basis.eigenvalues[c - 1]) throw FormatError("eigenvalues not ascending", 2);
    }

    basis.eigenvectors.resize(nd, ne);
    for (long long r = 0; r < nd; ++r) {
        const std::size_t lineno = static_cast<std::size_t>(r) + 3;
        if (!std::getline(in, line)) throw FormatError("truncated eigenvector block", lineno);
        const auto row = parse_csv_doubles(line, lineno);
        if (static_cast<long long>(row.size()) != ne) throw FormatError("eigenvector row has wrong width", lineno);
        for (long long c = 0; c < ne; ++c) basis.eigenvectors(r, c) = row[c];
    }
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") != std::string::npos) {
            throw FormatError("trailing data after eigenvector block in " + path.string());
        }
    }
    return basis;
}

std::string spectrum_cache_key(const SparseWeightGraph& graph, int n_e, const EigenSolverOptions& options) {
    ContentHash h;
    h.update(std::string_view("eigs-v1"));
    h.update(hash_graph(graph));
    h.update(static_cast<std::int64_t>(n_e));
    h.update(options.tol);
    h.update(options.seed);
    h.update(static_cast<std::int64_t>(options.subspace));
    h.update(static_cast<std::int64_t>(options.max_matvecs.value_or(-1)));
    return h.hex();
}

std::filesystem::path SpectrumCache::path_for(const std::string& key) const { return dir_ / (key + ".eigs"); }

std::optional<SpectralBasis> SpectrumCache::load(const std::string& key) const {
    const auto path = path_for(key);
    if (!std::filesystem::exists(path)) return std::nullopt;
    return read_basis(path);
}

void SpectrumCache::store(const std::string& key, const SpectralBasis& basis) const {
    std::filesystem::create_directories(dir_);
    const auto path = path_for(key);
    const auto tmp = path.string() + ".tmp";
    write_basis(basis, tmp);
    std::filesystem::rename(tmp, path);
}

SpectralBasis SpectrumCache::get_or_compute(const SparseWeightGraph& graph, int n_e,
                                            const EigenSolverOptions& options) const {
    const std::string key = spectrum_cache_key(graph, n_e, options);
    if (auto hit = load(key)) {
        log(LogLevel::info, "spectrum cache hit " + key);
        return *std::move(hit);
    }
    SpectralBasis basis = smallest_eigenpairs(NormalizedLaplacian(graph), n_e, options);
    store(key, basis);
    return basis;
}

}  // namespace graphseg
