#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library code it is compared against.

#include "graphseg/graph.hpp"
#include "graphseg/rng.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace oracle {

// Dense W with the stored edges mirrored.
inline Eigen::MatrixXd dense_weights(int n, const std::vector<graphseg::Edge>& edges) {
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
    for (const auto& e : edges) {
        w(e.i, e.j) += e.w;
        w(e.j, e.i) += e.w;
    }
    return w;
}

inline Eigen::MatrixXd dense_laplacian(const Eigen::MatrixXd& w) {
    const Eigen::VectorXd d = w.rowwise().sum();
    const Eigen::VectorXd s = d.array().rsqrt();
    return Eigen::MatrixXd::Identity(w.rows(), w.cols()) - s.asDiagonal() * w * s.asDiagonal();
}

// (1/2) sum_{i,j} w_ij (u_i / sqrt d_i - u_j / sqrt d_j)^2
inline double pairwise_form(const Eigen::MatrixXd& w, const Eigen::VectorXd& u) {
    const Eigen::VectorXd d = w.rowwise().sum();
    double acc = 0.0;
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
        for (Eigen::Index j = 0; j < w.cols(); ++j) {
            const double diff = u[i] / std::sqrt(d[i]) - u[j] / std::sqrt(d[j]);
            acc += w(i, j) * diff * diff;
        }
    }
    return 0.5 * acc;
}

// Random connected graph: a random spanning path plus extra random edges.
inline std::vector<graphseg::Edge> random_connected_edges(int n, int extra, graphseg::Rng& rng) {
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    rng.shuffle(order);
    std::vector<std::vector<bool>> used(n, std::vector<bool>(n, false));
    std::vector<graphseg::Edge> edges;
    auto add = [&](int a, int b) {
        if (a == b || used[a][b]) return;
        used[a][b] = used[b][a] = true;
        edges.push_back({a, b, 0.05 + rng.uniform()});
    };
    for (int k = 1; k < n; ++k) add(order[k - 1], order[k]);
    for (int k = 0; k < extra; ++k) add(static_cast<int>(rng.index(n)), static_cast<int>(rng.index(n)));
    return edges;
}

// Euclidean projection onto the simplex by enumerating supports: for each
// nonempty support S the stationary point is v - theta on S with
// theta = (sum_S v - 1)/|S|; keep the feasible candidate nearest to v.
inline Eigen::VectorXd simplex_by_supports(const Eigen::VectorXd& v) {
    const int k = static_cast<int>(v.size());
    Eigen::VectorXd best;
    double best_dist = std::numeric_limits<double>::infinity();
    for (unsigned mask = 1; mask < (1u << k); ++mask) {
        double sum = 0.0;
        int count = 0;
        for (int i = 0; i < k; ++i) {
            if (mask & (1u << i)) {
                sum += v[i];
                ++count;
            }
        }
        const double theta = (sum - 1.0) / count;
        Eigen::VectorXd x = Eigen::VectorXd::Zero(k);
        bool feasible = true;
        for (int i = 0; i < k; ++i) {
            if (mask & (1u << i)) {
                x[i] = v[i] - theta;
                if (x[i] < 0.0) feasible = false;
            }
        }
        if (!feasible) continue;
        const double dist = (x - v).squaredNorm();
        if (dist < best_dist) {
            best_dist = dist;
            best = x;
        }
    }
    return best;
}

// Grid search over the simplex for K = 2 or 3 with spacing h; returns the
// smallest squared distance found.
inline double simplex_grid_min(const Eigen::VectorXd& v, double h) {
    const int steps = static_cast<int>(std::lround(1.0 / h));
    double best = std::numeric_limits<double>::infinity();
    if (v.size() == 2) {
        for (int a = 0; a <= steps; ++a) {
            const double x = a * h;
            best = std::min(best, (v[0] - x) * (v[0] - x) + (v[1] - 1 + x) * (v[1] - 1 + x));
        }
    } else {
        for (int a = 0; a <= steps; ++a) {
            for (int b = 0; a + b <= steps; ++b) {
                const double x = a * h, y = b * h, z = 1.0 - x - y;
                best = std::min(best, (v[0] - x) * (v[0] - x) + (v[1] - y) * (v[1] - y) + (v[2] - z) * (v[2] - z));
            }
        }
    }
    return best;
}

// Weighted cut between {f_i = 1} and its complement by direct enumeration
// of all vertex pairs.
inline double cut_value(const Eigen::MatrixXd& w, const std::vector<int>& side) {
    double cut = 0.0;
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
        for (Eigen::Index j = i + 1; j < w.cols(); ++j) {
            if (side[i] != side[j]) cut += w(i, j);
        }
    }
    return cut;
}

// prod_k (1/4) ||u - e_k||_1^2, written out directly.
inline double product_well(const Eigen::VectorXd& u) {
    double p = 1.0;
    for (Eigen::Index k = 0; k < u.size(); ++k) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(u.size());
        e[k] = 1.0;
        const double l1 = (u - e).lpNorm<1>();
        p *= 0.25 * l1 * l1;
    }
    return p;
}

// Points on a line for hand-checkable neighbor structure.
inline graphseg::FeatureMatrix column(std::initializer_list<double> xs) {
    graphseg::FeatureMatrix f(static_cast<Eigen::Index>(xs.size()), 1);
    Eigen::Index r = 0;
    for (double x : xs) f(r++, 0) = x;
    return f;
}

inline graphseg::FeatureMatrix gaussian_cloud(int n, int dim, graphseg::Rng& rng) {
    graphseg::FeatureMatrix f(n, dim);
    for (int i = 0; i < n; ++i) {
        for (int c = 0; c < dim; ++c) f(i, c) = rng.normal();
    }
    return f;
}

// Column-wise agreement up to sign.
inline double max_column_gap(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    double gap = 0.0;
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
        const double s = a.col(c).dot(b.col(c)) < 0.0 ? -1.0 : 1.0;
        gap = std::max(gap, (a.col(c) - s * b.col(c)).cwiseAbs().maxCoeff());
    }
    return gap;
}

}  // namespace oracle
