#include "graphseg/simplex.hpp"

#include "graphseg/error.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace graphseg {

void project_to_simplex(std::span<double> v) {
    const std::size_t k = v.size();
    if (k == 0) throw ValidationError("cannot project an empty vector onto the simplex");
    for (double x : v) {
        if (!std::isfinite(x)) throw ValidationError("simplex projection: non-finite entry");
    }
    double total = 0.0;
    bool nonnegative = true;
    for (double x : v) {
        total += x;
        nonnegative = nonnegative && x >= 0.0;
    }
    if (nonnegative && std::abs(total - 1.0) <= 1e-12) return;  // already on the simplex

    thread_local std::vector<double> sorted;
    sorted.assign(v.begin(), v.end());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());

    double running = 0.0;
    double theta = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
        running += sorted[j];
        const double candidate = (running - 1.0) / static_cast<double>(j + 1);
        if (sorted[j] - candidate > 0.0) theta = candidate;
    }
    double sum = 0.0;
    for (double& x : v) {
        x = std::max(x - theta, 0.0);
        sum += x;
    }
    // Roundoff in the running sum can leave the total a few ulps off.
    if (std::abs(sum - 1.0) > 1e-12) {
        for (double& x : v) x /= sum;
    }
}

Eigen::VectorXd project_to_simplex(const Eigen::VectorXd& v) {
    Eigen::VectorXd out = v;
    project_to_simplex(std::span<double>(out.data(), static_cast<std::size_t>(out.size())));
    return out;
}

void project_rows_to_simplex(Eigen::MatrixXd& u) {
    std::vector<double> row(static_cast<std::size_t>(u.cols()));
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
        for (Eigen::Index k = 0; k < u.cols(); ++k) row[k] = u(i, k);
        project_to_simplex(row);
        for (Eigen::Index k = 0; k < u.cols(); ++k) u(i, k) = row[k];
    }
}

int nearest_vertex(std::span<const double> v) {
    if (v.empty()) throw ValidationError("nearest_vertex: empty vector");
    int best = 0;
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (!std::isfinite(v[k])) throw ValidationError("nearest_vertex: non-finite entry");
        if (v[k] > v[best]) best = static_cast<int>(k);
    }
    return best;
}

int nearest_vertex(const Eigen::VectorXd& v) {
    return nearest_vertex(std::span<const double>(v.data(), static_cast<std::size_t>(v.size())));
}

}  // namespace graphseg
