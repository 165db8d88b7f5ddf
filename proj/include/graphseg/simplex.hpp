#pragma once

#include <Eigen/Dense>

#include <span>

namespace graphseg {

/// Euclidean projection onto the Gibbs simplex {s : s_k >= 0, sum s_k = 1}.
///
/// Sort-based, O(K log K): sort descending, find the largest prefix whose
/// shifted entries stay positive, shift by that threshold and clamp. Throws
/// ValidationError on empty or non-finite input.
void project_to_simplex(std::span<double> v);
Eigen::VectorXd project_to_simplex(const Eigen::VectorXd& v);

/// Projects every row of `u` in place.
void project_rows_to_simplex(Eigen::MatrixXd& u);

/// Index of the closest simplex vertex, i.e. argmax_k v_k; ties go to the
/// lowest index.
int nearest_vertex(std::span<const double> v);
int nearest_vertex(const Eigen::VectorXd& v);

}  // namespace graphseg
