#pragma once

#include <Eigen/Dense>

#include "spinchaos/dense_matrix.hpp"

inline Eigen::MatrixXd to_eigen(const spinchaos::DenseMatrix& m) {
    Eigen::MatrixXd out(m.rows(), m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = m(r, c);
    return out;
}

inline Eigen::MatrixXd to_eigen(const spinchaos::RealSymmetricMatrix& m) { return to_eigen(m.dense()); }
