#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace arcrom {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

}  // namespace arcrom
