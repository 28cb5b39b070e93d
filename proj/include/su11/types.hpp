#pragma once

#include <complex>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace su11 {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using SpMatrix = Eigen::SparseMatrix<cplx, Eigen::ColMajor>;

inline constexpr cplx kI{0.0, 1.0};

}  // namespace su11
