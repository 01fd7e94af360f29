#pragma once

#include <complex>
#include <Eigen/Core>

namespace varcz {

using Complex = std::complex<double>;
using Vec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;
using IVec = Eigen::VectorXi;
using Mat = Eigen::MatrixXd;
using CMat = Eigen::MatrixXcd;

}  // namespace varcz
