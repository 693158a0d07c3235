#pragma once

#include <Eigen/Dense>

namespace fracdn {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Index = Eigen::Index;

inline constexpr const char* kVersion = "0.1.0";

}  // namespace fracdn
