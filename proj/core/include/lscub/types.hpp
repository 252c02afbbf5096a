#pragma once

#include <Eigen/Core>

namespace lscub {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr const char* kVersion = "0.1.0";

}  // namespace lscub
