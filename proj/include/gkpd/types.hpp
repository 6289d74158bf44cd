#pragma once

#include <Eigen/Dense>

namespace gkpd {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

}  // namespace gkpd
