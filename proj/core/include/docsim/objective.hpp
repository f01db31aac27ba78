#pragma once

#include <Eigen/Dense>
#include <functional>

namespace docsim {

/// Private convex objective of one agent. The Hessian is required because
/// the outer-loop control differentiates its first virtual control through
/// the gradient.
struct Objective {
  std::function<double(const Eigen::VectorXd&)> value;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> hessian;
};

/// g(s) = ||s - center||^2 with gradient 2(s - center) and Hessian 2I.
Objective quadratic_objective(const Eigen::VectorXd& center);

}  // namespace docsim
