#include "docsim/objective.hpp"

namespace docsim {

Objective quadratic_objective(const Eigen::VectorXd& center) {
  Objective obj;
  obj.value = [center](const Eigen::VectorXd& s) {
    return (s - center).squaredNorm();
  };
  obj.gradient = [center](const Eigen::VectorXd& s) -> Eigen::VectorXd {
    return 2.0 * (s - center);
  };
  obj.hessian = [center](const Eigen::VectorXd& s) -> Eigen::MatrixXd {
    return 2.0 * Eigen::MatrixXd::Identity(s.size(), s.size());
  };
  return obj;
}

}  // namespace docsim
