#ifndef OPTDES_DESIGN_HPP
#define OPTDES_DESIGN_HPP

#include <vector>

#include <Eigen/Dense>

namespace optdes {

/// A finitely supported design: atoms x_i with weights w_i on the unit
/// simplex. This is the artifact's final answer.
struct Design {
  std::vector<Eigen::VectorXd> atoms;
  Eigen::VectorXd weights;

  int dim() const { return atoms.empty() ? 0 : static_cast<int>(atoms[0].size()); }
  int size() const { return static_cast<int>(atoms.size()); }
};

}  // namespace optdes

#endif  // OPTDES_DESIGN_HPP
