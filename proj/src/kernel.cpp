#include "smp/kernel.hpp"

#include <cmath>

namespace smp {

Eigen::VectorXd grid_values(const TestFunction& f, const GridStateSpace& space) {
  Eigen::VectorXd v(space.size());
  for (Eigen::Index i = 0; i < space.size(); ++i) {
    v[i] = f(space.at(i));
    if (!std::isfinite(v[i]))
      throw UnboundedFunctionError("grid_values: " + f.name + " not finite at a grid point");
  }
  return v;
}

TestFunction apply(const SignedKernel& k, const TestFunction& f) {
  Eigen::VectorXd v = grid_values(f, *k.space());
  Eigen::VectorXd out = k.entries() * v;
  TestFunction g = TestFunction::on_grid(k.space(), std::move(out), "K[" + f.name + "]");
  return g;
}

void write_csv(const SignedKernel& k, std::ostream& os) {
  os << "row,col,mass\n";
  const auto& m = k.entries();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (m(i, j) != 0.0) os << i << ',' << j << ',' << m(i, j) << '\n';
}

}  // namespace smp
