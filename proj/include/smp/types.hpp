#pragma once

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "smp/errors.hpp"

namespace smp {

enum class PointTag { original, closure_added };

/// A point of a (possibly multi-branch) state space: real coordinates plus a
/// tag recording whether the point existed in the original space or was added
/// by closure.
struct StatePoint {
  Eigen::VectorXd coords;
  PointTag tag = PointTag::original;
  std::string label;

  double x() const { return coords[0]; }
  double y() const { return coords[1]; }
  Eigen::Index dim() const { return coords.size(); }
};

StatePoint point(double x);
StatePoint point(double x, double y);
StatePoint closure_point(double x, std::string label = {});

bool same_coords(const StatePoint& a, const StatePoint& b, double tol = 1e-12);

/// Finite grid model of a state space. Each point represents a cell; the cell
/// weight is the length measure of that cell (1 for atomic points), so that
/// density kernels and atomic kernels coexist as masses.
class GridStateSpace {
 public:
  GridStateSpace(std::vector<StatePoint> points, Eigen::VectorXd cell_weights);

  Eigen::Index size() const { return static_cast<Eigen::Index>(points_.size()); }
  int dim() const { return dim_; }
  const StatePoint& at(Eigen::Index i) const { return points_[static_cast<std::size_t>(i)]; }
  const std::vector<StatePoint>& points() const { return points_; }
  const Eigen::VectorXd& cell_weights() const { return cell_weights_; }

  /// Index of the grid point closest to p (exact-hash fast path, linear scan
  /// fallback).
  Eigen::Index nearest(const StatePoint& p) const;

  bool same_as(const GridStateSpace& other) const;

  /// Uniform 1-d grid on [lo, hi] with spacing ~h (endpoints included).
  static std::shared_ptr<const GridStateSpace> uniform_1d(double lo, double hi, double h);

 private:
  std::vector<StatePoint> points_;
  Eigen::VectorXd cell_weights_;
  int dim_ = 1;
  std::unordered_map<std::uint64_t, Eigen::Index> index_;
};

using SpacePtr = std::shared_ptr<const GridStateSpace>;

/// Membership claims carried by a test function, with the certificate under
/// which each claim was made.
struct Claims {
  bool in_c_plus = false;
  std::optional<double> supermedian_alpha;
  std::optional<int> r_plus_depth;
  std::optional<int> coordinate;
};

/// An evaluable bounded real function on a state space. `breakpoints` lists
/// coordinate values where the function (or a derivative) jumps; quadrature
/// routines split integration panels there. An empty `sup_bound` flags the
/// function as unbounded.
struct TestFunction {
  std::string name;
  std::function<double(const StatePoint&)> eval;
  std::optional<double> sup_bound;
  std::vector<double> breakpoints;
  Claims claims;

  double operator()(const StatePoint& p) const { return eval(p); }

  static TestFunction constant(double c);
  /// Nearest-grid-point evaluation of a value vector.
  static TestFunction on_grid(SpacePtr space, Eigen::VectorXd values, std::string name);
  /// Wraps f with a value cache keyed on coordinate bits. Not thread safe.
  static TestFunction memoized(const TestFunction& f);
};

/// Max |f| over the points of a grid; throws UnboundedFunctionError on
/// non-finite values.
double grid_sup(const TestFunction& f, const GridStateSpace& space);

}  // namespace smp
