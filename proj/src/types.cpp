#include "smp/types.hpp"

#include <cmath>
#include <cstring>
#include <limits>

namespace smp {

StatePoint point(double x) {
  StatePoint p;
  p.coords = Eigen::VectorXd::Constant(1, x);
  return p;
}

StatePoint point(double x, double y) {
  StatePoint p;
  p.coords.resize(2);
  p.coords << x, y;
  return p;
}

StatePoint closure_point(double x, std::string label) {
  StatePoint p = point(x);
  p.tag = PointTag::closure_added;
  p.label = std::move(label);
  return p;
}

bool same_coords(const StatePoint& a, const StatePoint& b, double tol) {
  if (a.coords.size() != b.coords.size()) return false;
  return (a.coords - b.coords).cwiseAbs().maxCoeff() <= tol;
}

namespace {

std::uint64_t coord_hash(const Eigen::VectorXd& c) {
  std::uint64_t h = 0x9E3779B97F4A7C15ull;
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    std::uint64_t bits;
    double v = c[i] == 0.0 ? 0.0 : c[i];  // normalize -0.0
    std::memcpy(&bits, &v, sizeof(bits));
    h ^= bits + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
  }
  return h;
}

}  // namespace

GridStateSpace::GridStateSpace(std::vector<StatePoint> points, Eigen::VectorXd cell_weights)
    : points_(std::move(points)), cell_weights_(std::move(cell_weights)) {
  if (points_.empty()) throw Error("GridStateSpace: empty point set");
  if (cell_weights_.size() != static_cast<Eigen::Index>(points_.size()))
    throw Error("GridStateSpace: weight count mismatch");
  dim_ = static_cast<int>(points_[0].coords.size());
  for (const auto& p : points_) {
    if (static_cast<int>(p.coords.size()) != dim_)
      throw Error("GridStateSpace: inconsistent dimension");
    if (!p.coords.allFinite()) throw Error("GridStateSpace: non-finite coordinates");
  }
  for (Eigen::Index i = 0; i < cell_weights_.size(); ++i) {
    if (!(cell_weights_[i] > 0.0) || !std::isfinite(cell_weights_[i]))
      throw Error("GridStateSpace: cell weights must be positive and finite");
  }
  index_.reserve(points_.size() * 2);
  for (std::size_t i = 0; i < points_.size(); ++i) {
    auto [it, inserted] = index_.emplace(coord_hash(points_[i].coords), static_cast<Eigen::Index>(i));
    if (!inserted && same_coords(points_[i], points_[it->second]))
      throw Error("GridStateSpace: duplicate point");
  }
}

Eigen::Index GridStateSpace::nearest(const StatePoint& p) const {
  auto it = index_.find(coord_hash(p.coords));
  if (it != index_.end() && points_[static_cast<std::size_t>(it->second)].coords.size() == p.coords.size())
    return it->second;
  Eigen::Index best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points_.size(); ++i) {
    double d = (points_[i].coords - p.coords).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = static_cast<Eigen::Index>(i);
    }
  }
  return best;
}

bool GridStateSpace::same_as(const GridStateSpace& other) const {
  if (this == &other) return true;
  if (size() != other.size() || dim_ != other.dim_) return false;
  for (std::size_t i = 0; i < points_.size(); ++i)
    if (!same_coords(points_[i], other.points_[i])) return false;
  return true;
}

std::shared_ptr<const GridStateSpace> GridStateSpace::uniform_1d(double lo, double hi, double h) {
  auto n = static_cast<Eigen::Index>(std::llround((hi - lo) / h));
  std::vector<StatePoint> pts;
  pts.reserve(static_cast<std::size_t>(n) + 1);
  for (Eigen::Index i = 0; i <= n; ++i) pts.push_back(point(lo + static_cast<double>(i) * h));
  Eigen::VectorXd w = Eigen::VectorXd::Constant(n + 1, h);
  w[0] = h / 2;
  w[n] = h / 2;
  return std::make_shared<GridStateSpace>(std::move(pts), std::move(w));
}

TestFunction TestFunction::constant(double c) {
  TestFunction f;
  f.name = "const(" + std::to_string(c) + ")";
  f.eval = [c](const StatePoint&) { return c; };
  f.sup_bound = std::abs(c);
  if (c >= 0) f.claims.supermedian_alpha = 0.0;
  return f;
}

TestFunction TestFunction::on_grid(SpacePtr space, Eigen::VectorXd values, std::string name) {
  if (values.size() != space->size()) throw Error("on_grid: value count mismatch");
  TestFunction f;
  f.name = std::move(name);
  f.sup_bound = values.size() ? values.cwiseAbs().maxCoeff() : 0.0;
  auto vals = std::make_shared<Eigen::VectorXd>(std::move(values));
  f.eval = [space, vals](const StatePoint& p) { return (*vals)[space->nearest(p)]; };
  return f;
}

TestFunction TestFunction::memoized(const TestFunction& f) {
  TestFunction m = f;
  auto cache = std::make_shared<std::unordered_map<std::uint64_t, double>>();
  auto inner = f.eval;
  m.eval = [cache, inner](const StatePoint& p) {
    std::uint64_t key = coord_hash(p.coords);
    auto it = cache->find(key);
    if (it != cache->end()) return it->second;
    double v = inner(p);
    cache->emplace(key, v);
    return v;
  };
  return m;
}

double grid_sup(const TestFunction& f, const GridStateSpace& space) {
  double s = 0.0;
  for (const auto& p : space.points()) {
    double v = f(p);
    if (!std::isfinite(v)) throw UnboundedFunctionError("function not finite on the grid: " + f.name);
    s = std::max(s, std::abs(v));
  }
  return s;
}

}  // namespace smp
