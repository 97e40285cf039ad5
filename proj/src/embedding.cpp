#include "smp/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace smp {

namespace {

constexpr double kFiberTol = 1e-9;

// Rounded-coordinate key for grouping psi-images into fibers.
std::vector<long long> quantize(const Eigen::VectorXd& c, double tol) {
  std::vector<long long> k(static_cast<std::size_t>(c.size()));
  for (Eigen::Index i = 0; i < c.size(); ++i)
    k[static_cast<std::size_t>(i)] = std::llround(c[i] / tol);
  return k;
}

}  // namespace

StatePoint embed(const EmbeddingSpec& spec, const StatePoint& x) {
  StatePoint out;
  out.coords.resize(static_cast<Eigen::Index>(spec.coord_functions.size()));
  for (std::size_t i = 0; i < spec.coord_functions.size(); ++i)
    out.coords[static_cast<Eigen::Index>(i)] = spec.coord_functions[i](x);
  out.tag = PointTag::original;
  out.label = x.label;
  return out;
}

SpacePtr intrinsic_points(const EmbeddingSpec& spec, const GridStateSpace& original) {
  std::map<std::vector<long long>, std::pair<StatePoint, double>> image;
  for (Eigen::Index i = 0; i < original.size(); ++i) {
    StatePoint xi = embed(spec, original.at(i));
    auto key = quantize(xi.coords, 1e-9);
    auto it = image.find(key);
    double w = original.cell_weights()[i];
    if (it == image.end())
      image.emplace(key, std::make_pair(xi, w));
    else
      it->second.second = std::max(it->second.second, w);  // collapsed fiber keeps one cell
  }
  std::vector<StatePoint> pts;
  std::vector<double> w;
  for (auto& [key, pw] : image) {
    pts.push_back(pw.first);
    w.push_back(pw.second);
  }
  for (const auto& cp : spec.closure_points) {
    auto key = quantize(cp.coords, 1e-9);
    if (image.count(key))
      throw Error("intrinsic_points: catalogued closure point collides with psi(E) on the grid");
    pts.push_back(cp);
    w.push_back(1.0);
  }
  return std::make_shared<GridStateSpace>(
      pts, Eigen::Map<Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size())));
}

namespace {

// Limit of f along an approach sequence, with a tail-consistency guard.
double sequence_limit(const TestFunction& f, const ProbeSequence& seq, const std::string& what) {
  if (seq.points.size() < 4) throw Error("sequence_limit: approach sequence too short");
  double last = f(seq.points.back());
  ProbeSequence tail = seq;
  if (tail_oscillation(f, tail) > 1e-3)
    throw Error(what + ": values do not settle along approach sequence " + seq.id);
  return last;
}

double extension_at(const EmbeddingSpec& spec, const TestFunction& f, const StatePoint& cp,
                    const std::string& what) {
  std::vector<double> limits;
  for (const auto& seq : spec.approach_sequences) {
    if (!seq.target_closure || !same_coords(*seq.target_closure, cp, 1e-9)) continue;
    limits.push_back(sequence_limit(f, seq, what));
  }
  if (limits.size() < 2)
    throw Error(what + ": closure point needs at least two catalogued approach sequences");
  double lo = *std::min_element(limits.begin(), limits.end());
  double hi = *std::max_element(limits.begin(), limits.end());
  if (hi - lo > 2e-3)
    throw Error(what + ": extension limit depends on the approach sequence (spread " +
                std::to_string(hi - lo) + ")");
  return 0.5 * (lo + hi);
}

}  // namespace

LiftedFunction lift_function(const EmbeddingSpec& spec, const GridStateSpace& original,
                             const TestFunction& f) {
  // Fiber constancy: points with equal psi-image must carry equal f-values.
  // Group by image first; f is only evaluated on collapsed fibers.
  std::map<std::vector<long long>, Eigen::Index> seen;
  for (Eigen::Index i = 0; i < original.size(); ++i) {
    StatePoint xi = embed(spec, original.at(i));
    auto [it, inserted] = seen.emplace(quantize(xi.coords, 1e-9), i);
    if (!inserted) {
      double a = f(original.at(it->second));
      double b = f(original.at(i));
      if (std::abs(a - b) > kFiberTol)
        throw NotFiberConstantError("lift_function: " + f.name +
                                    " differs on the fiber of grid points " +
                                    std::to_string(it->second) + " and " + std::to_string(i));
    }
  }
  LiftedFunction lifted;
  lifted.base = f;
  for (const auto& cp : spec.closure_points)
    lifted.extended_values.emplace_back(cp, extension_at(spec, f, cp, "lift_function"));
  return lifted;
}

namespace {

// Pulls an intrinsic point back to an original grid point (or identifies a
// closure point). Returns (is_closure, index into extended_values or grid).
struct PullBack {
  bool is_closure = false;
  std::size_t closure_index = 0;
  StatePoint original_point;
};

PullBack pull_back(const EmbeddingSpec& spec, const GridStateSpace& original,
                   const std::vector<std::pair<StatePoint, double>>& extended,
                   const StatePoint& xi) {
  for (std::size_t k = 0; k < extended.size(); ++k)
    if (same_coords(extended[k].first, xi, 1e-9)) return {true, k, {}};
  for (Eigen::Index i = 0; i < original.size(); ++i) {
    if (same_coords(embed(spec, original.at(i)), xi, 1e-9)) return {false, 0, original.at(i)};
  }
  throw NotInCatalogueError("intrinsic point matches neither psi(grid) nor a closure point");
}

}  // namespace

double lifted_value(const EmbeddingSpec& spec, const GridStateSpace& original,
                    const LiftedFunction& g, const StatePoint& xi) {
  PullBack pb = pull_back(spec, original, g.extended_values, xi);
  if (pb.is_closure) return g.extended_values[pb.closure_index].second;
  return g.base(pb.original_point);
}

double lifted_resolvent(const EmbeddingSpec& spec, const GridStateSpace& original,
                        const ResolventSpec& U, double alpha, const LiftedFunction& g,
                        const StatePoint& xi) {
  TestFunction uf = U.function_of(alpha, g.base);
  PullBack pb = pull_back(spec, original, g.extended_values, xi);
  if (!pb.is_closure) return uf(pb.original_point);
  const StatePoint& cp = g.extended_values[pb.closure_index].first;
  return extension_at(spec, uf, cp, "lifted_resolvent");
}

TransferVerdict transfer_map(const EmbeddingSpec& a, const EmbeddingSpec& b,
                             const GridStateSpace& grid, const std::vector<ProbeSequence>& probes) {
  TransferVerdict v;
  // Fiber consistency in both directions on the grid.
  std::map<std::vector<long long>, std::pair<Eigen::Index, std::vector<long long>>> fwd, rev;
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    auto ka = quantize(embed(a, grid.at(i)).coords, 1e-9);
    auto kb = quantize(embed(b, grid.at(i)).coords, 1e-9);
    auto it = fwd.find(ka);
    if (it == fwd.end()) {
      fwd.emplace(ka, std::make_pair(i, kb));
    } else if (it->second.second != kb) {
      v.status = TransferVerdict::Status::fiber_inconsistent;
      v.witness = "grid points " + std::to_string(it->second.first) + " and " + std::to_string(i) +
                  " share a psi-fiber but split under psi'";
      return v;
    }
    auto jt = rev.find(kb);
    if (jt == rev.end()) {
      rev.emplace(kb, std::make_pair(i, ka));
    } else if (jt->second.second != ka) {
      v.status = TransferVerdict::Status::not_bijective;
      v.witness = "psi' merges grid points " + std::to_string(jt->second.first) + " and " +
                  std::to_string(i) + " that psi separates";
      return v;
    }
  }
  // Cauchy preservation along the probe library, coordinate by coordinate.
  for (const auto& seq : probes) {
    bool ca = true, cb = true;
    for (const auto& e : a.coord_functions) ca = ca && finite_cauchy(e, seq);
    for (const auto& e : b.coord_functions) cb = cb && finite_cauchy(e, seq);
    if (ca != cb) {
      v.status = TransferVerdict::Status::cauchy_broken;
      v.witness = "probe " + seq.id + (ca ? ": psi-Cauchy but psi'-divergent" : ": psi'-Cauchy but psi-divergent");
      return v;
    }
  }
  return v;
}

}  // namespace smp
