#pragma once

#include <functional>
#include <string>
#include <vector>

#include "smp/probes.hpp"
#include "smp/semigroup.hpp"
#include "smp/types.hpp"

namespace smp {

/// Coordinate functions e_1..e_d of an example together with the catalogued
/// closure points of the intrinsic state space and the approach sequences that
/// certify them. Closure points are catalogued, not discovered: the probe
/// library certifies each one is a genuine limit.
struct EmbeddingSpec {
  std::string example;
  std::vector<TestFunction> coord_functions;
  std::vector<StatePoint> closure_points;
  std::vector<ProbeSequence> approach_sequences;  // >= 2 per closure point
};

/// psi(x) = (e_1(x), ..., e_d(x)).
StatePoint embed(const EmbeddingSpec& spec, const StatePoint& x);

/// The psi-image of the original grid (fibers collapsed) together with the
/// catalogued closure points.
SpacePtr intrinsic_points(const EmbeddingSpec& spec, const GridStateSpace& original);

/// A function on the intrinsic space: fiber evaluation on psi(E) plus
/// continuity-extended values at the closure points.
struct LiftedFunction {
  TestFunction base;  // on the original space
  std::vector<std::pair<StatePoint, double>> extended_values;
};

/// Lifts f through psi. Throws NotFiberConstantError when f differs on a
/// collapsed fiber; the extension at each closure point is cross-checked on
/// at least two approach sequences (consistent within 2e-3).
LiftedFunction lift_function(const EmbeddingSpec& spec, const GridStateSpace& original,
                             const TestFunction& f);

/// Evaluates the lifted function at an intrinsic point (closure points use the
/// extended values).
double lifted_value(const EmbeddingSpec& spec, const GridStateSpace& original,
                    const LiftedFunction& g, const StatePoint& xi);

/// V^alpha g at xi: the lift of U^alpha applied to g's base function,
/// extended by limits at closure points. Throws NotInCatalogueError when xi
/// matches neither the embedded grid nor a closure point.
double lifted_resolvent(const EmbeddingSpec& spec, const GridStateSpace& original,
                        const ResolventSpec& U, double alpha, const LiftedFunction& g,
                        const StatePoint& xi);

struct TransferVerdict {
  enum class Status { ok, fiber_inconsistent, not_bijective, cauchy_broken };
  Status status = Status::ok;
  std::string witness;
  bool passed() const { return status == Status::ok; }
};

/// Checks that psi' ∘ psi^{-1} is well defined on the grid, bijective between
/// the embedded grids, and Cauchy-preserving in both directions along the
/// probe library.
TransferVerdict transfer_map(const EmbeddingSpec& a, const EmbeddingSpec& b,
                             const GridStateSpace& grid, const std::vector<ProbeSequence>& probes);

}  // namespace smp
