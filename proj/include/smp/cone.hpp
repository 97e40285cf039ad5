#pragma once

#include <json.hpp>

#include <memory>
#include <string>
#include <vector>

#include "smp/probes.hpp"
#include "smp/semigroup.hpp"
#include "smp/types.hpp"

namespace smp {

/// Expression tree of a cone element: leaves are catalogued generators,
/// internal nodes are nonnegative pair combinations, resolvent applications
/// and pointwise minima.
struct ConeExpr {
  enum class Op { leaf, combo, resolvent, min };
  Op op = Op::leaf;
  int leaf = -1;
  double c1 = 0.0, c2 = 0.0;  // combo coefficients
  double alpha = 0.0;         // resolvent parameter
  std::shared_ptr<const ConeExpr> a, b;
};

nlohmann::json cone_expr_to_json(const ConeExpr& e, const std::vector<std::string>& generators);
std::shared_ptr<const ConeExpr> cone_expr_from_json(const nlohmann::json& j,
                                                    const std::vector<std::string>& generators);

struct ConeElement {
  std::shared_ptr<const ConeExpr> expr;
  int depth = 0;
  double certificate_alpha = 0.0;
  Eigen::VectorXd values;  // on the build grid
  std::string repr;

  TestFunction as_function(SpacePtr grid) const {
    TestFunction f = TestFunction::on_grid(grid, values, repr);
    f.claims.supermedian_alpha = certificate_alpha;
    f.claims.r_plus_depth = depth;
    return f;
  }
};

/// Finite enlargement fragment. Each level carries the previous elements,
/// adds every pairwise minimum of them (so min-closure of one level always
/// lands in the next), then resolvent images and lattice pair combinations,
/// the latter two capped at max_new_per_level. Everything deduplicates by
/// grid values; exceeding max_elements aborts with an error rather than
/// silently dropping minima.
struct ConeBuildOptions {
  std::vector<double> coefficients = {0.0, 0.5, 1.0, 2.0};
  std::size_t max_new_per_level = 24;
  std::size_t max_elements = 4096;
  double dedupe_tol = 1e-9;
};

/// R_n fragment over the generators (which must carry supermedian
/// certificates). Throws DepthExceededError for depth > 3.
std::vector<ConeElement> build_cone(const std::vector<TestFunction>& generators,
                                    const std::vector<double>& alphas, int depth,
                                    const ResolventSpec& U, SpacePtr grid,
                                    const ConeBuildOptions& opts = {});

/// True when some element's grid values match v within tol.
bool cone_contains(const std::vector<ConeElement>& cone, const Eigen::VectorXd& v,
                   double tol = 1e-7);

struct UniformityVerdict {
  bool equivalent = true;
  std::vector<std::string> witnesses;  // probe ids with a one-sided Cauchy failure
};

/// Def-style finite test: H and G generate the same uniformity iff every
/// probe is all-H-Cauchy exactly when it is all-G-Cauchy.
UniformityVerdict uniformity_equivalent(const std::vector<TestFunction>& H,
                                        const std::vector<TestFunction>& G,
                                        const std::vector<ProbeSequence>& probes);

bool separates_points(const std::vector<TestFunction>& H, const StatePoint& x,
                      const StatePoint& y, double tol = 1e-9);

}  // namespace smp
