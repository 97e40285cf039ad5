#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "smp/embedding.hpp"
#include "smp/probes.hpp"
#include "smp/semigroup.hpp"
#include "smp/types.hpp"

namespace smp {

enum class ExampleId {
  uniform,
  brownian,
  pure_jump,
  sticky,
  severed,
  fork,
  absorbing_brownian,
  collapse,
  // variants beyond the eight defaults
  brownian2,
  absorbing_brownian2,
  pure_jump_bd,
};

enum class Space { original, intrinsic };

const char* to_string(ExampleId id);
const char* to_string(Space s);
std::optional<ExampleId> parse_example(const std::string& name);
std::optional<Space> parse_space(const std::string& name);

/// A generator-pair fixture: a candidate resolvent image g with its alpha, whose
/// induced f (assembled numerically per example) should satisfy U^alpha f = g.
struct GeneratorPair {
  std::string name;
  TestFunction g;
  double alpha = 1.0;
  bool expect_valid = true;  // false for side-condition rejection fixtures
};

struct GridParams {
  double h = 0.01;
  double radius = 10.0;
};

/// Closed-form transition function, resolvent, embedding, probe library and
/// test-function batteries of one worked example, on both the original and
/// the intrinsic state space.
struct Example {
  ExampleId id{};
  std::string name;
  std::string description;
  bool variant = false;
  GridParams grid_params;

  SpacePtr original_grid;
  SpacePtr intrinsic_grid;
  EmbeddingSpec embedding;

  SemigroupSpec P, P_intrinsic;
  ResolventSpec U, U_intrinsic;

  std::vector<TestFunction> smooth_battery;
  std::vector<TestFunction> indicator_battery;
  std::vector<TestFunction> r_catalogue;       // catalogued members of R
  std::vector<TestFunction> r_plus_catalogue;  // nonnegative, with certificates
  std::vector<TestFunction> c0_set;            // C0 probes for the closure check
  std::vector<TestFunction> liftable_battery;  // fiber-constant, cheap to evaluate

  std::vector<GeneratorPair> generator_pairs;
  std::vector<GeneratorPair> rejected_pairs;

  std::vector<StatePoint> probe_points;
  std::vector<StatePoint> intrinsic_probe_points;
  ProbeLibrary probes;

  std::function<bool(const StatePoint&)> in_domain;
  std::function<bool(const StatePoint&)> in_intrinsic_domain;

  /// Assembles f from g for the example's generator pair (numerical
  /// differentiation along the branch structure).
  std::function<TestFunction(const TestFunction& g, double alpha)> assemble_generator;
  /// Throws SideConditionViolatedError naming the offending condition.
  std::function<void(const TestFunction& g)> check_side_conditions;

  /// Id of a catalogued bounded R-member that witnesses divergence along
  /// unbounded probe sequences (empty when the space is bounded/discrete).
  std::string divergence_witness;

  const SemigroupSpec& semigroup(Space s) const { return s == Space::original ? P : P_intrinsic; }
  const ResolventSpec& resolvent(Space s) const { return s == Space::original ? U : U_intrinsic; }
  const SpacePtr& grid(Space s) const { return s == Space::original ? original_grid : intrinsic_grid; }
};

/// Catalogue instance with default grid parameters (cached).
const Example& example(ExampleId id);
Example make_example(ExampleId id, const GridParams& params);

/// The eight defaults swept by the acceptance criteria.
const std::vector<ExampleId>& default_example_ids();
std::vector<ExampleId> all_example_ids();

double eval_Pt(ExampleId id, double t, const TestFunction& f, const StatePoint& x);
double eval_Ua(ExampleId id, double alpha, const TestFunction& f, const StatePoint& x);

/// Max over probes of |U^alpha f - g| with f assembled from g; throws
/// SideConditionViolatedError when g fails its side conditions.
double check_generator_pair(const Example& ex, const GeneratorPair& pair,
                            const std::vector<StatePoint>& probes);

}  // namespace smp
