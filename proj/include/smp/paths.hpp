#pragma once

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "smp/rng.hpp"
#include "smp/types.hpp"
#include "smp/zoo.hpp"

namespace smp {

struct PathSegment {
  double t_start = 0.0;
  enum class Kind { drift, hold } kind = Kind::drift;
  StatePoint start;
  Eigen::VectorXd velocity;  // zero for holds
};

struct PathJump {
  double t = 0.0;
  StatePoint target;
};

/// Piecewise path record. Evaluation is right continuous: a jump at t starts a
/// new segment whose value Y_t is the jump target. The one exception is the
/// instantaneous-jump model, whose start point is pinned at exactly t = 0 via
/// time_zero_point (that example is genuinely not right continuous at 0).
struct CadlagPath {
  double horizon = 0.0;
  std::vector<PathSegment> segments;
  std::vector<PathJump> jumps;
  std::optional<StatePoint> time_zero_point;

  StatePoint value(double t) const;
  StatePoint left_limit(double t) const;
};

struct SetSpec {
  enum class Shape { halfline_le, halfline_lt, halfline_ge, halfline_gt, singleton };
  Shape shape = Shape::halfline_lt;
  int coord = 0;
  double threshold = 0.0;
  StatePoint pt;  // singleton target

  bool contains(const StatePoint& p) const;
  std::string describe() const;

  static SetSpec below(double c, bool open, int coord = 0);
  static SetSpec above(double c, bool open, int coord = 0);
  static SetSpec at(StatePoint p);
};

struct StoppingRule {
  enum class Kind { hit_closed_set, hit_open_set, fixed_time };
  Kind kind = Kind::fixed_time;
  SetSpec set;
  double t = 0.0;
  std::string description;

  static StoppingRule hit(SetSpec s, bool open);
  static StoppingRule at_time(double t);
};

struct StopResult {
  double tau = 0.0;
  bool censored = false;  // no entrance inside the horizon
};

/// First entrance time from segment geometry (exact linear crossings, jump
/// inspection). Open sets use the infimum convention, so Y_tau may sit on the
/// boundary.
StopResult evaluate_stopping_time(const CadlagPath& path, const StoppingRule& rule);

/// Draws one trajectory. Replication i of a Monte Carlo run must pass
/// CounterRng(seed, i) so results are reproducible and order independent.
CadlagPath sample_path(const Example& ex, Space space, const StatePoint& x0, double horizon,
                       CounterRng& rng);

void write_path_csv(const std::vector<CadlagPath>& paths, std::ostream& os);

struct McTestReport {
  std::string test;
  std::string example;
  std::string space;
  int n = 0;
  std::uint64_t seed = 0;
  double statistic = 0.0;
  double null_value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::optional<double> p_value;
  std::optional<double> signed_gap;  // semigroup term minus empirical term
  nlohmann::json params;
};

/// |mean f(Y_{s+t}) - mean P_t f(Y_s)| against the 3-sigma band of the paired
/// difference.
McTestReport markov_mc_test(const Example& ex, Space space, const StatePoint& x0, double s,
                            double t, const TestFunction& f, int n, std::uint64_t seed,
                            double horizon = 0.0);

/// |mean f(Y_{tau+s}) - mean P_s f(Y_tau)|; throws TooManyCensoredError when
/// more than 1% of the paths never stop inside the horizon.
McTestReport strong_markov_mc_test(const Example& ex, Space space, const StatePoint& x0,
                                   const StoppingRule& rule, double s, const TestFunction& f,
                                   int n, std::uint64_t seed, double horizon = 0.0);

double ks_statistic_exponential(std::vector<double> samples, double rate);
double kolmogorov_p_value(double d, int n);

/// Kolmogorov-Smirnov fit of the origin holding times of the intrinsic sticky
/// process against Exp(1).
McTestReport holding_time_test(int n, std::uint64_t seed);

/// Frequency of Y_t != lim Y_{t+eps} along the ladder eps = 1e-3..1e-6.
McTestReport right_limit_identity_test(const Example& ex, Space space, const StatePoint& x0,
                                       double t, int n, std::uint64_t seed);

/// Empirical mean of e^{-alpha t} f(Y_t) must be non-increasing along the
/// t-grid up to Monte Carlo error (f needs a supermedian certificate).
McTestReport supermartingale_mc_test(const Example& ex, Space space, const StatePoint& x0,
                                     const TestFunction& f, int n, std::uint64_t seed,
                                     const std::vector<double>& t_grid);

/// Fork fixture: up-branch frequency within 3/(2 sqrt N) of 1/2 and zero
/// occupancy of the branch point on the intrinsic space.
McTestReport branch_frequency_test(int n, std::uint64_t seed);

}  // namespace smp
