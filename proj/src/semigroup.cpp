#include "smp/semigroup.hpp"

#include "smp/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace smp {

double default_laplace_horizon(double alpha) { return std::max(10.0 / alpha, 40.0); }

LaplaceResult laplace_forward(const SemigroupSpec& P, double alpha, const TestFunction& f,
                              const StatePoint& x, double T, double h,
                              std::optional<double> tol_request) {
  if (!(alpha > 0.0) || !(T > 0.0) || !(h > 0.0))
    throw Error("laplace_forward: alpha, T, h must be positive");
  if (!f.sup_bound) throw UnboundedFunctionError("laplace_forward: f has no finite sup bound");
  LaplaceResult r;
  r.truncation_bound = std::exp(-alpha * T) * (*f.sup_bound) / alpha;
  if (tol_request && r.truncation_bound > *tol_request)
    throw TruncationTooLooseError("laplace_forward: truncation bound " +
                                  std::to_string(r.truncation_bound) + " exceeds requested tolerance");
  auto integrand = [&](double t) { return std::exp(-alpha * t) * P.value(t, f, x); };
  r.value = simpson(integrand, 0.0, T, std::lround(std::ceil(T / h)));
  return r;
}

double check_resolvent_identity(const ResolventSpec& U, double alpha, double beta,
                                const TestFunction& f, const StatePoint& x) {
  if (!(alpha > 0.0) || !(beta > 0.0))
    throw Error("check_resolvent_identity: alpha, beta must be positive");
  if (alpha == beta) return 0.0;
  if (!U.function_of)
    throw CompositionUnavailableError("resolvent identity needs U applied to composed functions (" +
                                      U.example + ")");
  TestFunction ub_f = U.function_of(beta, f);
  double lhs = U.value(beta, f, x) - U.value(alpha, f, x);
  double rhs = (alpha - beta) * U.value(alpha, ub_f, x);
  return std::abs(lhs - rhs);
}

std::vector<double> default_beta_grid(double alpha) {
  double base = std::max(alpha, 1.0);
  std::vector<double> grid;
  for (int k = -2; k <= 10; ++k) grid.push_back(std::ldexp(base, k));
  return grid;
}

bool is_alpha_supermedian(const TestFunction& f, double alpha, const ResolventSpec& U,
                          const std::vector<double>& beta_grid,
                          const std::vector<StatePoint>& probes, double tol) {
  for (const auto& x : probes) {
    double fx = f(x);
    if (fx < -tol) throw NegativeFunctionError("is_alpha_supermedian: f negative at a probe");
    for (double beta : beta_grid) {
      if (fx < (beta - alpha) * U.value(beta, f, x) - tol) return false;
    }
  }
  return true;
}

std::vector<double> default_alpha_schedule() {
  std::vector<double> s;
  for (int k = 1; k <= 20; ++k) s.push_back(std::ldexp(1.0, k));
  return s;
}

double supermedian_limit(const TestFunction& f, const ResolventSpec& U, const StatePoint& x,
                         const std::vector<double>& alpha_schedule) {
  if (!f.claims.supermedian_alpha)
    throw Error("supermedian_limit: f carries no supermedian certificate");
  double beta = *f.claims.supermedian_alpha;
  double prev = -std::numeric_limits<double>::infinity();
  double last = 0.0;
  for (double a : alpha_schedule) {
    double uaf = U.value(a, f, x);
    double monotone_term = (a - beta) * uaf;
    if (monotone_term < prev - 1e-7)
      throw NotMonotoneError("supermedian_limit: (alpha-beta)U^alpha f decreased; certificate beta=" +
                             std::to_string(beta) + " looks wrong");
    prev = monotone_term;
    last = a * uaf;
  }
  if (last > f(x) + 1e-6)
    throw NotMonotoneError("supermedian_limit: limit exceeds f(x)");
  return last;
}

double resolvent_derivative(const ResolventSpec& U, const TestFunction& f, const StatePoint& x,
                            int order, double beta) {
  if (order < 0) throw Error("resolvent_derivative: negative order");
  if (order > 10)
    throw OrderTooHighError("resolvent_derivative: order above 10 is not supported");
  SignedKernel k = U.kernel_at(beta);
  Eigen::VectorXd v = grid_values(f, *k.space());
  for (int i = 0; i <= order; ++i) v = apply<double>(k, v);
  double factorial = 1.0;
  for (int i = 2; i <= order; ++i) factorial *= i;
  double sign = (order % 2 == 0) ? 1.0 : -1.0;
  return sign * factorial * v[k.space()->nearest(x)];
}

double fd_resolvent_derivative(const ResolventSpec& U, const TestFunction& f, const StatePoint& x,
                               int order, double beta, double step) {
  if (order > 10) throw OrderTooHighError("fd_resolvent_derivative: order above 10");
  if (step <= 0.0) step = 1e-3 * beta;
  if (order == 0) return U.value(beta, f, x);
  // Central stencil: D^n g(b) ~ h^{-n} sum_k (-1)^k C(n,k) g(b + (n/2 - k) h).
  double sum = 0.0;
  double binom = 1.0;
  for (int k = 0; k <= order; ++k) {
    double node = beta + (order / 2.0 - k) * step;
    double sign = (k % 2 == 0) ? 1.0 : -1.0;
    sum += sign * binom * U.value(node, f, x);
    binom = binom * (order - k) / (k + 1.0);
  }
  return sum / std::pow(step, order);
}

MonotonicityReport complete_monotonicity_check(const std::function<double(double)>& g,
                                               const std::vector<double>& beta_grid, int max_order,
                                               std::optional<double> tol) {
  MonotonicityReport report;
  report.beta_grid = beta_grid;
  report.orders_checked = max_order;
  const auto n = static_cast<Eigen::Index>(beta_grid.size());
  if (n < 2) throw Error("complete_monotonicity_check: grid too small");
  double delta = beta_grid[1] - beta_grid[0];
  for (Eigen::Index i = 1; i + 1 < n; ++i) {
    double d = beta_grid[static_cast<std::size_t>(i) + 1] - beta_grid[static_cast<std::size_t>(i)];
    if (std::abs(d - delta) > 1e-9 * std::max(1.0, std::abs(delta)))
      throw Error("complete_monotonicity_check: beta grid must be uniform");
  }
  Eigen::VectorXd values(n);
  for (Eigen::Index i = 0; i < n; ++i) values[i] = g(beta_grid[static_cast<std::size_t>(i)]);
  double scale = values.cwiseAbs().maxCoeff();
  report.tolerance = tol.value_or(1e-8 * std::max(scale, 1e-30));
  Eigen::VectorXd diff = values;
  for (int order = 0; order <= max_order; ++order) {
    double sign = (order % 2 == 0) ? 1.0 : -1.0;
    for (Eigen::Index i = 0; i + order < n; ++i) {
      double signed_diff = sign * diff[i];
      if (signed_diff < -report.tolerance)
        report.violations.push_back({order, beta_grid[static_cast<std::size_t>(i)], -signed_diff});
    }
    if (order == max_order) break;
    for (Eigen::Index i = 0; i + order + 1 < n; ++i) diff[i] = diff[i + 1] - diff[i];
  }
  return report;
}

double post_widder_invert(const ResolventSpec& U, const TestFunction& f, const StatePoint& x,
                          double t, int order) {
  if (!(t > 0.0)) throw Error("post_widder_invert: t must be positive");
  if (order < 1) throw Error("post_widder_invert: order must be >= 1");
  double alpha = static_cast<double>(order) / t;
  SignedKernel k = U.kernel_at(alpha);
  // (n/t)^{n+1} (U^{n/t})^{n+1} f == (alpha U^alpha)^{n+1} f; interleaving the
  // scale keeps every intermediate bounded by sup|f|.
  Eigen::MatrixXd scaled = alpha * k.entries();
  Eigen::VectorXd v = grid_values(f, *k.space());
  for (int i = 0; i <= order; ++i) v = scaled * v;
  return v[k.space()->nearest(x)];
}

double check_chapman_kolmogorov(const SemigroupSpec& P, double s, double t, const TestFunction& f,
                                const StatePoint& x) {
  if (s < 0.0 || t < 0.0) throw Error("check_chapman_kolmogorov: s, t must be nonnegative");
  TestFunction inner = P.function_of(t, f);
  return std::abs(P.value(s + t, f, x) - P.value(s, inner, x));
}

StrongContinuityResult check_strong_continuity(const TestFunction& f, const TestFunction& g,
                                               double alpha, const SemigroupSpec& P,
                                               const std::vector<double>& t_schedule,
                                               const std::vector<StatePoint>& probes) {
  StrongContinuityResult res;
  double sup_f = 0.0, sup_g = 0.0;
  for (const auto& x : probes) {
    sup_f = std::max(sup_f, std::abs(f(x)));
    sup_g = std::max(sup_g, std::abs(g(x)));
  }
  res.envelope_ok = true;
  for (double t : t_schedule) {
    double gap = 0.0;
    for (const auto& x : probes) gap = std::max(gap, std::abs(P.value(t, f, x) - f(x)));
    res.gaps.push_back(gap);
    double envelope = (1.0 - std::exp(-alpha * t)) * sup_f + t * sup_g;
    if (gap > envelope + 1e-6) res.envelope_ok = false;
  }
  res.passed = res.envelope_ok && !res.gaps.empty() && res.gaps.back() < 1e-3;
  return res;
}

}  // namespace smp
