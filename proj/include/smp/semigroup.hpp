#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "smp/kernel.hpp"
#include "smp/types.hpp"

namespace smp {

enum class EvalKind { closed_form, quadrature, grid_kernel };

/// Evaluator for a transition function P_t. `value` computes P_t f(x);
/// `function_of` materializes P_t f as a test function with propagated
/// breakpoints so it can be fed back into integrals.
struct SemigroupSpec {
  std::string example;
  EvalKind kind = EvalKind::closed_form;
  std::function<double(double, const TestFunction&, const StatePoint&)> value;
  std::function<TestFunction(double, const TestFunction&)> function_of;
  std::function<SignedKernel(double)> kernel;  // optional grid representation
};

/// Evaluator for a resolvent U^alpha; same layout as SemigroupSpec. Closed
/// form evaluators accept arbitrary bounded functions, which makes composed
/// terms like U^a(U^b f) available.
struct ResolventSpec {
  std::string example;
  EvalKind kind = EvalKind::closed_form;
  std::function<double(double, const TestFunction&, const StatePoint&)> value;
  std::function<TestFunction(double, const TestFunction&)> function_of;
  std::function<SignedKernel(double)> kernel;  // optional grid representation

  SignedKernel kernel_at(double alpha) const {
    if (!kernel) throw KernelUnavailableError("no grid kernel for " + example);
    return kernel(alpha);
  }
};

struct LaplaceResult {
  double value = 0.0;
  double truncation_bound = 0.0;
};

/// Composite-Simpson quadrature of ∫_0^T e^{-alpha t} P_t f(x) dt. The
/// returned truncation bound e^{-alpha T} sup|f| / alpha is the caller's error
/// allowance for the discarded tail; if a tolerance is requested and the bound
/// exceeds it, throws TruncationTooLooseError.
LaplaceResult laplace_forward(const SemigroupSpec& P, double alpha, const TestFunction& f,
                              const StatePoint& x, double T, double h,
                              std::optional<double> tol_request = {});

double default_laplace_horizon(double alpha);
inline constexpr double kDefaultLaplaceStep = 1e-3;

/// |U^b f(x) - U^a f(x) - (a - b) U^a(U^b f)(x)|.
double check_resolvent_identity(const ResolventSpec& U, double alpha, double beta,
                                const TestFunction& f, const StatePoint& x);

/// Geometric beta grid {2^k max(alpha,1) : k = -2..10} used by supermedian
/// probes.
std::vector<double> default_beta_grid(double alpha);

/// Checks f >= (beta - alpha) U^beta f - tol over the beta grid and probe
/// points. Throws NegativeFunctionError when f is negative at a probe.
bool is_alpha_supermedian(const TestFunction& f, double alpha, const ResolventSpec& U,
                          const std::vector<double>& beta_grid,
                          const std::vector<StatePoint>& probes, double tol = 1e-9);

std::vector<double> default_alpha_schedule();

/// f_hat(x) = lim a U^a f(x), approximated by the last schedule term. Requires
/// a supermedian certificate on f; asserts the monotone growth of
/// (a - beta) U^a f(x) along the schedule (NotMonotoneError otherwise) and
/// f_hat <= f + 1e-6.
double supermedian_limit(const TestFunction& f, const ResolventSpec& U, const StatePoint& x,
                         const std::vector<double>& alpha_schedule = default_alpha_schedule());

/// n-th derivative of beta -> U^beta f(x), computed through kernel powers as
/// (-1)^n n! (U^beta)^{n+1} f(x). Orders above 10 are refused.
double resolvent_derivative(const ResolventSpec& U, const TestFunction& f, const StatePoint& x,
                            int order, double beta);

/// Central finite-difference estimate of the same derivative; the dual path
/// for cross-checks. Step defaults to 1e-3 * beta.
double fd_resolvent_derivative(const ResolventSpec& U, const TestFunction& f, const StatePoint& x,
                               int order, double beta, double step = 0.0);

struct MonotonicityViolation {
  int order;
  double beta;
  double magnitude;
};

struct MonotonicityReport {
  std::vector<double> beta_grid;
  int orders_checked = 0;
  double tolerance = 0.0;
  std::vector<MonotonicityViolation> violations;
  bool completely_monotone() const { return violations.empty(); }
};

/// Forward differences of g on a uniform beta grid; records every (n, beta)
/// where (-1)^n Δ^n g(beta) < -tol. Default tol is 1e-8 * max|g|.
MonotonicityReport complete_monotonicity_check(const std::function<double(double)>& g,
                                               const std::vector<double>& beta_grid, int max_order,
                                               std::optional<double> tol = {});

/// n-th Post-Widder approximant (n/t)^{n+1} (U^{n/t})^{n+1} f(x) of P_t f(x),
/// computed via the grid kernel. Error is O(1/n) for smooth t -> P_t f(x).
double post_widder_invert(const ResolventSpec& U, const TestFunction& f, const StatePoint& x,
                          double t, int order);

/// |P_{s+t} f(x) - P_s(P_t f)(x)| with the inner function materialized through
/// SemigroupSpec::function_of.
double check_chapman_kolmogorov(const SemigroupSpec& P, double s, double t, const TestFunction& f,
                                const StatePoint& x);

struct StrongContinuityResult {
  bool passed = false;
  bool envelope_ok = false;
  std::vector<double> gaps;  // max_x |P_t f - f| along the schedule
};

/// For f = U^alpha g: checks max |P_t f - f| over probes falls below 1e-3
/// along the schedule and respects the envelope
/// (1 - e^{-alpha t}) sup|f| + t sup|g|.
StrongContinuityResult check_strong_continuity(const TestFunction& f, const TestFunction& g,
                                               double alpha, const SemigroupSpec& P,
                                               const std::vector<double>& t_schedule,
                                               const std::vector<StatePoint>& probes);

}  // namespace smp
