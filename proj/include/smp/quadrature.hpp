#pragma once

#include <Eigen/Core>

#include <functional>
#include <vector>

namespace smp {

struct QuadRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

/// n-point Gauss-Legendre rule on [-1, 1].
const QuadRule& gauss_legendre(int n);

/// n-point Gauss-Hermite rule: ∫ e^{-z^2} g(z) dz ≈ Σ w_i g(z_i).
const QuadRule& gauss_hermite(int n);

using Real1d = std::function<double(double)>;

/// ∫_a^b g, with panels split at the given interior breakpoints and subdivided
/// to at most max_panel width. 16-node Gauss-Legendre per panel.
double integrate(const Real1d& g, double a, double b, const std::vector<double>& breakpoints = {},
                 double max_panel = 1.0);

/// ∫_0^len e^{-rate s} g(s) ds for bounded g. `len` may be +inf: the integral
/// is truncated where e^{-rate s} * scale / rate drops below tail_tol. Panels
/// split at the s-breakpoints.
double exp_weighted_integral(double rate, const Real1d& g, double len,
                             const std::vector<double>& s_breakpoints = {}, double scale = 1.0,
                             double tail_tol = 1e-13);

/// Composite Simpson with n_intervals subintervals (rounded up to even).
double simpson(const Real1d& g, double a, double b, long n_intervals);

}  // namespace smp
