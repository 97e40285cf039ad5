#include "smp/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "smp/errors.hpp"

namespace smp {

namespace {

// Legendre P_n and derivative by recurrence.
std::pair<double, double> legendre(int n, double x) {
  double p0 = 1.0, p1 = x;
  for (int k = 2; k <= n; ++k) {
    double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  double dp = n * (x * p1 - p0) / (x * x - 1.0);
  return {p1, dp};
}

QuadRule make_gauss_legendre(int n) {
  QuadRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    // Tricomi initial guess, then Newton.
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      auto [p, dp] = legendre(n, x);
      double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    auto [p, dp] = legendre(n, x);
    (void)p;
    r.nodes[i] = x;
    r.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

// Hermite H_n (physicists') and derivative.
std::pair<double, double> hermite(int n, double x) {
  double h0 = 1.0, h1 = 2.0 * x;
  for (int k = 2; k <= n; ++k) {
    double h2 = 2.0 * x * h1 - 2.0 * (k - 1.0) * h0;
    h0 = h1;
    h1 = h2;
  }
  return {h1, 2.0 * n * h0};
}

QuadRule make_gauss_hermite(int n) {
  QuadRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  // Largest root guess, then step down (roots enumerated from the top).
  double x = 0.0;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    if (i == 0)
      x = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
    else if (i == 1)
      x -= 1.14 * std::pow(static_cast<double>(n), 0.426) / x;
    else if (i == 2)
      x = 1.86 * x - 0.86 * r.nodes[n - 1];
    else if (i == 3)
      x = 1.91 * x - 0.91 * r.nodes[n - i + 1];
    else
      x = 2.0 * x - r.nodes[n - i + 1];
    for (int it = 0; it < 200; ++it) {
      auto [h, dh] = hermite(n, x);
      double dx = h / dh;
      x -= dx;
      if (std::abs(dx) < 1e-14 * (1.0 + std::abs(x))) break;
    }
    auto [h, dh] = hermite(n, x);
    (void)h;
    // w_i = 2^{n+1} n! sqrt(pi) / H'_n(x_i)^2, computed via lgamma to avoid overflow.
    double logw = (n + 1) * std::log(2.0) + std::lgamma(n + 1.0) + 0.5 * std::log(M_PI) -
                  2.0 * std::log(std::abs(dh));
    double w = std::exp(logw);
    r.nodes[n - 1 - i] = x;
    r.weights[n - 1 - i] = w;
    r.nodes[i] = -x;
    r.weights[i] = w;
  }
  if (n % 2 == 1) {
    // Middle node at zero.
    auto [h, dh] = hermite(n, 0.0);
    (void)h;
    double logw = (n + 1) * std::log(2.0) + std::lgamma(n + 1.0) + 0.5 * std::log(M_PI) -
                  2.0 * std::log(std::abs(dh));
    r.nodes[n / 2] = 0.0;
    r.weights[n / 2] = std::exp(logw);
  }
  return r;
}

const QuadRule& cached(std::map<int, QuadRule>& cache, std::mutex& mu, int n,
                       QuadRule (*make)(int)) {
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make(n)).first;
  return it->second;
}

}  // namespace

const QuadRule& gauss_legendre(int n) {
  static std::map<int, QuadRule> cache;
  static std::mutex mu;
  return cached(cache, mu, n, make_gauss_legendre);
}

const QuadRule& gauss_hermite(int n) {
  static std::map<int, QuadRule> cache;
  static std::mutex mu;
  return cached(cache, mu, n, make_gauss_hermite);
}

namespace {

double panel_gl16(const Real1d& g, double a, double b) {
  const QuadRule& r = gauss_legendre(16);
  double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < 16; ++i) s += r.weights[i] * g(mid + half * r.nodes[i]);
  return s * half;
}

std::vector<double> panel_edges(double a, double b, const std::vector<double>& breakpoints,
                                double max_panel) {
  std::vector<double> edges{a};
  std::vector<double> bp = breakpoints;
  std::sort(bp.begin(), bp.end());
  for (double c : bp)
    if (c > a + 1e-14 && c < b - 1e-14 && c > edges.back() + 1e-14) edges.push_back(c);
  edges.push_back(b);
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    double lo = edges[i], hi = edges[i + 1];
    auto parts = std::max<long>(1, std::lround(std::ceil((hi - lo) / max_panel - 1e-12)));
    for (long k = 0; k < parts; ++k)
      out.push_back(lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(parts));
  }
  out.push_back(b);
  return out;
}

}  // namespace

double integrate(const Real1d& g, double a, double b, const std::vector<double>& breakpoints,
                 double max_panel) {
  if (!(b > a)) return 0.0;
  auto edges = panel_edges(a, b, breakpoints, max_panel);
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) s += panel_gl16(g, edges[i], edges[i + 1]);
  return s;
}

double exp_weighted_integral(double rate, const Real1d& g, double len,
                             const std::vector<double>& s_breakpoints, double scale,
                             double tail_tol) {
  if (!(rate > 0.0)) throw Error("exp_weighted_integral: rate must be positive");
  if (scale <= 0.0) scale = 1.0;
  // Horizon where the tail bound e^{-rate s} scale / rate falls below tail_tol.
  double horizon = std::log(std::max(scale / (rate * tail_tol), 2.0)) / rate;
  double upper = std::min(len, horizon);
  if (!(upper > 0.0)) return 0.0;
  double max_panel = std::min(1.0, 4.0 / rate);
  auto integrand = [&](double s) { return std::exp(-rate * s) * g(s); };
  return integrate(integrand, 0.0, upper, s_breakpoints, max_panel);
}

double simpson(const Real1d& g, double a, double b, long n_intervals) {
  if (!(b > a)) return 0.0;
  long n = n_intervals + (n_intervals % 2);
  if (n < 2) n = 2;
  double h = (b - a) / static_cast<double>(n);
  double s = g(a) + g(b);
  for (long i = 1; i < n; ++i) s += g(a + h * static_cast<double>(i)) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

}  // namespace smp
