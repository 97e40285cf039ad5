#include "smp/zoo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>

#include "smp/quadrature.hpp"

namespace smp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPointTol = 1e-12;

// ---------------------------------------------------------------------------
// Ray integrals along 1-d branch geometry
// ---------------------------------------------------------------------------

std::vector<double> s_breaks(const std::vector<double>& bp, double x0, double dir) {
  std::vector<double> out;
  out.reserve(bp.size());
  for (double b : bp) {
    double s = (b - x0) * dir;
    if (s > 1e-14) out.push_back(s);
  }
  return out;
}

double fn_scale(const TestFunction& f) { return std::max(f.sup_bound.value_or(1.0), 1e-6); }

/// ∫_0^len e^{-rate s} f(x0 + dir s) ds.
double ray_integral(double rate, const TestFunction& f, double x0, double dir, double len = kInf) {
  auto g = [&](double s) { return f(point(x0 + dir * s)); };
  return exp_weighted_integral(rate, g, len, s_breaks(f.breakpoints, x0, dir), fn_scale(f));
}

std::vector<double> merge_breaks(std::vector<double> a, std::initializer_list<double> extra) {
  for (double e : extra) a.push_back(e);
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end(),
                      [](double u, double v) { return std::abs(u - v) < 1e-12; }),
          a.end());
  return a;
}

std::vector<double> shift_breaks(const std::vector<double>& bp, double delta) {
  std::vector<double> out;
  out.reserve(bp.size());
  for (double b : bp) out.push_back(b + delta);
  return out;
}

// ---------------------------------------------------------------------------
// Function batteries
// ---------------------------------------------------------------------------

TestFunction fn_1d(std::string name, std::function<double(double)> h, double sup,
                   std::vector<double> bp = {}) {
  TestFunction f;
  f.name = std::move(name);
  f.eval = [h = std::move(h)](const StatePoint& p) { return h(p.x()); };
  f.sup_bound = sup;
  f.breakpoints = std::move(bp);
  return f;
}

TestFunction gauss_bump(double center, double sigma) {
  return fn_1d("bump(" + std::to_string(center) + ")",
               [center, sigma](double x) {
                 double z = (x - center) / sigma;
                 return std::exp(-0.5 * z * z);
               },
               1.0);
}

TestFunction logistic_fn() {
  return fn_1d("logistic", [](double x) { return 1.0 / (1.0 + std::exp(-x)); }, 1.0);
}

TestFunction atan_fn() {
  return fn_1d("atan_scaled", [](double x) { return 0.5 + std::atan(x) / M_PI; }, 1.0);
}

TestFunction damped_cos() {
  return fn_1d("damped_cos", [](double x) { return std::cos(x) * std::exp(-x * x / 8.0); }, 1.0);
}

TestFunction indicator_le(double c) {
  return fn_1d("ind(x<=" + std::to_string(c) + ")", [c](double x) { return x <= c ? 1.0 : 0.0; },
               1.0, {c});
}

TestFunction indicator_lt(double c) {
  return fn_1d("ind(x<" + std::to_string(c) + ")", [c](double x) { return x < c ? 1.0 : 0.0; },
               1.0, {c});
}

TestFunction indicator_ge(double c) {
  return fn_1d("ind(x>=" + std::to_string(c) + ")", [c](double x) { return x >= c ? 1.0 : 0.0; },
               1.0, {c});
}

TestFunction indicator_interval(double a, double b) {
  return fn_1d("ind[" + std::to_string(a) + "," + std::to_string(b) + "]",
               [a, b](double x) { return (x >= a && x <= b) ? 1.0 : 0.0; }, 1.0, {a, b});
}

TestFunction indicator_point(double c) {
  return fn_1d("ind({" + std::to_string(c) + "})",
               [c](double x) { return std::abs(x - c) <= kPointTol ? 1.0 : 0.0; }, 1.0, {c});
}

std::vector<StatePoint> line_probes(double lo, double hi) {
  static const double rel[] = {0.02, 0.06, 0.1, 0.15, 0.2, 0.26, 0.32, 0.38, 0.44, 0.5,
                               0.56, 0.62, 0.68, 0.74, 0.8, 0.85, 0.9, 0.94, 0.97, 0.99};
  std::vector<StatePoint> pts;
  for (double r : rel) pts.push_back(point(lo + r * (hi - lo)));
  return pts;
}

ProbeSequence make_sequence(std::string id, std::function<StatePoint(int)> gen, int n,
                            std::optional<StatePoint> target = {}) {
  ProbeSequence seq;
  seq.id = std::move(id);
  seq.points.reserve(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) seq.points.push_back(gen(i));
  seq.target_closure = std::move(target);
  return seq;
}

ProbeSequence pair_sequence(std::string id, const StatePoint& a, const StatePoint& b) {
  ProbeSequence seq;
  seq.id = std::move(id);
  for (int i = 0; i < 16; ++i) {
    seq.points.push_back(a);
    seq.points.push_back(b);
  }
  return seq;
}

// ---------------------------------------------------------------------------
// Numerical differentiation (generator assembly)
// ---------------------------------------------------------------------------

// d/ds g(path(s)) with one-sided stencils near the piece edges [lo, hi].
double path_derivative(const std::function<double(double)>& g, double s, double lo, double hi,
                       double h = 1e-5) {
  if (s - h >= lo && s + h <= hi) return (g(s + h) - g(s - h)) / (2.0 * h);
  if (s + 2.0 * h <= hi) return (-3.0 * g(s) + 4.0 * g(s + h) - g(s + 2.0 * h)) / (2.0 * h);
  return (3.0 * g(s) - 4.0 * g(s - h) + g(s - 2.0 * h)) / (2.0 * h);
}

double second_derivative(const std::function<double(double)>& g, double s, double h = 1e-4) {
  return (-g(s + 2 * h) + 16 * g(s + h) - 30 * g(s) + 16 * g(s - h) - g(s - 2 * h)) /
         (12.0 * h * h);
}

double estimate_sup(const TestFunction& f, const std::vector<StatePoint>& sample) {
  double s = 0.0;
  for (const auto& p : sample) s = std::max(s, std::abs(f(p)));
  return s * 1.5 + 1e-9;
}

// ---------------------------------------------------------------------------
// Kernel discretization helpers
// ---------------------------------------------------------------------------

// ∫_{[a,b] ∩ (-inf, x]} e^{-rate (x - y)} dy.
double exp_mass_below(double rate, double x, double a, double b) {
  double hi = std::min(b, x);
  if (hi <= a) return 0.0;
  return (std::exp(-rate * (x - hi)) - std::exp(-rate * (x - a))) / rate;
}

// ∫_{[a,b] ∩ [x, inf)} e^{-rate (y - x)} dy.
double exp_mass_above(double rate, double x, double a, double b) {
  double lo = std::max(a, x);
  if (lo >= b) return 0.0;
  return (std::exp(-rate * (lo - x)) - std::exp(-rate * (b - x))) / rate;
}

struct CellGrid {
  SpacePtr space;
  std::vector<std::pair<double, double>> edges;  // per-point cell in branch coordinate
};

// Cells of a uniform 1-d grid built by GridStateSpace::uniform_1d.
CellGrid cells_of_uniform(double lo, double hi, double h) {
  CellGrid g;
  g.space = GridStateSpace::uniform_1d(lo, hi, h);
  for (Eigen::Index i = 0; i < g.space->size(); ++i) {
    double x = g.space->at(i).x();
    g.edges.emplace_back(std::max(lo, x - h / 2), std::min(hi, x + h / 2));
  }
  return g;
}

std::uint64_t float_key(double x) {
  std::uint64_t k;
  std::memcpy(&k, &x, sizeof(k));
  return k;
}

// ---------------------------------------------------------------------------
// Spec factories
// ---------------------------------------------------------------------------

using ValueFn = std::function<double(double, const TestFunction&, const StatePoint&)>;
using BreakPropagate = std::function<std::vector<double>(double, const std::vector<double>&)>;

SemigroupSpec make_semigroup(std::string example, ValueFn value, BreakPropagate bp) {
  SemigroupSpec P;
  P.example = example;
  P.kind = EvalKind::closed_form;
  P.value = value;
  P.function_of = [example, value, bp](double t, const TestFunction& f) {
    TestFunction g;
    g.name = "P_t[" + f.name + "]";
    g.eval = [value, t, f](const StatePoint& x) { return value(t, f, x); };
    g.sup_bound = f.sup_bound;
    g.breakpoints = bp ? bp(t, f.breakpoints) : std::vector<double>{};
    return g;
  };
  return P;
}

ResolventSpec make_resolvent(std::string example, ValueFn value, BreakPropagate bp,
                             std::function<SignedKernel(double)> kernel = {}) {
  ResolventSpec U;
  U.example = example;
  U.kind = EvalKind::closed_form;
  U.value = value;
  U.kernel = std::move(kernel);
  U.function_of = [example, value, bp](double alpha, const TestFunction& f) {
    TestFunction g;
    g.name = "U^a[" + f.name + "]";
    g.eval = [value, alpha, f](const StatePoint& x) { return value(alpha, f, x); };
    if (f.sup_bound) g.sup_bound = *f.sup_bound / alpha;
    g.breakpoints = bp ? bp(alpha, f.breakpoints) : std::vector<double>{};
    return g;
  };
  return U;
}

// U^1 h as a memoized catalogue entry with its supermedian certificate.
TestFunction catalogued_potential(const ResolventSpec& U, const TestFunction& h, double alpha,
                                  const std::string& name) {
  TestFunction g = U.function_of(alpha, h);
  g.name = name;
  g.claims.in_c_plus = true;
  g.claims.supermedian_alpha = alpha;
  TestFunction m = TestFunction::memoized(g);
  return m;
}

TestFunction min_of(const TestFunction& a, const TestFunction& b, const std::string& name) {
  TestFunction f;
  f.name = name;
  auto ea = a.eval, eb = b.eval;
  f.eval = [ea, eb](const StatePoint& p) { return std::min(ea(p), eb(p)); };
  if (a.sup_bound && b.sup_bound) f.sup_bound = std::min(*a.sup_bound, *b.sup_bound);
  f.breakpoints = merge_breaks(a.breakpoints, {});
  for (double b2 : b.breakpoints) f.breakpoints.push_back(b2);
  std::sort(f.breakpoints.begin(), f.breakpoints.end());
  if (a.claims.supermedian_alpha && b.claims.supermedian_alpha)
    f.claims.supermedian_alpha = std::max(*a.claims.supermedian_alpha, *b.claims.supermedian_alpha);
  return f;
}

// ===========================================================================
// Uniform motion
// ===========================================================================

Example build_uniform(const GridParams& gp) {
  Example ex;
  ex.id = ExampleId::uniform;
  ex.name = "uniform";
  ex.description = "deterministic motion to the left at unit speed on the real line";
  ex.grid_params = gp;
  ex.original_grid = GridStateSpace::uniform_1d(-gp.radius, gp.radius, gp.h);
  ex.in_domain = [](const StatePoint& p) { return p.dim() == 1 && std::isfinite(p.x()); };
  ex.in_intrinsic_domain = ex.in_domain;

  auto check_domain = [in = ex.in_domain](const StatePoint& x) {
    if (!in(x)) throw OutOfDomainError("uniform: point outside the state space");
  };

  ValueFn p_value = [check_domain](double t, const TestFunction& f, const StatePoint& x) {
    check_domain(x);
    if (t < 0) throw Error("negative time");
    return f(point(x.x() - t));
  };
  ex.P = make_semigroup("uniform", p_value, [](double t, const std::vector<double>& bp) {
    return shift_breaks(bp, t);
  });

  double h = gp.h, radius = gp.radius;
  auto kernel = [h, radius](double alpha) {
    CellGrid cg = cells_of_uniform(-radius, radius, h);
    Eigen::Index n = cg.space->size();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      double x = cg.space->at(i).x();
      for (Eigen::Index j = 0; j <= i; ++j)
        m(i, j) = exp_mass_below(alpha, x, cg.edges[static_cast<std::size_t>(j)].first,
                                 cg.edges[static_cast<std::size_t>(j)].second);
    }
    return SignedKernel(cg.space, std::move(m));
  };

  ValueFn u_value = [check_domain](double alpha, const TestFunction& f, const StatePoint& x) {
    check_domain(x);
    return ray_integral(alpha, f, x.x(), -1.0);
  };
  ex.U = make_resolvent("uniform", u_value,
                        [](double, const std::vector<double>& bp) { return bp; }, kernel);
  ex.P_intrinsic = ex.P;
  ex.U_intrinsic = ex.U;

  TestFunction coord = fn_1d("e", [](double x) { return x; }, 0.0);
  coord.sup_bound.reset();
  coord.claims.coordinate = 0;
  ex.embedding.example = "uniform";
  ex.embedding.coord_functions = {coord};
  ex.intrinsic_grid = ex.original_grid;

  ex.smooth_battery = {TestFunction::constant(1.0), gauss_bump(0.0, 1.0), logistic_fn(),
                       atan_fn(), damped_cos(), gauss_bump(2.0, 0.8)};
  ex.indicator_battery = {indicator_le(0.0), indicator_ge(0.0), indicator_interval(-1.0, 1.0),
                          indicator_point(0.0), indicator_le(-2.0)};

  ex.r_catalogue = {TestFunction::constant(1.0),
                    catalogued_potential(ex.U, indicator_le(0.0), 1.0, "U1[ind<=0]"),
                    catalogued_potential(ex.U, gauss_bump(0.0, 1.0), 1.0, "U1[bump0]"),
                    catalogued_potential(ex.U, indicator_ge(0.0), 1.0, "U1[ind>=0]")};
  // sin = U^1(cos + sin): bounded oscillating member of C, witnesses divergent probes.
  TestFunction osc = fn_1d("osc", [](double x) { return std::sin(x); }, 1.0);
  osc.claims.in_c_plus = false;
  ex.r_catalogue.push_back(osc);
  ex.r_catalogue.push_back(
      min_of(ex.r_catalogue[1], ex.r_catalogue[2], "min(U1 inds)"));
  ex.divergence_witness = "osc";

  ex.r_plus_catalogue = {TestFunction::constant(1.0), ex.r_catalogue[1], ex.r_catalogue[2],
                         ex.r_catalogue[3], ex.r_catalogue[5]};
  ex.r_plus_catalogue[0].claims.supermedian_alpha = 1.0;

  ex.c0_set = {gauss_bump(0.0, 1.0), gauss_bump(1.5, 0.7), gauss_bump(-2.0, 1.2)};
  ex.liftable_battery = {gauss_bump(0.0, 1.0), logistic_fn()};

  ex.probe_points = line_probes(-8.0, 8.0);
  ex.intrinsic_probe_points = ex.probe_points;

  ex.probes.sequences = {
      make_sequence("conv_inv_n", [](int n) { return point(1.0 / n); }, 4096),
      make_sequence("alt_inv_n", [](int n) { return point((n % 2 ? 1.0 : -1.0) / n); }, 4096),
      make_sequence("div_n", [](int n) { return point(static_cast<double>(n)); }, 4096),
      pair_sequence("pair_-1_1", point(-1.0), point(1.0)),
  };

  ex.assemble_generator = [](const TestFunction& g, double alpha) {
    TestFunction f;
    f.name = "gen[" + g.name + "]";
    auto ge = g.eval;
    f.eval = [ge, alpha](const StatePoint& p) {
      auto g1 = [&](double s) { return ge(point(s)); };
      return path_derivative(g1, p.x(), -kInf, kInf) + alpha * ge(point(p.x()));
    };
    f.breakpoints = g.breakpoints;
    return f;
  };
  ex.check_side_conditions = [](const TestFunction&) {};

  ex.generator_pairs = {
      {"gauss", fn_1d("g_gauss", [](double x) { return std::exp(-x * x); }, 1.0), 1.0, true},
      {"cos", fn_1d("g_cos", [](double x) { return 1.0 + 0.5 * std::cos(x); }, 1.5), 1.0, true},
  };
  return ex;
}

// ===========================================================================
// Brownian motion (d = 1 and d = 2)
// ===========================================================================

double gh_heat_1d(double t, const TestFunction& f, double x) {
  const QuadRule& r = gauss_hermite(32);
  double c = std::sqrt(2.0 * t);
  double s = 0.0;
  for (int i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * f(point(x + c * r.nodes[i]));
  return s / std::sqrt(M_PI);
}

double gh_heat_2d(double t, const TestFunction& f, double x, double y) {
  const QuadRule& r = gauss_hermite(32);
  double c = std::sqrt(2.0 * t);
  double s = 0.0;
  for (int i = 0; i < r.nodes.size(); ++i) {
    double row = 0.0;
    for (int j = 0; j < r.nodes.size(); ++j)
      row += r.weights[j] * f(point(x + c * r.nodes[i], y + c * r.nodes[j]));
    s += r.weights[i] * row;
  }
  return s / M_PI;
}

double brownian_resolvent_1d(double alpha, const TestFunction& f, double x) {
  double c = std::sqrt(2.0 * alpha);
  return (ray_integral(c, f, x, 1.0) + ray_integral(c, f, x, -1.0)) / c;
}

double brownian_resolvent_2d(double alpha, const TestFunction& f, double x, double y) {
  double c = std::sqrt(2.0 * alpha);
  const int m_theta = 48;
  double upper = 32.0 / c;
  std::vector<double> radial_breaks;
  for (double r0 = upper / 512.0; r0 < upper; r0 *= 2.0) radial_breaks.push_back(r0);
  auto avg = [&](double r) {
    double s = 0.0;
    for (int m = 0; m < m_theta; ++m) {
      double th = 2.0 * M_PI * m / m_theta;
      s += f(point(x + r * std::cos(th), y + r * std::sin(th)));
    }
    return s / m_theta;
  };
  auto integrand = [&](double r) { return std::cyl_bessel_k(0.0, c * r) * r * avg(r); };
  return 2.0 * integrate(integrand, 0.0, upper, radial_breaks, 0.5 / c);
}

Example build_brownian(const GridParams& gp, int dim) {
  Example ex;
  ex.id = dim == 1 ? ExampleId::brownian : ExampleId::brownian2;
  ex.name = dim == 1 ? "brownian" : "brownian2";
  ex.description = std::to_string(dim) + "-d Brownian motion";
  ex.variant = dim != 1;
  ex.grid_params = gp;
  ex.in_domain = [dim](const StatePoint& p) {
    return p.dim() == dim && p.coords.allFinite();
  };
  ex.in_intrinsic_domain = ex.in_domain;
  auto check_domain = [in = ex.in_domain, name = ex.name](const StatePoint& x) {
    if (!in(x)) throw OutOfDomainError(name + ": point outside the state space");
  };

  ValueFn p_value = [check_domain, dim](double t, const TestFunction& f, const StatePoint& x) {
    check_domain(x);
    if (t < 1e-14) return f(x);
    return dim == 1 ? gh_heat_1d(t, f, x.x()) : gh_heat_2d(t, f, x.x(), x.y());
  };
  ex.P = make_semigroup(ex.name, p_value, {});

  std::function<SignedKernel(double)> kernel;
  if (dim == 1) {
    double h = gp.h, radius = gp.radius;
    kernel = [h, radius](double alpha) {
      CellGrid cg = cells_of_uniform(-radius, radius, h);
      Eigen::Index n = cg.space->size();
      double c = std::sqrt(2.0 * alpha);
      Eigen::MatrixXd m(n, n);
      for (Eigen::Index i = 0; i < n; ++i) {
        double x = cg.space->at(i).x();
        for (Eigen::Index j = 0; j < n; ++j) {
          auto [a, b] = cg.edges[static_cast<std::size_t>(j)];
          m(i, j) = (exp_mass_below(c, x, a, b) + exp_mass_above(c, x, a, b)) / c;
        }
      }
      return SignedKernel(cg.space, std::move(m));
    };
  }

  ValueFn u_value = [check_domain, dim](double alpha, const TestFunction& f, const StatePoint& x) {
    check_domain(x);
    return dim == 1 ? brownian_resolvent_1d(alpha, f, x.x())
                    : brownian_resolvent_2d(alpha, f, x.x(), x.y());
  };
  ex.U = make_resolvent(ex.name, u_value,
                        [](double, const std::vector<double>& bp) { return bp; }, kernel);
  if (dim == 2) ex.U.kind = EvalKind::quadrature;
  ex.P_intrinsic = ex.P;
  ex.U_intrinsic = ex.U;

  if (dim == 1) {
    ex.original_grid = GridStateSpace::uniform_1d(-gp.radius, gp.radius, gp.h);
  } else {
    // Coarse 2-d probe grid; the 2-d variant participates in analytics only.
    std::vector<StatePoint> pts;
    for (int i = -6; i <= 6; ++i)
      for (int j = -6; j <= 6; ++j) pts.push_back(point(i * 0.5, j * 0.5));
    ex.original_grid = std::make_shared<GridStateSpace>(
        pts, Eigen::VectorXd::Constant(static_cast<Eigen::Index>(pts.size()), 0.25));
  }
  ex.intrinsic_grid = ex.original_grid;

  for (int i = 0; i < dim; ++i) {
    TestFunction coord;
    coord.name = "e" + std::to_string(i + 1);
    coord.eval = [i](const StatePoint& p) { return p.coords[i]; };
    coord.claims.coordinate = i;
    ex.embedding.coord_functions.push_back(coord);
  }
  ex.embedding.example = ex.name;

  if (dim == 1) {
    ex.smooth_battery = {TestFunction::constant(1.0), gauss_bump(0.0, 1.0), logistic_fn(),
                         atan_fn(), damped_cos(), gauss_bump(-1.0, 1.5)};
    ex.indicator_battery = {indicator_le(0.0), indicator_ge(1.0), indicator_interval(-1.0, 1.0)};
    ex.r_catalogue = {TestFunction::constant(1.0),
                      catalogued_potential(ex.U, gauss_bump(0.0, 1.0), 1.0, "U1[bump0]"),
                      catalogued_potential(ex.U, indicator_le(0.0), 1.0, "U1[ind<=0]"),
                      fn_1d("osc", [](double x) { return std::sin(x); }, 1.0)};
    ex.r_catalogue.push_back(min_of(ex.r_catalogue[1], ex.r_catalogue[2], "min(U1s)"));
    ex.divergence_witness = "osc";
    ex.r_plus_catalogue = {TestFunction::constant(1.0), ex.r_catalogue[1], ex.r_catalogue[2],
                           ex.r_catalogue[4]};
    ex.r_plus_catalogue[0].claims.supermedian_alpha = 1.0;
    ex.c0_set = {gauss_bump(0.0, 1.0), gauss_bump(2.0, 1.0)};
    ex.liftable_battery = {gauss_bump(0.0, 1.0), logistic_fn()};
    ex.probe_points = line_probes(-6.0, 6.0);
    ex.probes.sequences = {
        make_sequence("conv_inv_n", [](int n) { return point(1.0 / n); }, 4096),
        make_sequence("div_n", [](int n) { return point(static_cast<double>(n)); }, 4096),
        pair_sequence("pair_-1_1", point(-1.0), point(1.0)),
    };
  } else {
    TestFunction b2;
    b2.name = "bump2d";
    b2.eval = [](const StatePoint& p) { return std::exp(-0.5 * p.coords.squaredNorm()); };
    b2.sup_bound = 1.0;
    TestFunction l2;
    l2.name = "logistic_x";
    l2.eval = [](const StatePoint& p) { return 1.0 / (1.0 + std::exp(-p.x())); };
    l2.sup_bound = 1.0;
    ex.smooth_battery = {TestFunction::constant(1.0), b2, l2};
    ex.r_catalogue = {TestFunction::constant(1.0)};
    ex.r_plus_catalogue = {TestFunction::constant(1.0)};
    ex.r_plus_catalogue[0].claims.supermedian_alpha = 1.0;
    for (int i = 0; i < 10; ++i) ex.probe_points.push_back(point(0.4 * i - 2.0, 0.3 * i - 1.2));
  }
  ex.intrinsic_probe_points = ex.probe_points;

  ex.assemble_generator = [dim](const TestFunction& g, double alpha) {
    TestFunction f;
    f.name = "gen[" + g.name + "]";
    auto ge = g.eval;
    if (dim == 1) {
      f.eval = [ge, alpha](const StatePoint& p) {
        auto g1 = [&](double s) { return ge(point(s)); };
        return -0.5 * second_derivative(g1, p.x()) + alpha * ge(p);
      };
    } else {
      f.eval = [ge, alpha](const StatePoint& p) {
        auto gx = [&](double s) { return ge(point(s, p.y())); };
        auto gy = [&](double s) { return ge(point(p.x(), s)); };
        return -0.5 * (second_derivative(gx, p.x()) + second_derivative(gy, p.y())) +
               alpha * ge(p);
      };
    }
    f.breakpoints = g.breakpoints;
    return f;
  };
  ex.check_side_conditions = [](const TestFunction&) {};
  if (dim == 1) {
    ex.generator_pairs = {
        {"gauss", fn_1d("g_gauss", [](double x) { return std::exp(-0.5 * x * x); }, 1.0), 2.0,
         true},
        {"cos", fn_1d("g_cos", [](double x) { return 1.0 + 0.5 * std::cos(x); }, 1.5), 1.0, true},
    };
  } else {
    TestFunction g2;
    g2.name = "g_gauss2";
    g2.eval = [](const StatePoint& p) { return std::exp(-0.5 * p.coords.squaredNorm()); };
    g2.sup_bound = 1.0;
    ex.generator_pairs = {{"gauss2", g2, 2.0, true}};
  }
  return ex;
}

// ===========================================================================
// Pure jump process
// ===========================================================================

Example build_pure_jump(const GridParams& gp, bool birth_death) {
  Example ex;
  ex.id = birth_death ? ExampleId::pure_jump_bd : ExampleId::pure_jump;
  ex.name = birth_death ? "pure_jump_bd" : "pure_jump";
  ex.description = birth_death ? "50-state birth-death jump chain (lambda = 2)"
                               : "3-state jump chain (lambda = 2)";
  ex.variant = birth_death;
  ex.grid_params = gp;
  const double lambda = 2.0;
  const int n_states = birth_death ? 50 : 3;

  auto Q = std::make_shared<Eigen::MatrixXd>(Eigen::MatrixXd::Zero(n_states, n_states));
  if (birth_death) {
    (*Q)(0, 1) = 1.0;
    (*Q)(n_states - 1, n_states - 2) = 1.0;
    for (int i = 1; i + 1 < n_states; ++i) {
      (*Q)(i, i + 1) = 0.6;
      (*Q)(i, i - 1) = 0.4;
    }
  } else {
    *Q << 0.1, 0.6, 0.3, 0.5, 0.2, 0.3, 0.25, 0.25, 0.5;
  }

  std::vector<StatePoint> pts;
  for (int i = 0; i < n_states; ++i) {
    StatePoint p = point(static_cast<double>(i));
    p.label = "state" + std::to_string(i);
    pts.push_back(p);
  }
  ex.original_grid =
      std::make_shared<GridStateSpace>(pts, Eigen::VectorXd::Ones(n_states));
  ex.intrinsic_grid = ex.original_grid;
  auto space = ex.original_grid;

  ex.in_domain = [n_states](const StatePoint& p) {
    if (p.dim() != 1) return false;
    double r = std::round(p.x());
    return std::abs(p.x() - r) <= kPointTol && r >= 0 && r < n_states;
  };
  ex.in_intrinsic_domain = ex.in_domain;
  auto check_domain = [in = ex.in_domain, name = ex.name](const StatePoint& x) {
    if (!in(x)) throw OutOfDomainError(name + ": not a chain state");
  };

  auto values_of = [space](const TestFunction& f) {
    Eigen::VectorXd v(space->size());
    for (Eigen::Index i = 0; i < space->size(); ++i) v[i] = f(space->at(i));
    return v;
  };

  ValueFn p_value = [check_domain, Q, space, values_of, lambda](double t, const TestFunction& f,
                                                                const StatePoint& x) {
    check_domain(x);
    Eigen::Index idx = space->nearest(x);
    if (t < 1e-14) return f(x);
    Eigen::VectorXd v = values_of(f);
    double w = std::exp(-lambda * t), cum = w;
    Eigen::VectorXd acc = w * v;
    for (int n = 1; cum < 1.0 - 1e-13 && n < 100000; ++n) {
      v = (*Q) * v;
      w *= lambda * t / n;
      acc += w * v;
      cum += w;
    }
    return acc[idx];
  };
  ex.P = make_semigroup(ex.name, p_value, {});
  // Exact materialization on the finite state space.
  ex.P.function_of = [p_value, space](double t, const TestFunction& f) {
    Eigen::VectorXd out(space->size());
    for (Eigen::Index i = 0; i < space->size(); ++i) out[i] = p_value(t, f, space->at(i));
    TestFunction g = TestFunction::on_grid(space, std::move(out), "P_t[" + f.name + "]");
    return g;
  };

  auto kernel = [Q, space, lambda, n_states](double alpha) {
    Eigen::MatrixXd a =
        alpha * Eigen::MatrixXd::Identity(n_states, n_states) +
        lambda * (Eigen::MatrixXd::Identity(n_states, n_states) - *Q);
    Eigen::MatrixXd inv = a.partialPivLu().solve(Eigen::MatrixXd::Identity(n_states, n_states));
    return SignedKernel(space, std::move(inv));
  };

  ValueFn u_value = [check_domain, Q, space, values_of, lambda](double alpha,
                                                                const TestFunction& f,
                                                                const StatePoint& x) {
    check_domain(x);
    Eigen::Index idx = space->nearest(x);
    double r = lambda / (alpha + lambda);
    Eigen::VectorXd v = values_of(f);
    Eigen::VectorXd acc = v;
    double w = 1.0;
    for (int n = 1; w / (1.0 - r) > 1e-14 && n < 100000; ++n) {
      v = (*Q) * v;
      w *= r;
      acc += w * v;
    }
    return acc[idx] / (alpha + lambda);
  };
  ex.U = make_resolvent(ex.name, u_value, {}, kernel);
  ex.U.function_of = [u_value, space](double alpha, const TestFunction& f) {
    Eigen::VectorXd out(space->size());
    for (Eigen::Index i = 0; i < space->size(); ++i) out[i] = u_value(alpha, f, space->at(i));
    TestFunction g = TestFunction::on_grid(space, std::move(out), "U^a[" + f.name + "]");
    if (f.sup_bound) g.sup_bound = *f.sup_bound / alpha;
    return g;
  };
  ex.P_intrinsic = ex.P;
  ex.U_intrinsic = ex.U;

  TestFunction coord = fn_1d("e", [](double x) { return x; }, static_cast<double>(n_states));
  coord.claims.coordinate = 0;
  ex.embedding.example = ex.name;
  ex.embedding.coord_functions = {coord};

  auto state_fn = [space, n_states](std::string name, std::function<double(int)> h) {
    Eigen::VectorXd v(n_states);
    for (int i = 0; i < n_states; ++i) v[i] = h(i);
    return TestFunction::on_grid(space, std::move(v), std::move(name));
  };
  ex.smooth_battery = {TestFunction::constant(1.0),
                       state_fn("f_exp", [](int i) { return std::exp(-0.3 * i); }),
                       state_fn("f_cos", [n_states](int i) { return 0.5 + 0.5 * std::cos(2.0 * M_PI * i / n_states); }),
                       state_fn("f_lin", [n_states](int i) { return static_cast<double>(i) / n_states; }),
                       state_fn("f_mix", [](int i) { return (i % 3 == 0) ? 0.9 : 0.2; })};
  ex.indicator_battery = {state_fn("ind_state0", [](int i) { return i == 0 ? 1.0 : 0.0; }),
                          state_fn("ind_even", [](int i) { return i % 2 == 0 ? 1.0 : 0.0; })};
  ex.r_catalogue = {TestFunction::constant(1.0),
                    catalogued_potential(ex.U, ex.smooth_battery[1], 1.0, "U1[f_exp]"),
                    catalogued_potential(ex.U, ex.indicator_battery[0], 1.0, "U1[ind0]"),
                    state_fn("coordinate", [](int i) { return static_cast<double>(i); })};
  ex.r_plus_catalogue = {TestFunction::constant(1.0), ex.r_catalogue[1], ex.r_catalogue[2],
                         min_of(ex.r_catalogue[1], ex.r_catalogue[2], "min(U1s)")};
  ex.r_plus_catalogue[0].claims.supermedian_alpha = 1.0;
  ex.c0_set = {ex.smooth_battery[1]};
  ex.liftable_battery = {ex.smooth_battery[1], ex.smooth_battery[2]};

  for (int i = 0; i < n_states; ++i) ex.probe_points.push_back(space->at(i));
  ex.intrinsic_probe_points = ex.probe_points;
  ex.probes.sequences = {
      pair_sequence("pair_0_1", point(0.0), point(1.0)),
      make_sequence("const_0", [](int) { return point(0.0); }, 64),
  };

  ex.assemble_generator = [Q, space, values_of, lambda](const TestFunction& g, double alpha) {
    Eigen::VectorXd gv = values_of(g);
    Eigen::VectorXd fv = lambda * (gv - (*Q) * gv) + alpha * gv;
    return TestFunction::on_grid(space, std::move(fv), "gen[" + g.name + "]");
  };
  ex.check_side_conditions = [](const TestFunction&) {};
  ex.generator_pairs = {{"exp", ex.smooth_battery[1], 1.0, true},
                        {"mix", ex.smooth_battery[4], 2.0, true}};
  return ex;
}

// ===========================================================================
// Uniform motion with sticky origin
// ===========================================================================

double sticky_p_value(double t, const TestFunction& f, double x) {
  if (t < 1e-14) return f(point(x));
  if (x >= 0.0 && x < t) {
    // e^{x-t} f(0) + ∫_0^{t-x} e^{-u} f(x-t+u) du
    double len = t - x;
    auto g = [&](double u) { return f(point(x - t + u)); };
    std::vector<double> br = s_breaks(f.breakpoints, x - t, 1.0);
    br.push_back(len);
    return std::exp(x - t) * f(point(0.0)) +
           exp_weighted_integral(1.0, g, len, br, fn_scale(f));
  }
  return f(point(x - t));
}

double sticky_u_value(double alpha, const TestFunction& f, double x) {
  if (x < 0.0) return ray_integral(alpha, f, x, -1.0);
  double i_neg = ray_integral(alpha, f, 0.0, -1.0);  // ∫_{-inf}^0 e^{a y} f
  auto g = [&](double s) { return f(point(x - s)); };
  std::vector<double> br = s_breaks(f.breakpoints, x, -1.0);
  double i_mid = exp_weighted_integral(alpha, g, x, br, fn_scale(f));  // ∫_0^x e^{-a(x-y)} f(y) dy
  return std::exp(-alpha * x) / (1.0 + alpha) * (f(point(0.0)) + i_neg) + i_mid;
}

// Intrinsic dynamics: hold at 0, restart from the closure point -1.
double sticky_intrinsic_p_value(double t, const TestFunction& f, double xi) {
  if (t < 1e-14) return f(point(xi));
  if (xi >= 0.0 && xi < t) {
    double len = t - xi;
    auto g = [&](double u) { return f(point(xi - t - 1.0 + u)); };
    std::vector<double> br = s_breaks(f.breakpoints, xi - t - 1.0, 1.0);
    br.push_back(len);
    return std::exp(xi - t) * f(point(0.0)) +
           exp_weighted_integral(1.0, g, len, br, fn_scale(f));
  }
  return f(point(xi - t));  // covers xi >= t on [0,inf) and xi <= -1
}

double sticky_intrinsic_u_value(double alpha, const TestFunction& f, double xi) {
  if (xi <= -1.0) return ray_integral(alpha, f, xi, -1.0);
  double i_neg = ray_integral(alpha, f, -1.0, -1.0);
  auto g = [&](double s) { return f(point(xi - s)); };
  std::vector<double> br = s_breaks(f.breakpoints, xi, -1.0);
  double i_mid = exp_weighted_integral(alpha, g, xi, br, fn_scale(f));
  return std::exp(-alpha * xi) / (1.0 + alpha) * (f(point(0.0)) + i_neg) + i_mid;
}

Example build_sticky(const GridParams& gp) {
  Example ex;
  ex.id = ExampleId::sticky;
  ex.name = "sticky";
  ex.description = "uniform motion with an exponential hold at the origin";
  ex.grid_params = gp;
  ex.original_grid = GridStateSpace::uniform_1d(-gp.radius, gp.radius, gp.h);
  ex.in_domain = [](const StatePoint& p) { return p.dim() == 1 && std::isfinite(p.x()); };
  ex.in_intrinsic_domain = [](const StatePoint& p) {
    return p.dim() == 1 && std::isfinite(p.x()) && (p.x() >= 0.0 || p.x() <= -1.0);
  };
  auto check_domain = [in = ex.in_domain](const StatePoint& x) {
    if (!in(x)) throw OutOfDomainError("sticky: point outside the state space");
  };
  auto check_intr = [in = ex.in_intrinsic_domain](const StatePoint& x) {
    if (!in(x)) throw OutOfDomainError("sticky intrinsic: point in the removed gap (-1, 0)");
  };

  ex.P = make_semigroup("sticky",
                        [check_domain](double t, const TestFunction& f, const StatePoint& x) {
                          check_domain(x);
                          return sticky_p_value(t, f, x.x());
                        },
                        [](double t, const std::vector<double>& bp) {
                          return merge_breaks(shift_breaks(bp, t), {0.0, t});
                        });

  double h = gp.h, radius = gp.radius;
  auto kernel = [h, radius](double alpha) {
    CellGrid cg = cells_of_uniform(-radius, radius, h);
    // U^alpha f jumps across 0, so no cell may straddle the branch boundary:
    // the 0-point keeps [0, h/2] and the -h point absorbs the sliver below 0.
    for (std::size_t j = 0; j < cg.edges.size(); ++j) {
      double y = cg.space->at(static_cast<Eigen::Index>(j)).x();
      if (std::abs(y) <= h / 4) cg.edges[j].first = 0.0;
      if (std::abs(y + h) <= h / 4) cg.edges[j].second = 0.0;
    }
    Eigen::Index n = cg.space->size();
    Eigen::Index zero = cg.space->nearest(point(0.0));
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      double x = cg.space->at(i).x();
      if (x < 0.0) {
        for (Eigen::Index j = 0; j < n; ++j)
          m(i, j) = exp_mass_below(alpha, x, cg.edges[static_cast<std::size_t>(j)].first,
                                   cg.edges[static_cast<std::size_t>(j)].second);
      } else {
        double damp = std::exp(-alpha * x);
        m(i, zero) += damp / (1.0 + alpha);  // atom at the origin
        for (Eigen::Index j = 0; j < n; ++j) {
          auto [a, b] = cg.edges[static_cast<std::size_t>(j)];
          if (b <= 0.0)
            m(i, j) += exp_mass_below(alpha, x, a, b) / (1.0 + alpha);
          else
            m(i, j) += exp_mass_below(alpha, x, std::max(a, 0.0), b);
        }
      }
    }
    return SignedKernel(cg.space, std::move(m));
  };

  ex.U = make_resolvent("sticky",
                        [check_domain](double alpha, const TestFunction& f, const StatePoint& x) {
                          check_domain(x);
                          return sticky_u_value(alpha, f, x.x());
                        },
                        [](double, const std::vector<double>& bp) {
                          return merge_breaks(bp, {0.0});
                        },
                        kernel);

  ex.P_intrinsic = make_semigroup(
      "sticky_intrinsic",
      [check_intr](double t, const TestFunction& f, const StatePoint& x) {
        check_intr(x);
        return sticky_intrinsic_p_value(t, f, x.x());
      },
      [](double t, const std::vector<double>& bp) {
        return merge_breaks(merge_breaks(shift_breaks(bp, t), {0.0, t}),
                            {-1.0});
      });
  ex.U_intrinsic = make_resolvent(
      "sticky_intrinsic",
      [check_intr](double alpha, const TestFunction& f, const StatePoint& x) {
        check_intr(x);
        return sticky_intrinsic_u_value(alpha, f, x.x());
      },
      [](double, const std::vector<double>& bp) { return merge_breaks(bp, {-1.0, 0.0}); });

  TestFunction coord = fn_1d("e", [](double x) { return x >= 0.0 ? x : x - 1.0; }, 0.0, {0.0});
  coord.sup_bound.reset();
  coord.claims.coordinate = 0;
  ex.embedding.example = "sticky";
  ex.embedding.coord_functions = {coord};
  ex.embedding.closure_points = {closure_point(-1.0, "0-")};
  ex.embedding.approach_sequences = {
      make_sequence("approach_0minus_inv", [](int n) { return point(-1.0 / n); }, 1024,
                    closure_point(-1.0, "0-")),
      make_sequence("approach_0minus_pow", [](int n) { return point(-std::pow(2.0, -10.0 * n / 1024.0)); },
                    1024, closure_point(-1.0, "0-")),
  };
  ex.intrinsic_grid = intrinsic_points(ex.embedding, *ex.original_grid);

  ex.smooth_battery = {TestFunction::constant(1.0), gauss_bump(0.0, 1.0), logistic_fn(),
                       atan_fn(), damped_cos(), gauss_bump(-2.0, 1.0)};
  ex.indicator_battery = {indicator_le(0.0), indicator_lt(0.0), indicator_ge(0.0),
                          indicator_point(0.0), indicator_interval(-2.0, -1.0)};
  ex.r_catalogue = {TestFunction::constant(1.0),
                    catalogued_potential(ex.U, indicator_le(0.0), 1.0, "U1[ind<=0]"),
                    catalogued_potential(ex.U, indicator_ge(0.0), 1.0, "U1[ind>=0]"),
                    catalogued_potential(ex.U, gauss_bump(0.0, 1.0), 1.0, "U1[bump0]")};
  // 1 + cos(x)/2 = U^1(g' + g) with g'(0) = 0: a bounded oscillating C-member.
  TestFunction osc = fn_1d("osc", [](double x) { return 1.0 + 0.5 * std::cos(x); }, 1.5);
  osc.claims.in_c_plus = true;
  osc.claims.supermedian_alpha = 1.0;
  ex.r_catalogue.push_back(osc);
  ex.r_catalogue.push_back(min_of(ex.r_catalogue[1], ex.r_catalogue[2], "min(U1 inds)"));
  ex.divergence_witness = "osc";
  ex.r_plus_catalogue = {TestFunction::constant(1.0), ex.r_catalogue[1], ex.r_catalogue[2],
                         ex.r_catalogue[3], ex.r_catalogue[5], osc};
  ex.r_plus_catalogue[0].claims.supermedian_alpha = 1.0;
  ex.c0_set = {gauss_bump(0.0, 1.0), gauss_bump(-3.0, 1.0), gauss_bump(2.0, 0.8)};
  ex.liftable_battery = {gauss_bump(0.0, 1.0), osc};

  ex.probe_points = line_probes(-8.0, 8.0);
  ex.probe_points.push_back(point(0.0));
  for (const auto& p : line_probes(-8.0, 8.0))
    ex.intrinsic_probe_points.push_back(p.x() < 0.0 ? point(p.x() - 1.0) : p);
  ex.intrinsic_probe_points.push_back(point(-1.0));
  ex.intrinsic_probe_points.push_back(point(0.0));

  ex.probes.sequences = {
      make_sequence("conv_neg_inv_n", [](int n) { return point(-1.0 / n); }, 4096),
      make_sequence("conv_pos_inv_n", [](int n) { return point(1.0 / n); }, 4096),
      make_sequence("alt_inv_n", [](int n) { return point((n % 2 ? 1.0 : -1.0) / n); }, 4096),
      make_sequence("div_n", [](int n) { return point(static_cast<double>(n)); }, 4096),
      pair_sequence("pair_-05_05", point(-0.5), point(0.5)),
  };

  ex.assemble_generator = [](const TestFunction& g, double alpha) {
    TestFunction f;
    f.name = "gen[" + g.name + "]";
    auto ge = g.eval;
    f.eval = [ge, alpha](const StatePoint& p) {
      auto g1 = [&](double s) { return ge(point(s)); };
      double x = p.x();
      double d = x >= 0.0 ? path_derivative(g1, x, 0.0, kInf)
                          : path_derivative(g1, x, -kInf, 0.0);
      return d + alpha * ge(p);
    };
    f.breakpoints = merge_breaks(g.breakpoints, {0.0});
    return f;
  };
  ex.check_side_conditions = [](const TestFunction& g) {
    const double h0 = 1e-6;
    auto g1 = [&](double s) { return g(point(s)); };
    double right_deriv = (-3.0 * g1(0.0) + 4.0 * g1(h0) - g1(2.0 * h0)) / (2.0 * h0);
    if (std::abs(right_deriv) > 1e-9)
      throw SideConditionViolatedError("sticky: g'(0) = " + std::to_string(right_deriv) +
                                       " but the right-hand derivative at zero must vanish");
    double left_limit = 2.0 * g1(-h0) - g1(-2.0 * h0);
    if (std::abs(left_limit - g1(0.0)) > 1e-9)
      throw SideConditionViolatedError("sticky: g(0-) != g(0)");
  };
  ex.generator_pairs = {
      {"cos", fn_1d("g_cos", [](double x) { return 1.0 + 0.5 * std::cos(x); }, 1.5), 1.0, true},
      {"bump0", fn_1d("g_bump0", [](double x) { return std::exp(-x * x); }, 1.0), 1.0, true},
  };
  ex.rejected_pairs = {
      {"shifted_bump",
       fn_1d("g_bump1", [](double x) { return std::exp(-(x - 1.0) * (x - 1.0)); }, 1.0), 1.0,
       false},
  };
  return ex;
}

// ===========================================================================
// Severed uniform motion (jump over the gap)
// ===========================================================================

double severed_p_value(double t, const TestFunction& f, double x) {
  if (x >= 0.0 && x < t) return f(point(x - t - 1.0));
  return f(point(x - t));
}

double severed_u_value(double alpha, const TestFunction& f, double x) {
  if (x <= -1.0) return ray_integral(alpha, f, x, -1.0);
  auto g = [&](double s) { return f(point(x - s)); };
  std::vector<double> br = s_breaks(f.breakpoints, x, -1.0);
  double i_mid = exp_weighted_integral(alpha, g, x, br, fn_scale(f));
  return std::exp(-alpha * x) * ray_integral(alpha, f, -1.0, -1.0) + i_mid;
}

Example build_severed(const GridParams& gp) {
  Example ex;
  ex.id = ExampleId::severed;
  ex.name = "severed";
  ex.description = "uniform motion on (-inf,-1] U [0,inf): instant jump across the gap";
  ex.grid_params = gp;
  ex.in_domain = [](const StatePoint& p) {
    return p.dim() == 1 && std::isfinite(p.x()) && (p.x() >= 0.0 || p.x() <= -1.0);
  };
  ex.in_intrinsic_domain = [](const StatePoint& p) {
    return p.dim() == 1 && std::isfinite(p.x());
  };
  auto check_domain = [in = ex.in_domain](const StatePoint& x) {
    if (!in(x)) throw OutOfDomainError("severed: point in the removed gap (-1, 0)");
  };

  {
    std::vector<StatePoint> pts;
    std::vector<double> w;
    auto lower = GridStateSpace::uniform_1d(-gp.radius - 1.0, -1.0, gp.h);
    auto upper = GridStateSpace::uniform_1d(0.0, gp.radius, gp.h);
    for (Eigen::Index i = 0; i < lower->size(); ++i) {
      pts.push_back(lower->at(i));
      w.push_back(lower->cell_weights()[i]);
    }
    for (Eigen::Index i = 0; i < upper->size(); ++i) {
      pts.push_back(upper->at(i));
      w.push_back(upper->cell_weights()[i]);
    }
    ex.original_grid = std::make_shared<GridStateSpace>(
        pts, Eigen::Map<Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size())));
  }

  ex.P = make_semigroup("severed",
                        [check_domain](double t, const TestFunction& f, const StatePoint& x) {
                          check_domain(x);
                          if (t < 0) throw Error("negative time");
                          return severed_p_value(t, f, x.x());
                        },
                        [](double t, const std::vector<double>& bp) {
                          auto out = merge_breaks(shift_breaks(bp, t), {0.0, t});
                          for (double b : shift_breaks(bp, t + 1.0)) out.push_back(b);
                          return merge_breaks(out, {});
                        });

  auto grid = ex.original_grid;
  double h = gp.h;
  auto kernel = [grid, h](double alpha) {
    Eigen::Index n = grid->size();
    std::vector<std::pair<double, double>> edges;
    for (Eigen::Index j = 0; j < n; ++j) {
      double y = grid->at(j).x();
      double lo = y - h / 2, hi = y + h / 2;
      if (y <= -1.0) hi = std::min(hi, -1.0);
      if (y >= 0.0) lo = std::max(lo, 0.0);
      edges.emplace_back(lo, hi);
    }
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      double x = grid->at(i).x();
      for (Eigen::Index j = 0; j < n; ++j) {
        auto [a, b] = edges[static_cast<std::size_t>(j)];
        double y = grid->at(j).x();
        if (x <= -1.0) {
          m(i, j) = exp_mass_below(alpha, x, a, b);
        } else {
          if (y >= 0.0)
            m(i, j) = exp_mass_below(alpha, x, a, b);
          else
            m(i, j) = exp_mass_below(alpha, x - 1.0, a, b);  // shifted across the gap
        }
      }
    }
    return SignedKernel(grid, std::move(m));
  };

  ex.U = make_resolvent("severed",
                        [check_domain](double alpha, const TestFunction& f, const StatePoint& x) {
                          check_domain(x);
                          return severed_u_value(alpha, f, x.x());
                        },
                        [](double, const std::vector<double>& bp) {
                          return merge_breaks(bp, {-1.0, 0.0});
                        },
                        kernel);

  // On the intrinsic space the process is plain uniform motion.
  ex.P_intrinsic = make_semigroup("severed_intrinsic",
                                  [](double t, const TestFunction& f, const StatePoint& x) {
                                    return f(point(x.x() - t));
                                  },
                                  [](double t, const std::vector<double>& bp) {
                                    return shift_breaks(bp, t);
                                  });
  ex.U_intrinsic = make_resolvent("severed_intrinsic",
                                  [](double alpha, const TestFunction& f, const StatePoint& x) {
                                    return ray_integral(alpha, f, x.x(), -1.0);
                                  },
                                  [](double, const std::vector<double>& bp) { return bp; });

  TestFunction coord = fn_1d("e", [](double x) { return x >= 0.0 ? x : x + 1.0; }, 0.0, {0.0});
  coord.sup_bound.reset();
  coord.claims.coordinate = 0;
  ex.embedding.example = "severed";
  ex.embedding.coord_functions = {coord};
  ex.intrinsic_grid = intrinsic_points(ex.embedding, *ex.original_grid);

  ex.smooth_battery = {TestFunction::constant(1.0), gauss_bump(-3.0, 1.0), logistic_fn(),
                       atan_fn(), gauss_bump(1.0, 0.8), damped_cos()};
  ex.indicator_battery = {indicator_le(-1.0), indicator_ge(0.0), indicator_interval(-3.0, -1.0),
                          indicator_point(0.0)};
  ex.r_catalogue = {TestFunction::constant(1.0),
                    catalogued_potential(ex.U, indicator_le(-1.0), 1.0, "U1[ind<=-1]"),
                    catalogued_potential(ex.U, gauss_bump(-3.0, 1.0), 1.0, "U1[bump-3]"),
                    catalogued_potential(ex.U, indicator_ge(0.0), 1.0, "U1[ind>=0]")};
  TestFunction osc = fn_1d("osc", [](double x) { return 1.0 + 0.5 * std::cos(2.0 * M_PI * x); }, 1.5);
  osc.claims.in_c_plus = true;
  osc.claims.supermedian_alpha = 7.0;
  ex.r_catalogue.push_back(osc);
  ex.r_catalogue.push_back(min_of(ex.r_catalogue[1], ex.r_catalogue[3], "min(U1s)"));
  ex.divergence_witness = "osc";
  ex.r_plus_catalogue = {TestFunction::constant(1.0), ex.r_catalogue[1], ex.r_catalogue[2],
                         ex.r_catalogue[3], ex.r_catalogue[5]};
  ex.r_plus_catalogue[0].claims.supermedian_alpha = 1.0;
  ex.c0_set = {gauss_bump(-3.0, 1.0), gauss_bump(2.0, 1.0)};
  ex.liftable_battery = {
      fn_1d("sym_bump", [](double x) { return std::exp(-(x + 0.5) * (x + 0.5)); }, 1.0), osc};

  for (const auto& p : line_probes(-8.0, 8.0))
    ex.probe_points.push_back(p.x() < 0.0 ? point(p.x() - 1.0) : p);
  ex.probe_points.push_back(point(-1.0));
  ex.probe_points.push_back(point(0.0));
  ex.intrinsic_probe_points = line_probes(-8.0, 8.0);

  ex.probes.sequences = {
      make_sequence("conv_to_0", [](int n) { return point(1.0 / n); }, 4096),
      make_sequence("conv_to_-1", [](int n) { return point(-1.0 - 1.0 / n); }, 4096),
      pair_sequence("pair_-1_0", point(-1.0), point(0.0)),
      pair_sequence("pair_-2_1", point(-2.0), point(1.0)),
      // irrational stride: the catalogued 1-periodic oscillator must witness
      // divergence, so integer-valued probes would be degenerate
      make_sequence("div_n", [](int n) { return point(std::sqrt(2.0) * n); }, 4096),
  };

  ex.assemble_generator = [](const TestFunction& g, double alpha) {
    TestFunction f;
    f.name = "gen[" + g.name + "]";
    auto ge = g.eval;
    f.eval = [ge, alpha](const StatePoint& p) {
      auto g1 = [&](double s) { return ge(point(s)); };
      double x = p.x();
      double d = x >= 0.0 ? path_derivative(g1, x, 0.0, kInf)
                          : path_derivative(g1, x, -kInf, -1.0);
      return d + alpha * ge(p);
    };
    f.breakpoints = merge_breaks(g.breakpoints, {-1.0, 0.0});
    return f;
  };
  ex.check_side_conditions = [](const TestFunction& g) {
    double gap = std::abs(g(point(-1.0)) - g(point(0.0)));
    if (gap > 1e-9)
      throw SideConditionViolatedError("severed: g(-1) != g(0), gap " + std::to_string(gap));
  };
  ex.generator_pairs = {
      {"sym_bump",
       fn_1d("g_sym", [](double x) { return std::exp(-(x + 0.5) * (x + 0.5)); }, 1.0), 1.0, true},
      {"cos2pi", fn_1d("g_cos2pi", [](double x) { return 1.0 + 0.5 * std::cos(2.0 * M_PI * x); }, 1.5),
       7.0, true},
  };
  ex.rejected_pairs = {
      {"bump0", fn_1d("g_bump0", [](double x) { return std::exp(-x * x); }, 1.0), 1.0, false},
  };
  return ex;
}

// ===========================================================================
// Fork in the road
// ===========================================================================

enum class ForkBranch { R, U, L };

ForkBranch fork_branch(const StatePoint& p) {
  double x = p.x(), y = p.y();
  if (std::abs(y) <= kPointTol && x >= -kPointTol) return ForkBranch::R;
  if (std::abs(x) <= kPointTol && y > 0.0) return ForkBranch::U;
  if (std::abs(x) <= kPointTol && y < 0.0) return ForkBranch::L;
  throw OutOfDomainError("fork: point is on no branch");
}

double fork_p_value(double t, const TestFunction& f, const StatePoint& p) {
  if (t < 1e-14) return f(p);
  switch (fork_branch(p)) {
    case ForkBranch::U:
      return f(point(0.0, p.y() + t));
    case ForkBranch::L:
      return f(point(0.0, p.y() - t));
    case ForkBranch::R:
      break;
  }
  double x = p.x();
  if (t <= x) return f(point(x - t, 0.0));
  return 0.5 * f(point(0.0, t - x)) + 0.5 * f(point(0.0, x - t));
}

double fork_u_value(double alpha, const TestFunction& f, const StatePoint& p) {
  double scale = fn_scale(f);
  switch (fork_branch(p)) {
    case ForkBranch::U: {
      double y = p.y();
      auto g = [&](double s) { return f(point(0.0, y + s)); };
      return exp_weighted_integral(alpha, g, kInf, s_breaks(f.breakpoints, y, 1.0), scale);
    }
    case ForkBranch::L: {
      double y = p.y();
      auto g = [&](double s) { return f(point(0.0, y - s)); };
      return exp_weighted_integral(alpha, g, kInf, s_breaks(f.breakpoints, y, -1.0), scale);
    }
    case ForkBranch::R:
      break;
  }
  double x = p.x();
  auto g_mid = [&](double s) { return f(point(x - s, 0.0)); };
  double i_mid = exp_weighted_integral(alpha, g_mid, x, s_breaks(f.breakpoints, x, -1.0), scale);
  auto g_branches = [&](double s) { return f(point(0.0, s)) + f(point(0.0, -s)); };
  std::vector<double> br = s_breaks(f.breakpoints, 0.0, 1.0);
  for (double b : s_breaks(f.breakpoints, 0.0, -1.0)) br.push_back(b);
  double i_branch = exp_weighted_integral(alpha, g_branches, kInf, br, 2.0 * scale);
  return i_mid + 0.5 * std::exp(-alpha * x) * i_branch;
}

// Intrinsic branch geometry: vertical branches start at (0, ±1).
double fork_intrinsic_p_value(double t, const TestFunction& f, const StatePoint& p) {
  if (t < 1e-14) return f(p);
  double x = p.x(), y = p.y();
  if (std::abs(x) <= kPointTol && y >= 1.0 - kPointTol && y > kPointTol)
    return f(point(0.0, y + t));
  if (std::abs(x) <= kPointTol && y <= -1.0 + kPointTol && y < -kPointTol)
    return f(point(0.0, y - t));
  if (std::abs(y) <= kPointTol && x >= -kPointTol) {
    if (t <= x) return f(point(x - t, 0.0));
    return 0.5 * f(point(0.0, 1.0 + (t - x))) + 0.5 * f(point(0.0, -1.0 - (t - x)));
  }
  throw OutOfDomainError("fork intrinsic: invalid point");
}

double fork_intrinsic_u_value(double alpha, const TestFunction& f, const StatePoint& p) {
  double scale = fn_scale(f);
  double x = p.x(), y = p.y();
  if (std::abs(x) <= kPointTol && y >= 1.0 - kPointTol && y > kPointTol) {
    auto g = [&](double s) { return f(point(0.0, y + s)); };
    return exp_weighted_integral(alpha, g, kInf, s_breaks(f.breakpoints, y, 1.0), scale);
  }
  if (std::abs(x) <= kPointTol && y <= -1.0 + kPointTol && y < -kPointTol) {
    auto g = [&](double s) { return f(point(0.0, y - s)); };
    return exp_weighted_integral(alpha, g, kInf, s_breaks(f.breakpoints, y, -1.0), scale);
  }
  if (std::abs(y) <= kPointTol && x >= -kPointTol) {
    auto g_mid = [&](double s) { return f(point(x - s, 0.0)); };
    double i_mid =
        exp_weighted_integral(alpha, g_mid, x, s_breaks(f.breakpoints, x, -1.0), scale);
    auto g_branches = [&](double s) {
      return f(point(0.0, 1.0 + s)) + f(point(0.0, -1.0 - s));
    };
    std::vector<double> br = s_breaks(f.breakpoints, 1.0, 1.0);
    for (double b : s_breaks(f.breakpoints, -1.0, -1.0)) br.push_back(b);
    double i_branch = exp_weighted_integral(alpha, g_branches, kInf, br, 2.0 * scale);
    return i_mid + 0.5 * std::exp(-alpha * x) * i_branch;
  }
  throw OutOfDomainError("fork intrinsic: invalid point");
}

TestFunction fork_fn(std::string name, std::function<double(ForkBranch, double)> h, double sup,
                     std::vector<double> bp = {}) {
  TestFunction f;
  f.name = std::move(name);
  f.eval = [h = std::move(h)](const StatePoint& p) {
    ForkBranch b = fork_branch(p);
    double param = b == ForkBranch::R ? p.x() : p.y();
    return h(b, param);
  };
  f.sup_bound = sup;
  f.breakpoints = std::move(bp);
  return f;
}

Example build_fork(const GridParams& gp) {
  Example ex;
  ex.id = ExampleId::fork;
  ex.name = "fork";
  ex.description = "leftward motion on the half-axis forking up or down at the origin";
  ex.grid_params = gp;
  ex.in_domain = [](const StatePoint& p) {
    if (p.dim() != 2 || !p.coords.allFinite()) return false;
    double x = p.x(), y = p.y();
    return (std::abs(y) <= kPointTol && x >= -kPointTol) || (std::abs(x) <= kPointTol && y != 0.0);
  };
  ex.in_intrinsic_domain = [](const StatePoint& p) {
    if (p.dim() != 2 || !p.coords.allFinite()) return false;
    double x = p.x(), y = p.y();
    if (std::abs(y) <= kPointTol && x >= -kPointTol) return true;
    return std::abs(x) <= kPointTol && std::abs(y) >= 1.0 - kPointTol;
  };
  auto check_domain = [in = ex.in_domain](const StatePoint& x) {
    if (!in(x)) throw OutOfDomainError("fork: point is on no branch");
  };

  {
    std::vector<StatePoint> pts;
    std::vector<double> w;
    long n = std::lround(gp.radius / gp.h);
    for (long i = 0; i <= n; ++i) {  // R branch
      pts.push_back(point(i * gp.h, 0.0));
      w.push_back(i == 0 || i == n ? gp.h / 2 : gp.h);
    }
    for (long j = 1; j <= n; ++j) {  // U branch
      pts.push_back(point(0.0, j * gp.h));
      w.push_back(j == 1 ? 1.5 * gp.h : (j == n ? gp.h / 2 : gp.h));
    }
    for (long j = 1; j <= n; ++j) {  // L branch
      pts.push_back(point(0.0, -j * gp.h));
      w.push_back(j == 1 ? 1.5 * gp.h : (j == n ? gp.h / 2 : gp.h));
    }
    ex.original_grid = std::make_shared<GridStateSpace>(
        pts, Eigen::Map<Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size())));
  }

  ex.P = make_semigroup("fork",
                        [check_domain](double t, const TestFunction& f, const StatePoint& x) {
                          check_domain(x);
                          return fork_p_value(t, f, x);
                        },
                        [](double t, const std::vector<double>& bp) {
                          auto out = merge_breaks(shift_breaks(bp, t), {0.0, t, -t});
                          for (double b : shift_breaks(bp, -t)) out.push_back(b);
                          return merge_breaks(out, {});
                        });

  auto grid = ex.original_grid;
  double h = gp.h, radius = gp.radius;
  auto kernel = [grid, h, radius](double alpha) {
    Eigen::Index n = grid->size();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    auto cell = [&](Eigen::Index j) {
      const StatePoint& q = grid->at(j);
      ForkBranch b = fork_branch(q);
      double param = b == ForkBranch::R ? q.x() : std::abs(q.y());
      double lo = param - h / 2, hi = param + h / 2;
      if (b == ForkBranch::R)
        lo = std::max(lo, 0.0);
      else if (param <= h + kPointTol)
        lo = 0.0;  // first branch cell covers the sliver down to the origin
      hi = std::min(hi, radius);
      return std::pair<double, double>(lo, hi);
    };
    for (Eigen::Index i = 0; i < n; ++i) {
      const StatePoint& p = grid->at(i);
      ForkBranch bi = fork_branch(p);
      if (bi == ForkBranch::R) {
        double x = p.x();
        for (Eigen::Index j = 0; j < n; ++j) {
          ForkBranch bj = fork_branch(grid->at(j));
          auto [a, b] = cell(j);
          if (bj == ForkBranch::R)
            m(i, j) = exp_mass_below(alpha, x, a, b);
          else
            m(i, j) = 0.5 * std::exp(-alpha * x) * exp_mass_above(alpha, 0.0, a, b);
        }
      } else {
        double y = std::abs(p.y());
        for (Eigen::Index j = 0; j < n; ++j) {
          ForkBranch bj = fork_branch(grid->at(j));
          if (bj != bi) continue;
          auto [a, b] = cell(j);
          m(i, j) = exp_mass_above(alpha, y, a, b);
        }
      }
    }
    return SignedKernel(grid, std::move(m));
  };

  ex.U = make_resolvent("fork",
                        [check_domain](double alpha, const TestFunction& f, const StatePoint& x) {
                          check_domain(x);
                          return fork_u_value(alpha, f, x);
                        },
                        [](double, const std::vector<double>& bp) {
                          return merge_breaks(bp, {0.0});
                        },
                        kernel);

  ex.P_intrinsic = make_semigroup("fork_intrinsic",
                                  [](double t, const TestFunction& f, const StatePoint& x) {
                                    return fork_intrinsic_p_value(t, f, x);
                                  },
                                  [](double t, const std::vector<double>& bp) {
                                    auto out = merge_breaks(shift_breaks(bp, t), {0.0, t, -t, 1.0, -1.0});
                                    for (double b : shift_breaks(bp, -t)) out.push_back(b);
                                    return merge_breaks(out, {});
                                  });
  ex.U_intrinsic = make_resolvent("fork_intrinsic",
                                  [](double alpha, const TestFunction& f, const StatePoint& x) {
                                    return fork_intrinsic_u_value(alpha, f, x);
                                  },
                                  [](double, const std::vector<double>& bp) {
                                    return merge_breaks(bp, {0.0, 1.0, -1.0});
                                  });

  TestFunction e1;
  e1.name = "e1";
  e1.eval = [](const StatePoint& p) { return p.x(); };
  e1.claims.coordinate = 0;
  TestFunction e2;
  e2.name = "e2";
  e2.eval = [](const StatePoint& p) {
    switch (fork_branch(p)) {
      case ForkBranch::U:
        return p.y() + 1.0;
      case ForkBranch::L:
        return p.y() - 1.0;
      default:
        return 0.0;
    }
  };
  e2.claims.coordinate = 1;
  ex.embedding.example = "fork";
  ex.embedding.coord_functions = {e1, e2};
  StatePoint up = point(0.0, 1.0);
  up.tag = PointTag::closure_added;
  up.label = "fork_up";
  StatePoint down = point(0.0, -1.0);
  down.tag = PointTag::closure_added;
  down.label = "fork_down";
  ex.embedding.closure_points = {up, down};
  ex.embedding.approach_sequences = {
      make_sequence("approach_up_inv", [](int n) { return point(0.0, 1.0 / n); }, 1024, up),
      make_sequence("approach_up_pow", [](int n) { return point(0.0, std::pow(2.0, -10.0 * n / 1024.0)); },
                    1024, up),
      make_sequence("approach_down_inv", [](int n) { return point(0.0, -1.0 / n); }, 1024, down),
      make_sequence("approach_down_pow",
                    [](int n) { return point(0.0, -std::pow(2.0, -10.0 * n / 1024.0)); }, 1024, down),
  };
  ex.intrinsic_grid = intrinsic_points(ex.embedding, *ex.original_grid);

  ex.smooth_battery = {
      TestFunction::constant(1.0),
      fork_fn("radial_bump", [](ForkBranch, double s) { return std::exp(-0.5 * s * s); }, 1.0),
      fork_fn("updown",
              [](ForkBranch b, double s) {
                if (b == ForkBranch::R) return 0.0;
                return s / (1.0 + std::abs(s));
              },
              1.0, {0.0}),
      fork_fn("branch_cos", [](ForkBranch, double s) { return std::cos(s); }, 1.0),
      fork_fn("taper",
              [](ForkBranch b, double s) {
                double base = 1.0 / (1.0 + std::abs(s));
                return b == ForkBranch::U ? base : 0.5 * base;
              },
              1.0, {0.0}),
  };
  ex.indicator_battery = {
      fork_fn("ind_up", [](ForkBranch b, double) { return b == ForkBranch::U ? 1.0 : 0.0; }, 1.0,
              {0.0}),
      fork_fn("ind_R_far",
              [](ForkBranch b, double s) { return (b == ForkBranch::R && s >= 1.0) ? 1.0 : 0.0; },
              1.0, {1.0}),
  };
  ex.r_catalogue = {TestFunction::constant(1.0),
                    catalogued_potential(ex.U, ex.smooth_battery[1], 1.0, "U1[radial]"),
                    catalogued_potential(ex.U, ex.indicator_battery[0], 1.0, "U1[ind_up]"),
                    catalogued_potential(ex.U, ex.smooth_battery[4], 1.0, "U1[taper]")};
  TestFunction osc = fork_fn("osc", [](ForkBranch, double s) { return 1.0 + 0.5 * std::cos(s); }, 1.5);
  osc.claims.in_c_plus = true;
  osc.claims.supermedian_alpha = 1.0;
  ex.r_catalogue.push_back(osc);
  ex.r_catalogue.push_back(min_of(ex.r_catalogue[1], ex.r_catalogue[2], "min(U1s)"));
  ex.divergence_witness = "osc";
  ex.r_plus_catalogue = {TestFunction::constant(1.0), ex.r_catalogue[1], ex.r_catalogue[2],
                         ex.r_catalogue[3], ex.r_catalogue[5], osc};
  ex.r_plus_catalogue[0].claims.supermedian_alpha = 1.0;
  ex.c0_set = {ex.smooth_battery[1],
               fork_fn("c0_up", [](ForkBranch b, double s) {
                 return b == ForkBranch::U ? std::exp(-(s - 1.0) * (s - 1.0)) : 0.0;
               }, 1.0, {0.0})};

  ex.liftable_battery = {ex.smooth_battery[1], osc};
  for (double s : {0.2, 0.6, 1.0, 1.7, 2.5, 4.0, 6.0}) {
    ex.probe_points.push_back(point(s, 0.0));
    ex.probe_points.push_back(point(0.0, s));
    ex.probe_points.push_back(point(0.0, -s));
  }
  ex.probe_points.push_back(point(0.0, 0.0));
  for (double s : {0.2, 0.6, 1.0, 1.7, 2.5, 4.0, 6.0}) {
    ex.intrinsic_probe_points.push_back(point(s, 0.0));
    ex.intrinsic_probe_points.push_back(point(0.0, 1.0 + s));
    ex.intrinsic_probe_points.push_back(point(0.0, -1.0 - s));
  }
  ex.intrinsic_probe_points.push_back(point(0.0, 1.0));
  ex.intrinsic_probe_points.push_back(point(0.0, -1.0));

  ex.probes.sequences = {
      make_sequence("approach_origin_R", [](int n) { return point(1.0 / n, 0.0); }, 4096),
      make_sequence("alt_branches",
                    [](int n) { return point(0.0, (n % 2 ? 1.0 : -1.0) / ((n + 1) / 2)); }, 4096),
      pair_sequence("pair_up_down", point(0.0, 1.0), point(0.0, -1.0)),
      make_sequence("div_R", [](int n) { return point(static_cast<double>(n), 0.0); }, 4096),
  };

  ex.assemble_generator = [](const TestFunction& g, double alpha) {
    TestFunction f;
    f.name = "gen[" + g.name + "]";
    auto ge = g.eval;
    f.eval = [ge, alpha](const StatePoint& p) {
      ForkBranch b = fork_branch(p);
      double d = 0.0;
      if (b == ForkBranch::R) {
        auto g1 = [&](double s) { return ge(point(s, 0.0)); };
        d = path_derivative(g1, p.x(), 0.0, kInf);
      } else {
        auto g1 = [&](double s) { return ge(point(0.0, s)); };
        if (b == ForkBranch::U)
          d = -path_derivative(g1, p.y(), 0.0, kInf);
        else
          d = path_derivative(g1, p.y(), -kInf, 0.0);
      }
      return d + alpha * ge(p);
    };
    f.breakpoints = merge_breaks(g.breakpoints, {0.0});
    return f;
  };
  ex.check_side_conditions = [](const TestFunction& g) {
    const double h0 = 1e-6;
    double up_limit = 2.0 * g(point(0.0, h0)) - g(point(0.0, 2.0 * h0));
    double down_limit = 2.0 * g(point(0.0, -h0)) - g(point(0.0, -2.0 * h0));
    double origin = g(point(0.0, 0.0));
    if (std::abs(origin - 0.5 * (up_limit + down_limit)) > 1e-9)
      throw SideConditionViolatedError(
          "fork: g(0,0) must equal the average of the two branch limits");
  };
  ex.generator_pairs = {
      {"branch_cos", ex.smooth_battery[3], 1.0, true},
      {"radial_bump", ex.smooth_battery[1], 1.0, true},
  };
  TestFunction bad = fork_fn("g_skew",
                             [](ForkBranch b, double s) {
                               if (b == ForkBranch::U) return 2.0 + std::cos(s);
                               return std::cos(s);
                             },
                             3.0, {0.0});
  ex.rejected_pairs = {{"skew", bad, 1.0, false}};
  return ex;
}

// ===========================================================================
// Brownian motion with an absorbing state at the origin
// ===========================================================================

Example build_absorbing(const GridParams& gp, int dim) {
  Example base = build_brownian(gp, dim);
  Example ex;
  ex.id = dim == 1 ? ExampleId::absorbing_brownian : ExampleId::absorbing_brownian2;
  ex.name = dim == 1 ? "absorbing_brownian" : "absorbing_brownian2";
  ex.description = std::to_string(dim) + "-d Brownian motion with the origin absorbing";
  ex.variant = dim != 1;
  ex.grid_params = gp;
  ex.original_grid = base.original_grid;
  ex.intrinsic_grid = base.intrinsic_grid;  // replaced below
  ex.in_domain = base.in_domain;
  auto is_origin = [dim](const StatePoint& p) {
    return p.coords.cwiseAbs().maxCoeff() <= kPointTol;
  };

  auto base_p = base.P.value;
  ValueFn p_value = [base_p, is_origin](double t, const TestFunction& f, const StatePoint& x) {
    if (is_origin(x)) return f(x);
    return base_p(t, f, x);
  };
  ex.P = make_semigroup(ex.name, p_value, {});

  auto base_u = base.U.value;
  ValueFn u_value = [base_u, is_origin](double alpha, const TestFunction& f, const StatePoint& x) {
    if (is_origin(x)) return f(x) / alpha;
    return base_u(alpha, f, x);
  };
  std::function<SignedKernel(double)> kernel;
  if (dim == 1) {
    auto base_kernel = base.U.kernel;
    kernel = [base_kernel](double alpha) {
      SignedKernel k = base_kernel(alpha);
      Eigen::MatrixXd m = k.entries();
      Eigen::Index zero = k.space()->nearest(point(0.0));
      m.row(zero).setZero();
      m(zero, zero) = 1.0 / alpha;  // absorbing atom
      return SignedKernel(k.space(), std::move(m));
    };
  }
  ex.U = make_resolvent(ex.name, u_value,
                        [](double, const std::vector<double>& bp) { return bp; }, kernel);
  if (dim == 2) ex.U.kind = EvalKind::quadrature;

  // Intrinsic space: the hyperplane x_{d+1} = 0 plus the isolated absorbing
  // point at x_{d+1} = 1; the hyperplane origin is the closure point.
  ex.in_intrinsic_domain = [dim](const StatePoint& p) {
    if (p.dim() != dim + 1 || !p.coords.allFinite()) return false;
    double last = p.coords[dim];
    if (std::abs(last) <= kPointTol) return true;
    return std::abs(last - 1.0) <= kPointTol && p.coords.head(dim).cwiseAbs().maxCoeff() <= kPointTol;
  };
  auto lower = [dim](const StatePoint& p) {
    StatePoint q;
    q.coords = p.coords.head(dim);
    return q;
  };
  auto is_absorbed = [dim](const StatePoint& p) {
    return std::abs(p.coords[dim] - 1.0) <= kPointTol;
  };
  ValueFn pi_value = [base_p, lower, is_absorbed, in = ex.in_intrinsic_domain](
                         double t, const TestFunction& f, const StatePoint& x) {
    if (!in(x)) throw OutOfDomainError("absorbing intrinsic: invalid point");
    if (is_absorbed(x)) return f(x);
    StatePoint q = lower(x);
    int d = static_cast<int>(q.dim());
    auto on_plane = [f, d](const StatePoint& y) {
      StatePoint z;
      z.coords = Eigen::VectorXd::Zero(d + 1);
      z.coords.head(d) = y.coords;
      return f(z);
    };
    TestFunction fp;
    fp.name = f.name + "|plane";
    fp.eval = on_plane;
    fp.sup_bound = f.sup_bound;
    fp.breakpoints = f.breakpoints;
    return base_p(t, fp, q);
  };
  ex.P_intrinsic = make_semigroup(ex.name + "_intrinsic", pi_value, {});
  auto base_u2 = base.U.value;
  ValueFn ui_value = [base_u2, lower, is_absorbed, in = ex.in_intrinsic_domain](
                         double alpha, const TestFunction& f, const StatePoint& x) {
    if (!in(x)) throw OutOfDomainError("absorbing intrinsic: invalid point");
    if (is_absorbed(x)) return f(x) / alpha;
    StatePoint q = lower(x);
    int d = static_cast<int>(q.dim());
    auto on_plane = [f, d](const StatePoint& y) {
      StatePoint z;
      z.coords = Eigen::VectorXd::Zero(d + 1);
      z.coords.head(d) = y.coords;
      return f(z);
    };
    TestFunction fp;
    fp.name = f.name + "|plane";
    fp.eval = on_plane;
    fp.sup_bound = f.sup_bound;
    fp.breakpoints = f.breakpoints;
    return base_u2(alpha, fp, q);
  };
  ex.U_intrinsic = make_resolvent(ex.name + "_intrinsic", ui_value, {});

  for (int i = 0; i < dim; ++i) {
    TestFunction coord;
    coord.name = "e" + std::to_string(i + 1);
    coord.eval = [i](const StatePoint& p) { return p.coords[i]; };
    coord.claims.coordinate = i;
    ex.embedding.coord_functions.push_back(coord);
  }
  TestFunction origin_ind;
  origin_ind.name = "e" + std::to_string(dim + 1);
  origin_ind.eval = [is_origin](const StatePoint& p) { return is_origin(p) ? 1.0 : 0.0; };
  origin_ind.sup_bound = 1.0;
  origin_ind.claims.coordinate = dim;
  ex.embedding.coord_functions.push_back(origin_ind);
  ex.embedding.example = ex.name;
  {
    StatePoint ghost;  // hyperplane origin, reached only as a limit
    ghost.coords = Eigen::VectorXd::Zero(dim + 1);
    ghost.tag = PointTag::closure_added;
    ghost.label = "plane_origin";
    ex.embedding.closure_points = {ghost};
    if (dim == 1) {
      ex.embedding.approach_sequences = {
          make_sequence("approach_plane0_pos", [](int n) { return point(1.0 / n); }, 1024, ghost),
          make_sequence("approach_plane0_neg", [](int n) { return point(-1.0 / n); }, 1024, ghost),
      };
    }
  }
  ex.intrinsic_grid = intrinsic_points(ex.embedding, *ex.original_grid);

  ex.smooth_battery = base.smooth_battery;
  ex.indicator_battery = base.indicator_battery;
  if (dim == 1) ex.indicator_battery.push_back(indicator_point(0.0));
  ex.r_catalogue = {TestFunction::constant(1.0)};
  if (dim == 1) {
    ex.r_catalogue.push_back(catalogued_potential(ex.U, gauss_bump(1.0, 1.0), 1.0, "U1[bump1]"));
    ex.r_catalogue.push_back(catalogued_potential(ex.U, indicator_le(0.0), 1.0, "U1[ind<=0]"));
    TestFunction atom = indicator_point(0.0);
    atom.name = "atom0";
    atom.claims.in_c_plus = true;
    atom.claims.supermedian_alpha = 0.0;
    ex.r_catalogue.push_back(atom);
    ex.r_catalogue.push_back(fn_1d("osc", [](double x) { return std::sin(x); }, 1.0));
    ex.divergence_witness = "osc";
    ex.r_plus_catalogue = {TestFunction::constant(1.0), ex.r_catalogue[1], ex.r_catalogue[2],
                           atom};
    ex.r_plus_catalogue[0].claims.supermedian_alpha = 1.0;
  } else {
    ex.r_plus_catalogue = {TestFunction::constant(1.0)};
    ex.r_plus_catalogue[0].claims.supermedian_alpha = 1.0;
  }
  ex.c0_set = base.c0_set;
  ex.liftable_battery = dim == 1 ? std::vector<TestFunction>{gauss_bump(1.0, 1.0), logistic_fn()}
                                 : std::vector<TestFunction>{TestFunction::constant(1.0)};

  ex.probe_points = base.probe_points;
  if (dim == 1) {
    ex.probe_points.push_back(point(0.0));
    for (const auto& p : base.probe_points) ex.intrinsic_probe_points.push_back(point(p.x(), 0.0));
    ex.intrinsic_probe_points.push_back(point(0.0, 1.0));
    ex.intrinsic_probe_points.push_back(point(0.0, 0.0));
    ex.probes.sequences = {
        make_sequence("conv_inv_n", [](int n) { return point(1.0 / n); }, 4096),
        pair_sequence("pair_0_1", point(0.0), point(1.0)),
        make_sequence("div_n", [](int n) { return point(static_cast<double>(n)); }, 4096),
    };
  } else {
    ex.intrinsic_probe_points = ex.probe_points;
  }

  ex.assemble_generator = base.assemble_generator;
  ex.check_side_conditions = [](const TestFunction&) {};
  return ex;
}

// ===========================================================================
// Instantaneous jump to the limiting distribution
// ===========================================================================

Example build_collapse(const GridParams& gp) {
  Example ex;
  ex.id = ExampleId::collapse;
  ex.name = "collapse";
  ex.description = "instantaneous jump to a fixed limiting distribution";
  ex.grid_params = gp;
  const double lo = -5.0, hi = 5.0;
  ex.original_grid = GridStateSpace::uniform_1d(lo, hi, std::max(gp.h, 0.01));
  ex.in_domain = [lo, hi](const StatePoint& p) {
    return p.dim() == 1 && p.x() >= lo - kPointTol && p.x() <= hi + kPointTol;
  };
  auto check_domain = [in = ex.in_domain](const StatePoint& x) {
    if (!in(x)) throw OutOfDomainError("collapse: point outside [-5, 5]");
  };

  const double z_mass = std::erf(5.0 / std::sqrt(2.0));
  auto pi_of = [z_mass, lo, hi](const TestFunction& f) {
    auto g = [&](double y) {
      return f(point(y)) * std::exp(-0.5 * y * y) / std::sqrt(2.0 * M_PI);
    };
    return integrate(g, lo, hi, f.breakpoints, 2.5) / z_mass;
  };

  // The transition function is p_t = pi for every t >= 0 (the paper defines
  // p_t for t > 0 only; taking P_0 = pi keeps t -> P_t f right continuous and
  // Laplace-consistent). The path model still starts at Y_0 = x0 and jumps at
  // 0+; the two differ only on the time-zero null set.
  ValueFn p_value = [check_domain, pi_of](double, const TestFunction& f, const StatePoint& x) {
    check_domain(x);
    return pi_of(f);
  };
  ex.P = make_semigroup("collapse", p_value, {});

  auto grid = ex.original_grid;
  double h = std::max(gp.h, 0.01);
  auto kernel = [grid, h, z_mass, lo, hi](double alpha) {
    Eigen::Index n = grid->size();
    Eigen::VectorXd masses(n);
    auto cdf = [](double v) { return 0.5 * std::erf(v / std::sqrt(2.0)); };
    for (Eigen::Index j = 0; j < n; ++j) {
      double y = grid->at(j).x();
      double a = std::max(lo, y - h / 2), b = std::min(hi, y + h / 2);
      masses[j] = (cdf(b) - cdf(a)) / z_mass;
    }
    Eigen::MatrixXd m = (masses / alpha).transpose().replicate(n, 1);
    return SignedKernel(grid, std::move(m));
  };

  ValueFn u_value = [check_domain, pi_of](double alpha, const TestFunction& f,
                                          const StatePoint& x) {
    check_domain(x);
    return pi_of(f) / alpha;
  };
  ex.U = make_resolvent("collapse", u_value, {}, kernel);

  // The intrinsic space is a single point.
  StatePoint the_point = point(1.0);
  the_point.label = "collapsed";
  ex.intrinsic_grid = std::make_shared<GridStateSpace>(std::vector<StatePoint>{the_point},
                                                       Eigen::VectorXd::Ones(1));
  ex.in_intrinsic_domain = [](const StatePoint& p) {
    return p.dim() == 1 && std::abs(p.x() - 1.0) <= kPointTol;
  };
  ex.P_intrinsic = make_semigroup("collapse_intrinsic",
                                  [](double, const TestFunction& f, const StatePoint& x) {
                                    return f(x);
                                  },
                                  {});
  ex.U_intrinsic = make_resolvent("collapse_intrinsic",
                                  [](double alpha, const TestFunction& f, const StatePoint& x) {
                                    return f(x) / alpha;
                                  },
                                  {});

  TestFunction coord = fn_1d("e", [](double) { return 1.0; }, 1.0);
  ex.embedding.example = "collapse";
  ex.embedding.coord_functions = {coord};
  ex.intrinsic_grid = intrinsic_points(ex.embedding, *ex.original_grid);

  ex.smooth_battery = {TestFunction::constant(1.0), gauss_bump(0.0, 1.0), logistic_fn(),
                       damped_cos(), gauss_bump(1.0, 0.5)};
  ex.indicator_battery = {indicator_le(0.0), indicator_interval(0.0, 5.0)};
  ex.r_catalogue = {TestFunction::constant(1.0), TestFunction::constant(0.5)};
  ex.r_plus_catalogue = ex.r_catalogue;
  for (auto& f : ex.r_plus_catalogue) f.claims.supermedian_alpha = 1.0;
  ex.c0_set = {gauss_bump(0.0, 1.0)};
  ex.liftable_battery = {TestFunction::constant(1.0), TestFunction::constant(0.5)};

  ex.probe_points = line_probes(lo, hi);
  ex.intrinsic_probe_points = {the_point};
  ex.probes.sequences = {
      make_sequence("conv_inv_n", [](int n) { return point(1.0 / n); }, 4096),
      pair_sequence("pair_-2_2", point(-2.0), point(2.0)),
  };
  ex.assemble_generator = {};
  ex.check_side_conditions = [](const TestFunction&) {};
  return ex;
}

// ---------------------------------------------------------------------------

std::map<ExampleId, Example>& cache() {
  static std::map<ExampleId, Example> instance;
  return instance;
}

std::mutex& cache_mutex() {
  static std::mutex mu;
  return mu;
}

}  // namespace

Example make_example(ExampleId id, const GridParams& gp) {
  switch (id) {
    case ExampleId::uniform:
      return build_uniform(gp);
    case ExampleId::brownian:
      return build_brownian(gp, 1);
    case ExampleId::brownian2:
      return build_brownian(gp, 2);
    case ExampleId::pure_jump:
      return build_pure_jump(gp, false);
    case ExampleId::pure_jump_bd:
      return build_pure_jump(gp, true);
    case ExampleId::sticky:
      return build_sticky(gp);
    case ExampleId::severed:
      return build_severed(gp);
    case ExampleId::fork:
      return build_fork(gp);
    case ExampleId::absorbing_brownian:
      return build_absorbing(gp, 1);
    case ExampleId::absorbing_brownian2:
      return build_absorbing(gp, 2);
    case ExampleId::collapse:
      return build_collapse(gp);
  }
  throw Error("make_example: unknown id");
}

const Example& example(ExampleId id) {
  std::lock_guard<std::mutex> lock(cache_mutex());
  auto& c = cache();
  auto it = c.find(id);
  if (it == c.end()) it = c.emplace(id, make_example(id, GridParams{})).first;
  return it->second;
}

const std::vector<ExampleId>& default_example_ids() {
  static const std::vector<ExampleId> ids = {
      ExampleId::uniform, ExampleId::brownian,  ExampleId::pure_jump,
      ExampleId::sticky,  ExampleId::severed,   ExampleId::fork,
      ExampleId::absorbing_brownian, ExampleId::collapse};
  return ids;
}

std::vector<ExampleId> all_example_ids() {
  std::vector<ExampleId> ids = default_example_ids();
  ids.push_back(ExampleId::brownian2);
  ids.push_back(ExampleId::absorbing_brownian2);
  ids.push_back(ExampleId::pure_jump_bd);
  return ids;
}

const char* to_string(ExampleId id) {
  switch (id) {
    case ExampleId::uniform: return "uniform";
    case ExampleId::brownian: return "brownian";
    case ExampleId::pure_jump: return "pure_jump";
    case ExampleId::sticky: return "sticky";
    case ExampleId::severed: return "severed";
    case ExampleId::fork: return "fork";
    case ExampleId::absorbing_brownian: return "absorbing_brownian";
    case ExampleId::collapse: return "collapse";
    case ExampleId::brownian2: return "brownian2";
    case ExampleId::absorbing_brownian2: return "absorbing_brownian2";
    case ExampleId::pure_jump_bd: return "pure_jump_bd";
  }
  return "?";
}

const char* to_string(Space s) { return s == Space::original ? "original" : "intrinsic"; }

std::optional<ExampleId> parse_example(const std::string& name) {
  for (ExampleId id : all_example_ids())
    if (name == to_string(id)) return id;
  return std::nullopt;
}

std::optional<Space> parse_space(const std::string& name) {
  if (name == "original") return Space::original;
  if (name == "intrinsic") return Space::intrinsic;
  return std::nullopt;
}

double eval_Pt(ExampleId id, double t, const TestFunction& f, const StatePoint& x) {
  return example(id).P.value(t, f, x);
}

double eval_Ua(ExampleId id, double alpha, const TestFunction& f, const StatePoint& x) {
  return example(id).U.value(alpha, f, x);
}

double check_generator_pair(const Example& ex, const GeneratorPair& pair,
                            const std::vector<StatePoint>& probes) {
  if (!ex.assemble_generator)
    throw Error(ex.name + ": no generator-pair machinery catalogued");
  ex.check_side_conditions(pair.g);
  TestFunction f = ex.assemble_generator(pair.g, pair.alpha);
  f.sup_bound = estimate_sup(f, probes) + pair.alpha * fn_scale(pair.g);
  double residual = 0.0;
  for (const auto& x : probes)
    residual = std::max(residual, std::abs(ex.U.value(pair.alpha, f, x) - pair.g(x)));
  return residual;
}

}  // namespace smp
