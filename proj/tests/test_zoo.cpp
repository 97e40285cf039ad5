#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "smp/kernel.hpp"
#include "smp/quadrature.hpp"
#include "smp/semigroup.hpp"
#include "smp/zoo.hpp"

using namespace smp;

namespace {

TestFunction point_ind(double c) {
  TestFunction f;
  f.name = "ind({" + std::to_string(c) + "})";
  f.eval = [c](const StatePoint& p) { return std::abs(p.x() - c) <= 1e-12 ? 1.0 : 0.0; };
  f.sup_bound = 1.0;
  f.breakpoints = {c};
  return f;
}

}  // namespace

TEST_CASE("uniform motion translates") {
  const Example& ex = example(ExampleId::uniform);
  const TestFunction& f = ex.smooth_battery[1];
  CHECK(ex.P.value(1.0, f, point(3.0)) == doctest::Approx(f(point(2.0))));
}

TEST_CASE("sticky origin: the atom decays at unit rate") {
  const Example& ex = example(ExampleId::sticky);
  for (double s : {0.3, 1.0, 2.5}) {
    CHECK(ex.P.value(s, point_ind(0.0), point(0.0)) == doctest::Approx(std::exp(-s)));
  }
  // mass decomposition for 0 <= x < t: atom e^{x-t} plus the drift density
  double x = 0.4, t = 1.5;
  double atom = ex.P.value(t, point_ind(0.0), point(x));
  CHECK(atom == doctest::Approx(std::exp(x - t)));
  CHECK(ex.P.value(t, TestFunction::constant(1.0), point(x)) == doctest::Approx(1.0));
}

TEST_CASE("a pure jump chain with the identity jump kernel is frozen") {
  // p_t = sum_n e^{-lt} (lt)^n/n! q^(n) with q = 1(x,B): every term fixes f.
  auto space = example(ExampleId::pure_jump).original_grid;
  SignedKernel q = SignedKernel::identity(space);
  const double lambda = 2.0, t = 1.3;
  Eigen::VectorXd f(3);
  f << 0.2, 0.9, -0.4;
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(3);
  double w = std::exp(-lambda * t);
  SignedKernel qn = power(q, 0);
  for (int n = 0; n < 60; ++n) {
    acc += w * apply<double>(qn, f);
    qn = compose(qn, q);
    w *= lambda * t / (n + 1);
  }
  CHECK((acc - f).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("every example is stochastic on a (t, x) lattice") {
  TestFunction one = TestFunction::constant(1.0);
  for (ExampleId id : default_example_ids()) {
    const Example& ex = example(id);
    for (double t : {0.0, 0.4, 1.3, 3.1}) {
      for (std::size_t i = 0; i < ex.probe_points.size(); i += 5) {
        CHECK(std::abs(ex.P.value(t, one, ex.probe_points[i]) - 1.0) <= 1e-9);
      }
    }
  }
}

TEST_CASE("every resolvent normalizes the constant to 1/alpha") {
  TestFunction one = TestFunction::constant(1.0);
  for (ExampleId id : default_example_ids()) {
    const Example& ex = example(id);
    for (double alpha : {0.5, 1.0, 2.0, 4.0}) {
      for (std::size_t i = 0; i < ex.probe_points.size(); i += 7) {
        CHECK(std::abs(alpha * ex.U.value(alpha, one, ex.probe_points[i]) - 1.0) <= 1e-6);
      }
    }
  }
}

TEST_CASE("uniform resolvent of the half-line indicator, hand integrated") {
  const Example& ex = example(ExampleId::uniform);
  TestFunction ind;
  ind.name = "ind(<=0)";
  ind.eval = [](const StatePoint& p) { return p.x() <= 0.0 ? 1.0 : 0.0; };
  ind.sup_bound = 1.0;
  ind.breakpoints = {0.0};
  CHECK(ex.U.value(1.0, ind, point(1.0)) == doctest::Approx(std::exp(-1.0)).epsilon(1e-9));
}

TEST_CASE("severed resolvent takes equal values at the identified pair") {
  const Example& ex = example(ExampleId::severed);
  for (const auto& f : ex.smooth_battery) {
    for (double alpha : {0.5, 1.0, 3.0}) {
      double at0 = ex.U.value(alpha, f, point(0.0));
      double atm1 = ex.U.value(alpha, f, point(-1.0));
      CHECK(at0 == doctest::Approx(atm1).epsilon(1e-10));
    }
  }
}

TEST_CASE("fork: branch average with equal weights") {
  const Example& ex = example(ExampleId::fork);
  const TestFunction& f = ex.smooth_battery[2];  // branch-asymmetric
  double x = 0.7, t = 2.0;
  double expected = 0.5 * f(point(0.0, t - x)) + 0.5 * f(point(0.0, x - t));
  CHECK(ex.P.value(t, f, point(x, 0.0)) == doctest::Approx(expected));
}

TEST_CASE("fork resolvent matches the Laplace transform of its own semigroup") {
  // The half-line integrals converge with the e^{-alpha t} weight obtained by
  // transforming P_t directly; this pins the convergent reading of the
  // R-branch formula.
  const Example& ex = example(ExampleId::fork);
  const TestFunction& f = ex.smooth_battery[1];
  for (double alpha : {1.0, 2.0}) {
    StatePoint x = point(1.5, 0.0);
    LaplaceResult lr =
        laplace_forward(ex.P, alpha, f, x, default_laplace_horizon(alpha), 2.5e-4);
    CHECK(std::abs(lr.value - ex.U.value(alpha, f, x)) <= 1e-4 + lr.truncation_bound);
  }
}

TEST_CASE("collapse: resolvent is constant in the starting point") {
  const Example& ex = example(ExampleId::collapse);
  for (const auto& f : ex.smooth_battery) {
    double base = ex.U.value(1.0, f, point(-3.0));
    for (double x : {-1.0, 0.0, 2.0, 4.5})
      CHECK(ex.U.value(1.0, f, point(x)) == doctest::Approx(base).epsilon(1e-12));
  }
}

TEST_CASE("absorbing Brownian motion: frozen at the origin, Brownian elsewhere") {
  const Example& ab = example(ExampleId::absorbing_brownian);
  const Example& br = example(ExampleId::brownian);
  const TestFunction& f = ab.smooth_battery[1];
  CHECK(ab.P.value(1.0, f, point(0.0)) == doctest::Approx(f(point(0.0))));
  CHECK(ab.U.value(2.0, f, point(0.0)) == doctest::Approx(f(point(0.0)) / 2.0));
  CHECK(ab.P.value(1.0, f, point(0.7)) == doctest::Approx(br.P.value(1.0, f, point(0.7))));
}

TEST_CASE("the 50-state birth-death variant agrees with its matrix resolvent") {
  const Example& ex = example(ExampleId::pure_jump_bd);
  const TestFunction& f = ex.smooth_battery[1];
  SignedKernel k = ex.U.kernel_at(1.5);
  Eigen::VectorXd v = grid_values(f, *k.space());
  Eigen::VectorXd exact = k.entries() * v;
  for (Eigen::Index i = 0; i < k.space()->size(); i += 9)
    CHECK(ex.U.value(1.5, f, k.space()->at(i)) == doctest::Approx(exact[i]).epsilon(1e-12));
  CHECK(check_resolvent_identity(ex.U, 1.0, 2.0, f, point(25.0)) < 1e-12);
}

TEST_CASE("2-d Brownian motion: Chapman-Kolmogorov and resolvent normalization") {
  const Example& ex = example(ExampleId::brownian2);
  const TestFunction& f = ex.smooth_battery[1];
  CHECK(check_chapman_kolmogorov(ex.P, 0.4, 0.8, f, point(0.3, -0.2)) <= 1e-3);
  CHECK(std::abs(2.0 * ex.U.value(2.0, TestFunction::constant(1.0), point(0.5, 0.5)) - 1.0) <=
        1e-5);
  // resolvent vs time-quadrature of the heat semigroup
  LaplaceResult lr = laplace_forward(ex.P, 2.0, f, point(0.3, -0.2), 20.0, 1e-2);
  CHECK(std::abs(lr.value - ex.U.value(2.0, f, point(0.3, -0.2))) <= 1e-3 + lr.truncation_bound);
}

TEST_CASE("heat kernel domination bound, spot checked on a lattice") {
  // |p_t(y-x) - p_t(y-x0)| <= K p_{2t}(y-x0) for |x-x0| < 1/2, with
  // K = sqrt(2) e^{1/(4 t_min)} on the probed t-lattice.
  auto heat = [](double t, double u) {
    return std::exp(-u * u / (2.0 * t)) / std::sqrt(2.0 * M_PI * t);
  };
  double worst = 0.0;
  for (double t : {0.25, 0.5, 1.0, 2.0}) {
    for (double x0 : {0.0, 1.0}) {
      for (double dx : {-0.5, -0.3, 0.2, 0.49}) {
        for (double y = -4.0; y <= 4.0; y += 0.25) {
          double lhs = std::abs(heat(t, y - x0 - dx) - heat(t, y - x0));
          worst = std::max(worst, lhs / heat(2.0 * t, y - x0));
        }
      }
    }
  }
  CHECK(worst <= std::sqrt(2.0) * std::exp(0.25 / 0.25));
}

TEST_CASE("generator pairs: uniform motion") {
  const Example& ex = example(ExampleId::uniform);
  auto probes = std::vector<StatePoint>(ex.probe_points.begin(), ex.probe_points.begin() + 12);
  for (const auto& pair : ex.generator_pairs)
    CHECK(check_generator_pair(ex, pair, probes) < 1e-5);
}

TEST_CASE("generator pairs: sticky origin accepts flat-at-zero, rejects sloped") {
  const Example& ex = example(ExampleId::sticky);
  auto probes = std::vector<StatePoint>(ex.probe_points.begin(), ex.probe_points.begin() + 12);
  for (const auto& pair : ex.generator_pairs)
    CHECK(check_generator_pair(ex, pair, probes) < 1e-4);
  for (const auto& pair : ex.rejected_pairs)
    CHECK_THROWS_AS(check_generator_pair(ex, pair, probes), SideConditionViolatedError);
}

TEST_CASE("generator pairs: Brownian motion via the second-derivative stencil") {
  const Example& ex = example(ExampleId::brownian);
  auto probes = std::vector<StatePoint>(ex.probe_points.begin(), ex.probe_points.begin() + 12);
  for (const auto& pair : ex.generator_pairs)
    CHECK(check_generator_pair(ex, pair, probes) < 1e-4);
}

TEST_CASE("generator pairs: severed motion needs g(-1) = g(0)") {
  const Example& ex = example(ExampleId::severed);
  auto probes = std::vector<StatePoint>(ex.probe_points.begin(), ex.probe_points.begin() + 12);
  for (const auto& pair : ex.generator_pairs)
    CHECK(check_generator_pair(ex, pair, probes) < 1e-4);
  for (const auto& pair : ex.rejected_pairs)
    CHECK_THROWS_AS(check_generator_pair(ex, pair, probes), SideConditionViolatedError);
}

TEST_CASE("generator pairs: fork needs the branch average at the origin") {
  const Example& ex = example(ExampleId::fork);
  auto probes = std::vector<StatePoint>(ex.probe_points.begin(), ex.probe_points.begin() + 12);
  for (const auto& pair : ex.generator_pairs)
    CHECK(check_generator_pair(ex, pair, probes) < 1e-4);
  for (const auto& pair : ex.rejected_pairs)
    CHECK_THROWS_AS(check_generator_pair(ex, pair, probes), SideConditionViolatedError);
}

TEST_CASE("generator pairs: the 3-state chain is exact") {
  const Example& ex = example(ExampleId::pure_jump);
  for (const auto& pair : ex.generator_pairs)
    CHECK(check_generator_pair(ex, pair, ex.probe_points) < 1e-10);
}

TEST_CASE("points outside an example's state space are refused") {
  CHECK_THROWS_AS(eval_Pt(ExampleId::fork, 1.0, TestFunction::constant(1.0), point(1.0, 1.0)),
                  OutOfDomainError);
  CHECK_THROWS_AS(eval_Ua(ExampleId::severed, 1.0, TestFunction::constant(1.0), point(-0.5)),
                  OutOfDomainError);
  CHECK_THROWS_AS(eval_Pt(ExampleId::collapse, 1.0, TestFunction::constant(1.0), point(7.0)),
                  OutOfDomainError);
  CHECK_THROWS_AS(eval_Ua(ExampleId::pure_jump, 1.0, TestFunction::constant(1.0), point(0.5)),
                  OutOfDomainError);
}

TEST_CASE("intrinsic evaluators agree with lifting the original ones") {
  const Example& ex = example(ExampleId::sticky);
  // psi maps x < 0 to x - 1; the intrinsic resolvent at psi(x) equals the
  // original resolvent at x.
  const TestFunction& h = ex.smooth_battery[1];
  TestFunction pullback;
  pullback.name = "pullback";
  auto he = h.eval;
  pullback.eval = [he](const StatePoint& p) {
    return he(point(p.x() < 0.0 ? p.x() + 1.0 : p.x()));
  };
  pullback.sup_bound = h.sup_bound;
  pullback.breakpoints = {0.0};
  for (double x : {-2.0, -0.4, 0.0, 1.3}) {
    double original = ex.U.value(1.0, h, point(x));
    double intrinsic =
        ex.U_intrinsic.value(1.0, pullback, point(x < 0.0 ? x - 1.0 : x));
    CHECK(original == doctest::Approx(intrinsic).epsilon(1e-10));
  }
}

TEST_CASE("grid resolvent kernels are sub-stochastic and Laplace-accurate") {
  for (ExampleId id : default_example_ids()) {
    const Example& ex = example(id);
    if (!ex.U.kernel) continue;
    SignedKernel k = ex.U.kernel(1.0);
    Eigen::VectorXd sums = k.entries().rowwise().sum();
    CHECK(sums.maxCoeff() <= 1.0 + 1e-9);
    // rows away from the truncation edge carry almost the full mass
    Eigen::Index mid = k.space()->nearest(ex.probe_points[ex.probe_points.size() / 2]);
    CHECK(sums[mid] == doctest::Approx(1.0).epsilon(1e-3));
    // kernel route agrees with the closed form at grid accuracy
    const TestFunction& f = ex.smooth_battery[1];
    Eigen::VectorXd v = grid_values(f, *k.space());
    double via_kernel = k.entries().row(mid).dot(v);
    double closed = ex.U.value(1.0, f, k.space()->at(mid));
    CHECK(std::abs(via_kernel - closed) <= 1e-4);
  }
}
