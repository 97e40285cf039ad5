#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "smp/kernel.hpp"
#include "smp/rng.hpp"

using namespace smp;

namespace {

SpacePtr five_point_space() {
  std::vector<StatePoint> pts;
  for (int i = 0; i < 5; ++i) pts.push_back(point(static_cast<double>(i)));
  return std::make_shared<GridStateSpace>(pts, Eigen::VectorXd::Ones(5));
}

SignedKernel random_signed(SpacePtr space, CounterRng& rng, double scale = 1.0) {
  Eigen::MatrixXd m(space->size(), space->size());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = scale * (2.0 * rng.uniform() - 1.0);
  return SignedKernel(space, std::move(m));
}

SignedKernel random_stochastic(SpacePtr space, CounterRng& rng) {
  Eigen::MatrixXd m(space->size(), space->size());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    double row_sum = 0.0;
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      m(i, j) = rng.uniform() + 1e-3;
      row_sum += m(i, j);
    }
    m.row(i) /= row_sum;
  }
  return SignedKernel(space, std::move(m));
}

}  // namespace

TEST_CASE("identity is the unit of the algebra") {
  auto space = five_point_space();
  CounterRng rng(7);
  SignedKernel k = random_signed(space, rng);
  SignedKernel id = SignedKernel::identity(space);
  CHECK((compose(id, k).entries() - k.entries()).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
  CHECK((compose(k, id).entries() - k.entries()).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
}

TEST_CASE("two-point swap kernel squares to the identity") {
  std::vector<StatePoint> pts = {point(0.0), point(1.0)};
  auto space = std::make_shared<GridStateSpace>(pts, Eigen::VectorXd::Ones(2));
  Eigen::MatrixXd q(2, 2);
  q << 0, 1, 1, 0;
  SignedKernel swap(space, q);
  CHECK(swap.is_stochastic());
  SignedKernel sq = compose(swap, swap);
  CHECK((sq.entries() - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("norm is submultiplicative on random signed kernels") {
  auto space = five_point_space();
  for (int trial = 0; trial < 100; ++trial) {
    CounterRng rng(42, static_cast<std::uint64_t>(trial));
    SignedKernel a = random_signed(space, rng);
    SignedKernel b = random_signed(space, rng, 2.0);
    CHECK(norm(compose(a, b)) <= norm(a) * norm(b) + 1e-12);
  }
}

TEST_CASE("norm satisfies the triangle inequality and homogeneity") {
  auto space = five_point_space();
  for (int trial = 0; trial < 100; ++trial) {
    CounterRng rng(11, static_cast<std::uint64_t>(trial));
    SignedKernel a = random_signed(space, rng);
    SignedKernel b = random_signed(space, rng);
    CHECK(norm(a + b) <= norm(a) + norm(b) + 1e-12);
    CHECK(norm(-2.5 * a) == doctest::Approx(2.5 * norm(a)));
  }
}

TEST_CASE("norm of stochastic and zero kernels") {
  auto space = five_point_space();
  CounterRng rng(3);
  CHECK(norm(random_stochastic(space, rng)) == doctest::Approx(1.0));
  SignedKernel zero(space, Eigen::MatrixXd::Zero(5, 5));
  CHECK(norm(zero) == 0.0);
}

TEST_CASE("powers: unit at zero, stochastic closure, associativity") {
  auto space = five_point_space();
  CounterRng rng(5);
  SignedKernel q = random_stochastic(space, rng);

  SignedKernel p0 = power(q, 0);
  CHECK((p0.entries() - Eigen::MatrixXd::Identity(5, 5)).cwiseAbs().maxCoeff() == 0.0);

  SignedKernel p7 = power(q, 7);
  CHECK(p7.is_stochastic(1e-9));

  SignedKernel k = random_signed(space, rng);
  SignedKernel p4 = power(k, 4);
  SignedKernel p22 = compose(power(k, 2), power(k, 2));
  CHECK((p4.entries() - p22.entries()).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(norm(p4) <= std::pow(norm(k), 4) + 1e-12);
}

TEST_CASE("apply: conservation, identity, contraction") {
  auto space = five_point_space();
  CounterRng rng(13);
  SignedKernel q = random_stochastic(space, rng);

  TestFunction one = TestFunction::constant(1.0);
  TestFunction q1 = apply(q, one);
  for (const auto& p : space->points()) CHECK(q1(p) == doctest::Approx(1.0));

  TestFunction f;
  f.name = "f";
  f.eval = [](const StatePoint& p) { return std::sin(p.x()) + 0.3; };
  f.sup_bound = 1.3;
  TestFunction idf = apply(SignedKernel::identity(space), f);
  for (const auto& p : space->points()) CHECK(idf(p) == doctest::Approx(f(p)));

  TestFunction qf = apply(q, f);
  CHECK(grid_sup(qf, *space) <= grid_sup(f, *space) + 1e-12);
}

TEST_CASE("apply: shift kernel moves a function one cell") {
  std::vector<StatePoint> pts;
  for (int i = 0; i < 6; ++i) pts.push_back(point(0.5 * i));
  auto space = std::make_shared<GridStateSpace>(pts, Eigen::VectorXd::Ones(6));
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(6, 6);
  for (int i = 1; i < 6; ++i) m(i, i - 1) = 1.0;  // one cell to the left
  m(0, 0) = 1.0;
  SignedKernel shift(space, m);
  TestFunction f;
  f.name = "ramp";
  f.eval = [](const StatePoint& p) { return p.x() * p.x(); };
  TestFunction sf = apply(shift, f);
  for (int i = 1; i < 6; ++i) CHECK(sf(space->at(i)) == doctest::Approx(f(space->at(i - 1))));
}

TEST_CASE("error paths: mismatched spaces, overflow, unbounded function") {
  auto a = five_point_space();
  std::vector<StatePoint> pts = {point(0.0), point(1.0)};
  auto b = std::make_shared<GridStateSpace>(pts, Eigen::VectorXd::Ones(2));
  CounterRng rng(1);
  CHECK_THROWS_AS(compose(random_signed(a, rng), random_signed(b, rng)), MismatchedSpaceError);

  Eigen::MatrixXd huge = Eigen::MatrixXd::Constant(5, 5, 1e308);
  SignedKernel k(a, huge);
  CHECK_THROWS_AS(compose(k, k), OverflowError);
  CHECK_THROWS_AS(
      SignedKernel(a, Eigen::MatrixXd::Constant(5, 5, std::numeric_limits<double>::infinity())),
      OverflowError);

  TestFunction bad;
  bad.name = "pole";
  bad.eval = [](const StatePoint& p) { return 1.0 / p.x(); };  // infinite at x = 0
  CHECK_THROWS_AS(apply(SignedKernel::identity(a), bad), UnboundedFunctionError);
}

TEST_CASE("density construction honors cell weights") {
  std::vector<StatePoint> pts = {point(0.0), point(1.0)};
  Eigen::VectorXd w(2);
  w << 0.5, 2.0;
  auto space = std::make_shared<GridStateSpace>(pts, w);
  Eigen::MatrixXd density(2, 2);
  density << 1.0, 0.25, 0.5, 0.375;  // rows integrate to 1 against the weights
  SignedKernel k = SignedKernel::from_density(space, density);
  CHECK(k.is_stochastic(1e-12));
}

TEST_CASE("debug CSV lists nonzero masses as row,col,mass") {
  std::vector<StatePoint> pts = {point(0.0), point(1.0)};
  auto space = std::make_shared<GridStateSpace>(pts, Eigen::VectorXd::Ones(2));
  Eigen::MatrixXd m(2, 2);
  m << 0.25, 0.0, 0.0, -1.5;
  std::ostringstream os;
  write_csv(SignedKernel(space, m), os);
  CHECK(os.str() == "row,col,mass\n0,0,0.25\n1,1,-1.5\n");
}

TEST_CASE("row total variation is cached consistently") {
  auto space = five_point_space();
  CounterRng rng(17);
  SignedKernel k = random_signed(space, rng);
  Eigen::VectorXd recomputed = k.entries().cwiseAbs().rowwise().sum();
  CHECK((recomputed - k.row_total_variation()).cwiseAbs().maxCoeff() == 0.0);
}
