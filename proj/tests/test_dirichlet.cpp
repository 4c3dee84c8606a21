#include <doctest.h>

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "dynwalk/dirichlet.hpp"
#include "dynwalk/estimators.hpp"
#include "dynwalk/square_exit.hpp"

using namespace dynwalk;

namespace {

double max_harmonic_residual(const HittingField& f) {
  const std::int64_t n = f.radius();
  double worst = 0.0;
  for (std::int64_t a = -n; a <= n; ++a)
    for (std::int64_t b = -n; b <= n; ++b) {
      const LatticePoint y{a, b};
      if (y.is_origin() || y.norm2() >= n * n) continue;
      const double avg =
          0.25 * (f.at({a + 1, b}) + f.at({a - 1, b}) + f.at({a, b + 1}) + f.at({a, b - 1}));
      worst = std::max(worst, std::abs(f.at(y) - avg));
    }
  return worst;
}

// Exit distribution along the East side of the square |dx|, |dy| < m from its
// centre, by a dense solve of the discrete Dirichlet problem for each target.
std::vector<double> square_exit_dense(int m) {
  const int w = 2 * m - 1;  // interior width
  const int n = w * w;
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n);
  auto id = [&](int i, int j) { return (i + m - 1) * w + (j + m - 1); };
  for (int i = -(m - 1); i <= m - 1; ++i)
    for (int j = -(m - 1); j <= m - 1; ++j) {
      const int r = id(i, j);
      const int nb[4][2] = {{i + 1, j}, {i - 1, j}, {i, j + 1}, {i, j - 1}};
      for (auto& p : nb)
        if (std::abs(p[0]) < m && std::abs(p[1]) < m) a(r, id(p[0], p[1])) -= 0.25;
    }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  std::vector<double> law(static_cast<std::size_t>(w));
  for (int j = -(m - 1); j <= m - 1; ++j) {
    // the only interior neighbour of exit point (m, j) is (m-1, j)
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    rhs(id(m - 1, j)) = 0.25;
    const Eigen::VectorXd h = lu.solve(rhs);
    law[static_cast<std::size_t>(j + m - 1)] = h(id(0, 0));
  }
  double total = 0.0;
  for (double v : law) total += v;
  for (auto& v : law) v /= total;
  return law;
}

}  // namespace

TEST_SUITE("estimators") {

TEST_CASE("hand-solved radius 2 values") {
  CHECK(std::abs(hitting_prob_exact(2, {1, 0}) - 1.0 / 3.0) < 1e-10);
  CHECK(std::abs(hitting_prob_exact(2, {0, -1}) - 1.0 / 3.0) < 1e-10);
  CHECK(std::abs(hitting_prob_exact(2, {1, 1}) - 1.0 / 6.0) < 1e-10);
  CHECK(std::abs(hitting_prob_exact(2, {-1, 1}) - 1.0 / 6.0) < 1e-10);
}

TEST_CASE("exact solver preconditions") {
  CHECK_THROWS_WITH_AS(hitting_prob_exact(4, {0, 0}), "start at origin", std::invalid_argument);
  CHECK_THROWS_AS(hitting_prob_exact(4, {4, 0}), std::invalid_argument);
  CHECK_THROWS_AS(hitting_prob_exact(4, {3, 3}), std::invalid_argument);
  CHECK_THROWS(solve_hitting_field(0));
}

TEST_CASE("field is harmonic with the right boundary values") {
  for (std::int64_t n : {2, 8, 32}) {
    const auto f = solve_hitting_field(n);
    CHECK(max_harmonic_residual(f) < 1e-9);
    CHECK(f.at({0, 0}) == 1.0);
    CHECK(f.at({n, 0}) == 0.0);
    CHECK(f.at({n, n}) == 0.0);
    CHECK(f.at({n + 5, -2}) == 0.0);
    CHECK(f.unknowns() == disc_unknowns(n));
  }
}

TEST_CASE("hitting probability decreases along the axis") {
  const auto f = solve_hitting_field(64);
  for (std::int64_t a = 1; a < 63; ++a) CHECK(f.at({a + 1, 0}) <= f.at({a, 0}));
}

TEST_CASE("multigrid agrees with the direct solve") {
  for (std::int64_t n : {5, 17, 40, 100}) {
    const auto direct = solve_hitting_field(n, DirichletMethod::Direct);
    const auto mg = solve_hitting_field(n, DirichletMethod::Multigrid);
    CHECK(mg.method() == DirichletMethod::Multigrid);
    CHECK(mg.max_residual() < 1e-10);
    double diff = 0.0;
    for (std::int64_t a = 0; a <= n; ++a)
      for (std::int64_t b = 0; b <= n; ++b) diff = std::max(diff, std::abs(direct.at({a, b}) - mg.at({a, b})));
    CAPTURE(n);
    CHECK(diff < 1e-8);
  }
}

TEST_CASE("square exit law matches a dense Dirichlet solve") {
  for (int m = 1; m <= 8; ++m) {
    const auto series = square_side_exit_law(m);
    const auto dense = square_exit_dense(m);
    REQUIRE(series.size() == dense.size());
    for (std::size_t j = 0; j < dense.size(); ++j) CHECK(series[j] == doctest::Approx(dense[j]).epsilon(1e-9));
  }
}

TEST_CASE("square walk and stepwise walk agree in law") {
  const std::int64_t n = 24;
  const LatticePoint x{9, 5};
  const double exact = hitting_prob_exact(n, x);
  const int reps = 40000;
  int a = 0, b = 0;
  for (int i = 0; i < reps; ++i) {
    a += hits_before_exit_stepwise(n, x, 1000 + i);
    b += hits_before_exit_squares(n, x, 5000000 + i);
  }
  const double pa = double(a) / reps, pb = double(b) / reps;
  CAPTURE(exact);
  CHECK(std::abs(pa - exact) < 3.0 * std::sqrt(exact * (1 - exact) / reps));
  CHECK(std::abs(pb - exact) < 3.0 * std::sqrt(exact * (1 - exact) / reps));
}

TEST_CASE("MC hitting estimate") {
  const auto r = hitting_prob_mc(2, {1, 0}, 100000, 1);
  CHECK(std::abs(r.mean - 1.0 / 3.0) < 3.0 * r.stderr_);
  CHECK(r.stderr_ == doctest::Approx(std::sqrt(r.mean * (1 - r.mean) / 100000)));
  const auto again = hitting_prob_mc(2, {1, 0}, 100000, 1);
  CHECK(again.mean == r.mean);
  const auto small = hitting_prob_mc(16, {3, 0}, 10000, 2);
  const auto big = hitting_prob_mc(16, {3, 0}, 40000, 3);
  const double ratio = big.stderr_ / small.stderr_;
  CHECK(ratio > 0.4);
  CHECK(ratio < 0.6);
  CHECK_THROWS(hitting_prob_mc(4, {0, 0}, 10, 1));
  CHECK_THROWS(hitting_prob_mc(4, {4, 1}, 10, 1));
}

TEST_CASE("MC and exact agree across a grid") {
  int violations = 0, pairs = 0;
  for (std::int64_t n : {4, 8, 16, 32, 64})
    for (LatticePoint x : {LatticePoint{1, 0}, LatticePoint{1, 1}, LatticePoint{2, 1}, LatticePoint{3, 0}}) {
      if (x.norm2() >= n * n) continue;
      const double e = hitting_prob_exact(n, x);
      const auto mc = hitting_prob_mc(n, x, 20000, static_cast<std::uint64_t>(n * 100 + x.x1 * 10 + x.x2));
      ++pairs;
      violations += std::abs(mc.mean - e) > 3.0 * mc.stderr_;
    }
  CHECK(pairs >= 20);
  CHECK(violations <= 1);
}

TEST_CASE("Lawler constant fit") {
  // a point sitting exactly on the bound needs C = 0
  const double tight = (std::log2(64.0) - std::log2(4.0)) / std::log2(64.0);
  const LawlerPoint p{64, {4, 0}, tight};
  CHECK(fit_lawler_constant(std::span<const LawlerPoint>(&p, 1)) == doctest::Approx(0.0).epsilon(1e-12));

  const std::vector<std::int64_t> radii{16, 32, 64};
  const std::vector<LatticePoint> starts{{1, 0}};
  const double c_unit = fit_lawler_constant(radii, starts);
  CHECK(std::isfinite(c_unit));
  CHECK(c_unit >= 0.0);

  const std::vector<LatticePoint> more{{1, 0}, {2, 0}, {4, 0}, {8, 0}};
  const double c_all = fit_lawler_constant(radii, more);
  const double c_sub = fit_lawler_constant(std::vector<std::int64_t>{32, 64}, std::vector<LatticePoint>{{2, 0}, {8, 0}});
  CHECK(c_sub <= c_all);
  CHECK(c_unit <= c_all);
}

}  // TEST_SUITE
