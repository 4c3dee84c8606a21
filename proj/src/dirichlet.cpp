#include "dynwalk/dirichlet.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dynwalk {

namespace {

constexpr std::size_t kDirectLimit = 100000;

bool inside(std::int64_t a, std::int64_t b, std::int64_t n) { return a * a + b * b < n * n; }

void check_radius(std::int64_t n) {
  if (n < 1) throw std::invalid_argument("disc radius must be at least 1");
}

// Full-disc sparse solve. Does not use the reflection symmetry, so it also
// serves as the oracle for the multigrid path.
HittingField solve_direct(std::int64_t n) {
  const std::int64_t side = 2 * n + 1;
  std::vector<std::int64_t> index(static_cast<std::size_t>(side * side), -1);
  auto slot = [&](std::int64_t a, std::int64_t b) {
    return static_cast<std::size_t>((a + n) * side + (b + n));
  };
  std::int64_t count = 0;
  for (std::int64_t a = -n; a <= n; ++a)
    for (std::int64_t b = -n; b <= n; ++b)
      if (inside(a, b, n) && !(a == 0 && b == 0)) index[slot(a, b)] = count++;

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(count) * 5);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(count);
  const std::int64_t da[4] = {1, -1, 0, 0};
  const std::int64_t db[4] = {0, 0, 1, -1};
  for (std::int64_t a = -n; a <= n; ++a)
    for (std::int64_t b = -n; b <= n; ++b) {
      const auto row = index[slot(a, b)];
      if (row < 0) continue;
      triplets.emplace_back(row, row, 1.0);
      for (int d = 0; d < 4; ++d) {
        const std::int64_t na = a + da[d], nb = b + db[d];
        if (na == 0 && nb == 0) {
          rhs[row] += 0.25;
        } else if (inside(na, nb, n)) {
          triplets.emplace_back(row, index[slot(na, nb)], -0.25);
        }
      }
    }
  Eigen::SparseMatrix<double> a_mat(count, count);
  a_mat.setFromTriplets(triplets.begin(), triplets.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(a_mat);
  if (ldlt.info() != Eigen::Success) throw std::runtime_error("Dirichlet factorisation failed");
  const Eigen::VectorXd h = ldlt.solve(rhs);

  auto value = [&](std::int64_t a, std::int64_t b) {
    if (a == 0 && b == 0) return 1.0;
    if (!inside(a, b, n)) return 0.0;
    return h[index[slot(a, b)]];
  };
  double residual = 0.0;
  for (std::int64_t a = -n; a <= n; ++a)
    for (std::int64_t b = -n; b <= n; ++b) {
      if (index[slot(a, b)] < 0) continue;
      const double avg = 0.25 * (value(a + 1, b) + value(a - 1, b) + value(a, b + 1) + value(a, b - 1));
      residual = std::max(residual, std::abs(value(a, b) - avg));
    }

  std::vector<double> quadrant(static_cast<std::size_t>((n + 1) * (n + 1)));
  for (std::int64_t a = 0; a <= n; ++a)
    for (std::int64_t b = 0; b <= n; ++b) quadrant[static_cast<std::size_t>(a * (n + 1) + b)] = value(a, b);
  return {n, std::move(quadrant), residual, static_cast<std::size_t>(count), DirichletMethod::Direct, 1};
}

// Geometric multigrid on the first quadrant, with mirror ghosts across both
// axes. Vertex-centred coarsening (coarse I <-> fine 2I), full-weighting
// restriction, bilinear prolongation, red-black Gauss-Seidel smoothing. Each
// level solves u - mean(neighbours) = f on its unknown mask; Dirichlet points
// hold fixed values (only the finest level has non-zero ones).
class Multigrid {
 public:
  explicit Multigrid(std::int64_t n) {
    std::size_t dim = static_cast<std::size_t>(n) + 1;
    Level fine(dim);
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) {
        const auto a = static_cast<std::int64_t>(i), b = static_cast<std::int64_t>(j);
        fine.mask[fine.at(i, j)] = inside(a, b, n) && !(i == 0 && j == 0);
      }
    fine.u[0] = 1.0;  // h(origin)
    levels_.push_back(std::move(fine));
    while (levels_.back().dim > 4) {
      const Level& f = levels_.back();
      Level c(f.dim / 2 + 1);
      for (std::size_t i = 0; i < c.dim; ++i)
        for (std::size_t j = 0; j < c.dim; ++j) {
          const std::size_t fi = 2 * i, fj = 2 * j;
          c.mask[c.at(i, j)] = fi < f.dim && fj < f.dim && f.mask[f.at(fi, fj)];
        }
      levels_.push_back(std::move(c));
    }
  }

  int solve(double target, int max_cycles) {
    for (int cycle = 1; cycle <= max_cycles; ++cycle) {
      vcycle(0);
      if (max_residual(levels_[0]) < target) return cycle;
    }
    return -1;
  }

  double residual() const { return max_residual(levels_[0]); }

  std::size_t unknowns() const {
    return static_cast<std::size_t>(std::count(levels_[0].mask.begin(), levels_[0].mask.end(), 1));
  }

  std::vector<double> take_solution() { return std::move(levels_[0].u); }

 private:
  struct Level {
    explicit Level(std::size_t d) : dim(d), mask(d * d, 0), u(d * d, 0.0), f(d * d, 0.0), r(d * d, 0.0) {}
    std::size_t at(std::size_t i, std::size_t j) const { return i * dim + j; }
    std::size_t dim;
    std::vector<std::uint8_t> mask;
    std::vector<double> u, f, r;
  };

  // mean of the 4 neighbours, reflecting index -1 onto 1
  static double neighbour_mean(const Level& l, std::size_t i, std::size_t j) {
    const std::size_t im = i == 0 ? 1 : i - 1;
    const std::size_t jm = j == 0 ? 1 : j - 1;
    const double* u = l.u.data();
    return 0.25 * (u[(i + 1) * l.dim + j] + u[im * l.dim + j] + u[i * l.dim + j + 1] + u[i * l.dim + jm]);
  }

  static void smooth(Level& l, int sweeps, bool reverse) {
    const auto dim = static_cast<long long>(l.dim);
    for (int s = 0; s < sweeps; ++s)
      for (int pass = 0; pass < 2; ++pass) {
        const long long color = reverse ? 1 - pass : pass;
#pragma omp parallel for schedule(static)
        for (long long i = 0; i < dim - 1; ++i) {
          const auto ui = static_cast<std::size_t>(i);
          for (std::size_t j = static_cast<std::size_t>((i + color) % 2); j + 1 < l.dim; j += 2) {
            const std::size_t idx = ui * l.dim + j;
            if (l.mask[idx]) l.u[idx] = neighbour_mean(l, ui, j) + l.f[idx];
          }
        }
      }
  }

  static void compute_residual(Level& l) {
    const auto dim = static_cast<long long>(l.dim);
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < dim; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      for (std::size_t j = 0; j < l.dim; ++j) {
        const std::size_t idx = ui * l.dim + j;
        l.r[idx] = l.mask[idx] ? l.f[idx] - (l.u[idx] - neighbour_mean(l, ui, j)) : 0.0;
      }
    }
  }

  static double max_residual(const Level& l) {
    double worst = 0.0;
    const auto dim = static_cast<long long>(l.dim);
#pragma omp parallel for schedule(static) reduction(max : worst)
    for (long long i = 0; i < dim; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      for (std::size_t j = 0; j < l.dim; ++j) {
        const std::size_t idx = ui * l.dim + j;
        if (l.mask[idx]) worst = std::max(worst, std::abs(l.f[idx] - (l.u[idx] - neighbour_mean(l, ui, j))));
      }
    }
    return worst;
  }

  static void restrict_residual(const Level& f, Level& c) {
    auto r = [&](long long i, long long j) {
      if (i < 0) i = -i;
      if (j < 0) j = -j;
      if (i >= static_cast<long long>(f.dim) || j >= static_cast<long long>(f.dim)) return 0.0;
      return f.r[static_cast<std::size_t>(i) * f.dim + static_cast<std::size_t>(j)];
    };
    const auto cdim = static_cast<long long>(c.dim);
#pragma omp parallel for schedule(static)
    for (long long ci = 0; ci < cdim; ++ci)
      for (long long cj = 0; cj < cdim; ++cj) {
        const std::size_t idx = static_cast<std::size_t>(ci) * c.dim + static_cast<std::size_t>(cj);
        c.u[idx] = 0.0;
        if (!c.mask[idx]) {
          c.f[idx] = 0.0;
          continue;
        }
        const long long i = 2 * ci, j = 2 * cj;
        const double fw = 4.0 * r(i, j) + 2.0 * (r(i + 1, j) + r(i - 1, j) + r(i, j + 1) + r(i, j - 1)) +
                          (r(i + 1, j + 1) + r(i + 1, j - 1) + r(i - 1, j + 1) + r(i - 1, j - 1));
        // coarse operator has twice the spacing: scale by 4
        c.f[idx] = 4.0 * fw / 16.0;
      }
  }

  static void prolong_add(const Level& c, Level& f) {
    const auto fdim = static_cast<long long>(f.dim);
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < fdim; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      const std::size_t i0 = ui / 2, i1 = (ui + 1) / 2;
      for (std::size_t j = 0; j < f.dim; ++j) {
        const std::size_t idx = ui * f.dim + j;
        if (!f.mask[idx]) continue;
        const std::size_t j0 = j / 2, j1 = (j + 1) / 2;
        f.u[idx] += 0.25 * (c.u[c.at(i0, j0)] + c.u[c.at(i0, j1)] + c.u[c.at(i1, j0)] + c.u[c.at(i1, j1)]);
      }
    }
  }

  void vcycle(std::size_t level) {
    Level& l = levels_[level];
    if (level + 1 == levels_.size()) {
      smooth(l, 200, false);
      return;
    }
    smooth(l, 2, false);
    compute_residual(l);
    restrict_residual(l, levels_[level + 1]);
    vcycle(level + 1);
    prolong_add(levels_[level + 1], l);
    smooth(l, 2, true);
  }

  std::vector<Level> levels_;
};

}  // namespace

HittingField::HittingField(std::int64_t radius, std::vector<double> quadrant, double max_residual,
                           std::size_t unknowns, DirichletMethod method, int iterations)
    : radius_(radius),
      quadrant_(std::move(quadrant)),
      max_residual_(max_residual),
      unknowns_(unknowns),
      method_(method),
      iterations_(iterations) {}

double HittingField::at(const LatticePoint& y) const {
  const std::int64_t a = std::abs(y.x1), b = std::abs(y.x2);
  if (a == 0 && b == 0) return 1.0;
  if (!inside(a, b, radius_)) return 0.0;
  return quadrant_[static_cast<std::size_t>(a * (radius_ + 1) + b)];
}

std::size_t disc_unknowns(std::int64_t n) {
  check_radius(n);
  std::size_t count = 0;
  for (std::int64_t a = -n; a <= n; ++a) {
    // points with a^2 + b^2 < n^2
    const std::int64_t rest = n * n - a * a;
    if (rest <= 0) continue;
    auto b = static_cast<std::int64_t>(std::sqrt(static_cast<double>(rest)));
    while (b * b >= rest) --b;
    while ((b + 1) * (b + 1) < rest) ++b;
    count += static_cast<std::size_t>(2 * b + 1);
  }
  return count - 1;  // origin is pinned
}

HittingField solve_hitting_field(std::int64_t n, DirichletMethod method, double residual_target) {
  check_radius(n);
  if (method == DirichletMethod::Auto)
    method = disc_unknowns(n) < kDirectLimit ? DirichletMethod::Direct : DirichletMethod::Multigrid;
  if (method == DirichletMethod::Direct) return solve_direct(n);

  Multigrid mg(n);
  const int cycles = mg.solve(residual_target, 200);
  const double residual = mg.residual();
  if (cycles < 0)
    throw std::runtime_error("multigrid did not reach residual target (residual " +
                             std::to_string(residual) + ")");
  const std::size_t unknowns = mg.unknowns() ;
  return {n, mg.take_solution(), residual, unknowns, DirichletMethod::Multigrid, cycles};
}

double hitting_prob_exact(std::int64_t n, const LatticePoint& x) {
  check_radius(n);
  if (x.is_origin()) throw std::invalid_argument("start at origin");
  if (x.norm2() >= n * n) throw std::invalid_argument("start outside the disc (|x| >= n)");
  return solve_hitting_field(n).at(x);
}

}  // namespace dynwalk
