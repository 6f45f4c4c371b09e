#include <random>

#include <Eigen/Dense>

#include "catch_amalgamated.hpp"

#include "divcurl/errors.hpp"
#include "divcurl/generators.hpp"
#include "divcurl/linsolve.hpp"
#include "divcurl/whitney.hpp"

using namespace divcurl;

namespace {

Eigen::MatrixXd dense(const SparseMatrix& a) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(a.rows(), a.cols());
  for (const auto& t : a.triplets()) d(t.row, t.col) += t.value;
  return d;
}

Vector random_vector(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vector v(n);
  for (double& x : v) x = u(rng);
  return v;
}

double rel_diff(const Vector& a, const Eigen::VectorXd& b) {
  const Eigen::Map<const Eigen::VectorXd> av(a.data(), static_cast<Eigen::Index>(a.size()));
  return (av - b).norm() / b.norm();
}

}  // namespace

TEST_CASE("sparse algebra agrees with dense", "[linsolve]") {
  const Mesh m = generate_cube(2);
  const auto g = incidence(m, Incidence::grad);
  const auto mass = mass_matrix(m, FormDegree::NED);
  const Eigen::MatrixXd prod = dense(g.transpose() * mass * g);
  const Eigen::MatrixXd ref = dense(g).transpose() * dense(mass) * dense(g);
  CHECK((prod - ref).norm() <= 1e-13 * ref.norm());
  const Vector x = random_vector(g.cols(), 1);
  const Vector y = g * x;
  const Eigen::VectorXd yd = dense(g) * Eigen::Map<const Eigen::VectorXd>(x.data(), x.size());
  CHECK(rel_diff(y, yd) < 1e-14);
  const auto sel = g.select(std::vector<int>{0, 3, 5}, std::vector<int>{1, 2});
  CHECK(sel.rows() == 3);
  CHECK(sel.cols() == 2);
  CHECK(sel.at(1, 0) == g.at(3, 1));
}

TEST_CASE("CG matches a dense Cholesky solve", "[linsolve]") {
  const Mesh m = generate_cube(3);
  const auto a = stiffness_matrix(m) + mass_matrix(m, FormDegree::P1);
  const Vector b = random_vector(a.rows(), 2);
  SolverConfig cfg;
  cfg.rel_tol = 1e-12;
  const auto r = cg_solve(a, b, cfg);
  CHECK(r.stats.converged);
  const Eigen::VectorXd ref = dense(a).llt().solve(Eigen::Map<const Eigen::VectorXd>(b.data(), b.size()));
  CHECK(rel_diff(r.x, ref) < 1e-9);
}

TEST_CASE("CG with a nullspace returns the minimum-norm solution", "[linsolve]") {
  const Mesh m = generate_cube(3);
  const auto k = stiffness_matrix(m);
  const std::size_t n = k.rows();
  Vector ones(n, 1.0 / std::sqrt(static_cast<double>(n)));
  Vector b = random_vector(n, 3);
  const auto r = cg_solve(k, b, SolverConfig{.rel_tol = 1e-12}, {ones});
  CHECK(r.stats.converged);
  // Oracle: pseudo-inverse through a complete orthogonal decomposition.
  const Eigen::Map<const Eigen::VectorXd> bv(b.data(), n);
  const Eigen::VectorXd ones_v = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
  const Eigen::VectorXd bp = bv - ones_v * ones_v.dot(bv);
  const Eigen::VectorXd ref = dense(k).completeOrthogonalDecomposition().solve(bp);
  CHECK(rel_diff(r.x, ref) < 1e-8);
  CHECK(std::abs(vec::dot(r.x, ones)) < 1e-10);
}

TEST_CASE("matrix-free CG and MINRES", "[linsolve]") {
  const Mesh m = generate_cube(2);
  const auto a = mass_matrix(m, FormDegree::RT) + incidence(m, Incidence::div).transpose() * incidence(m, Incidence::div);
  const std::size_t n = a.rows();
  const LinearOperator op = [&](std::span<const double> x, std::span<double> y) { a.multiply(x, y); };
  const Vector b = random_vector(n, 4);
  const Vector inv = safe_inverse_diagonal(a.diagonal_entries());
  const SolverConfig cfg{.rel_tol = 1e-12};
  const Eigen::VectorXd ref = dense(a).llt().solve(Eigen::Map<const Eigen::VectorXd>(b.data(), n));
  CHECK(rel_diff(cg_solve(op, n, b, inv, cfg).x, ref) < 1e-9);
  const auto mr = minres(op, n, b, inv, cfg);
  CHECK(mr.stats.converged);
  CHECK(rel_diff(mr.x, ref) < 1e-9);
}

TEST_CASE("saddle solve matches a dense KKT solve", "[linsolve]") {
  // Mixed Poisson: RT mass and divergence constraint with a boundary row removed.
  const Mesh m = generate_cube(2);
  const auto a = mass_matrix(m, FormDegree::RT);
  auto d = incidence(m, Incidence::div);
  std::vector<int> rows;
  for (int t = 1; t < m.num_tets(); ++t) rows.push_back(t);
  const auto b = d.select_rows(rows);
  const Vector f = random_vector(a.rows(), 5);
  const Vector g = random_vector(b.rows(), 6);
  SolverConfig cfg;
  cfg.rel_tol = 1e-12;
  const auto r = minres_saddle(a, b, f, g, cfg);
  CHECK(r.stats.converged);

  const Eigen::Index na = a.rows(), nb = b.rows();
  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(na + nb, na + nb);
  kkt.topLeftCorner(na, na) = dense(a);
  kkt.topRightCorner(na, nb) = dense(b).transpose();
  kkt.bottomLeftCorner(nb, na) = dense(b);
  Eigen::VectorXd rhs(na + nb);
  rhs << Eigen::Map<const Eigen::VectorXd>(f.data(), na), Eigen::Map<const Eigen::VectorXd>(g.data(), nb);
  const Eigen::VectorXd sol = kkt.fullPivLu().solve(rhs);
  CHECK(rel_diff(r.x, sol.head(na)) < 1e-8);
  CHECK(rel_diff(r.mult, sol.tail(nb)) < 1e-7);
}

TEST_CASE("solver failures raise", "[linsolve]") {
  const Mesh m = generate_cube(3);
  const auto a = stiffness_matrix(m) + mass_matrix(m, FormDegree::P1);
  const Vector b = random_vector(a.rows(), 7);
  SolverConfig cfg;
  cfg.max_iter = 2;
  cfg.rel_tol = 1e-14;
  CHECK_THROWS_AS(cg_solve(a, b, cfg), SolverError);
  cfg.throw_on_failure = false;
  const auto r = cg_solve(a, b, cfg);
  CHECK_FALSE(r.stats.converged);
  CHECK(r.stats.iterations <= 2);
}

TEST_CASE("solver config validation", "[linsolve]") {
  SolverConfig cfg;
  cfg.rel_tol = -1.0;
  CHECK_THROWS(cfg.validate());
  CHECK(SolverConfig{}.iteration_cap(10) == 100);
}
