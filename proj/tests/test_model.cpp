#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "l1pr/errors.hpp"
#include "l1pr/model.hpp"
#include "l1pr/oracle.hpp"
#include "support/fixtures.hpp"

using namespace l1pr;
using namespace l1pr::testing;

namespace {

SparseVector random_sparse(const Graph& g, std::mt19937_64& rng, double density, double lo,
                           double hi) {
  std::bernoulli_distribution keep(density);
  std::uniform_real_distribution<double> val(lo, hi);
  SparseVector v;
  for (NodeId i = 0; i < g.node_count(); ++i)
    if (keep(rng)) v.set(i, val(rng));
  return v;
}

double dot(const SparseVector& a, const SparseVector& b) {
  double acc = 0.0;
  a.for_each([&](NodeId i, double x) { acc += x * b.get(i); });
  return acc;
}

SparseVector minus(const SparseVector& a, const SparseVector& b) {
  SparseVector out;
  a.for_each([&](NodeId i, double x) { out.add(i, x); });
  b.for_each([&](NodeId i, double x) { out.add(i, -x); });
  return out;
}

double norm2(const SparseVector& v) { return std::sqrt(dot(v, v)); }

}  // namespace

TEST_CASE("sparse vector bookkeeping") {
  SparseVector v;
  v.set(5, 1.0);
  v.set(2, 0.0);
  v.add(9, -2.0);
  v.add(5, 1.0);
  CHECK(v.get(5) == 2.0);
  CHECK(v.get(7) == 0.0);
  CHECK(v.touched_count() == 3);
  CHECK(std::vector<NodeId>(v.touched().begin(), v.touched().end()) == std::vector<NodeId>{5, 2, 9});
  CHECK(v.nnz() == 2);
  CHECK(v.support() == std::vector<NodeId>{5, 9});
  CHECK(v.norm1() == 4.0);
  CHECK(v.norm_inf() == 2.0);
  v.compact();
  CHECK(std::vector<NodeId>(v.touched().begin(), v.touched().end()) == std::vector<NodeId>{5, 9});
  CHECK_FALSE(v.has(2));
  CHECK(v.get(9) == -2.0);
}

TEST_CASE("seed specs") {
  CHECK(parse_seed_spec("42") == std::vector<std::pair<OriginalId, double>>{{42, 1.0}});
  CHECK(parse_seed_spec(" 3:0.25, 7:0.75 ") ==
        std::vector<std::pair<OriginalId, double>>{{3, 0.25}, {7, 0.75}});
  CHECK_THROWS_AS(parse_seed_spec(""), InvalidInputError);
  CHECK_THROWS_AS(parse_seed_spec("x"), InvalidInputError);
  CHECK_THROWS_AS(parse_seed_spec("1,2"), InvalidInputError);
  CHECK_THROWS_AS(parse_seed_spec("1:0.5,2"), InvalidInputError);
  CHECK_THROWS_AS(parse_seed_spec("1:abc"), InvalidInputError);
}

TEST_CASE("seed distribution validation") {
  const Graph g = barbell();
  CHECK(SeedDistribution::single(g, 3).get(3) == 1.0);
  CHECK(SeedDistribution(g, {{1, 0.5}, {0, 0.5}}).entries().front().first == 0);
  CHECK_THROWS_AS(SeedDistribution(g, {{0, 0.5}}), InvalidInputError);
  CHECK_THROWS_AS(SeedDistribution(g, {{0, 1.5}, {1, -0.5}}), InvalidInputError);
  CHECK_THROWS_AS(SeedDistribution(g, {{0, 0.5}, {0, 0.5}}), InvalidInputError);
  CHECK_THROWS_AS(SeedDistribution::single(g, 6), DomainError);
  CHECK_THROWS_AS(SeedDistribution::from_spec(g, {{77, 1.0}}), DomainError);
  CHECK_NOTHROW(SeedDistribution(g, {{0, 0.3}, {1, 0.7 + 1e-13}}));
}

TEST_CASE("solver parameter ranges") {
  SolverParams p;
  CHECK_NOTHROW(p.validate());
  CHECK(p.alpha == 0.1);
  CHECK(p.rho == 1e-5);
  CHECK(p.epsilon == 0.1);
  for (double a : {0.0, 1.0, -0.1}) {
    SolverParams q;
    q.alpha = a;
    CHECK_THROWS_AS(q.validate(), InvalidInputError);
  }
  SolverParams r;
  r.rho = 0.0;
  CHECK_THROWS_AS(r.validate(), InvalidInputError);
  SolverParams e;
  e.epsilon = 1.0;
  CHECK_THROWS_AS(e.validate(), InvalidInputError);
  e.epsilon = 0.0;
  CHECK_NOTHROW(e.validate());

  const Graph g = barbell();
  const SeedDistribution s(g, {{0, 0.5}, {1, 0.5}});
  SolverParams big;
  big.rho = 0.6;
  CHECK(warn_if_seed_below_rho(s, big));
  big.rho = 0.5;
  CHECK_FALSE(warn_if_seed_below_rho(s, big));
}

TEST_CASE("objective f") {
  const Graph g2 = path2();
  SolverParams params;
  params.alpha = 0.5;
  const SeedDistribution e0 = SeedDistribution::single(g2, 0);
  CHECK(objective_f(g2, params, e0, SparseVector()) == 0.0);
  // Q_00 = (1 + alpha)/2 = 0.75, so f = 0.375 - 0.5.
  const SparseVector q = sparse({{0, 1.0}});
  CHECK(objective_f(g2, params, e0, q) == doctest::Approx(-0.125).epsilon(1e-15));
  CHECK(oracle::objective_f(g2, e0, 0.5, oracle::to_dense(g2, q)) ==
        doctest::Approx(-0.125).epsilon(1e-15));

  const Graph tri = triangle();
  params.alpha = 0.1;
  const SeedDistribution t0 = SeedDistribution::single(tri, 0);
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const SparseVector rq = random_sparse(tri, rng, 0.7, -1.0, 1.0);
    const double dense = oracle::objective_f(tri, t0, 0.1, oracle::to_dense(tri, rq));
    CHECK(std::abs(objective_f(tri, params, t0, rq) - dense) <= 1e-12);
  }
}

TEST_CASE("gradient of f") {
  const Graph g2 = path2();
  SolverParams params;
  params.alpha = 0.5;
  const SeedDistribution e0 = SeedDistribution::single(g2, 0);

  const SparseVector g0 = gradient_f(g2, params, e0, SparseVector());
  CHECK(g0.get(0) == -0.5);
  CHECK(g0.get(1) == 0.0);

  // KKT point of the rho = 0.1 instance: both partials equal -rho*alpha.
  const SparseVector gs = gradient_f(g2, params, e0, sparse({{0, 0.65}, {1, 0.15}}));
  CHECK(gs.get(0) == doctest::Approx(-0.05).epsilon(1e-14));
  CHECK(gs.get(1) == doctest::Approx(-0.05).epsilon(1e-14));

  // Entries are produced only on supp(q), its neighbors and supp(s).
  const Graph bb = barbell();
  const SeedDistribution b0 = SeedDistribution::single(bb, 0);
  const SparseVector gb = gradient_f(bb, params, b0, sparse({{4, 0.2}}));
  std::vector<NodeId> keys(gb.touched().begin(), gb.touched().end());
  std::sort(keys.begin(), keys.end());
  CHECK(keys == std::vector<NodeId>{0, 3, 4, 5});

  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    const Graph g = connected_erdos_renyi(20, rng);
    const SeedDistribution s = SeedDistribution::single(g, random_node(g, rng));
    const SparseVector q = random_sparse(g, rng, 0.3, 0.0, 1.0);
    const SparseVector grad = gradient_f(g, params, s, q);
    const oracle::DenseVector dense = oracle::gradient(g, s, params.alpha, oracle::to_dense(g, q));
    for (NodeId i = 0; i < g.node_count(); ++i) REQUIRE(std::abs(grad.get(i) - dense(i)) <= 1e-14);
  }
}

TEST_CASE("objective psi") {
  const Graph g2 = path2();
  SolverParams params;
  params.alpha = 0.5;
  params.rho = 0.1;
  const SeedDistribution e0 = SeedDistribution::single(g2, 0);
  CHECK(objective_psi(g2, params, e0, SparseVector()) == 0.0);
  // 0.1*0.5*0.8 + f(q*), with f(q*) = 0.5*(0.65*0.45 - 0.15*0.05) - 0.325 = -0.1825.
  const SparseVector qs = sparse({{0, 0.65}, {1, 0.15}});
  const double psi = objective_psi(g2, params, e0, qs);
  CHECK(psi == doctest::Approx(-0.1425).epsilon(1e-14));
  CHECK(std::abs(psi - oracle::objective_psi(g2, e0, params, oracle::to_dense(g2, qs))) <= 1e-12);
}

TEST_CASE("residual and gradient correspondence") {
  const Graph bb = barbell();
  const double alpha = 0.2;
  const SeedDistribution s(bb, {{0, 0.25}, {2, 0.75}});
  SparseVector grad;
  for (const auto& [i, w] : s.entries()) grad.set(i, -alpha * w / bb.sqrt_degree(i));
  const SparseVector r = residual_from_gradient(bb, grad);
  CHECK(r.get(0) == doctest::Approx(-alpha * 0.25).epsilon(1e-15));
  CHECK(r.get(2) == doctest::Approx(-alpha * 0.75).epsilon(1e-15));
  CHECK(residual_from_gradient(bb, SparseVector()).touched_count() == 0);

  std::mt19937_64 rng(4);
  const Graph g = connected_erdos_renyi(40, rng);
  for (int trial = 0; trial < 50; ++trial) {
    const SparseVector v = random_sparse(g, rng, 0.4, -1.0, 1.0);
    CHECK(max_abs_diff(gradient_from_residual(g, residual_from_gradient(g, v)), v) <= 1e-15);
    CHECK(max_abs_diff(residual_from_gradient(g, gradient_from_residual(g, v)), v) <= 1e-15);
  }
}

TEST_CASE("gradient matches central finite differences") {
  std::mt19937_64 rng(6);
  SolverParams params;
  for (int trial = 0; trial < 20; ++trial) {
    const Graph g = connected_erdos_renyi(8 + trial * 2, rng);
    params.alpha = trial % 2 ? 0.1 : 0.5;
    const SeedDistribution s = SeedDistribution::single(g, random_node(g, rng));
    SparseVector q = random_sparse(g, rng, 0.3, 0.0, 1.0);
    const SparseVector grad = gradient_f(g, params, s, q);
    const double h = 1e-6;
    for (NodeId i = 0; i < g.node_count(); ++i) {
      const double base = q.get(i);
      q.set(i, base + h);
      const double up = objective_f(g, params, s, q);
      q.set(i, base - h);
      const double down = objective_f(g, params, s, q);
      q.set(i, base);
      REQUIRE(std::abs((up - down) / (2 * h) - grad.get(i)) <= 1e-5);
    }
  }
}

TEST_CASE("gradient is 1-Lipschitz and f is alpha-strongly convex") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const Graph g = connected_erdos_renyi(30, rng);
    SolverParams params;
    params.alpha = trial % 3 == 0 ? 0.05 : 0.3;
    const SeedDistribution s = SeedDistribution::single(g, random_node(g, rng));
    const SparseVector a = random_sparse(g, rng, 0.5, -1.0, 1.0);
    const SparseVector b = random_sparse(g, rng, 0.5, -1.0, 1.0);
    const SparseVector dg = minus(gradient_f(g, params, s, a), gradient_f(g, params, s, b));
    const SparseVector dx = minus(a, b);
    CHECK(norm2(dg) <= norm2(dx) * (1 + 1e-12));
    CHECK(dot(dx, dg) >= params.alpha * dot(dx, dx) * (1 - 1e-12));
  }
}
