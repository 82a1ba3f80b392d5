#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "oho/operad.hpp"

using namespace oho;

namespace {

// Brute-force oracle for f ∘_i g: loop over every output multi-index and
// contract the inserted slot by hand.
MultiOp compose_oracle(const MultiOp& f, const MultiOp& g, int i)
{
  const int n = f.degree(), m = g.degree(), d = f.dim();
  const int deg = n + m - 1;
  MultiOp out(deg, d);
  const int sign = ((i * (m - 1)) % 2 == 0) ? 1 : -1;
  std::vector<int> idx(static_cast<std::size_t>(deg + 1), 0);
  for (std::size_t flat = 0; flat < out.size(); ++flat) {
    std::size_t rem = flat;
    for (int k = deg; k >= 0; --k) {
      idx[static_cast<std::size_t>(k)] = static_cast<int>(rem % static_cast<std::size_t>(d));
      rem /= static_cast<std::size_t>(d);
    }
    double acc = 0.0;
    for (int s = 0; s < d; ++s) {
      std::vector<int> fi{idx[0]};
      for (int a = 0; a < n; ++a) {
        if (a < i)
          fi.push_back(idx[static_cast<std::size_t>(a + 1)]);
        else if (a == i)
          fi.push_back(s);
        else
          fi.push_back(idx[static_cast<std::size_t>(a + m)]);
      }
      std::vector<int> gi{s};
      for (int b = 0; b < m; ++b)
        gi.push_back(idx[static_cast<std::size_t>(i + b + 1)]);
      acc += f(fi) * g(gi);
    }
    out.coeffs()[flat] = sign * acc;
  }
  return out;
}

MultiOp random_int_op(std::mt19937_64& rng, int degree, int dim)
{
  std::uniform_int_distribution<int> u(-3, 3);
  MultiOp f(degree, dim);
  for (double& c : f.coeffs())
    c = u(rng);
  return f;
}

MultiOp random_real_op(std::mt19937_64& rng, int degree, int dim)
{
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  MultiOp f(degree, dim);
  for (double& c : f.coeffs())
    c = u(rng);
  return f;
}

double max_diff(const MultiOp& a, const MultiOp& b) { return (a - b).max_abs(); }

} // namespace

TEST_CASE("construction and indexing")
{
  MultiOp f(2, 3);
  CHECK(f.size() == 27);
  CHECK(f.reduced_degree() == 1);
  f({2, 0, 1}) = 1.0;
  CHECK(f({2, 0, 1}) == 1.0);
  const auto idx = f.unflatten(f.flat(std::vector<int>{2, 0, 1}));
  CHECK(idx == std::vector<int>{2, 0, 1});
  CHECK_THROWS_AS(MultiOp(0, 3), std::invalid_argument);
  CHECK_THROWS_AS(MultiOp(2, 2, {1.0, 2.0}), std::invalid_argument);
  CHECK_THROWS_AS(MultiOp(1, 1, {std::nan("")}), std::invalid_argument);
}

TEST_CASE("dump lists nonzero entries 1-based in lexicographic order")
{
  MultiOp f(2, 2);
  f({1, 0, 1}) = 0.5;
  f({0, 1, 0}) = -2.0;
  CHECK(f.dump() == "1 2 1 -2\n2 1 2 0.5\n");
}

TEST_CASE("partial composition matches the index-loop oracle")
{
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const int d = 1 + trial % 3;
    const int n = 1 + (trial / 3) % 3;
    const int m = 1 + (trial / 9) % 3;
    const MultiOp f = random_int_op(rng, n, d);
    const MultiOp g = random_int_op(rng, m, d);
    for (int i = 0; i < n; ++i) {
      const MultiOp c = partial_compose(f, g, i);
      CHECK(c.degree() == n + m - 1);
      CHECK(c == compose_oracle(f, g, i));
    }
  }
}

TEST_CASE("composition errors")
{
  const MultiOp f(2, 2), g(1, 3);
  CHECK_THROWS_AS(partial_compose(f, g, 0), std::invalid_argument);
  CHECK_THROWS_AS(partial_compose(f, MultiOp(1, 2), 2), std::invalid_argument);
  CHECK_THROWS_AS(partial_compose(f, MultiOp(1, 2), -1), std::invalid_argument);
}

TEST_CASE("identity is a unit for composition")
{
  std::mt19937_64 rng(11);
  const MultiOp f = random_int_op(rng, 2, 3);
  const MultiOp id = MultiOp::identity(3);
  CHECK(partial_compose(f, id, 0) == f);
  CHECK(partial_compose(f, id, 1) == f);
  CHECK(partial_compose(id, f, 0) == f);
}

TEST_CASE("degree-1 bracket is the matrix commutator")
{
  std::mt19937_64 rng(3);
  const MultiOp f = random_int_op(rng, 1, 3);
  const MultiOp g = random_int_op(rng, 1, 3);
  const Eigen::MatrixXd F = f.to_matrix(), G = g.to_matrix();
  CHECK(gerstenhaber(f, g) == MultiOp::from_matrix(F * G - G * F));
}

TEST_CASE("[f,f] = 2 f∘f for odd reduced degree")
{
  MultiOp f(2, 2);
  f({0, 0, 1}) = 1.0;
  f({1, 1, 0}) = 1.0;
  const MultiOp ff = gerstenhaber(f, f);
  CHECK(ff == 2.0 * total_compose(f, f));
  CHECK(ff.max_abs() > 0.0);
}

TEST_CASE("bracket of a degree-1 and a degree-2 operation")
{
  std::mt19937_64 rng(5);
  const MultiOp M = random_int_op(rng, 1, 3);
  const MultiOp mu = random_int_op(rng, 2, 3);
  const MultiOp b = gerstenhaber(M, mu);
  MultiOp expected(2, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        double v = 0.0;
        for (int s = 0; s < 3; ++s)
          v += M({i, s}) * mu({s, j, k}) - mu({i, s, k}) * M({s, j}) - mu({i, j, s}) * M({s, k});
        expected({i, j, k}) = v;
      }
  CHECK(b == expected);
}

TEST_CASE("graded antisymmetry and Jacobi identity, integer coefficients")
{
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> ud(1, 3), ug(1, 3);
  for (int trial = 0; trial < 60; ++trial) {
    const int d = ud(rng);
    const MultiOp f = random_int_op(rng, ug(rng), d);
    const MultiOp g = random_int_op(rng, ug(rng), d);
    const MultiOp h = random_int_op(rng, ug(rng), d);
    const int F = f.reduced_degree(), G = g.reduced_degree(), H = h.reduced_degree();

    CHECK((gerstenhaber(f, g) + parity_sign(F * G) * gerstenhaber(g, f)).max_abs() == 0.0);

    const MultiOp jac = parity_sign(F * H) * gerstenhaber(f, gerstenhaber(g, h)) +
                        parity_sign(G * F) * gerstenhaber(g, gerstenhaber(h, f)) +
                        parity_sign(H * G) * gerstenhaber(h, gerstenhaber(f, g));
    CHECK(jac.max_abs() == 0.0);
  }
}

TEST_CASE("graded Jacobi identity, real coefficients")
{
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    const int d = 1 + trial % 3;
    const MultiOp f = random_real_op(rng, 1 + trial % 3, d);
    const MultiOp g = random_real_op(rng, 1 + (trial / 3) % 3, d);
    const MultiOp h = random_real_op(rng, 1 + (trial / 9) % 3, d);
    const int F = f.reduced_degree(), G = g.reduced_degree(), H = h.reduced_degree();
    const MultiOp jac = parity_sign(F * H) * gerstenhaber(f, gerstenhaber(g, h)) +
                        parity_sign(G * F) * gerstenhaber(g, gerstenhaber(h, f)) +
                        parity_sign(H * G) * gerstenhaber(h, gerstenhaber(f, g));
    CHECK(jac.max_abs() < 1e-12);
  }
}

TEST_CASE("apply")
{
  const MultiOp id = MultiOp::identity(3);
  const Eigen::VectorXd v = Eigen::Vector3d(1.0, -2.0, 0.5);
  CHECK((apply(id, {v}) - v).norm() == 0.0);

  MultiOp f(2, 3);
  f({2, 0, 1}) = 1.0;
  const Eigen::VectorXd r = apply(f, {Eigen::Vector3d::UnitX(), Eigen::Vector3d::UnitY()});
  CHECK(r == Eigen::VectorXd(Eigen::Vector3d::UnitZ()));

  CHECK_THROWS_AS(apply(f, {v}), std::invalid_argument);
  CHECK_THROWS_AS(apply(f, {v, Eigen::VectorXd::Zero(2)}), std::invalid_argument);
}

TEST_CASE("apply matches a nested-loop evaluation and is multilinear")
{
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const MultiOp f = random_real_op(rng, 2, 3);
  auto rv = [&] { return Eigen::VectorXd(Eigen::Vector3d(u(rng), u(rng), u(rng))); };
  const Eigen::VectorXd x = rv(), y = rv(), w = rv();

  Eigen::VectorXd oracle = Eigen::VectorXd::Zero(3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        oracle(i) += f({i, j, k}) * x(j) * y(k);
  CHECK((apply(f, {x, y}) - oracle).cwiseAbs().maxCoeff() < 1e-14);

  const double al = 0.7, be = -1.3;
  const Eigen::VectorXd lhs = apply(f, {x, al * y + be * w});
  const Eigen::VectorXd rhs = al * apply(f, {x, y}) + be * apply(f, {x, w});
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("arithmetic shape checks")
{
  MultiOp a(1, 2), b(2, 2);
  CHECK_THROWS_AS(a += b, std::invalid_argument);
  CHECK(max_diff(a, MultiOp(1, 2)) == 0.0);
}
