#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "eigen_oracle.hpp"
#include "oracles.hpp"
#include "pacconf/error.hpp"
#include "pacconf/matrix.hpp"

using namespace pacconf;

TEST_CASE("construction rejects non-finite entries and bad shapes") {
  CHECK_THROWS_AS(SquareMatrix(2, {0.0, 1.0, std::nan(""), 0.0}), DataError);
  CHECK_THROWS_AS(SquareMatrix(2, {0.0, std::numeric_limits<double>::infinity(), 0.0, 0.0}), DataError);
  CHECK_THROWS_AS(SquareMatrix(2, {0.0, 1.0, 2.0}), DataError);
  CHECK_THROWS_AS(SquareMatrix(0), DataError);
  CHECK_THROWS_AS(SquareMatrix::from_rows({{1.0, 2.0}, {3.0}}), DataError);
}

TEST_CASE("symmetric matrices must be exactly symmetric") {
  CHECK_THROWS_AS(SymmetricMatrix(SquareMatrix::from_rows({{1.0, 2.0}, {2.0000001, 1.0}})), DataError);
  const auto s = SymmetricMatrix::from_upper(SquareMatrix::from_rows({{1.0, 2.0}, {7.0, 3.0}}));
  CHECK(s(1, 0) == 2.0);
}

TEST_CASE("dilate places C and its transpose off the diagonal") {
  SUBCASE("order one zero") {
    const auto d = dilate(SquareMatrix(1));
    CHECK(d.order() == 2);
    for (double v : d.matrix().entries()) CHECK(v == 0.0);
  }
  SUBCASE("single entry") {
    const auto d = dilate(SquareMatrix::from_rows({{0, 1}, {0, 0}}));
    for (std::size_t r = 0; r < 4; ++r)
      for (std::size_t c = 0; c < 4; ++c) {
        const bool hot = (r == 0 && c == 3) || (r == 3 && c == 0);
        CHECK(d(r, c) == (hot ? 1.0 : 0.0));
      }
  }
  SUBCASE("identity") {
    const auto d = dilate(SquareMatrix::identity(2));
    const auto expected =
        SquareMatrix::from_rows({{0, 0, 1, 0}, {0, 0, 0, 1}, {1, 0, 0, 0}, {0, 1, 0, 0}});
    CHECK(d.matrix() == expected);
  }
}

TEST_CASE("max eigenvalue of symmetric matrices") {
  CHECK(max_eigenvalue_symmetric(SymmetricMatrix(SquareMatrix::from_rows({{1, 0, 0}, {0, 3, 0}, {0, 0, 2}}))) ==
        doctest::Approx(3.0).epsilon(1e-15));
  CHECK(max_eigenvalue_symmetric(SymmetricMatrix(SquareMatrix::from_rows({{0, 1}, {1, 0}}))) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(max_eigenvalue_symmetric(SymmetricMatrix(SquareMatrix(4))) == 0.0);
  // Negative definite: the largest algebraic eigenvalue, not the largest magnitude.
  CHECK(max_eigenvalue_symmetric(SymmetricMatrix(SquareMatrix::from_rows({{-5, 0}, {0, -1}}))) ==
        doctest::Approx(-1.0));
}

TEST_CASE("Jacobi reports non-convergence with the residual") {
  const auto a = SymmetricMatrix(SquareMatrix::from_rows({{1, 2, 3}, {2, 4, 5}, {3, 5, 6}}));
  try {
    symmetric_eigenvalues(a, JacobiOptions{1e-13, 0});
    FAIL("expected NumericalError");
  } catch (const NumericalError& e) {
    CHECK(e.residual() > 0.0);
  }
}

TEST_CASE("operator norm examples") {
  CHECK(operator_norm(SquareMatrix(5)) == 0.0);
  CHECK(operator_norm(-2.5 * SquareMatrix::identity(4)) == doctest::Approx(2.5).epsilon(1e-14));
  const auto anti = SquareMatrix::from_rows({{0, 0.3}, {0.4, 0}});
  CHECK(operator_norm(anti) == doctest::Approx(0.4).epsilon(1e-14));
  CHECK(oracle::closed_form_norm(anti) == doctest::Approx(0.4).epsilon(1e-14));
}

TEST_CASE("operator norm matches independent oracles") {
  std::mt19937_64 gen(11);
  for (std::size_t n : {2u, 3u}) {
    for (int k = 0; k < 300; ++k) {
      const auto c = oracle::random_matrix(n, gen);
      const double norm = operator_norm(c);
      CHECK(std::abs(norm - oracle::closed_form_norm(c)) <= 1e-8);
    }
  }
  for (std::size_t n : {1u, 4u, 7u, 10u}) {
    for (int k = 0; k < 100; ++k) {
      const auto c = oracle::random_matrix(n, gen);
      const double norm = operator_norm(c);
      CHECK(std::abs(norm - oracle::power_norm(c)) <= 1e-10 * std::max(1.0, norm));
      CHECK(std::abs(norm - oracle::eigen_svd_norm(c)) <= 1e-10 * std::max(1.0, norm));
    }
  }
}

TEST_CASE("spectral preservation against power iteration") {
  std::mt19937_64 gen(5);
  for (int k = 0; k < 200; ++k) {
    const auto c = oracle::random_matrix(1 + k % 8, gen, -3.0, 3.0);
    const double via_dilation = max_eigenvalue_symmetric(dilate(c));
    CHECK(std::abs(operator_norm(c) - via_dilation) <= 1e-10);
    CHECK(std::abs(via_dilation - oracle::power_norm(c)) <= 1e-10 * std::max(1.0, via_dilation));
  }
}

TEST_CASE("norm properties") {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> scale(-10.0, 10.0);
  std::uniform_real_distribution<double> bump(0.0, 0.5);
  for (int k = 0; k < 300; ++k) {
    const std::size_t n = 2 + k % 6;
    const auto c = oracle::random_matrix(n, gen);
    const auto d = oracle::random_matrix(n, gen);

    const double a = scale(gen);
    CHECK(std::abs(operator_norm(a * c) - std::abs(a) * operator_norm(c)) <= 1e-9 * (1 + std::abs(a)));

    const double nc = operator_norm(c), nd = operator_norm(d), diff = operator_norm(c - d);
    CHECK(std::abs(nc - nd) <= diff + 1e-9);
    CHECK(diff <= nc + nd + 1e-9);

    // 0 <= C <= D elementwise.
    const auto pos = oracle::random_matrix(n, gen, 0.0, 1.0);
    std::vector<double> up(pos.entries().begin(), pos.entries().end());
    for (double& v : up) v += bump(gen);
    CHECK(operator_norm(pos) <= operator_norm(SquareMatrix(n, up)) + 1e-10);

    CHECK(operator_norm(c.transpose()) == doctest::Approx(nc).epsilon(1e-12));
  }
}

TEST_CASE("eigenvalues of a dilation come in +- pairs") {
  std::mt19937_64 gen(23);
  const auto c = oracle::random_matrix(4, gen);
  const auto eig = symmetric_eigenvalues(dilate(c));
  REQUIRE(eig.size() == 8);
  for (std::size_t i = 0; i < 4; ++i) CHECK(eig[i] == doctest::Approx(-eig[7 - i]).epsilon(1e-12));
}
