#include <doctest.h>

#include "support.hpp"

using namespace dgtest;

namespace {

// Plain Gauss-Jordan rank over Q, independent of the library's elimination.
std::size_t naive_rank(Matrix m) {
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && m(p, c) == 0) ++p;
    if (p == m.rows()) continue;
    for (std::size_t k = 0; k < m.cols(); ++k) std::swap(m(p, k), m(r, k));
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c) == 0) continue;
      const Scalar f = m(i, c) / m(r, c);
      for (std::size_t k = 0; k < m.cols(); ++k) m(i, k) -= f * m(r, k);
    }
    ++r;
  }
  return r;
}

Matrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols) {
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      if (rng.coin(0.6)) m(r, c) = rng.scalar();
  return m;
}

// Random bounded complex in degrees 0..3: each d_n has rows in the left
// kernel of d_{n-1}, so d^2 = 0 by construction.
std::pair<DegreeDims, std::map<int, SparseMatrix>> random_complex(Rng& rng) {
  DegreeDims dims;
  for (int n = 0; n <= 3; ++n) dims[n] = static_cast<std::size_t>(rng.uniform(0, 4));
  std::map<int, SparseMatrix> ds;
  Matrix prev;
  for (int n = 0; n < 3; ++n) {
    Matrix d(dims[n + 1], dims[n]);
    if (n == 0) {
      d = random_matrix(rng, dims[1], dims[0]);
    } else {
      const auto left = kernel_basis(prev.transpose());
      for (std::size_t r = 0; r < d.rows(); ++r)
        for (const auto& v : left) {
          const Scalar c = rng.uniform(-2, 2);
          for (std::size_t k = 0; k < v.size(); ++k) d(r, k) += c * v[k];
        }
    }
    ds[n] = SparseMatrix::from_dense(d);
    prev = d;
  }
  return {dims, ds};
}

bool in_lattice(const IntMatrix& basis, const std::vector<long>& v) {
  IntMatrix ext(basis.rows() + 1, basis.cols());
  for (std::size_t r = 0; r < basis.rows(); ++r)
    for (std::size_t c = 0; c < basis.cols(); ++c) ext(r, c) = basis(r, c);
  for (std::size_t c = 0; c < v.size(); ++c) ext(basis.rows(), c) = v[c];
  return hermite_rows(ext) == hermite_rows(basis);
}

}  // namespace

TEST_CASE("scalars are exact and reduced") {
  CHECK(format_scalar(parse_scalar("6/4")) == "3/2");
  CHECK(format_scalar(parse_scalar("-4/2")) == "-2");
  CHECK(parse_scalar("1/3") + parse_scalar("2/3") == 1);
  CHECK_THROWS_AS(parse_scalar("1/0"), ValidationError);
  CHECK_THROWS_AS(parse_scalar("abc"), ValidationError);
}

TEST_CASE("cohomology_dims examples") {
  CHECK(cohomology_dims(Cochain()).empty());

  Matrix iso(1, 1);
  iso(0, 0) = 2;
  CHECK(cohomology_dims(Cochain({{0, 1}, {1, 1}}, {{0, SparseMatrix::from_dense(iso)}})).empty());

  Matrix r1(1, 2);
  r1(0, 0) = 1;
  r1(0, 1) = 1;
  // ker is 2 - 1 = 1 dimensional, the map is onto
  const DegreeDims h = cohomology_dims(Cochain({{0, 2}, {1, 1}}, {{0, SparseMatrix::from_dense(r1)}}));
  CHECK(h == DegreeDims{{0, 1}});
}

TEST_CASE("cochains reject d^2 != 0") {
  Matrix one(1, 1);
  one(0, 0) = 1;
  const auto d = SparseMatrix::from_dense(one);
  CHECK_THROWS_AS(Cochain({{0, 1}, {1, 1}, {2, 1}}, {{0, d}, {1, d}}), ValidationError);
}

TEST_CASE("rank agrees with naive elimination on random matrices") {
  Rng rng(11);
  for (int it = 0; it < 300; ++it) {
    const Matrix m = random_matrix(rng, rng.index(6) + 1, rng.index(6) + 1);
    const std::size_t r = naive_rank(m);
    CHECK(rank(m) == r);
    CHECK(rank(SparseMatrix::from_dense(m)) == r);
    CHECK(kernel_basis(m).size() == m.cols() - r);
    for (const auto& v : kernel_basis(m)) CHECK(is_zero(SparseMatrix::from_dense(m).apply(v)));
  }
}

TEST_CASE("cohomology by rank-nullity and Euler characteristic invariance") {
  Rng rng(12);
  for (int it = 0; it < 200; ++it) {
    auto [dims, ds] = random_complex(rng);
    const Cochain c(dims, ds);
    const DegreeDims h = cohomology_dims(c);
    for (int n = 0; n <= 3; ++n) {
      const std::size_t out = ds.count(n) ? naive_rank(ds[n].to_dense()) : 0;
      const std::size_t in = ds.count(n - 1) ? naive_rank(ds[n - 1].to_dense()) : 0;
      const std::size_t expect = dims[n] - out - in;
      CHECK((h.count(n) ? h.at(n) : 0) == expect);
    }
    CHECK(euler_characteristic(h) == c.euler_characteristic());
    for (int n = 0; n <= 3; ++n) CHECK(cohomology_representatives(c, n).size() == (h.count(n) ? h.at(n) : 0));
  }
}

TEST_CASE("saturated_kernel examples") {
  CHECK(saturated_kernel(IntMatrix::identity(3)).rank() == 0);

  const IntLattice k = saturated_kernel(IntMatrix{{1, 1, 1}});
  CHECK(k.rank() == 2);
  CHECK((IntMatrix{{1, 1, 1}} * k.basis.transpose()).is_zero());
  for (const auto& s : smith_diagonal(k.basis)) CHECK(s == 1);
  CHECK(in_lattice(k.basis, {1, -1, 0}));
  CHECK(in_lattice(k.basis, {0, 1, -1}));

  for (long l = 1; l <= 4; ++l) {
    const IntLattice kl = saturated_kernel(IntMatrix{{l, l, 1}});
    CHECK(kl.rank() == 2);
    CHECK(in_lattice(kl.basis, {1, -1, 0}));
    CHECK(in_lattice(kl.basis, {0, 1, -l}));
  }
}

TEST_CASE("saturated_kernel on random integer matrices") {
  Rng rng(13);
  for (int it = 0; it < 200; ++it) {
    const IntMatrix m = random_int_matrix(rng, rng.index(3) + 1, rng.index(4) + 2, 5);
    const IntLattice k = saturated_kernel(m);
    CHECK(k.rank() == m.cols() - rank(to_rational(m)));
    if (k.rank() == 0) continue;
    CHECK((m * k.basis.transpose()).is_zero());
    CHECK(rank(to_rational(k.basis)) == k.rank());
    for (const auto& s : smith_diagonal(k.basis)) CHECK(s == 1);
  }
}

TEST_CASE("Hermite form spans the same lattice under unimodular row changes") {
  Rng rng(14);
  for (int it = 0; it < 200; ++it) {
    const std::size_t rows = rng.index(3) + 1, cols = rng.index(3) + 2;
    const IntMatrix m = random_int_matrix(rng, rows, cols);
    const IntMatrix p = random_unimodular(rng, rows).transpose();
    CHECK(hermite_rows(p * m) == hermite_rows(m));
  }
}

TEST_CASE("Smith diagonal and determinants") {
  Rng rng(15);
  for (int it = 0; it < 200; ++it) {
    const std::size_t n = rng.index(4) + 1;
    const IntMatrix a = random_int_matrix(rng, n, n), b = random_int_matrix(rng, n, n);
    const Integer da = determinant(a);
    CHECK(Scalar(da) == determinant(to_rational(a)));
    CHECK(determinant(a * b) == da * determinant(b));
    const auto s = smith_diagonal(a);
    Integer prod = 1;
    for (std::size_t i = 0; i < s.size(); ++i) {
      CHECK(s[i] >= 0);
      if (i + 1 < s.size() && s[i] != 0) CHECK(s[i + 1] % s[i] == 0);
      prod *= s[i];
    }
    CHECK(prod == abs(da));
    const IntMatrix p = random_unimodular(rng, n);
    CHECK(abs(determinant(p)) == 1);
    CHECK(smith_diagonal(p.transpose() * a * p) == s);
  }
}
