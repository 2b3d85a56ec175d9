#pragma once

// Exact linear algebra over the rationals and the integers: dense and sparse
// matrices, cochain complexes with their cohomology, and integer lattices.
// No floating point is used anywhere.

#include <gmpxx.h>

#include <cstddef>
#include <initializer_list>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dgglue {

using Scalar = mpq_class;
using Integer = mpz_class;

/// Dense vector over the ground field.
using Vec = std::vector<Scalar>;
/// Sparse vector: (index, nonzero coefficient), sorted by index.
using SparseVec = std::vector<std::pair<std::size_t, Scalar>>;

Scalar parse_scalar(const std::string& text);
std::string format_scalar(const Scalar& x);

bool is_zero(const Vec& v);
Vec zero_vec(std::size_t n);
SparseVec to_sparse(const Vec& v);
/// y += c * x
void axpy(Vec& y, const Scalar& c, const Vec& x);

template <class T>
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  DenseMatrix(std::initializer_list<std::initializer_list<T>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) throw std::invalid_argument("ragged matrix literal");
      for (const auto& x : row) data_.push_back(x);
    }
  }

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  DenseMatrix transpose() const {
    DenseMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  DenseMatrix operator*(const DenseMatrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("matrix product shape mismatch");
    DenseMatrix p(rows_, o.cols_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t k = 0; k < cols_; ++k) {
        const T& a = (*this)(r, k);
        if (a == 0) continue;
        for (std::size_t c = 0; c < o.cols_; ++c) p(r, c) += a * o(k, c);
      }
    return p;
  }

  DenseMatrix operator+(const DenseMatrix& o) const {
    check_same_shape(o);
    DenseMatrix s = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) s.data_[i] += o.data_[i];
    return s;
  }

  DenseMatrix operator-(const DenseMatrix& o) const {
    check_same_shape(o);
    DenseMatrix s = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) s.data_[i] -= o.data_[i];
    return s;
  }

  bool operator==(const DenseMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

  bool is_zero() const {
    for (const auto& x : data_)
      if (x != 0) return false;
    return true;
  }

 private:
  void check_same_shape(const DenseMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix shape mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using Matrix = DenseMatrix<Scalar>;
using IntMatrix = DenseMatrix<Integer>;

std::string to_string(const IntMatrix& m);

/// Row-wise sparse rational matrix. Rows are kept sorted by column.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols) : cols_(cols), rows_(rows) {}

  static SparseMatrix from_dense(const Matrix& m);

  std::size_t rows() const { return rows_.size(); }
  std::size_t cols() const { return cols_; }

  /// Accumulates v into entry (r, c); entries summing to zero are removed.
  void add(std::size_t r, std::size_t c, const Scalar& v);
  Scalar at(std::size_t r, std::size_t c) const;
  const SparseVec& row(std::size_t r) const { return rows_[r]; }

  SparseMatrix operator*(const SparseMatrix& o) const;
  SparseMatrix transpose() const;
  Matrix to_dense() const;
  bool is_zero() const;
  std::size_t nonzeros() const;
  /// this * x for a dense column vector.
  Vec apply(const Vec& x) const;

 private:
  std::size_t cols_ = 0;
  std::vector<SparseVec> rows_;
};

/// Incremental row echelon form over Q; reports whether each inserted row
/// enlarges the span.
class Echelon {
 public:
  explicit Echelon(std::size_t width) : width_(width) {}
  bool insert(SparseVec row);
  /// Reduces row against the current pivots; the result is zero iff the row
  /// lies in the span.
  SparseVec reduce(SparseVec row) const;
  std::size_t rank() const { return pivots_.size(); }

 private:
  std::size_t width_;
  std::map<std::size_t, SparseVec> pivots_;
};

/// Rank by fraction-free (Bareiss) elimination after clearing denominators.
std::size_t rank(const Matrix& m);
std::size_t rank(const SparseMatrix& m);
/// Basis of the right kernel {x : m x = 0}.
std::vector<Vec> kernel_basis(const Matrix& m);
std::vector<Vec> kernel_basis(const SparseMatrix& m);

using DegreeDims = std::map<int, std::size_t>;

/// A bounded cochain complex of finite-dimensional spaces stored sparsely by
/// degree: d(n) maps degree n to degree n + 1 and is dims(n+1) x dims(n).
class Cochain {
 public:
  Cochain() = default;
  /// Validates shapes and d^2 = 0; throws ValidationError otherwise.
  Cochain(DegreeDims dims, std::map<int, SparseMatrix> differentials);

  /// Builds a complex from a flat graded basis and one total differential.
  /// The differential must raise degree by exactly one.
  static Cochain from_flat(std::span<const int> degrees, const SparseMatrix& d);

  const DegreeDims& dims() const { return dims_; }
  std::size_t dim(int n) const;
  /// nullptr when d(n) is zero or the source or target is zero.
  const SparseMatrix* differential(int n) const;
  long euler_characteristic() const;

 private:
  DegreeDims dims_;
  std::map<int, SparseMatrix> d_;
};

/// Position of each flat basis element inside its degree block.
struct FlatGrading {
  explicit FlatGrading(std::span<const int> degrees);
  std::vector<int> degrees;
  std::vector<std::size_t> position;
  std::map<int, std::vector<std::size_t>> members;  // degree -> flat indices
};

/// dim ker d(n) - rank d(n-1) per degree, zero entries omitted.
DegreeDims cohomology_dims(const Cochain& c);
long euler_characteristic(const DegreeDims& dims);

/// Cocycles of degree n representing a basis of H^n (in degree-n coordinates).
std::vector<Vec> cohomology_representatives(const Cochain& c, int n);

/// Sublattice of Z^n given by linearly independent basis rows.
struct IntLattice {
  std::size_t ambient = 0;
  IntMatrix basis;  // rank x ambient
  std::size_t rank() const { return basis.rows(); }
};

/// Integer kernel {v in Z^n : M v = 0}, computed by unimodular column
/// reduction (Hermite form) so the result is saturated.
IntLattice saturated_kernel(const IntMatrix& m);
/// Row Hermite normal form; zero rows dropped. Spans the same lattice.
IntMatrix hermite_rows(const IntMatrix& m);

/// Diagonal of the Smith normal form: min(rows, cols) entries, nonnegative,
/// each dividing the next, zeros last.
std::vector<Integer> smith_diagonal(const IntMatrix& m);
Integer determinant(const IntMatrix& m);
Scalar determinant(const Matrix& m);

Matrix to_rational(const IntMatrix& m);

}  // namespace dgglue
