#include "dgglue/exactlin.hpp"

#include <algorithm>
#include <sstream>

#include "dgglue/errors.hpp"

namespace dgglue {

ValidationError::ValidationError(std::vector<std::string> violations)
    : Error([&] {
        std::string msg;
        for (const auto& v : violations) {
          if (!msg.empty()) msg += "; ";
          msg += v;
        }
        return msg;
      }()),
      violations_(std::move(violations)) {}

ValidationError::ValidationError(const std::string& violation)
    : ValidationError(std::vector<std::string>{violation}) {}

Scalar parse_scalar(const std::string& text) {
  std::string t;
  for (char ch : text)
    if (ch != ' ') t += ch;
  if (t.empty()) throw ValidationError("empty scalar literal");
  if (t.front() == '+') t.erase(0, 1);
  const auto slash = t.find('/');
  auto valid_int = [](const std::string& s) {
    std::size_t i = (!s.empty() && s[0] == '-') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
      if (s[i] < '0' || s[i] > '9') return false;
    return true;
  };
  if (slash == std::string::npos) {
    if (!valid_int(t)) throw ValidationError("malformed scalar '" + text + "'");
    return Scalar(Integer(t));
  }
  const std::string num = t.substr(0, slash), den = t.substr(slash + 1);
  if (!valid_int(num) || !valid_int(den)) throw ValidationError("malformed scalar '" + text + "'");
  Integer d(den);
  if (d == 0) throw ValidationError("zero denominator in '" + text + "'");
  Scalar q(Integer(num), d);
  q.canonicalize();
  return q;
}

std::string format_scalar(const Scalar& x) { return x.get_str(); }

bool is_zero(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](const Scalar& x) { return x == 0; });
}

Vec zero_vec(std::size_t n) { return Vec(n); }

SparseVec to_sparse(const Vec& v) {
  SparseVec s;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0) s.emplace_back(i, v[i]);
  return s;
}

void axpy(Vec& y, const Scalar& c, const Vec& x) {
  if (c == 0) return;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] != 0) y[i] += c * x[i];
}

std::string to_string(const IntMatrix& m) {
  std::ostringstream os;
  os << '[';
  for (std::size_t r = 0; r < m.rows(); ++r) {
    if (r) os << ',';
    os << '[';
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (c) os << ',';
      os << m(r, c).get_str();
    }
    os << ']';
  }
  os << ']';
  return os.str();
}

// ---------------------------------------------------------------------------
// Sparse matrices

namespace {

// a - c * b for sorted sparse vectors
SparseVec sub_scaled(const SparseVec& a, const Scalar& c, const SparseVec& b) {
  SparseVec out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.emplace_back(b[j].first, -c * b[j].second);
      ++j;
    } else {
      Scalar v = a[i].second - c * b[j].second;
      if (v != 0) out.emplace_back(a[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

SparseMatrix SparseMatrix::from_dense(const Matrix& m) {
  SparseMatrix s(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c)
      if (m(r, c) != 0) s.rows_[r].emplace_back(c, m(r, c));
  return s;
}

void SparseMatrix::add(std::size_t r, std::size_t c, const Scalar& v) {
  if (v == 0) return;
  auto& row = rows_.at(r);
  if (c >= cols_) throw std::out_of_range("sparse matrix column out of range");
  auto it = std::lower_bound(row.begin(), row.end(), c,
                             [](const auto& e, std::size_t col) { return e.first < col; });
  if (it != row.end() && it->first == c) {
    it->second += v;
    if (it->second == 0) row.erase(it);
  } else {
    row.insert(it, {c, v});
  }
}

Scalar SparseMatrix::at(std::size_t r, std::size_t c) const {
  const auto& row = rows_.at(r);
  auto it = std::lower_bound(row.begin(), row.end(), c,
                             [](const auto& e, std::size_t col) { return e.first < col; });
  if (it != row.end() && it->first == c) return it->second;
  return 0;
}

SparseMatrix SparseMatrix::operator*(const SparseMatrix& o) const {
  if (cols_ != o.rows()) throw std::invalid_argument("sparse product shape mismatch");
  SparseMatrix p(rows(), o.cols());
  for (std::size_t r = 0; r < rows(); ++r) {
    std::map<std::size_t, Scalar> acc;
    for (const auto& [k, a] : rows_[r])
      for (const auto& [c, b] : o.rows_[k]) acc[c] += a * b;
    for (auto& [c, v] : acc)
      if (v != 0) p.rows_[r].emplace_back(c, std::move(v));
  }
  return p;
}

SparseMatrix SparseMatrix::transpose() const {
  SparseMatrix t(cols_, rows());
  for (std::size_t r = 0; r < rows(); ++r)
    for (const auto& [c, v] : rows_[r]) t.rows_[c].emplace_back(r, v);
  return t;
}

Matrix SparseMatrix::to_dense() const {
  Matrix m(rows(), cols_);
  for (std::size_t r = 0; r < rows(); ++r)
    for (const auto& [c, v] : rows_[r]) m(r, c) = v;
  return m;
}

bool SparseMatrix::is_zero() const {
  return std::all_of(rows_.begin(), rows_.end(), [](const SparseVec& r) { return r.empty(); });
}

std::size_t SparseMatrix::nonzeros() const {
  std::size_t n = 0;
  for (const auto& r : rows_) n += r.size();
  return n;
}

Vec SparseMatrix::apply(const Vec& x) const {
  if (x.size() != cols_) throw std::invalid_argument("sparse apply shape mismatch");
  Vec y(rows());
  for (std::size_t r = 0; r < rows(); ++r)
    for (const auto& [c, v] : rows_[r])
      if (x[c] != 0) y[r] += v * x[c];
  return y;
}

// ---------------------------------------------------------------------------
// Echelon forms

SparseVec Echelon::reduce(SparseVec row) const {
  while (!row.empty()) {
    auto it = pivots_.find(row.front().first);
    if (it == pivots_.end()) break;
    const Scalar c = row.front().second;
    row = sub_scaled(row, c, it->second);
  }
  return row;
}

bool Echelon::insert(SparseVec row) {
  // Leading entries are eliminated in increasing column order; a row whose
  // leading column carries no pivot is independent of the current span.
  row = reduce(std::move(row));
  if (row.empty()) return false;
  const Scalar lead = row.front().second;
  for (auto& [c, v] : row) v /= lead;
  const std::size_t col = row.front().first;
  if (col >= width_) throw std::out_of_range("echelon column out of range");
  pivots_.emplace(col, std::move(row));
  return true;
}

std::size_t rank(const Matrix& m) {
  // Clear denominators row by row, then fraction-free elimination.
  const std::size_t rows = m.rows(), cols = m.cols();
  std::vector<std::vector<Integer>> a(rows, std::vector<Integer>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    Integer l = 1;
    for (std::size_t c = 0; c < cols; ++c) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(r, c).get_den_mpz_t());
    for (std::size_t c = 0; c < cols; ++c) a[r][c] = m(r, c).get_num() * (l / m(r, c).get_den());
  }
  Integer prev = 1;
  std::size_t rk = 0;
  for (std::size_t c = 0; c < cols && rk < rows; ++c) {
    std::size_t p = rk;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[rk]);
    for (std::size_t i = rk + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) {
        a[i][j] = a[rk][c] * a[i][j] - a[i][c] * a[rk][j];
        mpz_divexact(a[i][j].get_mpz_t(), a[i][j].get_mpz_t(), prev.get_mpz_t());
      }
      a[i][c] = 0;
    }
    prev = a[rk][c];
    ++rk;
  }
  return rk;
}

std::size_t rank(const SparseMatrix& m) {
  // Eliminate along the shorter side.
  const SparseMatrix* src = &m;
  SparseMatrix t;
  if (m.rows() > m.cols()) {
    t = m.transpose();
    src = &t;
  }
  std::vector<std::size_t> order(src->rows());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return src->row(x).size() < src->row(y).size();
  });
  Echelon e(src->cols());
  for (std::size_t r : order) e.insert(src->row(r));
  return e.rank();
}

namespace {

// Fully reduced row echelon form over Q as (pivot column -> row).
std::map<std::size_t, SparseVec> reduced_echelon(const SparseMatrix& m) {
  std::map<std::size_t, SparseVec> piv;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    SparseVec row = m.row(r);
    while (!row.empty()) {
      auto it = piv.find(row.front().first);
      if (it == piv.end()) break;
      const Scalar c = row.front().second;
      row = sub_scaled(row, c, it->second);
    }
    if (row.empty()) continue;
    const Scalar lead = row.front().second;
    for (auto& [c, v] : row) v /= lead;
    piv.emplace(row.front().first, std::move(row));
  }
  // Back substitution, largest pivot first.
  for (auto it = piv.rbegin(); it != piv.rend(); ++it) {
    SparseVec& row = it->second;
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t k = 1; k < row.size(); ++k) {
        auto p = piv.find(row[k].first);
        if (p == piv.end()) continue;
        const Scalar c = row[k].second;
        row = sub_scaled(row, c, p->second);
        changed = true;
        break;
      }
    }
  }
  return piv;
}

}  // namespace

std::vector<Vec> kernel_basis(const SparseMatrix& m) {
  const auto piv = reduced_echelon(m);
  std::vector<Vec> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (piv.count(f)) continue;
    Vec x(m.cols());
    x[f] = 1;
    for (const auto& [pc, row] : piv)
      for (const auto& [c, v] : row)
        if (c == f) x[pc] = -v;
    basis.push_back(std::move(x));
  }
  return basis;
}

std::vector<Vec> kernel_basis(const Matrix& m) { return kernel_basis(SparseMatrix::from_dense(m)); }

// ---------------------------------------------------------------------------
// Cochains

Cochain::Cochain(DegreeDims dims, std::map<int, SparseMatrix> differentials) {
  for (auto& [n, k] : dims)
    if (k) dims_[n] = k;
  std::vector<std::string> errors;
  for (auto& [n, d] : differentials) {
    if (d.rows() != dim(n + 1) || d.cols() != dim(n)) {
      errors.push_back("differential in degree " + std::to_string(n) + " has shape " +
                       std::to_string(d.rows()) + "x" + std::to_string(d.cols()) + ", expected " +
                       std::to_string(dim(n + 1)) + "x" + std::to_string(dim(n)));
      continue;
    }
    if (!d.is_zero()) d_[n] = std::move(d);
  }
  if (!errors.empty()) throw ValidationError(errors);
  for (const auto& [n, d] : d_) {
    auto next = d_.find(n + 1);
    if (next == d_.end()) continue;
    if (!(next->second * d).is_zero())
      errors.push_back("d^2 != 0 from degree " + std::to_string(n) + " to " + std::to_string(n + 2));
  }
  if (!errors.empty()) throw ValidationError(errors);
}

FlatGrading::FlatGrading(std::span<const int> degs) : degrees(degs.begin(), degs.end()), position(degs.size()) {
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    auto& m = members[degrees[i]];
    position[i] = m.size();
    m.push_back(i);
  }
}

Cochain Cochain::from_flat(std::span<const int> degrees, const SparseMatrix& d) {
  if (d.rows() != degrees.size() || d.cols() != degrees.size())
    throw ValidationError("flat differential shape does not match the graded basis");
  FlatGrading g(degrees);
  DegreeDims dims;
  for (const auto& [n, m] : g.members) dims[n] = m.size();
  std::map<int, SparseMatrix> blocks;
  std::vector<std::string> errors;
  for (std::size_t r = 0; r < d.rows(); ++r)
    for (const auto& [c, v] : d.row(r)) {
      const int n = degrees[c];
      if (degrees[r] != n + 1) {
        errors.push_back("differential maps basis " + std::to_string(c) + " (degree " + std::to_string(n) +
                         ") to basis " + std::to_string(r) + " (degree " + std::to_string(degrees[r]) + ")");
        continue;
      }
      auto it = blocks.find(n);
      if (it == blocks.end()) it = blocks.emplace(n, SparseMatrix(dims[n + 1], dims[n])).first;
      it->second.add(g.position[r], g.position[c], v);
    }
  if (!errors.empty()) throw ValidationError(errors);
  return Cochain(std::move(dims), std::move(blocks));
}

std::size_t Cochain::dim(int n) const {
  auto it = dims_.find(n);
  return it == dims_.end() ? 0 : it->second;
}

const SparseMatrix* Cochain::differential(int n) const {
  auto it = d_.find(n);
  return it == d_.end() ? nullptr : &it->second;
}

long Cochain::euler_characteristic() const {
  long chi = 0;
  for (const auto& [n, k] : dims_) chi += (n % 2 == 0 ? 1 : -1) * static_cast<long>(k);
  return chi;
}

long euler_characteristic(const DegreeDims& dims) {
  long chi = 0;
  for (const auto& [n, k] : dims) chi += (n % 2 == 0 ? 1 : -1) * static_cast<long>(k);
  return chi;
}

DegreeDims cohomology_dims(const Cochain& c) {
  std::map<int, std::size_t> ranks;
  for (const auto& [n, k] : c.dims()) {
    (void)k;
    if (const auto* d = c.differential(n)) ranks[n] = rank(*d);
  }
  // Re-check d^2 = 0 so malformed complexes never yield numbers.
  for (const auto& [n, k] : c.dims()) {
    (void)k;
    const auto* d0 = c.differential(n);
    const auto* d1 = c.differential(n + 1);
    if (d0 && d1 && !((*d1) * (*d0)).is_zero())
      throw ValidationError("d^2 != 0 from degree " + std::to_string(n));
  }
  DegreeDims h;
  for (const auto& [n, k] : c.dims()) {
    const std::size_t out = ranks.count(n) ? ranks[n] : 0;
    const std::size_t in = ranks.count(n - 1) ? ranks[n - 1] : 0;
    const std::size_t dim = k - out - in;
    if (dim) h[n] = dim;
  }
  return h;
}

std::vector<Vec> cohomology_representatives(const Cochain& c, int n) {
  const std::size_t dim = c.dim(n);
  if (!dim) return {};
  std::vector<Vec> cocycles;
  if (const auto* d = c.differential(n)) {
    cocycles = kernel_basis(*d);
  } else {
    for (std::size_t i = 0; i < dim; ++i) {
      Vec e(dim);
      e[i] = 1;
      cocycles.push_back(std::move(e));
    }
  }
  Echelon span(dim);
  if (const auto* b = c.differential(n - 1)) {
    const SparseMatrix bt = b->transpose();
    for (std::size_t r = 0; r < bt.rows(); ++r) span.insert(bt.row(r));
  }
  std::vector<Vec> reps;
  for (auto& z : cocycles)
    if (span.insert(to_sparse(z))) reps.push_back(std::move(z));
  return reps;
}

// ---------------------------------------------------------------------------
// Integer lattices

namespace {

// Replace columns (a, b) by unimodular combinations so that row r has gcd in
// column a and zero in column b.
void column_gcd(IntMatrix& m, IntMatrix& u, std::size_t r, std::size_t a, std::size_t b) {
  const Integer x = m(r, a), y = m(r, b);
  if (y == 0) return;
  Integer g, s, t;
  mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
  const Integer xg = x / g, yg = y / g;
  auto apply = [&](IntMatrix& w) {
    for (std::size_t i = 0; i < w.rows(); ++i) {
      const Integer ca = w(i, a), cb = w(i, b);
      w(i, a) = s * ca + t * cb;
      w(i, b) = -yg * ca + xg * cb;
    }
  };
  apply(m);
  apply(u);
}

}  // namespace

IntLattice saturated_kernel(const IntMatrix& m) {
  const std::size_t n = m.cols();
  IntMatrix a = m;
  IntMatrix u = IntMatrix::identity(n);
  std::size_t piv = 0;
  for (std::size_t r = 0; r < a.rows() && piv < n; ++r) {
    std::size_t first = n;
    for (std::size_t c = piv; c < n; ++c)
      if (a(r, c) != 0) {
        first = c;
        break;
      }
    if (first == n) continue;
    if (first != piv) column_gcd(a, u, r, piv, first);
    for (std::size_t c = piv + 1; c < n; ++c) column_gcd(a, u, r, piv, c);
    ++piv;
  }
  IntLattice lat;
  lat.ambient = n;
  IntMatrix basis(n - piv, n);
  for (std::size_t k = piv; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i) basis(k - piv, i) = u(i, k);
  lat.basis = hermite_rows(basis);
  return lat;
}

IntMatrix hermite_rows(const IntMatrix& m) {
  IntMatrix a = m;
  std::size_t r = 0;
  const std::size_t rows = a.rows(), cols = a.cols();
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    for (std::size_t i = r + 1; i < rows; ++i) {
      if (a(i, c) == 0) continue;
      const Integer x = a(r, c), y = a(i, c);
      Integer g, s, t;
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
      const Integer xg = x / g, yg = y / g;
      for (std::size_t k = 0; k < cols; ++k) {
        const Integer ra = a(r, k), rb = a(i, k);
        a(r, k) = s * ra + t * rb;
        a(i, k) = -yg * ra + xg * rb;
      }
    }
    if (a(r, c) == 0) continue;
    if (a(r, c) < 0)
      for (std::size_t k = 0; k < cols; ++k) a(r, k) = -a(r, k);
    for (std::size_t i = 0; i < r; ++i) {
      Integer q;
      mpz_fdiv_q(q.get_mpz_t(), a(i, c).get_mpz_t(), a(r, c).get_mpz_t());
      if (q != 0)
        for (std::size_t k = 0; k < cols; ++k) a(i, k) -= q * a(r, k);
    }
    ++r;
  }
  IntMatrix out(r, cols);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t k = 0; k < cols; ++k) out(i, k) = a(i, k);
  return out;
}

std::vector<Integer> smith_diagonal(const IntMatrix& m) {
  IntMatrix a = m;
  const std::size_t rows = a.rows(), cols = a.cols();
  const std::size_t n = std::min(rows, cols);
  auto swap_rows = [&](std::size_t i, std::size_t j) {
    if (i != j)
      for (std::size_t c = 0; c < cols; ++c) std::swap(a(i, c), a(j, c));
  };
  auto swap_cols = [&](std::size_t i, std::size_t j) {
    if (i != j)
      for (std::size_t r = 0; r < rows; ++r) std::swap(a(r, i), a(r, j));
  };
  std::vector<Integer> diag(n);
  for (std::size_t t = 0; t < n; ++t) {
    while (true) {
      // smallest nonzero entry of the trailing block goes to (t, t)
      std::size_t bi = rows, bj = cols;
      for (std::size_t i = t; i < rows; ++i)
        for (std::size_t j = t; j < cols; ++j)
          if (a(i, j) != 0 && (bi == rows || abs(a(i, j)) < abs(a(bi, bj)))) {
            bi = i;
            bj = j;
          }
      if (bi == rows) return diag;
      swap_rows(t, bi);
      swap_cols(t, bj);
      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (a(i, t) == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), a(i, t).get_mpz_t(), a(t, t).get_mpz_t());
        for (std::size_t c = t; c < cols; ++c) a(i, c) -= q * a(t, c);
        if (a(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (a(t, j) == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), a(t, j).get_mpz_t(), a(t, t).get_mpz_t());
        for (std::size_t r = t; r < rows; ++r) a(r, j) -= q * a(r, t);
        if (a(t, j) != 0) clean = false;
      }
      if (!clean) continue;
      // divisibility of the trailing block
      bool divides = true;
      for (std::size_t i = t + 1; i < rows && divides; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (a(i, j) % a(t, t) != 0) {
            for (std::size_t c = t; c < cols; ++c) a(t, c) += a(i, c);
            divides = false;
            break;
          }
      if (divides) break;
    }
    diag[t] = abs(a(t, t));
  }
  return diag;
}

Integer determinant(const IntMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant of non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  IntMatrix a = m;
  Integer prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && a(p, k) == 0) ++p;
    if (p == n) return 0;
    if (p != k) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a(p, c), a(k, c));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        a(i, j) = a(k, k) * a(i, j) - a(i, k) * a(k, j);
        mpz_divexact(a(i, j).get_mpz_t(), a(i, j).get_mpz_t(), prev.get_mpz_t());
      }
      a(i, k) = 0;
    }
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

Scalar determinant(const Matrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant of non-square matrix");
  Matrix a = m;
  const std::size_t n = a.rows();
  Scalar det = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && a(p, k) == 0) ++p;
    if (p == n) return 0;
    if (p != k) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a(p, c), a(k, c));
      det = -det;
    }
    det *= a(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a(i, k) == 0) continue;
      const Scalar f = a(i, k) / a(k, k);
      for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return det;
}

Matrix to_rational(const IntMatrix& m) {
  Matrix q(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) q(r, c) = Scalar(m(r, c));
  return q;
}

}  // namespace dgglue
