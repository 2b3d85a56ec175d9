#include "dgglue/euler.hpp"

#include <algorithm>
#include <sstream>

#include "dgglue/errors.hpp"

namespace dgglue {

GramForm euler_matrix(const std::vector<TwistedComplex>& objects, std::vector<std::string> labels) {
  const std::size_t n = objects.size();
  GramForm g{IntMatrix(n, n), std::move(labels)};
  if (g.labels.empty())
    for (std::size_t i = 0; i < n; ++i) g.labels.push_back("Z" + std::to_string(i));
  if (g.labels.size() != n) throw ValidationError("label count does not match the object count");
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t t = 0; t < n; ++t) g.matrix(s, t) = euler_characteristic(hom_cohomology(objects[s], objects[t]));
  return g;
}

ExceptionalityReport exceptionality_check(const CategoryPtr& cat) {
  const std::size_t n = cat->size();
  ExceptionalityReport rep;
  std::vector<std::vector<bool>> nonzero(n, std::vector<bool>(n));
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      const DegreeDims h = hom_cohomology(representable(cat, x), representable(cat, y));
      if (x == y) {
        if (h != DegreeDims{{0, 1}}) {
          rep.reason = "End(" + cat->object_name(x) + ") is not the ground field";
          return rep;
        }
      } else {
        nonzero[x][y] = !h.empty();
      }
    }
  std::vector<std::size_t> indeg(n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      if (nonzero[x][y]) ++indeg[y];
  std::vector<bool> done(n);
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t pick = n;
    for (std::size_t x = 0; x < n && pick == n; ++x)
      if (!done[x] && indeg[x] == 0) pick = x;
    if (pick == n) {
      rep.order.clear();
      rep.reason = "nonzero Homs in both directions between some objects";
      return rep;
    }
    done[pick] = true;
    rep.order.push_back(pick);
    for (std::size_t y = 0; y < n; ++y)
      if (nonzero[pick][y]) --indeg[y];
  }
  rep.pass = true;
  return rep;
}

OrthogonalGram orthogonal_gram(const GramForm& chi, const std::vector<std::vector<long>>& left_classes) {
  const std::size_t n = chi.size();
  OrthogonalGram out;
  if (left_classes.empty()) {
    out.lattice = {n, IntMatrix::identity(n)};
  } else {
    IntMatrix m(left_classes.size(), n);
    for (std::size_t r = 0; r < left_classes.size(); ++r) {
      if (left_classes[r].size() != n) throw ValidationError("class outside the lattice of the form");
      for (std::size_t c = 0; c < n; ++c)
        for (std::size_t k = 0; k < n; ++k) m(r, c) += Integer(left_classes[r][k]) * chi.matrix(k, c);
    }
    out.lattice = saturated_kernel(m);
  }
  const IntMatrix& b = out.lattice.basis;
  out.gram.matrix = b * chi.matrix * b.transpose();
  for (std::size_t i = 0; i < b.rows(); ++i) out.gram.labels.push_back("v" + std::to_string(i));
  return out;
}

std::pair<std::size_t, long> rank_signature(const Matrix& sym) {
  Matrix a = sym;
  const std::size_t n = a.rows();
  std::size_t rank = 0;
  long sig = 0;
  auto add_row_col = [&](std::size_t dst, std::size_t src, const Scalar& f) {
    for (std::size_t c = 0; c < n; ++c) a(dst, c) += f * a(src, c);
    for (std::size_t r = 0; r < n; ++r) a(r, dst) += f * a(r, src);
  };
  auto swap_row_col = [&](std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t c = 0; c < n; ++c) std::swap(a(i, c), a(j, c));
    for (std::size_t r = 0; r < n; ++r) std::swap(a(r, i), a(r, j));
  };
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = n;
    for (std::size_t i = k; i < n && p == n; ++i)
      if (a(i, i) != 0) p = i;
    if (p == n) {
      for (std::size_t i = k; i < n && p == n; ++i)
        for (std::size_t j = i + 1; j < n && p == n; ++j)
          if (a(i, j) != 0) {
            add_row_col(i, j, 1);
            p = i;
          }
      if (p == n) break;
    }
    swap_row_col(p, k);
    const Scalar piv = a(k, k);
    ++rank;
    sig += piv > 0 ? 1 : -1;
    for (std::size_t i = k + 1; i < n; ++i)
      if (a(i, k) != 0) add_row_col(i, k, -a(i, k) / piv);
  }
  return {rank, sig};
}

std::vector<Scalar> characteristic_polynomial(const Matrix& m) {
  const std::size_t n = m.rows();
  std::vector<Scalar> c(n + 1);
  c[n] = 1;
  Matrix mk(n, n);
  for (std::size_t k = 1; k <= n; ++k) {
    Matrix next = m * mk;
    for (std::size_t i = 0; i < n; ++i) next(i, i) += c[n - k + 1];
    mk = next;
    Matrix am = m * mk;
    Scalar tr = 0;
    for (std::size_t i = 0; i < n; ++i) tr += am(i, i);
    c[n - k] = -tr / static_cast<long>(k);
  }
  return c;
}

namespace {

Matrix inverse(const Matrix& m) {
  const std::size_t n = m.rows();
  Matrix a = m, inv = Matrix::identity(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && a(p, k) == 0) ++p;
    if (p == n) throw Error("singular matrix");
    for (std::size_t c = 0; c < n; ++c) {
      std::swap(a(k, c), a(p, c));
      std::swap(inv(k, c), inv(p, c));
    }
    const Scalar piv = a(k, k);
    for (std::size_t c = 0; c < n; ++c) {
      a(k, c) /= piv;
      inv(k, c) /= piv;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == k || a(r, k) == 0) continue;
      const Scalar f = a(r, k);
      for (std::size_t c = 0; c < n; ++c) {
        a(r, c) -= f * a(k, c);
        inv(r, c) -= f * inv(k, c);
      }
    }
  }
  return inv;
}

template <class T>
std::string join(const std::vector<T>& v) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ")";
  return os.str();
}

std::string poly_string(const std::vector<Scalar>& c) {
  std::vector<std::string> parts;
  for (const auto& x : c) parts.push_back(format_scalar(x));
  return join(parts);
}

}  // namespace

InvariantPack invariant_pack(const IntMatrix& g) {
  if (g.rows() != g.cols()) throw ValidationError("bilinear form matrix is not square");
  InvariantPack p;
  p.det = determinant(g);
  const IntMatrix sym = g + g.transpose();
  const IntMatrix skew = g - g.transpose();
  std::tie(p.sym_rank, p.sym_signature) = rank_signature(to_rational(sym));
  p.smith_sym = smith_diagonal(sym);
  p.smith_skew = smith_diagonal(skew);
  if (abs(p.det) == 1) {
    const Matrix q = to_rational(g);
    p.coxeter_charpoly = characteristic_polynomial(inverse(q) * q.transpose());
  }
  return p;
}

std::string to_string(EquivalenceVerdict::Kind k) {
  switch (k) {
    case EquivalenceVerdict::Kind::Equivalent:
      return "Equivalent";
    case EquivalenceVerdict::Kind::Inequivalent:
      return "Inequivalent";
    case EquivalenceVerdict::Kind::Undecided:
      return "Undecided";
  }
  return "";
}

long default_search_bound(std::size_t dim) { return dim <= 2 ? 10 : 3; }

namespace {

Integer bilinear(const IntMatrix& g, const std::vector<Integer>& u, const std::vector<Integer>& v) {
  Integer s = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] == 0) continue;
    for (std::size_t j = 0; j < v.size(); ++j) s += u[i] * g(i, j) * v[j];
  }
  return s;
}

std::vector<std::vector<Integer>> box(std::size_t n, long bound) {
  std::vector<std::vector<Integer>> out;
  std::vector<long> cur(n, -bound);
  while (true) {
    out.emplace_back(cur.begin(), cur.end());
    std::size_t k = n;
    while (k > 0 && cur[k - 1] == bound) cur[--k] = -bound;
    if (k == 0) break;
    ++cur[k - 1];
  }
  return out;
}

}  // namespace

EquivalenceVerdict form_equivalence(const IntMatrix& g1, const IntMatrix& g2, std::optional<long> bound) {
  if (g1.rows() != g1.cols() || g2.rows() != g2.cols()) throw ValidationError("bilinear form matrix is not square");
  if (g1.rows() != g2.rows()) throw ValidationError("forms of different dimensions");
  const std::size_t n = g1.rows();
  EquivalenceVerdict v;
  const InvariantPack a = invariant_pack(g1), b = invariant_pack(g2);
  auto differ = [&](std::string name, std::string x, std::string y) {
    v.kind = EquivalenceVerdict::Kind::Inequivalent;
    v.invariant = std::move(name);
    v.first_value = std::move(x);
    v.second_value = std::move(y);
    return v;
  };
  if (a.det != b.det) return differ("determinant", a.det.get_str(), b.det.get_str());
  if (a.sym_rank != b.sym_rank)
    return differ("rank of G+G^T", std::to_string(a.sym_rank), std::to_string(b.sym_rank));
  if (a.sym_signature != b.sym_signature)
    return differ("signature of G+G^T", std::to_string(a.sym_signature), std::to_string(b.sym_signature));
  if (a.smith_sym != b.smith_sym) return differ("Smith divisors of G+G^T", join(a.smith_sym), join(b.smith_sym));
  if (a.smith_skew != b.smith_skew) return differ("Smith divisors of G-G^T", join(a.smith_skew), join(b.smith_skew));
  if (a.coxeter_charpoly && b.coxeter_charpoly && *a.coxeter_charpoly != *b.coxeter_charpoly)
    return differ("characteristic polynomial of G^-1 G^T", poly_string(*a.coxeter_charpoly),
                  poly_string(*b.coxeter_charpoly));

  const long h = bound.value_or(default_search_bound(n));
  const auto all = box(n, h);
  std::vector<std::vector<const std::vector<Integer>*>> candidates(n);
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& p : all)
      if (bilinear(g1, p, p) == g2(i, i)) candidates[i].push_back(&p);

  std::vector<const std::vector<Integer>*> cols(n);
  IntMatrix found;
  bool ok = false;
  auto search = [&](auto&& self, std::size_t i) -> void {
    if (ok) return;
    if (i == n) {
      IntMatrix p(n, n);
      for (std::size_t c = 0; c < n; ++c)
        for (std::size_t r = 0; r < n; ++r) p(r, c) = (*cols[c])[r];
      if (abs(determinant(p)) == 1) {
        found = p;
        ok = true;
      }
      return;
    }
    for (const auto* cand : candidates[i]) {
      bool fits = true;
      for (std::size_t j = 0; j < i && fits; ++j)
        fits = bilinear(g1, *cols[j], *cand) == g2(j, i) && bilinear(g1, *cand, *cols[j]) == g2(i, j);
      if (!fits) continue;
      cols[i] = cand;
      self(self, i + 1);
      if (ok) return;
    }
  };
  search(search, 0);
  if (!ok) {
    v.kind = EquivalenceVerdict::Kind::Undecided;
    v.invariant = "search bound " + std::to_string(h) + " exhausted";
    return v;
  }
  if (!(found.transpose() * g1 * found == g2) || abs(determinant(found)) != 1)
    throw Error("congruence certificate failed re-verification");
  v.kind = EquivalenceVerdict::Kind::Equivalent;
  v.certificate = found;
  return v;
}

IntMatrix chi_t(long t) { return IntMatrix{{Integer(t), Integer(1)}, {Integer(-1), Integer(0)}}; }

}  // namespace dgglue
