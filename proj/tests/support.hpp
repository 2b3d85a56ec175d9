#pragma once

// Random generators and independent oracles shared by the unit tests and the
// acceptance binary.

#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "dgglue/errors.hpp"
#include "dgglue/euler.hpp"
#include "dgglue/glue.hpp"
#include "dgglue/scenarios.hpp"
#include "dgglue/sod.hpp"

namespace dgtest {

using namespace dgglue;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  long uniform(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(eng_); }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform(0, static_cast<long>(n) - 1)); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(eng_); }
  Scalar scalar(long range = 3) {
    Scalar q(uniform(-range, range), uniform(1, 2));
    q.canonicalize();
    return q;
  }
  Scalar nonzero_scalar(long range = 3) {
    for (;;) {
      Scalar q = scalar(range);
      if (q != 0) return q;
    }
  }

 private:
  std::mt19937_64 eng_;
};

inline IntMatrix random_int_matrix(Rng& rng, std::size_t rows, std::size_t cols, long range = 4) {
  IntMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = rng.uniform(-range, range);
  return m;
}

// Product of random elementary matrices and sign flips.
inline IntMatrix random_unimodular(Rng& rng, std::size_t n, int steps = 6) {
  IntMatrix p = IntMatrix::identity(n);
  for (int s = 0; s < steps; ++s) {
    const std::size_t i = rng.index(n), j = rng.index(n);
    if (n > 1 && i != j) {
      const long k = rng.uniform(-2, 2);
      for (std::size_t r = 0; r < n; ++r) p(r, j) += k * p(r, i);
    } else if (rng.coin(0.3)) {
      for (std::size_t r = 0; r < n; ++r) p(r, i) = -p(r, i);
    }
  }
  if (n > 1 && rng.coin(0.5)) {
    const std::size_t i = rng.index(n), j = rng.index(n);
    for (std::size_t r = 0; r < n; ++r) std::swap(p(r, i), p(r, j));
  }
  return p;
}

/// Directed category: Hom(x, y) = 0 for x > y, End = k, Hom dims <= max_dim.
/// Either nonzero differentials with all nonunit composites zero, or zero
/// differentials with random composition Hom(y,z) x Hom(x,y) -> Hom(x,z)
/// (associative for at most three objects).
inline CategoryPtr random_directed_category(Rng& rng, std::size_t n, std::size_t max_dim = 4,
                                            const std::string& name = "R") {
  RawCategory r;
  r.name = name;
  for (std::size_t x = 0; x < n; ++x) r.add_object(name + std::to_string(x));
  for (std::size_t x = 0; x < n; ++x) r.add_basis(x, x, 0, "id");
  const bool with_d = rng.coin();
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = x + 1; y < n; ++y) {
      const auto dim = static_cast<std::size_t>(rng.uniform(0, static_cast<long>(max_dim)));
      for (std::size_t e = 0; e < dim; ++e) r.add_basis(x, y, static_cast<int>(rng.uniform(-1, 1)), "f" + std::to_string(e));
      if (!with_d) continue;
      std::vector<bool> used(dim, false);
      for (std::size_t a = 0; a < dim; ++a)
        for (std::size_t b = 0; b < dim; ++b) {
          if (used[a] || used[b] || a == b) continue;
          const auto& deg = r.homs[{x, y}].degrees;
          if (deg[b] != deg[a] + 1 || !rng.coin(0.6)) continue;
          r.set_differential(x, y, a, b, rng.nonzero_scalar());
          used[a] = used[b] = true;
        }
    }
  if (!with_d && n <= 3)
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = x + 1; y < n; ++y)
        for (std::size_t z = y + 1; z < n; ++z)
          for (std::size_t g = 0; g < r.dim(y, z); ++g)
            for (std::size_t f = 0; f < r.dim(x, y); ++f) {
              const int deg = r.homs[{y, z}].degrees[g] + r.homs[{x, y}].degrees[f];
              for (std::size_t h = 0; h < r.dim(x, z); ++h)
                if (r.homs[{x, z}].degrees[h] == deg && rng.coin(0.5))
                  r.add_composition(x, y, z, g, f, h, rng.nonzero_scalar());
            }
  for (std::size_t x = 0; x < n; ++x) r.set_unit_basis(x, 0);
  return make_category(r);
}

/// Random closed morphism of degree n, a combination of a cocycle basis.
inline TwMorphism random_closed_morphism(Rng& rng, const TwistedComplex& x, const TwistedComplex& y, int n = 0) {
  HomComplex h(x, y);
  const std::size_t dim = h.complex().dim(n);
  if (dim == 0) return TwMorphism(x, y, n);
  std::vector<Vec> cocycles;
  if (const SparseMatrix* d = h.complex().differential(n))
    cocycles = kernel_basis(*d);
  else
    for (std::size_t i = 0; i < dim; ++i) {
      Vec e(dim);
      e[i] = 1;
      cocycles.push_back(e);
    }
  Vec block(dim);
  for (const auto& z : cocycles) axpy(block, Scalar(rng.uniform(-2, 2)), z);
  return h.morphism(h.from_degree(n, block), n);
}

/// Iterated cones of random closed maps between shifted representables and
/// the complex built so far; objects restricted to [lo, hi].
inline TwistedComplex random_twcx(Rng& rng, const CategoryPtr& cat, std::size_t max_gens = 3,
                                  std::optional<std::pair<std::size_t, std::size_t>> range = {}) {
  const std::size_t lo = range ? range->first : 0, hi = range ? range->second : cat->size() - 1;
  auto rand_rep = [&] {
    return representable(cat, lo + rng.index(hi - lo + 1), static_cast<int>(rng.uniform(-1, 1)));
  };
  TwistedComplex z = rand_rep();
  const auto gens = static_cast<std::size_t>(rng.uniform(1, static_cast<long>(max_gens)));
  while (z.size() < gens) {
    const TwistedComplex g = rand_rep();
    const int pick = static_cast<int>(rng.uniform(0, 2));
    if (pick == 0)
      z = cone(random_closed_morphism(rng, shift(g, -1), z));
    else if (pick == 1)
      z = shift(cone(random_closed_morphism(rng, z, g)), -1);
    else
      z = direct_sum(z, g);
  }
  return z;
}

inline TwMorphism random_morphism(Rng& rng, const TwistedComplex& x, const TwistedComplex& y, int n) {
  HomComplex h(x, y);
  Vec block(h.complex().dim(n));
  for (auto& v : block) v = rng.scalar();
  return h.morphism(h.from_degree(n, block), n);
}

/// Images of the nonunit basis of Hom_B(B_0, B_1) for a two-object directed
/// B: random closed maps, except that for d e_a = c e_b the image of e_a is
/// arbitrary and e_b goes to D(image of e_a) / c.
inline std::map<HomKey, TwMorphism> random_functor_maps(Rng& rng, const CategoryPtr& b,
                                                        const std::vector<TwistedComplex>& values) {
  std::map<HomKey, TwMorphism> out;
  const std::size_t dim = b->dim(0, 1);
  std::vector<bool> done(dim, false);
  for (std::size_t e = 0; e < dim; ++e) {
    const auto& de = b->d_basis(0, 1, e);
    if (de.empty()) continue;
    const TwMorphism m = random_morphism(rng, values[0], values[1], b->degree(0, 1, e));
    out[{0, 1, e}] = m;
    const auto& [target, c] = de.front();
    out[{0, 1, target}] = differential(m).scaled(1 / c);
    done[e] = done[target] = true;
  }
  for (std::size_t e = 0; e < dim; ++e)
    if (!done[e]) out[{0, 1, e}] = random_closed_morphism(rng, values[0], values[1], b->degree(0, 1, e));
  return out;
}

/// diag(mp, mt) between direct_sum(p0, t0) and direct_sum(p1, t1).
inline TwMorphism block_diagonal(const TwistedComplex& s0, const TwistedComplex& s1, const TwMorphism& mp,
                                 const TwMorphism& mt) {
  TwMorphism m(s0, s1, mp.degree(), mp.entries());
  for (const auto& [key, v] : mt.entries())
    m.add(mp.target().size() + key.first, mp.source().size() + key.second, 1, v);
  return m;
}

struct GluingInstance {
  CategoryPtr a;
  CategoryPtr b;
  Bimodule s;
  Bimodule t;
  BimoduleMorphism phi;
  std::string kind;
  bool functorial_maps = false;  // S, T send nonunit morphisms of B to nonzero maps
};

/// Random S, T, phi over random directed A and B (at most 3 objects each,
/// Hom dims at most 4). Kinds: identity, zero T, split S = P + T with
/// phi = (g, id), and split with P supported strictly above T.
inline GluingInstance random_gluing(Rng& rng) {
  for (;;) {
    try {
      GluingInstance g;
      const auto na = static_cast<std::size_t>(rng.uniform(1, 3)), nb = static_cast<std::size_t>(rng.uniform(1, 3));
      g.a = random_directed_category(rng, na, 4, "a");
      g.b = random_directed_category(rng, nb, 4, "b");
      const int kind = static_cast<int>(rng.uniform(0, 3));
      const bool separated = kind == 3 && na >= 2;
      const std::size_t cut = separated ? 1 + rng.index(na - 1) : 0;
      g.functorial_maps = nb == 2 && g.b->dim(0, 1) > 0 && rng.coin(0.6);
      std::vector<TwistedComplex> ps, ts, ss;
      for (std::size_t j = 0; j < nb; ++j) {
        ts.push_back(separated ? random_twcx(rng, g.a, 2, std::pair{std::size_t{0}, cut - 1}) : random_twcx(rng, g.a, 2));
        ps.push_back(separated ? random_twcx(rng, g.a, 2, std::pair{cut, na - 1}) : random_twcx(rng, g.a, 2));
        if (kind == 1) ts.back() = zero_complex(g.a);
        ss.push_back(kind == 0 ? ts.back() : kind == 1 ? ps.back() : direct_sum(ps.back(), ts.back()));
      }
      std::map<HomKey, TwMorphism> smaps, tmaps;
      if (g.functorial_maps) {
        tmaps = random_functor_maps(rng, g.b, ts);
        if (kind == 0) smaps = tmaps;
        if (kind == 1) smaps = random_functor_maps(rng, g.b, ps);
        if (kind >= 2) {
          const auto pmaps = random_functor_maps(rng, g.b, ps);
          for (const auto& [key, mp] : pmaps) smaps[key] = block_diagonal(ss[0], ss[1], mp, tmaps.at(key));
        }
        if (kind == 1) tmaps.clear();
      }
      g.kind = kind == 0 ? "identity" : kind == 1 ? "zero-target" : separated ? "separated-split" : "split";
      g.s = validate_bimodule({g.b, g.a, ss, smaps});
      g.t = validate_bimodule({g.b, g.a, ts, tmaps});
      std::vector<TwMorphism> comps;
      for (std::size_t j = 0; j < nb; ++j) {
        const TwistedComplex &s = g.s.object(j), &t = g.t.object(j);
        if (kind == 0) {
          comps.push_back(identity_morphism(s));
          continue;
        }
        TwMorphism phi(s, t, 0);
        if (kind >= 2) {
          const TwistedComplex& p = ps[j];
          if (!g.functorial_maps) {
            const TwMorphism gmap = random_closed_morphism(rng, p, t);
            for (const auto& [key, v] : gmap.entries()) phi.add(key.first, key.second, 1, v);
          }
          for (std::size_t i = 0; i < t.size(); ++i) phi.add(i, p.size() + i, 1, g.a->unit(t.generator(i).object));
        }
        comps.push_back(phi);
      }
      g.phi = validate_bimodule_morphism({g.s, g.t, comps});
      return g;
    } catch (const ValidationError&) {
      // a random draw that is not a valid instance; draw again
    }
  }
}

/// Hom(h^X, Z) assembled directly from the category: components c_i in
/// Hom(X, a_i) of degree n + s_i, D c = ((-1)^{s_i} d c_i + sum_j delta(i,j) c_j).
inline DegreeDims evaluation_oracle(const TwistedComplex& z, std::size_t x) {
  const FinDGCategory& cat = z.cat();
  struct Label {
    std::size_t gen, basis;
  };
  std::vector<Label> labels;
  std::vector<int> degrees;
  std::vector<std::size_t> offset;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const auto& g = z.generator(i);
    offset.push_back(labels.size());
    for (std::size_t e = 0; e < cat.dim(x, g.object); ++e) {
      labels.push_back({i, e});
      degrees.push_back(cat.degree(x, g.object, e) - g.shift);
    }
  }
  SparseMatrix d(labels.size(), labels.size());
  for (std::size_t col = 0; col < labels.size(); ++col) {
    const auto [j, e] = labels[col];
    const auto& gj = z.generator(j);
    const Scalar sign = gj.shift % 2 == 0 ? 1 : -1;
    for (const auto& [k, c] : cat.d_basis(x, gj.object, e)) d.add(offset[j] + k, col, sign * c);
    for (std::size_t i : z.targets_of(j)) {
      const Vec& delta = *z.entry(i, j);
      const auto& gi = z.generator(i);
      for (std::size_t b = 0; b < delta.size(); ++b) {
        if (delta[b] == 0) continue;
        for (const auto& [h, c] : cat.compose_basis(x, gj.object, gi.object, b, e)) d.add(offset[i] + h, col, delta[b] * c);
      }
    }
  }
  return cohomology_dims(Cochain::from_flat(degrees, d));
}

/// Rank of the map induced on H^n by post-composition with f: Z -> W.
inline std::size_t induced_rank(const TwistedComplex& v, const TwMorphism& f, int n) {
  HomComplex hz(v, f.source()), hw(v, f.target());
  const std::size_t width = hw.complex().dim(n);
  if (width == 0) return 0;
  Echelon boundaries(width);
  if (const SparseMatrix* d = hw.complex().differential(n - 1)) {
    const SparseMatrix t = d->transpose();
    for (std::size_t r = 0; r < t.rows(); ++r) boundaries.insert(t.row(r));
  }
  const std::size_t base = boundaries.rank();
  for (const Vec& rep : cohomology_representatives(hz.complex(), n)) {
    const TwMorphism alpha = hz.morphism(hz.from_degree(n, rep), n);
    boundaries.insert(to_sparse(hw.to_degree(n, hw.flatten(compose_morphisms(f, alpha)))));
  }
  return boundaries.rank() - base;
}

/// dims of H^* Hom(V, cone f) from the long exact sequence of the triangle.
inline DegreeDims les_oracle(const TwistedComplex& v, const TwMorphism& f) {
  const DegreeDims hz = hom_cohomology(v, f.source()), hw = hom_cohomology(v, f.target());
  auto at = [](const DegreeDims& d, int n) {
    auto it = d.find(n);
    return it == d.end() ? std::size_t{0} : it->second;
  };
  std::set<int> degs;
  for (const auto& [n, k] : hw) degs.insert(n);
  for (const auto& [n, k] : hz) degs.insert(n - 1);
  DegreeDims out;
  for (int n : degs) {
    const std::size_t dim = at(hw, n) - induced_rank(v, f, n) + at(hz, n + 1) - induced_rank(v, f, n + 1);
    if (dim) out[n] = dim;
  }
  return out;
}

inline long euler_of(const DegreeDims& d) { return euler_characteristic(d); }

}  // namespace dgtest
