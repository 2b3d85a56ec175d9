#include "dgglue/glue.hpp"

#include <optional>
#include <set>

#include "dgglue/errors.hpp"

namespace dgglue {

namespace {

int sign(int n) { return n % 2 == 0 ? 1 : -1; }

bool same_category(const CategoryPtr& a, const CategoryPtr& b) {
  return a && b && a->content_hash() == b->content_hash();
}

Vec basis_vec(std::size_t dim, std::size_t b) {
  Vec v(dim);
  v[b] = 1;
  return v;
}

std::string hom_loc(const FinDGCategory& cat, std::size_t j, std::size_t k, std::size_t b) {
  return cat.basis_name(j, k, b) + " in Hom(" + cat.object_name(j) + "," + cat.object_name(k) + ")";
}

/// Appends blk shifted by s to raw; returns the index of its first generator.
std::size_t place_block(RawTwistedComplex& raw, const TwistedComplex& blk, int s) {
  const std::size_t start = raw.generators.size();
  for (const auto& g : blk.generators()) raw.generators.push_back({g.object, g.shift + s});
  for (const auto& [key, v] : blk.delta()) {
    Vec w = v;
    if (s % 2 != 0)
      for (auto& x : w) x = -x;
    raw.delta.emplace(std::make_pair(key.first + start, key.second + start), std::move(w));
  }
  return start;
}

void accumulate(EntryMap& m, std::size_t i, std::size_t j, const Scalar& c, const Vec& v) {
  auto it = m.find({i, j});
  if (it == m.end()) {
    Vec w(v.size());
    axpy(w, c, v);
    if (!is_zero(w)) m.emplace(std::make_pair(i, j), std::move(w));
    return;
  }
  axpy(it->second, c, v);
  if (is_zero(it->second)) m.erase(it);
}

void place_entries(EntryMap& m, const TwMorphism& f, std::size_t row0, std::size_t col0, const Scalar& c = 1) {
  for (const auto& [key, v] : f.entries()) accumulate(m, row0 + key.first, col0 + key.second, c, v);
}

}  // namespace

// ---------------------------------------------------------------------------
// Bimodules

TwMorphism Bimodule::apply(std::size_t j, std::size_t k, const Vec& b) const {
  std::optional<int> deg;
  EntryMap acc;
  for (std::size_t e = 0; e < b.size(); ++e) {
    if (b[e] == 0) continue;
    const TwMorphism& m = map(j, k, e);
    if (deg && *deg != m.degree()) throw ValidationError("bimodule applied to an inhomogeneous element");
    deg = m.degree();
    place_entries(acc, m, 0, 0, b[e]);
  }
  return TwMorphism(objects_.at(j), objects_.at(k), deg.value_or(0), std::move(acc));
}

Bimodule validate_bimodule(RawBimodule raw) {
  if (!raw.source || !raw.target) throw ValidationError("bimodule without source or target category");
  const FinDGCategory& b = *raw.source;
  std::vector<std::string> errors;
  if (raw.objects.size() != b.size())
    throw ValidationError("bimodule assigns " + std::to_string(raw.objects.size()) + " objects, source has " +
                          std::to_string(b.size()));
  for (std::size_t j = 0; j < b.size(); ++j)
    if (!same_category(raw.objects[j].category(), raw.target))
      errors.push_back("value at " + b.object_name(j) + " lives over the wrong category");
  if (!errors.empty()) throw ValidationError(errors);

  Bimodule s;
  s.source_ = raw.source;
  s.target_ = raw.target;
  s.objects_ = raw.objects;
  for (const auto& [key, f] : raw.morphisms) {
    const auto [j, k, e] = key;
    if (j >= b.size() || k >= b.size() || e >= b.dim(j, k)) {
      errors.push_back("bimodule morphism for an unknown basis element");
      continue;
    }
    if (!(f.source() == raw.objects[j]) || !(f.target() == raw.objects[k]))
      errors.push_back("image of " + hom_loc(b, j, k, e) + " has the wrong source or target");
    else if (f.degree() != b.degree(j, k, e))
      errors.push_back("image of " + hom_loc(b, j, k, e) + " has the wrong degree");
    else {
      try {
        check_morphism(f);
      } catch (const ValidationError& err) {
        errors.push_back("image of " + hom_loc(b, j, k, e) + ": " + err.what());
      }
    }
  }
  if (!errors.empty()) throw ValidationError(errors);

  for (std::size_t j = 0; j < b.size(); ++j)
    for (std::size_t k = 0; k < b.size(); ++k)
      for (std::size_t e = 0; e < b.dim(j, k); ++e) {
        auto it = raw.morphisms.find({j, k, e});
        if (it != raw.morphisms.end()) {
          s.maps_.emplace(it->first, it->second);
        } else if (j == k && b.unit(j) == basis_vec(b.dim(j, j), e)) {
          s.maps_.emplace(HomKey{j, k, e}, identity_morphism(raw.objects[j]));
        } else {
          s.maps_.emplace(HomKey{j, k, e}, TwMorphism(raw.objects[j], raw.objects[k], b.degree(j, k, e)));
        }
      }

  for (std::size_t j = 0; j < b.size(); ++j)
    if (s.apply(j, j, b.unit(j)).entries() != identity_morphism(raw.objects[j]).entries())
      errors.push_back("unit of " + b.object_name(j) + " does not act as the identity");
  for (std::size_t j = 0; j < b.size(); ++j)
    for (std::size_t k = 0; k < b.size(); ++k)
      for (std::size_t e = 0; e < b.dim(j, k); ++e) {
        Vec db(b.dim(j, k));
        for (const auto& [h, c] : b.d_basis(j, k, e)) db[h] = c;
        if (s.apply(j, k, db).entries() != differential(s.map(j, k, e)).entries())
          errors.push_back("S(d b) != D(S(b)) for " + hom_loc(b, j, k, e));
      }
  for (std::size_t j = 0; j < b.size(); ++j)
    for (std::size_t k = 0; k < b.size(); ++k)
      for (std::size_t l = 0; l < b.size(); ++l)
        for (std::size_t f = 0; f < b.dim(j, k); ++f)
          for (std::size_t g = 0; g < b.dim(k, l); ++g) {
            Vec gf(b.dim(j, l));
            for (const auto& [h, c] : b.compose_basis(j, k, l, g, f)) gf[h] = c;
            if (s.apply(j, l, gf).entries() != compose_morphisms(s.map(k, l, g), s.map(j, k, f)).entries())
              errors.push_back("functoriality fails for " + hom_loc(b, k, l, g) + " after " + hom_loc(b, j, k, f));
          }
  if (!errors.empty()) throw ValidationError(errors);
  return s;
}

BimoduleMorphism validate_bimodule_morphism(BimoduleMorphism raw) {
  const Bimodule& s = raw.source;
  const Bimodule& t = raw.target;
  if (!same_category(s.source(), t.source()) || !same_category(s.target(), t.target()))
    throw ValidationError("bimodule morphism between bimodules over different categories");
  const FinDGCategory& b = *s.source();
  if (raw.components.size() != b.size()) throw ValidationError("bimodule morphism has the wrong number of components");
  std::vector<std::string> errors;
  for (std::size_t j = 0; j < b.size(); ++j) {
    const TwMorphism& f = raw.components[j];
    const std::string at = "component at " + b.object_name(j);
    if (!(f.source() == s.object(j)) || !(f.target() == t.object(j))) {
      errors.push_back(at + " has the wrong source or target");
      continue;
    }
    if (f.degree() != 0) {
      errors.push_back(at + " is not of degree 0");
      continue;
    }
    try {
      check_morphism(f);
    } catch (const ValidationError& err) {
      errors.push_back(at + ": " + err.what());
      continue;
    }
    if (!is_closed(f)) errors.push_back(at + " is not closed");
  }
  if (!errors.empty()) throw ValidationError(errors);
  for (std::size_t j = 0; j < b.size(); ++j)
    for (std::size_t k = 0; k < b.size(); ++k)
      for (std::size_t e = 0; e < b.dim(j, k); ++e)
        if (compose_morphisms(raw.components[k], s.map(j, k, e)).entries() !=
            compose_morphisms(t.map(j, k, e), raw.components[j]).entries())
          errors.push_back("naturality fails for " + hom_loc(b, j, k, e));
  if (!errors.empty()) throw ValidationError(errors);
  return raw;
}

BimoduleMorphism identity_bimodule_morphism(const Bimodule& s) {
  BimoduleMorphism id{s, s, {}};
  for (std::size_t j = 0; j < s.size(); ++j) id.components.push_back(identity_morphism(s.object(j)));
  return id;
}

// ---------------------------------------------------------------------------
// Gluing

GluedCategory upper_triangular(const CategoryPtr& a, const CategoryPtr& b, const Bimodule& s) {
  if (!same_category(s.source(), b) || !same_category(s.target(), a))
    throw ValidationError("bimodule does not run from the second category to the first");
  const std::size_t na = a->size(), nb = b->size();
  RawCategory raw;
  raw.name = a->name() + " x " + b->name();
  std::set<std::string> names(a->objects().begin(), a->objects().end());
  bool clash = false;
  for (const auto& o : b->objects()) clash = clash || names.count(o);
  for (const auto& o : a->objects()) raw.add_object(clash ? a->name() + "." + o : o);
  for (const auto& o : b->objects()) raw.add_object(clash ? b->name() + "." + o : o);

  auto copy_side = [&](const FinDGCategory& side, std::size_t off) {
    RawCategory r = side.raw();
    for (auto& [key, hom] : r.homs) raw.homs[{key.first + off, key.second + off}] = std::move(hom);
    for (auto& [x, u] : r.units) raw.units[x + off] = std::move(u);
    for (auto& [key, entries] : r.compositions) {
      const auto [x, y, z] = key;
      raw.compositions[{x + off, y + off, z + off}] = std::move(entries);
    }
  };
  copy_side(*a, 0);
  copy_side(*b, na);

  // cross Homs: Hom_C(x, B_j) is the evaluation of S(B_j) at x
  std::vector<std::vector<HomComplex>> cross(na);
  for (std::size_t x = 0; x < na; ++x)
    for (std::size_t j = 0; j < nb; ++j) {
      cross[x].emplace_back(representable(a, x), s.object(j));
      const HomComplex& hc = cross[x].back();
      HomBasis hom;
      const std::size_t dim = hc.flat_dim();
      hom.differential = Matrix(dim, dim);
      for (const auto& lab : hc.labels()) {
        hom.degrees.push_back(lab.degree);
        const auto ai = s.object(j).generator(lab.row).object;
        hom.names.push_back("[" + std::to_string(lab.row) + "]" + a->basis_name(x, ai, lab.basis));
      }
      const auto& d = hc.flat_differential();
      for (std::size_t r = 0; r < d.rows(); ++r)
        for (const auto& [c, v] : d.row(r)) hom.differential(r, c) = v;
      raw.homs[{x, na + j}] = std::move(hom);
    }

  auto emit = [&](std::size_t x, std::size_t y, std::size_t z, std::size_t g, std::size_t f, const Vec& h) {
    for (std::size_t e = 0; e < h.size(); ++e)
      if (h[e] != 0) raw.compositions[{x, y, z}].push_back({g, f, e, h[e]});
  };
  // right action of A: Hom_C(y, B_j) x Hom_A(x, y) -> Hom_C(x, B_j)
  for (std::size_t x = 0; x < na; ++x)
    for (std::size_t y = 0; y < na; ++y) {
      if (!a->dim(x, y)) continue;
      const TwistedComplex hx = representable(a, x), hy = representable(a, y);
      for (std::size_t j = 0; j < nb; ++j) {
        const HomComplex& gy = cross[y][j];
        const HomComplex& gx = cross[x][j];
        for (std::size_t g = 0; g < gy.flat_dim(); ++g) {
          const TwMorphism gm = gy.morphism(basis_vec(gy.flat_dim(), g), gy.degrees()[g]);
          for (std::size_t f = 0; f < a->dim(x, y); ++f) {
            const TwMorphism fm(hx, hy, a->degree(x, y, f), {{{0, 0}, basis_vec(a->dim(x, y), f)}});
            emit(x, y, na + j, g, f, gx.flatten(compose_morphisms(gm, fm)));
          }
        }
      }
    }
  // left action of B through S: Hom_B(B_j, B_k) x Hom_C(x, B_j) -> Hom_C(x, B_k)
  for (std::size_t j = 0; j < nb; ++j)
    for (std::size_t k = 0; k < nb; ++k)
      for (std::size_t g = 0; g < b->dim(j, k); ++g) {
        const TwMorphism& sg = s.map(j, k, g);
        for (std::size_t x = 0; x < na; ++x) {
          const HomComplex& fj = cross[x][j];
          const HomComplex& fk = cross[x][k];
          for (std::size_t f = 0; f < fj.flat_dim(); ++f) {
            const TwMorphism fm = fj.morphism(basis_vec(fj.flat_dim(), f), fj.degrees()[f]);
            emit(x, na + j, na + k, g, f, fk.flatten(compose_morphisms(sg, fm)));
          }
        }
      }

  GluedCategory c;
  c.category = make_category(raw);
  c.a = a;
  c.b = b;
  c.s = s;
  c.sides.assign(na, Side::A);
  c.sides.resize(na + nb, Side::B);
  return c;
}

std::vector<std::string> gluing_shape_violations(const GluedCategory& c) {
  std::vector<std::string> out;
  const FinDGCategory& cat = *c.category;
  const std::size_t na = c.a->size(), nb = c.b->size();
  auto same_hom = [&](const FinDGCategory& side, std::size_t x, std::size_t y, std::size_t cx, std::size_t cy) {
    if (side.degrees(x, y) != cat.degrees(cx, cy)) return false;
    for (std::size_t e = 0; e < side.dim(x, y); ++e)
      if (side.d_basis(x, y, e) != cat.d_basis(cx, cy, e)) return false;
    return true;
  };
  for (std::size_t x = 0; x < na; ++x)
    for (std::size_t y = 0; y < na; ++y)
      if (!same_hom(*c.a, x, y, x, y))
        out.push_back("Hom(" + cat.object_name(x) + "," + cat.object_name(y) + ") differs from the first category");
  for (std::size_t x = 0; x < nb; ++x)
    for (std::size_t y = 0; y < nb; ++y)
      if (!same_hom(*c.b, x, y, na + x, na + y))
        out.push_back("Hom(" + cat.object_name(na + x) + "," + cat.object_name(na + y) +
                      ") differs from the second category");
  for (std::size_t j = 0; j < nb; ++j)
    for (std::size_t x = 0; x < na; ++x) {
      if (cat.dim(na + j, x) != 0)
        out.push_back("Hom(" + cat.object_name(na + j) + "," + cat.object_name(x) + ") is not zero");
      const HomComplex hc(representable(c.a, x), c.s.object(j));
      bool ok = hc.degrees() == cat.degrees(x, na + j);
      const SparseMatrix& d = hc.flat_differential();
      for (std::size_t e = 0; ok && e < hc.flat_dim(); ++e)
        for (const auto& [h, v] : cat.d_basis(x, na + j, e)) ok = ok && d.at(h, e) == v;
      if (ok) ok = d.nonzeros() == [&] {
        std::size_t n = 0;
        for (std::size_t e = 0; e < hc.flat_dim(); ++e) n += cat.d_basis(x, na + j, e).size();
        return n;
      }();
      if (!ok)
        out.push_back("Hom(" + cat.object_name(x) + "," + cat.object_name(na + j) +
                      ") is not the evaluation of the bimodule");
    }
  return out;
}

TwistedComplex embed(const GluedCategory& c, Side side, const TwistedComplex& z) {
  const CategoryPtr& from = side == Side::A ? c.a : c.b;
  if (!same_category(z.category(), from)) throw ValidationError("embedding a complex from the wrong side");
  const std::size_t off = side == Side::A ? 0 : c.a->size();
  RawTwistedComplex raw{c.category, z.generators(), z.delta()};
  for (auto& g : raw.generators) g.object += off;
  return validate_twcx(std::move(raw));
}

TwMorphism embed(const GluedCategory& c, Side side, const TwMorphism& f) {
  return TwMorphism(embed(c, side, f.source()), embed(c, side, f.target()), f.degree(), f.entries());
}

TwistedComplex restrict_to(const GluedCategory& c, Side side, const TwistedComplex& z) {
  if (!same_category(z.category(), c.category)) throw ValidationError("restricting a complex not over the gluing");
  const std::size_t na = c.a->size();
  if (side == Side::B) {
    RawTwistedComplex raw{c.b, {}, {}};
    std::vector<std::size_t> index(z.size(), HomComplex::npos);
    for (std::size_t j = 0; j < z.size(); ++j) {
      const auto& g = z.generator(j);
      if (c.side(g.object) == Side::A) continue;
      index[j] = raw.generators.size();
      raw.generators.push_back({g.object - na, g.shift});
    }
    for (const auto& [key, v] : z.delta())
      if (index[key.first] != HomComplex::npos && index[key.second] != HomComplex::npos)
        raw.delta.emplace(std::make_pair(index[key.first], index[key.second]), v);
    return validate_twcx(std::move(raw));
  }

  RawTwistedComplex raw{c.a, {}, {}};
  std::vector<std::size_t> start(z.size());
  for (std::size_t j = 0; j < z.size(); ++j) {
    const auto& g = z.generator(j);
    if (c.side(g.object) == Side::A) {
      start[j] = raw.generators.size();
      raw.generators.push_back(g);
    } else {
      start[j] = place_block(raw, c.s.object(g.object - na), g.shift);
    }
  }
  for (const auto& [key, v] : z.delta()) {
    const auto [i, j] = key;
    const auto oi = z.generator(i).object, oj = z.generator(j).object;
    if (c.side(oj) == Side::A && c.side(oi) == Side::A) {
      accumulate(raw.delta, start[i], start[j], 1, v);
    } else if (c.side(oj) == Side::A) {
      const HomComplex hc(representable(c.a, oj), c.s.object(oi - na));
      int deg = 0;
      for (std::size_t e = 0; e < v.size(); ++e)
        if (v[e] != 0) deg = hc.degrees()[e];
      place_entries(raw.delta, hc.morphism(v, deg), start[i], start[j]);
    } else if (c.side(oi) == Side::B) {
      place_entries(raw.delta, c.s.apply(oj - na, oi - na, v), start[i], start[j]);
    }
  }
  return validate_twcx(std::move(raw));
}

TwistedComplex tensor(const TwistedComplex& n, const Bimodule& p) {
  if (!same_category(n.category(), p.source())) throw ValidationError("tensoring a complex over the wrong category");
  RawTwistedComplex raw{p.target(), {}, {}};
  std::vector<std::size_t> start(n.size());
  for (std::size_t j = 0; j < n.size(); ++j) start[j] = place_block(raw, p.object(n.generator(j).object), n.generator(j).shift);
  for (const auto& [key, v] : n.delta()) {
    const auto [i, j] = key;
    place_entries(raw.delta, p.apply(n.generator(j).object, n.generator(i).object, v), start[i], start[j]);
  }
  return validate_twcx(std::move(raw));
}

Bimodule underline(const GluedCategory& c, const Bimodule& p) {
  if (!same_category(p.source(), c.b) || !same_category(p.target(), c.a))
    throw ValidationError("bimodule does not match the gluing");
  RawBimodule raw{c.b, c.category, {}, {}};
  for (std::size_t j = 0; j < p.size(); ++j) raw.objects.push_back(embed(c, Side::A, p.object(j)));
  const FinDGCategory& b = *c.b;
  for (std::size_t j = 0; j < b.size(); ++j)
    for (std::size_t k = 0; k < b.size(); ++k)
      for (std::size_t e = 0; e < b.dim(j, k); ++e) raw.morphisms.emplace(HomKey{j, k, e}, embed(c, Side::A, p.map(j, k, e)));
  return validate_bimodule(std::move(raw));
}

Bimodule bimodule_cone(const BimoduleMorphism& phi) {
  const Bimodule& s = phi.source;
  const Bimodule& t = phi.target;
  RawBimodule raw{s.source(), s.target(), {}, {}};
  for (std::size_t j = 0; j < s.size(); ++j) raw.objects.push_back(cone(phi.components[j]));
  const FinDGCategory& b = *s.source();
  for (std::size_t j = 0; j < b.size(); ++j)
    for (std::size_t k = 0; k < b.size(); ++k)
      for (std::size_t e = 0; e < b.dim(j, k); ++e) {
        const int deg = b.degree(j, k, e);
        EntryMap m;
        place_entries(m, s.map(j, k, e), 0, 0, sign(deg));
        place_entries(m, t.map(j, k, e), s.object(k).size(), s.object(j).size());
        raw.morphisms.emplace(HomKey{j, k, e}, TwMorphism(raw.objects[j], raw.objects[k], deg, std::move(m)));
      }
  return validate_bimodule(std::move(raw));
}

Bimodule widetilde(const GluedCategory& c, const BimoduleMorphism& phi) {
  const Bimodule& s = phi.source;
  const Bimodule& t = phi.target;
  if (!same_category(s.source(), c.b) || !same_category(s.target(), c.a) || !same_category(t.target(), c.a))
    throw ValidationError("bimodule morphism does not match the gluing");
  const FinDGCategory& a = *c.a;
  const FinDGCategory& b = *c.b;
  RawBimodule raw{c.b, c.category, {}, {}};
  for (std::size_t j = 0; j < b.size(); ++j) {
    const TwistedComplex sj = embed(c, Side::A, s.object(j));
    const TwistedComplex w = direct_sum(representable(c.category, c.b_object(j)), embed(c, Side::A, t.object(j)));
    TwMorphism psi(sj, w, 0);
    for (std::size_t k = 0; k < sj.size(); ++k) {
      const auto ak = s.object(j).generator(k).object;
      const HomComplex hc(representable(c.a, ak), s.object(j));
      Vec u(hc.flat_dim());
      const Vec& unit = a.unit(ak);
      const std::size_t off = hc.offset(k, 0);
      for (std::size_t e = 0; e < unit.size(); ++e) u[off + e] = unit[e];
      psi.add(0, k, 1, u);
    }
    for (const auto& [key, v] : phi.components[j].entries()) psi.add(1 + key.first, key.second, -1, v);
    raw.objects.push_back(cone(psi));
  }
  for (std::size_t j = 0; j < b.size(); ++j)
    for (std::size_t k = 0; k < b.size(); ++k)
      for (std::size_t e = 0; e < b.dim(j, k); ++e) {
        const int deg = b.degree(j, k, e);
        const std::size_t nsj = s.object(j).size(), nsk = s.object(k).size();
        EntryMap m;
        place_entries(m, s.map(j, k, e), 0, 0, sign(deg));
        m.emplace(std::make_pair(nsk, nsj), basis_vec(b.dim(j, k), e));
        place_entries(m, t.map(j, k, e), nsk + 1, nsj + 1);
        raw.morphisms.emplace(HomKey{j, k, e}, TwMorphism(raw.objects[j], raw.objects[k], deg, std::move(m)));
      }
  return validate_bimodule(std::move(raw));
}

}  // namespace dgglue
