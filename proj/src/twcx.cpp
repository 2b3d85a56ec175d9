#include "dgglue/twcx.hpp"

#include <deque>

#include "dgglue/errors.hpp"

namespace dgglue {

namespace {

int sign(int n) { return n % 2 == 0 ? 1 : -1; }

void add_into(EntryMap& m, std::size_t i, std::size_t j, const Scalar& c, const Vec& v) {
  if (c == 0 || is_zero(v)) return;
  auto it = m.find({i, j});
  if (it == m.end()) {
    Vec w(v.size());
    axpy(w, c, v);
    m.emplace(std::make_pair(i, j), std::move(w));
    return;
  }
  axpy(it->second, c, v);
  if (is_zero(it->second)) m.erase(it);
}

void check_same_category(const CategoryPtr& a, const CategoryPtr& b) {
  if (!a || !b || a->content_hash() != b->content_hash())
    throw ValidationError("twisted complexes live over different categories");
}

std::string entry_loc(std::size_t i, std::size_t j) {
  return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

}  // namespace

// ---------------------------------------------------------------------------
// TwistedComplex

const Vec* TwistedComplex::entry(std::size_t i, std::size_t j) const {
  auto it = data_->delta.find({i, j});
  return it == data_->delta.end() ? nullptr : &it->second;
}

bool TwistedComplex::operator==(const TwistedComplex& o) const {
  if (data_ == o.data_) return true;
  if (!data_ || !o.data_) return false;
  return data_->category->content_hash() == o.data_->category->content_hash() &&
         data_->generators == o.data_->generators && data_->delta == o.data_->delta;
}

TwistedComplex validate_twcx(RawTwistedComplex raw) {
  if (!raw.category) throw ValidationError("twisted complex without an ambient category");
  const FinDGCategory& cat = *raw.category;
  const std::size_t n = raw.generators.size();
  std::vector<std::string> errors;
  for (std::size_t i = 0; i < n; ++i)
    if (raw.generators[i].object >= cat.size())
      errors.push_back("generator " + std::to_string(i) + " references an unknown object");
  if (!errors.empty()) throw ValidationError(errors);

  EntryMap delta;
  for (auto& [key, v] : raw.delta) {
    const auto [i, j] = key;
    if (i >= n || j >= n) {
      errors.push_back("delta entry " + entry_loc(i, j) + " out of range");
      continue;
    }
    const auto& gi = raw.generators[i];
    const auto& gj = raw.generators[j];
    if (v.size() != cat.dim(gj.object, gi.object)) {
      errors.push_back("delta entry " + entry_loc(i, j) + " has wrong length");
      continue;
    }
    if (is_zero(v)) continue;
    const int want = 1 + gi.shift - gj.shift;
    for (std::size_t b = 0; b < v.size(); ++b)
      if (v[b] != 0 && cat.degree(gj.object, gi.object, b) != want) {
        errors.push_back("delta entry " + entry_loc(i, j) + " has a component of degree " +
                         std::to_string(cat.degree(gj.object, gi.object, b)) + ", expected " + std::to_string(want));
        break;
      }
    delta.emplace(key, std::move(v));
  }
  if (!errors.empty()) throw ValidationError(errors);

  // strict triangularity: the generator graph must be acyclic
  std::vector<std::vector<std::size_t>> out(n), in(n);
  for (const auto& [key, v] : delta) {
    out[key.second].push_back(key.first);
    in[key.first].push_back(key.second);
  }
  {
    std::vector<std::size_t> indeg(n);
    for (std::size_t i = 0; i < n; ++i) indeg[i] = in[i].size();
    std::deque<std::size_t> ready;
    for (std::size_t i = 0; i < n; ++i)
      if (!indeg[i]) ready.push_back(i);
    std::size_t seen = 0;
    while (!ready.empty()) {
      const std::size_t j = ready.front();
      ready.pop_front();
      ++seen;
      for (std::size_t i : out[j])
        if (--indeg[i] == 0) ready.push_back(i);
    }
    if (seen != n) throw ValidationError("cyclic generator graph: delta is not strictly triangular");
  }

  // Maurer-Cartan
  EntryMap mc;
  for (const auto& [key, v] : delta) {
    const auto [i, j] = key;
    const auto& gi = raw.generators[i];
    const auto& gj = raw.generators[j];
    add_into(mc, i, j, sign(gi.shift), cat.d(gj.object, gi.object, v));
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i : out[k])
      for (std::size_t j : in[k]) {
        const auto ai = raw.generators[i].object, ak = raw.generators[k].object, aj = raw.generators[j].object;
        add_into(mc, i, j, 1, cat.compose(aj, ak, ai, delta.at({i, k}), delta.at({k, j})));
      }
  for (const auto& [key, v] : mc) errors.push_back("Maurer-Cartan failure at entry " + entry_loc(key.first, key.second));
  if (!errors.empty()) throw ValidationError(errors);

  auto data = std::make_shared<TwistedComplex::Data>();
  data->category = std::move(raw.category);
  data->generators = std::move(raw.generators);
  data->delta = std::move(delta);
  data->out = std::move(out);
  data->in = std::move(in);
  TwistedComplex z;
  z.data_ = std::move(data);
  return z;
}

TwistedComplex representable(const CategoryPtr& cat, std::size_t object, int s) {
  if (object >= cat->size()) throw ValidationError("unknown object index " + std::to_string(object));
  return validate_twcx({cat, {{object, s}}, {}});
}

TwistedComplex zero_complex(const CategoryPtr& cat) { return validate_twcx({cat, {}, {}}); }

TwistedComplex shift(const TwistedComplex& z, int n) {
  RawTwistedComplex raw{z.category(), z.generators(), {}};
  for (auto& g : raw.generators) g.shift += n;
  for (const auto& [key, v] : z.delta()) {
    Vec w = v;
    if (n % 2 != 0)
      for (auto& x : w) x = -x;
    raw.delta.emplace(key, std::move(w));
  }
  return validate_twcx(std::move(raw));
}

TwistedComplex direct_sum(const TwistedComplex& a, const TwistedComplex& b) {
  check_same_category(a.category(), b.category());
  RawTwistedComplex raw{a.category(), a.generators(), a.delta()};
  const std::size_t off = a.size();
  for (const auto& g : b.generators()) raw.generators.push_back(g);
  for (const auto& [key, v] : b.delta()) raw.delta.emplace(std::make_pair(key.first + off, key.second + off), v);
  return validate_twcx(std::move(raw));
}

TwistedComplex direct_sum(const CategoryPtr& cat, const std::vector<TwistedComplex>& parts) {
  TwistedComplex acc = zero_complex(cat);
  for (const auto& p : parts) acc = direct_sum(acc, p);
  return acc;
}

std::vector<long> k0_class(const TwistedComplex& z) {
  std::vector<long> k(z.cat().size());
  for (const auto& g : z.generators()) k[g.object] += sign(g.shift);
  return k;
}

// ---------------------------------------------------------------------------
// Morphisms

TwMorphism::TwMorphism(TwistedComplex source, TwistedComplex target, int degree, EntryMap entries)
    : source_(std::move(source)), target_(std::move(target)), degree_(degree) {
  for (auto& [key, v] : entries)
    if (!dgglue::is_zero(v)) entries_.emplace(key, std::move(v));
}

const Vec* TwMorphism::entry(std::size_t i, std::size_t j) const {
  auto it = entries_.find({i, j});
  return it == entries_.end() ? nullptr : &it->second;
}

void TwMorphism::add(std::size_t i, std::size_t j, const Scalar& c, const Vec& v) { add_into(entries_, i, j, c, v); }

TwMorphism TwMorphism::operator+(const TwMorphism& o) const {
  if (degree_ != o.degree_) throw ValidationError("adding morphisms of different degrees");
  TwMorphism s = *this;
  for (const auto& [key, v] : o.entries_) s.add(key.first, key.second, 1, v);
  return s;
}

TwMorphism TwMorphism::operator-(const TwMorphism& o) const { return *this + o.scaled(-1); }

TwMorphism TwMorphism::scaled(const Scalar& c) const {
  TwMorphism s(source_, target_, degree_);
  for (const auto& [key, v] : entries_) s.add(key.first, key.second, c, v);
  return s;
}

bool TwMorphism::operator==(const TwMorphism& o) const {
  return degree_ == o.degree_ && source_ == o.source_ && target_ == o.target_ && entries_ == o.entries_;
}

void check_morphism(const TwMorphism& f) {
  const auto& cat = f.source().cat();
  check_same_category(f.source().category(), f.target().category());
  std::vector<std::string> errors;
  for (const auto& [key, v] : f.entries()) {
    const auto [i, j] = key;
    if (i >= f.target().size() || j >= f.source().size()) {
      errors.push_back("morphism entry " + entry_loc(i, j) + " out of range");
      continue;
    }
    const auto& gi = f.target().generator(i);
    const auto& gj = f.source().generator(j);
    if (v.size() != cat.dim(gj.object, gi.object)) {
      errors.push_back("morphism entry " + entry_loc(i, j) + " has wrong length");
      continue;
    }
    const int want = f.degree() + gi.shift - gj.shift;
    for (std::size_t b = 0; b < v.size(); ++b)
      if (v[b] != 0 && cat.degree(gj.object, gi.object, b) != want) {
        errors.push_back("morphism entry " + entry_loc(i, j) + " is not of degree " + std::to_string(want));
        break;
      }
  }
  if (!errors.empty()) throw ValidationError(errors);
}

TwMorphism identity_morphism(const TwistedComplex& z) {
  TwMorphism id(z, z, 0);
  for (std::size_t i = 0; i < z.size(); ++i) id.add(i, i, 1, z.cat().unit(z.generator(i).object));
  return id;
}

TwMorphism differential(const TwMorphism& f) {
  const auto& cat = f.source().cat();
  const auto& src = f.source();
  const auto& tgt = f.target();
  TwMorphism df(src, tgt, f.degree() + 1);
  const int n = f.degree();
  for (const auto& [key, v] : f.entries()) {
    const auto [i, j] = key;
    const auto ai = tgt.generator(i).object, aj = src.generator(j).object;
    df.add(i, j, sign(tgt.generator(i).shift), cat.d(aj, ai, v));
    for (std::size_t k : tgt.targets_of(i)) {
      const auto ak = tgt.generator(k).object;
      df.add(k, j, 1, cat.compose(aj, ai, ak, *tgt.entry(k, i), v));
    }
    for (std::size_t l : src.sources_of(j)) {
      const auto al = src.generator(l).object;
      df.add(i, l, -sign(n), cat.compose(al, aj, ai, v, *src.entry(j, l)));
    }
  }
  return df;
}

bool is_closed(const TwMorphism& f) { return differential(f).is_zero(); }

TwMorphism compose_morphisms(const TwMorphism& g, const TwMorphism& f) {
  if (!(f.target() == g.source())) throw ValidationError("composing morphisms with mismatched ends");
  const auto& cat = f.source().cat();
  TwMorphism gf(f.source(), g.target(), f.degree() + g.degree());
  // index g by its source column
  std::map<std::size_t, std::vector<std::pair<std::size_t, const Vec*>>> by_col;
  for (const auto& [key, v] : g.entries()) by_col[key.second].emplace_back(key.first, &v);
  for (const auto& [key, v] : f.entries()) {
    const auto [k, j] = key;
    auto it = by_col.find(k);
    if (it == by_col.end()) continue;
    const auto aj = f.source().generator(j).object, ak = f.target().generator(k).object;
    for (const auto& [i, gv] : it->second) {
      const auto ai = g.target().generator(i).object;
      gf.add(i, j, 1, cat.compose(aj, ak, ai, *gv, v));
    }
  }
  return gf;
}

TwistedComplex cone(const TwMorphism& f) {
  check_morphism(f);
  if (f.degree() != 0) throw ValidationError("cone of a morphism of nonzero degree");
  if (!is_closed(f)) throw ValidationError("cone of a non-closed morphism");
  const auto& src = f.source();
  const auto& tgt = f.target();
  RawTwistedComplex raw{src.category(), {}, {}};
  const std::size_t off = src.size();
  for (auto g : src.generators()) {
    g.shift += 1;
    raw.generators.push_back(g);
  }
  for (const auto& g : tgt.generators()) raw.generators.push_back(g);
  for (const auto& [key, v] : src.delta()) {
    Vec w = v;
    for (auto& x : w) x = -x;
    raw.delta.emplace(key, std::move(w));
  }
  for (const auto& [key, v] : tgt.delta()) raw.delta.emplace(std::make_pair(key.first + off, key.second + off), v);
  for (const auto& [key, v] : f.entries()) raw.delta.emplace(std::make_pair(key.first + off, key.second), v);
  return validate_twcx(std::move(raw));
}

// ---------------------------------------------------------------------------
// Hom complexes

namespace {

struct FlatLayout {
  std::vector<HomBasisLabel> labels;
  std::vector<int> degrees;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> offset;
};

FlatLayout layout(const TwistedComplex& src, const TwistedComplex& tgt) {
  FlatLayout l;
  const auto& cat = src.cat();
  for (std::size_t i = 0; i < tgt.size(); ++i)
    for (std::size_t j = 0; j < src.size(); ++j) {
      const auto ai = tgt.generator(i).object, aj = src.generator(j).object;
      const std::size_t dim = cat.dim(aj, ai);
      if (!dim) continue;
      l.offset[{i, j}] = l.labels.size();
      for (std::size_t b = 0; b < dim; ++b) {
        const int deg = cat.degree(aj, ai, b) - tgt.generator(i).shift + src.generator(j).shift;
        l.labels.push_back({i, j, b, deg});
        l.degrees.push_back(deg);
      }
    }
  return l;
}

SparseMatrix build_differential(const TwistedComplex& src, const TwistedComplex& tgt, const FlatLayout& l) {
  const auto& cat = src.cat();
  const std::size_t dim = l.labels.size();
  SparseMatrix d(dim, dim);
  for (std::size_t e = 0; e < dim; ++e) {
    const auto& lab = l.labels[e];
    const std::size_t i = lab.row, j = lab.col, b = lab.basis;
    const auto ai = tgt.generator(i).object, aj = src.generator(j).object;
    const int n = lab.degree;
    const std::size_t base = l.offset.at({i, j});
    const int s = sign(tgt.generator(i).shift);
    for (const auto& [h, c] : cat.d_basis(aj, ai, b)) d.add(base + h, e, s * c);
    for (std::size_t k : tgt.targets_of(i)) {
      const auto ak = tgt.generator(k).object;
      const Vec& q = *tgt.entry(k, i);
      auto off = l.offset.find({k, j});
      if (off == l.offset.end()) continue;
      for (std::size_t a = 0; a < q.size(); ++a) {
        if (q[a] == 0) continue;
        for (const auto& [h, c] : cat.compose_basis(aj, ai, ak, a, b)) d.add(off->second + h, e, q[a] * c);
      }
    }
    for (std::size_t m : src.sources_of(j)) {
      const auto am = src.generator(m).object;
      const Vec& q = *src.entry(j, m);
      auto off = l.offset.find({i, m});
      if (off == l.offset.end()) continue;
      for (std::size_t a = 0; a < q.size(); ++a) {
        if (q[a] == 0) continue;
        for (const auto& [h, c] : cat.compose_basis(am, aj, ai, b, a)) d.add(off->second + h, e, -sign(n) * q[a] * c);
      }
    }
  }
  return d;
}

}  // namespace

HomComplex::HomComplex(const TwistedComplex& source, const TwistedComplex& target)
    : source_(source), target_(target), grading_(std::span<const int>{}) {
  check_same_category(source.category(), target.category());
  FlatLayout l = layout(source, target);
  labels_ = std::move(l.labels);
  degrees_ = std::move(l.degrees);
  offset_ = std::move(l.offset);
  FlatLayout view{labels_, degrees_, offset_};
  d_ = build_differential(source, target, view);
  grading_ = FlatGrading(degrees_);
  complex_ = Cochain::from_flat(degrees_, d_);
}

std::size_t HomComplex::offset(std::size_t row, std::size_t col) const {
  auto it = offset_.find({row, col});
  return it == offset_.end() ? npos : it->second;
}

Vec HomComplex::flatten(const TwMorphism& f) const {
  Vec v(flat_dim());
  for (const auto& [key, e] : f.entries()) {
    auto it = offset_.find(key);
    if (it == offset_.end()) throw ValidationError("morphism entry outside the Hom complex");
    for (std::size_t b = 0; b < e.size(); ++b) v[it->second + b] = e[b];
  }
  return v;
}

TwMorphism HomComplex::morphism(const Vec& flat, int n) const {
  TwMorphism f(source_, target_, n);
  for (const auto& [key, off] : offset_) {
    const auto ai = target_.generator(key.first).object, aj = source_.generator(key.second).object;
    const std::size_t dim = source_.cat().dim(aj, ai);
    Vec e(dim);
    bool any = false;
    for (std::size_t b = 0; b < dim; ++b) {
      if (flat[off + b] == 0) continue;
      if (degrees_[off + b] != n) throw ValidationError("flat vector has components outside degree " + std::to_string(n));
      e[b] = flat[off + b];
      any = true;
    }
    if (any) f.add(key.first, key.second, 1, e);
  }
  return f;
}

Vec HomComplex::from_degree(int n, const Vec& block) const {
  Vec v(flat_dim());
  auto it = grading_.members.find(n);
  if (it == grading_.members.end()) return v;
  for (std::size_t k = 0; k < it->second.size(); ++k) v[it->second[k]] = block.at(k);
  return v;
}

Vec HomComplex::to_degree(int n, const Vec& flat) const {
  auto it = grading_.members.find(n);
  if (it == grading_.members.end()) return {};
  Vec block(it->second.size());
  for (std::size_t k = 0; k < it->second.size(); ++k) block[k] = flat.at(it->second[k]);
  return block;
}

HomComplex hom_complex(const TwistedComplex& source, const TwistedComplex& target) {
  return HomComplex(source, target);
}

DegreeDims hom_cohomology(const TwistedComplex& source, const TwistedComplex& target) {
  return cohomology_dims(HomComplex(source, target).complex());
}

Cochain evaluate_at(const TwistedComplex& z, std::size_t x) {
  return HomComplex(representable(z.category(), x), z).complex();
}

Cochain evaluate_at(const TwistedComplex& z, const ObjectRef& x) { return evaluate_at(z, z.cat().resolve(x)); }

}  // namespace dgglue
