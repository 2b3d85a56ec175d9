#include "dgglue/io.hpp"

#include <fstream>
#include <sstream>

#include "dgglue/errors.hpp"

namespace dgglue {

namespace {

template <class F>
auto guarded(const std::string& what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(what + ": " + e.what());
  }
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ValidationError(std::string("missing field '") + key + "'");
  return j.at(key);
}

std::size_t object_index(const FinDGCategory& cat, const Json& j) {
  if (j.is_number_unsigned()) {
    const auto i = j.get<std::size_t>();
    if (i >= cat.size()) throw ValidationError("object index " + std::to_string(i) + " out of range");
    return i;
  }
  return cat.index_of(j.get<std::string>());
}

std::size_t object_index(const std::vector<std::string>& objects, const std::string& name) {
  for (std::size_t i = 0; i < objects.size(); ++i)
    if (objects[i] == name) return i;
  throw ValidationError("unknown object '" + name + "'");
}

Json integer_json(const Integer& x) {
  if (x.fits_slong_p()) return x.get_si();
  return x.get_str();
}

Integer integer_from_json(const Json& j) {
  if (j.is_number_integer()) return Integer(j.get<long>());
  if (j.is_string()) {
    Integer x;
    if (x.set_str(j.get<std::string>(), 10) != 0) throw ValidationError("bad integer '" + j.get<std::string>() + "'");
    return x;
  }
  throw ValidationError("expected an integer, got " + j.dump());
}

std::string side_name(Side s) { return s == Side::A ? "A" : "B"; }

Json pair_key(const Names& rows, const Names& cols, std::size_t j, std::size_t k) {
  return Json::array({rows.at(j), cols.at(k)});
}

}  // namespace

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return Json::parse(ss.str());
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("'" + path + "' is not valid JSON: " + e.what());
  }
}

Json scalar_json(const Scalar& x) { return format_scalar(x); }

Scalar scalar_from_json(const Json& j) {
  if (j.is_number_integer()) return Scalar(j.get<long>());
  if (j.is_string()) return parse_scalar(j.get<std::string>());
  throw ValidationError("expected a rational \"p/q\", got " + j.dump());
}

Json sparse_json(const Vec& v) {
  Json out = Json::array();
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0) out.push_back(Json::array({i, scalar_json(v[i])}));
  return out;
}

Vec sparse_from_json(const Json& j, std::size_t dim) {
  return guarded("sparse vector", [&] {
    Vec v(dim);
    for (const auto& item : j) {
      const auto i = item.at(0).get<std::size_t>();
      if (i >= dim) throw ValidationError("basis index " + std::to_string(i) + " out of range");
      v[i] += scalar_from_json(item.at(1));
    }
    return v;
  });
}

// ---------------------------------------------------------------------------
// Categories

Json category_json(const FinDGCategory& cat) {
  const std::size_t n = cat.size();
  Json j{{"kind", "category"}, {"name", cat.name()}, {"objects", cat.objects()}};
  std::vector<std::optional<std::size_t>> unit_index(n);
  for (std::size_t x = 0; x < n; ++x) {
    const Vec& u = cat.unit(x);
    std::size_t nz = 0, at = 0;
    for (std::size_t e = 0; e < u.size(); ++e)
      if (u[e] != 0) ++nz, at = e;
    if (nz == 1 && u[at] == 1) unit_index[x] = at;
  }
  Json homs = Json::array();
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      const std::size_t dim = cat.dim(x, y);
      if (!dim) continue;
      Json h{{"source", cat.object_name(x)}, {"target", cat.object_name(y)}};
      Json basis = Json::array();
      for (std::size_t e = 0; e < dim; ++e)
        basis.push_back({{"name", cat.basis_name(x, y, e)}, {"degree", cat.degree(x, y, e)}});
      h["basis"] = basis;
      bool any = false;
      Json d = Json::array();
      for (std::size_t r = 0; r < dim; ++r) d.push_back(Json::array());
      std::vector<Vec> cols;
      for (std::size_t c = 0; c < dim; ++c) {
        Vec col(dim);
        for (const auto& [i, v] : cat.d_basis(x, y, c)) col[i] = v, any = true;
        cols.push_back(std::move(col));
      }
      if (any) {
        for (std::size_t r = 0; r < dim; ++r)
          for (std::size_t c = 0; c < dim; ++c) d[r].push_back(scalar_json(cols[c][r]));
        h["differential"] = d;
      }
      if (x == y) {
        if (unit_index[x])
          h["unit"] = *unit_index[x];
        else {
          Json u = Json::array();
          for (const auto& v : cat.unit(x)) u.push_back(scalar_json(v));
          h["unit_vector"] = u;
        }
      }
      homs.push_back(h);
    }
  j["homs"] = homs;
  Json comps = Json::array();
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t z = 0; z < n; ++z) {
        Json entries = Json::array();
        for (std::size_t g = 0; g < cat.dim(y, z); ++g)
          for (std::size_t f = 0; f < cat.dim(x, y); ++f) {
            if (x == y && unit_index[x] && f == *unit_index[x]) continue;
            if (y == z && unit_index[y] && g == *unit_index[y]) continue;
            Json out = Json::array();
            for (const auto& [h, c] : cat.compose_basis(x, y, z, g, f)) out.push_back(Json::array({h, scalar_json(c)}));
            if (!out.empty()) entries.push_back(Json::array({g, f, out}));
          }
        if (!entries.empty())
          comps.push_back({{"objects", {cat.object_name(x), cat.object_name(y), cat.object_name(z)}}, {"entries", entries}});
      }
  j["compositions"] = comps;
  return j;
}

RawCategory raw_category_from_json(const Json& j) {
  return guarded("category record", [&] {
    RawCategory r;
    r.name = j.value("name", std::string("C"));
    for (const auto& o : field(j, "objects")) r.add_object(o.get<std::string>());
    std::vector<std::pair<std::size_t, const Json*>> units;
    const Json homs = j.value("homs", Json::array());
    for (const auto& h : homs) {
      const auto x = object_index(r.objects, field(h, "source").get<std::string>());
      const auto y = object_index(r.objects, field(h, "target").get<std::string>());
      if (r.dim(x, y)) throw ValidationError("Hom(" + r.objects[x] + "," + r.objects[y] + ") listed twice");
      for (const auto& b : field(h, "basis")) r.add_basis(x, y, field(b, "degree").get<int>(), b.value("name", std::string()));
      const std::size_t dim = r.dim(x, y);
      if (h.contains("differential")) {
        const auto& d = h.at("differential");
        if (d.size() != dim) throw ValidationError("differential of Hom(" + r.objects[x] + "," + r.objects[y] + ") has the wrong shape");
        for (std::size_t row = 0; row < dim; ++row) {
          if (d[row].size() != dim)
            throw ValidationError("differential of Hom(" + r.objects[x] + "," + r.objects[y] + ") has the wrong shape");
          for (std::size_t col = 0; col < dim; ++col) {
            const Scalar v = scalar_from_json(d[row][col]);
            if (v != 0) r.set_differential(x, y, col, row, v);
          }
        }
      }
      if (h.contains("unit") || h.contains("unit_vector")) {
        if (x != y) throw ValidationError("unit declared on a Hom between different objects");
        units.emplace_back(x, &h);
      }
    }
    for (const auto& c : j.value("compositions", Json::array())) {
      const auto& objs = field(c, "objects");
      if (objs.size() != 3) throw ValidationError("composition needs three objects");
      const auto x = object_index(r.objects, objs[0].get<std::string>());
      const auto y = object_index(r.objects, objs[1].get<std::string>());
      const auto z = object_index(r.objects, objs[2].get<std::string>());
      for (const auto& e : field(c, "entries")) {
        const auto g = e.at(0).get<std::size_t>(), f = e.at(1).get<std::size_t>();
        if (g >= r.dim(y, z) || f >= r.dim(x, y)) throw ValidationError("composition entry out of range");
        for (const auto& t : e.at(2)) {
          const auto h = t.at(0).get<std::size_t>();
          if (h >= r.dim(x, z)) throw ValidationError("composition result out of range");
          r.add_composition(x, y, z, g, f, h, scalar_from_json(t.at(1)));
        }
      }
    }
    for (const auto& [x, h] : units) {
      if (h->contains("unit")) {
        const auto idx = h->at("unit").get<std::size_t>();
        if (idx >= r.dim(x, x)) throw ValidationError("unit index out of range at " + r.objects[x]);
        r.set_unit_basis(x, idx);
      } else {
        Vec u;
        for (const auto& v : h->at("unit_vector")) u.push_back(scalar_from_json(v));
        r.units[x] = u;
      }
    }
    return r;
  });
}

CategoryPtr category_from_json(const Json& j) { return make_category(raw_category_from_json(j)); }

// ---------------------------------------------------------------------------
// Twisted complexes and bimodules

Json twcx_json(const TwistedComplex& z, const std::string& name) {
  Json j{{"kind", "twisted_complex"}, {"category", z.cat().name()}};
  if (!name.empty()) j["name"] = name;
  Json gens = Json::array();
  for (const auto& g : z.generators()) gens.push_back(Json::array({z.cat().object_name(g.object), g.shift}));
  j["generators"] = gens;
  j["delta"] = entries_json(z.delta());
  return j;
}

TwistedComplex twcx_from_json(const Json& j, const CategoryPtr& cat) {
  return guarded("twisted complex record", [&] {
    RawTwistedComplex raw{cat, {}, {}};
    for (const auto& g : field(j, "generators")) raw.generators.push_back({object_index(*cat, g.at(0)), g.at(1).get<int>()});
    for (const auto& e : j.value("delta", Json::array())) {
      const auto i = e.at(0).get<std::size_t>(), k = e.at(1).get<std::size_t>();
      if (i >= raw.generators.size() || k >= raw.generators.size()) throw ValidationError("delta entry out of range");
      Vec v = sparse_from_json(e.at(2), cat->dim(raw.generators[k].object, raw.generators[i].object));
      if (!is_zero(v)) raw.delta[{i, k}] = std::move(v);
    }
    return validate_twcx(std::move(raw));
  });
}

Json entries_json(const EntryMap& entries) {
  Json out = Json::array();
  for (const auto& [key, v] : entries) out.push_back(Json::array({key.first, key.second, sparse_json(v)}));
  return out;
}

EntryMap entries_from_json(const Json& j, const TwistedComplex& source, const TwistedComplex& target) {
  return guarded("morphism entries", [&] {
    EntryMap m;
    for (const auto& e : j) {
      const auto i = e.at(0).get<std::size_t>(), k = e.at(1).get<std::size_t>();
      if (i >= target.size() || k >= source.size()) throw ValidationError("morphism entry out of range");
      Vec v = sparse_from_json(e.at(2), source.cat().dim(source.generator(k).object, target.generator(i).object));
      if (!is_zero(v)) m[{i, k}] = std::move(v);
    }
    return m;
  });
}

Json bimodule_json(const Bimodule& s, const std::string& name) {
  const FinDGCategory& b = *s.source();
  Json j{{"kind", "bimodule"}, {"source", b.name()}, {"target", s.target()->name()}};
  if (!name.empty()) j["name"] = name;
  Json objects = Json::object();
  for (std::size_t x = 0; x < b.size(); ++x) {
    Json body = twcx_json(s.object(x));
    body.erase("kind");
    body.erase("category");
    objects[b.object_name(x)] = body;
  }
  j["objects"] = objects;
  Json morphisms = Json::array();
  for (std::size_t x = 0; x < b.size(); ++x)
    for (std::size_t y = 0; y < b.size(); ++y)
      for (std::size_t e = 0; e < b.dim(x, y); ++e) {
        const TwMorphism& f = s.map(x, y, e);
        if (f.is_zero()) continue;
        if (x == y && f == identity_morphism(s.object(x))) {
          Vec unit_e(b.dim(x, x));
          unit_e[e] = 1;
          if (b.unit(x) == unit_e) continue;
        }
        morphisms.push_back({{"source", b.object_name(x)},
                             {"target", b.object_name(y)},
                             {"basis", e},
                             {"entries", entries_json(f.entries())}});
      }
  j["morphisms"] = morphisms;
  return j;
}

Bimodule bimodule_from_json(const Json& j, const CategoryPtr& b, const CategoryPtr& a) {
  return guarded("bimodule record", [&] {
    RawBimodule raw{b, a, {}, {}};
    const auto& objects = field(j, "objects");
    for (std::size_t x = 0; x < b->size(); ++x) {
      if (!objects.contains(b->object_name(x)))
        throw ValidationError("bimodule has no value at " + b->object_name(x));
      raw.objects.push_back(twcx_from_json(objects.at(b->object_name(x)), a));
    }
    for (const auto& m : j.value("morphisms", Json::array())) {
      const auto x = b->index_of(field(m, "source").get<std::string>());
      const auto y = b->index_of(field(m, "target").get<std::string>());
      const auto e = field(m, "basis").get<std::size_t>();
      if (e >= b->dim(x, y)) throw ValidationError("bimodule morphism basis index out of range");
      EntryMap entries = entries_from_json(m.value("entries", Json::array()), raw.objects[x], raw.objects[y]);
      raw.morphisms.emplace(HomKey{x, y, e}, TwMorphism(raw.objects[x], raw.objects[y], b->degree(x, y, e), std::move(entries)));
    }
    return validate_bimodule(std::move(raw));
  });
}

// ---------------------------------------------------------------------------
// Library

const CategoryPtr& Library::category(const std::string& name) const {
  auto it = categories.find(name);
  if (it == categories.end()) throw ValidationError("unknown category '" + name + "'");
  return it->second;
}

const Bimodule& Library::bimodule(const std::string& name) const {
  auto it = bimodules.find(name);
  if (it == bimodules.end()) throw ValidationError("unknown bimodule '" + name + "'");
  return it->second;
}

void load_into(Library& lib, const Json& j) {
  guarded("record", [&] {
    const std::string kind = field(j, "kind").get<std::string>();
    if (kind == "bundle") {
      for (const auto& item : field(j, "items")) load_into(lib, item);
    } else if (kind == "category") {
      CategoryPtr c = category_from_json(j);
      lib.categories[c->name()] = c;
    } else if (kind == "twisted_complex") {
      const CategoryPtr& c = lib.category(field(j, "category").get<std::string>());
      lib.complexes[field(j, "name").get<std::string>()] = twcx_from_json(j, c);
    } else if (kind == "bimodule") {
      const CategoryPtr& b = lib.category(field(j, "source").get<std::string>());
      const CategoryPtr& a = lib.category(field(j, "target").get<std::string>());
      lib.bimodules[j.value("name", std::string("S"))] = bimodule_from_json(j, b, a);
    } else if (kind == "gram") {
      lib.grams[j.value("name", std::string("G"))] = int_matrix_from_json(j);
    } else if (kind == "glued") {
      glued_from_json(j, &lib);
    } else if (kind == "bimodule_morphism") {
      bimodule_morphism_from_json(j, lib);
    } else {
      throw ValidationError("unknown record kind '" + kind + "'");
    }
    return 0;
  });
}

Library load_library(const Json& j) {
  Library lib;
  load_into(lib, j);
  return lib;
}

BimoduleMorphism bimodule_morphism_from_json(const Json& j, const Library& lib, const Bimodule* default_source) {
  return guarded("bimodule morphism record", [&] {
    auto resolve = [&](const char* key) -> Bimodule {
      if (!j.contains(key)) {
        if (default_source && std::string(key) == "source") return *default_source;
        throw ValidationError(std::string("missing field '") + key + "'");
      }
      const Json& v = j.at(key);
      if (v.is_string()) return lib.bimodule(v.get<std::string>());
      const CategoryPtr& b = lib.category(field(v, "source").get<std::string>());
      const CategoryPtr& a = lib.category(field(v, "target").get<std::string>());
      return bimodule_from_json(v, b, a);
    };
    BimoduleMorphism phi{resolve("source"), resolve("target"), {}};
    const FinDGCategory& b = *phi.source.source();
    const auto& comps = field(j, "components");
    for (std::size_t x = 0; x < b.size(); ++x) {
      const TwistedComplex& src = phi.source.object(x);
      const TwistedComplex& tgt = phi.target.object(x);
      EntryMap m;
      if (comps.contains(b.object_name(x))) m = entries_from_json(comps.at(b.object_name(x)), src, tgt);
      phi.components.emplace_back(src, tgt, 0, std::move(m));
    }
    return validate_bimodule_morphism(std::move(phi));
  });
}

Json bimodule_morphism_json(const BimoduleMorphism& phi) {
  const FinDGCategory& b = *phi.source.source();
  Json comps = Json::object();
  for (std::size_t x = 0; x < b.size(); ++x) comps[b.object_name(x)] = entries_json(phi.components[x].entries());
  return {{"kind", "bimodule_morphism"},
          {"source", bimodule_json(phi.source)},
          {"target", bimodule_json(phi.target)},
          {"components", comps}};
}

Json glued_json(const GluedCategory& c, const std::string& bimodule_name) {
  Json prov = Json::array();
  for (auto s : c.sides) prov.push_back(side_name(s));
  return {{"kind", "glued"},
          {"a", category_json(*c.a)},
          {"b", category_json(*c.b)},
          {"bimodule", bimodule_json(c.s, bimodule_name)},
          {"category", category_json(*c.category)},
          {"sides", prov}};
}

GluedCategory glued_from_json(const Json& j, Library* lib) {
  return guarded("glued record", [&] {
    const CategoryPtr a = category_from_json(field(j, "a"));
    const CategoryPtr b = category_from_json(field(j, "b"));
    const Json& sj = field(j, "bimodule");
    const Bimodule s = bimodule_from_json(sj, b, a);
    GluedCategory c = upper_triangular(a, b, s);
    if (j.contains("category") && category_from_json(j.at("category"))->content_hash() != c.category->content_hash())
      throw ValidationError("stored glued category does not match the gluing of its parts");
    if (lib) {
      lib->categories[a->name()] = a;
      lib->categories[b->name()] = b;
      lib->categories[c.category->name()] = c.category;
      lib->bimodules[sj.value("name", std::string("S"))] = s;
    }
    return c;
  });
}

// ---------------------------------------------------------------------------
// Matrices and reports

Json int_matrix_json(const IntMatrix& m) {
  Json out = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(integer_json(m(r, c)));
    out.push_back(row);
  }
  return out;
}

IntMatrix int_matrix_from_json(const Json& j) {
  return guarded("integer matrix", [&] {
    const Json& rows = j.is_object() ? field(j, "matrix") : j;
    if (!rows.is_array()) throw ValidationError("matrix must be an array of rows");
    const std::size_t n = rows.size();
    const std::size_t m = n ? rows[0].size() : 0;
    IntMatrix out(n, m);
    for (std::size_t r = 0; r < n; ++r) {
      if (rows[r].size() != m) throw ValidationError("ragged matrix");
      for (std::size_t c = 0; c < m; ++c) out(r, c) = integer_from_json(rows[r][c]);
    }
    return out;
  });
}

Json dims_json(const DegreeDims& d) {
  Json out = Json::object();
  for (const auto& [deg, dim] : d) out[std::to_string(deg)] = dim;
  return out;
}

Json gram_json(const GramForm& g) {
  return {{"kind", "gram"}, {"labels", g.labels}, {"matrix", int_matrix_json(g.matrix)}};
}

Json verdict_json(const EquivalenceVerdict& v) {
  Json j{{"verdict", to_string(v.kind)}};
  if (v.kind == EquivalenceVerdict::Kind::Equivalent) j["certificate"] = int_matrix_json(v.certificate);
  if (v.kind == EquivalenceVerdict::Kind::Inequivalent)
    j["witness"] = {{"invariant", v.invariant}, {"first", v.first_value}, {"second", v.second_value}};
  if (v.kind == EquivalenceVerdict::Kind::Undecided) j["reason"] = v.invariant;
  return j;
}

Json condition_json(const ConditionReport& r, const Names& b) {
  Json table = Json::array();
  for (const auto& [key, dims] : r.table)
    table.push_back({{"pair", pair_key(b, b, key.first, key.second)}, {"cohomology", dims_json(dims)}});
  return {{"pass", r.pass}, {"table", table}, {"note", r.note}};
}

Json fully_faithful_json(const FullyFaithfulReport& r, const Names& b) {
  Json table = Json::array();
  for (const auto& [key, dims] : r.table)
    table.push_back({{"pair", pair_key(b, b, key.first, key.second)},
                     {"glued", dims_json(dims.first)},
                     {"original", dims_json(dims.second)}});
  return {{"pass", r.pass}, {"table", table}};
}

Json proof_chain_json(const ProofChainReport& r, const Names& b, const Names& a) {
  Json table = Json::array();
  for (const auto& [key, row] : r.table)
    table.push_back({{"pair", pair_key(b, b, key.first, key.second)},
                     {"twisted_twisted", dims_json(row[0])},
                     {"untwisted_twisted", dims_json(row[1])},
                     {"original", dims_json(row[2])}});
  Json restriction = Json::array();
  for (const auto& [key, dims] : r.restriction)
    restriction.push_back({{"pair", pair_key(b, a, key.first, key.second)},
                           {"restricted", dims_json(dims.first)},
                           {"direct", dims_json(dims.second)}});
  return {{"pass", r.pass}, {"table", table}, {"restriction", restriction}};
}

Json perfectness_json(const PerfectnessReport& r, const Names& c) {
  Json per = Json::array();
  for (std::size_t x = 0; x < r.resolved.size(); ++x)
    per.push_back({{"object", c.at(x)}, {"resolved", static_cast<bool>(r.resolved[x])}, {"generators", r.generators[x]}});
  return {{"verdict", to_string(r.verdict)}, {"tensor_side", r.tensor_side}, {"objects", per}, {"note", r.note}};
}

Json exceptionality_json(const ExceptionalityReport& r, const Names& c) {
  Json order = Json::array();
  for (auto x : r.order) order.push_back(c.at(x));
  Json j{{"pass", r.pass}, {"order", order}};
  if (!r.reason.empty()) j["reason"] = r.reason;
  return j;
}

Json ks_json(const KSPartner& ks) {
  Json gens = Json::array();
  for (const auto& g : ks.generators) {
    Json body = twcx_json(g.complex);
    body.erase("kind");
    gens.push_back({{"label", "E(" + g.complex.cat().object_name(g.source_object) + ")"},
                    {"k0", g.k0},
                    {"size", g.complex.size()},
                    {"complex", body}});
  }
  Json dropped = Json::array();
  for (auto x : ks.dropped) dropped.push_back(x);
  Json table = Json::array();
  for (const auto& [key, dims] : ks.table)
    table.push_back({{"pair", Json::array({ks.gram.labels.at(key.first), ks.gram.labels.at(key.second)})},
                     {"cohomology", dims_json(dims)}});
  Json basis = Json::array();
  for (auto s : ks.basis) basis.push_back(ks.gram.labels.at(s));
  return {{"generators", gens},         {"dropped", dropped},
          {"table", table},             {"gram", gram_json(ks.gram)},
          {"basis", basis},             {"basis_gram", gram_json(ks.basis_gram)},
          {"orthogonal", ks.orthogonal}, {"k0_rank", ks.k0_rank},
          {"spans_k0", ks.spans_k0}};
}

Json scenario_json(const ScenarioReport& r) {
  Json j{{"kind", "scenario_report"},
         {"scenario", "p1-two-points"},
         {"l1", r.l1},
         {"l2", r.l2},
         {"t", r.t},
         {"pass", r.pass},
         {"failed_stage", r.failed_stage},
         {"notes", r.notes},
         {"chi_A", gram_json(r.chi_a)},
         {"chi_A_vs_standard", verdict_json(r.chi_a_vs_standard)},
         {"k0_rank_A", r.k0_rank_a},
         {"condition", condition_json(r.condition, r.b_objects)},
         {"target", int_matrix_json(r.target)}};
  if (r.failed_stage == "check_condition") return j;
  j["fully_faithful"] = fully_faithful_json(r.fully_faithful, r.b_objects);
  if (r.failed_stage == "verify_fully_faithful") return j;
  j["proof_chain"] = proof_chain_json(r.proof, r.b_objects, r.a_objects);
  if (r.failed_stage == "proof_chain") return j;
  j["perfectness"] = perfectness_json(r.perfectness, r.c_objects);
  if (r.failed_stage == "check_perfectness") return j;
  j["exceptionality"] = exceptionality_json(r.exceptional, r.c_objects);
  j["chi_glued"] = gram_json(r.chi_glued);
  j["ks_partner"] = ks_json(r.ks);
  j["k0_rank_ks"] = r.k0_rank_ks;
  j["orthogonal"] = {{"gram", gram_json(r.orthogonal.gram)}, {"lattice", int_matrix_json(r.orthogonal.lattice.basis)}};
  j["verdicts"] = {{"counit_vs_target", verdict_json(r.counit_vs_target)},
                   {"orthogonal_vs_target", verdict_json(r.orthogonal_vs_target)},
                   {"counit_vs_orthogonal", verdict_json(r.counit_vs_orthogonal)},
                   {"chi_A_vs_ks", verdict_json(r.chi_a_vs_ks)}};
  return j;
}

}  // namespace dgglue
