#include "dgglue/dgcore.hpp"

#include <sstream>

#include "dgglue/errors.hpp"

namespace dgglue {

std::size_t RawCategory::add_object(const std::string& object) {
  objects.push_back(object);
  return objects.size() - 1;
}

std::size_t RawCategory::add_basis(std::size_t x, std::size_t y, int degree, const std::string& label) {
  auto& h = homs[{x, y}];
  h.degrees.push_back(degree);
  h.names.push_back(label);
  const std::size_t dim = h.degrees.size();
  Matrix grown(dim, dim);
  for (std::size_t r = 0; r < h.differential.rows(); ++r)
    for (std::size_t c = 0; c < h.differential.cols(); ++c) grown(r, c) = h.differential(r, c);
  h.differential = std::move(grown);
  return h.degrees.size() - 1;
}

void RawCategory::set_differential(std::size_t x, std::size_t y, std::size_t from, std::size_t to,
                                   const Scalar& coeff) {
  auto& h = homs.at({x, y});
  if (h.differential.rows() != h.degrees.size()) h.differential = Matrix(h.degrees.size(), h.degrees.size());
  h.differential(to, from) += coeff;
}

void RawCategory::add_composition(std::size_t x, std::size_t y, std::size_t z, std::size_t g, std::size_t f,
                                  std::size_t h, const Scalar& coeff) {
  compositions[{x, y, z}].push_back({g, f, h, coeff});
}

std::size_t RawCategory::dim(std::size_t x, std::size_t y) const {
  auto it = homs.find({x, y});
  return it == homs.end() ? 0 : it->second.degrees.size();
}

void RawCategory::set_unit_basis(std::size_t x, std::size_t index) {
  Vec u(dim(x, x));
  u.at(index) = 1;
  units[x] = u;
  auto has = [&](std::size_t a, std::size_t b, std::size_t c, std::size_t g, std::size_t f) {
    auto it = compositions.find({a, b, c});
    if (it == compositions.end()) return false;
    for (const auto& e : it->second)
      if (e.g == g && e.f == f) return true;
    return false;
  };
  for (std::size_t y = 0; y < objects.size(); ++y) {
    for (std::size_t f = 0; f < dim(x, y); ++f)  // f o id_x
      if (!has(x, x, y, f, index)) add_composition(x, x, y, f, index, f, 1);
    for (std::size_t g = 0; g < dim(y, x); ++g)  // id_x o g
      if (!(y == x && g == index) && !has(y, x, x, index, g)) add_composition(y, x, x, index, g, g, 1);
  }
}

// ---------------------------------------------------------------------------

std::optional<std::size_t> FinDGCategory::find(const std::string& object) const {
  for (std::size_t i = 0; i < objects_.size(); ++i)
    if (objects_[i] == object) return i;
  return std::nullopt;
}

std::size_t FinDGCategory::index_of(const std::string& object) const {
  if (auto i = find(object)) return *i;
  throw ValidationError("unknown object '" + object + "' in category '" + name_ + "'");
}

std::size_t FinDGCategory::resolve(const ObjectRef& r) const {
  if (r.category != hash_) throw ValidationError("object reference belongs to another category");
  if (r.object >= size()) throw ValidationError("object reference out of range");
  return r.object;
}

Vec FinDGCategory::d(std::size_t x, std::size_t y, const Vec& v) const {
  const auto& h = hom(x, y);
  Vec out(h.degrees.size());
  for (std::size_t b = 0; b < v.size(); ++b) {
    if (v[b] == 0) continue;
    for (const auto& [i, c] : h.d_cols[b]) out[i] += v[b] * c;
  }
  return out;
}

const SparseVec& FinDGCategory::compose_basis(std::size_t x, std::size_t y, std::size_t z, std::size_t g,
                                              std::size_t f) const {
  return comp_[triple(x, y, z)][g * dim(x, y) + f];
}

Vec FinDGCategory::compose(std::size_t x, std::size_t y, std::size_t z, const Vec& g, const Vec& f) const {
  Vec out(dim(x, z));
  for (std::size_t a = 0; a < g.size(); ++a) {
    if (g[a] == 0) continue;
    for (std::size_t b = 0; b < f.size(); ++b) {
      if (f[b] == 0) continue;
      const Scalar c = g[a] * f[b];
      for (const auto& [h, v] : compose_basis(x, y, z, a, b)) out[h] += c * v;
    }
  }
  return out;
}

std::optional<int> FinDGCategory::homogeneous_degree(std::size_t x, std::size_t y, const Vec& v) const {
  std::optional<int> deg;
  for (std::size_t b = 0; b < v.size(); ++b) {
    if (v[b] == 0) continue;
    const int d = degree(x, y, b);
    if (deg && *deg != d) return std::nullopt;
    deg = d;
  }
  return deg;
}

RawCategory FinDGCategory::raw() const {
  RawCategory r;
  r.name = name_;
  r.objects = objects_;
  const std::size_t n = size();
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      const auto& h = hom(x, y);
      if (h.degrees.empty()) continue;
      HomBasis hb;
      hb.degrees = h.degrees;
      hb.names = h.names;
      hb.differential = Matrix(h.degrees.size(), h.degrees.size());
      for (std::size_t b = 0; b < h.d_cols.size(); ++b)
        for (const auto& [i, c] : h.d_cols[b]) hb.differential(i, b) = c;
      r.homs[{x, y}] = std::move(hb);
    }
  for (std::size_t x = 0; x < n; ++x) r.units[x] = units_[x];
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t z = 0; z < n; ++z) {
        const auto& t = comp_[triple(x, y, z)];
        for (std::size_t g = 0; g < dim(y, z); ++g)
          for (std::size_t f = 0; f < dim(x, y); ++f)
            for (const auto& [h, c] : t[g * dim(x, y) + f]) r.compositions[{x, y, z}].push_back({g, f, h, c});
      }
  return r;
}

// ---------------------------------------------------------------------------
// Validation

namespace {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

Vec basis_vec(std::size_t n, std::size_t i) {
  Vec v(n);
  v[i] = 1;
  return v;
}

}  // namespace

FinDGCategory validate_category(const RawCategory& raw) {
  std::vector<std::string> errors;
  FinDGCategory cat;
  cat.name_ = raw.name;
  cat.objects_ = raw.objects;
  const std::size_t n = raw.objects.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (raw.objects[i] == raw.objects[j]) errors.push_back("duplicate object '" + raw.objects[i] + "'");

  auto obj = [&](std::size_t x) { return x < n ? raw.objects[x] : "#" + std::to_string(x); };
  auto loc = [&](std::size_t x, std::size_t y) { return "Hom(" + obj(x) + "," + obj(y) + ")"; };

  cat.homs_.assign(n * n, {});
  for (const auto& [key, hb] : raw.homs) {
    const auto [x, y] = key;
    if (x >= n || y >= n) {
      errors.push_back("hom record references unknown object index");
      continue;
    }
    const std::size_t dim = hb.degrees.size();
    auto& h = cat.homs_[x * n + y];
    h.degrees = hb.degrees;
    h.names = hb.names;
    h.names.resize(dim);
    for (std::size_t b = 0; b < dim; ++b)
      if (h.names[b].empty()) h.names[b] = "e" + std::to_string(b);
    h.d_cols.assign(dim, {});
    const bool zero_d = hb.differential.rows() == 0 && hb.differential.cols() == 0;
    if (!zero_d && (hb.differential.rows() != dim || hb.differential.cols() != dim)) {
      errors.push_back("differential of " + loc(x, y) + " has wrong shape");
      continue;
    }
    if (zero_d) continue;
    for (std::size_t c = 0; c < dim; ++c)
      for (std::size_t r = 0; r < dim; ++r) {
        const Scalar& v = hb.differential(r, c);
        if (v == 0) continue;
        if (hb.degrees[r] != hb.degrees[c] + 1)
          errors.push_back("differential of " + loc(x, y) + " maps " + h.names[c] + " (degree " +
                           std::to_string(hb.degrees[c]) + ") to " + h.names[r] + " (degree " +
                           std::to_string(hb.degrees[r]) + ")");
        h.d_cols[c].emplace_back(r, v);
      }
  }
  if (!errors.empty()) throw ValidationError(errors);

  auto dim = [&](std::size_t x, std::size_t y) { return cat.homs_[x * n + y].degrees.size(); };
  auto deg = [&](std::size_t x, std::size_t y, std::size_t b) { return cat.homs_[x * n + y].degrees[b]; };
  auto name = [&](std::size_t x, std::size_t y, std::size_t b) { return cat.homs_[x * n + y].names[b]; };

  // d^2 = 0
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t b = 0; b < dim(x, y); ++b) {
        Vec v = cat.d(x, y, cat.d(x, y, basis_vec(dim(x, y), b)));
        if (!is_zero(v)) errors.push_back("d^2 != 0 on " + loc(x, y) + " at " + name(x, y, b));
      }

  // composition tables
  cat.comp_.assign(n * n * n, {});
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t z = 0; z < n; ++z) cat.comp_[(x * n + y) * n + z].assign(dim(y, z) * dim(x, y), {});
  for (const auto& [key, entries] : raw.compositions) {
    const auto [x, y, z] = key;
    if (x >= n || y >= n || z >= n) {
      errors.push_back("composition record references unknown object index");
      continue;
    }
    auto& t = cat.comp_[(x * n + y) * n + z];
    for (const auto& e : entries) {
      if (e.g >= dim(y, z) || e.f >= dim(x, y) || e.h >= dim(x, z)) {
        errors.push_back("composition entry out of range for (" + obj(x) + "," + obj(y) + "," + obj(z) + ")");
        continue;
      }
      if (e.coeff == 0) continue;
      if (deg(y, z, e.g) + deg(x, y, e.f) != deg(x, z, e.h))
        errors.push_back("composition " + name(y, z, e.g) + " o " + name(x, y, e.f) + " lands in degree " +
                         std::to_string(deg(x, z, e.h)) + " in " + loc(x, z));
      auto& sv = t[e.g * dim(x, y) + e.f];
      auto it = sv.begin();
      while (it != sv.end() && it->first < e.h) ++it;
      if (it != sv.end() && it->first == e.h) {
        it->second += e.coeff;
        if (it->second == 0) sv.erase(it);
      } else {
        sv.insert(it, {e.h, e.coeff});
      }
    }
  }
  if (!errors.empty()) throw ValidationError(errors);

  // units
  cat.units_.assign(n, {});
  for (std::size_t x = 0; x < n; ++x) {
    auto it = raw.units.find(x);
    if (it == raw.units.end() || it->second.size() != dim(x, x)) {
      errors.push_back("missing unit for object " + obj(x));
      cat.units_[x] = Vec(dim(x, x));
      continue;
    }
    cat.units_[x] = it->second;
  }
  if (!errors.empty()) throw ValidationError(errors);
  cat.hash_ = 0;  // computed below; compose() does not depend on it

  // Leibniz: d(g o f) = dg o f + (-1)^{|g|} g o df
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t z = 0; z < n; ++z)
        for (std::size_t g = 0; g < dim(y, z); ++g)
          for (std::size_t f = 0; f < dim(x, y); ++f) {
            const Vec gv = basis_vec(dim(y, z), g), fv = basis_vec(dim(x, y), f);
            Vec lhs = cat.d(x, z, cat.compose(x, y, z, gv, fv));
            Vec rhs = cat.compose(x, y, z, cat.d(y, z, gv), fv);
            axpy(rhs, deg(y, z, g) % 2 == 0 ? 1 : -1, cat.compose(x, y, z, gv, cat.d(x, y, fv)));
            if (lhs != rhs)
              errors.push_back("Leibniz failure for " + name(y, z, g) + " o " + name(x, y, f) + " in " + loc(x, z));
          }

  // associativity: (h o g) o f = h o (g o f)
  for (std::size_t w = 0; w < n; ++w)
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y)
        for (std::size_t z = 0; z < n; ++z)
          for (std::size_t h = 0; h < dim(y, z); ++h)
            for (std::size_t g = 0; g < dim(x, y); ++g)
              for (std::size_t f = 0; f < dim(w, x); ++f) {
                const Vec hv = basis_vec(dim(y, z), h), gv = basis_vec(dim(x, y), g), fv = basis_vec(dim(w, x), f);
                Vec lhs = cat.compose(w, x, z, cat.compose(x, y, z, hv, gv), fv);
                Vec rhs = cat.compose(w, y, z, hv, cat.compose(w, x, y, gv, fv));
                if (lhs != rhs)
                  errors.push_back("associativity failure for " + name(y, z, h) + " o " + name(x, y, g) + " o " +
                                   name(w, x, f) + " (" + obj(w) + "->" + obj(x) + "->" + obj(y) + "->" + obj(z) +
                                   ")");
              }

  // units: degree 0, closed, neutral
  for (std::size_t x = 0; x < n; ++x) {
    const Vec& u = cat.units_[x];
    bool ok = true;
    if (is_zero(u)) ok = false;
    for (std::size_t b = 0; b < u.size(); ++b)
      if (u[b] != 0 && deg(x, x, b) != 0) {
        errors.push_back("unit of " + obj(x) + " is not of degree 0");
        ok = false;
        break;
      }
    if (!is_zero(cat.d(x, x, u))) errors.push_back("unit of " + obj(x) + " is not closed");
    for (std::size_t y = 0; y < n && ok; ++y) {
      for (std::size_t f = 0; f < dim(x, y) && ok; ++f) {
        const Vec fv = basis_vec(dim(x, y), f);
        if (cat.compose(x, x, y, fv, u) != fv) ok = false;
      }
      for (std::size_t g = 0; g < dim(y, x) && ok; ++g) {
        const Vec gv = basis_vec(dim(y, x), g);
        if (cat.compose(y, x, x, u, gv) != gv) ok = false;
      }
    }
    if (!ok) errors.push_back("unit not neutral at object " + obj(x));
  }
  if (!errors.empty()) throw ValidationError(errors);

  std::ostringstream canon;
  for (const auto& o : cat.objects_) canon << o << '\x1f';
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      canon << '|' << x << ',' << y << ':';
      const auto& h = cat.homs_[x * n + y];
      for (std::size_t b = 0; b < h.degrees.size(); ++b) {
        canon << h.degrees[b] << '[';
        for (const auto& [i, c] : h.d_cols[b]) canon << i << '=' << c.get_str() << ';';
        canon << ']';
      }
    }
  for (std::size_t t = 0; t < cat.comp_.size(); ++t) {
    canon << '#' << t;
    for (std::size_t k = 0; k < cat.comp_[t].size(); ++k)
      for (const auto& [i, c] : cat.comp_[t][k]) canon << ' ' << k << '>' << i << '=' << c.get_str();
  }
  for (const auto& u : cat.units_) {
    canon << 'u';
    for (const auto& c : u) canon << c.get_str() << ',';
  }
  cat.hash_ = fnv1a(canon.str());
  return cat;
}

CategoryPtr make_category(const RawCategory& raw) {
  return std::make_shared<const FinDGCategory>(validate_category(raw));
}

}  // namespace dgglue
