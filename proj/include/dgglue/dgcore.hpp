#pragma once

// Finite DG categories: finitely many objects, finite-dimensional graded Hom
// complexes with chosen bases, composition given by structure constants.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "dgglue/exactlin.hpp"

namespace dgglue {

/// A graded basis of one Hom complex and its differential. Column c of the
/// differential holds d(e_c).
struct HomBasis {
  std::vector<int> degrees;
  std::vector<std::string> names;
  Matrix differential;  // dim x dim; zero-sized means d = 0
};

/// g o f = coeff * h, with g in Hom(y,z), f in Hom(x,y), h in Hom(x,z).
struct CompositionEntry {
  std::size_t g = 0;
  std::size_t f = 0;
  std::size_t h = 0;
  Scalar coeff;
};

/// Unvalidated category data, as read from disk or assembled by a builder.
struct RawCategory {
  std::string name;
  std::vector<std::string> objects;
  std::map<std::pair<std::size_t, std::size_t>, HomBasis> homs;  // (source, target)
  std::map<std::size_t, Vec> units;
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, std::vector<CompositionEntry>> compositions;

  std::size_t add_object(const std::string& object);
  /// Appends a basis element to Hom(x, y) and returns its index.
  std::size_t add_basis(std::size_t x, std::size_t y, int degree, const std::string& label);
  /// d(e_from) gains coeff * e_to inside Hom(x, y).
  void set_differential(std::size_t x, std::size_t y, std::size_t from, std::size_t to, const Scalar& coeff);
  void add_composition(std::size_t x, std::size_t y, std::size_t z, std::size_t g, std::size_t f, std::size_t h,
                       const Scalar& coeff);
  /// Declares basis element `index` of Hom(x, x) to be the unit and fills in
  /// every composition with it that is not already listed.
  void set_unit_basis(std::size_t x, std::size_t index);
  std::size_t dim(std::size_t x, std::size_t y) const;
};

/// Category identifier plus object index.
struct ObjectRef {
  std::uint64_t category = 0;
  std::size_t object = 0;
};

class FinDGCategory {
 public:
  const std::string& name() const { return name_; }
  std::size_t size() const { return objects_.size(); }
  const std::vector<std::string>& objects() const { return objects_; }
  const std::string& object_name(std::size_t x) const { return objects_.at(x); }
  std::optional<std::size_t> find(const std::string& object) const;
  std::size_t index_of(const std::string& object) const;  // throws ValidationError
  ObjectRef ref(std::size_t x) const { return {hash_, x}; }
  std::size_t resolve(const ObjectRef& r) const;  // throws ValidationError

  std::size_t dim(std::size_t x, std::size_t y) const { return hom(x, y).degrees.size(); }
  const std::vector<int>& degrees(std::size_t x, std::size_t y) const { return hom(x, y).degrees; }
  int degree(std::size_t x, std::size_t y, std::size_t b) const { return hom(x, y).degrees.at(b); }
  const std::string& basis_name(std::size_t x, std::size_t y, std::size_t b) const { return hom(x, y).names.at(b); }

  /// d(e_b) in Hom(x, y).
  const SparseVec& d_basis(std::size_t x, std::size_t y, std::size_t b) const { return hom(x, y).d_cols.at(b); }
  Vec d(std::size_t x, std::size_t y, const Vec& v) const;

  /// e_g o e_f for g in Hom(y,z), f in Hom(x,y).
  const SparseVec& compose_basis(std::size_t x, std::size_t y, std::size_t z, std::size_t g, std::size_t f) const;
  Vec compose(std::size_t x, std::size_t y, std::size_t z, const Vec& g, const Vec& f) const;
  const Vec& unit(std::size_t x) const { return units_.at(x); }

  /// Degree of a nonzero homogeneous element; nullopt for zero or mixed.
  std::optional<int> homogeneous_degree(std::size_t x, std::size_t y, const Vec& v) const;

  std::uint64_t content_hash() const { return hash_; }
  RawCategory raw() const;

  friend FinDGCategory validate_category(const RawCategory& raw);

 private:
  struct Hom {
    std::vector<int> degrees;
    std::vector<std::string> names;
    std::vector<SparseVec> d_cols;
  };
  const Hom& hom(std::size_t x, std::size_t y) const { return homs_.at(x * size() + y); }
  std::size_t triple(std::size_t x, std::size_t y, std::size_t z) const { return (x * size() + y) * size() + z; }

  std::string name_;
  std::vector<std::string> objects_;
  std::vector<Hom> homs_;
  std::vector<Vec> units_;
  std::vector<std::vector<SparseVec>> comp_;  // per triple, index g * dim(x,y) + f
  std::uint64_t hash_ = 0;
};

using CategoryPtr = std::shared_ptr<const FinDGCategory>;

/// Checks d^2 = 0, degree conventions, the Leibniz rule, associativity and
/// units on all basis elements. Throws ValidationError listing every
/// violation with its location.
FinDGCategory validate_category(const RawCategory& raw);
CategoryPtr make_category(const RawCategory& raw);

}  // namespace dgglue
