#pragma once

// Twisted complexes over a finite DG category: iterated extensions of shifted
// representables, i.e. finitely generated semi-free right modules.
//
// Conventions. A generator (a, s) stands for the shifted representable h^a[s].
// The twisting entry delta(i, j) runs from generator j to generator i and is an
// element of Hom(a_j, a_i) of degree 1 + s_i - s_j. A morphism of degree n has
// components f(i, j) in Hom(e_j, f_i) of degree n + s_i - s_j, and
//
//   D(f)(i, j) = (-1)^{s_i} d f(i, j) + (delta_W f)(i, j) - (-1)^n (f delta_Z)(i, j).
//
// The Maurer-Cartan equation reads (-1)^{s_i} d delta(i, j) + (delta delta)(i, j) = 0.
// Composition of morphisms is plain matrix multiplication with no signs.

#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "dgglue/dgcore.hpp"
#include "dgglue/exactlin.hpp"

namespace dgglue {

struct Generator {
  std::size_t object = 0;
  int shift = 0;
  bool operator==(const Generator&) const = default;
};

/// Sparse matrix of category elements keyed by (row, column); absent means zero.
using EntryMap = std::map<std::pair<std::size_t, std::size_t>, Vec>;

struct RawTwistedComplex {
  CategoryPtr category;
  std::vector<Generator> generators;
  EntryMap delta;
};

class TwistedComplex {
 public:
  TwistedComplex() = default;

  const CategoryPtr& category() const { return data_->category; }
  const FinDGCategory& cat() const { return *data_->category; }
  std::size_t size() const { return data_->generators.size(); }
  const std::vector<Generator>& generators() const { return data_->generators; }
  const Generator& generator(std::size_t i) const { return data_->generators.at(i); }
  const EntryMap& delta() const { return data_->delta; }
  const Vec* entry(std::size_t i, std::size_t j) const;
  /// Nonzero delta(i, j) for fixed j / fixed i.
  const std::vector<std::size_t>& targets_of(std::size_t j) const { return data_->out.at(j); }
  const std::vector<std::size_t>& sources_of(std::size_t i) const { return data_->in.at(i); }

  bool operator==(const TwistedComplex& o) const;

  friend TwistedComplex validate_twcx(RawTwistedComplex raw);

 private:
  struct Data {
    CategoryPtr category;
    std::vector<Generator> generators;
    EntryMap delta;
    std::vector<std::vector<std::size_t>> out, in;
  };
  std::shared_ptr<const Data> data_;
};

/// Checks entry degrees, the Maurer-Cartan equation and acyclicity of the
/// generator graph. Throws ValidationError naming the offending entry.
TwistedComplex validate_twcx(RawTwistedComplex raw);

TwistedComplex representable(const CategoryPtr& cat, std::size_t object, int shift = 0);
TwistedComplex zero_complex(const CategoryPtr& cat);
TwistedComplex shift(const TwistedComplex& z, int n);
TwistedComplex direct_sum(const TwistedComplex& a, const TwistedComplex& b);
TwistedComplex direct_sum(const CategoryPtr& cat, const std::vector<TwistedComplex>& parts);
/// sum_i (-1)^{s_i} e_{a_i}
std::vector<long> k0_class(const TwistedComplex& z);

class TwMorphism {
 public:
  TwMorphism() = default;
  TwMorphism(TwistedComplex source, TwistedComplex target, int degree, EntryMap entries = {});

  const TwistedComplex& source() const { return source_; }
  const TwistedComplex& target() const { return target_; }
  int degree() const { return degree_; }
  const EntryMap& entries() const { return entries_; }
  const Vec* entry(std::size_t i, std::size_t j) const;
  /// Adds c * v to entry (i, j).
  void add(std::size_t i, std::size_t j, const Scalar& c, const Vec& v);
  bool is_zero() const { return entries_.empty(); }

  TwMorphism operator+(const TwMorphism& o) const;
  TwMorphism operator-(const TwMorphism& o) const;
  TwMorphism scaled(const Scalar& c) const;
  bool operator==(const TwMorphism& o) const;

 private:
  TwistedComplex source_;
  TwistedComplex target_;
  int degree_ = 0;
  EntryMap entries_;
};

/// Throws ValidationError if an entry has the wrong degree or size.
void check_morphism(const TwMorphism& f);
TwMorphism identity_morphism(const TwistedComplex& z);
TwMorphism differential(const TwMorphism& f);
bool is_closed(const TwMorphism& f);
TwMorphism compose_morphisms(const TwMorphism& g, const TwMorphism& f);

/// The closed degree-0 morphism cone(f) needs; throws ValidationError otherwise.
TwistedComplex cone(const TwMorphism& f);

struct HomBasisLabel {
  std::size_t row = 0;    // generator of the target
  std::size_t col = 0;    // generator of the source
  std::size_t basis = 0;  // basis element of Hom(a_col, a_row)
  int degree = 0;
};

/// Hom complex between twisted complexes with a flat labelled basis.
class HomComplex {
 public:
  HomComplex(const TwistedComplex& source, const TwistedComplex& target);

  const TwistedComplex& source() const { return source_; }
  const TwistedComplex& target() const { return target_; }
  const Cochain& complex() const { return complex_; }
  const std::vector<HomBasisLabel>& labels() const { return labels_; }
  const std::vector<int>& degrees() const { return degrees_; }
  const SparseMatrix& flat_differential() const { return d_; }
  const FlatGrading& grading() const { return grading_; }
  std::size_t flat_dim() const { return labels_.size(); }
  /// Flat index of the first basis element of component (row, col), or npos.
  std::size_t offset(std::size_t row, std::size_t col) const;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  /// Flat coordinates of a morphism.
  Vec flatten(const TwMorphism& f) const;
  /// Morphism of degree n from flat coordinates (entries of other degrees must vanish).
  TwMorphism morphism(const Vec& flat, int n) const;
  /// Flat coordinates from coordinates inside the degree-n block of complex().
  Vec from_degree(int n, const Vec& block) const;
  Vec to_degree(int n, const Vec& flat) const;

 private:
  TwistedComplex source_;
  TwistedComplex target_;
  std::vector<HomBasisLabel> labels_;
  std::vector<int> degrees_;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> offset_;
  SparseMatrix d_;
  FlatGrading grading_;
  Cochain complex_;
};

HomComplex hom_complex(const TwistedComplex& source, const TwistedComplex& target);
DegreeDims hom_cohomology(const TwistedComplex& source, const TwistedComplex& target);

/// The module Z evaluated at an object: Hom(h^X, Z).
Cochain evaluate_at(const TwistedComplex& z, const ObjectRef& x);
Cochain evaluate_at(const TwistedComplex& z, std::size_t x);

}  // namespace dgglue
