#pragma once

// Bimodules as strict DG functors B -> Tw(A), the upper triangular gluing
// C = A x_S B, and the functors between Tw(A), Tw(B) and Tw(C).

#include <map>
#include <tuple>
#include <vector>

#include "dgglue/dgcore.hpp"
#include "dgglue/twcx.hpp"

namespace dgglue {

/// Key (j, k, b): basis element b of Hom_B(B_j, B_k).
using HomKey = std::tuple<std::size_t, std::size_t, std::size_t>;

struct RawBimodule {
  CategoryPtr source;  // B
  CategoryPtr target;  // the category the values live over
  std::vector<TwistedComplex> objects;
  /// Images of basis elements; missing units default to identities, other
  /// missing entries to zero.
  std::map<HomKey, TwMorphism> morphisms;
};

class Bimodule {
 public:
  Bimodule() = default;

  const CategoryPtr& source() const { return source_; }
  const CategoryPtr& target() const { return target_; }
  std::size_t size() const { return objects_.size(); }
  const TwistedComplex& object(std::size_t j) const { return objects_.at(j); }
  const TwMorphism& map(std::size_t j, std::size_t k, std::size_t b) const { return maps_.at({j, k, b}); }
  /// Image of a linear combination of basis elements of Hom_B(B_j, B_k).
  TwMorphism apply(std::size_t j, std::size_t k, const Vec& b) const;

  friend Bimodule validate_bimodule(RawBimodule raw);

 private:
  CategoryPtr source_;
  CategoryPtr target_;
  std::vector<TwistedComplex> objects_;
  std::map<HomKey, TwMorphism> maps_;
};

/// Checks object and morphism shapes, S(unit) = id, S(db) = D(S(b)) and
/// S(b' o b) = S(b') o S(b) on all basis pairs.
Bimodule validate_bimodule(RawBimodule raw);

struct BimoduleMorphism {
  Bimodule source;
  Bimodule target;
  std::vector<TwMorphism> components;
};

/// Components must be closed of degree 0 and strictly natural.
BimoduleMorphism validate_bimodule_morphism(BimoduleMorphism raw);
BimoduleMorphism identity_bimodule_morphism(const Bimodule& s);

enum class Side { A, B };

struct GluedCategory {
  CategoryPtr category;
  CategoryPtr a;
  CategoryPtr b;
  Bimodule s;
  std::vector<Side> sides;

  std::size_t a_object(std::size_t i) const { return i; }
  std::size_t b_object(std::size_t j) const { return a->size() + j; }
  Side side(std::size_t x) const { return sides.at(x); }
};

GluedCategory upper_triangular(const CategoryPtr& a, const CategoryPtr& b, const Bimodule& s);

/// Violations of the four-case Hom table of the gluing; empty when it holds.
std::vector<std::string> gluing_shape_violations(const GluedCategory& c);

TwistedComplex embed(const GluedCategory& c, Side side, const TwistedComplex& z);
TwMorphism embed(const GluedCategory& c, Side side, const TwMorphism& f);
TwistedComplex restrict_to(const GluedCategory& c, Side side, const TwistedComplex& z);

TwistedComplex tensor(const TwistedComplex& n, const Bimodule& p);

/// P: B -> Tw(A) viewed as a bimodule B -> Tw(C).
Bimodule underline(const GluedCategory& c, const Bimodule& p);
Bimodule bimodule_cone(const BimoduleMorphism& phi);
/// The bimodule B -> Tw(C) built from phi: S -> T as a cone into h^B_C + T.
Bimodule widetilde(const GluedCategory& c, const BimoduleMorphism& phi);

}  // namespace dgglue
