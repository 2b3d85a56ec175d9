#pragma once

// The projective line as the Kronecker quiver, skyscrapers and torsion
// objects, and the gluing of P1 with a point along two torsion sheaves.

#include <optional>
#include <string>
#include <vector>

#include "dgglue/euler.hpp"
#include "dgglue/glue.hpp"
#include "dgglue/sod.hpp"

namespace dgglue {

/// One object, Hom = k in degree 0.
CategoryPtr build_unit_category(const std::string& name = "pt", const std::string& object = "*");
/// Objects v0, v1 with Hom(v0, v1) spanned by x, y in degree 0.
CategoryPtr build_kronecker();

struct ProjPoint {
  Scalar a;
  Scalar b;
};

/// Parses "a:b"; rejects [0:0].
ProjPoint parse_point(const std::string& text);
/// Parses a comma separated list "a:b,c:d".
std::vector<ProjPoint> parse_points(const std::string& text);
bool same_point(const ProjPoint& p, const ProjPoint& q);

/// cone(b x - a y : h^{v0} -> h^{v1})
TwistedComplex skyscraper(const CategoryPtr& kronecker, const ProjPoint& p);
/// Direct sum of skyscrapers over the list (repeats allowed).
TwistedComplex torsion_object(const CategoryPtr& kronecker, const std::vector<ProjPoint>& points);

struct ScenarioConfig {
  std::vector<ProjPoint> points1;
  std::vector<ProjPoint> points2;
  std::optional<long> search_bound;
  std::size_t depth_cap = 64;
};

/// A = Kronecker, B = pt, S(*) = torsion(points1) + torsion(points2),
/// T(*) = torsion(points2), phi the projection.
struct P1Gluing {
  CategoryPtr a;
  CategoryPtr b;
  Bimodule s;
  Bimodule t;
  BimoduleMorphism phi;
};

P1Gluing build_p1_gluing(const ScenarioConfig& cfg);

struct ScenarioReport {
  std::size_t l1 = 0;
  std::size_t l2 = 0;
  long t = 0;
  std::string failed_stage;  // empty when every stage ran
  std::vector<std::string> notes;
  std::vector<std::string> a_objects, b_objects, c_objects;

  ConditionReport condition;
  FullyFaithfulReport fully_faithful;
  ProofChainReport proof;
  PerfectnessReport perfectness;
  ExceptionalityReport exceptional;
  GramForm chi_a;      // Kronecker representables
  GramForm chi_glued;  // representables of the gluing
  KSPartner ks;
  OrthogonalGram orthogonal;
  IntMatrix target;  // chi_t

  EquivalenceVerdict chi_a_vs_standard;   // against [[1,1],[-1,0]]
  EquivalenceVerdict counit_vs_target;
  EquivalenceVerdict orthogonal_vs_target;
  EquivalenceVerdict counit_vs_orthogonal;
  EquivalenceVerdict chi_a_vs_ks;
  std::size_t k0_rank_a = 0;
  std::size_t k0_rank_ks = 0;

  bool pass = false;
};

/// Runs every stage; stops at the first failing one and records it.
/// Throws DepthCapExceeded if a resolution hits the cap.
ScenarioReport run_scenario(const ScenarioConfig& cfg);

}  // namespace dgglue
