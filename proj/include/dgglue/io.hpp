#pragma once

// JSON records for categories, twisted complexes, bimodules, bimodule
// morphisms, glued categories and Gram matrices, plus JSON renderings of all
// reports. Objects are std::map backed, so keys come out sorted.

#include <map>
#include <string>

#include <json.hpp>

#include "dgglue/euler.hpp"
#include "dgglue/glue.hpp"
#include "dgglue/scenarios.hpp"
#include "dgglue/sod.hpp"

namespace dgglue {

using Json = nlohmann::json;

/// Reads and parses a file; failures become ValidationError.
Json read_json_file(const std::string& path);

Json scalar_json(const Scalar& x);
Scalar scalar_from_json(const Json& j);
/// Sparse [[index, "p/q"], ...].
Json sparse_json(const Vec& v);
Vec sparse_from_json(const Json& j, std::size_t dim);

Json category_json(const FinDGCategory& cat);
RawCategory raw_category_from_json(const Json& j);
CategoryPtr category_from_json(const Json& j);

Json twcx_json(const TwistedComplex& z, const std::string& name = "");
TwistedComplex twcx_from_json(const Json& j, const CategoryPtr& cat);

Json entries_json(const EntryMap& entries);
EntryMap entries_from_json(const Json& j, const TwistedComplex& source, const TwistedComplex& target);

Json bimodule_json(const Bimodule& s, const std::string& name = "");
Bimodule bimodule_from_json(const Json& j, const CategoryPtr& b, const CategoryPtr& a);

/// Named categories, complexes and bimodules that later records may refer to.
struct Library {
  std::map<std::string, CategoryPtr> categories;
  std::map<std::string, TwistedComplex> complexes;
  std::map<std::string, Bimodule> bimodules;
  std::map<std::string, IntMatrix> grams;

  const CategoryPtr& category(const std::string& name) const;
  const Bimodule& bimodule(const std::string& name) const;
};

/// Loads one record or a bundle {"kind": "bundle", "items": [...]}.
void load_into(Library& lib, const Json& j);
Library load_library(const Json& j);

/// Source and target may be inline bimodule records or names in lib; a
/// missing source defaults to default_source when given.
BimoduleMorphism bimodule_morphism_from_json(const Json& j, const Library& lib, const Bimodule* default_source = nullptr);
Json bimodule_morphism_json(const BimoduleMorphism& phi);

Json glued_json(const GluedCategory& c, const std::string& bimodule_name = "S");
/// Rebuilds the gluing from its parts and checks any stored category against it.
GluedCategory glued_from_json(const Json& j, Library* lib = nullptr);

Json int_matrix_json(const IntMatrix& m);
/// Accepts [[...]] or {"kind": "gram", "matrix": [[...]]}.
IntMatrix int_matrix_from_json(const Json& j);

Json dims_json(const DegreeDims& d);
Json gram_json(const GramForm& g);
Json verdict_json(const EquivalenceVerdict& v);
using Names = std::vector<std::string>;
Json condition_json(const ConditionReport& r, const Names& b);
Json fully_faithful_json(const FullyFaithfulReport& r, const Names& b);
Json proof_chain_json(const ProofChainReport& r, const Names& b, const Names& a);
Json perfectness_json(const PerfectnessReport& r, const Names& c);
Json exceptionality_json(const ExceptionalityReport& r, const Names& c);
Json ks_json(const KSPartner& ks);
Json scenario_json(const ScenarioReport& r);

}  // namespace dgglue
