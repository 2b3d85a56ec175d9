#pragma once

// Checks around the semi-orthogonal decomposition of a gluing: the vanishing
// condition on the cone of phi, full faithfulness of the twisted embedding,
// semi-free resolutions of levelwise modules and the KS partner.

#include <array>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "dgglue/euler.hpp"
#include "dgglue/glue.hpp"

namespace dgglue {

using PairTable = std::map<std::pair<std::size_t, std::size_t>, DegreeDims>;

struct ConditionReport {
  PairTable table;  // (j, k) -> H^* Hom(R(B_j), T(B_k))
  bool pass = false;
  std::string note;
};

/// Checks the vanishing condition on representables of B.
ConditionReport check_condition(const BimoduleMorphism& phi);

struct FullyFaithfulReport {
  std::map<std::pair<std::size_t, std::size_t>, std::pair<DegreeDims, DegreeDims>> table;  // (glued, in B)
  bool pass = false;
};

FullyFaithfulReport verify_fully_faithful(const GluedCategory& c, const Bimodule& vt);

struct ProofChainReport {
  /// Hom(M x vT, N x vT), Hom(M x vS, N x vT), Hom_B(M, N)
  std::map<std::pair<std::size_t, std::size_t>, std::array<DegreeDims, 3>> table;
  /// (B_j, a) -> evaluations at a of restrict(A, B_j x vT) and of T(B_j)
  std::map<std::pair<std::size_t, std::size_t>, std::pair<DegreeDims, DegreeDims>> restriction;
  bool pass = false;
};

ProofChainReport proof_chain(const GluedCategory& c, const BimoduleMorphism& phi);

/// A right module over B given degreewise: a flat graded basis and
/// differential per object, and for every basis element b of Hom(x, y) the
/// action M(y) -> M(x), m -> m.b.
struct LevelwiseModule {
  CategoryPtr category;
  std::vector<std::vector<int>> degrees;
  std::vector<SparseMatrix> differential;
  std::map<HomKey, SparseMatrix> action;
};

/// Checks d^2 = 0, the Leibniz rule for the action, unit and associativity.
void check_module(const LevelwiseModule& m);
/// Y -> Hom(P(Y), G).
LevelwiseModule hom_module(const Bimodule& p, const TwistedComplex& g);
/// Y -> Hom(h^Y, Q).
LevelwiseModule evaluation_module(const TwistedComplex& q);

struct Resolution {
  TwistedComplex complex;
  /// For generator g = (Y_g, s_g): an element of M(Y_g) of degree -s_g.
  std::vector<Vec> witness;
  std::size_t rounds = 0;
};

/// Cohomology of the cone of Q(x) -> M(x) at one object.
DegreeDims cone_cohomology(const LevelwiseModule& m, const Resolution& r, std::size_t x);
/// Kills cone cohomology until every evaluation is acyclic. Each round picks,
/// among objects no other pending object can still change, the lowest
/// degree (ties by index). Throws DepthCapExceeded after depth_cap rounds.
Resolution semi_free_resolution(const LevelwiseModule& m, std::size_t depth_cap);

enum class Verdict { Pass, Fail, Unverified };
std::string to_string(Verdict v);

struct PerfectnessReport {
  bool tensor_side = true;
  std::vector<std::size_t> generators;  // per object of C: size of the resolution
  std::vector<bool> resolved;
  Verdict verdict = Verdict::Unverified;
  std::string note;
};

PerfectnessReport check_perfectness(const GluedCategory& c, const Bimodule& vt, std::size_t depth_cap);

/// Counit Q x vT -> G of a resolution Q of Hom(vT, G).
TwMorphism counit(const Resolution& r, const Bimodule& vt, const TwistedComplex& g);

struct EGenerator {
  std::size_t source_object = 0;
  TwistedComplex complex;
  std::vector<long> k0;
};

struct KSPartner {
  std::vector<EGenerator> generators;
  std::vector<std::size_t> dropped;  // objects of C whose cone was contractible
  PairTable table;
  GramForm gram;  // over all retained generators
  bool orthogonal = false;
  std::size_t k0_rank = 0;
  /// First generators (lexicographically) whose classes form a basis of the
  /// lattice spanned by all generator classes, and the Gram matrix on them.
  std::vector<std::size_t> basis;
  GramForm basis_gram;
  /// Generator classes together with the classes of the B-image span all of K0(C).
  bool spans_k0 = false;
};

KSPartner ks_partner(const GluedCategory& c, const Bimodule& vt, std::size_t depth_cap);

}  // namespace dgglue
