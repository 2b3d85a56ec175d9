#pragma once

// Euler forms on K0, orthogonal sublattices and integral congruence of
// bilinear forms.

#include <optional>
#include <string>
#include <vector>

#include "dgglue/exactlin.hpp"
#include "dgglue/twcx.hpp"

namespace dgglue {

struct GramForm {
  IntMatrix matrix;
  std::vector<std::string> labels;
  std::size_t size() const { return matrix.rows(); }
};

/// G(s, t) = sum_m (-1)^m dim H^m Hom(Z_s, Z_t).
GramForm euler_matrix(const std::vector<TwistedComplex>& objects, std::vector<std::string> labels = {});

struct ExceptionalityReport {
  bool pass = false;
  std::vector<std::size_t> order;
  std::string reason;
};

/// Looks for an ordering with Hom(later, earlier) acyclic and End = k.
ExceptionalityReport exceptionality_check(const CategoryPtr& cat);

struct OrthogonalGram {
  GramForm gram;
  IntLattice lattice;
};

/// Restriction of chi to {v : chi(c, v) = 0 for all c}.
OrthogonalGram orthogonal_gram(const GramForm& chi, const std::vector<std::vector<long>>& left_classes);

/// Congruence invariants of an integral bilinear form.
struct InvariantPack {
  Integer det;
  std::size_t sym_rank = 0;
  long sym_signature = 0;
  std::vector<Integer> smith_sym;   // G + G^T
  std::vector<Integer> smith_skew;  // G - G^T
  /// Characteristic polynomial of G^{-1} G^T, constant term first; unimodular G only.
  std::optional<std::vector<Scalar>> coxeter_charpoly;
};

InvariantPack invariant_pack(const IntMatrix& g);
/// Rank and signature (positive minus negative) of a symmetric rational matrix.
std::pair<std::size_t, long> rank_signature(const Matrix& sym);
/// Coefficients c_0..c_n of det(x I - m).
std::vector<Scalar> characteristic_polynomial(const Matrix& m);

struct EquivalenceVerdict {
  enum class Kind { Equivalent, Inequivalent, Undecided };
  Kind kind = Kind::Undecided;
  IntMatrix certificate;  // P with P^T G1 P = G2
  std::string invariant;
  std::string first_value;
  std::string second_value;
};

std::string to_string(EquivalenceVerdict::Kind k);

long default_search_bound(std::size_t dim);

/// Compares invariants, then searches unimodular P with |entries| <= bound.
EquivalenceVerdict form_equivalence(const IntMatrix& g1, const IntMatrix& g2, std::optional<long> bound = {});

/// chi_t = [[t, 1], [-1, 0]]
IntMatrix chi_t(long t);

}  // namespace dgglue
