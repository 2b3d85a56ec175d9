// Acceptance run: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>

#include "support.hpp"

using namespace dgtest;

namespace {

using Kind = EquivalenceVerdict::Kind;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail << "first failure: " << what << "; ";
    pass = pass && ok;
  }
};

bool certified(const EquivalenceVerdict& v, const IntMatrix& g1, const IntMatrix& g2) {
  return v.kind == Kind::Equivalent && abs(determinant(v.certificate)) == 1 &&
         v.certificate.transpose() * g1 * v.certificate == g2;
}

ScenarioConfig family(std::size_t l1, std::size_t l2) {
  ScenarioConfig cfg;
  for (std::size_t i = 0; i < l1; ++i) cfg.points1.push_back({1, Scalar(static_cast<long>(i))});
  cfg.points2.push_back({0, 1});
  for (std::size_t i = 1; i < l2; ++i) cfg.points2.push_back({1, Scalar(static_cast<long>(9 + i))});
  return cfg;
}

const std::vector<ScenarioReport>& scenarios() {
  static const std::vector<ScenarioReport> reports = [] {
    std::vector<ScenarioReport> out;
    for (std::size_t l1 = 1; l1 <= 3; ++l1)
      for (std::size_t l2 = 1; l2 <= 3; ++l2) out.push_back(run_scenario(family(l1, l2)));
    return out;
  }();
  return reports;
}

std::string tag(const ScenarioReport& r) { return "(" + std::to_string(r.l1) + "," + std::to_string(r.l2) + ")"; }

std::vector<TwistedComplex> representables(const CategoryPtr& c) {
  std::vector<TwistedComplex> out;
  for (std::size_t x = 0; x < c->size(); ++x) out.push_back(representable(c, x));
  return out;
}

// Random gluings that pass the condition, drawn once and shared.
struct Instance {
  GluingInstance g;
  GluedCategory c;
};

const std::vector<Instance>& passing_instances() {
  static const std::vector<Instance> out = [] {
    std::vector<Instance> v;
    Rng rng(2024);
    for (int it = 0; it < 1000 && v.size() < 120; ++it) {
      GluingInstance g = random_gluing(rng);
      if (!check_condition(g.phi).pass) continue;
      GluedCategory c = upper_triangular(g.a, g.b, g.s);
      v.push_back({std::move(g), std::move(c)});
    }
    return v;
  }();
  return out;
}

void criterion1(Outcome& o) {
  const IntMatrix k = euler_matrix(representables(build_kronecker())).matrix;
  const IntMatrix target{{1, 1}, {-1, 0}};
  o.require(k == IntMatrix{{1, 2}, {0, 1}}, "Kronecker Euler matrix");
  const EquivalenceVerdict v = form_equivalence(k, target);
  o.require(certified(v, k, target), "certificate");
  o.detail << "chi_K = " << to_string(k) << ", P = " << to_string(v.certificate);
}

void criterion2(Outcome& o) {
  const auto start = std::chrono::steady_clock::now();
  for (const auto& r : scenarios()) {
    const IntMatrix target = chi_t(1 - static_cast<long>(r.l1 * r.l2));
    o.require(r.failed_stage.empty(), tag(r) + " stopped at " + r.failed_stage);
    o.require(certified(r.counit_vs_target, r.ks.basis_gram.matrix, target), tag(r) + " counit Gram");
    o.require(certified(r.orthogonal_vs_target, r.orthogonal.gram.matrix, target), tag(r) + " orthogonal Gram");
    o.require(certified(r.counit_vs_orthogonal, r.ks.basis_gram.matrix, r.orthogonal.gram.matrix),
              tag(r) + " counit vs orthogonal");
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.require(secs < 30, "time budget");
  o.detail << scenarios().size() << " scenarios, both constructions congruent to chi_t, " << secs << " s";
}

void criterion3(Outcome& o) {
  int pairs = 0;
  for (long t = -10; t <= 10; ++t) {
    const InvariantPack p = invariant_pack(chi_t(t));
    for (long u = -10; u <= 10; ++u) {
      if (t == u) continue;
      const EquivalenceVerdict v = form_equivalence(chi_t(t), chi_t(u));
      const InvariantPack q = invariant_pack(chi_t(u));
      const bool differs = p.det != q.det || p.sym_rank != q.sym_rank || p.sym_signature != q.sym_signature ||
                           p.smith_sym != q.smith_sym || p.smith_skew != q.smith_skew ||
                           p.coxeter_charpoly != q.coxeter_charpoly;
      o.require(v.kind == Kind::Inequivalent, "t=" + std::to_string(t) + " t'=" + std::to_string(u));
      o.require(!v.invariant.empty() && v.first_value != v.second_value && differs, "witness soundness");
      ++pairs;
    }
  }
  o.detail << pairs << " ordered pairs Inequivalent with differing invariants";
}

void criterion4(Outcome& o) {
  for (const auto& r : scenarios()) o.require(r.fully_faithful.pass, tag(r) + " fully faithful");
  std::size_t n = 0;
  for (const auto& inst : passing_instances()) {
    const FullyFaithfulReport ff = verify_fully_faithful(inst.c, widetilde(inst.c, inst.g.phi));
    o.require(ff.pass, "random instance " + std::to_string(n));
    for (const auto& [key, pair] : ff.table) o.require(pair.first == pair.second, "End table");
    ++n;
  }
  o.require(n >= 100, "at least 100 random instances");
  o.detail << n << " random instances + " << scenarios().size() << " scenarios";
}

void criterion5(Outcome& o) {
  Rng rng(2025);
  int glued = 0;
  for (int it = 0; it < 150; ++it) {
    const GluingInstance g = random_gluing(rng);
    const GluedCategory c = upper_triangular(g.a, g.b, g.s);
    o.require(gluing_shape_violations(c).empty(), "shape");
    for (std::size_t j = 0; j < g.b->size(); ++j)
      for (std::size_t i = 0; i < g.a->size(); ++i) {
        o.require(c.category->dim(c.b_object(j), c.a_object(i)) == 0, "Hom from B to A");
        o.require(HomComplex(representable(c.category, c.b_object(j)), representable(c.category, c.a_object(i))).flat_dim() == 0,
                  "Hom complex from B to A");
      }
    for (const auto& [side, cat] : {std::pair{Side::A, g.a}, std::pair{Side::B, g.b}}) {
      const TwistedComplex z = random_twcx(rng, cat), w = random_twcx(rng, cat);
      o.require(hom_cohomology(embed(c, side, z), embed(c, side, w)) == hom_cohomology(z, w), "embed preserves Hom");
    }
    ++glued;
  }
  o.detail << glued << " random gluings";
}

void criterion6(Outcome& o) {
  std::size_t n = 0;
  for (const auto& inst : passing_instances()) {
    const ProofChainReport pc = proof_chain(inst.c, inst.g.phi);
    o.require(pc.pass, "proof chain");
    for (const auto& [key, row] : pc.table) o.require(row[0] == row[1] && row[1] == row[2], "table rows");
    for (const auto& [key, pair] : pc.restriction) o.require(pair.first == pair.second, "restriction");
    ++n;
  }
  for (const auto& r : scenarios()) o.require(r.proof.pass, tag(r) + " proof chain");
  o.detail << n << " random instances + " << scenarios().size() << " scenarios";
}

void criterion7(Outcome& o) {
  Rng rng(2026);
  int checked = 0;
  for (int it = 0; it < 100; ++it) {
    const GluingInstance g = random_gluing(rng);
    const GluedCategory c = upper_triangular(g.a, g.b, g.s);
    const Bimodule vs = widetilde(c, identity_bimodule_morphism(g.s));
    for (std::size_t j = 0; j < g.b->size(); ++j) {
      const TwistedComplex t = tensor(representable(g.b, j), vs), h = representable(c.category, c.b_object(j));
      for (std::size_t x = 0; x < c.category->size(); ++x) {
        const TwistedComplex r = representable(c.category, x);
        o.require(hom_cohomology(r, t) == hom_cohomology(r, h) && hom_cohomology(t, r) == hom_cohomology(h, r),
                  "tensor(h^B, vS) vs h^B");
        ++checked;
      }
    }
  }
  o.detail << checked << " (generator, representable) pairs";
}

void criterion8(Outcome& o) {
  for (const auto& r : scenarios()) {
    o.require(r.k0_rank_a == 2, tag(r) + " rank K0(A)");
    o.require(r.k0_rank_ks == 2, tag(r) + " rank K0(KS)");
  }
  o.detail << "rank K0(KS) = rank K0(A) = 2 in all " << scenarios().size() << " scenarios";
}

void criterion9(Outcome& o) {
  Rng rng(2027);
  auto revalidate = [](const TwistedComplex& z) { return validate_twcx({z.category(), z.generators(), z.delta()}); };
  int mc = 0, d2 = 0, yoneda = 0, les = 0, bilinear = 0, packs = 0;
  for (int it = 0; it < 100; ++it) {
    const CategoryPtr c = random_directed_category(rng, rng.index(3) + 1);
    const TwistedComplex z = random_twcx(rng, c, 4), w = random_twcx(rng, c, 4);
    revalidate(shift(z, static_cast<int>(rng.uniform(-3, 3))));
    revalidate(direct_sum(z, w));
    revalidate(cone(random_closed_morphism(rng, z, w)));
    ++mc;
    const HomComplex h(z, w);
    o.require((h.flat_differential() * h.flat_differential()).is_zero(), "D^2 = 0");
    ++d2;
    for (std::size_t x = 0; x < c->size(); ++x) {
      const DegreeDims oracle = evaluation_oracle(z, x);
      o.require(hom_cohomology(representable(c, x), z) == oracle, "Yoneda: Hom from representable");
      o.require(cohomology_dims(evaluate_at(z, x)) == oracle, "Yoneda: evaluation");
      ++yoneda;
    }
  }
  for (int it = 0; it < 40; ++it) {
    const GluingInstance g = random_gluing(rng);
    revalidate(tensor(random_twcx(rng, g.b, 3), g.s));
    ++mc;
  }
  while (les < 500) {
    const CategoryPtr c = random_directed_category(rng, rng.index(3) + 1);
    const TwistedComplex z = random_twcx(rng, c), w = random_twcx(rng, c), v = random_twcx(rng, c);
    const TwMorphism f = random_closed_morphism(rng, z, w);
    o.require(hom_cohomology(v, cone(f)) == les_oracle(v, f), "long exact sequence");
    ++les;
  }
  while (bilinear < 60) {
    const CategoryPtr c = random_directed_category(rng, rng.index(3) + 1);
    if (!exceptionality_check(c).pass) continue;
    const IntMatrix g = euler_matrix(representables(c)).matrix;
    const TwistedComplex z = random_twcx(rng, c, 4), w = random_twcx(rng, c, 4);
    IntMatrix kz(1, c->size()), kw(c->size(), 1);
    const auto cz = k0_class(z), cw = k0_class(w);
    for (std::size_t i = 0; i < c->size(); ++i) kz(0, i) = cz[i], kw(i, 0) = cw[i];
    o.require(Integer(euler_characteristic(hom_cohomology(z, w))) == (kz * g * kw)(0, 0), "Euler bilinearity");
    ++bilinear;
  }
  for (; packs < 200; ++packs) {
    const std::size_t n = rng.index(4) + 1;
    const IntMatrix g = random_int_matrix(rng, n, n, 3), p = random_unimodular(rng, n);
    const InvariantPack a = invariant_pack(g), b = invariant_pack(p.transpose() * g * p);
    o.require(a.det == b.det && a.sym_rank == b.sym_rank && a.sym_signature == b.sym_signature &&
                  a.smith_sym == b.smith_sym && a.smith_skew == b.smith_skew && a.coxeter_charpoly == b.coxeter_charpoly,
              "invariant pack under congruence");
  }
  o.detail << "MC " << mc << ", D^2 " << d2 << ", Yoneda " << yoneda << ", LES " << les << ", bilinearity " << bilinear
           << ", packs " << packs;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
      {"chi_C reproduction", criterion1},
      {"chi_t reproduction on the (l1,l2) family", criterion2},
      {"chi_t pairwise inequivalence", criterion3},
      {"full faithfulness of the twisted embedding", criterion4},
      {"gluing semi-orthogonality and embeddings", criterion5},
      {"proof-chain tables", criterion6},
      {"twisted S consistency", criterion7},
      {"K0 rank of the KS partner", criterion8},
      {"core invariant suites", criterion9},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << i + 1 << " " << criteria[i].first << ": " << o.detail.str() << " ("
              << secs << " s)" << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
