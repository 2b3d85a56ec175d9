#include "dgglue/scenarios.hpp"

#include "dgglue/errors.hpp"

namespace dgglue {

CategoryPtr build_unit_category(const std::string& name, const std::string& object) {
  RawCategory r;
  r.name = name;
  const auto x = r.add_object(object);
  r.add_basis(x, x, 0, "id");
  r.set_unit_basis(x, 0);
  return make_category(r);
}

CategoryPtr build_kronecker() {
  RawCategory r;
  r.name = "K";
  const auto v0 = r.add_object("v0"), v1 = r.add_object("v1");
  r.add_basis(v0, v0, 0, "id_v0");
  r.add_basis(v1, v1, 0, "id_v1");
  r.add_basis(v0, v1, 0, "x");
  r.add_basis(v0, v1, 0, "y");
  r.set_unit_basis(v0, 0);
  r.set_unit_basis(v1, 0);
  return make_category(r);
}

ProjPoint parse_point(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ValidationError("point '" + text + "' is not of the form a:b");
  ProjPoint p{parse_scalar(text.substr(0, colon)), parse_scalar(text.substr(colon + 1))};
  if (p.a == 0 && p.b == 0) throw ValidationError("point [0:0] is not a projective point");
  return p;
}

std::vector<ProjPoint> parse_points(const std::string& text) {
  std::vector<ProjPoint> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const std::string item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!item.empty()) out.push_back(parse_point(item));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

bool same_point(const ProjPoint& p, const ProjPoint& q) { return p.a * q.b - q.a * p.b == 0; }

TwistedComplex skyscraper(const CategoryPtr& kronecker, const ProjPoint& p) {
  if (p.a == 0 && p.b == 0) throw ValidationError("skyscraper at [0:0]");
  const std::size_t v0 = kronecker->index_of("v0"), v1 = kronecker->index_of("v1");
  TwMorphism f(representable(kronecker, v0), representable(kronecker, v1), 0);
  Vec e(kronecker->dim(v0, v1));
  e[0] = p.b;
  e[1] = -p.a;
  f.add(0, 0, 1, e);
  return cone(f);
}

TwistedComplex torsion_object(const CategoryPtr& kronecker, const std::vector<ProjPoint>& points) {
  std::vector<TwistedComplex> parts;
  for (const auto& p : points) parts.push_back(skyscraper(kronecker, p));
  return direct_sum(kronecker, parts);
}

P1Gluing build_p1_gluing(const ScenarioConfig& cfg) {
  if (cfg.points1.empty() || cfg.points2.empty()) throw ValidationError("both point lists must be nonempty");
  P1Gluing g;
  g.a = build_kronecker();
  g.b = build_unit_category();
  const TwistedComplex p1 = torsion_object(g.a, cfg.points1);
  const TwistedComplex p2 = torsion_object(g.a, cfg.points2);
  const TwistedComplex sum = direct_sum(p1, p2);
  g.s = validate_bimodule({g.b, g.a, {sum}, {}});
  g.t = validate_bimodule({g.b, g.a, {p2}, {}});
  TwMorphism proj(sum, p2, 0);
  for (std::size_t i = 0; i < p2.size(); ++i) proj.add(i, p1.size() + i, 1, g.a->unit(p2.generator(i).object));
  g.phi = validate_bimodule_morphism({g.s, g.t, {proj}});
  return g;
}

ScenarioReport run_scenario(const ScenarioConfig& cfg) {
  ScenarioReport rep;
  const P1Gluing g = build_p1_gluing(cfg);
  rep.l1 = cfg.points1.size();
  rep.l2 = cfg.points2.size();
  rep.t = 1 - static_cast<long>(rep.l1 * rep.l2);
  rep.target = chi_t(rep.t);
  rep.a_objects = g.a->objects();
  rep.b_objects = g.b->objects();
  rep.notes.push_back("torsion sheaves of length l are modelled as sums of l skyscrapers");
  rep.notes.push_back("semi-orthogonal order: no morphisms from the second component to the first");
  for (const auto& p : cfg.points1)
    for (const auto& q : cfg.points2)
      if (same_point(p, q)) {
        rep.notes.push_back("the supports of the two torsion objects meet");
        break;
      }

  std::vector<TwistedComplex> reps_a;
  for (std::size_t x = 0; x < g.a->size(); ++x) reps_a.push_back(representable(g.a, x));
  rep.chi_a = euler_matrix(reps_a, g.a->objects());
  rep.chi_a_vs_standard = form_equivalence(rep.chi_a.matrix, chi_t(1), cfg.search_bound);
  const ExceptionalityReport ex_a = exceptionality_check(g.a);
  rep.k0_rank_a = ex_a.pass ? g.a->size() : 0;

  rep.condition = check_condition(g.phi);
  if (!rep.condition.pass) {
    rep.failed_stage = "check_condition";
    return rep;
  }
  const GluedCategory c = upper_triangular(g.a, g.b, g.s);
  rep.c_objects = c.category->objects();
  const Bimodule vt = widetilde(c, g.phi);
  rep.fully_faithful = verify_fully_faithful(c, vt);
  if (!rep.fully_faithful.pass) {
    rep.failed_stage = "verify_fully_faithful";
    return rep;
  }
  rep.proof = proof_chain(c, g.phi);
  if (!rep.proof.pass) {
    rep.failed_stage = "proof_chain";
    return rep;
  }
  rep.perfectness = check_perfectness(c, vt, cfg.depth_cap);
  if (rep.perfectness.verdict != Verdict::Pass) {
    rep.failed_stage = "check_perfectness";
    return rep;
  }
  rep.exceptional = exceptionality_check(c.category);
  std::vector<TwistedComplex> reps_c;
  for (std::size_t x = 0; x < c.category->size(); ++x) reps_c.push_back(representable(c.category, x));
  rep.chi_glued = euler_matrix(reps_c, c.category->objects());

  rep.ks = ks_partner(c, vt, cfg.depth_cap);
  rep.k0_rank_ks = rep.ks.k0_rank;
  rep.orthogonal = orthogonal_gram(rep.chi_glued, {k0_class(tensor(representable(c.b, 0), vt))});

  using Kind = EquivalenceVerdict::Kind;
  const IntMatrix& counit_gram = rep.ks.basis_gram.matrix;
  if (counit_gram.rows() == 2) {
    rep.counit_vs_target = form_equivalence(counit_gram, rep.target, cfg.search_bound);
    rep.chi_a_vs_ks = form_equivalence(rep.chi_a.matrix, counit_gram, cfg.search_bound);
  }
  if (rep.orthogonal.gram.size() == 2)
    rep.orthogonal_vs_target = form_equivalence(rep.orthogonal.gram.matrix, rep.target, cfg.search_bound);
  if (counit_gram.rows() == rep.orthogonal.gram.size())
    rep.counit_vs_orthogonal = form_equivalence(counit_gram, rep.orthogonal.gram.matrix, cfg.search_bound);

  const bool expect_distinct = rep.t != 1;
  rep.pass = rep.exceptional.pass && rep.ks.orthogonal && rep.ks.spans_k0 &&
             rep.chi_a_vs_standard.kind == Kind::Equivalent && rep.counit_vs_target.kind == Kind::Equivalent &&
             rep.orthogonal_vs_target.kind == Kind::Equivalent && rep.counit_vs_orthogonal.kind == Kind::Equivalent &&
             rep.k0_rank_ks == rep.k0_rank_a &&
             (rep.chi_a_vs_ks.kind == Kind::Inequivalent) == expect_distinct;
  if (!rep.pass) rep.failed_stage = "euler";
  return rep;
}

}  // namespace dgglue
