#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>

#include "dgglue/errors.hpp"
#include "dgglue/io.hpp"

namespace dgglue {

namespace {

constexpr int kPass = 0, kFail = 1, kInput = 2, kDepth = 3;

void print(std::ostream& out, const Json& j) { out << j.dump(2) << '\n'; }

// "name" finds a named complex or a unique object; "cat:obj" picks the category.
TwistedComplex resolve_complex(const Library& lib, const std::string& name) {
  if (auto it = lib.complexes.find(name); it != lib.complexes.end()) return it->second;
  const auto colon = name.rfind(':');
  if (colon != std::string::npos) {
    const CategoryPtr& c = lib.category(name.substr(0, colon));
    return representable(c, c->index_of(name.substr(colon + 1)));
  }
  std::vector<TwistedComplex> found;
  for (const auto& [cname, c] : lib.categories)
    if (auto x = c->find(name)) found.push_back(representable(c, *x));
  if (found.empty()) throw ValidationError("no complex or object named '" + name + "'");
  if (found.size() > 1) throw ValidationError("object '" + name + "' is ambiguous; use category:object");
  return found.front();
}

Json read_json_arg(const std::string& arg) {
  if (std::filesystem::exists(arg)) return read_json_file(arg);
  try {
    return Json::parse(arg);
  } catch (const nlohmann::json::exception&) {
    throw ValidationError("'" + arg + "' is neither a file nor inline JSON");
  }
}

// A phi file is a morphism record, or a bundle whose morphism record may refer
// to bimodules defined earlier in the bundle.
BimoduleMorphism load_phi(const Json& j, Library& lib, const Bimodule& s) {
  if (j.value("kind", std::string()) != "bundle") return bimodule_morphism_from_json(j, lib, &s);
  std::optional<BimoduleMorphism> phi;
  for (const auto& item : j.at("items")) {
    if (item.value("kind", std::string()) == "bimodule_morphism") {
      if (phi) throw ValidationError("more than one bimodule morphism in bundle");
      phi = bimodule_morphism_from_json(item, lib, &s);
    } else {
      load_into(lib, item);
    }
  }
  if (!phi) throw ValidationError("bundle contains no bimodule morphism");
  return *phi;
}

struct Glued {
  Library lib;
  GluedCategory c;
  BimoduleMorphism phi;
};

Glued load_glued(const std::string& glued_path, const std::string& phi_path) {
  Glued g;
  g.c = glued_from_json(read_json_file(glued_path), &g.lib);
  g.phi = load_phi(read_json_file(phi_path), g.lib, g.c.s);
  if (g.phi.source.source() != g.c.b || g.phi.source.target() != g.c.a) {
    if (g.phi.source.source()->content_hash() != g.c.b->content_hash() ||
        g.phi.source.target()->content_hash() != g.c.a->content_hash())
      throw ValidationError("phi does not live over the categories of the gluing");
  }
  return g;
}

int cmd_validate(const std::string& file, std::ostream& out) {
  const Library lib = load_library(read_json_file(file));
  Json j{{"valid", true}};
  auto names = [](const auto& m) {
    Json a = Json::array();
    for (const auto& [k, v] : m) a.push_back(k);
    return a;
  };
  j["categories"] = names(lib.categories);
  j["complexes"] = names(lib.complexes);
  j["bimodules"] = names(lib.bimodules);
  j["grams"] = names(lib.grams);
  print(out, j);
  return kPass;
}

int cmd_hom(const std::string& file, const std::string& a, const std::string& b, std::ostream& out) {
  const Library lib = load_library(read_json_file(file));
  const TwistedComplex x = resolve_complex(lib, a), y = resolve_complex(lib, b);
  if (x.category() != y.category() && x.cat().content_hash() != y.cat().content_hash())
    throw ValidationError("'" + a + "' and '" + b + "' live over different categories");
  const DegreeDims h = hom_cohomology(x, y);
  print(out, {{"source", a}, {"target", b}, {"cohomology", dims_json(h)}, {"euler", euler_characteristic(h)}});
  return kPass;
}

int cmd_glue(const std::string& fa, const std::string& fb, const std::string& fs, const std::string& out_path,
             std::ostream& out) {
  Library lib;
  load_into(lib, read_json_file(fa));
  load_into(lib, read_json_file(fb));
  const Json sj = read_json_file(fs);
  const CategoryPtr b = lib.category(sj.at("source").get<std::string>());
  const CategoryPtr a = lib.category(sj.at("target").get<std::string>());
  const Bimodule s = bimodule_from_json(sj, b, a);
  const GluedCategory c = upper_triangular(a, b, s);
  const Json record = glued_json(c, sj.value("name", std::string("S")));
  const auto violations = gluing_shape_violations(c);
  if (out_path.empty()) {
    print(out, record);
  } else {
    std::ofstream f(out_path);
    if (!f) throw ValidationError("cannot write '" + out_path + "'");
    f << record.dump(2) << '\n';
    print(out, {{"written", out_path}, {"objects", c.category->objects()}, {"shape_violations", violations}});
  }
  return violations.empty() ? kPass : kFail;
}

int cmd_check_sod(const std::string& glued, const std::string& phi_path, std::size_t depth_cap, std::ostream& out) {
  const Glued g = load_glued(glued, phi_path);
  const auto& c = g.c;
  const Names an = c.a->objects(), bn = c.b->objects(), cn = c.category->objects();
  Json j;
  const auto violations = gluing_shape_violations(c);
  j["shape_violations"] = violations;
  const ConditionReport cond = check_condition(g.phi);
  j["condition"] = condition_json(cond, bn);
  if (!violations.empty() || !cond.pass) {
    j["pass"] = false;
    print(out, j);
    return kFail;
  }
  const Bimodule vt = widetilde(c, g.phi);
  const FullyFaithfulReport ff = verify_fully_faithful(c, vt);
  const ProofChainReport pc = proof_chain(c, g.phi);
  const PerfectnessReport perf = check_perfectness(c, vt, depth_cap);
  j["fully_faithful"] = fully_faithful_json(ff, bn);
  j["proof_chain"] = proof_chain_json(pc, bn, an);
  j["perfectness"] = perfectness_json(perf, cn);
  const bool pass = ff.pass && pc.pass && perf.verdict == Verdict::Pass;
  j["pass"] = pass;
  print(out, j);
  if (perf.verdict == Verdict::Unverified && ff.pass && pc.pass) return kDepth;
  return pass ? kPass : kFail;
}

int cmd_ks_partner(const std::string& glued, const std::string& phi_path, std::size_t depth_cap, std::ostream& out) {
  const Glued g = load_glued(glued, phi_path);
  const ConditionReport cond = check_condition(g.phi);
  if (!cond.pass) {
    print(out, {{"pass", false}, {"condition", condition_json(cond, g.c.b->objects())}});
    return kFail;
  }
  const KSPartner ks = ks_partner(g.c, widetilde(g.c, g.phi), depth_cap);
  Json j = ks_json(ks);
  j["pass"] = ks.orthogonal && ks.spans_k0;
  print(out, j);
  return j["pass"].get<bool>() ? kPass : kFail;
}

int cmd_euler(const std::string& file, const std::vector<std::string>& names, std::ostream& out) {
  const Library lib = load_library(read_json_file(file));
  std::vector<TwistedComplex> objects;
  std::vector<std::string> labels = names;
  Json j;
  if (names.empty()) {
    if (lib.categories.size() != 1) throw ValidationError("name the objects when the file holds several categories");
    const CategoryPtr& c = lib.categories.begin()->second;
    for (std::size_t x = 0; x < c->size(); ++x) objects.push_back(representable(c, x));
    labels = c->objects();
    const ExceptionalityReport ex = exceptionality_check(c);
    j["exceptionality"] = exceptionality_json(ex, labels);
  } else {
    for (const auto& n : names) objects.push_back(resolve_complex(lib, n));
    for (std::size_t i = 1; i < objects.size(); ++i)
      if (objects[i].cat().content_hash() != objects[0].cat().content_hash())
        throw ValidationError("objects live over different categories");
  }
  const GramForm g = euler_matrix(objects, labels);
  j["gram"] = gram_json(g);
  Json classes = Json::array();
  for (const auto& z : objects) classes.push_back(k0_class(z));
  j["k0_classes"] = classes;
  print(out, j);
  return kPass;
}

int cmd_form_equiv(const std::string& a, const std::string& b, std::optional<long> bound, std::ostream& out) {
  const IntMatrix g1 = int_matrix_from_json(read_json_arg(a));
  const IntMatrix g2 = int_matrix_from_json(read_json_arg(b));
  if (g1.rows() != g1.cols() || g2.rows() != g2.cols()) throw ValidationError("Gram matrices must be square");
  if (g1.rows() != g2.rows()) throw ValidationError("Gram matrices have different sizes");
  if (bound && *bound < 1) throw ValidationError("--bound must be positive");
  const EquivalenceVerdict v = form_equivalence(g1, g2, bound);
  print(out, verdict_json(v));
  return v.kind == EquivalenceVerdict::Kind::Equivalent ? kPass : kFail;
}

void scenario_text(const ScenarioReport& r, std::ostream& out) {
  auto dims = [](const DegreeDims& d) {
    std::string s = "{";
    for (const auto& [k, v] : d) s += (s.size() > 1 ? ", " : "") + std::to_string(k) + ":" + std::to_string(v);
    return s + "}";
  };
  out << "p1-two-points  l1=" << r.l1 << " l2=" << r.l2 << " t=" << r.t << '\n';
  for (const auto& n : r.notes) out << "  note: " << n << '\n';
  out << "chi_A = " << to_string(r.chi_a.matrix) << "  vs [[1,1],[-1,0]]: " << to_string(r.chi_a_vs_standard.kind) << '\n';
  out << "condition: " << (r.condition.pass ? "pass" : "FAIL") << '\n';
  if (!r.condition.pass)
    for (const auto& [key, d] : r.condition.table)
      if (!d.empty()) out << "  H*Hom(R(" << r.b_objects[key.first] << "), T(" << r.b_objects[key.second] << ")) = " << dims(d) << '\n';
  if (r.failed_stage == "check_condition") return;
  out << "fully faithful: " << (r.fully_faithful.pass ? "pass" : "FAIL") << '\n';
  if (r.failed_stage == "verify_fully_faithful") return;
  out << "proof chain: " << (r.proof.pass ? "pass" : "FAIL") << '\n';
  if (r.failed_stage == "proof_chain") return;
  out << "perfectness: " << to_string(r.perfectness.verdict) << '\n';
  if (r.failed_stage == "check_perfectness") return;
  out << "glued exceptional: " << (r.exceptional.pass ? "yes" : "no") << '\n';
  out << "chi_glued = " << to_string(r.chi_glued.matrix) << '\n';
  out << "KS generators: " << r.ks.generators.size() << ", dropped " << r.ks.dropped.size()
      << ", orthogonal " << (r.ks.orthogonal ? "yes" : "no") << '\n';
  out << "KS Gram (counit cones) = " << to_string(r.ks.basis_gram.matrix) << '\n';
  out << "KS Gram (orthogonal)   = " << to_string(r.orthogonal.gram.matrix) << '\n';
  out << "target chi_t           = " << to_string(r.target) << '\n';
  out << "counit vs target: " << to_string(r.counit_vs_target.kind) << '\n';
  out << "orthogonal vs target: " << to_string(r.orthogonal_vs_target.kind) << '\n';
  out << "counit vs orthogonal: " << to_string(r.counit_vs_orthogonal.kind) << '\n';
  out << "chi_A vs KS: " << to_string(r.chi_a_vs_ks.kind);
  if (r.chi_a_vs_ks.kind == EquivalenceVerdict::Kind::Inequivalent)
    out << " (" << r.chi_a_vs_ks.invariant << ": " << r.chi_a_vs_ks.first_value << " vs " << r.chi_a_vs_ks.second_value << ")";
  out << '\n';
  out << "rank K0: A=" << r.k0_rank_a << " KS=" << r.k0_rank_ks << '\n';
  out << (r.pass ? "PASS" : "FAIL") << '\n';
}

int cmd_scenario(const std::string& points1, const std::string& points2, const std::string& report,
                 std::optional<long> bound, std::size_t depth_cap, std::ostream& out) {
  ScenarioConfig cfg;
  cfg.points1 = parse_points(points1);
  cfg.points2 = parse_points(points2);
  cfg.search_bound = bound;
  cfg.depth_cap = depth_cap;
  const ScenarioReport r = run_scenario(cfg);
  if (report == "json")
    print(out, scenario_json(r));
  else
    scenario_text(r, out);
  if (r.failed_stage == "check_perfectness" && r.perfectness.verdict == Verdict::Unverified) return kDepth;
  return r.pass ? kPass : kFail;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gluings of finite DG categories along bimodules"};
  app.require_subcommand(1);

  std::string file, file2, file3, obj1, obj2, out_path, report = "text", points1, points2;
  std::vector<std::string> objects;
  std::size_t depth_cap = 64;
  std::optional<long> bound;

  auto* validate = app.add_subcommand("validate", "Load and validate every record in a file");
  validate->add_option("file", file)->required();

  auto* hom = app.add_subcommand("hom", "Hom cohomology between two complexes or objects");
  hom->add_option("file", file)->required();
  hom->add_option("obj1", obj1)->required();
  hom->add_option("obj2", obj2)->required();

  auto* glue = app.add_subcommand("glue", "Upper-triangular gluing of A and B along S");
  glue->add_option("A", file)->required();
  glue->add_option("B", file2)->required();
  glue->add_option("S", file3)->required();
  glue->add_option("-o,--output", out_path);

  auto* sod = app.add_subcommand("check-sod", "Vanishing condition, full faithfulness and perfectness");
  sod->add_option("glued", file)->required();
  sod->add_option("phi", file2)->required();
  sod->add_option("--depth-cap", depth_cap);

  auto* ks = app.add_subcommand("ks-partner", "Generators and Euler form of the KS partner");
  ks->add_option("glued", file)->required();
  ks->add_option("phi", file2)->required();
  ks->add_option("--depth-cap", depth_cap);

  auto* euler = app.add_subcommand("euler", "Euler form on representables or named complexes");
  euler->add_option("file", file)->required();
  euler->add_option("objects", objects);

  auto* equiv = app.add_subcommand("form-equiv", "Decide integral congruence of two Gram matrices");
  equiv->add_option("G1", file)->required();
  equiv->add_option("G2", file2)->required();
  equiv->add_option("--bound", bound);

  auto* scenario = app.add_subcommand("scenario", "Built-in scenarios");
  auto* p1 = scenario->add_subcommand("p1-two-points", "Gluing of P1 with a point along two torsion sheaves");
  scenario->require_subcommand(1);
  p1->add_option("--points1", points1)->required();
  p1->add_option("--points2", points2)->required();
  p1->add_option("--report", report)->check(CLI::IsMember({"json", "text"}));
  p1->add_option("--bound", bound);
  p1->add_option("--depth-cap", depth_cap);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kPass : kInput;
  }

  try {
    if (*validate) return cmd_validate(file, out);
    if (*hom) return cmd_hom(file, obj1, obj2, out);
    if (*glue) return cmd_glue(file, file2, file3, out_path, out);
    if (*sod) return cmd_check_sod(file, file2, depth_cap, out);
    if (*ks) return cmd_ks_partner(file, file2, depth_cap, out);
    if (*euler) return cmd_euler(file, objects, out);
    if (*equiv) return cmd_form_equiv(file, file2, bound, out);
    if (*p1) return cmd_scenario(points1, points2, report, bound, depth_cap, out);
  } catch (const ValidationError& e) {
    for (const auto& v : e.violations()) err << "error: " << v << '\n';
    return kInput;
  } catch (const DepthCapExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kDepth;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInput;
  }
  return kInput;
}

}  // namespace dgglue
