#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "dgglue/io.hpp"
#include "support.hpp"

using namespace dgtest;
namespace fs = std::filesystem;

namespace {

const char* kKronecker = R"({
  "kind": "category", "name": "K", "objects": ["v0", "v1"],
  "homs": [
    {"source": "v0", "target": "v0", "basis": [{"degree": 0, "name": "id0"}], "unit": 0},
    {"source": "v1", "target": "v1", "basis": [{"degree": 0, "name": "id1"}], "unit": 0},
    {"source": "v0", "target": "v1", "basis": [{"degree": 0, "name": "x"}, {"degree": 0, "name": "y"}]}
  ]
})";

// d(e0) = e1, d(e1) = e2 in Hom(x, y): d^2 != 0
const char* kBadDifferential = R"({
  "kind": "category", "name": "bad", "objects": ["x", "y"],
  "homs": [
    {"source": "x", "target": "x", "basis": [{"degree": 0}], "unit": 0},
    {"source": "y", "target": "y", "basis": [{"degree": 0}], "unit": 0},
    {"source": "x", "target": "y", "basis": [{"degree": 0}, {"degree": 1}, {"degree": 2}],
     "differential": [["0", "0", "0"], ["1", "0", "0"], ["0", "1", "0"]]}
  ]
})";

struct Run {
  int code;
  std::string out;
  std::string err;
  Json json() const { return Json::parse(out); }
};

Run cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() {
    Rng rng(static_cast<std::uint64_t>(std::hash<std::string>{}(fs::current_path().string())));
    path_ = fs::temp_directory_path() / ("dgglue-test-" + std::to_string(rng.uniform(0, 1L << 40)));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string write(const std::string& name, const std::string& content) const {
    const fs::path p = path_ / name;
    std::ofstream(p) << content;
    return p.string();
  }
  std::string path(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

// Files for the P1 gluing with the given point lists.
struct P1Files {
  std::string a, b, s, glued, phi;
};

P1Files write_p1(const TempDir& dir, const std::string& tag, const ScenarioConfig& cfg) {
  const P1Gluing g = build_p1_gluing(cfg);
  const GluedCategory c = upper_triangular(g.a, g.b, g.s);
  P1Files f;
  f.a = dir.write(tag + "-a.json", category_json(*g.a).dump());
  f.b = dir.write(tag + "-b.json", category_json(*g.b).dump());
  f.s = dir.write(tag + "-s.json", bimodule_json(g.s, "S").dump());
  f.glued = dir.write(tag + "-glued.json", glued_json(c).dump());
  f.phi = dir.write(tag + "-phi.json", bimodule_morphism_json(g.phi).dump());
  return f;
}

template <class F>
bool rejects(F&& f) {
  try {
    f();
  } catch (const ValidationError&) {
    return true;
  }
  return false;
}

}  // namespace

TEST_CASE("JSON round trips") {
  Rng rng(81);
  for (int it = 0; it < 40; ++it) {
    const GluingInstance g = random_gluing(rng);
    for (const CategoryPtr& c : {g.a, g.b}) {
      const CategoryPtr back = category_from_json(Json::parse(category_json(*c).dump()));
      CHECK(back->content_hash() == c->content_hash());
      const TwistedComplex z = random_twcx(rng, c, 3);
      CHECK(twcx_from_json(Json::parse(twcx_json(z).dump()), c) == z);
    }
    const Bimodule s = bimodule_from_json(Json::parse(bimodule_json(g.s).dump()), g.b, g.a);
    for (std::size_t j = 0; j < g.b->size(); ++j) CHECK(s.object(j) == g.s.object(j));
    for (std::size_t x = 0; x < g.b->size(); ++x)
      for (std::size_t y = 0; y < g.b->size(); ++y)
        for (std::size_t b = 0; b < g.b->dim(x, y); ++b) CHECK(s.map(x, y, b) == g.s.map(x, y, b));

    Library lib;
    lib.categories["a"] = g.a;
    lib.categories["b"] = g.b;
    const BimoduleMorphism phi = bimodule_morphism_from_json(Json::parse(bimodule_morphism_json(g.phi).dump()), lib);
    for (std::size_t j = 0; j < g.b->size(); ++j) CHECK(phi.components[j] == g.phi.components[j]);

    const GluedCategory c = upper_triangular(g.a, g.b, g.s);
    const GluedCategory back = glued_from_json(Json::parse(glued_json(c).dump()));
    CHECK(back.category->content_hash() == c.category->content_hash());
  }
  GramForm g;
  g.matrix = IntMatrix{{-3, 1}, {-1, 0}};
  g.labels = {"E0", "E1"};
  CHECK(int_matrix_from_json(gram_json(g)) == g.matrix);
  CHECK(int_matrix_from_json(Json::parse("[[1,2],[0,1]]")) == IntMatrix{{1, 2}, {0, 1}});
  CHECK(scalar_from_json(scalar_json(Scalar(-7, 3))) == Scalar(-7, 3));
}

TEST_CASE("hand-written records parse to the library objects") {
  const CategoryPtr k = category_from_json(Json::parse(kKronecker));
  CHECK(k->dim(0, 1) == 2);
  CHECK(euler_matrix({representable(k, 0), representable(k, 1)}).matrix == IntMatrix{{1, 2}, {0, 1}});
  const Json p = Json::parse(R"({"kind": "twisted_complex", "category": "K", "generators": [["v0", 1], ["v1", 0]],
                                 "delta": [[1, 0, [[0, "2"], [1, "-1"]]]]})");
  CHECK(twcx_from_json(p, k).size() == 2);
  CHECK(hom_cohomology(twcx_from_json(p, k), twcx_from_json(p, k)) == DegreeDims{{0, 1}, {1, 1}});
}

TEST_CASE("malformed input is a ValidationError") {
  CHECK(rejects([] { category_from_json(Json::parse(kBadDifferential)); }));
  CHECK(rejects([] { category_from_json(Json::parse(R"({"kind": "category", "name": "x"})")); }));
  CHECK(rejects([] { category_from_json(Json::parse(R"({"objects": ["x"], "homs": [{"source": "x", "target": "z", "basis": []}]})")); }));
  CHECK(rejects([] { scalar_from_json(Json("1/0")); }));
  CHECK(rejects([] { scalar_from_json(Json::array()); }));
  const CategoryPtr k = category_from_json(Json::parse(kKronecker));
  CHECK(rejects([&] { twcx_from_json(Json::parse(R"({"generators": [["v2", 0]]})"), k); }));
  // a 2-cycle of delta entries between v0 generators is not triangular
  CHECK(rejects([&] {
    twcx_from_json(Json::parse(R"({"generators": [["v0", 0], ["v0", 1]], "delta": [[1, 0, [[0, "1"]]], [0, 1, [[0, "1"]]]]})"), k);
  }));
  CHECK(rejects([] { load_library(Json::parse(R"({"kind": "mystery"})")); }));
  CHECK(rejects([] { read_json_file("/nonexistent/file.json"); }));
}

TEST_CASE("report JSON has stable, sorted keys") {
  const ScenarioReport r = run_scenario({{{0, 1}}, {{1, 0}}, {}, 64});
  const std::string once = scenario_json(r).dump(), twice = scenario_json(run_scenario({{{0, 1}}, {{1, 0}}, {}, 64})).dump();
  CHECK(once == twice);
  const Json j = Json::parse(once);
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  CHECK(std::is_sorted(keys.begin(), keys.end()));
}

TEST_CASE("CLI commands and exit codes") {
  const TempDir dir;
  const std::string kron = dir.write("kron.json", kKronecker);
  const std::string bad = dir.write("bad.json", kBadDifferential);
  const std::string garbage = dir.write("garbage.json", "{ not json");

  SUBCASE("validate") {
    const Run ok = cli({"validate", kron});
    CHECK(ok.code == 0);
    CHECK(ok.json()["valid"] == true);
    CHECK(ok.json()["categories"] == Json::array({"K"}));
    const Run r = cli({"validate", bad});
    CHECK(r.code == 2);
    CHECK(r.err.find("Hom(x,y)") != std::string::npos);
    CHECK(cli({"validate", garbage}).code == 2);
    CHECK(cli({"validate", dir.path("missing.json")}).code == 2);
    CHECK(cli({"no-such-command"}).code == 2);
  }

  SUBCASE("hom and euler") {
    const Run h = cli({"hom", kron, "v0", "v1"});
    CHECK(h.code == 0);
    CHECK(h.json()["cohomology"] == Json{{"0", 2}});
    CHECK(h.json()["euler"] == 2);
    CHECK(cli({"hom", kron, "K:v1", "K:v0"}).json()["euler"] == 0);
    CHECK(cli({"hom", kron, "v0", "v7"}).code == 2);
    const Run e = cli({"euler", kron});
    CHECK(e.code == 0);
    CHECK(e.json()["gram"]["matrix"] == Json::parse("[[1,2],[0,1]]"));
    CHECK(e.json()["exceptionality"]["pass"] == true);
  }

  SUBCASE("glue, check-sod and ks-partner") {
    const P1Files f = write_p1(dir, "p1", {{{0, 1}}, {{1, 0}}, {}, 64});
    const std::string out = dir.path("glued-out.json");
    const Run g = cli({"glue", f.a, f.b, f.s, "-o", out});
    CHECK(g.code == 0);
    REQUIRE(fs::exists(out));
    CHECK(g.json()["objects"].size() == 3);

    const Run sod = cli({"check-sod", out, f.phi});
    CHECK(sod.code == 0);
    CHECK(sod.json()["pass"] == true);
    CHECK(cli({"check-sod", out, f.phi, "--depth-cap", "0"}).code == 3);

    const Run ks = cli({"ks-partner", f.glued, f.phi});
    CHECK(ks.code == 0);
    const IntMatrix gram = int_matrix_from_json(ks.json()["basis_gram"]);
    CHECK(form_equivalence(gram, IntMatrix{{0, 1}, {-1, 0}}).kind == EquivalenceVerdict::Kind::Equivalent);
    CHECK(cli({"ks-partner", f.glued, f.phi, "--depth-cap", "0"}).code == 3);

    const P1Files o = write_p1(dir, "overlap", {{{1, 1}}, {{3, 3}}, {}, 64});
    const Run fail = cli({"check-sod", o.glued, o.phi});
    CHECK(fail.code == 1);
    CHECK(fail.json()["condition"]["pass"] == false);
    CHECK(cli({"ks-partner", o.glued, o.phi}).code == 1);
    // phi over the wrong gluing
    CHECK(cli({"check-sod", f.glued, dir.write("phi-k.json", kKronecker)}).code == 2);
  }

  SUBCASE("form-equiv") {
    const Run eq = cli({"form-equiv", "[[1,2],[0,1]]", "[[1,1],[-1,0]]"});
    CHECK(eq.code == 0);
    CHECK(eq.json()["verdict"] == "Equivalent");
    const Run ne = cli({"form-equiv", "[[0,1],[-1,0]]", "[[1,1],[-1,0]]"});
    CHECK(ne.code == 1);
    CHECK(ne.json()["verdict"] == "Inequivalent");
    const std::string gf = dir.write("g.json", R"({"kind": "gram", "matrix": [[-3, 1], [-1, 0]]})");
    CHECK(cli({"form-equiv", gf, "[[-3,1],[-1,0]]"}).code == 0);
    CHECK(cli({"form-equiv", "[[1]]", "[[1,0],[0,1]]"}).code == 2);
    CHECK(cli({"form-equiv", "[[1,0],[0,1]]", "[[1,0],[0,1]]", "--bound", "0"}).code == 2);
  }

  SUBCASE("scenario") {
    const Run j = cli({"scenario", "p1-two-points", "--points1", "1:0,1:1", "--points2", "0:1,1:2", "--report", "json"});
    CHECK(j.code == 0);
    CHECK(j.json()["t"] == -3);
    CHECK(j.json()["pass"] == true);
    const Run t = cli({"scenario", "p1-two-points", "--points1", "0:1", "--points2", "1:0"});
    CHECK(t.code == 0);
    CHECK(t.out.find("PASS") != std::string::npos);
    const Run o = cli({"scenario", "p1-two-points", "--points1", "1:1", "--points2", "2:2", "--report", "json"});
    CHECK(o.code == 1);
    CHECK(o.json()["failed_stage"] == "check_condition");
    CHECK(cli({"scenario", "p1-two-points", "--points1", "0:0", "--points2", "1:0"}).code == 2);
    CHECK(cli({"scenario", "p1-two-points", "--points1", "0:1", "--points2", "1:0", "--report", "xml"}).code == 2);
    CHECK(cli({"scenario", "p1-two-points", "--points1", "0:1", "--points2", "1:0", "--depth-cap", "0"}).code == 3);
  }
}
