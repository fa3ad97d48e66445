#include "prismal/fixtures.hpp"
#include "prismal/io.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>
#include <sys/wait.h>

using namespace prismal;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = PRISMAL_FIXTURE_DIR;

int run_cli(const std::string& args) {
    std::string cmd = std::string(PRISMAL_CLI) + " " + args + " > /dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string fixture_args(const std::string& name) {
    return "--complex " + (kFixtures / (name + ".complex.json")).string() + " --morphism " +
           (kFixtures / (name + ".morphism.json")).string();
}

fs::path scratch(const std::string& name) { return fs::temp_directory_path() / ("prismal_test_" + name); }

}  // namespace

TEST_CASE("complex_and_morphism_round_trip") {
    for (const auto& [name, f] : builtin_fixtures()) {
        CAPTURE(name);
        SimplicialComplex k = complex_from_json(to_json(f.source()));
        CHECK(k.maximal() == f.source().maximal());
        SimplicialMorphism g = morphism_from_json(k, to_json(f));
        CHECK(g.vertex_map() == f.vertex_map());
        CHECK(g.target().maximal() == f.target().maximal());
    }
}

TEST_CASE("morphism_without_target_uses_the_image") {
    auto f = figure1_morphism();
    json j = to_json(f);
    j.erase("target");
    SimplicialMorphism g = morphism_from_json(f.source(), j);
    CHECK(g.target().maximal() == f.target().maximal());
}

TEST_CASE("form_round_trip") {
    std::mt19937_64 rng(1);
    std::vector<Var> vars{Var::lambda(0), Var::lambda(1), Var::mu(2, 5), Var::t(3)};
    Form a = Form::basis({vars[0], vars[2]}, random_poly(vars, 3, rng)) + Form::scalar(random_poly(vars, 2, rng)) +
             Form::dvar(vars[3]) * Poly(Rational(-7, 3));
    CoordSystem cs{{{vars[0], vars[1]}}};
    FormFile back = form_from_json(json::parse(to_json(a, cs).dump()));
    CHECK(back.form == a);
    CHECK(back.context.groups == cs.groups);
}

TEST_CASE("malformed_json_is_a_validation_error") {
    CHECK_THROWS_AS(complex_from_json(json{{"vertices", {0, 1}}}), ValidationError);
    CHECK_THROWS_AS(complex_from_json(json{{"vertices", {0, 1}}, {"maximal_simplices", {{0, 7}}}}), ValidationError);
    CHECK_THROWS_AS(poly_from_json(json::parse(R"([{"c":"1/0x"}])")), ValidationError);
    CHECK_THROWS_AS(form_from_json(json::parse(R"({"terms":[{"dvars":["l:1","l:1"],"poly":[{"c":"1"}]}]})")),
                    ValidationError);
    CHECK_THROWS_AS(form_from_json(json::parse(R"({"terms":[{"dvars":["z:1"],"poly":[]}]})")), ValidationError);
}

TEST_CASE("sheaf_dump_round_trip_and_golden") {
    auto f = figure1_morphism();
    json dump{{"S_f", to_json(build_Sf(f))}, {"P_f", to_json(build_Pf(f))}};
    CHECK(dump == read_json_file(kFixtures / "figure1.sheaf.golden.json"));
    PrismalSheaf P = sheaf_from_json(dump["P_f"]);
    CHECK(to_json(P) == dump["P_f"]);
    CHECK(check_Pf_characterization(P).ok);
}

TEST_CASE("cli_exit_codes") {
    CHECK(run_cli("--version") == 0);
    CHECK(run_cli("check --suite bord") == 0);
    CHECK(run_cli("check --suite iminve --max-dim 3") == 0);
    CHECK(run_cli("check --suite faceface-literal") == 1);
    CHECK(run_cli("check --suite nonsense") == 2);
    CHECK(run_cli("check --suite bord --complex " + (kFixtures / "corrupted.complex.json").string() + " --morphism " +
                  (kFixtures / "figure1.morphism.json").string()) == 2);
    CHECK(run_cli("sheaf --fixture identity") == 0);
    CHECK(run_cli("sheaf --load-sheaf " + (kFixtures / "figure1.broken-pf.sheaf.json").string()) == 1);
}

TEST_CASE("cli_primitive") {
    const fs::path out = scratch("figure1.json");
    CHECK(run_cli("primitive " + fixture_args("figure1") + " --form " + (kFixtures / "figure1.form.json").string() +
                  " --out " + out.string() + " --check-horizontal") == 0);
    json doc = read_json_file(out);
    CHECK(doc["report"]["residuals_zero"] == true);
    CHECK(doc["report"]["horizontal_ok"] == true);
    CHECK(doc["prisms"].size() == doc["H_S"].size());

    const fs::path out2 = scratch("base2d.json");
    CHECK(run_cli("primitive " + fixture_args("base2d") + " --form " + (kFixtures / "base2d.form.json").string() +
                  " --out " + out2.string() + " --check-horizontal --oracle-eps 1e-4") == 0);
    CHECK(read_json_file(out2)["report"].contains("oracle"));

    CHECK(run_cli("primitive " + fixture_args("figure3") + " --form " +
                  (kFixtures / "figure3.nonexact.form.json").string()) == 1);
    // λ of a vertex outside the complex.
    CHECK(run_cli("primitive " + fixture_args("figure3") + " --form " + (kFixtures / "figure1.form.json").string()) == 2);
    fs::remove(out);
    fs::remove(out2);
}
