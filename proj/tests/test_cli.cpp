#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <string>
#include <sys/wait.h>

#include "dyadic/io.hpp"
#include "dyadic/stats.hpp"
#include "dyadic/transforms.hpp"

using namespace dyadic;
namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out, err;
};

const char* cli_path() {
    const char* p = std::getenv("DYADIC_CLI");
    REQUIRE_MESSAGE(p != nullptr, "DYADIC_CLI must point at the built binary");
    return p;
}

fs::path work_dir() {
    static fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "dyadic_cli_tests";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

RunResult run_cli(const std::string& args) {
    static int counter = 0;
    const fs::path out = work_dir() / ("stdout_" + std::to_string(counter) + ".txt");
    const fs::path err = work_dir() / ("stderr_" + std::to_string(counter) + ".txt");
    ++counter;
    const std::string cmd = std::string(cli_path()) + " " + args + " > " + out.string() + " 2> " +
                            err.string();
    const int rc = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = rc == -1 ? -1 : WEXITSTATUS(rc);
    r.out = read_text_file(out.string());
    r.err = read_text_file(err.string());
    return r;
}

std::string path_of(const std::string& name) { return (work_dir() / name).string(); }

}  // namespace

TEST_CASE("coeffs on a uniform series") {
    write_text_file(path_of("uniform.csv"), "1\n1\n1\n1\n");
    const auto r = run_cli("coeffs " + path_of("uniform.csv") + " --depth 2 -o " +
                           path_of("uniform.json"));
    REQUIRE(r.exit_code == 0);
    const auto tree = coefficient_tree_from_json(read_text_file(path_of("uniform.json")));
    CHECK(tree.depth == 2);
    CHECK(tree.total_mass == 4.0);
    for (const auto& [node, a] : tree.coeffs) CHECK(a == 0.0);
}

TEST_CASE("coeffs matches the worked example") {
    write_text_file(path_of("m.csv"), "3\n1\n2\n2\n");
    const auto r = run_cli("coeffs " + path_of("m.csv") + " -d 2 -o " + path_of("m.json"));
    REQUIRE(r.exit_code == 0);
    const auto tree = coefficient_tree_from_json(read_text_file(path_of("m.json")));
    CHECK(tree.coeff({0, 0}) == 0.0);
    CHECK(tree.coeff({1, 0}) == 0.5);
    CHECK(tree.coeff({1, 1}) == 0.0);
    CHECK(tree.total_mass == 8.0);
}

TEST_CASE("coeffs rejects malformed lines with a line number") {
    write_text_file(path_of("bad.csv"), "3\nxyz\n2\n");
    const auto r = run_cli("coeffs " + path_of("bad.csv") + " -d 2 -o " + path_of("bad.json"));
    CHECK(r.exit_code != 0);
    CHECK(r.err.find("dyadic: error:") != std::string::npos);
    CHECK(r.err.find(":2") != std::string::npos);
}

TEST_CASE("reconstruct round trips and validates depth") {
    write_text_file(path_of("rt.csv"), "3\n1\n2\n2\n");
    REQUIRE(run_cli("coeffs " + path_of("rt.csv") + " -d 2 -o " + path_of("rt.json")).exit_code == 0);
    const auto r = run_cli("reconstruct " + path_of("rt.json") + " -o " + path_of("rt_back.csv"));
    REQUIRE(r.exit_code == 0);
    const auto values = read_series_csv(read_text_file(path_of("rt_back.csv")));
    REQUIRE(values.size() == 4);
    CHECK(values[0] == 3.0);
    CHECK(values[1] == 1.0);
    CHECK(values[2] == 2.0);
    CHECK(values[3] == 2.0);

    // zero-coefficient tree, mass 1, depth 3: eight lines of 0.125
    CoefficientTree zero;
    zero.depth = 3;
    zero.total_mass = 1.0;
    write_text_file(path_of("zero.json"), coefficient_tree_to_json(zero));
    const auto rz = run_cli("reconstruct " + path_of("zero.json") + " -o " + path_of("zero.csv"));
    REQUIRE(rz.exit_code == 0);
    const auto zvals = read_series_csv(read_text_file(path_of("zero.csv")));
    REQUIRE(zvals.size() == 8);
    for (double v : zvals) CHECK(v == 0.125);

    CHECK(run_cli("reconstruct " + path_of("zero.json") + " -d 9 -o " + path_of("x.csv")).exit_code != 0);

    const auto rj = run_cli("reconstruct " + path_of("zero.json") + " --format json");
    REQUIRE(rj.exit_code == 0);
    CHECK(rj.out.find("[0.125, 0.125") != std::string::npos);
}

TEST_CASE("distance") {
    write_text_file(path_of("da.csv"), "3\n1\n2\n2\n");
    write_text_file(path_of("db.csv"), "1\n1\n1\n5\n");
    REQUIRE(run_cli("coeffs " + path_of("da.csv") + " -d 2 -o " + path_of("da.json")).exit_code == 0);
    REQUIRE(run_cli("coeffs " + path_of("db.csv") + " -d 2 -o " + path_of("db.json")).exit_code == 0);

    auto r = run_cli("distance " + path_of("da.json") + " " + path_of("da.json"));
    REQUIRE(r.exit_code == 0);
    CHECK(std::stod(r.out) == 0.0);

    r = run_cli("distance " + path_of("da.json") + " " + path_of("db.json"));
    REQUIRE(r.exit_code == 0);
    const auto ta = coefficient_tree_from_json(read_text_file(path_of("da.json")));
    const auto tb = coefficient_tree_from_json(read_text_file(path_of("db.json")));
    CHECK(std::stod(r.out) == norm_distance(ta, tb));

    // unequal total masses warn but still produce a distance
    write_text_file(path_of("dc.csv"), "6\n2\n4\n4\n");  // same shape as da, double the mass
    REQUIRE(run_cli("coeffs " + path_of("dc.csv") + " -d 2 -o " + path_of("dc.json")).exit_code == 0);
    r = run_cli("distance " + path_of("da.json") + " " + path_of("dc.json"));
    REQUIRE(r.exit_code == 0);
    CHECK(std::stod(r.out) == 0.0);  // identical coefficients
    CHECK(r.err.find("warning") != std::string::npos);

    // depth mismatch errors out
    CoefficientTree deep;
    deep.depth = 3;
    deep.total_mass = 8.0;
    write_text_file(path_of("deep.json"), coefficient_tree_to_json(deep));
    r = run_cli("distance " + path_of("da.json") + " " + path_of("deep.json"));
    CHECK(r.exit_code != 0);
    CHECK(r.err.find("dyadic: error:") != std::string::npos);
}

TEST_CASE("infer averages trees") {
    write_text_file(path_of("ia.csv"), "4\n0\n0\n0\n");
    write_text_file(path_of("ib.csv"), "0\n0\n0\n4\n");
    REQUIRE(run_cli("coeffs " + path_of("ia.csv") + " -d 2 -o " + path_of("ia.json")).exit_code == 0);
    REQUIRE(run_cli("coeffs " + path_of("ib.csv") + " -d 2 -o " + path_of("ib.json")).exit_code == 0);

    auto r = run_cli("infer " + path_of("ia.json") + " -o " + path_of("ione.json"));
    REQUIRE(r.exit_code == 0);
    const auto one = coefficient_tree_from_json(read_text_file(path_of("ione.json")));
    const auto ta = coefficient_tree_from_json(read_text_file(path_of("ia.json")));
    CHECK(one.coeffs == ta.coeffs);
    CHECK(one.total_mass == ta.total_mass);

    r = run_cli("infer " + path_of("ia.json") + " " + path_of("ib.json") + " -o " +
                path_of("iavg.json"));
    REQUIRE(r.exit_code == 0);
    const auto avg = coefficient_tree_from_json(read_text_file(path_of("iavg.json")));
    CHECK(avg.coeff({0, 0}) == 0.0);
    CHECK(avg.coeff({1, 0}) == 0.5);
    CHECK(avg.coeff({1, 1}) == -0.5);
    CHECK(avg.total_mass == 4.0);

    CHECK(run_cli("infer").exit_code != 0);
}

TEST_CASE("noise pipeline") {
    write_text_file(path_of("n.csv"), "3\n1\n2\n2\n");
    REQUIRE(run_cli("coeffs " + path_of("n.csv") + " -d 2 -o " + path_of("n.json")).exit_code == 0);

    SUBCASE("sigma 0 reproduces the input") {
        write_text_file(path_of("p0.json"), "{\"mode\": \"per-scale\", \"depth\": 2, \"sigmas\": 0}\n");
        const auto r = run_cli("noise " + path_of("n.json") + " --params " + path_of("p0.json") +
                               " --samples 10 --seed 4 -o " + path_of("noise0"));
        REQUIRE(r.exit_code == 0);
        const auto in = coefficient_tree_from_json(read_text_file(path_of("n.json")));
        const auto out = coefficient_tree_from_json(read_text_file(path_of("noise0/noisy_0.json")));
        CHECK(out.total_mass == in.total_mass);
        for (const auto& [node, a] : in.coeffs)
            CHECK(std::abs(out.coeff(node) - a) < 1e-12);
    }

    SUBCASE("fixed seed reruns byte-identical; stats rows = node count") {
        write_text_file(path_of("p.json"), "{\"mode\": \"per-scale\", \"depth\": 2, \"sigmas\": 0.4}\n");
        const std::string args = "noise " + path_of("n.json") + " --params " + path_of("p.json") +
                                 " --samples 50 --seed 11 -o ";
        REQUIRE(run_cli(args + path_of("noiseA")).exit_code == 0);
        REQUIRE(run_cli(args + path_of("noiseB")).exit_code == 0);
        CHECK(read_text_file(path_of("noiseA/stats.csv")) ==
              read_text_file(path_of("noiseB/stats.csv")));
        CHECK(read_text_file(path_of("noiseA/noisy_0.json")) ==
              read_text_file(path_of("noiseB/noisy_0.json")));

        const auto in = coefficient_tree_from_json(read_text_file(path_of("n.json")));
        const auto stats = read_text_file(path_of("noiseA/stats.csv"));
        std::size_t rows = 0;
        for (std::size_t pos = 0; (pos = stats.find('\n', pos)) != std::string::npos; ++rows) ++pos;
        CHECK(rows == in.coeffs.size() + 2);  // provenance + header + one row per node
    }

    SUBCASE("perturbation warning for boundary coefficients") {
        write_text_file(path_of("spike.csv"), "4\n0\n0\n0\n");
        REQUIRE(run_cli("coeffs " + path_of("spike.csv") + " -d 2 -o " + path_of("spike.json"))
                    .exit_code == 0);
        write_text_file(path_of("ps.json"), "{\"mode\": \"per-scale\", \"depth\": 2, \"sigmas\": 0.3}\n");
        const auto r = run_cli("noise " + path_of("spike.json") + " --params " + path_of("ps.json") +
                               " --samples 5 --seed 2 -o " + path_of("noiseP"));
        REQUIRE(r.exit_code == 0);
        CHECK(r.err.find("perturbation") != std::string::npos);
    }

    SUBCASE("kahane warning banner") {
        write_text_file(path_of("pl.json"),
                        "{\"mode\": \"per-scale\", \"depth\": 2, \"sigmas\": 1.2}\n");
        const auto r = run_cli("noise " + path_of("n.json") + " --params " + path_of("pl.json") +
                               " --samples 5 --seed 1 -o " + path_of("noiseL"));
        REQUIRE(r.exit_code == 0);
        CHECK(r.err.find("warning") != std::string::npos);
        CHECK(r.err.find("2 ln 2") != std::string::npos);
    }
}

TEST_CASE("weld and wheel SVGs") {
    write_text_file(path_of("w.csv"), "3\n1\n2\n2\n5\n1\n2\n1\n");
    REQUIRE(run_cli("coeffs " + path_of("w.csv") + " -d 3 -o " + path_of("w.json")).exit_code == 0);

    auto r = run_cli("weld " + path_of("w.json") + " -o " + path_of("w.svg") + " --knots-csv " +
                     path_of("w_knots.csv"));
    REQUIRE(r.exit_code == 0);
    const auto svg1 = read_text_file(path_of("w.svg"));
    CHECK(svg1.find("<svg") != std::string::npos);
    CHECK(svg1.find("polyline") != std::string::npos);
    REQUIRE(run_cli("weld " + path_of("w.json") + " -o " + path_of("w2.svg") + " --knots-csv " +
                    path_of("w_knots2.csv")).exit_code == 0);
    CHECK(svg1 == read_text_file(path_of("w2.svg")));
    CHECK(read_text_file(path_of("w_knots.csv")) == read_text_file(path_of("w_knots2.csv")));

    r = run_cli("wheel " + path_of("w.json") + " -o " + path_of("wh.svg") + " --colormap jet");
    REQUIRE(r.exit_code == 0);
    const auto wheel_svg = read_text_file(path_of("wh.svg"));
    CHECK(wheel_svg.find("class=\"sector\"") != std::string::npos);
    REQUIRE(run_cli("wheel " + path_of("w.json") + " -o " + path_of("wh2.svg") + " --colormap jet")
                .exit_code == 0);
    CHECK(wheel_svg == read_text_file(path_of("wh2.svg")));

    CHECK(run_cli("weld " + path_of("missing.json") + " -o " + path_of("x.svg")).exit_code != 0);
    CHECK(run_cli("wheel " + path_of("missing.json") + " -o " + path_of("x.svg")).exit_code != 0);
}

TEST_CASE("weld from labeled points") {
    std::string pts;
    for (int i = 0; i < 32; ++i) {
        const double x = (i + 0.5) / 64.0;  // left half: ground
        pts += std::to_string(x) + ",0.2,ground\n";
    }
    for (int i = 0; i < 32; ++i) {
        const double x = 0.5 + (i + 0.5) / 64.0;  // right half: veg
        pts += std::to_string(x) + ",0.7,veg\n";
    }
    write_text_file(path_of("cloud.csv"), pts);
    const auto r = run_cli("weld --points " + path_of("cloud.csv") +
                           " --label-column 3 -d 4 --bounds 0,1,0,1 -o " + path_of("cloud.svg"));
    REQUIRE(r.exit_code == 0);
    const auto svg = read_text_file(path_of("cloud.svg"));
    CHECK(svg.find("#d62728") != std::string::npos);  // onlyA knots present
    CHECK(svg.find("#2ca02c") != std::string::npos);  // onlyB knots present
}

TEST_CASE("dirac command") {
    auto r = run_cli("dirac -x 0 -d 3 -o " + path_of("d0.json"));
    REQUIRE(r.exit_code == 0);
    const auto t = coefficient_tree_from_json(read_text_file(path_of("d0.json")));
    CHECK(t.coeff({0, 0}) == 1.0);
    CHECK(t.coeff({1, 0}) == 1.0);
    CHECK(t.coeff({2, 0}) == 1.0);
    CHECK(t.coeffs.size() == 3);

    r = run_cli("dirac -x 0.5 -d 2 -o " + path_of("dh.json"));
    REQUIRE(r.exit_code == 0);
    const auto th = coefficient_tree_from_json(read_text_file(path_of("dh.json")));
    CHECK(th.coeff({0, 0}) == -1.0);
    CHECK(th.coeff({1, 1}) == 1.0);

    r = run_cli("dirac -x 1.5 -d 2 -o " + path_of("dbad.json"));
    CHECK(r.exit_code != 0);
    CHECK(r.err.find("dyadic: error:") != std::string::npos);
}

TEST_CASE("featvec exports weighted vectors") {
    write_text_file(path_of("f.csv"), "3\n1\n2\n2\n");
    REQUIRE(run_cli("coeffs " + path_of("f.csv") + " -d 2 -o " + path_of("f.json")).exit_code == 0);
    const auto r = run_cli("featvec " + path_of("f.json") + " --max-scale 1 -o " + path_of("f_vec.csv"));
    REQUIRE(r.exit_code == 0);
    const auto csv = read_text_file(path_of("f_vec.csv"));
    CHECK(csv.find("lexicographic") != std::string::npos);
    // a(1,0) = 0.5 weighted by 2^-1/2
    const auto tree = coefficient_tree_from_json(read_text_file(path_of("f.json")));
    const auto v = weighted_feature_vector(tree, 1);
    CHECK(csv.find(format_double(v[1])) != std::string::npos);
}

TEST_CASE("config file provides defaults, explicit flags win") {
    write_text_file(path_of("cfg_series.csv"), "3\n1\n2\n2\n");
    write_text_file(path_of("cli.ini"), "[coeffs]\ndepth=2\n");
    auto r = run_cli("--config " + path_of("cli.ini") + " coeffs " + path_of("cfg_series.csv") +
                     " -o " + path_of("cfg_a.json"));
    REQUIRE(r.exit_code == 0);
    CHECK(coefficient_tree_from_json(read_text_file(path_of("cfg_a.json"))).depth == 2);

    r = run_cli("--config " + path_of("cli.ini") + " coeffs " + path_of("cfg_series.csv") +
                " -d 1 -o " + path_of("cfg_b.json"));
    REQUIRE(r.exit_code == 0);
    CHECK(coefficient_tree_from_json(read_text_file(path_of("cfg_b.json"))).depth == 1);
}

TEST_CASE("feature-system config drives coeffs") {
    write_text_file(path_of("fp.csv"), "0.2,0.9\n0.8,0.9\n0.2,0.1\n0.8,0.1\n");
    write_text_file(path_of("fsys.json"), R"({"predicates": [
        {"name": "left", "column": 1, "op": "lt", "value": 0.5},
        {"name": "top", "column": 2, "op": "gt", "value": 0.5}
    ]})");
    const auto r = run_cli("coeffs " + path_of("fp.csv") + " --features " + path_of("fsys.json") +
                           " -o " + path_of("fsys_tree.json"));
    REQUIRE(r.exit_code == 0);
    const auto t = coefficient_tree_from_json(read_text_file(path_of("fsys_tree.json")));
    CHECK(t.depth == 2);
    CHECK(t.total_mass == 4.0);
    for (const auto& [node, a] : t.coeffs) CHECK(a == 0.0);
}
