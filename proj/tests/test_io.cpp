#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "annuli/io.hpp"
#include "annuli/sampling.hpp"
#include "annuli/svg.hpp"
#include "support.hpp"

using namespace annuli;

namespace {
const ProblemSpec critical_spec{2.0, 17.0 / 8.0, 2};

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("annuli_test_" + std::to_string(::getpid()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};
}  // namespace

TEST_CASE("problem JSON round trip") {
    const auto s = normalize_problem(0.5, 2.0, 1.0, 17.0 / 8.0, 2);
    const json doc = problem_to_json(s);
    CHECK(doc["a"] == 0.5);
    CHECK(doc["b"] == 2.0);
    CHECK(doc["c"] == 1.0);
    CHECK(doc["d"] == 17.0 / 8.0);
    CHECK(doc["j"] == 2);
    const auto back = problem_from_json(doc);
    CHECK(back.r == s.r);
    CHECK(back.R == s.R);
    CHECK(back.j == s.j);
    CHECK(back.domain_scale == s.domain_scale);

    CHECK_THROWS_AS(problem_from_json(json{{"a", 1.0}}), IoError);
}

TEST_CASE("map CSV round trip preserves the energy to 1e-12") {
    TempDir tmp;
    const PolarGrid g(1.0, 2.0, 33, 64);
    const auto m = sample_g_circ(critical_spec, g);
    const std::string path = tmp.file("map.csv");
    write_map_csv(path, m);
    const auto back = read_map_csv(path, m.target_R, m.degree_target);
    REQUIRE(back.grid.n_radial == g.n_radial);
    REQUIRE(back.grid.n_angular == g.n_angular);
    const double e0 = dirichlet_energy(m);
    const double e1 = dirichlet_energy(back);
    CHECK(e1 == Catch::Approx(e0).epsilon(1e-12));
}

TEST_CASE("map binary round trip is exact") {
    TempDir tmp;
    const PolarGrid g(0.5, 2.0, 17, 32);
    const auto m = sample_g_diamond(ProblemSpec{4.0, 17.0 / 8.0, 2}, g);
    const std::string path = tmp.file("map.bin");
    write_map_binary(path, m);
    const auto back = read_map_binary(path);
    REQUIRE(back.grid.n_radial == m.grid.n_radial);
    REQUIRE(back.grid.n_angular == m.grid.n_angular);
    REQUIRE(back.grid.t_min == m.grid.t_min);
    REQUIRE(back.grid.t_max == m.grid.t_max);
    REQUIRE(back.target_R == m.target_R);
    REQUIRE(back.degree_target == m.degree_target);
    REQUIRE(back.values == m.values);  // bit-exact
}

TEST_CASE("io errors are reported") {
    TempDir tmp;
    CHECK_THROWS_AS(read_map_csv(tmp.file("missing.csv"), 2.0, 1), IoError);
    CHECK_THROWS_AS(read_map_binary(tmp.file("missing.bin")), IoError);
    {
        std::ofstream bad(tmp.file("bad.csv"));
        bad << "x,y\n1,2\n";
    }
    CHECK_THROWS_AS(read_map_csv(tmp.file("bad.csv"), 2.0, 1), IoError);
    {
        std::ofstream bad(tmp.file("short.bin"), std::ios::binary);
        bad << "1234";
    }
    CHECK_THROWS_AS(read_map_binary(tmp.file("short.bin")), IoError);
}

TEST_CASE("report JSON uses the documented keys") {
    ConvergenceReport conv;
    conv.iterations = 3;
    conv.energy = 50.0;
    conv.oracle_energy = 49.0;
    conv.gap_rel = 0.02;
    conv.active_fraction = 0.1;
    conv.trace = {51.0, 50.5, 50.0};
    const json cdoc = report_to_json(conv);
    for (const char* key : {"iterations", "energy", "oracle_energy", "gap_rel",
                            "active_fraction", "trace"}) {
        REQUIRE(cdoc.contains(key));
    }

    const PolarGrid g(1.0, 2.0, 33, 64);
    const auto m = sample_g_circ(critical_spec, g);
    const json rdoc = report_to_json(certify(m, critical_spec));
    for (const char* key : {"lagrangian_a", "lagrangian_b", "lagrangian_c", "lagrangian_d",
                            "certified_value", "energy", "slack", "max_pointwise_violation"}) {
        REQUIRE(rdoc.contains(key));
    }
    REQUIRE(rdoc["lagrangian_a"].size() == 2);
}

TEST_CASE("figure SVG renders rings and rays") {
    TempDir tmp;
    const PolarGrid g(0.5, 2.0, 33, 64);
    const auto m = sample_g_diamond(ProblemSpec{4.0, 17.0 / 8.0, 2}, g);
    const std::string path = tmp.file("fig.svg");
    write_figure_svg(path, m);
    std::ifstream in(path);
    REQUIRE(in.good());
    std::string all((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(all.find("<svg") != std::string::npos);
    CHECK(all.find("polyline") != std::string::npos);
}
