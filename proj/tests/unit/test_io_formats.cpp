#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "cmaccm/gaussian.hpp"
#include "cmaccm/io.hpp"
#include "cmaccm/rng.hpp"
#include "support/test_channels.hpp"

using namespace cmaccm;
using Catch::Approx;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("cmaccm_io_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("channel spec parsing") {
    SECTION("round trip through JSON") {
        json j;
        j["x1_size"] = 2;
        j["x2_size"] = 2;
        j["y1_size"] = 2;
        j["y2_size"] = 2;
        auto ch0 = testkit::committed_test_channel();
        json law = json::array();
        for (std::size_t x1 = 0; x1 < 2; ++x1) {
            json a = json::array();
            for (std::size_t x2 = 0; x2 < 2; ++x2) {
                json b = json::array();
                for (std::size_t y1 = 0; y1 < 2; ++y1) {
                    json c = json::array();
                    for (std::size_t y2 = 0; y2 < 2; ++y2) c.push_back(ch0.prob(x1, x2, y1, y2));
                    b.push_back(c);
                }
                a.push_back(b);
            }
            law.push_back(a);
        }
        j["p_y1y2_given_x1x2"] = law;
        DmChannel ch = channel_from_json(j);
        CHECK(ch.prob(0, 1, 1, 0) == Approx(ch0.prob(0, 1, 1, 0)));
    }

    SECTION("bad slice sum names the offending inputs") {
        json j;
        j["x1_size"] = 2;
        j["x2_size"] = 2;
        j["y1_size"] = 2;
        j["y2_size"] = 2;
        json law = json::array();
        for (int x1 = 0; x1 < 2; ++x1) {
            json a = json::array();
            for (int x2 = 0; x2 < 2; ++x2) {
                const double v = (x1 == 1 && x2 == 0) ? 0.245 : 0.25;  // slice sums to 0.98
                a.push_back(json::array({json::array({v, v}), json::array({v, v})}));
            }
            law.push_back(a);
        }
        j["p_y1y2_given_x1x2"] = law;
        CHECK_THROWS_WITH(channel_from_json(j),
                          Catch::Matchers::ContainsSubstring("(x1=1, x2=0)"));
    }

    SECTION("missing keys rejected") {
        CHECK_THROWS_AS(channel_from_json(json::object()), ValidationError);
    }
}

TEST_CASE("region file round trip") {
    TempDir tmp;
    GaussianParams gp{0.6, 0.6, 0.4, 0.5, 1.0, 1.0};
    RegionCloud cloud = sweep_gaussian(gp, {7, GaussianMode::CmacCmInner});
    cloud.meta.seed = 12345;

    SECTION("CSV") {
        const std::string path = tmp.file("region.csv");
        write_region_csv(path, cloud, {false});
        const RegionCloud back = read_region_file(path);
        REQUIRE(back.points.size() == cloud.points.size());
        for (std::size_t i = 0; i < back.points.size(); ++i) {
            CHECK(back.points[i].r0 == Approx(cloud.points[i].r0).margin(1e-9));
            CHECK(back.points[i].r1 == Approx(cloud.points[i].r1).margin(1e-9));
            CHECK(back.points[i].r2 == Approx(cloud.points[i].r2).margin(1e-9));
        }
        CHECK(back.meta.provenance == "thm5");
        CHECK(back.meta.closed == false);
        REQUIRE(back.meta.seed.has_value());
        CHECK(*back.meta.seed == 12345);
    }

    SECTION("JSON") {
        const std::string path = tmp.file("region.json");
        const RegionCloud closed = convex_closure(cloud);
        write_region_json(path, closed, {false});
        const RegionCloud back = read_region_file(path);
        REQUIRE(back.points.size() == closed.points.size());
        CHECK(back.meta.closed);
        for (std::size_t i = 0; i < back.points.size(); ++i)
            CHECK(back.points[i].r0 == Approx(closed.points[i].r0).margin(1e-12));
    }

    SECTION("writer output is deterministic without a timestamp") {
        CHECK(region_to_csv(cloud, {false}) == region_to_csv(cloud, {false}));
        CHECK(region_to_json(cloud, {false}).dump() == region_to_json(cloud, {false}).dump());
    }

    SECTION("declared point count is verified") {
        std::string text = region_to_csv(cloud, {false});
        text += "0.1,0.1,0.1\n";  // one extra row vs the declared count
        CHECK_THROWS_AS(region_from_csv_text(text, "mem"), ValidationError);
    }

    SECTION("header row is mandatory") {
        CHECK_THROWS_AS(region_from_csv_text("# cmaccm-region v0\nR0,R1\n0,0\n", "mem"),
                        ValidationError);
        CHECK_THROWS_AS(region_from_csv_text("R0,R1,R2\n0,0,0\n", "mem"), ValidationError);
    }

    SECTION("negative components rejected") {
        CHECK_THROWS_AS(
            region_from_csv_text("# cmaccm-region v0\nR0,R1,R2\n-0.1,0,0\n", "mem"),
            ValidationError);
    }
}

TEST_CASE("law and sim-config files") {
    SECTION("inner law from JSON") {
        json j;
        j["p_u"] = {0.5, 0.5};
        j["p_v1_given_u"] = {{0.5, 0.5}, {0.5, 0.5}};
        j["p_x1_given_v1"] = {{1.0, 0.0}, {0.0, 1.0}};
        j["p_x2_given_u"] = {{0.5, 0.5}, {0.5, 0.5}};
        const InnerAuxLaw law = inner_law_from_json(j);
        CHECK(law.u_size() == 2);
        CHECK(law.p_x1_given_v1.prob(1, 1) == Approx(1.0));
        json bad = j;
        bad.erase("p_u");
        CHECK_THROWS_AS(inner_law_from_json(bad), ValidationError);
    }

    SECTION("sim config with explicit and auto bin size") {
        json j;
        j["n"] = 4;
        j["m0"] = 1;
        j["m1"] = 2;
        j["m2"] = 1;
        j["L"] = 2;
        j["eps_typ"] = 1.5;
        j["trials"] = 100;
        j["seed"] = 9;
        auto scf = sim_config_from_json(j);
        CHECK(scf.cfg.bin_size == 2);
        CHECK_FALSE(scf.auto_bin);
        j["L"] = "auto";
        scf = sim_config_from_json(j);
        CHECK(scf.auto_bin);
        j["L"] = "automatic";
        CHECK_THROWS_AS(sim_config_from_json(j), ValidationError);
    }
}

TEST_CASE("sim log append") {
    TempDir tmp;
    const std::string path = tmp.file("log.csv");
    SimReport rep;
    rep.pe_estimate = 0.125;
    rep.pe_ci = 0.01;
    rep.equivocation_per_symbol = 0.5;
    rep.leakage = 0.0;
    rep.method = "exact";
    append_sim_log_csv(path, "abc123", rep);
    append_sim_log_csv(path, "def456", rep);
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "config_hash,pe,ci,equivocation,leakage,method");
    std::getline(in, line);
    CHECK(line.rfind("abc123,", 0) == 0);
    std::getline(in, line);
    CHECK(line.rfind("def456,", 0) == 0);
}

TEST_CASE("comparison and verdict serialization") {
    GaussianParams gp{0.6, 0.6, 0.4, 0.5, 1.0, 1.0};
    auto a = convex_closure(sweep_gaussian(gp, {5, GaussianMode::CmacCmInner}));
    auto b = convex_closure(sweep_gaussian(gp, {5, GaussianMode::CompoundCapacity}));
    const ComparisonReport rep = compare(a, b, 1e-6);
    const json j = comparison_report_to_json(rep, "a.csv", "b.csv");
    CHECK(j.at("verdict").is_string());
    CHECK(j.at("a").at("max").at("r1").get<double>() == Approx(rep.a_max[1]));
    CHECK(j.at("tol").get<double>() == Approx(1e-6));
}
