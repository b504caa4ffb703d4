#include <filesystem>
#include <fstream>
#include <set>
#include <string>

#include "doctest.h"
#include "nilsphere/experiments.hpp"

using namespace nilsphere;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path p;
    TempDir() {
        p = fs::temp_directory_path() / fs::path("nilsphere-test-" +
                                                 std::to_string(::getpid()));
        fs::create_directories(p);
    }
    ~TempDir() { fs::remove_all(p); }
};

}  // namespace

TEST_CASE("experiment catalog is stable, sorted, and documented") {
    auto infos = list_experiments();
    REQUIRE(infos.size() >= 10);
    std::set<std::string> names;
    for (std::size_t i = 0; i < infos.size(); ++i) {
        CHECK(!infos[i].name.empty());
        CHECK(!infos[i].summary.empty());
        names.insert(infos[i].name);
        if (i > 0) CHECK(infos[i - 1].name < infos[i].name);
    }
    CHECK(names.count("verify-group"));
    CHECK(names.count("decay-slopes"));
    CHECK(names.count("classify"));
}

TEST_CASE("named group builders cover the catalog and reject unknowns") {
    CHECK(make_named_group("heisenberg1").d() == 2);
    CHECK(make_named_group("heisenberg2").d() == 4);
    CHECK(make_named_group("heisenberg1-doubled").is_metivier());
    CHECK(make_named_group("appendix").m() == 2);
    CHECK(make_named_group("quaternionic").m() == 3);
    CHECK(!make_named_group("abelian").is_metivier());
    CHECK_THROWS(make_named_group("no-such-group"));
}

TEST_CASE("config parsing resolves relative output paths and rejects junk") {
    ExperimentConfig cfg = ExperimentConfig::from_json_text(
        R"({"experiment":"verify-group","group":"heisenberg2",
            "seed":42,"parameters":{"trials":17},"output_dir":"out"})",
        "/some/base");
    CHECK(cfg.experiment == "verify-group");
    CHECK(cfg.group == "heisenberg2");
    CHECK(cfg.seed == 42);
    CHECK(cfg.param("trials", 0.0) == 17.0);
    CHECK(cfg.param("absent", 3.5) == 3.5);
    CHECK(cfg.output_dir == "/some/base/out");

    CHECK_THROWS(ExperimentConfig::from_json_text("{not json", "."));
    CHECK_THROWS(ExperimentConfig::from_json_text(R"({"seed":1})", "."));  // no experiment
}

TEST_CASE("unknown experiment or group surfaces as a config error, not a crash") {
    TempDir tmp;
    ExperimentConfig cfg;
    cfg.experiment = "definitely-not-an-experiment";
    cfg.output_dir = tmp.p.string();
    RunReport rep = run_experiment(cfg);
    CHECK(!rep.error.empty());
    CHECK(!rep.pass);

    cfg.experiment = "verify-group";
    cfg.group = "definitely-not-a-group";
    rep = run_experiment(cfg);
    CHECK(!rep.error.empty());
}

TEST_CASE("check helpers record windows and outcomes") {
    RunReport rep;
    rep.check_le("a", 1.0, 2.0);
    rep.check_ge("b", 1.0, 2.0);
    rep.check_in("c", 0.5, 0.0, 1.0);
    CHECK(rep.checks.size() == 3);
    CHECK(rep.checks[0].pass);
    CHECK(!rep.checks[1].pass);
    CHECK(rep.checks[2].pass);
    CHECK(rep.checks[0].has_upper);
    CHECK(!rep.checks[0].has_lower);
    std::string js = rep.to_json();
    CHECK(js.find("\"name\"") != std::string::npos);
}

TEST_CASE("a small run writes its report and tables to the output directory") {
    TempDir tmp;
    ExperimentConfig cfg;
    cfg.experiment = "verify-group";
    cfg.group = "heisenberg1";
    cfg.parameters["trials"] = 50;
    cfg.output_dir = tmp.p.string();
    cfg.threads = 1;
    RunReport rep = run_experiment(cfg);
    CHECK(rep.error.empty());
    CHECK(rep.pass);
    CHECK(rep.experiment == "verify-group");
    CHECK(!rep.checks.empty());
    CHECK(rep.elapsed_seconds >= 0.0);

    bool found_json = false;
    for (const auto& e : fs::directory_iterator(tmp.p)) {
        if (e.path().extension() == ".json") found_json = true;
    }
    CHECK(found_json);
    for (const auto& csv : rep.csv_files) CHECK(fs::exists(csv));
}
