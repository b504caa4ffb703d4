#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nilsphere/experiments.hpp"

namespace {

struct CliOptions {
    std::string config;
    std::string out;
    std::string group;
    std::string surface;
    std::uint64_t seed = 0;
    int threads = 0;
    std::vector<std::string> params;
};

int run_one(const std::string& name, const CliOptions& opt, const CLI::App* sub) {
    nilsphere::ExperimentConfig cfg;
    try {
        if (!opt.config.empty()) {
            cfg = nilsphere::ExperimentConfig::from_json_file(opt.config);
            if (cfg.experiment != name) {
                std::fprintf(stderr, "config names experiment '%s' but subcommand is '%s'\n",
                             cfg.experiment.c_str(), name.c_str());
                return 2;
            }
        }
        cfg.experiment = name;
        if (sub->count("--out") > 0) cfg.output_dir = opt.out;
        if (sub->count("--group") > 0) cfg.group = opt.group;
        if (sub->count("--surface") > 0) cfg.surface = opt.surface;
        if (sub->count("--seed") > 0) cfg.seed = opt.seed;
        if (sub->count("--threads") > 0) cfg.threads = opt.threads;
        for (const auto& kv : opt.params) {
            auto eq = kv.find('=');
            if (eq == std::string::npos) {
                std::fprintf(stderr, "--param expects key=value, got '%s'\n", kv.c_str());
                return 2;
            }
            cfg.parameters[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    }

    nilsphere::RunReport rep = nilsphere::run_experiment(cfg);
    if (!rep.error.empty()) {
        std::fprintf(stderr, "config error: %s\n", rep.error.c_str());
        return 2;
    }
    for (const auto& c : rep.checks) {
        std::string window;
        if (c.has_lower && c.has_upper)
            window = "in [" + nilsphere::format_sig(c.lower) + ", " +
                     nilsphere::format_sig(c.upper) + "]";
        else if (c.has_upper)
            window = "<= " + nilsphere::format_sig(c.upper);
        else
            window = ">= " + nilsphere::format_sig(c.lower);
        std::printf("[%s] %s: measured %s, required %s\n", c.pass ? "PASS" : "FAIL",
                    c.name.c_str(), nilsphere::format_sig(c.measured).c_str(), window.c_str());
    }
    std::printf("%s: %s (%.2fs, report in %s)\n", name.c_str(), rep.pass ? "PASS" : "FAIL",
                rep.elapsed_seconds, cfg.output_dir.c_str());
    return rep.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical harmonic analysis on step-two nilpotent groups"};
    app.require_subcommand(1);

    auto* list = app.add_subcommand("list", "print the experiment catalog");

    std::vector<std::pair<CLI::App*, CliOptions>> subs;
    subs.reserve(16);
    for (const auto& info : nilsphere::list_experiments()) {
        auto* sub = app.add_subcommand(info.name, info.summary);
        subs.emplace_back(sub, CliOptions{});
        CliOptions& opt = subs.back().second;
        sub->add_option("--config", opt.config, "JSON config file");
        sub->add_option("--out", opt.out, "output directory for CSV tables and the report");
        sub->add_option("--group", opt.group, "group builder name");
        sub->add_option("--surface", opt.surface, "surface model name");
        sub->add_option("--seed", opt.seed, "seed fixing all randomized sampling");
        sub->add_option("--threads", opt.threads,
                        "worker threads (0 = NILSPHERE_THREADS or all cores)");
        sub->add_option("--param", opt.params, "key=value numeric parameter override")
            ->take_all();
    }

    CLI11_PARSE(app, argc, argv);

    if (list->parsed()) {
        for (const auto& info : nilsphere::list_experiments())
            std::printf("%-22s %s\n%-22s parameters: %s\n", info.name.c_str(),
                        info.summary.c_str(), "", info.parameters.c_str());
        return 0;
    }
    for (auto& [sub, opt] : subs)
        if (sub->parsed()) return run_one(sub->get_name(), opt, sub);
    return 2;
}
