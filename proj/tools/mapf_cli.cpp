#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "mapf/bench.hpp"
#include "mapf/carp.hpp"
#include "mapf/io.hpp"
#include "mapf/planner.hpp"
#include "mapf/roadmap.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPlanFailure = 1;
constexpr int kExitBadInput = 2;

void write_map_file(const std::string& path, const mapf::RoadmapGraph& g) {
    std::ostringstream out;
    mapf::write_map(out, g);
    mapf::save_file(path, out.str());
}

void write_tasks_file(const std::string& path, const mapf::Assignment& a) {
    std::ostringstream out;
    mapf::write_tasks(out, a);
    mapf::save_file(path, out.str());
}

void write_plan_file(const std::string& path,
                     const std::vector<std::vector<int>>& plan) {
    std::ostringstream out;
    mapf::write_plan_csv(out, plan);
    mapf::save_file(path, out.str());
}

struct PlanOptions {
    std::string map_path, tasks_path, out_path;
    std::string algo = "drrt";
    int attempts = 1;
    uint64_t seed = 0;
    mapf::PlannerParams params;
};

int run_plan(const PlanOptions& opt) {
    const auto g = mapf::load_map(opt.map_path);
    const auto a = mapf::load_tasks(opt.tasks_path);
    mapf::validate_assignment(a, g);

    bool success = false;
    std::vector<mapf::CompositeConfig> plan;
    if (opt.algo == "drrt") {
        mapf::PlannerParams params = opt.params;
        params.seed = opt.seed;
        auto r = mapf::solve(g, a, params);
        success = r.success;
        plan = r.path;
        std::printf("result=%s steps=%d iterations=%d time_s=%.3f tree_nodes=%d\n",
                    r.success ? "success" : "failure", r.makespan(),
                    r.iterations, r.wall_time_s, r.tree_size);
        if (!r.success)
            std::fprintf(stderr, "planning failed: %s\n",
                         r.failure_reason.c_str());
    } else if (opt.algo == "carp") {
        const int horizon = opt.params.horizon > 0
                                ? opt.params.horizon
                                : mapf::default_horizon(g, a.agent_count());
        mapf::HeuristicCache heur(g);
        const auto started = std::chrono::steady_clock::now();
        auto r = mapf::plan_with_retries(g, a, opt.attempts, horizon, opt.seed,
                                         heur);
        const double secs = std::chrono::duration<double>(
                                std::chrono::steady_clock::now() - started)
                                .count();
        success = r.paths.has_value();
        if (r.paths) plan = mapf::synchronize(*r.paths);
        std::printf("result=%s steps=%d attempts=%d time_s=%.3f\n",
                    success ? "success" : "failure",
                    success ? static_cast<int>(plan.size()) - 1 : -1,
                    r.attempts_used, secs);
        if (!success)
            std::fprintf(stderr, "planning failed after %d attempts\n",
                         r.attempts_used);
    } else {
        std::fprintf(stderr, "unknown algorithm: %s (use drrt or carp)\n",
                     opt.algo.c_str());
        return kExitBadInput;
    }

    if (success && !opt.out_path.empty()) write_plan_file(opt.out_path, plan);
    return success ? kExitOk : kExitPlanFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-agent path-finding toolkit"};
    app.require_subcommand(1);

    // gen-map
    auto* gen_map = app.add_subcommand("gen-map", "Generate a map file");
    gen_map->require_subcommand(1);
    int width = 20, height = 20, steps = 10, agents = 10;
    double spacing = 1.0;
    uint64_t seed = 0;
    std::string out_path, tasks_out;

    auto* grid = gen_map->add_subcommand("grid", "Full grid map");
    grid->add_option("--w", width, "grid width")->required();
    grid->add_option("--h", height, "grid height")->required();
    grid->add_option("--spacing", spacing, "lattice spacing");
    grid->add_option("--out", out_path, "output map file")->required();

    auto* stree = gen_map->add_subcommand("spanning-tree",
                                          "Random spanning tree of a grid");
    stree->add_option("--w", width)->required();
    stree->add_option("--h", height)->required();
    stree->add_option("--spacing", spacing);
    stree->add_option("--seed", seed);
    stree->add_option("--out", out_path)->required();

    auto* densify = gen_map->add_subcommand(
        "densify", "Series from a spanning tree to the full grid");
    densify->add_option("--w", width)->required();
    densify->add_option("--h", height)->required();
    densify->add_option("--spacing", spacing);
    densify->add_option("--steps", steps, "densification steps");
    densify->add_option("--seed", seed);
    densify->add_option("--out", out_path, "output file prefix")->required();

    auto* hard = gen_map->add_subcommand(
        "carp-hard", "Swap-gadget map unsolvable by sequential planning");
    hard->add_option("--agents", agents, "task count (even)")->required();
    hard->add_option("--seed", seed);
    hard->add_option("--out", out_path)->required();
    hard->add_option("--tasks-out", tasks_out, "companion assignment file")
        ->required();

    // gen-tasks
    auto* gen_tasks =
        app.add_subcommand("gen-tasks", "Random assignment for a map");
    std::string map_path;
    gen_tasks->add_option("--map", map_path)->required();
    gen_tasks->add_option("--agents", agents)->required();
    gen_tasks->add_option("--seed", seed);
    gen_tasks->add_option("--out", out_path)->required();

    // plan
    auto* plan_cmd = app.add_subcommand("plan", "Plan one instance");
    PlanOptions plan_opts;
    plan_cmd->add_option("--map", plan_opts.map_path)->required();
    plan_cmd->add_option("--tasks", plan_opts.tasks_path)->required();
    plan_cmd->add_option("--algo", plan_opts.algo, "drrt or carp");
    plan_cmd->add_option("--attempts", plan_opts.attempts,
                         "carp shuffle attempts");
    plan_cmd->add_option("--seed", plan_opts.seed);
    plan_cmd->add_option("--delta", plan_opts.params.delta, "corridor slack");
    plan_cmd->add_option("--nn", plan_opts.params.nn_count,
                         "nearest neighbors per step");
    plan_cmd->add_option("--max-iters", plan_opts.params.max_iters);
    plan_cmd->add_option("--time-limit", plan_opts.params.time_limit_s);
    plan_cmd->add_option("--horizon", plan_opts.params.horizon);
    plan_cmd->add_option("--out", plan_opts.out_path, "plan CSV path");

    // validate
    auto* validate = app.add_subcommand("validate", "Check a plan CSV");
    std::string plan_path;
    validate->add_option("--map", map_path)->required();
    validate->add_option("--tasks", plan_opts.tasks_path)->required();
    validate->add_option("--plan", plan_path)->required();

    // bench
    auto* bench = app.add_subcommand("bench", "Run an experiment suite");
    std::string config_path, records_path = "records.csv",
                             summary_path = "summary.csv";
    int threads = 1;
    bench->add_option("--config", config_path)->required();
    bench->add_option("--out", records_path, "records CSV path");
    bench->add_option("--summary", summary_path, "summary CSV path");
    bench->add_option("--threads", threads, "parallel suite cells");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitBadInput;
    }

    try {
        if (grid->parsed()) {
            write_map_file(out_path, mapf::build_grid(width, height, spacing));
        } else if (stree->parsed()) {
            auto g = mapf::build_grid(width, height, spacing);
            write_map_file(out_path, mapf::random_spanning_tree(g, seed));
        } else if (densify->parsed()) {
            auto g = mapf::build_grid(width, height, spacing);
            auto tree = mapf::random_spanning_tree(g, seed);
            auto series = mapf::densify_series(g, tree, steps, seed);
            for (size_t i = 0; i < series.size(); ++i) {
                char name[32];
                std::snprintf(name, sizeof(name), "%02zu.map", i);
                write_map_file(out_path + name, series[i]);
                std::printf("%s%s: %d edges\n", out_path.c_str(), name,
                            series[i].edge_count());
            }
        } else if (hard->parsed()) {
            auto [g, a] = mapf::generate_carp_hard(agents, seed);
            write_map_file(out_path, g);
            write_tasks_file(tasks_out, a);
        } else if (gen_tasks->parsed()) {
            auto g = mapf::load_map(map_path);
            write_tasks_file(out_path, mapf::random_assignment(g, agents, seed));
        } else if (plan_cmd->parsed()) {
            return run_plan(plan_opts);
        } else if (validate->parsed()) {
            auto g = mapf::load_map(map_path);
            auto a = mapf::load_tasks(plan_opts.tasks_path);
            auto plan = mapf::load_plan_csv(plan_path);
            auto violation = mapf::validate_plan(plan, g, a);
            if (violation) {
                std::printf("violation step=%d what=\"%s\" agents=%d,%d\n",
                            violation->step, violation->what.c_str(),
                            violation->agent_a, violation->agent_b);
                return kExitPlanFailure;
            }
            std::printf("ok steps=%d agents=%zu\n",
                        static_cast<int>(plan.size()) - 1,
                        plan.empty() ? 0 : plan[0].size());
        } else if (bench->parsed()) {
            auto spec = mapf::load_spec(config_path);
            auto records = mapf::run_suite(spec, threads);
            mapf::save_file(records_path, mapf::records_to_csv(records));
            auto summary = mapf::aggregate(records);
            mapf::save_file(summary_path, mapf::summary_to_csv(summary));
            std::fputs(mapf::summary_to_csv(summary).c_str(), stdout);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitBadInput;
    }
    return kExitOk;
}
