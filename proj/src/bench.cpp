#include "mapf/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "mapf/carp.hpp"
#include "mapf/rand.hpp"

namespace mapf {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) out.push_back(item);
    return out;
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    for (const auto& part : split(s, ',')) out.push_back(std::stoi(part));
    return out;
}

}  // namespace

ExperimentSpec parse_spec(std::istream& in) {
    ExperimentSpec spec;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        while (!line.empty() && (line.back() == ' ' || line.back() == '\r' ||
                                 line.back() == '\t'))
            line.pop_back();
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("spec line " + std::to_string(lineno) +
                                     ": expected key=value");
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);

        if (key == "suite") {
            if (value == "densified-grid")
                spec.suite = ExperimentSpec::Suite::DensifiedGrid;
            else if (value == "carp-hard")
                spec.suite = ExperimentSpec::Suite::CarpHard;
            else
                throw std::runtime_error("unknown suite: " + value);
        } else if (key == "width") {
            spec.grid_width = std::stoi(value);
        } else if (key == "height") {
            spec.grid_height = std::stoi(value);
        } else if (key == "density_steps") {
            spec.density_steps = std::stoi(value);
        } else if (key == "assignments") {
            spec.assignments = std::stoi(value);
        } else if (key == "agents") {
            spec.agents = std::stoi(value);
        } else if (key == "agent_counts") {
            spec.agent_counts = parse_int_list(value);
        } else if (key == "instances") {
            spec.instances = std::stoi(value);
        } else if (key == "algos") {
            spec.algos = split(value, ',');
        } else if (key == "seed") {
            spec.master_seed = std::stoull(value);
        } else if (key == "delta") {
            spec.planner.delta = std::stod(value);
        } else if (key == "nn") {
            spec.planner.nn_count = std::stoi(value);
        } else if (key == "max_iters") {
            spec.planner.max_iters = std::stoi(value);
        } else if (key == "time_limit") {
            spec.planner.time_limit_s = std::stod(value);
        } else if (key == "horizon") {
            spec.planner.horizon = std::stoi(value);
            spec.carp_horizon = std::stoi(value);
        } else if (key == "stable_time") {
            spec.stable_time = value == "1" || value == "true";
        } else {
            throw std::runtime_error("unknown spec key: " + key);
        }
    }
    return spec;
}

ExperimentSpec load_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return parse_spec(in);
}

uint64_t cell_seed(uint64_t master, int map_id, int instance,
                   const std::string& algo) {
    return mix_seed(mix_seed(mix_seed(master, static_cast<uint64_t>(map_id)),
                             static_cast<uint64_t>(instance)),
                    hash_str(algo));
}

namespace {

struct AlgoChoice {
    bool is_drrt = false;
    int attempts = 1;
};

AlgoChoice parse_algo(const std::string& algo) {
    if (algo == "drrt") return {true, 0};
    if (algo == "carp") return {false, 1};
    if (algo.rfind("carp:", 0) == 0) {
        int attempts = std::stoi(algo.substr(5));
        if (attempts < 1) throw std::runtime_error("bad attempt count: " + algo);
        return {false, attempts};
    }
    throw std::runtime_error("unknown algorithm: " + algo);
}

}  // namespace

RunRecord run_cell(const RoadmapGraph& g, const Assignment& a,
                   const std::string& algo, const PlannerParams& base,
                   int carp_horizon, uint64_t seed, bool stable_time) {
    RunRecord rec;
    rec.algo = algo;
    rec.seed = seed;
    const AlgoChoice choice = parse_algo(algo);

    if (choice.is_drrt) {
        PlannerParams params = base;
        params.seed = seed;
        PlanResult r = solve(g, a, params);
        rec.success = r.success;
        rec.steps = r.success ? r.makespan() : -1;
        rec.iterations = r.iterations;
        rec.time_s = stable_time ? 0.0 : r.wall_time_s;
    } else {
        const int horizon = carp_horizon > 0
                                ? carp_horizon
                                : default_horizon(g, a.agent_count());
        const auto started = std::chrono::steady_clock::now();
        HeuristicCache heur(g);
        CarpResult r =
            plan_with_retries(g, a, choice.attempts, horizon, seed, heur);
        rec.success = r.paths.has_value();
        rec.steps = r.paths
                        ? static_cast<int>(synchronize(*r.paths).size()) - 1
                        : -1;
        rec.iterations = r.attempts_used;
        rec.time_s = stable_time
                         ? 0.0
                         : std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - started)
                               .count();
    }
    return rec;
}

namespace {

struct Cell {
    int instance;
    int map_id;
    const RoadmapGraph* graph;
    const Assignment* assignment;
    std::string algo;
};

}  // namespace

std::vector<RunRecord> run_suite(const ExperimentSpec& spec, int threads) {
    // Instance data is generated up front, deterministically from the master
    // seed; execution order can then never leak into the results.
    std::vector<RoadmapGraph> maps;
    std::vector<Assignment> assignments;
    std::vector<Cell> cells;

    if (spec.suite == ExperimentSpec::Suite::DensifiedGrid) {
        RoadmapGraph grid =
            build_grid(spec.grid_width, spec.grid_height, 1.0);
        RoadmapGraph tree = random_spanning_tree(
            grid, mix_seed(spec.master_seed, hash_str("tree")));
        maps = densify_series(grid, tree, spec.density_steps,
                              mix_seed(spec.master_seed, hash_str("densify")));
        assignments.reserve(spec.assignments);
        for (int i = 0; i < spec.assignments; ++i)
            assignments.push_back(random_assignment(
                grid, spec.agents,
                mix_seed(mix_seed(spec.master_seed, hash_str("tasks")), i)));
        for (int inst = 0; inst < spec.assignments; ++inst)
            for (size_t m = 0; m < maps.size(); ++m)
                for (const auto& algo : spec.algos)
                    cells.push_back({inst, static_cast<int>(m), &maps[m],
                                     &assignments[inst], algo});
    } else {
        maps.reserve(spec.agent_counts.size() * spec.instances);
        assignments.reserve(maps.capacity());
        std::vector<std::pair<int, int>> layout;  // (agent count, instance)
        for (int k : spec.agent_counts)
            for (int inst = 0; inst < spec.instances; ++inst) {
                auto [g, a] = generate_carp_hard(
                    k, mix_seed(mix_seed(spec.master_seed, hash_str("hard")),
                                mix_seed(k, inst)));
                maps.push_back(std::move(g));
                assignments.push_back(std::move(a));
                layout.push_back({k, inst});
            }
        for (int inst = 0; inst < spec.instances; ++inst)
            for (size_t i = 0; i < layout.size(); ++i) {
                if (layout[i].second != inst) continue;
                for (const auto& algo : spec.algos)
                    cells.push_back({inst, layout[i].first, &maps[i],
                                     &assignments[i], algo});
            }
    }

    std::vector<RunRecord> records(cells.size());
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= cells.size()) return;
            const Cell& cell = cells[i];
            uint64_t seed = cell_seed(spec.master_seed, cell.map_id,
                                      cell.instance, cell.algo);
            records[i] = run_cell(*cell.graph, *cell.assignment, cell.algo,
                                  spec.planner, spec.carp_horizon, seed,
                                  spec.stable_time);
            records[i].instance = cell.instance;
            records[i].map_id = cell.map_id;
        }
    };

    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return records;
}

namespace {

template <typename T>
T lower_median(std::vector<T> values) {
    std::sort(values.begin(), values.end());
    return values[(values.size() - 1) / 2];
}

}  // namespace

std::vector<SummaryRow> aggregate(const std::vector<RunRecord>& records) {
    if (records.empty())
        throw std::invalid_argument("nothing to aggregate");
    std::vector<std::pair<int, std::string>> groups;
    for (const auto& r : records) {
        std::pair<int, std::string> key{r.map_id, r.algo};
        if (std::find(groups.begin(), groups.end(), key) == groups.end())
            groups.push_back(key);
    }
    std::sort(groups.begin(), groups.end());

    std::vector<SummaryRow> rows;
    rows.reserve(groups.size());
    for (const auto& [map_id, algo] : groups) {
        SummaryRow row;
        row.group = map_id;
        row.algo = algo;
        std::vector<int> steps, iters;
        std::vector<double> times;
        for (const auto& r : records) {
            if (r.map_id != map_id || r.algo != algo) continue;
            if (r.success) steps.push_back(r.steps);
            else ++row.failures;
            iters.push_back(r.iterations);
            times.push_back(r.time_s);
        }
        if (!steps.empty()) row.median_steps = lower_median(steps);
        row.median_iterations = lower_median(iters);
        row.median_time_s = lower_median(times);
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace {

std::string fmt_time(double t) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6f", t);
    return buf;
}

}  // namespace

std::string records_to_csv(const std::vector<RunRecord>& records) {
    std::string out = "instance,map,algo,success,steps,iterations,time_s,seed\n";
    for (const auto& r : records) {
        out += std::to_string(r.instance);
        out += ',';
        out += std::to_string(r.map_id);
        out += ',';
        out += r.algo;
        out += r.success ? ",1," : ",0,";
        if (r.success) out += std::to_string(r.steps);
        out += ',';
        out += std::to_string(r.iterations);
        out += ',';
        out += fmt_time(r.time_s);
        out += ',';
        out += std::to_string(r.seed);
        out += '\n';
    }
    return out;
}

std::vector<RunRecord> records_from_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) ||
        line != "instance,map,algo,success,steps,iterations,time_s,seed")
        throw std::runtime_error("bad records CSV header");
    std::vector<RunRecord> records;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto fields = split(line, ',');
        if (fields.size() != 8)
            throw std::runtime_error("bad records CSV row: " + line);
        RunRecord r;
        r.instance = std::stoi(fields[0]);
        r.map_id = std::stoi(fields[1]);
        r.algo = fields[2];
        r.success = fields[3] == "1";
        r.steps = fields[4].empty() ? -1 : std::stoi(fields[4]);
        r.iterations = std::stoi(fields[5]);
        r.time_s = std::stod(fields[6]);
        r.seed = std::stoull(fields[7]);
        records.push_back(std::move(r));
    }
    return records;
}

std::string summary_to_csv(const std::vector<SummaryRow>& rows) {
    std::string out =
        "group,algo,failures,median_steps,median_iterations,median_time_s\n";
    for (const auto& row : rows) {
        out += std::to_string(row.group);
        out += ',';
        out += row.algo;
        out += ',';
        out += std::to_string(row.failures);
        out += ',';
        if (row.median_steps) out += std::to_string(*row.median_steps);
        out += ',';
        out += std::to_string(row.median_iterations);
        out += ',';
        out += fmt_time(row.median_time_s);
        out += '\n';
    }
    return out;
}

}  // namespace mapf
