#ifndef MAPF_BENCH_HPP
#define MAPF_BENCH_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mapf/planner.hpp"
#include "mapf/roadmap.hpp"

namespace mapf {

// Flat key=value experiment description; see parse_spec for the keys.
struct ExperimentSpec {
    enum class Suite { DensifiedGrid, CarpHard };
    Suite suite = Suite::DensifiedGrid;

    // densified-grid suite
    int grid_width = 20;
    int grid_height = 20;
    int density_steps = 10;
    int assignments = 20;
    int agents = 40;

    // carp-hard suite
    std::vector<int> agent_counts{10, 20, 30, 40};
    int instances = 25;

    std::vector<std::string> algos{"drrt", "carp:1", "carp:1000"};
    PlannerParams planner;
    int carp_horizon = 0;        // 0 = 4 * (V + k)
    uint64_t master_seed = 1;
    bool stable_time = false;    // record time_s = 0 for byte-exact replays
};

ExperimentSpec parse_spec(std::istream& in);
ExperimentSpec load_spec(const std::string& path);

struct RunRecord {
    int instance = 0;
    int map_id = 0;  // density index, or agent count for carp-hard
    std::string algo;
    bool success = false;
    int steps = -1;  // makespan; -1 (empty CSV field) on failure
    int iterations = 0;
    double time_s = 0.0;
    uint64_t seed = 0;
};

// Seed for one suite cell; a stated, order-independent derivation.
uint64_t cell_seed(uint64_t master, int map_id, int instance,
                   const std::string& algo);

// Runs one instance with `algo` ("drrt", "carp" or "carp:N").
RunRecord run_cell(const RoadmapGraph& g, const Assignment& a,
                   const std::string& algo, const PlannerParams& base,
                   int carp_horizon, uint64_t seed, bool stable_time);

// Executes every (instance x map x algorithm) cell; records come back in
// canonical instance-major order whatever the thread count.
std::vector<RunRecord> run_suite(const ExperimentSpec& spec, int threads = 1);

struct SummaryRow {
    int group = 0;  // map id or agent count
    std::string algo;
    int failures = 0;
    std::optional<int> median_steps;  // absent when no cell succeeded
    int median_iterations = 0;
    double median_time_s = 0.0;
};

// Per (group, algorithm) aggregates; lower-median convention. Step medians
// cover successful runs only, iteration/time medians cover all runs.
std::vector<SummaryRow> aggregate(const std::vector<RunRecord>& records);

std::string records_to_csv(const std::vector<RunRecord>& records);
std::vector<RunRecord> records_from_csv(std::istream& in);
std::string summary_to_csv(const std::vector<SummaryRow>& rows);

}  // namespace mapf

#endif
