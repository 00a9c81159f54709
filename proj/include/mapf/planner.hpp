#ifndef MAPF_PLANNER_HPP
#define MAPF_PLANNER_HPP

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "mapf/carp.hpp"
#include "mapf/composite.hpp"
#include "mapf/roadmap.hpp"
#include "mapf/sampling.hpp"

namespace mapf {

struct TreeNode {
    CompositeConfig config;
    int parent = -1;
    double cost = 0.0;  // delta-sum along the parent chain
    std::vector<int> children;
};

// Rooted tree over composite configurations. Every parent->child hop is a
// valid composite move. best_by_config tracks, per configuration, the node
// with the lowest cost (duplicates can enter through rewiring).
struct SearchTree {
    std::vector<TreeNode> nodes;
    std::unordered_map<CompositeConfig, int, ConfigHash> best_by_config;

    explicit SearchTree(CompositeConfig root);
    int size() const { return static_cast<int>(nodes.size()); }

    int add(CompositeConfig config, int parent, double cost);
    bool is_ancestor(int candidate, int node) const;
    // Moves `node` under `new_parent` and shifts the subtree costs.
    void reparent(int node, int new_parent, double new_cost);
    std::vector<CompositeConfig> chain_to_root(int node) const;
};

// Throws std::logic_error when tree invariants are broken (cycle, cost
// mismatch, invalid hop). Used by tests and debug builds.
void check_tree(const SearchTree& tree, const RoadmapGraph& g);

struct PlannerParams {
    double delta = 4.0;       // corridor slack
    int nn_count = 5;         // neighbors examined by expand and rewire
    int max_iters = 10000;
    double time_limit_s = 60.0;
    int horizon = 0;          // local connector horizon; 0 = 4 * diameter
    uint64_t seed = 0;
};

struct PlanResult {
    bool success = false;
    std::vector<CompositeConfig> path;
    int iterations = 0;
    double wall_time_s = 0.0;
    int tree_size = 0;
    std::string failure_reason;
    int makespan() const { return static_cast<int>(path.size()) - 1; }
};

// One expansion: sample corridor targets, steer each of the nn_count
// delta-nearest tree nodes toward the sample with repeated oracle steps,
// and attach the cheapest walk (per cost to root) as chained nodes.
// Returns the walk's last node. Soft failure (nullopt) when no candidate
// can move or every walk re-derives a known configuration at no better
// cost.
std::optional<int> expand(SearchTree& tree,
                          const std::vector<CorridorSet>& corridors,
                          const RoadmapGraph& g, int nn_count,
                          std::mt19937_64& rng);

// Tries to route each of the nn_count delta-nearest nodes (ancestors
// excluded) through the freshly added node via the local connector; adopts
// any strictly cheaper connection. Returns how many nodes were reparented.
int rewire(SearchTree& tree, int node, const RoadmapGraph& g, int nn_count,
           int connector_horizon, std::mt19937_64& rng, HeuristicCache& heur);

// Root-to-goal composite path through `node`, if the connector reaches the
// goal configuration from it.
std::optional<std::vector<CompositeConfig>> connect_to_target(
    const SearchTree& tree, int node, const CompositeConfig& goal,
    const RoadmapGraph& g, int connector_horizon, std::mt19937_64& rng,
    HeuristicCache& heur);

PlanResult solve(const RoadmapGraph& g, const Assignment& a,
                 const PlannerParams& params);

struct Violation {
    int step = -1;
    std::string what;
    int agent_a = -1;
    int agent_b = -1;
};

// First violation of endpoint, movement, vertex-conflict or swap rules;
// nullopt when the plan is valid.
std::optional<Violation> validate_plan(
    const std::vector<CompositeConfig>& path, const RoadmapGraph& g,
    const Assignment& a);

}  // namespace mapf

#endif
