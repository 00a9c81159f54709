#include "mapf/planner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <stdexcept>
#include <unordered_set>

#include "mapf/rand.hpp"

namespace mapf {

SearchTree::SearchTree(CompositeConfig root) {
    nodes.push_back({std::move(root), -1, 0.0, {}});
    best_by_config.emplace(nodes[0].config, 0);
}

int SearchTree::add(CompositeConfig config, int parent, double cost) {
    const int idx = static_cast<int>(nodes.size());
    nodes.push_back({std::move(config), parent, cost, {}});
    nodes[parent].children.push_back(idx);
    auto [it, inserted] = best_by_config.emplace(nodes[idx].config, idx);
    if (!inserted && cost < nodes[it->second].cost) it->second = idx;
    return idx;
}

bool SearchTree::is_ancestor(int candidate, int node) const {
    for (int cur = node; cur >= 0; cur = nodes[cur].parent)
        if (cur == candidate) return true;
    return false;
}

void SearchTree::reparent(int node, int new_parent, double new_cost) {
    TreeNode& n = nodes[node];
    auto& siblings = nodes[n.parent].children;
    siblings.erase(std::find(siblings.begin(), siblings.end(), node));
    n.parent = new_parent;
    nodes[new_parent].children.push_back(node);

    const double shift = new_cost - n.cost;
    std::deque<int> queue{node};
    while (!queue.empty()) {
        int cur = queue.front();
        queue.pop_front();
        nodes[cur].cost += shift;
        auto it = best_by_config.find(nodes[cur].config);
        if (it != best_by_config.end() &&
            nodes[cur].cost < nodes[it->second].cost)
            it->second = cur;
        for (int child : nodes[cur].children) queue.push_back(child);
    }
}

std::vector<CompositeConfig> SearchTree::chain_to_root(int node) const {
    std::vector<CompositeConfig> chain;
    for (int cur = node; cur >= 0; cur = nodes[cur].parent)
        chain.push_back(nodes[cur].config);
    std::reverse(chain.begin(), chain.end());
    return chain;
}

void check_tree(const SearchTree& tree, const RoadmapGraph& g) {
    const int n = tree.size();
    if (n == 0 || tree.nodes[0].parent != -1 || tree.nodes[0].cost != 0.0)
        throw std::logic_error("bad root");
    for (int i = 1; i < n; ++i) {
        const TreeNode& node = tree.nodes[i];
        if (node.parent < 0 || node.parent >= n)
            throw std::logic_error("bad parent index");
        if (tree.is_ancestor(i, node.parent))
            throw std::logic_error("cycle through node " + std::to_string(i));
        const TreeNode& parent = tree.nodes[node.parent];
        if (!is_valid_move(parent.config, node.config, g))
            throw std::logic_error("invalid hop into node " + std::to_string(i));
        double expect = parent.cost + composite_delta(parent.config, node.config, g);
        if (std::abs(expect - node.cost) > 1e-9)
            throw std::logic_error("cost mismatch at node " + std::to_string(i));
    }
}

namespace {

// Indices of the nn_count nodes nearest to `measure`, smallest first;
// ties break on node index. `skip` filters candidates.
template <typename Measure, typename Skip>
std::vector<int> nearest_nodes(const SearchTree& tree, int nn_count,
                               Measure measure, Skip skip) {
    std::vector<std::pair<double, int>> scored;
    scored.reserve(tree.size());
    for (int i = 0; i < tree.size(); ++i) {
        if (skip(i)) continue;
        scored.push_back({measure(i), i});
    }
    const size_t keep = std::min<size_t>(nn_count, scored.size());
    std::partial_sort(scored.begin(), scored.begin() + keep, scored.end());
    std::vector<int> out;
    out.reserve(keep);
    for (size_t i = 0; i < keep; ++i) out.push_back(scored[i].second);
    return out;
}

}  // namespace

namespace {

// Steers the fleet toward the sampled pose, one oracle step at a time. The
// walk is what makes the best-predecessor comparison meaningful: different
// parents reach comparable configurations. A few non-improving steps are
// tolerated so agents can back out of each other's way mid-walk, and the
// chain is trimmed back to its closest-to-pose prefix.
std::vector<CompositeConfig> steer_walk(const CompositeConfig& from,
                                        const std::vector<Point2>& sample,
                                        const RoadmapGraph& g,
                                        std::mt19937_64& rng) {
    constexpr int kMaxWalk = 64;
    constexpr int kPatience = 3;
    std::vector<CompositeConfig> chain;
    std::unordered_set<CompositeConfig, ConfigHash> visited{from};
    const CompositeConfig* cur = &from;
    double best_gap = composite_delta_to_points(*cur, sample, g);
    size_t best_len = 0;
    int stalled = 0;
    while (static_cast<int>(chain.size()) < kMaxWalk) {
        auto next = direction_oracle(*cur, sample, g, rng);
        if (!next || *next == *cur) break;
        if (!visited.insert(*next).second) break;
        double gap = composite_delta_to_points(*next, sample, g);
        chain.push_back(std::move(*next));
        cur = &chain.back();
        if (gap < best_gap - 1e-12) {
            best_gap = gap;
            best_len = chain.size();
            stalled = 0;
        } else if (++stalled >= kPatience) {
            break;
        }
    }
    chain.resize(best_len);
    return chain;
}

}  // namespace

std::optional<int> expand(SearchTree& tree,
                          const std::vector<CorridorSet>& corridors,
                          const RoadmapGraph& g, int nn_count,
                          std::mt19937_64& rng) {
    const std::vector<Point2> sample = sample_target(corridors, g, rng);
    auto candidates = nearest_nodes(
        tree, nn_count,
        [&](int i) {
            return composite_delta_to_points(tree.nodes[i].config, sample, g);
        },
        [](int) { return false; });

    int best_parent = -1;
    double best_cost = 0.0;
    std::vector<CompositeConfig> best_chain;
    for (int c : candidates) {
        auto chain = steer_walk(tree.nodes[c].config, sample, g, rng);
        if (chain.empty()) continue;
        double cost = tree.nodes[c].cost;
        const CompositeConfig* prev = &tree.nodes[c].config;
        for (const CompositeConfig& q : chain) {
            cost += composite_delta(*prev, q, g);
            prev = &q;
        }
        // a walk that re-derives an existing configuration at no better
        // cost adds nothing; let the other candidates compete instead
        auto dup = tree.best_by_config.find(chain.back());
        if (dup != tree.best_by_config.end() &&
            tree.nodes[dup->second].cost <= cost)
            continue;
        if (best_parent < 0 || cost < best_cost) {
            best_parent = c;
            best_cost = cost;
            best_chain = std::move(chain);
        }
    }
    if (best_parent < 0) return std::nullopt;

    int attach = best_parent;
    for (CompositeConfig& q : best_chain) {
        double cost = tree.nodes[attach].cost +
                      composite_delta(tree.nodes[attach].config, q, g);
        attach = tree.add(std::move(q), attach, cost);
    }
    return attach;
}

int rewire(SearchTree& tree, int node, const RoadmapGraph& g, int nn_count,
           int connector_horizon, std::mt19937_64& rng, HeuristicCache& heur) {
    const CompositeConfig here = tree.nodes[node].config;  // adds may realloc
    std::unordered_set<int> excluded;  // node and its ancestors
    for (int cur = node; cur >= 0; cur = tree.nodes[cur].parent)
        excluded.insert(cur);
    auto candidates = nearest_nodes(
        tree, nn_count,
        [&](int i) { return composite_delta(tree.nodes[i].config, here, g); },
        [&](int i) { return excluded.count(i) != 0; });

    int rewired = 0;
    for (int c : candidates) {
        const uint64_t seed = rng();
        auto chain = local_connect(here, tree.nodes[c].config, g,
                                   connector_horizon, seed, heur);
        if (!chain) continue;

        double chain_len = 0.0;
        const CompositeConfig* prev = &here;
        for (const CompositeConfig& q : *chain) {
            chain_len += composite_delta(*prev, q, g);
            prev = &q;
        }
        const double total = tree.nodes[node].cost + chain_len +
                             composite_delta(*prev, tree.nodes[c].config, g);
        if (total >= tree.nodes[c].cost) continue;

        int attach = node;
        for (CompositeConfig& q : *chain) {
            double cost = tree.nodes[attach].cost +
                          composite_delta(tree.nodes[attach].config, q, g);
            attach = tree.add(std::move(q), attach, cost);
        }
        tree.reparent(c, attach, total);
        ++rewired;
    }
#ifndef NDEBUG
    check_tree(tree, g);
#endif
    return rewired;
}

std::optional<std::vector<CompositeConfig>> connect_to_target(
    const SearchTree& tree, int node, const CompositeConfig& goal,
    const RoadmapGraph& g, int connector_horizon, std::mt19937_64& rng,
    HeuristicCache& heur) {
    const uint64_t seed = rng();
    auto chain = local_connect(tree.nodes[node].config, goal, g,
                               connector_horizon, seed, heur);
    if (!chain) return std::nullopt;

    auto path = tree.chain_to_root(node);
    for (CompositeConfig& q : *chain) path.push_back(std::move(q));
    if (path.back() != goal) path.push_back(goal);
    return path;
}

PlanResult solve(const RoadmapGraph& g, const Assignment& a,
                 const PlannerParams& params) {
    using Clock = std::chrono::steady_clock;
    const auto started = Clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(Clock::now() - started).count();
    };

    validate_assignment(a, g);
    const int k = a.agent_count();
    CompositeConfig start(k), goal(k);
    for (int i = 0; i < k; ++i) {
        start[i] = a.tasks[i].start;
        goal[i] = a.tasks[i].goal;
    }

    PlanResult result;
    if (start == goal) {
        result.success = true;
        result.path = {start};
        result.tree_size = 1;
        result.wall_time_s = elapsed();
        return result;
    }

    std::vector<CorridorSet> corridors;
    corridors.reserve(k);
    for (int i = 0; i < k; ++i) {
        auto from_start = shortest_distances(g, a.tasks[i].start);
        if (from_start.dist[a.tasks[i].goal] == kUnreachable)
            throw std::invalid_argument(
                "goal of agent " + std::to_string(i) +
                " is unreachable from its start");
        corridors.push_back(corridor_from_fields(
            from_start, shortest_distances(g, a.tasks[i].goal), params.delta));
    }

    const int connector_horizon =
        params.horizon > 0 ? params.horizon : 4 * std::max(1, diameter_hops(g));
    HeuristicCache heur(g);
    std::mt19937_64 rng(params.seed);
    SearchTree tree(start);

    for (int iter = 1; iter <= params.max_iters; ++iter) {
        if (elapsed() > params.time_limit_s) {
            result.iterations = iter - 1;
            result.failure_reason = "time limit exceeded";
            break;
        }
        result.iterations = iter;

        auto added = expand(tree, corridors, g, params.nn_count, rng);
        if (!added) continue;
        rewire(tree, *added, g, params.nn_count, connector_horizon, rng, heur);
        auto path = connect_to_target(tree, *added, goal, g, connector_horizon,
                                      rng, heur);
        if (path) {
            result.success = true;
            result.path = std::move(*path);
            break;
        }
    }

    if (!result.success && result.failure_reason.empty())
        result.failure_reason = "iteration budget exhausted";
    result.tree_size = tree.size();
    result.wall_time_s = elapsed();
    return result;
}

std::optional<Violation> validate_plan(
    const std::vector<CompositeConfig>& path, const RoadmapGraph& g,
    const Assignment& a) {
    const int k = a.agent_count();
    if (path.empty()) return Violation{0, "empty plan"};
    for (size_t t = 0; t < path.size(); ++t) {
        const CompositeConfig& c = path[t];
        if (static_cast<int>(c.size()) != k)
            return Violation{static_cast<int>(t), "agent count mismatch"};
        for (int i = 0; i < k; ++i)
            if (!g.has_vertex(c[i]))
                return Violation{static_cast<int>(t), "unknown vertex", i};
        for (int i = 0; i < k; ++i)
            for (int j = i + 1; j < k; ++j)
                if (c[i] == c[j])
                    return Violation{static_cast<int>(t), "vertex conflict", i, j};
    }
    for (int i = 0; i < k; ++i) {
        if (path.front()[i] != a.tasks[i].start)
            return Violation{0, "start mismatch", i};
        if (path.back()[i] != a.tasks[i].goal)
            return Violation{static_cast<int>(path.size()) - 1, "goal mismatch", i};
    }
    for (size_t t = 0; t + 1 < path.size(); ++t) {
        const CompositeConfig& cur = path[t];
        const CompositeConfig& next = path[t + 1];
        for (int i = 0; i < k; ++i)
            if (next[i] != cur[i] && !g.has_edge(cur[i], next[i]))
                return Violation{static_cast<int>(t + 1), "illegal move", i};
        for (int i = 0; i < k; ++i)
            for (int j = i + 1; j < k; ++j)
                if (next[i] == cur[j] && next[j] == cur[i] && next[i] != cur[i])
                    return Violation{static_cast<int>(t + 1), "swap conflict", i, j};
    }
    return std::nullopt;
}

}  // namespace mapf
