#include "mapf/roadmap.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

#include "mapf/rand.hpp"

namespace mapf {

bool RoadmapGraph::has_edge(int u, int v) const {
    if (!has_vertex(u) || !has_vertex(v)) return false;
    const auto& adj = adjacency[u];
    return std::binary_search(adj.begin(), adj.end(), v);
}

double RoadmapGraph::max_edge_length() const {
    double m = 0.0;
    for (const auto& [u, v] : edges) m = std::max(m, edge_length(u, v));
    return m;
}

RoadmapGraph make_graph(std::vector<Point2> positions,
                        std::vector<std::pair<int, int>> edges) {
    const int n = static_cast<int>(positions.size());
    std::map<std::pair<double, double>, int> seen_pos;
    for (int i = 0; i < n; ++i) {
        const Point2& p = positions[i];
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            throw std::invalid_argument("vertex " + std::to_string(i) +
                                        " has a non-finite position");
        auto [it, inserted] = seen_pos.emplace(std::make_pair(p.x, p.y), i);
        if (!inserted)
            throw std::invalid_argument(
                "vertices " + std::to_string(it->second) + " and " +
                std::to_string(i) + " share a position");
    }
    for (auto& [u, v] : edges) {
        if (u < 0 || u >= n || v < 0 || v >= n)
            throw std::invalid_argument("edge endpoint out of range");
        if (u == v)
            throw std::invalid_argument("self-loop at vertex " +
                                        std::to_string(u));
        if (u > v) std::swap(u, v);
    }
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
        throw std::invalid_argument("duplicate edge");

    RoadmapGraph g;
    g.positions = std::move(positions);
    g.edges = std::move(edges);
    g.adjacency.assign(n, {});
    for (const auto& [u, v] : g.edges) {
        g.adjacency[u].push_back(v);
        g.adjacency[v].push_back(u);
    }
    for (auto& adj : g.adjacency) std::sort(adj.begin(), adj.end());
    return g;
}

bool is_connected(const RoadmapGraph& g) {
    const int n = g.vertex_count();
    if (n <= 1) return true;
    std::vector<char> seen(n, 0);
    std::deque<int> queue{0};
    seen[0] = 1;
    int reached = 1;
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        for (int w : g.neighbors(v)) {
            if (!seen[w]) {
                seen[w] = 1;
                ++reached;
                queue.push_back(w);
            }
        }
    }
    return reached == n;
}

int diameter_hops(const RoadmapGraph& g) {
    const int n = g.vertex_count();
    int best = 0;
    std::vector<int> hops(n);
    for (int s = 0; s < n; ++s) {
        std::fill(hops.begin(), hops.end(), -1);
        hops[s] = 0;
        std::deque<int> queue{s};
        while (!queue.empty()) {
            int v = queue.front();
            queue.pop_front();
            best = std::max(best, hops[v]);
            for (int w : g.neighbors(v)) {
                if (hops[w] < 0) {
                    hops[w] = hops[v] + 1;
                    queue.push_back(w);
                }
            }
        }
    }
    return best;
}

void validate_assignment(const Assignment& a, const RoadmapGraph& g) {
    std::set<int> starts, goals;
    for (size_t i = 0; i < a.tasks.size(); ++i) {
        const Task& t = a.tasks[i];
        if (!g.has_vertex(t.start) || !g.has_vertex(t.goal))
            throw std::invalid_argument("task " + std::to_string(i) +
                                        " references a missing vertex");
        if (!starts.insert(t.start).second)
            throw std::invalid_argument("duplicate start vertex " +
                                        std::to_string(t.start));
        if (!goals.insert(t.goal).second)
            throw std::invalid_argument("duplicate goal vertex " +
                                        std::to_string(t.goal));
    }
}

RoadmapGraph build_grid(int width, int height, double spacing) {
    if (width < 1 || height < 1)
        throw std::invalid_argument("grid dimensions must be >= 1");
    if (!(spacing > 0.0)) throw std::invalid_argument("spacing must be > 0");
    std::vector<Point2> positions;
    positions.reserve(static_cast<size_t>(width) * height);
    std::vector<std::pair<int, int>> edges;
    auto id = [width](int x, int y) { return y * width + x; };
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) {
            positions.push_back({x * spacing, y * spacing});
            if (x + 1 < width) edges.emplace_back(id(x, y), id(x + 1, y));
            if (y + 1 < height) edges.emplace_back(id(x, y), id(x, y + 1));
        }
    return make_graph(std::move(positions), std::move(edges));
}

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    bool join(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[a] = b;
        return true;
    }
};

}  // namespace

RoadmapGraph random_spanning_tree(const RoadmapGraph& g, uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto order = g.edges;
    shuffle_vec(order, rng);
    UnionFind uf(g.vertex_count());
    std::vector<std::pair<int, int>> tree_edges;
    for (const auto& [u, v] : order)
        if (uf.join(u, v)) tree_edges.push_back({u, v});
    if (static_cast<int>(tree_edges.size()) != g.vertex_count() - 1)
        throw std::invalid_argument(
            "random_spanning_tree requires a connected graph");
    return make_graph(g.positions, std::move(tree_edges));
}

std::vector<RoadmapGraph> densify_series(const RoadmapGraph& g,
                                         const RoadmapGraph& tree, int steps,
                                         uint64_t seed) {
    if (steps < 1) throw std::invalid_argument("steps must be >= 1");
    if (tree.vertex_count() != g.vertex_count() ||
        tree.positions != g.positions)
        throw std::invalid_argument("tree is not on the same vertex set as g");
    std::set<std::pair<int, int>> g_edges(g.edges.begin(), g.edges.end());
    for (const auto& e : tree.edges)
        if (!g_edges.count(e))
            throw std::invalid_argument("tree is not a subgraph of g");

    std::vector<std::pair<int, int>> missing;
    std::set<std::pair<int, int>> tree_edges(tree.edges.begin(),
                                             tree.edges.end());
    for (const auto& e : g.edges)
        if (!tree_edges.count(e)) missing.push_back(e);

    std::mt19937_64 rng(seed);
    shuffle_vec(missing, rng);

    const int batch =
        missing.empty()
            ? 0
            : static_cast<int>((missing.size() + steps - 1) / steps);
    std::vector<RoadmapGraph> series;
    series.reserve(steps + 1);
    series.push_back(tree);
    std::vector<std::pair<int, int>> accumulated = tree.edges;
    size_t taken = 0;
    for (int i = 0; i < steps; ++i) {
        size_t take = std::min(static_cast<size_t>(batch),
                               missing.size() - taken);
        for (size_t j = 0; j < take; ++j)
            accumulated.push_back(missing[taken + j]);
        taken += take;
        series.push_back(make_graph(g.positions, accumulated));
    }
    return series;
}

namespace {

std::vector<int> random_subset(int universe, int k, std::mt19937_64& rng) {
    std::vector<int> ids(universe);
    std::iota(ids.begin(), ids.end(), 0);
    for (int i = 0; i < k; ++i) {
        int j = i + static_cast<int>(rng_below(rng, universe - i));
        std::swap(ids[i], ids[j]);
    }
    ids.resize(k);
    return ids;
}

}  // namespace

Assignment random_assignment(const RoadmapGraph& g, int k, uint64_t seed) {
    if (k < 0 || k > g.vertex_count())
        throw std::invalid_argument("agent count exceeds vertex count");
    std::mt19937_64 rng(seed);
    auto starts = random_subset(g.vertex_count(), k, rng);
    auto goals = random_subset(g.vertex_count(), k, rng);
    Assignment a;
    a.tasks.reserve(k);
    for (int i = 0; i < k; ++i) a.tasks.push_back({starts[i], goals[i]});
    return a;
}

namespace {

// Incremental builder for the swap-gadget maps. Positions live on an
// integer lattice so injectivity is a set lookup.
struct GadgetBuilder {
    std::vector<Point2> positions;
    std::vector<std::pair<int, int>> edges;
    std::vector<int> degree;
    std::set<std::pair<long, long>> occupied;
    std::vector<Task> tasks;

    int add_vertex(long x, long y) {
        occupied.insert({x, y});
        positions.push_back({static_cast<double>(x), static_cast<double>(y)});
        degree.push_back(0);
        return static_cast<int>(positions.size()) - 1;
    }

    void add_edge(int u, int v) {
        edges.emplace_back(u, v);
        ++degree[u];
        ++degree[v];
    }

    std::pair<long, long> cell(int v) const {
        return {static_cast<long>(positions[v].x),
                static_cast<long>(positions[v].y)};
    }

    // First free lattice cell around `base`, scanning rings of growing radius.
    std::pair<long, long> free_cell_near(int base) const {
        auto [bx, by] = cell(base);
        for (long r = 1;; ++r) {
            for (long dx = -r; dx <= r; ++dx)
                for (long dy = -r; dy <= r; ++dy) {
                    if (std::max(std::labs(dx), std::labs(dy)) != r) continue;
                    if (!occupied.count({bx + dx, by + dy}))
                        return {bx + dx, by + dy};
                }
        }
    }

    int attach_vertex(int base) {
        auto [x, y] = free_cell_near(base);
        int v = add_vertex(x, y);
        add_edge(base, v);
        return v;
    }

    std::vector<int> leaves() const {
        std::vector<int> out;
        for (int v = 0; v < static_cast<int>(degree.size()); ++v)
            if (degree[v] == 1) out.push_back(v);
        return out;
    }
};

}  // namespace

std::pair<RoadmapGraph, Assignment> generate_carp_hard(int target_agents,
                                                       uint64_t seed) {
    if (target_agents < 2 || target_agents % 2 != 0)
        throw std::invalid_argument("target_agents must be even and >= 2");

    std::mt19937_64 rng(seed);
    GadgetBuilder b;

    // Base gadget: path p1-p2-p3 with a branch vertex off p2. The two swap
    // agents are equidistant from the branch, the only vertex that lets them
    // pass each other.
    int p1 = b.add_vertex(0, 0);
    int p2 = b.add_vertex(1, 0);
    int p3 = b.add_vertex(2, 0);
    int branch = b.add_vertex(1, 1);
    b.add_edge(p1, p2);
    b.add_edge(p2, p3);
    b.add_edge(p2, branch);
    b.tasks.push_back({p1, p3});
    b.tasks.push_back({p3, p1});

    while (static_cast<int>(b.tasks.size()) < target_agents) {
        auto leaves = b.leaves();
        int anchor = leaves[rng_below(rng, leaves.size())];
        if (rng_below(rng, 2) == 0) {
            // Two fresh leaves on the anchor; their swap must pass through it.
            int a = b.attach_vertex(anchor);
            int c = b.attach_vertex(anchor);
            b.tasks.push_back({a, c});
            b.tasks.push_back({c, a});
        } else {
            // A fresh copy of the base gadget hanging off the anchor.
            int center = b.attach_vertex(anchor);
            int left = b.attach_vertex(center);
            int right = b.attach_vertex(center);
            b.attach_vertex(center);  // the avoidance branch
            b.tasks.push_back({left, right});
            b.tasks.push_back({right, left});
        }
    }

    RoadmapGraph g = make_graph(std::move(b.positions), std::move(b.edges));
    Assignment a{std::move(b.tasks)};
    validate_assignment(a, g);
    return {std::move(g), std::move(a)};
}

}  // namespace mapf
