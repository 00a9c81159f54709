#ifndef MAPF_ROADMAP_HPP
#define MAPF_ROADMAP_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "mapf/geom.hpp"

namespace mapf {

// Undirected roadmap with a planar embedding. Vertex ids are dense 0..V-1,
// edges are stored canonically (u < v, sorted), adjacency lists are sorted.
struct RoadmapGraph {
    std::vector<Point2> positions;
    std::vector<std::pair<int, int>> edges;
    std::vector<std::vector<int>> adjacency;

    int vertex_count() const { return static_cast<int>(positions.size()); }
    int edge_count() const { return static_cast<int>(edges.size()); }
    bool has_vertex(int v) const { return v >= 0 && v < vertex_count(); }
    bool has_edge(int u, int v) const;
    const std::vector<int>& neighbors(int v) const { return adjacency[v]; }
    double edge_length(int u, int v) const {
        return distance(positions[u], positions[v]);
    }
    double max_edge_length() const;
};

// Validates invariants (dense ids, no self loops or duplicates, finite and
// pairwise distinct positions) and builds adjacency. Throws std::invalid_argument.
RoadmapGraph make_graph(std::vector<Point2> positions,
                        std::vector<std::pair<int, int>> edges);

bool is_connected(const RoadmapGraph& g);

// Longest shortest path measured in edge hops (over reachable pairs).
int diameter_hops(const RoadmapGraph& g);

struct Task {
    int start = 0;
    int goal = 0;
};

struct Assignment {
    std::vector<Task> tasks;
    int agent_count() const { return static_cast<int>(tasks.size()); }
};

// Starts pairwise distinct, goals pairwise distinct, all vertices valid.
void validate_assignment(const Assignment& a, const RoadmapGraph& g);

// 4-connected lattice, width*height vertices at spacing-scaled positions.
RoadmapGraph build_grid(int width, int height, double spacing);

// Spanning tree via randomized Kruskal over a seeded edge permutation.
RoadmapGraph random_spanning_tree(const RoadmapGraph& g, uint64_t seed);

// steps+1 graphs from `tree` to `g`; each adds a seeded uniform batch of
// ceil(missing/steps) edges without replacement. Edge sets are nested.
std::vector<RoadmapGraph> densify_series(const RoadmapGraph& g,
                                         const RoadmapGraph& tree, int steps,
                                         uint64_t seed);

// k tasks; starts are a uniform k-subset of V, goals an independent one.
Assignment random_assignment(const RoadmapGraph& g, int k, uint64_t seed);

// Map/assignment family that defeats sequential prioritized planning: every
// task is a swap pair forced through a single equidistant avoidance vertex.
// target_agents must be even and >= 2.
std::pair<RoadmapGraph, Assignment> generate_carp_hard(int target_agents,
                                                       uint64_t seed);

}  // namespace mapf

#endif
