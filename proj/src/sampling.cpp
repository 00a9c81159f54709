#include "mapf/sampling.hpp"

#include <queue>
#include <stdexcept>
#include <string>

#include "mapf/rand.hpp"

namespace mapf {

namespace {

// Absorbs rounding noise when comparing sums of edge lengths taken along
// different paths.
constexpr double kDistEps = 1e-9;

}  // namespace

DistanceField shortest_distances(const RoadmapGraph& g, int source) {
    if (!g.has_vertex(source))
        throw std::invalid_argument("source vertex out of range");
    DistanceField field;
    field.source = source;
    field.dist.assign(g.vertex_count(), kUnreachable);
    field.dist[source] = 0.0;

    using Entry = std::pair<double, int>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
    open.push({0.0, source});
    while (!open.empty()) {
        auto [d, v] = open.top();
        open.pop();
        if (d > field.dist[v]) continue;
        for (int w : g.neighbors(v)) {
            double nd = d + g.edge_length(v, w);
            if (nd < field.dist[w]) {
                field.dist[w] = nd;
                open.push({nd, w});
            }
        }
    }
    return field;
}

CorridorSet corridor_from_fields(const DistanceField& from_start,
                                 const DistanceField& from_goal,
                                 double delta) {
    if (delta < 0.0) throw std::invalid_argument("corridor slack must be >= 0");
    if (from_start.dist.size() != from_goal.dist.size())
        throw std::invalid_argument("distance fields disagree on vertex count");
    double base = from_start.dist[from_goal.source];
    if (base == kUnreachable)
        throw std::runtime_error(
            "goal " + std::to_string(from_goal.source) +
            " is unreachable from start " + std::to_string(from_start.source));
    CorridorSet c;
    c.slack = delta;
    for (size_t q = 0; q < from_start.dist.size(); ++q) {
        double detour = from_start.dist[q] + from_goal.dist[q];
        if (detour <= base + delta + kDistEps)
            c.vertices.push_back(static_cast<int>(q));
    }
    return c;
}

CorridorSet corridor(const RoadmapGraph& g, int s, int t, double delta) {
    return corridor_from_fields(shortest_distances(g, s),
                                shortest_distances(g, t), delta);
}

std::vector<Point2> sample_target(const std::vector<CorridorSet>& corridors,
                                  const RoadmapGraph& g,
                                  std::mt19937_64& rng) {
    std::vector<Point2> points;
    points.reserve(corridors.size());
    for (const CorridorSet& c : corridors) {
        if (c.vertices.empty())
            throw std::invalid_argument("empty corridor");
        int v = c.vertices[rng_below(rng, c.vertices.size())];
        points.push_back(g.positions[v]);
    }
    return points;
}

}  // namespace mapf
