#ifndef MAPF_SAMPLING_HPP
#define MAPF_SAMPLING_HPP

#include <limits>
#include <random>
#include <vector>

#include "mapf/roadmap.hpp"

namespace mapf {

inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();

// Geodesic distances (sums of Euclidean edge lengths) from one source.
struct DistanceField {
    int source = -1;
    std::vector<double> dist;  // kUnreachable marks disconnected vertices
};

DistanceField shortest_distances(const RoadmapGraph& g, int source);

// Vertices q with dist(s,q) + dist(q,t) <= dist(s,t) + slack. Sampling is
// restricted to these per-agent corridors.
struct CorridorSet {
    std::vector<int> vertices;  // sorted
    double slack = 0.0;
};

// Throws std::runtime_error when t is unreachable from s.
CorridorSet corridor(const RoadmapGraph& g, int s, int t, double delta);
CorridorSet corridor_from_fields(const DistanceField& from_start,
                                 const DistanceField& from_goal, double delta);

// One point per agent: the position of a uniformly drawn corridor vertex.
// Draws are independent across agents; duplicates across agents are fine,
// the sample only steers the direction oracle.
std::vector<Point2> sample_target(const std::vector<CorridorSet>& corridors,
                                  const RoadmapGraph& g, std::mt19937_64& rng);

}  // namespace mapf

#endif
