#ifndef MAPF_COMPOSITE_HPP
#define MAPF_COMPOSITE_HPP

#include <cstddef>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "mapf/roadmap.hpp"

namespace mapf {

// One vertex per agent; entries pairwise distinct (collision-free placement).
using CompositeConfig = std::vector<int>;

struct ConfigHash {
    size_t operator()(const CompositeConfig& c) const {
        uint64_t h = 0xcbf29ce484222325ULL;
        for (int v : c) {
            h ^= static_cast<uint64_t>(static_cast<uint32_t>(v));
            h *= 0x100000001b3ULL;
        }
        return static_cast<size_t>(h);
    }
};

bool collision_free(const CompositeConfig& c);

// Sum over agents of the Euclidean distance between their two placements.
double composite_delta(const CompositeConfig& a, const CompositeConfig& b,
                       const RoadmapGraph& g);
// Same metric against a free point tuple (a sample).
double composite_delta_to_points(const CompositeConfig& a,
                                 const std::vector<Point2>& points,
                                 const RoadmapGraph& g);

// Simultaneous-move validity: each agent waits or crosses an edge, no two
// agents share a target vertex, no pair swaps along an edge. Following a
// departing agent is legal.
bool is_valid_move(const CompositeConfig& from, const CompositeConfig& to,
                   const RoadmapGraph& g);

// Sample points closer than this to an agent's own position count as "here";
// the agent then prefers to wait.
inline constexpr double kCoincidentEps = 1e-9;

// Angle at `at` between the ray toward `target` and the ray toward `next`.
// Degenerate target rays (target on `at`) score pi, so any real move beats
// chasing a sample that sits on the agent.
double move_angle(const Point2& at, const Point2& target, const Point2& next);

// One pass of the direction oracle with a fixed agent order. Per agent the
// candidates are all graph neighbors plus wait; the feasible candidate with
// the smallest angle toward the agent's sample point wins (wait scores 0 when
// the sample sits on the agent, pi otherwise, and loses ties to moves;
// remaining ties go to the lowest vertex id). A candidate is infeasible when
// its vertex is targeted by an earlier-processed agent, still occupied by a
// later-processed one, or when the move would swap with a committed move.
// Infeasible candidates land in `collision_list` when provided. Returns
// nullopt only if some agent has no feasible candidate.
std::optional<CompositeConfig> oracle_step_ordered(
    const CompositeConfig& v, const std::vector<Point2>& targets,
    const RoadmapGraph& g, std::span<const int> order,
    std::vector<int>* collision_list = nullptr);

// The oracle of the expansion step: seeded random agent order, retrying with
// a fresh order up to `retries` times if some agent gets stuck.
std::optional<CompositeConfig> direction_oracle(
    const CompositeConfig& v, const std::vector<Point2>& targets,
    const RoadmapGraph& g, std::mt19937_64& rng, int retries = 3);

}  // namespace mapf

#endif
