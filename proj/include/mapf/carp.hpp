#ifndef MAPF_CARP_HPP
#define MAPF_CARP_HPP

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "mapf/composite.hpp"
#include "mapf/roadmap.hpp"

namespace mapf {

// One agent's route: vertex per timestep from 0 to arrival, then the agent
// parks on the goal forever.
struct TimedPath {
    std::vector<int> vertices;
    int arrival() const { return static_cast<int>(vertices.size()) - 1; }
};

// Time-indexed vertex and directed-edge occupancies committed by already
// planned agents, plus permanent holds for agents parked at their goals.
// This is the complement of a free-time-window graph for unit timesteps.
struct ReservationTable {
    struct Permanent {
        int agent = -1;
        int from_time = 0;
    };

    std::unordered_map<uint64_t, int> vertex_owner;  // (v, t) -> agent
    std::unordered_map<uint64_t, int> edge_owner;    // (u -> v, t) -> agent
    std::unordered_map<int, Permanent> parked;       // v -> hold
    std::unordered_map<int, int> last_timed;         // v -> latest timed t
    int last_event = -1;  // latest timed reservation or permanent start

    static uint64_t vkey(int v, int t) {
        return (static_cast<uint64_t>(static_cast<uint32_t>(v)) << 32) |
               static_cast<uint32_t>(t);
    }
    static uint64_t ekey(int u, int v, int t) {
        return (static_cast<uint64_t>(static_cast<uint32_t>(u)) << 42) ^
               (static_cast<uint64_t>(static_cast<uint32_t>(v)) << 21) ^
               static_cast<uint32_t>(t);
    }

    bool vertex_blocked(int v, int t, int agent) const;
    // True when an opposing traversal of (from, to) departs at the same step.
    bool swap_blocked(int from, int to, int depart_t, int agent) const;
    // Parking on v from arrive_t onward: blocked by any other agent's
    // reservation at or after arrive_t.
    bool parking_blocked(int v, int arrive_t, int agent) const;

    void reserve_path(const TimedPath& path, int agent);
    void park(int v, int from_time, int agent);

    // First timestep from which the reservation landscape never changes.
    int static_from() const { return last_event + 1; }
};

enum class PlanFailure { None, GoalBlocked, HorizonExhausted };

// Per-goal lower bounds reused across searches on one graph: hop counts
// bound arrival time, geodesic distances order equal-arrival paths.
struct GoalHeuristics {
    std::vector<int> hops;     // -1 = unreachable
    std::vector<double> geo;   // kUnreachable = unreachable
};

class HeuristicCache {
   public:
    explicit HeuristicCache(const RoadmapGraph& g) : g_(&g) {}
    const GoalHeuristics& get(int goal);

   private:
    const RoadmapGraph* g_;
    std::unordered_map<int, GoalHeuristics> cache_;
};

// Earliest-arrival timed path (ties broken by geodesic distance traveled)
// that respects the table. Arrival additionally requires that no other agent
// ever reserves the goal at or after the arrival step, since the agent parks
// there. Fails when no admissible path exists within `horizon` steps.
std::optional<TimedPath> plan_single(const RoadmapGraph& g, int start,
                                     int goal, const ReservationTable& table,
                                     int horizon, HeuristicCache& heur,
                                     PlanFailure* why = nullptr);

struct PlanAllFailure {
    int agent = -1;
    PlanFailure reason = PlanFailure::None;
};

struct PlanAllResult {
    std::optional<std::vector<TimedPath>> paths;
    PlanAllFailure failure;
};

// Sequential prioritized planning in the given order: each agent plans
// around the reservations and goal holds committed by the agents before it.
// Fails on the first agent that cannot plan.
PlanAllResult plan_all(const RoadmapGraph& g, const Assignment& a,
                       const std::vector<int>& order, int horizon,
                       HeuristicCache& heur);

struct CarpResult {
    std::optional<std::vector<TimedPath>> paths;
    int attempts_used = 0;
    std::vector<PlanAllFailure> attempt_failures;
};

// Repeats plan_all with a freshly seeded shuffle of the agent order per
// attempt; returns the first success.
CarpResult plan_with_retries(const RoadmapGraph& g, const Assignment& a,
                             int attempts, int horizon, uint64_t seed,
                             HeuristicCache& heur);

int default_horizon(const RoadmapGraph& g, int agent_count);  // 4 * (V + k)

// Per-timestep composite configurations of a joint plan; agents that arrive
// early hold their goals. Consecutive all-wait duplicates are dropped.
std::vector<CompositeConfig> synchronize(const std::vector<TimedPath>& paths);

inline constexpr int kConnectorAttempts = 3;

// CARP as a local connector: plans from -> to with a small attempt budget
// and returns the configurations strictly between the endpoints (empty when
// the endpoints are equal or direct composite neighbors).
std::optional<std::vector<CompositeConfig>> local_connect(
    const CompositeConfig& from, const CompositeConfig& to,
    const RoadmapGraph& g, int horizon, uint64_t seed, HeuristicCache& heur);

}  // namespace mapf

#endif
