#include "mapf/composite.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "mapf/rand.hpp"

namespace mapf {

bool collision_free(const CompositeConfig& c) {
    std::unordered_set<int> seen(c.begin(), c.end());
    return seen.size() == c.size();
}

double composite_delta(const CompositeConfig& a, const CompositeConfig& b,
                       const RoadmapGraph& g) {
    if (a.size() != b.size())
        throw std::invalid_argument("configurations have different agent counts");
    double sum = 0.0;
    for (size_t i = 0; i < a.size(); ++i)
        sum += distance(g.positions[a[i]], g.positions[b[i]]);
    return sum;
}

double composite_delta_to_points(const CompositeConfig& a,
                                 const std::vector<Point2>& points,
                                 const RoadmapGraph& g) {
    if (a.size() != points.size())
        throw std::invalid_argument("config and point tuple sizes differ");
    double sum = 0.0;
    for (size_t i = 0; i < a.size(); ++i)
        sum += distance(g.positions[a[i]], points[i]);
    return sum;
}

bool is_valid_move(const CompositeConfig& from, const CompositeConfig& to,
                   const RoadmapGraph& g) {
    if (from.size() != to.size()) return false;
    const size_t k = from.size();
    std::unordered_set<int> targets;
    targets.reserve(k * 2);
    for (size_t i = 0; i < k; ++i) {
        if (to[i] != from[i] && !g.has_edge(from[i], to[i])) return false;
        if (!targets.insert(to[i]).second) return false;
    }
    std::unordered_map<int, size_t> at;
    at.reserve(k * 2);
    for (size_t i = 0; i < k; ++i) at.emplace(from[i], i);
    for (size_t i = 0; i < k; ++i) {
        if (to[i] == from[i]) continue;
        auto it = at.find(to[i]);
        if (it != at.end() && it->second != i && to[it->second] == from[i])
            return false;  // head-on swap along one edge
    }
    return true;
}

double move_angle(const Point2& at, const Point2& target, const Point2& next) {
    const double tx = target.x - at.x, ty = target.y - at.y;
    const double len_t = std::hypot(tx, ty);
    if (len_t <= kCoincidentEps) return std::numbers::pi;
    const double nx = next.x - at.x, ny = next.y - at.y;
    const double len_n = std::hypot(nx, ny);
    double cosv = (tx * nx + ty * ny) / (len_t * len_n);
    cosv = std::clamp(cosv, -1.0, 1.0);
    return std::acos(cosv);
}

std::optional<CompositeConfig> oracle_step_ordered(
    const CompositeConfig& v, const std::vector<Point2>& targets,
    const RoadmapGraph& g, std::span<const int> order,
    std::vector<int>* collision_list) {
    const size_t k = v.size();
    if (targets.size() != k)
        throw std::invalid_argument("one target point required per agent");
    if (order.size() != k)
        throw std::invalid_argument("order must be a permutation of agents");

    // Agents that have not acted yet hold their current vertex.
    std::unordered_set<int> holds(v.begin(), v.end());
    std::unordered_set<int> committed_targets;
    std::unordered_set<uint64_t> committed_moves;  // (from<<32 | to)
    auto move_key = [](int from, int to) {
        return (static_cast<uint64_t>(static_cast<uint32_t>(from)) << 32) |
               static_cast<uint32_t>(to);
    };

    CompositeConfig result(k, -1);
    for (int agent : order) {
        const int at = v[agent];
        holds.erase(at);

        double best_score = 0.0;
        bool best_is_wait = false;
        int best_target = -1;
        auto consider = [&](double score, bool is_wait, int target) {
            if (best_target < 0 || score < best_score ||
                (score == best_score &&
                 std::pair(is_wait, target) < std::pair(best_is_wait, best_target))) {
                best_score = score;
                best_is_wait = is_wait;
                best_target = target;
            }
        };

        for (int next : g.neighbors(at)) {
            bool blocked = committed_targets.count(next) || holds.count(next) ||
                           committed_moves.count(move_key(next, at));
            if (blocked) {
                if (collision_list) collision_list->push_back(next);
                continue;
            }
            consider(move_angle(g.positions[at], targets[agent],
                                g.positions[next]),
                     false, next);
        }
        if (!committed_targets.count(at)) {
            double score =
                distance(targets[agent], g.positions[at]) <= kCoincidentEps
                    ? 0.0
                    : std::numbers::pi;
            consider(score, true, at);
        } else if (collision_list) {
            collision_list->push_back(at);
        }

        if (best_target < 0) return std::nullopt;
        result[agent] = best_target;
        committed_targets.insert(best_target);
        if (best_target != at) committed_moves.insert(move_key(at, best_target));
    }
    return result;
}

std::optional<CompositeConfig> direction_oracle(
    const CompositeConfig& v, const std::vector<Point2>& targets,
    const RoadmapGraph& g, std::mt19937_64& rng, int retries) {
    std::vector<int> order(v.size());
    for (size_t i = 0; i < v.size(); ++i) order[i] = static_cast<int>(i);
    for (int attempt = 0; attempt < std::max(1, retries); ++attempt) {
        shuffle_vec(order, rng);
        if (auto step = oracle_step_ordered(v, targets, g, order)) return step;
    }
    return std::nullopt;
}

}  // namespace mapf
