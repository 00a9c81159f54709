#include "mapf/carp.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <queue>
#include <stdexcept>

#include "mapf/rand.hpp"
#include "mapf/sampling.hpp"

namespace mapf {

bool ReservationTable::vertex_blocked(int v, int t, int agent) const {
    auto timed = vertex_owner.find(vkey(v, t));
    if (timed != vertex_owner.end() && timed->second != agent) return true;
    auto held = parked.find(v);
    return held != parked.end() && held->second.agent != agent &&
           held->second.from_time <= t;
}

bool ReservationTable::swap_blocked(int from, int to, int depart_t,
                                    int agent) const {
    auto it = edge_owner.find(ekey(to, from, depart_t));
    return it != edge_owner.end() && it->second != agent;
}

bool ReservationTable::parking_blocked(int v, int arrive_t, int agent) const {
    auto held = parked.find(v);
    if (held != parked.end() && held->second.agent != agent) return true;
    auto last = last_timed.find(v);
    if (last == last_timed.end()) return false;
    if (last->second < arrive_t) return false;
    // Some timed reservation at or after arrival; ignore it only if every
    // such reservation is the agent's own (they never are while planning).
    for (int t = arrive_t; t <= last->second; ++t) {
        auto timed = vertex_owner.find(vkey(v, t));
        if (timed != vertex_owner.end() && timed->second != agent) return true;
    }
    return false;
}

void ReservationTable::reserve_path(const TimedPath& path, int agent) {
    for (size_t t = 0; t < path.vertices.size(); ++t) {
        int v = path.vertices[t];
        vertex_owner[vkey(v, static_cast<int>(t))] = agent;
        auto [it, inserted] = last_timed.emplace(v, static_cast<int>(t));
        if (!inserted) it->second = std::max(it->second, static_cast<int>(t));
        last_event = std::max(last_event, static_cast<int>(t));
        if (t + 1 < path.vertices.size() && path.vertices[t + 1] != v)
            edge_owner[ekey(v, path.vertices[t + 1], static_cast<int>(t))] =
                agent;
    }
}

void ReservationTable::park(int v, int from_time, int agent) {
    parked[v] = {agent, from_time};
    last_event = std::max(last_event, from_time);
}

const GoalHeuristics& HeuristicCache::get(int goal) {
    auto it = cache_.find(goal);
    if (it != cache_.end()) return it->second;

    GoalHeuristics h;
    const int n = g_->vertex_count();
    h.hops.assign(n, -1);
    h.hops[goal] = 0;
    std::deque<int> queue{goal};
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        for (int w : g_->neighbors(v))
            if (h.hops[w] < 0) {
                h.hops[w] = h.hops[v] + 1;
                queue.push_back(w);
            }
    }
    h.geo = shortest_distances(*g_, goal).dist;
    return cache_.emplace(goal, std::move(h)).first->second;
}

namespace {

struct StateRec {
    int vertex = -1;
    int time = 0;
    double dist = 0.0;
    uint64_t parent = 0;
    bool closed = false;
};

struct OpenEntry {
    int f_time;
    double f_dist;
    int time;
    int vertex;
    uint64_t key;
    double dist;

    bool operator>(const OpenEntry& o) const {
        if (f_time != o.f_time) return f_time > o.f_time;
        if (f_dist != o.f_dist) return f_dist > o.f_dist;
        if (time != o.time) return time > o.time;
        return vertex > o.vertex;
    }
};

}  // namespace

std::optional<TimedPath> plan_single(const RoadmapGraph& g, int start,
                                     int goal, const ReservationTable& table,
                                     int horizon, HeuristicCache& heur,
                                     PlanFailure* why) {
    auto fail = [&](PlanFailure reason) -> std::optional<TimedPath> {
        if (why) *why = reason;
        return std::nullopt;
    };
    if (why) *why = PlanFailure::None;
    if (!g.has_vertex(start) || !g.has_vertex(goal))
        throw std::invalid_argument("start or goal out of range");

    const GoalHeuristics& h = heur.get(goal);
    if (h.hops[start] < 0) return fail(PlanFailure::HorizonExhausted);
    auto held = table.parked.find(goal);
    if (held != table.parked.end()) return fail(PlanFailure::GoalBlocked);

    // Past static_from the reservation landscape is frozen, so states can
    // collapse onto the vertex alone and waiting buys nothing.
    const int t_static = table.static_from();
    auto key_of = [&](int v, int t) {
        return ReservationTable::vkey(v, std::min(t, t_static));
    };

    std::unordered_map<uint64_t, StateRec> states;
    std::priority_queue<OpenEntry, std::vector<OpenEntry>, std::greater<>> open;

    const uint64_t start_key = key_of(start, 0);
    states[start_key] = {start, 0, 0.0, start_key, false};
    open.push({h.hops[start], h.geo[start], 0, start, start_key, 0.0});

    const int planning_agent = -2;  // never collides with a real agent id

    while (!open.empty()) {
        OpenEntry e = open.top();
        open.pop();
        {
            StateRec& rec = states.at(e.key);
            if (rec.closed || e.time != rec.time || e.dist != rec.dist)
                continue;
            rec.closed = true;
        }
        const int cur_vertex = e.vertex;
        const int cur_time = e.time;
        const double cur_dist = e.dist;

        if (cur_vertex == goal &&
            !table.parking_blocked(goal, cur_time, planning_agent)) {
            TimedPath path;
            path.vertices.resize(cur_time + 1);
            uint64_t cur = e.key;
            for (int t = cur_time; t >= 0; --t) {
                path.vertices[t] = states.at(cur).vertex;
                cur = states.at(cur).parent;
            }
            return path;
        }

        const int nt = cur_time + 1;
        if (nt > horizon) continue;
        auto relax = [&](int w, double step_len) {
            if (h.hops[w] < 0) return;
            uint64_t k = key_of(w, nt);
            double nd = cur_dist + step_len;
            auto [it, inserted] = states.try_emplace(k);
            StateRec& s = it->second;
            if (!inserted) {
                if (s.closed) return;
                if (std::pair(nt, nd) >= std::pair(s.time, s.dist)) return;
            }
            s = {w, nt, nd, e.key, false};
            open.push({nt + h.hops[w], nd + h.geo[w], nt, w, k, nd});
        };

        for (int w : g.neighbors(cur_vertex)) {
            if (table.vertex_blocked(w, nt, planning_agent)) continue;
            if (table.swap_blocked(cur_vertex, w, cur_time, planning_agent))
                continue;
            relax(w, g.edge_length(cur_vertex, w));
        }
        if (nt < t_static && !table.vertex_blocked(cur_vertex, nt, planning_agent))
            relax(cur_vertex, 0.0);
    }
    return fail(PlanFailure::HorizonExhausted);
}

PlanAllResult plan_all(const RoadmapGraph& g, const Assignment& a,
                       const std::vector<int>& order, int horizon,
                       HeuristicCache& heur) {
    const int k = a.agent_count();
    if (static_cast<int>(order.size()) != k)
        throw std::invalid_argument("order must cover every agent");

    // Agents plan one by one against the reservations committed so far; a
    // later agent standing in an earlier path's way is forced by its own
    // search to vacate in time, so the joint plan stays conflict-free.
    ReservationTable table;
    std::vector<TimedPath> paths(k);
    for (int agent : order) {
        PlanFailure why = PlanFailure::None;
        auto path = plan_single(g, a.tasks[agent].start, a.tasks[agent].goal,
                                table, horizon, heur, &why);
        if (!path) return {std::nullopt, {agent, why}};
        table.reserve_path(*path, agent);
        table.park(a.tasks[agent].goal, path->arrival(), agent);
        paths[agent] = std::move(*path);
    }
    return {std::move(paths), {}};
}

CarpResult plan_with_retries(const RoadmapGraph& g, const Assignment& a,
                             int attempts, int horizon, uint64_t seed,
                             HeuristicCache& heur) {
    if (attempts < 1) throw std::invalid_argument("attempts must be >= 1");
    CarpResult result;
    std::vector<int> order(a.agent_count());
    for (int i = 0; i < a.agent_count(); ++i) order[i] = i;
    for (int attempt = 0; attempt < attempts; ++attempt) {
        std::mt19937_64 rng(mix_seed(seed, attempt));
        shuffle_vec(order, rng);
        auto r = plan_all(g, a, order, horizon, heur);
        result.attempts_used = attempt + 1;
        if (r.paths) {
            result.paths = std::move(r.paths);
            return result;
        }
        result.attempt_failures.push_back(r.failure);
    }
    return result;
}

int default_horizon(const RoadmapGraph& g, int agent_count) {
    return 4 * (g.vertex_count() + agent_count);
}

std::vector<CompositeConfig> synchronize(const std::vector<TimedPath>& paths) {
    int makespan = 0;
    for (const TimedPath& p : paths) makespan = std::max(makespan, p.arrival());
    std::vector<CompositeConfig> configs;
    configs.reserve(makespan + 1);
    for (int t = 0; t <= makespan; ++t) {
        CompositeConfig c(paths.size());
        for (size_t i = 0; i < paths.size(); ++i)
            c[i] = paths[i].vertices[std::min(t, paths[i].arrival())];
        if (configs.empty() || configs.back() != c) configs.push_back(std::move(c));
    }
    return configs;
}

std::optional<std::vector<CompositeConfig>> local_connect(
    const CompositeConfig& from, const CompositeConfig& to,
    const RoadmapGraph& g, int horizon, uint64_t seed, HeuristicCache& heur) {
    if (from.size() != to.size())
        throw std::invalid_argument("configurations have different agent counts");
    if (from == to) return std::vector<CompositeConfig>{};
    if (is_valid_move(from, to, g)) return std::vector<CompositeConfig>{};

    Assignment a;
    a.tasks.reserve(from.size());
    for (size_t i = 0; i < from.size(); ++i)
        a.tasks.push_back({from[i], to[i]});

    auto carp = plan_with_retries(g, a, kConnectorAttempts, horizon, seed, heur);
    if (!carp.paths) return std::nullopt;

    auto chain = synchronize(*carp.paths);
    assert(chain.front() == from && chain.back() == to);
    chain.erase(chain.begin());
    chain.pop_back();
    return chain;
}

}  // namespace mapf
