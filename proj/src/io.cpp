#include "mapf/io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace mapf {

namespace {

std::string fmt_coord(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

[[noreturn]] void bad_format(const std::string& what) {
    throw std::runtime_error("malformed input: " + what);
}

}  // namespace

void write_map(std::ostream& out, const RoadmapGraph& g) {
    out << "graph " << g.vertex_count() << ' ' << g.edge_count() << '\n';
    for (int v = 0; v < g.vertex_count(); ++v)
        out << "v " << v << ' ' << fmt_coord(g.positions[v].x) << ' '
            << fmt_coord(g.positions[v].y) << '\n';
    for (const auto& [u, v] : g.edges) out << "e " << u << ' ' << v << '\n';
}

RoadmapGraph read_map(std::istream& in) {
    std::string tag;
    int nv = 0, ne = 0;
    if (!(in >> tag >> nv >> ne) || tag != "graph")
        bad_format("expected `graph <V> <E>` header");
    if (nv < 0 || ne < 0) bad_format("negative count in map header");
    std::vector<Point2> positions(nv);
    std::vector<char> seen(nv, 0);
    for (int i = 0; i < nv; ++i) {
        int id;
        double x, y;
        if (!(in >> tag >> id >> x >> y) || tag != "v")
            bad_format("expected `v <id> <x> <y>`");
        if (id < 0 || id >= nv || seen[id]) bad_format("bad vertex id");
        seen[id] = 1;
        positions[id] = {x, y};
    }
    std::vector<std::pair<int, int>> edges(ne);
    for (int i = 0; i < ne; ++i) {
        int u, v;
        if (!(in >> tag >> u >> v) || tag != "e")
            bad_format("expected `e <u> <v>`");
        edges[i] = {u, v};
    }
    return make_graph(std::move(positions), std::move(edges));
}

void write_tasks(std::ostream& out, const Assignment& a) {
    out << "tasks " << a.agent_count() << '\n';
    for (const Task& t : a.tasks)
        out << "t " << t.start << ' ' << t.goal << '\n';
}

Assignment read_tasks(std::istream& in) {
    std::string tag;
    int k = 0;
    if (!(in >> tag >> k) || tag != "tasks")
        bad_format("expected `tasks <k>` header");
    if (k < 0) bad_format("negative task count");
    Assignment a;
    a.tasks.resize(k);
    for (int i = 0; i < k; ++i) {
        if (!(in >> tag >> a.tasks[i].start >> a.tasks[i].goal) || tag != "t")
            bad_format("expected `t <start> <goal>`");
    }
    return a;
}

void write_plan_csv(std::ostream& out,
                    const std::vector<std::vector<int>>& path) {
    out << "step,agent,vertex\n";
    for (size_t step = 0; step < path.size(); ++step)
        for (size_t agent = 0; agent < path[step].size(); ++agent)
            out << step << ',' << agent << ',' << path[step][agent] << '\n';
}

std::vector<std::vector<int>> read_plan_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "step,agent,vertex")
        bad_format("expected plan CSV header `step,agent,vertex`");
    std::vector<std::vector<int>> path;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        int step, agent, vertex;
        char c1, c2;
        if (!(row >> step >> c1 >> agent >> c2 >> vertex) || c1 != ',' ||
            c2 != ',')
            bad_format("bad plan CSV row: " + line);
        if (step < 0 || agent < 0) bad_format("negative step or agent");
        if (static_cast<size_t>(step) >= path.size()) {
            if (static_cast<size_t>(step) != path.size() || agent != 0)
                bad_format("plan CSV rows must be step-major, agent-minor");
            path.emplace_back();
        }
        if (static_cast<size_t>(agent) != path[step].size())
            bad_format("plan CSV rows must be step-major, agent-minor");
        path[step].push_back(vertex);
    }
    for (size_t i = 1; i < path.size(); ++i)
        if (path[i].size() != path[0].size())
            bad_format("plan CSV steps have differing agent counts");
    return path;
}

namespace {

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return in;
}

}  // namespace

RoadmapGraph load_map(const std::string& path) {
    auto in = open_input(path);
    return read_map(in);
}

Assignment load_tasks(const std::string& path) {
    auto in = open_input(path);
    return read_tasks(in);
}

std::vector<std::vector<int>> load_plan_csv(const std::string& path) {
    auto in = open_input(path);
    return read_plan_csv(in);
}

void save_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << contents;
}

}  // namespace mapf
