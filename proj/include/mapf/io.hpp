#ifndef MAPF_IO_HPP
#define MAPF_IO_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "mapf/roadmap.hpp"

namespace mapf {

// Map file: `graph <V> <E>`, then `v <id> <x> <y>` per vertex, then
// `e <u> <v>` per edge. Assignment file: `tasks <k>`, then `t <start> <goal>`.
// Plan CSV: header `step,agent,vertex`, rows timestep-major, agent-minor.

void write_map(std::ostream& out, const RoadmapGraph& g);
RoadmapGraph read_map(std::istream& in);

void write_tasks(std::ostream& out, const Assignment& a);
Assignment read_tasks(std::istream& in);

void write_plan_csv(std::ostream& out,
                    const std::vector<std::vector<int>>& path);
std::vector<std::vector<int>> read_plan_csv(std::istream& in);

RoadmapGraph load_map(const std::string& path);
Assignment load_tasks(const std::string& path);
std::vector<std::vector<int>> load_plan_csv(const std::string& path);
void save_file(const std::string& path, const std::string& contents);

}  // namespace mapf

#endif
