#include "laprl/grid_map.hpp"

#include <deque>
#include <fstream>
#include <sstream>

#include "laprl/error.hpp"

namespace laprl {

GridMap GridMap::parse(const std::string& text, const std::string& name) {
  GridMap m;
  m.name = name;
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> rows;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty()) continue;
    rows.push_back(line);
  }
  if (rows.empty()) throw ConfigError("map '" + name + "' is empty");
  m.height = static_cast<int>(rows.size());
  m.width = static_cast<int>(rows[0].size());
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != m.width)
      throw ConfigError("map '" + name + "' has ragged rows");
  }
  m.cells.resize(static_cast<size_t>(m.width) * m.height);
  for (int y = 0; y < m.height; ++y) {
    for (int x = 0; x < m.width; ++x) {
      char c = rows[y][x];
      switch (c) {
        case '#':
        case '.':
          break;
        case 'S':
          m.start_x = x;
          m.start_y = y;
          break;
        case 'G':
          m.goals.emplace_back(x, y);
          break;
        default:
          throw ConfigError("map '" + name + "' has unknown cell '" + std::string(1, c) + "'");
      }
      m.cells[static_cast<size_t>(y) * m.width + x] = c;
    }
  }
  if (m.start_x < 0) throw ConfigError("map '" + name + "' has no start cell");
  m.validate();
  return m;
}

GridMap GridMap::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open map file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

bool GridMap::is_goal(int x, int y) const {
  for (const auto& [gx, gy] : goals)
    if (gx == x && gy == y) return true;
  return false;
}

int GridMap::open_cell_count() const {
  int n = 0;
  for (char c : cells)
    if (c != '#') ++n;
  return n;
}

void GridMap::validate() const {
  if (wall(start_x, start_y)) throw ConfigError("map '" + name + "': start is a wall");
  for (const auto& [gx, gy] : goals)
    if (wall(gx, gy)) throw ConfigError("map '" + name + "': goal is a wall");

  // Every open cell must be reachable from the start.
  std::vector<char> seen(cells.size(), 0);
  std::deque<std::pair<int, int>> frontier{{start_x, start_y}};
  seen[static_cast<size_t>(start_y) * width + start_x] = 1;
  int reached = 0;
  const int dx[4] = {0, 0, -1, 1};
  const int dy[4] = {-1, 1, 0, 0};
  while (!frontier.empty()) {
    auto [x, y] = frontier.front();
    frontier.pop_front();
    ++reached;
    for (int k = 0; k < 4; ++k) {
      int nx = x + dx[k], ny = y + dy[k];
      if (wall(nx, ny)) continue;
      size_t idx = static_cast<size_t>(ny) * width + nx;
      if (!seen[idx]) {
        seen[idx] = 1;
        frontier.emplace_back(nx, ny);
      }
    }
  }
  if (reached != open_cell_count())
    throw ConfigError("map '" + name + "': " + std::to_string(open_cell_count() - reached) +
                      " open cells unreachable from start");
}

}  // namespace laprl
