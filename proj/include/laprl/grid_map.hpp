#pragma once

#include <optional>
#include <string>
#include <vector>

namespace laprl {

// ASCII gridworld map: '#' wall, '.' floor, 'S' start, 'G' goal.
// One character per cell, newline-separated rows.
struct GridMap {
  int width = 0;
  int height = 0;
  std::vector<char> cells;  // row-major, height*width
  int start_x = -1, start_y = -1;
  std::vector<std::pair<int, int>> goals;  // (x, y)
  std::string name;

  static GridMap parse(const std::string& text, const std::string& name);
  static GridMap load(const std::string& path);

  char at(int x, int y) const { return cells[static_cast<size_t>(y) * width + x]; }
  bool wall(int x, int y) const {
    if (x < 0 || y < 0 || x >= width || y >= height) return true;
    return at(x, y) == '#';
  }
  bool is_goal(int x, int y) const;
  int open_cell_count() const;

  // Throws ConfigError if start/goals sit on walls or some open cell is
  // unreachable from the start under 4-neighbor moves.
  void validate() const;
};

}  // namespace laprl
