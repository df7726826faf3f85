#include <string>
#include <unordered_map>

#include "laprl/environment.hpp"
#include "laprl/error.hpp"

namespace laprl {

// Mirrors the editable files under maps/; the binary falls back to these when
// no map directory is configured.
const std::string& builtin_map_text(const std::string& name) {
  static const std::unordered_map<std::string, std::string> maps = {
      {"nine_rooms", R"MAP(###################
#.....#.....#.....#
#.S...#.....#.....#
#.................#
#.....#.....#.....#
#.....#.....#.....#
###.#####.#####.###
#.....#.....#.....#
#.....#.....#.....#
#.................#
#.....#.....#.....#
#.....#.....#.....#
###.#####.#####.###
#.....#.....#.....#
#.....#.....#.....#
#.................#
#.G...#.....#.....#
#.....#.....#.....#
###################
)MAP"},
      {"nine_rooms_after_goal", R"MAP(###################
#.....#.....#.....#
#.....#.....#...G.#
#.................#
#.....#.....#.....#
#.....#.....#.....#
###.#####.#####.###
#.....#.....#.....#
#.....#.....#.....#
#.................#
#.....#.....#.....#
#.....#.....#.....#
###.#####.#####.###
#.....#.....#.....#
#.....#.....#.....#
#.................#
#.....#.....#...S.#
#.....#.....#.....#
###################
)MAP"},
      {"nine_rooms_after_topology", R"MAP(###################
#.....#.....#.....#
#.....#.....#...G.#
#.................#
#.....#.....#.....#
#.....#.....#.....#
###.###########.###
#.....#.....#.....#
#.....#.....#.....#
#...........#.....#
#.....#.....#.....#
#.....#.....#.....#
###.#####.#####.###
#.....#.....#.....#
#.....#.....#.....#
#.....#.....#.....#
#.....#.....#...S.#
#.....#.....#.....#
###################
)MAP"},
      {"maze", R"MAP(#############
#G..........#
###########.#
#...........#
#.###########
#...........#
###########.#
#.....S.....#
#.###########
#...........#
###########.#
#G..........#
#############
)MAP"},
      {"two_rooms", R"MAP(############
#S....#....#
#..........#
#.....#....#
#.....#....#
############
)MAP"},
  };
  auto it = maps.find(name);
  if (it == maps.end()) throw ConfigError("unknown map: " + name);
  return it->second;
}

}  // namespace laprl
