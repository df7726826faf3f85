#include "laprl/cube.hpp"

#include <deque>

#include "laprl/error.hpp"

namespace laprl {
namespace {

struct Vec3 {
  int x, y, z;
  bool operator==(const Vec3&) const = default;
};

// Sticker table: cubelet position and outward face normal per sticker index.
// Faces: U=0..3, L=4..7, F=8..11, R=12..15, B=16..19, D=20..23, each row-major
// as seen from outside the face. Axes: x toward R, y toward U, z toward F.
struct StickerGeom {
  Vec3 pos, normal;
};

constexpr StickerGeom kStickers[24] = {
    // U (normal +y), image up = back
    {{-1, 1, -1}, {0, 1, 0}},  {{1, 1, -1}, {0, 1, 0}},
    {{-1, 1, 1}, {0, 1, 0}},   {{1, 1, 1}, {0, 1, 0}},
    // L (normal -x), viewed from the left
    {{-1, 1, -1}, {-1, 0, 0}}, {{-1, 1, 1}, {-1, 0, 0}},
    {{-1, -1, -1}, {-1, 0, 0}},{{-1, -1, 1}, {-1, 0, 0}},
    // F (normal +z)
    {{-1, 1, 1}, {0, 0, 1}},   {{1, 1, 1}, {0, 0, 1}},
    {{-1, -1, 1}, {0, 0, 1}},  {{1, -1, 1}, {0, 0, 1}},
    // R (normal +x), viewed from the right
    {{1, 1, 1}, {1, 0, 0}},    {{1, 1, -1}, {1, 0, 0}},
    {{1, -1, 1}, {1, 0, 0}},   {{1, -1, -1}, {1, 0, 0}},
    // B (normal -z), viewed from the back
    {{1, 1, -1}, {0, 0, -1}},  {{-1, 1, -1}, {0, 0, -1}},
    {{1, -1, -1}, {0, 0, -1}}, {{-1, -1, -1}, {0, 0, -1}},
    // D (normal -y), image up = front
    {{-1, -1, 1}, {0, -1, 0}}, {{1, -1, 1}, {0, -1, 0}},
    {{-1, -1, -1}, {0, -1, 0}},{{1, -1, -1}, {0, -1, 0}},
};

int sticker_index(const Vec3& pos, const Vec3& normal) {
  for (int i = 0; i < 24; ++i)
    if (kStickers[i].pos == pos && kStickers[i].normal == normal) return i;
  throw InternalError("cube geometry: sticker not found");
}

// Clockwise quarter-turn rotations (viewed from outside the turned face).
Vec3 rot_u(const Vec3& v) { return {-v.z, v.y, v.x}; }
Vec3 rot_r(const Vec3& v) { return {v.x, v.z, -v.y}; }
Vec3 rot_f(const Vec3& v) { return {v.y, -v.x, v.z}; }

// perm[i] = destination index of the sticker currently at i.
using Perm = std::array<int, 24>;

Perm quarter_perm(int face) {
  Perm p{};
  for (int i = 0; i < 24; ++i) {
    const auto& s = kStickers[i];
    bool in_layer = (face == 0 && s.pos.y == 1) || (face == 1 && s.pos.x == 1) ||
                    (face == 2 && s.pos.z == 1);
    if (!in_layer) {
      p[i] = i;
      continue;
    }
    auto rot = face == 0 ? rot_u : (face == 1 ? rot_r : rot_f);
    p[i] = sticker_index(rot(s.pos), rot(s.normal));
  }
  return p;
}

Perm compose(const Perm& a, const Perm& b) {
  // apply a, then b
  Perm c{};
  for (int i = 0; i < 24; ++i) c[i] = b[a[i]];
  return c;
}

// Moves: face*3 + twist, face in {U, R, F}, twist in {CW, CCW, half}.
const std::array<Perm, 9>& move_perms() {
  static const std::array<Perm, 9> perms = [] {
    std::array<Perm, 9> out{};
    for (int face = 0; face < 3; ++face) {
      Perm cw = quarter_perm(face);
      Perm half = compose(cw, cw);
      Perm ccw = compose(half, cw);
      out[face * 3 + 0] = cw;
      out[face * 3 + 1] = ccw;
      out[face * 3 + 2] = half;
    }
    return out;
  }();
  return perms;
}

std::uint64_t pack(const CubeEnv::Stickers& s) {
  // 24 colors in [0,6) fit into 3 bits each.
  std::uint64_t key = 0;
  for (int i = 0; i < 24; ++i) key |= static_cast<std::uint64_t>(s[i]) << (3 * i);
  return key;
}

}  // namespace

CubeEnv::Stickers CubeEnv::solved_state() {
  Stickers s{};
  for (int i = 0; i < 24; ++i) s[i] = static_cast<std::uint8_t>(i / 4);
  return s;
}

CubeEnv::Stickers CubeEnv::apply_move(const Stickers& s, int move) {
  if (move < 0 || move >= 9) throw UsageError("bad cube move");
  const Perm& p = move_perms()[move];
  Stickers out{};
  for (int i = 0; i < 24; ++i) out[p[i]] = s[i];
  return out;
}

int CubeEnv::inverse_move(int move) {
  int face = move / 3, twist = move % 3;
  return face * 3 + (twist == 2 ? 2 : 1 - twist);
}

CubeEnv::CubeEnv(int max_depth) : max_depth_(max_depth) {
  // BFS from solved; ids are contiguous in discovery order.
  Stickers solved = solved_state();
  states_.push_back(solved);
  depths_.push_back(0);
  index_[pack(solved)] = 0;
  std::deque<int> frontier{0};
  while (!frontier.empty()) {
    int id = frontier.front();
    frontier.pop_front();
    if (depths_[id] == max_depth_) continue;
    for (int m = 0; m < 9; ++m) {
      Stickers next = apply_move(states_[id], m);
      auto key = pack(next);
      if (!index_.count(key)) {
        index_[key] = static_cast<int>(states_.size());
        states_.push_back(next);
        depths_.push_back(depths_[id] + 1);
        frontier.push_back(index_[key]);
      }
    }
  }
  skeleton_.resize(states_.size());
  for (int id = 0; id < static_cast<int>(states_.size()); ++id) {
    for (int m = 0; m < 9; ++m) {
      auto it = index_.find(pack(apply_move(states_[id], m)));
      // moves leaving the restricted set are no-ops
      skeleton_[id][m] = it == index_.end() ? id : it->second;
    }
  }
  for (int id = 0; id < static_cast<int>(states_.size()); ++id) {
    if (depths_[id] == max_depth_) {
      start_id_ = id;
      break;
    }
  }
  if (start_id_ < 0) throw InternalError("cube: no state at requested scramble depth");
}

Eigen::VectorXd CubeEnv::encode(const Stickers& s) const {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(feature_dim());
  for (int i = 0; i < 24; ++i) v[i * 6 + s[i]] = 1.0;
  return v;
}

EnvState CubeEnv::reset() {
  cur_id_ = start_id_;
  episode_steps_ = 0;
  done_ = false;
  return state(cur_id_);
}

StepOutcome CubeEnv::step(int action, RngStream& rng) {
  if (done_) throw UsageError("step() after episode end");
  if (action < 0 || action >= 9) throw UsageError("bad action index");
  int executed = action;
  bool overwritten = rng.uniform() < kActionOverwriteProb;
  if (overwritten) executed = rng.uniform_int(9);
  cur_id_ = skeleton_[cur_id_][executed];
  ++episode_steps_;
  ++global_steps_;

  StepOutcome out;
  out.executed_action = executed;
  out.overwritten = overwritten;
  out.next_state = state(cur_id_);
  bool goal = cur_id_ == solved_id();
  out.reward = goal ? 1.0 : 0.0;
  out.truncated = !goal && episode_steps_ >= kEpisodeCap;
  out.episode_end = goal || out.truncated;
  done_ = out.episode_end;
  return out;
}

std::vector<EnvState> CubeEnv::enumerate_states() const {
  std::vector<EnvState> all;
  all.reserve(states_.size());
  for (int id = 0; id < num_states(); ++id) all.push_back(state(id));
  return all;
}

EnvState CubeEnv::state(int tabular_id) const {
  if (tabular_id < 0 || tabular_id >= num_states()) throw UsageError("bad tabular_id");
  return {tabular_id, encode(states_[tabular_id])};
}

int CubeEnv::skeleton_next(int tabular_id, int action) const {
  return skeleton_[tabular_id][action];
}

}  // namespace laprl
