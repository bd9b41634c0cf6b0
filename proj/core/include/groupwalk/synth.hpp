#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "groupwalk/eval.hpp"
#include "groupwalk/tracking.hpp"

namespace groupwalk {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

// Members are laid out in a row along x, `spacing` pixels apart.
struct GroupSpec {
  int members = 1;
  Vec2 spawn;
  Vec2 velocity;  // px/frame, shared by all members
  double spacing = 30.0;
};

struct SingletonSpec {
  Vec2 spawn;
  Vec2 velocity;
};

// Consecutive members of the split group, in layout order.
struct SplitPart {
  int members = 1;
  Vec2 velocity;
};

struct SplitSpec {
  FrameIndex frame = 0;
  std::size_t group = 0;
  std::vector<SplitPart> parts;
};

struct ScenarioSpec {
  std::vector<GroupSpec> groups;
  std::vector<SingletonSpec> singletons;
  int frames = 100;
  double obs_noise = 0.0;  // sigma on x, y; w and h get a tenth of it
  double size_base = 20.0; // box width; height is twice this
  // Per-frame multiplicative factor on box size and image-plane motion,
  // compounding from frame 0, with the vanishing point at the image origin.
  std::optional<double> depth_scale;
  std::optional<SplitSpec> split_at;
  std::uint64_t seed = 0;

  // Throws ContractViolation on counts < 1, frames < 1, negative noise or a
  // split whose parts do not add up to the group size.
  void validate() const;
};

struct TruthRecord {
  FrameIndex frame = 0;
  TrackId id = 0;
  std::int64_t group = 0;
};

// Frame t of the scenario lives at index t of both vectors; records within a
// frame are in ascending id order.
struct Scenario {
  std::vector<std::vector<Detection>> detections;
  std::vector<std::vector<TruthRecord>> truth;
};

Scenario generate(const ScenarioSpec& spec);

// Ground-truth labels of one frame in ascending id order.
Partition truth_partition(const std::vector<TruthRecord>& frame);

// Named presets used by the CLI, tests and benchmarks:
//   "three-groups"  groups of 3 and 2 plus a singleton, noiseless
//   "p5-split"      a group of six splitting into 1 + 2 + 3 mid-sequence, sigma = 1
//   "arena-split"   a group of three among two walkers, splitting into singletons
ScenarioSpec preset_scenario(const std::string& name, std::uint64_t seed = 0);
std::vector<std::string> preset_names();

}  // namespace groupwalk
