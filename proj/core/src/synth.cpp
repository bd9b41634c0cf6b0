#include "groupwalk/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "groupwalk/error.hpp"

namespace groupwalk {

namespace {

struct Walker {
  TrackId id = 0;
  Vec2 position;  // unscaled world-plane position
  Vec2 velocity;
  std::int64_t group = 0;
};

}  // namespace

void ScenarioSpec::validate() const {
  if (frames < 1) {
    throw ContractViolation("scenario needs at least one frame");
  }
  if (!(obs_noise >= 0.0)) {
    throw ContractViolation("scenario observation noise must be >= 0");
  }
  if (!(size_base > 0.0)) {
    throw ContractViolation("scenario box size must be > 0");
  }
  if (depth_scale && !(*depth_scale > 0.0)) {
    throw ContractViolation("scenario depth scale must be > 0");
  }
  if (groups.empty() && singletons.empty()) {
    throw ContractViolation("scenario has no walkers");
  }
  for (const GroupSpec& g : groups) {
    if (g.members < 1) {
      throw ContractViolation("scenario group needs at least one member");
    }
  }
  if (split_at) {
    if (split_at->group >= groups.size()) {
      throw ContractViolation("split refers to a group that does not exist");
    }
    int total = 0;
    for (const SplitPart& p : split_at->parts) {
      if (p.members < 1) {
        throw ContractViolation("split part needs at least one member");
      }
      total += p.members;
    }
    if (total != groups[split_at->group].members) {
      throw ContractViolation("split parts do not add up to the group size");
    }
  }
}

Scenario generate(const ScenarioSpec& spec) {
  spec.validate();

  std::vector<Walker> walkers;
  std::int64_t next_label = 1;
  TrackId next_id = 1;
  std::vector<std::vector<std::size_t>> group_walkers(spec.groups.size());
  for (std::size_t g = 0; g < spec.groups.size(); ++g) {
    const GroupSpec& gs = spec.groups[g];
    const std::int64_t label = next_label++;
    for (int k = 0; k < gs.members; ++k) {
      group_walkers[g].push_back(walkers.size());
      walkers.push_back({next_id++, {gs.spawn.x + k * gs.spacing, gs.spawn.y}, gs.velocity, label});
    }
  }
  for (const SingletonSpec& s : spec.singletons) {
    walkers.push_back({next_id++, s.spawn, s.velocity, next_label++});
  }

  std::mt19937_64 gen(spec.seed);
  std::normal_distribution<double> unit(0.0, 1.0);

  Scenario out;
  out.detections.resize(static_cast<std::size_t>(spec.frames));
  out.truth.resize(static_cast<std::size_t>(spec.frames));
  for (int t = 0; t < spec.frames; ++t) {
    if (spec.split_at && spec.split_at->frame == t) {
      const auto& members = group_walkers[spec.split_at->group];
      std::size_t cursor = 0;
      for (const SplitPart& part : spec.split_at->parts) {
        const std::int64_t label = next_label++;
        for (int k = 0; k < part.members; ++k) {
          Walker& w = walkers[members[cursor++]];
          w.velocity = part.velocity;
          w.group = label;
        }
      }
    }

    const double scale = spec.depth_scale ? std::pow(*spec.depth_scale, t) : 1.0;
    auto& dets = out.detections[static_cast<std::size_t>(t)];
    auto& truth = out.truth[static_cast<std::size_t>(t)];
    for (const Walker& w : walkers) {
      Detection d;
      d.frame = t;
      d.id = w.id;
      d.x = w.position.x * scale;
      d.y = w.position.y * scale;
      d.w = spec.size_base * scale;
      d.h = 2.0 * spec.size_base * scale;
      if (spec.obs_noise > 0.0) {
        d.x += spec.obs_noise * unit(gen);
        d.y += spec.obs_noise * unit(gen);
        d.w = std::max(1.0, d.w + 0.1 * spec.obs_noise * scale * unit(gen));
        d.h = std::max(1.0, d.h + 0.1 * spec.obs_noise * scale * unit(gen));
      }
      dets.push_back(d);
      truth.push_back({t, w.id, w.group});
    }

    // World-plane steps are constant, so image-plane speed shrinks with scale.
    for (Walker& w : walkers) {
      w.position.x += w.velocity.x;
      w.position.y += w.velocity.y;
    }
  }
  return out;
}

Partition truth_partition(const std::vector<TruthRecord>& frame) {
  std::vector<TruthRecord> sorted = frame;
  std::sort(sorted.begin(), sorted.end(),
            [](const TruthRecord& l, const TruthRecord& r) { return l.id < r.id; });
  Partition p;
  p.reserve(sorted.size());
  for (const TruthRecord& r : sorted) {
    p.push_back(r.group);
  }
  return p;
}

ScenarioSpec preset_scenario(const std::string& name, std::uint64_t seed) {
  ScenarioSpec s;
  s.seed = seed;
  if (name == "three-groups") {
    s.frames = 100;
    s.groups = {
        {3, {100.0, 100.0}, {3.0, 1.0}, 30.0},
        {2, {100.0, 500.0}, {2.0, -1.0}, 30.0},
    };
    s.singletons = {{{800.0, 300.0}, {-1.0, 2.0}}};
    return s;
  }
  if (name == "p5-split") {
    s.frames = 160;
    s.obs_noise = 1.0;
    s.groups = {{6, {100.0, 300.0}, {3.0, 0.0}, 30.0}};
    s.split_at = SplitSpec{60, 0, {{1, {3.0, -4.0}}, {2, {3.0, 4.0}}, {3, {5.0, 0.0}}}};
    return s;
  }
  if (name == "arena-split") {
    s.frames = 160;
    s.obs_noise = 1.0;
    s.groups = {{3, {150.0, 300.0}, {2.5, 0.0}, 30.0}};
    s.singletons = {{{100.0, 800.0}, {2.0, 0.0}}, {{1200.0, 50.0}, {-1.0, 0.0}}};
    s.split_at = SplitSpec{70, 0, {{1, {2.5, -4.0}}, {1, {2.5, 4.0}}, {1, {6.0, 0.0}}}};
    return s;
  }
  throw ContractViolation("unknown scenario preset '" + name + "'");
}

std::vector<std::string> preset_names() { return {"three-groups", "p5-split", "arena-split"}; }

}  // namespace groupwalk
