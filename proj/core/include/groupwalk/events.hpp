#pragma once

#include <vector>

#include "groupwalk/spectral.hpp"
#include "groupwalk/tracking.hpp"

namespace groupwalk {

inline constexpr std::size_t kMinGroupSize = 3;

struct Group {
  int label = 0;
  std::vector<TrackId> members;  // ascending
};

struct GroupEvent {
  FrameIndex frame = 0;
  bool active = false;
  std::vector<Group> groups;  // every cluster with >= kMinGroupSize members, by label
};

GroupEvent detect_group_event(FrameIndex frame, const std::vector<TrackId>& ids,
                              const std::vector<int>& labels);

inline GroupEvent detect_group_event(FrameIndex frame, const FrameClustering& c) {
  return detect_group_event(frame, c.ids, c.labels);
}

}  // namespace groupwalk
