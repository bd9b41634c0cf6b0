#include "groupwalk/events.hpp"

#include <algorithm>
#include <map>

#include "groupwalk/error.hpp"

namespace groupwalk {

GroupEvent detect_group_event(FrameIndex frame, const std::vector<TrackId>& ids,
                              const std::vector<int>& labels) {
  if (ids.size() != labels.size()) {
    throw ContractViolation("detect_group_event: ids and labels differ in length");
  }
  std::map<int, std::vector<TrackId>> clusters;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    clusters[labels[i]].push_back(ids[i]);
  }
  GroupEvent ev;
  ev.frame = frame;
  for (auto& [label, members] : clusters) {
    if (members.size() >= kMinGroupSize) {
      std::sort(members.begin(), members.end());
      ev.groups.push_back({label, std::move(members)});
    }
  }
  ev.active = !ev.groups.empty();
  return ev;
}

}  // namespace groupwalk
