#pragma once

#include "hrc/geometry.hpp"

namespace hrc {

// A forceful operation: the wrench the human exerts on the object through
// the tool, and where the tooltip sits on the object.
// `wrench_object` uses object-frame axes with its moment taken about the
// tooltip, i.e. a pure drilling torque shows up as a moment here while a
// cutting force carries zero moment.
struct Operation {
  Wrench wrench_object;
  Pose tooltip_pose_object;

  // The same wrench with its moment re-expressed about the object origin.
  Wrench about_object_origin() const {
    return shift_wrench(wrench_object, tooltip_pose_object.translation);
  }
  bool is_valid() const {
    return wrench_object.force.allFinite() && wrench_object.moment.allFinite() &&
           tooltip_pose_object.is_valid();
  }
};

}  // namespace hrc
