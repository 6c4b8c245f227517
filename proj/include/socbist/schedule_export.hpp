// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>

#include "socbist/core_model.hpp"
#include "socbist/power_groups.hpp"
#include "socbist/scheduler.hpp"

namespace socbist {

// {"nodes":[{"index","kind","active":[{"core","mode"}],"duration_us",
//   "releases":[{"core","mode"}]}],"total_time_us"}
std::string schedule_to_json(const ScheduleGraph& graph);
// Throws Error(Syntax) on schema violations.
ScheduleGraph schedule_from_json(std::string_view text);

// One line per node, then the total.
std::string schedule_to_text(const ScheduleGraph& graph);

// Gantt chart: one row per core, BIST and External bars in different
// colours, time axis in microseconds.
std::string schedule_to_svg(const ScheduleGraph& graph, const SocSpec& soc);

// [[1,2],[1,3,5],...]
std::string groups_to_json(const GroupCatalog& catalog);

}  // namespace socbist
