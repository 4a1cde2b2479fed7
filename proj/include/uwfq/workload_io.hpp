#pragma once

#include <string>

#include "uwfq/core_model.hpp"

namespace uwfq {

// JSON workload file:
//
//   {
//     "users": [ { "id": "alice", "weight": 1.0, "class": "infrequent" } ],
//     "jobs": [
//       { "id": "j1", "user": "alice", "arrival": 0.0,
//         "stages": [ { "units": [2.0, 2.0] },
//                     { "units": [1.0], "estimated_runtime": 1.5 } ] }
//     ]
//   }
//
// "users" is optional (weight defaults to 1, class to "default"); so is
// "estimated_runtime" (defaults to the sum of the stage's units).
// Stage ids are generated as "<job id>/s<index>".
Workload parse_workload_json(const std::string& text);
Workload load_workload_file(const std::string& path);
std::string workload_to_json(const Workload& workload);

} // namespace uwfq
