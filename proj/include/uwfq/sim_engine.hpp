#pragma once

#include <cstdint>
#include <ostream>
#include <string>

#include "uwfq/core_model.hpp"
#include "uwfq/partitioning.hpp"
#include "uwfq/schedulers.hpp"

namespace uwfq {

struct RunOptions {
	std::uint64_t seed = 0;
	// Sigma of a log-normal factor applied to every stage's runtime
	// estimate; 0 keeps predictions exact.
	double estimation_error = 0.0;
	bool record_snapshots = false;
};

// Event-driven executor. At every arrival or task completion each free core
// takes the best-priority ready task; tasks never get preempted and a stage
// becomes ready only once its predecessor finished.
ExecutionTrace run(const Workload& workload, Policy& policy, const PartitionerConfig& partitioner,
                   const Cluster& cluster, const RunOptions& options = {});

// Response time of `job` when it has the whole cluster to itself.
double idle_runtime(const Job& job, const Cluster& cluster, const PartitionerConfig& partitioner);

// tasks.csv: job_id,user_id,stage_id,stage_index,core_id,start_time,end_time
void write_task_csv(const ExecutionTrace& trace, std::ostream& os);
// jobs.csv: job_id,user_id,submit_time,end_time,response_time
void write_job_csv(const ExecutionTrace& trace, std::ostream& os);

} // namespace uwfq
