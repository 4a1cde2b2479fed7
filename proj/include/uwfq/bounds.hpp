#pragma once

#include <vector>

#include "uwfq/core_model.hpp"
#include "uwfq/partitioning.hpp"

namespace uwfq {

struct BoundRow {
	JobId job_id;
	// Simulated end, 2-level fluid finish, user-job fair fluid finish.
	double sim_finish = 0.0;
	double two_level_finish = 0.0;
	double ujf_finish = 0.0;
};

struct BoundReport {
	std::vector<BoundRow> rows;
	double l_max = 0.0;
	double big_l_max = 0.0;
	int resources = 0;
	// L_max/R + 2*l_max
	double bound = 0.0;
	double max_sim_minus_two_level = 0.0;
	double max_two_level_minus_ujf = 0.0;
	double max_sim_minus_ujf = 0.0;

	bool passed(double tol = 1e-6) const;
};

// Compares a simulated trace against both fluid schedules of its workload.
// l_max is the longest task that actually ran in the trace.
BoundReport check_bounds(const Workload& workload, const ExecutionTrace& trace, int resources);

// Runs uwfq on the workload and checks the result.
BoundReport check_uwfq_bounds(const Workload& workload, const PartitionerConfig& partitioner,
                              const Cluster& cluster);

// Throws BoundViolation naming the worst job if any bound is exceeded.
void verify_bounds(const BoundReport& report, double tol = 1e-6);

} // namespace uwfq
