#pragma once

#include <map>
#include <ostream>
#include <vector>

#include "uwfq/core_model.hpp"

namespace uwfq {

// Interval during which a job received service at a constant rate.
struct FluidSegment {
	JobId job_id;
	double start = 0.0;
	double end = 0.0;
	double rate = 0.0;
};

struct FluidSchedule {
	std::map<JobId, double> finish_times;
	std::vector<FluidSegment> segments;

	// Integrated service of one job over all its segments.
	double service_of(const JobId& job) const;
	double total_service() const;
};

// Idealized user-job fairness: every active user gets R/N_u, split evenly over
// that user's active jobs. Jobs are fully divisible; stage chains collapse
// into the job's slot time.
FluidSchedule ujf_fluid(const Workload& workload, int resources);

// Same user shares as ujf_fluid, but each user pours its whole share into one
// job at a time, in the order its jobs would finish under user-level fair
// sharing. A newly arrived job that ranks earlier preempts the current one.
FluidSchedule two_level_virtual_fluid(const Workload& workload, int resources);

// Time-stepped integration of the user-job fair rates with step `dt` (steps
// also break at arrivals). Finish times are rounded up to the end of the step
// in which the job completes. Test-only cross-check for ujf_fluid.
FluidSchedule brute_force_fluid(const Workload& workload, int resources, double dt);

// finish.csv: job_id,finish_time
void write_finish_csv(const FluidSchedule& schedule, std::ostream& os);

} // namespace uwfq
