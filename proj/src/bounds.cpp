#include "uwfq/bounds.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>

#include "uwfq/errors.hpp"
#include "uwfq/fluid_oracle.hpp"
#include "uwfq/schedulers.hpp"
#include "uwfq/sim_engine.hpp"

namespace uwfq {

bool BoundReport::passed(double tol) const
{
	return max_sim_minus_two_level <= bound + tol && max_two_level_minus_ujf <= tol &&
	       max_sim_minus_ujf <= bound + tol;
}

BoundReport check_bounds(const Workload& workload, const ExecutionTrace& trace, int resources)
{
	const FluidSchedule two_level = two_level_virtual_fluid(workload, resources);
	const FluidSchedule fair = ujf_fluid(workload, resources);

	BoundReport report;
	report.resources = resources;
	for (const auto& r : trace.task_records)
		report.l_max = std::max(report.l_max, r.end_time - r.start_time);
	for (const auto& job : workload.jobs)
		report.big_l_max = std::max(report.big_l_max, job_slot_time(job));
	report.bound = report.big_l_max / resources + 2.0 * report.l_max;

	report.max_sim_minus_two_level = -std::numeric_limits<double>::infinity();
	report.max_two_level_minus_ujf = -std::numeric_limits<double>::infinity();
	report.max_sim_minus_ujf = -std::numeric_limits<double>::infinity();
	for (const auto& job : workload.jobs) {
		const auto span = trace.job_spans.find(job.job_id);
		if (span == trace.job_spans.end())
			throw IncompleteJob("job '" + job.job_id + "' missing from trace");
		BoundRow row{job.job_id, span->second.end_time, two_level.finish_times.at(job.job_id),
		             fair.finish_times.at(job.job_id)};
		report.max_sim_minus_two_level =
			std::max(report.max_sim_minus_two_level, row.sim_finish - row.two_level_finish);
		report.max_two_level_minus_ujf =
			std::max(report.max_two_level_minus_ujf, row.two_level_finish - row.ujf_finish);
		report.max_sim_minus_ujf = std::max(report.max_sim_minus_ujf, row.sim_finish - row.ujf_finish);
		report.rows.push_back(std::move(row));
	}
	if (report.rows.empty()) {
		report.max_sim_minus_two_level = 0.0;
		report.max_two_level_minus_ujf = 0.0;
		report.max_sim_minus_ujf = 0.0;
	}
	return report;
}

BoundReport check_uwfq_bounds(const Workload& workload, const PartitionerConfig& partitioner,
                              const Cluster& cluster)
{
	UwfqPolicy policy(cluster.total_cores, 2.0, workload.user_weight);
	const ExecutionTrace trace = run(workload, policy, partitioner, cluster);
	return check_bounds(workload, trace, cluster.total_cores);
}

void verify_bounds(const BoundReport& report, double tol)
{
	char buf[256];
	for (const auto& row : report.rows) {
		const double sim = row.sim_finish - row.two_level_finish - report.bound;
		const double fluid = row.two_level_finish - row.ujf_finish;
		const double composed = row.sim_finish - row.ujf_finish - report.bound;
		if (sim > tol) {
			std::snprintf(buf, sizeof buf, "job '%s' ends %.9f s past its 2-level fluid bound",
			              row.job_id.c_str(), sim);
			throw BoundViolation(buf);
		}
		if (fluid > tol) {
			std::snprintf(buf, sizeof buf, "job '%s' 2-level fluid finish is %.9f s after its fair finish",
			              row.job_id.c_str(), fluid);
			throw BoundViolation(buf);
		}
		if (composed > tol) {
			std::snprintf(buf, sizeof buf, "job '%s' ends %.9f s past its fair fluid bound",
			              row.job_id.c_str(), composed);
			throw BoundViolation(buf);
		}
	}
}

} // namespace uwfq
