#include "uwfq/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "uwfq/errors.hpp"

namespace uwfq {

double Stage::total_work() const
{
	double sum = 0.0;
	for (const auto& unit : work_units)
		sum += unit.duration;
	return sum;
}

double Job::estimated_slot_time() const
{
	double sum = 0.0;
	for (const auto& stage : stages)
		sum += stage.estimated_runtime;
	return sum;
}

double Workload::weight_of(const UserId& user) const
{
	auto it = user_weight.find(user);
	return it == user_weight.end() ? 1.0 : it->second;
}

std::string Workload::class_of(const UserId& user) const
{
	auto it = user_class.find(user);
	return it == user_class.end() ? std::string("default") : it->second;
}

double job_slot_time(const Job& job)
{
	double sum = 0.0;
	for (const auto& stage : job.stages)
		sum += stage.total_work();
	return sum;
}

Stage make_stage(std::string stage_id, std::size_t index, std::vector<double> durations)
{
	Stage stage;
	stage.stage_id = std::move(stage_id);
	stage.index_in_job = index;
	stage.work_units.reserve(durations.size());
	for (double d : durations)
		stage.work_units.push_back(WorkUnit{d});
	stage.estimated_runtime = stage.total_work();
	return stage;
}

Workload validate_workload(std::vector<Job> jobs, const Cluster& cluster)
{
	Workload w;
	w.jobs = std::move(jobs);
	return validate_workload(std::move(w), cluster);
}

Workload validate_workload(Workload workload, const Cluster& cluster)
{
	if (cluster.total_cores < 1)
		throw ValidationError("cluster: total_cores must be >= 1");

	std::set<JobId> seen;
	for (const auto& job : workload.jobs) {
		const std::string where = "job '" + job.job_id + "'";
		if (job.job_id.empty())
			throw ValidationError("job with empty job_id");
		if (!seen.insert(job.job_id).second)
			throw ValidationError(where + ": duplicate job_id");
		if (job.user_id.empty())
			throw ValidationError(where + ": empty user_id");
		if (!std::isfinite(job.arrival_time) || job.arrival_time < 0.0)
			throw ValidationError(where + ": arrival_time must be >= 0");
		if (job.stages.empty())
			throw ValidationError(where + ": no stages");
		for (std::size_t s = 0; s < job.stages.size(); ++s) {
			const auto& stage = job.stages[s];
			const std::string swhere = where + " stage " + std::to_string(s);
			if (stage.index_in_job != s)
				throw ValidationError(swhere + ": index_in_job out of order");
			if (stage.work_units.empty())
				throw ValidationError(swhere + ": no work units");
			for (const auto& unit : stage.work_units)
				if (!std::isfinite(unit.duration) || unit.duration <= 0.0)
					throw ValidationError(swhere + ": work unit duration must be > 0");
			if (!std::isfinite(stage.estimated_runtime) || stage.estimated_runtime <= 0.0)
				throw ValidationError(swhere + ": estimated_runtime must be > 0");
		}
	}
	for (const auto& [user, weight] : workload.user_weight)
		if (!(weight > 0.0))
			throw ValidationError("user '" + user + "': weight must be > 0");

	std::stable_sort(workload.jobs.begin(), workload.jobs.end(),
	                 [](const Job& a, const Job& b) { return a.arrival_time < b.arrival_time; });
	return workload;
}

} // namespace uwfq
