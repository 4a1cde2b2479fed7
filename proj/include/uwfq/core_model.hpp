#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace uwfq {

using JobId = std::string;
using UserId = std::string;

// Absolute tolerance for every time comparison in the simulator.
inline constexpr double kTimeEps = 1e-9;

// Atomic piece of work: seconds on a single core.
struct WorkUnit {
	double duration = 0.0;
};

struct Stage {
	std::string stage_id;
	std::vector<WorkUnit> work_units;
	std::size_t index_in_job = 0;
	// Sum of unit durations unless a prediction error was injected.
	double estimated_runtime = 0.0;

	double total_work() const;
};

// A linear chain of stages owned by one user.
struct Job {
	JobId job_id;
	UserId user_id;
	double arrival_time = 0.0;
	std::vector<Stage> stages;

	double estimated_slot_time() const;
};

struct Cluster {
	int total_cores = 32;
};

struct TaskRecord {
	JobId job_id;
	UserId user_id;
	std::string stage_id;
	std::size_t stage_index = 0;
	double start_time = 0.0;
	double end_time = 0.0;
	int core_id = 0;
};

struct JobSpan {
	UserId user_id;
	double submit_time = 0.0;
	double end_time = 0.0;
};

// Free-core and ready-task counts right after a dispatch point.
struct DispatchSnapshot {
	double time = 0.0;
	int free_cores = 0;
	std::size_t ready_tasks = 0;
};

struct ExecutionTrace {
	std::vector<TaskRecord> task_records;
	std::map<JobId, JobSpan> job_spans;
	std::vector<DispatchSnapshot> snapshots;
};

// A validated, arrival-sorted set of jobs plus per-user metadata.
struct Workload {
	std::vector<Job> jobs;
	std::map<UserId, double> user_weight;
	std::map<UserId, std::string> user_class;

	double weight_of(const UserId& user) const;
	std::string class_of(const UserId& user) const;
};

// Total single-core time of all the job's work units (L).
double job_slot_time(const Job& job);

// Builds a stage whose estimate equals its true work.
Stage make_stage(std::string stage_id, std::size_t index, std::vector<double> durations);

// Sorts by arrival (stable on ties) and rejects malformed input.
Workload validate_workload(Workload workload, const Cluster& cluster);
Workload validate_workload(std::vector<Job> jobs, const Cluster& cluster);

} // namespace uwfq
