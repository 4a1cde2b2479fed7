#include "uwfq/sim_engine.hpp"

#include <algorithm>
#include <cstdio>
#include <queue>
#include <random>
#include <set>

#include "uwfq/errors.hpp"
#include "uwfq/schedulers.hpp"

namespace uwfq {

namespace {

struct JobRun {
	const Job* job = nullptr;
	std::size_t stage = 0;
	// Current stage's tasks, shortest first so the longest pops off the back.
	std::vector<double> pending;
	double pending_work = 0.0;
	int running = 0;
	bool done = false;
};

struct FinishEvent {
	double time;
	std::uint64_t seq;
	std::size_t job;
	int core;

	bool operator>(const FinishEvent& o) const
	{
		return time != o.time ? time > o.time : seq > o.seq;
	}
};

class Engine {
public:
	Engine(const Workload& workload, Policy& policy, const PartitionerConfig& partitioner,
	       const Cluster& cluster, const RunOptions& options)
	: policy_(policy), partitioner_(partitioner), cluster_(cluster), options_(options)
	{
		jobs_ = workload.jobs;
		if (options.estimation_error > 0.0) {
			std::mt19937_64 rng(options.seed);
			std::lognormal_distribution<double> noise(0.0, options.estimation_error);
			for (auto& job : jobs_)
				for (auto& stage : job.stages)
					stage.estimated_runtime *= noise(rng);
		}
		std::stable_sort(jobs_.begin(), jobs_.end(),
		                 [](const Job& a, const Job& b) { return a.arrival_time < b.arrival_time; });
		runs_.resize(jobs_.size());
		for (std::size_t i = 0; i < jobs_.size(); ++i)
			runs_[i].job = &jobs_[i];
		for (int c = 0; c < cluster.total_cores; ++c)
			free_cores_.insert(c);
	}

	ExecutionTrace execute()
	{
		std::size_t next_arrival = 0;
		while (next_arrival < jobs_.size() || !finishes_.empty()) {
			double t = finishes_.empty() ? jobs_[next_arrival].arrival_time : finishes_.top().time;
			if (next_arrival < jobs_.size())
				t = std::min(t, jobs_[next_arrival].arrival_time);
			const double horizon = t + kTimeEps;

			double now = t;
			std::vector<FinishEvent> done;
			while (!finishes_.empty() && finishes_.top().time <= horizon) {
				done.push_back(finishes_.top());
				now = std::max(now, finishes_.top().time);
				finishes_.pop();
			}
			std::vector<std::size_t> arrived;
			while (next_arrival < jobs_.size() && jobs_[next_arrival].arrival_time <= horizon) {
				arrived.push_back(next_arrival);
				now = std::max(now, jobs_[next_arrival].arrival_time);
				++next_arrival;
			}

			for (const auto& ev : done)
				complete_task(ev, now);
			for (std::size_t idx : arrived)
				arrive(idx, now);
			dispatch(now);
		}

		for (const auto& run : runs_)
			if (!run.done)
				throw Deadlock("job '" + run.job->job_id + "' never completed");
		return std::move(trace_);
	}

private:
	void arrive(std::size_t idx, double now)
	{
		const Job& job = jobs_[idx];
		user_first_arrival_.emplace(job.user_id, job.arrival_time);
		trace_.job_spans[job.job_id] = JobSpan{job.user_id, job.arrival_time, job.arrival_time};
		policy_.on_job_arrival(job, now);
		submit_stage(idx, 0, now);
	}

	void submit_stage(std::size_t idx, std::size_t stage, double now)
	{
		JobRun& run = runs_[idx];
		run.stage = stage;
		const Stage& s = run.job->stages[stage];
		const PartitionPlan plan = partition(s, partitioner_, cluster_.total_cores);
		run.pending.clear();
		run.pending_work = 0.0;
		for (std::size_t i = 0; i < plan.tasks.size(); ++i) {
			const double d = plan.task_duration(i) + partitioner_.task_overhead;
			run.pending.push_back(d);
			run.pending_work += d;
		}
		std::stable_sort(run.pending.begin(), run.pending.end());
		policy_.on_stage_submit(*run.job, stage, now);
		ready_.insert(idx);
	}

	void complete_task(const FinishEvent& ev, double now)
	{
		JobRun& run = runs_[ev.job];
		free_cores_.insert(ev.core);
		--run.running;
		--user_active_[run.job->user_id];
		if (run.running > 0 || !run.pending.empty())
			return;
		if (run.stage + 1 < run.job->stages.size()) {
			submit_stage(ev.job, run.stage + 1, now);
		} else {
			run.done = true;
			trace_.job_spans[run.job->job_id].end_time = ev.time;
		}
	}

	void dispatch(double now)
	{
		PolicyContext ctx;
		ctx.now = now;
		ctx.user_first_arrival = user_first_arrival_;
		ctx.user_active_tasks = user_active_;
		while (!free_cores_.empty() && !ready_.empty()) {

			std::size_t best_job = 0;
			Priority best{};
			bool have = false;
			for (std::size_t idx : ready_) {
				const JobRun& run = runs_[idx];
				RunnableStage stage{run.job->job_id, run.job->user_id, run.stage, run.running,
				                    run.pending.size(), run.pending_work, run.job->arrival_time,
				                    run.job->estimated_slot_time()};
				Priority p = policy_.priority(ctx, stage);
				if (!have || p < best) {
					best = std::move(p);
					best_job = idx;
					have = true;
				}
			}

			JobRun& run = runs_[best_job];
			const double duration = run.pending.back();
			run.pending.pop_back();
			run.pending_work -= duration;
			if (run.pending.empty())
				ready_.erase(best_job);
			++run.running;
			++user_active_[run.job->user_id];
			++ctx.user_active_tasks[run.job->user_id];

			const int core = *free_cores_.begin();
			free_cores_.erase(free_cores_.begin());
			const Stage& stage = run.job->stages[run.stage];
			trace_.task_records.push_back(TaskRecord{run.job->job_id, run.job->user_id, stage.stage_id,
			                                         run.stage, now, now + duration, core});
			finishes_.push(FinishEvent{now + duration, seq_++, best_job, core});
		}

		if (options_.record_snapshots) {
			std::size_t ready_tasks = 0;
			for (std::size_t idx : ready_)
				ready_tasks += runs_[idx].pending.size();
			trace_.snapshots.push_back(
				DispatchSnapshot{now, static_cast<int>(free_cores_.size()), ready_tasks});
		}
	}

	Policy& policy_;
	PartitionerConfig partitioner_;
	Cluster cluster_;
	RunOptions options_;

	std::vector<Job> jobs_;
	std::vector<JobRun> runs_;
	std::set<int> free_cores_;
	std::set<std::size_t> ready_;
	std::map<UserId, int> user_active_;
	std::map<UserId, double> user_first_arrival_;
	std::priority_queue<FinishEvent, std::vector<FinishEvent>, std::greater<>> finishes_;
	std::uint64_t seq_ = 0;
	ExecutionTrace trace_;
};

void put_number(std::ostream& os, double v)
{
	char buf[64];
	std::snprintf(buf, sizeof buf, "%.9f", v);
	os << buf;
}

} // namespace

ExecutionTrace run(const Workload& workload, Policy& policy, const PartitionerConfig& partitioner,
                   const Cluster& cluster, const RunOptions& options)
{
	if (cluster.total_cores < 1)
		throw ValidationError("cluster: total_cores must be >= 1");
	Engine engine(workload, policy, partitioner, cluster, options);
	return engine.execute();
}

double idle_runtime(const Job& job, const Cluster& cluster, const PartitionerConfig& partitioner)
{
	Workload alone;
	alone.jobs.push_back(job);
	alone.jobs.front().arrival_time = 0.0;
	FifoPolicy fifo;
	const auto trace = run(alone, fifo, partitioner, cluster);
	const auto& span = trace.job_spans.at(job.job_id);
	return span.end_time - span.submit_time;
}

void write_task_csv(const ExecutionTrace& trace, std::ostream& os)
{
	os << "job_id,user_id,stage_id,stage_index,core_id,start_time,end_time\n";
	for (const auto& r : trace.task_records) {
		os << r.job_id << ',' << r.user_id << ',' << r.stage_id << ',' << r.stage_index << ','
		   << r.core_id << ',';
		put_number(os, r.start_time);
		os << ',';
		put_number(os, r.end_time);
		os << '\n';
	}
}

void write_job_csv(const ExecutionTrace& trace, std::ostream& os)
{
	os << "job_id,user_id,submit_time,end_time,response_time\n";
	for (const auto& [id, span] : trace.job_spans) {
		os << id << ',' << span.user_id << ',';
		put_number(os, span.submit_time);
		os << ',';
		put_number(os, span.end_time);
		os << ',';
		put_number(os, span.end_time - span.submit_time);
		os << '\n';
	}
}

} // namespace uwfq
