#include "uwfq/schedulers.hpp"

#include <algorithm>
#include <sstream>

#include "uwfq/errors.hpp"

namespace uwfq {

int PolicyContext::active_tasks_of(const UserId& user) const
{
	auto it = user_active_tasks.find(user);
	return it == user_active_tasks.end() ? 0 : it->second;
}

double PolicyContext::first_arrival_of(const UserId& user) const
{
	auto it = user_first_arrival.find(user);
	return it == user_first_arrival.end() ? now : it->second;
}

Priority make_priority(std::array<double, 3> key, const RunnableStage& stage)
{
	return Priority{key, stage.job_arrival, stage.job_id, stage.stage_index};
}

Priority fifo_priority(const PolicyContext&, const RunnableStage& stage)
{
	return make_priority({stage.job_arrival, 0.0, 0.0}, stage);
}

Priority fair_priority(const PolicyContext&, const RunnableStage& stage)
{
	return make_priority({static_cast<double>(stage.active_tasks), 0.0, 0.0}, stage);
}

Priority ujf_priority(const PolicyContext& ctx, const RunnableStage& stage)
{
	// Least-loaded user pool first, then Fair inside the pool.
	return make_priority({static_cast<double>(ctx.active_tasks_of(stage.user_id)),
	                      ctx.first_arrival_of(stage.user_id),
	                      static_cast<double>(stage.active_tasks)},
	                     stage);
}

void CfqState::advance(double now)
{
	if (now < t_prev_ - kTimeEps) {
		std::ostringstream msg;
		msg << "cfq: time " << now << " is before previous update " << t_prev_;
		throw NonMonotonicClock(msg.str());
	}
	now = std::max(now, t_prev_);
	while (!active_.empty()) {
		const double rate = resources_ / static_cast<double>(active_.size());
		const double next = *active_.begin();
		const double departure = t_prev_ + (next - v_) / rate;
		if (departure > now)
			break;
		v_ = std::max(v_, next);
		t_prev_ = std::max(t_prev_, departure);
		while (!active_.empty() && *active_.begin() <= v_ + 1e-9 * (1.0 + v_))
			active_.erase(active_.begin());
	}
	if (!active_.empty())
		v_ += (now - t_prev_) * resources_ / static_cast<double>(active_.size());
	t_prev_ = now;
}

double CfqState::on_arrival(double work, double now)
{
	advance(now);
	const double deadline = v_ + work;
	active_.insert(deadline);
	return deadline;
}

void CfqPolicy::on_job_arrival(const Job& job, double now)
{
	if (stage_granularity_)
		return;
	const double deadline = state_.on_arrival(job.estimated_slot_time(), now);
	for (std::size_t s = 0; s < job.stages.size(); ++s)
		deadlines_[{job.job_id, s}] = deadline;
}

void CfqPolicy::on_stage_submit(const Job& job, std::size_t stage_index, double now)
{
	if (!stage_granularity_)
		return;
	deadlines_[{job.job_id, stage_index}] =
		state_.on_arrival(job.stages.at(stage_index).estimated_runtime, now);
}

double CfqPolicy::deadline_of(const JobId& job, std::size_t stage_index) const
{
	auto it = deadlines_.find({job, stage_index});
	if (it == deadlines_.end())
		throw MissingDeadline("cfq: stage " + std::to_string(stage_index) + " of job '" + job +
		                      "' has no deadline");
	return it->second;
}

Priority CfqPolicy::priority(const PolicyContext&, const RunnableStage& stage) const
{
	return make_priority({deadline_of(stage.job_id, stage.stage_index), 0.0, 0.0}, stage);
}

void UwfqPolicy::on_job_arrival(const Job& job, double now)
{
	auto it = weights_.find(job.user_id);
	const double weight = it == weights_.end() ? 1.0 : it->second;
	kernel_.assign_deadline(job.user_id, job.job_id, now, job.estimated_slot_time(), weight);
}

Priority UwfqPolicy::priority(const PolicyContext&, const RunnableStage& stage) const
{
	// Every stage inherits its job's global deadline.
	return make_priority({kernel_.deadline_of(stage.job_id), 0.0, 0.0}, stage);
}

const std::vector<std::string>& policy_names()
{
	static const std::vector<std::string> names{"fifo", "fair", "ujf", "cfq", "uwfq"};
	return names;
}

std::unique_ptr<Policy> make_policy(std::string_view name, const PolicyOptions& options)
{
	if (name == "fifo")
		return std::make_unique<FifoPolicy>();
	if (name == "fair")
		return std::make_unique<FairPolicy>();
	if (name == "ujf")
		return std::make_unique<UjfPolicy>();
	if (name == "cfq")
		return std::make_unique<CfqPolicy>(options.resources, options.cfq_stage_granularity);
	if (name == "uwfq")
		return std::make_unique<UwfqPolicy>(options.resources, options.grace, options.user_weights);
	throw UnknownPolicy("unknown policy '" + std::string(name) + "' (expected fifo|fair|ujf|cfq|uwfq)");
}

} // namespace uwfq
