#pragma once

#include <array>
#include <compare>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "uwfq/core_model.hpp"
#include "uwfq/virtual_time.hpp"

namespace uwfq {

// A stage that currently has tasks waiting for a core.
struct RunnableStage {
	JobId job_id;
	UserId user_id;
	std::size_t stage_index = 0;
	int active_tasks = 0;
	std::size_t pending_tasks = 0;
	double remaining_work = 0.0;
	double job_arrival = 0.0;
	double job_slot_time = 0.0;
};

struct PolicyContext {
	double now = 0.0;
	std::vector<RunnableStage> runnable;
	// Tasks occupying cores, per user.
	std::map<UserId, int> user_active_tasks;
	// Wall time each user first submitted a job.
	std::map<UserId, double> user_first_arrival;

	int active_tasks_of(const UserId& user) const;
	double first_arrival_of(const UserId& user) const;
};

// Lower sorts first. `key` holds the policy's value(s), compared
// lexicographically; the remaining fields break ties deterministically.
struct Priority {
	std::array<double, 3> key{0.0, 0.0, 0.0};
	double job_arrival = 0.0;
	JobId job_id;
	std::size_t stage_index = 0;

	auto operator<=>(const Priority&) const = default;
	bool operator==(const Priority&) const = default;
};

Priority make_priority(std::array<double, 3> key, const RunnableStage& stage);

class Policy {
public:
	virtual ~Policy() = default;

	virtual std::string_view name() const = 0;
	virtual void on_job_arrival(const Job& job, double now) { (void)job; (void)now; }
	virtual void on_stage_submit(const Job& job, std::size_t stage_index, double now)
	{
		(void)job; (void)stage_index; (void)now;
	}
	virtual Priority priority(const PolicyContext& ctx, const RunnableStage& stage) const = 0;
};

Priority fifo_priority(const PolicyContext& ctx, const RunnableStage& stage);
Priority fair_priority(const PolicyContext& ctx, const RunnableStage& stage);
Priority ujf_priority(const PolicyContext& ctx, const RunnableStage& stage);

class FifoPolicy final : public Policy {
public:
	std::string_view name() const override { return "fifo"; }
	Priority priority(const PolicyContext& ctx, const RunnableStage& stage) const override
	{
		return fifo_priority(ctx, stage);
	}
};

class FairPolicy final : public Policy {
public:
	std::string_view name() const override { return "fair"; }
	Priority priority(const PolicyContext& ctx, const RunnableStage& stage) const override
	{
		return fair_priority(ctx, stage);
	}
};

class UjfPolicy final : public Policy {
public:
	std::string_view name() const override { return "ujf"; }
	Priority priority(const PolicyContext& ctx, const RunnableStage& stage) const override
	{
		return ujf_priority(ctx, stage);
	}
};

// Single-level virtual time: V(t) integrates R/N over the set of flows that
// are still backlogged in the emulated fluid system.
class CfqState {
public:
	explicit CfqState(int resources) : resources_(resources) {}

	void advance(double now);
	// Advances to `now`, then returns V + work.
	double on_arrival(double work, double now);

	double v() const { return v_; }
	double t_prev() const { return t_prev_; }
	std::size_t active_count() const { return active_.size(); }

private:
	int resources_;
	double v_ = 0.0;
	double t_prev_ = 0.0;
	std::multiset<double> active_;
};

class CfqPolicy final : public Policy {
public:
	CfqPolicy(int resources, bool stage_granularity)
	: state_(resources), stage_granularity_(stage_granularity)
	{
	}

	std::string_view name() const override { return "cfq"; }
	void on_job_arrival(const Job& job, double now) override;
	void on_stage_submit(const Job& job, std::size_t stage_index, double now) override;
	Priority priority(const PolicyContext& ctx, const RunnableStage& stage) const override;

	bool stage_granularity() const { return stage_granularity_; }
	const CfqState& state() const { return state_; }
	double deadline_of(const JobId& job, std::size_t stage_index) const;

private:
	CfqState state_;
	bool stage_granularity_;
	std::map<std::pair<JobId, std::size_t>, double> deadlines_;
};

class UwfqPolicy final : public Policy {
public:
	UwfqPolicy(int resources, double grace, std::map<UserId, double> weights = {})
	: kernel_(resources, grace), weights_(std::move(weights))
	{
	}

	std::string_view name() const override { return "uwfq"; }
	void on_job_arrival(const Job& job, double now) override;
	Priority priority(const PolicyContext& ctx, const RunnableStage& stage) const override;

	const VirtualTimeKernel& kernel() const { return kernel_; }

private:
	VirtualTimeKernel kernel_;
	std::map<UserId, double> weights_;
};

struct PolicyOptions {
	int resources = 32;
	bool cfq_stage_granularity = true;
	double grace = 2.0;
	std::map<UserId, double> user_weights;
};

// fifo | fair | ujf | cfq | uwfq
std::unique_ptr<Policy> make_policy(std::string_view name, const PolicyOptions& options);
const std::vector<std::string>& policy_names();

} // namespace uwfq
