#include "doctest.h"

#include "support.hpp"
#include "uwfq/errors.hpp"
#include "uwfq/schedulers.hpp"
#include "uwfq/sim_engine.hpp"

using namespace uwfq;
using doctest::Approx;
using test::make_job;

namespace {

RunnableStage stage(const std::string& job, const std::string& user, double arrival, int active = 0,
                    std::size_t index = 0)
{
	RunnableStage s;
	s.job_id = job;
	s.user_id = user;
	s.job_arrival = arrival;
	s.active_tasks = active;
	s.stage_index = index;
	return s;
}

} // namespace

TEST_CASE("fifo: earlier arrival wins, job id breaks ties")
{
	PolicyContext ctx;
	CHECK(fifo_priority(ctx, stage("b", "u", 1)) < fifo_priority(ctx, stage("a", "u", 2)));
	CHECK(fifo_priority(ctx, stage("a", "u", 1)) < fifo_priority(ctx, stage("b", "u", 1)));
}

TEST_CASE("fair: fewest running tasks wins")
{
	PolicyContext ctx;
	CHECK(fair_priority(ctx, stage("b", "u", 5, 1)) < fair_priority(ctx, stage("a", "u", 0, 3)));
	CHECK(fair_priority(ctx, stage("b", "u", 5, 0)) < fair_priority(ctx, stage("a", "u", 0, 1)));
	CHECK(fair_priority(ctx, stage("a", "u", 1, 2)) < fair_priority(ctx, stage("b", "u", 2, 2)));
}

TEST_CASE("ujf: least loaded user first, then fair inside the user")
{
	PolicyContext ctx;
	ctx.user_active_tasks = {{"X", 4}, {"Y", 1}};
	ctx.user_first_arrival = {{"X", 0.0}, {"Y", 1.0}};
	CHECK(ujf_priority(ctx, stage("y", "Y", 1)) < ujf_priority(ctx, stage("x", "X", 0)));
	CHECK(ujf_priority(ctx, stage("y0", "Y", 1, 0)) < ujf_priority(ctx, stage("y1", "Y", 1, 1)));

	ctx.user_active_tasks = {{"X", 2}, {"Y", 2}};
	CHECK(ujf_priority(ctx, stage("x", "X", 5)) < ujf_priority(ctx, stage("y", "Y", 1)));
}

TEST_CASE("stage index breaks the last tie")
{
	PolicyContext ctx;
	CHECK(fifo_priority(ctx, stage("a", "u", 1, 0, 0)) < fifo_priority(ctx, stage("a", "u", 1, 0, 1)));
}

TEST_CASE("cfq state: virtual time integral")
{
	CfqState idle(4);
	CHECK(idle.on_arrival(6.0, 0.0) == Approx(6.0));

	CfqState two(4);
	two.on_arrival(100.0, 0.0);
	two.on_arrival(100.0, 0.0);
	two.advance(1.0);
	CHECK(two.v() == Approx(2.0));
	CHECK(two.active_count() == 2);
}

TEST_CASE("cfq state: deadline on top of current V")
{
	CfqState s(1);
	s.on_arrival(20.0, 0.0);
	s.advance(10.0);
	CHECK(s.v() == Approx(10.0));
	CHECK(s.on_arrival(2.0, 10.0) == Approx(12.0));
}

TEST_CASE("cfq state: emulated departures speed up the clock")
{
	CfqState s(2);
	s.on_arrival(1.0, 0.0);
	s.on_arrival(5.0, 0.0);
	// Rate 1 until V = 1 at t = 1, then rate 2.
	s.advance(2.0);
	CHECK(s.v() == Approx(3.0));
	CHECK(s.active_count() == 1);
	s.advance(10.0);
	CHECK(s.active_count() == 0);
	CHECK(s.v() == Approx(5.0));
	CHECK_THROWS_AS(s.advance(1.0), NonMonotonicClock);
}

TEST_CASE("cfq policy granularity")
{
	const Job j = make_job("j", "u", 0, {{1, 1}, {4}});
	CfqPolicy by_job(2, false);
	by_job.on_job_arrival(j, 0.0);
	CHECK(by_job.deadline_of("j", 0) == Approx(6.0));
	CHECK(by_job.deadline_of("j", 1) == Approx(6.0));

	CfqPolicy by_stage(2, true);
	by_stage.on_job_arrival(j, 0.0);
	by_stage.on_stage_submit(j, 0, 0.0);
	CHECK(by_stage.deadline_of("j", 0) == Approx(2.0));
	CHECK_THROWS_AS(by_stage.deadline_of("j", 1), MissingDeadline);
	by_stage.on_stage_submit(j, 1, 1.0);
	// One flow at rate 2 for 1 s: V = 2.
	CHECK(by_stage.deadline_of("j", 1) == Approx(6.0));
}

TEST_CASE("uwfq policy maps stages to the job's global deadline")
{
	UwfqPolicy p(1, 2.0);
	p.on_job_arrival(make_job("long", "A", 0, {{4}}), 0.0);
	p.on_job_arrival(make_job("short", "A", 0, {{1, 1}}), 0.0);
	PolicyContext ctx;
	const auto ps = p.priority(ctx, stage("short", "A", 0, 0, 0));
	const auto pl = p.priority(ctx, stage("long", "A", 0, 0, 0));
	CHECK(ps.key[0] == Approx(2.0));
	CHECK(pl.key[0] == Approx(6.0));
	CHECK(ps < pl);
	const auto ps1 = p.priority(ctx, stage("short", "A", 0, 0, 1));
	CHECK(ps1.key == ps.key);
	CHECK(ps < ps1);
	CHECK_THROWS_AS(p.priority(ctx, stage("ghost", "A", 0)), MissingDeadline);
}

TEST_CASE("make_policy")
{
	PolicyOptions opts;
	for (const auto& name : policy_names())
		CHECK(make_policy(name, opts)->name() == name);
	CHECK_THROWS_AS(make_policy("lottery", opts), UnknownPolicy);
}

TEST_CASE("property: priorities are pure functions of context and state")
{
	PolicyOptions opts;
	opts.resources = 4;
	for (const auto& name : policy_names()) {
		auto a = make_policy(name, opts);
		auto b = make_policy(name, opts);
		const Job j1 = make_job("j1", "A", 0, {{1, 2}});
		const Job j2 = make_job("j2", "B", 0.5, {{3}});
		for (auto* p : {a.get(), b.get()}) {
			p->on_job_arrival(j1, 0.0);
			p->on_stage_submit(j1, 0, 0.0);
			p->on_job_arrival(j2, 0.5);
			p->on_stage_submit(j2, 0, 0.5);
		}
		PolicyContext ctx;
		ctx.now = 0.5;
		ctx.user_active_tasks = {{"A", 1}};
		ctx.user_first_arrival = {{"A", 0.0}, {"B", 0.5}};
		for (const auto& s : {stage("j1", "A", 0, 1), stage("j2", "B", 0.5, 0)})
			CHECK(a->priority(ctx, s) == b->priority(ctx, s));
	}
}

TEST_CASE("property: single user makes ujf match fair and uwfq match job-level cfq")
{
	for (std::uint64_t seed = 0; seed < 40; ++seed) {
		test::CorpusOptions opt;
		opt.max_users = 1;
		auto w = test::random_workload(seed, opt);
		PolicyOptions opts;
		opts.resources = 4;
		opts.cfq_stage_granularity = false;
		const Cluster cluster{4};
		auto order = [&](const std::string& name) {
			auto p = make_policy(name, opts);
			const auto trace = run(w, *p, PartitionerConfig{}, cluster);
			std::vector<std::pair<std::string, double>> seq;
			for (const auto& r : trace.task_records)
				seq.emplace_back(r.job_id, r.start_time);
			return seq;
		};
		CHECK(order("ujf") == order("fair"));
		CHECK(order("uwfq") == order("cfq"));
	}
}
