#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "support.hpp"
#include "uwfq/errors.hpp"
#include "uwfq/metrics.hpp"
#include "uwfq/schedulers.hpp"
#include "uwfq/sim_engine.hpp"

using namespace uwfq;
using doctest::Approx;

namespace {

ExecutionTrace spans(std::initializer_list<std::tuple<JobId, UserId, double, double>> rows)
{
	ExecutionTrace t;
	for (const auto& [id, user, submit, end] : rows)
		t.job_spans[id] = JobSpan{user, submit, end};
	return t;
}

} // namespace

TEST_CASE("response time")
{
	const auto t = spans({{"a", "u", 1, 5}, {"b", "u", 0.1, 6.0}});
	CHECK(response_time(t, "a") == Approx(4.0));
	CHECK(response_time(t, "b") == Approx(5.9));
	CHECK_THROWS_AS(response_time(t, "zzz"), IncompleteJob);

	auto w = test::make_workload({test::make_job("j", "u", 3, {{2}})}, 1);
	FifoPolicy p;
	CHECK(response_time(run(w, p, {}, Cluster{1}), "j") == Approx(2.0));
}

TEST_CASE("slowdown")
{
	const auto t = spans({{"a", "u", 0, 4.5}, {"b", "u", 0, 0.9}});
	CHECK(slowdown(t, "a", 2.25) == Approx(2.0));
	CHECK(slowdown(t, "a", 4.5) == Approx(1.0));
	CHECK(slowdown(t, "b", 0.9) == Approx(1.0));
	CHECK_THROWS_AS(slowdown(t, "a", 0.0), ValidationError);
}

TEST_CASE("deadline ratio")
{
	const auto ujf = spans({{"a", "u", 50, 100}, {"b", "u", 0, 20}});
	const auto target = spans({{"a", "u", 50, 120}, {"b", "u", 0, 10}});
	CHECK(deadline_ratio(target, ujf, "a") == Approx(0.4));
	CHECK(deadline_ratio(ujf, ujf, "a") == 0.0);
	CHECK(deadline_ratio(target, ujf, "b") == Approx(-0.5));
	CHECK_THROWS_AS(deadline_ratio(target, spans({}), "a"), IncompleteJob);
}

TEST_CASE("violation and slack ratios")
{
	auto v = dvr({0.5, -0.2, 1.5});
	CHECK(v.value == Approx(1.0));
	CHECK(v.count == 2);
	v = dvr({-1, -2});
	CHECK(v.value == 0.0);
	CHECK(v.count == 0);
	v = dvr({1.0});
	CHECK(v.value == Approx(1.0));
	CHECK(v.count == 1);

	auto s = dsr({0.5, -0.2, 1.5});
	CHECK(s.value == Approx(0.2));
	CHECK(s.count == 1);
	s = dsr({1, 2});
	CHECK(s.value == 0.0);
	CHECK(s.count == 0);
	s = dsr({-1});
	CHECK(s.value == Approx(1.0));
	CHECK(s.count == 1);
}

TEST_CASE("strict thresholds count against one")
{
	auto v = dvr({0.5, -0.2, 1.5}, true);
	CHECK(v.count == 1);
	CHECK(v.value == Approx(2.0));
	auto s = dsr({0.5, -0.2, 1.5}, true);
	CHECK(s.count == 2);
	CHECK(s.value == Approx(0.1));
	CHECK(dvr({0.5}, true).value == 0.0);
}

TEST_CASE("per-user ratios compare mean response times")
{
	const auto ujf = spans({{"a1", "A", 0, 10}, {"a2", "A", 0, 10}, {"b", "B", 2, 7}});
	const auto target = spans({{"a1", "A", 0, 14}, {"a2", "A", 0, 10}, {"b", "B", 2, 7}});
	const auto r = per_user_ratios(target, ujf);
	CHECK(r.at("A") == Approx(0.2));
	CHECK(r.at("B") == 0.0);

	// One job per user: same as the per-job ratio.
	const auto single = spans({{"b", "B", 2, 9}});
	const auto ujf_b = spans({{"b", "B", 2, 7}});
	CHECK(per_user_ratios(single, ujf_b).at("B") == Approx(deadline_ratio(single, ujf_b, "b")));
}

TEST_CASE("ecdf")
{
	const auto e = ecdf({2, 1, 2});
	REQUIRE(e.size() == 2);
	CHECK(e[0].first == 1.0);
	CHECK(e[0].second == Approx(1.0 / 3.0));
	CHECK(e[1].first == 2.0);
	CHECK(e[1].second == 1.0);
	CHECK(ecdf({}).empty());
	CHECK(ecdf({4.5}) == std::vector<std::pair<double, double>>{{4.5, 1.0}});

	const std::string path = "ecdf_test_output.csv";
	ecdf_export({}, path);
	std::ifstream in(path);
	CHECK(in.peek() == std::ifstream::traits_type::eof());
	in.close();
	std::remove(path.c_str());
	CHECK_THROWS_AS(ecdf_export({1}, "/nonexistent/dir/x.csv"), Error);
}

TEST_CASE("report bands partition the jobs")
{
	for (int n : {1, 7, 20, 33}) {
		ExecutionTrace t;
		for (int i = 0; i < n; ++i)
			t.job_spans["j" + std::to_string(i)] = JobSpan{"u" + std::to_string(i % 3), 0.0, 1.0 + i % 5};
		const auto r = build_report(t, nullptr);
		CHECK(r.band_sizes[0] + r.band_sizes[1] + r.band_sizes[2] == static_cast<std::size_t>(n));
		CHECK(r.jobs.size() == static_cast<std::size_t>(n));
	}
}

TEST_CASE("report aggregates")
{
	ExecutionTrace t;
	for (int i = 1; i <= 20; ++i)
		t.job_spans["j" + std::to_string(100 + i)] = JobSpan{i <= 10 ? "A" : "B", 0.0, double(i)};
	ReportOptions opts;
	opts.user_class = {{"A", "small"}};
	const auto r = build_report(t, nullptr, opts);
	CHECK(r.mean_rt == Approx(10.5));
	CHECK(r.band_0_80 == Approx(8.5));
	CHECK(r.band_80_95 == Approx(18.0));
	CHECK(r.band_95_100 == Approx(20.0));
	CHECK(r.worst10_rt == Approx(19.5));
	CHECK(r.users.at("A").mean_rt == Approx(5.5));
	CHECK(r.class_mean_rt.at("small") == Approx(5.5));
	CHECK(r.class_mean_rt.at("default") == Approx(15.5));
}

TEST_CASE("self comparison gives zero violation and slack")
{
	const auto w = test::random_workload(17);
	PolicyOptions opts;
	opts.resources = 4;
	auto p = make_policy("uwfq", opts);
	const auto t = run(w, *p, {}, Cluster{4});
	const auto r = build_report(t, &t);
	CHECK(r.dvr.value == 0.0);
	CHECK(r.dvr.count == 0);
	CHECK(r.dsr.value == 0.0);
	CHECK(r.dsr.count == w.jobs.size());
	for (const auto& [_, ratio] : per_user_ratios(t, t))
		CHECK(ratio == 0.0);
}

TEST_CASE("slowdown against a solo run is one")
{
	const auto job = test::make_job("j", "u", 4.0, {{1, 2, 3}, {0.5}});
	auto w = test::make_workload({job}, 4);
	FifoPolicy p;
	const auto t = run(w, p, {}, Cluster{4});
	CHECK(slowdown(t, "j", idle_runtime(job, Cluster{4}, {})) == Approx(1.0).epsilon(1e-9));
}

TEST_CASE("report writers")
{
	const auto t = spans({{"a", "u", 0, 2}});
	const auto r = build_report(t, &t);
	std::ostringstream csv, kv;
	write_report_csv(r, csv);
	write_summary(r, kv);
	CHECK(csv.str() == "job_id,user_id,response_time,slowdown,ratio\na,u,2.000000000,0.000000000,0.000000000\n");
	CHECK(kv.str().find("mean_rt=2.000000000\n") != std::string::npos);
	CHECK(kv.str().find("violations=0\n") != std::string::npos);
	CHECK(kv.str().find("user.u.mean_rt=2.000000000\n") != std::string::npos);
}
