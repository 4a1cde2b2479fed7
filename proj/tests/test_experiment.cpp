#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "support.hpp"
#include "uwfq/bounds.hpp"
#include "uwfq/errors.hpp"
#include "uwfq/experiment.hpp"
#include "uwfq/sim_engine.hpp"

using namespace uwfq;
using doctest::Approx;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p)
{
	std::ifstream in(p, std::ios::binary);
	std::ostringstream ss;
	ss << in.rdbuf();
	return ss.str();
}

fs::path fresh_dir(const std::string& name)
{
	const auto dir = fs::temp_directory_path() / ("uwfq-test-" + name);
	fs::remove_all(dir);
	return dir;
}

ExperimentSpec scenario2_spec()
{
	ExperimentSpec spec;
	spec.source.kind = SourceKind::Scenario2;
	spec.policies = {"fair", "ujf", "cfq", "uwfq"};
	return spec;
}

} // namespace

TEST_CASE("scenario 2 experiment runs every policy")
{
	const auto result = run_experiment(scenario2_spec());
	REQUIRE(result.seeds.size() == 1);
	const auto& runs = result.seeds[0].runs;
	REQUIRE(runs.size() == 4);
	for (const auto& pr : runs) {
		CHECK(pr.trace.job_spans.size() == 64);
		CHECK(pr.report.jobs.size() == 64);
		CHECK(pr.user_ratios.size() == 4);
	}
	std::ostringstream os;
	write_comparison_csv(result, os);
	std::istringstream in(os.str());
	std::string line;
	int lines = 0;
	while (std::getline(in, line))
		++lines;
	CHECK(lines == 5);
}

TEST_CASE("ujf is added as the comparison baseline")
{
	auto spec = scenario2_spec();
	spec.policies = {"fifo", "fifo"};
	const auto result = run_experiment(spec);
	const auto& runs = result.seeds[0].runs;
	REQUIRE(runs.size() == 2);
	CHECK(runs[0].policy == "fifo");
	CHECK(runs[1].policy == "ujf");
	CHECK(runs[1].report.dvr.count == 0);
}

TEST_CASE("experiment validation")
{
	auto spec = scenario2_spec();
	spec.policies = {"lottery"};
	CHECK_THROWS_AS(run_experiment(spec), UnknownPolicy);
	spec = scenario2_spec();
	spec.cores = 0;
	CHECK_THROWS_AS(run_experiment(spec), ValidationError);
	spec = scenario2_spec();
	spec.seeds.clear();
	CHECK_THROWS_AS(run_experiment(spec), ValidationError);
}

TEST_CASE("experiment output is byte identical across runs")
{
	auto spec = scenario2_spec();
	spec.source.kind = SourceKind::Scenario1;
	spec.seeds = {3, 4};
	const auto a = fresh_dir("det-a");
	const auto b = fresh_dir("det-b");
	spec.out_dir = a.string();
	write_experiment(spec, run_experiment(spec));
	spec.out_dir = b.string();
	write_experiment(spec, run_experiment(spec));

	std::size_t files = 0;
	for (const auto& entry : fs::recursive_directory_iterator(a)) {
		if (!entry.is_regular_file())
			continue;
		++files;
		const auto other = b / fs::relative(entry.path(), a);
		REQUIRE(fs::exists(other));
		CHECK(slurp(entry.path()) == slurp(other));
	}
	CHECK(files > 10);
	CHECK(fs::exists(a / "seed-3" / "uwfq" / "ecdf-frequent.csv"));
	CHECK(fs::exists(a / "seed-4" / "cfq" / "summary.txt"));
	fs::remove_all(a);
	fs::remove_all(b);
}

TEST_CASE("non-empty output directory needs force")
{
	auto spec = scenario2_spec();
	spec.policies = {"ujf"};
	const auto dir = fresh_dir("force");
	spec.out_dir = dir.string();
	const auto result = run_experiment(spec);
	write_experiment(spec, result);
	CHECK_THROWS_AS(write_experiment(spec, result), Error);
	spec.force = true;
	CHECK_NOTHROW(write_experiment(spec, result));
	fs::remove_all(dir);
}

TEST_CASE("bounds of a single job")
{
	const auto w = test::make_workload({test::make_job("j", "u", 0, {{2, 2, 2, 2}})}, 4);
	FifoPolicy p;
	const auto t = run(w, p, {}, Cluster{4});
	const auto r = check_bounds(w, t, 4);
	REQUIRE(r.rows.size() == 1);
	CHECK(r.rows[0].sim_finish == Approx(2.0));
	CHECK(r.rows[0].two_level_finish == Approx(2.0));
	CHECK(r.rows[0].ujf_finish == Approx(2.0));
	CHECK(r.l_max == Approx(2.0));
	CHECK(r.big_l_max == Approx(8.0));
	CHECK(r.bound == Approx(6.0));
	CHECK(r.passed());
	CHECK_NOTHROW(verify_bounds(r));
}

TEST_CASE("bounds of an empty workload pass")
{
	const auto w = test::make_workload({}, 4);
	FifoPolicy p;
	const auto r = check_bounds(w, run(w, p, {}, Cluster{4}), 4);
	CHECK(r.rows.empty());
	CHECK(r.passed());
}

TEST_CASE("verify_bounds reports a violation")
{
	BoundReport r;
	r.resources = 4;
	r.bound = 1.0;
	r.rows.push_back({"late", 10.0, 2.0, 2.0});
	r.max_sim_minus_two_level = 8.0;
	r.max_sim_minus_ujf = 8.0;
	CHECK_FALSE(r.passed());
	CHECK_THROWS_AS(verify_bounds(r), BoundViolation);
	try {
		verify_bounds(r);
	} catch (const BoundViolation& e) {
		CHECK(std::string(e.what()).find("late") != std::string::npos);
	}
}

TEST_CASE("experiment bounds on scenario 2")
{
	auto spec = scenario2_spec();
	spec.verify_bounds = true;
	const auto result = run_experiment(spec);
	REQUIRE(result.seeds[0].has_bounds);
	CHECK(result.seeds[0].bounds.passed());
}
