#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "uwfq/errors.hpp"
#include "uwfq/experiment.hpp"
#include "uwfq/schedulers.hpp"

namespace {

void print_bounds(const uwfq::SeedResult& s)
{
	const auto& b = s.bounds;
	std::printf("seed %llu bounds: limit=%.6f  max(F-f)=%.6f  max(f-fhat)=%.6f  max(F-fhat)=%.6f  %s\n",
	            static_cast<unsigned long long>(s.seed), b.bound, b.max_sim_minus_two_level,
	            b.max_two_level_minus_ujf, b.max_sim_minus_ujf, b.passed() ? "ok" : "VIOLATED");
}

} // namespace

int main(int argc, char** argv)
{
	CLI::App app{"Multi-user cluster scheduling simulator"};

	int scenario = 0;
	std::string trace_path;
	std::string workload_path;
	std::vector<std::string> policies;
	std::string partitioner = "static";
	uwfq::ExperimentSpec spec;
	std::vector<std::uint64_t> seeds;
	double window_start = 0.0;
	double window_end = 0.0;

	auto* src_scenario = app.add_option("--scenario", scenario, "Built-in scenario (1 or 2)")
		->check(CLI::IsMember({1, 2}));
	auto* src_trace = app.add_option("--trace", trace_path, "Trace CSV to ingest")
		->check(CLI::ExistingFile);
	auto* src_file = app.add_option("--workload", workload_path, "Workload JSON file")
		->check(CLI::ExistingFile);
	src_scenario->excludes(src_trace)->excludes(src_file);
	src_trace->excludes(src_file);

	app.add_option("--policy", policies, "Policy to run; repeatable (fifo|fair|ujf|cfq|uwfq)")
		->default_str("fair,ujf,cfq,uwfq");
	app.add_option("--partitioner", partitioner, "static or runtime")->default_val("static");
	app.add_option("--atr", spec.partitioner.atr.atr, "Advisory task runtime in seconds")
		->default_val(1.0)
		->check(CLI::PositiveNumber);
	app.add_option("--overhead", spec.partitioner.task_overhead, "Seconds added to every task")
		->default_val(0.0)
		->check(CLI::NonNegativeNumber);
	app.add_option("--cores", spec.cores, "Cluster cores")->default_val(32)->check(CLI::PositiveNumber);
	app.add_option("--seed", seeds, "Seed; repeatable")->default_str("0");
	app.add_option("--out", spec.out_dir, "Output directory");
	app.add_flag("--strict-eq23", spec.strict, "Literal >1 / <=1 thresholds for DVR/DSR counts");
	app.add_option("--cfq-stage-granularity", spec.cfq_stage_granularity,
	               "CFQ deadlines per stage (true) or per job (false)")
		->default_val(true);
	app.add_flag("--verify-bounds", spec.verify_bounds, "Check uwfq against both fluid schedules");
	app.add_flag("--force", spec.force, "Allow writing into a non-empty output directory");
	app.add_option("--window-start", window_start, "Trace window start (ms)");
	app.add_option("--window-end", window_end, "Trace window end (ms)");
	app.add_option("--cutoff", spec.source.refinement.cutoff, "Drop jobs longer than cutoff x median")
		->default_val(10.0);
	app.add_option("--utilization", spec.source.refinement.utilization, "Target utilization after scaling")
		->default_val(1.0);
	app.add_option("--estimation-error", spec.estimation_error,
	               "Sigma of log-normal noise on runtime estimates")
		->default_val(0.0)
		->check(CLI::NonNegativeNumber);

	CLI11_PARSE(app, argc, argv);

	if (!*src_scenario && !*src_trace && !*src_file) {
		std::cerr << "error: one of --scenario, --trace or --workload is required\n";
		return 2;
	}
	if (*src_trace && (app.count("--window-start") == 0 || app.count("--window-end") == 0)) {
		std::cerr << "error: --trace needs --window-start and --window-end\n";
		return 2;
	}

	if (*src_scenario) {
		spec.source.kind = scenario == 1 ? uwfq::SourceKind::Scenario1 : uwfq::SourceKind::Scenario2;
	} else if (*src_trace) {
		spec.source.kind = uwfq::SourceKind::Trace;
		spec.source.path = trace_path;
		spec.source.refinement.window_start_ms = window_start;
		spec.source.refinement.window_end_ms = window_end;
	} else {
		spec.source.kind = uwfq::SourceKind::File;
		spec.source.path = workload_path;
	}
	spec.policies = policies.empty() ? std::vector<std::string>{"fair", "ujf", "cfq", "uwfq"} : policies;
	if (!seeds.empty())
		spec.seeds = seeds;

	try {
		spec.partitioner.kind = uwfq::parse_partitioner(partitioner);
		const auto result = uwfq::run_experiment(spec);
		if (!spec.out_dir.empty())
			uwfq::write_experiment(spec, result);
		uwfq::write_comparison_csv(result, std::cout);

		bool ok = true;
		for (const auto& s : result.seeds) {
			if (!s.has_bounds)
				continue;
			print_bounds(s);
			try {
				uwfq::verify_bounds(s.bounds);
			} catch (const uwfq::BoundViolation& e) {
				std::cerr << "bound violation (seed " << s.seed << "): " << e.what() << '\n';
				ok = false;
			}
		}
		return ok ? 0 : 3;
	} catch (const uwfq::UnknownPolicy& e) {
		std::cerr << "error: " << e.what() << '\n';
		return 2;
	} catch (const uwfq::ValidationError& e) {
		std::cerr << "error: " << e.what() << '\n';
		return 2;
	} catch (const std::exception& e) {
		std::cerr << "error: " << e.what() << '\n';
		return 1;
	}
}
