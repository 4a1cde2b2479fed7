#include "uwfq/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>

#include "uwfq/errors.hpp"
#include "uwfq/schedulers.hpp"
#include "uwfq/sim_engine.hpp"
#include "uwfq/workload_io.hpp"

namespace fs = std::filesystem;

namespace uwfq {

namespace {

std::string num(double v)
{
	char buf[64];
	std::snprintf(buf, sizeof buf, "%.9f", v);
	return buf;
}

std::ofstream open_out(const fs::path& path)
{
	std::ofstream out(path);
	if (!out)
		throw Error("cannot write '" + path.string() + "'");
	return out;
}

std::vector<std::string> policy_order(const ExperimentSpec& spec)
{
	std::vector<std::string> out;
	for (const auto& p : spec.policies)
		if (std::find(out.begin(), out.end(), p) == out.end())
			out.push_back(p);
	if (std::find(out.begin(), out.end(), "ujf") == out.end())
		out.push_back("ujf");
	return out;
}

SeedResult run_seed(const ExperimentSpec& spec, std::uint64_t seed)
{
	SeedResult result;
	result.seed = seed;
	result.workload = load_source(spec.source, seed, spec.cores);
	const Cluster cluster{spec.cores};

	ReportOptions ropts;
	ropts.strict = spec.strict;
	ropts.user_class = result.workload.user_class;
	for (const auto& job : result.workload.jobs)
		ropts.idle_rt[job.job_id] = idle_runtime(job, cluster, spec.partitioner);

	PolicyOptions popts;
	popts.resources = spec.cores;
	popts.cfq_stage_granularity = spec.cfq_stage_granularity;
	popts.user_weights = result.workload.user_weight;
	RunOptions run_opts;
	run_opts.seed = seed;
	run_opts.estimation_error = spec.estimation_error;

	for (const auto& name : policy_order(spec)) {
		auto policy = make_policy(name, popts);
		PolicyRun pr;
		pr.policy = name;
		pr.trace = run(result.workload, *policy, spec.partitioner, cluster, run_opts);
		result.runs.push_back(std::move(pr));
	}

	const auto ujf = std::find_if(result.runs.begin(), result.runs.end(),
	                              [](const PolicyRun& r) { return r.policy == "ujf"; });
	for (auto& pr : result.runs) {
		pr.report = build_report(pr.trace, &ujf->trace, ropts);
		pr.user_ratios = per_user_ratios(pr.trace, ujf->trace);
	}

	if (spec.verify_bounds) {
		const auto uwfq = std::find_if(result.runs.begin(), result.runs.end(),
		                               [](const PolicyRun& r) { return r.policy == "uwfq"; });
		result.has_bounds = true;
		if (uwfq != result.runs.end()) {
			result.bounds = check_bounds(result.workload, uwfq->trace, spec.cores);
		} else {
			UwfqPolicy policy(spec.cores, 2.0, result.workload.user_weight);
			const auto trace = run(result.workload, policy, spec.partitioner, cluster, run_opts);
			result.bounds = check_bounds(result.workload, trace, spec.cores);
		}
	}
	return result;
}

void check_spec(const ExperimentSpec& spec)
{
	if (spec.cores < 1)
		throw ValidationError("cores must be >= 1");
	if (spec.policies.empty())
		throw ValidationError("at least one policy is required");
	if (spec.seeds.empty())
		throw ValidationError("at least one seed is required");
	if (spec.estimation_error < 0.0)
		throw ValidationError("estimation error must be >= 0");
	for (const auto& p : spec.policies)
		make_policy(p, PolicyOptions{});
}

} // namespace

Workload load_source(const WorkloadSource& source, std::uint64_t seed, int cores, TraceReport* report)
{
	switch (source.kind) {
	case SourceKind::Scenario1:
		return scenario1(seed);
	case SourceKind::Scenario2:
		return scenario2(seed);
	case SourceKind::Trace: {
		auto tw = ingest_trace(source.path, source.refinement, cores);
		if (report)
			*report = tw.report;
		return std::move(tw.workload);
	}
	case SourceKind::File:
		return validate_workload(load_workload_file(source.path), Cluster{cores});
	}
	throw ValidationError("unknown workload source");
}

ExperimentResult run_experiment(const ExperimentSpec& spec)
{
	check_spec(spec);
	ExperimentResult result;
	if (spec.source.kind == SourceKind::Trace) {
		load_source(spec.source, 0, spec.cores, &result.trace_report);
		result.has_trace_report = true;
	}

	std::vector<std::future<SeedResult>> pending;
	for (auto seed : spec.seeds)
		pending.push_back(std::async(std::launch::async, run_seed, std::cref(spec), seed));
	for (auto& f : pending)
		result.seeds.push_back(f.get());
	return result;
}

void write_comparison_csv(const ExperimentResult& result, std::ostream& os)
{
	os << "seed,policy,avg,band_0_80,band_80_95,band_95_100,dvr,violations,dsr,slack\n";
	for (const auto& s : result.seeds)
		for (const auto& pr : s.runs) {
			const auto& r = pr.report;
			os << s.seed << ',' << pr.policy << ',' << num(r.mean_rt) << ',' << num(r.band_0_80) << ','
			   << num(r.band_80_95) << ',' << num(r.band_95_100) << ',' << num(r.dvr.value) << ','
			   << r.dvr.count << ',' << num(r.dsr.value) << ',' << r.dsr.count << '\n';
		}
}

void write_experiment(const ExperimentSpec& spec, const ExperimentResult& result)
{
	const fs::path root(spec.out_dir);
	if (fs::exists(root) && !fs::is_empty(root) && !spec.force)
		throw Error("output directory '" + spec.out_dir + "' is not empty (use --force)");
	fs::create_directories(root);

	{
		auto out = open_out(root / "comparison.csv");
		write_comparison_csv(result, out);
	}
	{
		auto out = open_out(root / "per_user_ratios.csv");
		out << "seed,policy,user,mean_rt,ujf_mean_rt,ratio\n";
		for (const auto& s : result.seeds) {
			const auto ujf = std::find_if(s.runs.begin(), s.runs.end(),
			                              [](const PolicyRun& r) { return r.policy == "ujf"; });
			for (const auto& pr : s.runs)
				for (const auto& [user, ratio] : pr.user_ratios)
					out << s.seed << ',' << pr.policy << ',' << user << ','
					    << num(pr.report.users.at(user).mean_rt) << ','
					    << num(ujf->report.users.at(user).mean_rt) << ',' << num(ratio) << '\n';
		}
	}
	if (result.has_trace_report) {
		const auto& t = result.trace_report;
		auto out = open_out(root / "trace_report.txt");
		out << "rows=" << t.rows << "\njobs_in_window=" << t.jobs_in_window
		    << "\ndropped_jobs=" << t.dropped_jobs << "\nkept_jobs=" << t.kept_jobs
		    << "\nusers=" << t.users << "\nmedian_runtime=" << num(t.median_runtime)
		    << "\nscale_factor=" << num(t.scale_factor) << "\ntotal_work=" << num(t.total_work)
		    << "\nutilization=" << num(t.utilization) << "\ntop_user_share=" << num(t.top_user_share)
		    << '\n';
	}

	for (const auto& s : result.seeds) {
		const fs::path dir = root / ("seed-" + std::to_string(s.seed));
		fs::create_directories(dir);
		{
			auto out = open_out(dir / "workload.json");
			out << workload_to_json(s.workload);
		}
		if (s.has_bounds) {
			auto out = open_out(dir / "bounds.csv");
			out << "job_id,sim_finish,two_level_finish,ujf_finish,bound\n";
			for (const auto& row : s.bounds.rows)
				out << row.job_id << ',' << num(row.sim_finish) << ',' << num(row.two_level_finish) << ','
				    << num(row.ujf_finish) << ',' << num(s.bounds.bound) << '\n';
		}
		for (const auto& pr : s.runs) {
			const fs::path pdir = dir / pr.policy;
			fs::create_directories(pdir);
			{
				auto out = open_out(pdir / "tasks.csv");
				write_task_csv(pr.trace, out);
			}
			{
				auto out = open_out(pdir / "jobs.csv");
				write_job_csv(pr.trace, out);
			}
			{
				auto out = open_out(pdir / "metrics.csv");
				write_report_csv(pr.report, out);
			}
			{
				auto out = open_out(pdir / "summary.txt");
				write_summary(pr.report, out);
			}

			std::map<std::string, std::vector<double>> by_class;
			for (const auto& m : pr.report.jobs)
				by_class[s.workload.class_of(m.user_id)].push_back(m.response_time);
			for (const auto& [cls, values] : by_class)
				ecdf_export(values, (pdir / ("ecdf-" + cls + ".csv")).string());
		}
	}
}

} // namespace uwfq
