#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "uwfq/bounds.hpp"
#include "uwfq/metrics.hpp"
#include "uwfq/partitioning.hpp"
#include "uwfq/workloads.hpp"

namespace uwfq {

enum class SourceKind { Scenario1, Scenario2, Trace, File };

struct WorkloadSource {
	SourceKind kind = SourceKind::Scenario1;
	std::string path;
	TraceRefinement refinement;
};

struct ExperimentSpec {
	WorkloadSource source;
	std::vector<std::string> policies;
	PartitionerConfig partitioner;
	int cores = 32;
	std::vector<std::uint64_t> seeds{0};
	// Empty: keep results in memory only.
	std::string out_dir;
	bool strict = false;
	bool cfq_stage_granularity = true;
	bool verify_bounds = false;
	bool force = false;
	double estimation_error = 0.0;
};

struct PolicyRun {
	std::string policy;
	ExecutionTrace trace;
	MetricsReport report;
	// Present for every policy once ujf has run.
	std::map<UserId, double> user_ratios;
};

struct SeedResult {
	std::uint64_t seed = 0;
	Workload workload;
	std::vector<PolicyRun> runs;
	bool has_bounds = false;
	BoundReport bounds;
};

struct ExperimentResult {
	std::vector<SeedResult> seeds;
	// Set when a trace was ingested.
	bool has_trace_report = false;
	TraceReport trace_report;
};

Workload load_source(const WorkloadSource& source, std::uint64_t seed, int cores,
                     TraceReport* report = nullptr);

// Simulates every (policy, seed) pair. ujf is added when missing so the
// other policies can be compared against it. Seeds run in parallel.
ExperimentResult run_experiment(const ExperimentSpec& spec);

// Output layout under spec.out_dir:
//   comparison.csv                seed,policy,avg,band_0_80,band_80_95,band_95_100,
//                                 dvr,violations,dsr,slack
//   per_user_ratios.csv           seed,policy,user,mean_rt,ujf_mean_rt,ratio
//   trace_report.txt              only for trace input
//   seed-<s>/workload.json
//   seed-<s>/bounds.csv           only with verify_bounds
//   seed-<s>/<policy>/tasks.csv, jobs.csv, metrics.csv, summary.txt
//   seed-<s>/<policy>/ecdf-<class>.csv   response-time ECDF per user class
// Refuses to write into a non-empty directory unless spec.force is set.
void write_experiment(const ExperimentSpec& spec, const ExperimentResult& result);

void write_comparison_csv(const ExperimentResult& result, std::ostream& os);

} // namespace uwfq
