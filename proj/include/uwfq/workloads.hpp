#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "uwfq/core_model.hpp"

namespace uwfq {

// Per-stage task durations (seconds) of a linear job.
using JobTemplate = std::vector<std::vector<double>>;

// 3 stages, 2.25 s alone on 32 cores.
JobTemplate short_job_template();
// 4 stages, 0.9 s alone on 32 cores.
JobTemplate tiny_job_template();

enum class ArrivalPattern { Poisson, Burst, Batch };

struct UserStream {
	UserId user;
	std::string user_class = "default";
	ArrivalPattern pattern = ArrivalPattern::Batch;
	// Poisson: mean gap between jobs.
	double mean_interarrival = 20.0;
	// Burst: `burst_size` jobs every `burst_period` seconds.
	// Batch: `burst_size` jobs once, at `start_delay`.
	double burst_period = 30.0;
	int burst_size = 1;
	double start_delay = 0.0;
	JobTemplate job = short_job_template();
};

struct ScenarioConfig {
	std::uint64_t seed = 0;
	double horizon = 300.0;
	std::vector<UserStream> users;
};

ScenarioConfig scenario1_config(std::uint64_t seed);
ScenarioConfig scenario2_config(std::uint64_t seed);

// Expands a config into a validated workload. Job ids are "<user>-<n>".
Workload generate_scenario(const ScenarioConfig& config);

Workload scenario1(std::uint64_t seed);
Workload scenario2(std::uint64_t seed);

struct TraceRefinement {
	double window_start_ms = 0.0;
	double window_end_ms = 0.0;
	double cutoff = 10.0;
	double utilization = 1.0;
};

struct TraceReport {
	std::size_t rows = 0;
	std::size_t jobs_in_window = 0;
	std::size_t dropped_jobs = 0;
	std::size_t kept_jobs = 0;
	std::size_t users = 0;
	double median_runtime = 0.0;
	double scale_factor = 1.0;
	// After scaling, in core-seconds.
	double total_work = 0.0;
	double utilization = 0.0;
	// Work share of the five largest users.
	double top_user_share = 0.0;
};

struct TraceWorkload {
	Workload workload;
	TraceReport report;
};

// CSV rows: job_id,user_id,submit_ms,task_runtime_ms (one task per row; the
// last field may also hold several runtimes separated by ';'). A header row
// starting with "job_id" is skipped.
TraceWorkload ingest_trace(const std::string& path, const TraceRefinement& refinement, int resources);
TraceWorkload ingest_trace_stream(std::istream& in, const TraceRefinement& refinement, int resources);

} // namespace uwfq
