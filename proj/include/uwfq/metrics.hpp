#pragma once

#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "uwfq/core_model.hpp"

namespace uwfq {

double response_time(const ExecutionTrace& trace, const JobId& job);
double slowdown(const ExecutionTrace& trace, const JobId& job, double rt_idle);
// (end_target - end_ujf) / RT_ujf
double deadline_ratio(const ExecutionTrace& target, const ExecutionTrace& ujf, const JobId& job);

struct RatioSummary {
	double value = 0.0;
	std::size_t count = 0;
};

// Mean positive ratio over the jobs with r > 0. `strict` divides by the
// number of jobs with r > 1 instead.
RatioSummary dvr(const std::vector<double>& ratios, bool strict = false);
// Mean of -r over the jobs with r <= 0. `strict` divides by the number of
// jobs with r <= 1 instead.
RatioSummary dsr(const std::vector<double>& ratios, bool strict = false);

// Same ratio, but over each user's mean response time.
std::map<UserId, double> per_user_ratios(const ExecutionTrace& target, const ExecutionTrace& ujf);

// (value, cumulative fraction), one row per distinct value.
std::vector<std::pair<double, double>> ecdf(std::vector<double> values);
void ecdf_export(const std::vector<double>& values, const std::string& path);
void write_ecdf_csv(const std::vector<double>& values, std::ostream& os);

struct JobMetrics {
	JobId job_id;
	UserId user_id;
	double response_time = 0.0;
	double slowdown = 0.0;
	// Against the comparison trace; 0 when there is none.
	double ratio = 0.0;
};

struct UserMetrics {
	std::size_t jobs = 0;
	double mean_rt = 0.0;
	double mean_slowdown = 0.0;
	RatioSummary dvr;
	RatioSummary dsr;
};

struct MetricsReport {
	std::vector<JobMetrics> jobs;
	double mean_rt = 0.0;
	double mean_slowdown = 0.0;
	double worst10_rt = 0.0;
	// Mean RT of the 0-80%, 80-95% and 95-100% bands by RT rank.
	double band_0_80 = 0.0;
	double band_80_95 = 0.0;
	double band_95_100 = 0.0;
	std::size_t band_sizes[3] = {0, 0, 0};
	bool has_comparison = false;
	RatioSummary dvr;
	RatioSummary dsr;
	std::map<UserId, UserMetrics> users;
	std::map<std::string, double> class_mean_rt;
};

struct ReportOptions {
	bool strict = false;
	// Idle response time per job; slowdowns are left at 0 when missing.
	std::map<JobId, double> idle_rt;
	std::map<UserId, std::string> user_class;
};

MetricsReport build_report(const ExecutionTrace& trace, const ExecutionTrace* ujf,
                           const ReportOptions& options = {});

// metrics.csv: job_id,user_id,response_time,slowdown,ratio
void write_report_csv(const MetricsReport& report, std::ostream& os);
// Flat key=value lines.
void write_summary(const MetricsReport& report, std::ostream& os);

} // namespace uwfq
