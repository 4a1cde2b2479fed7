#include "uwfq/workloads.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <random>
#include <sstream>

#include "uwfq/errors.hpp"

namespace uwfq {

namespace {

Job instantiate(const UserStream& stream, int n, double arrival)
{
	Job job;
	job.job_id = stream.user + "-" + std::to_string(n);
	job.user_id = stream.user;
	job.arrival_time = arrival;
	for (std::size_t s = 0; s < stream.job.size(); ++s)
		job.stages.push_back(make_stage(job.job_id + "/s" + std::to_string(s), s, stream.job[s]));
	return job;
}

std::vector<double> repeat(std::size_t n, double v)
{
	return std::vector<double>(n, v);
}

std::string trim(std::string s)
{
	const auto first = s.find_first_not_of(" \t\r");
	if (first == std::string::npos)
		return "";
	const auto last = s.find_last_not_of(" \t\r");
	return s.substr(first, last - first + 1);
}

double parse_number(const std::string& field, std::size_t line, const char* what)
{
	try {
		std::size_t used = 0;
		const double v = std::stod(field, &used);
		if (used != field.size() || !std::isfinite(v))
			throw std::invalid_argument(field);
		return v;
	} catch (const std::exception&) {
		throw ParseError(std::string("bad ") + what + " '" + field + "'", line);
	}
}

struct RawJob {
	UserId user;
	double submit_ms = 0.0;
	std::vector<double> tasks_ms;

	double runtime_s() const
	{
		double sum = 0.0;
		for (double t : tasks_ms)
			sum += t;
		return sum / 1000.0;
	}
};

double median(std::vector<double> v)
{
	std::sort(v.begin(), v.end());
	const std::size_t n = v.size();
	return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

} // namespace

JobTemplate short_job_template()
{
	return {repeat(32, 0.25), repeat(32, 1.99), {0.01}};
}

JobTemplate tiny_job_template()
{
	return {repeat(32, 0.3), repeat(32, 0.3), repeat(32, 0.29), {0.01}};
}

ScenarioConfig scenario1_config(std::uint64_t seed)
{
	ScenarioConfig cfg;
	cfg.seed = seed;
	cfg.horizon = 300.0;
	for (int i = 0; i < 2; ++i) {
		UserStream s;
		s.user = "infrequent" + std::to_string(i);
		s.user_class = "infrequent";
		s.pattern = ArrivalPattern::Poisson;
		s.mean_interarrival = 20.0;
		s.start_delay = 1.0 + i;
		cfg.users.push_back(s);
	}
	for (int i = 0; i < 2; ++i) {
		UserStream s;
		s.user = "frequent" + std::to_string(i);
		s.user_class = "frequent";
		s.pattern = ArrivalPattern::Burst;
		s.burst_period = 30.0;
		s.burst_size = 6;
		s.start_delay = 0.0;
		cfg.users.push_back(s);
	}
	return cfg;
}

ScenarioConfig scenario2_config(std::uint64_t seed)
{
	ScenarioConfig cfg;
	cfg.seed = seed;
	cfg.horizon = 1.0;
	for (int i = 0; i < 4; ++i) {
		UserStream s;
		s.user = "user" + std::to_string(i);
		s.pattern = ArrivalPattern::Batch;
		s.burst_size = 16;
		s.start_delay = 0.1 * i;
		s.job = tiny_job_template();
		cfg.users.push_back(s);
	}
	return cfg;
}

Workload generate_scenario(const ScenarioConfig& config)
{
	if (!(config.horizon > 0.0))
		throw ValidationError("scenario: horizon must be > 0");
	Workload w;
	std::mt19937_64 rng(config.seed);
	for (const auto& stream : config.users) {
		if (stream.user.empty())
			throw ValidationError("scenario: user id must not be empty");
		if (stream.job.empty())
			throw ValidationError("scenario: user '" + stream.user + "' has an empty job template");
		w.user_class[stream.user] = stream.user_class;
		int n = 0;
		switch (stream.pattern) {
		case ArrivalPattern::Poisson: {
			if (!(stream.mean_interarrival > 0.0))
				throw ValidationError("scenario: poisson mean must be > 0");
			// One generator per user, so adding users leaves the others unchanged.
			std::mt19937_64 user_rng(rng());
			std::exponential_distribution<double> gap(1.0 / stream.mean_interarrival);
			for (double t = stream.start_delay; t < config.horizon; t += gap(user_rng))
				w.jobs.push_back(instantiate(stream, n++, t));
			break;
		}
		case ArrivalPattern::Burst:
			if (!(stream.burst_period > 0.0) || stream.burst_size < 1)
				throw ValidationError("scenario: burst period and size must be > 0");
			for (double t = stream.start_delay; t < config.horizon - kTimeEps; t += stream.burst_period)
				for (int k = 0; k < stream.burst_size; ++k)
					w.jobs.push_back(instantiate(stream, n++, t));
			break;
		case ArrivalPattern::Batch:
			if (stream.burst_size < 1)
				throw ValidationError("scenario: batch size must be > 0");
			for (int k = 0; k < stream.burst_size; ++k)
				w.jobs.push_back(instantiate(stream, n++, stream.start_delay));
			break;
		}
	}
	return validate_workload(std::move(w), Cluster{});
}

Workload scenario1(std::uint64_t seed)
{
	return generate_scenario(scenario1_config(seed));
}

Workload scenario2(std::uint64_t seed)
{
	return generate_scenario(scenario2_config(seed));
}

TraceWorkload ingest_trace(const std::string& path, const TraceRefinement& refinement, int resources)
{
	std::ifstream in(path);
	if (!in)
		throw Error("cannot open trace '" + path + "'");
	return ingest_trace_stream(in, refinement, resources);
}

TraceWorkload ingest_trace_stream(std::istream& in, const TraceRefinement& refinement, int resources)
{
	if (!(refinement.window_end_ms > refinement.window_start_ms))
		throw ValidationError("trace: window end must be after window start");
	if (!(refinement.cutoff > 1.0))
		throw ValidationError("trace: cutoff must be > 1");
	if (!(refinement.utilization > 0.0))
		throw ValidationError("trace: utilization must be > 0");
	if (resources < 1)
		throw ValidationError("trace: resources must be >= 1");

	TraceReport report;
	std::map<JobId, RawJob> raw;
	std::string text;
	std::size_t line = 0;
	while (std::getline(in, text)) {
		++line;
		text = trim(text);
		if (text.empty() || text[0] == '#')
			continue;
		if (text.rfind("job_id", 0) == 0)
			continue;
		std::vector<std::string> fields;
		std::stringstream ss(text);
		std::string field;
		while (std::getline(ss, field, ','))
			fields.push_back(trim(field));
		if (fields.size() != 4)
			throw ParseError("expected 4 fields, got " + std::to_string(fields.size()), line);
		if (fields[0].empty() || fields[1].empty())
			throw ParseError("empty job or user id", line);
		const double submit = parse_number(fields[2], line, "submit_ms");

		std::vector<double> tasks;
		std::stringstream ts(fields[3]);
		while (std::getline(ts, field, ';')) {
			const double d = parse_number(trim(field), line, "task_runtime_ms");
			if (!(d > 0.0))
				throw ParseError("task runtime must be > 0", line);
			tasks.push_back(d);
		}
		if (tasks.empty())
			throw ParseError("no task runtimes", line);

		auto [it, fresh] = raw.try_emplace(fields[0]);
		RawJob& job = it->second;
		if (fresh) {
			job.user = fields[1];
			job.submit_ms = submit;
		} else {
			if (job.user != fields[1])
				throw ParseError("job '" + fields[0] + "' changes user", line);
			job.submit_ms = std::min(job.submit_ms, submit);
		}
		job.tasks_ms.insert(job.tasks_ms.end(), tasks.begin(), tasks.end());
		++report.rows;
	}

	std::vector<std::pair<JobId, const RawJob*>> windowed;
	for (const auto& [id, job] : raw)
		if (job.submit_ms >= refinement.window_start_ms && job.submit_ms < refinement.window_end_ms)
			windowed.emplace_back(id, &job);
	report.jobs_in_window = windowed.size();
	if (windowed.empty())
		throw EmptyWindow("no trace jobs inside the window");

	std::vector<double> runtimes;
	for (const auto& [_, job] : windowed)
		runtimes.push_back(job->runtime_s());
	report.median_runtime = median(runtimes);
	const double limit = refinement.cutoff * report.median_runtime;
	std::erase_if(windowed, [&](const auto& entry) { return entry.second->runtime_s() > limit; });
	report.kept_jobs = windowed.size();
	report.dropped_jobs = report.jobs_in_window - report.kept_jobs;
	if (windowed.empty())
		throw EmptyWindow("every trace job in the window exceeded the cutoff");

	double raw_work = 0.0;
	double first_submit = windowed.front().second->submit_ms;
	for (const auto& [_, job] : windowed) {
		raw_work += job->runtime_s();
		first_submit = std::min(first_submit, job->submit_ms);
	}
	const double window_s = (refinement.window_end_ms - refinement.window_start_ms) / 1000.0;
	report.scale_factor = refinement.utilization * resources * window_s / raw_work;

	Workload w;
	std::map<UserId, double> user_work;
	for (const auto& [id, job] : windowed) {
		Job j;
		j.job_id = id;
		j.user_id = job->user;
		j.arrival_time = (job->submit_ms - first_submit) / 1000.0;
		std::vector<double> durations;
		for (double t : job->tasks_ms)
			durations.push_back(t / 1000.0 * report.scale_factor);
		j.stages.push_back(make_stage(id + "/s0", 0, std::move(durations)));
		const double work = job_slot_time(j);
		report.total_work += work;
		user_work[j.user_id] += work;
		w.jobs.push_back(std::move(j));
	}
	report.users = user_work.size();
	report.utilization = report.total_work / (resources * window_s);

	std::vector<double> shares;
	for (const auto& [_, work] : user_work)
		shares.push_back(work);
	std::sort(shares.rbegin(), shares.rend());
	double top = 0.0;
	for (std::size_t i = 0; i < std::min<std::size_t>(5, shares.size()); ++i)
		top += shares[i];
	report.top_user_share = top / report.total_work;

	return TraceWorkload{validate_workload(std::move(w), Cluster{resources}), report};
}

} // namespace uwfq
