#include "uwfq/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "uwfq/errors.hpp"

namespace uwfq {

namespace {

const JobSpan& span_of(const ExecutionTrace& trace, const JobId& job)
{
	const auto it = trace.job_spans.find(job);
	if (it == trace.job_spans.end() || !(it->second.end_time > it->second.submit_time))
		throw IncompleteJob("job '" + job + "' has no completed span");
	return it->second;
}

std::string num(double v)
{
	char buf[64];
	std::snprintf(buf, sizeof buf, "%.9f", v);
	return buf;
}

double mean_of(const std::vector<double>& v, std::size_t from, std::size_t to)
{
	if (to <= from)
		return 0.0;
	double sum = 0.0;
	for (std::size_t i = from; i < to; ++i)
		sum += v[i];
	return sum / static_cast<double>(to - from);
}

} // namespace

double response_time(const ExecutionTrace& trace, const JobId& job)
{
	const auto& span = span_of(trace, job);
	return span.end_time - span.submit_time;
}

double slowdown(const ExecutionTrace& trace, const JobId& job, double rt_idle)
{
	if (!(rt_idle > 0.0))
		throw ValidationError("slowdown: idle response time must be > 0");
	return response_time(trace, job) / rt_idle;
}

double deadline_ratio(const ExecutionTrace& target, const ExecutionTrace& ujf, const JobId& job)
{
	const auto& t = span_of(target, job);
	const auto& u = span_of(ujf, job);
	return (t.end_time - u.end_time) / (u.end_time - u.submit_time);
}

RatioSummary dvr(const std::vector<double>& ratios, bool strict)
{
	double sum = 0.0;
	std::size_t count = 0;
	for (double r : ratios) {
		sum += std::max(0.0, r);
		if (strict ? r > 1.0 : r > 0.0)
			++count;
	}
	return {count ? sum / static_cast<double>(count) : 0.0, count};
}

RatioSummary dsr(const std::vector<double>& ratios, bool strict)
{
	double sum = 0.0;
	std::size_t count = 0;
	for (double r : ratios) {
		sum += std::max(0.0, -r);
		if (strict ? r <= 1.0 : r <= 0.0)
			++count;
	}
	return {count ? sum / static_cast<double>(count) : 0.0, count};
}

std::map<UserId, double> per_user_ratios(const ExecutionTrace& target, const ExecutionTrace& ujf)
{
	std::map<UserId, std::pair<double, double>> sums;
	for (const auto& [id, span] : ujf.job_spans) {
		auto& s = sums[span.user_id];
		s.first += response_time(target, id);
		s.second += response_time(ujf, id);
	}
	std::map<UserId, double> out;
	for (const auto& [user, s] : sums)
		out[user] = (s.first - s.second) / s.second;
	return out;
}

std::vector<std::pair<double, double>> ecdf(std::vector<double> values)
{
	std::sort(values.begin(), values.end());
	std::vector<std::pair<double, double>> out;
	const double n = static_cast<double>(values.size());
	for (std::size_t i = 0; i < values.size(); ++i) {
		if (i + 1 < values.size() && values[i + 1] == values[i])
			continue;
		out.emplace_back(values[i], static_cast<double>(i + 1) / n);
	}
	return out;
}

void write_ecdf_csv(const std::vector<double>& values, std::ostream& os)
{
	for (const auto& [v, f] : ecdf(values))
		os << num(v) << ',' << num(f) << '\n';
}

void ecdf_export(const std::vector<double>& values, const std::string& path)
{
	std::ofstream out(path);
	if (!out)
		throw Error("cannot write '" + path + "'");
	write_ecdf_csv(values, out);
	if (!out)
		throw Error("write failed for '" + path + "'");
}

MetricsReport build_report(const ExecutionTrace& trace, const ExecutionTrace* ujf,
                           const ReportOptions& options)
{
	MetricsReport report;
	report.has_comparison = ujf != nullptr;
	std::vector<double> ratios;
	std::map<UserId, std::vector<double>> user_ratios;
	std::map<std::string, std::pair<double, std::size_t>> by_class;

	for (const auto& [id, span] : trace.job_spans) {
		JobMetrics m;
		m.job_id = id;
		m.user_id = span.user_id;
		m.response_time = response_time(trace, id);
		if (const auto it = options.idle_rt.find(id); it != options.idle_rt.end())
			m.slowdown = slowdown(trace, id, it->second);
		if (ujf) {
			m.ratio = deadline_ratio(trace, *ujf, id);
			ratios.push_back(m.ratio);
			user_ratios[m.user_id].push_back(m.ratio);
		}
		auto& u = report.users[m.user_id];
		++u.jobs;
		u.mean_rt += m.response_time;
		u.mean_slowdown += m.slowdown;
		report.mean_rt += m.response_time;
		report.mean_slowdown += m.slowdown;

		const auto cls = options.user_class.find(m.user_id);
		auto& c = by_class[cls == options.user_class.end() ? "default" : cls->second];
		c.first += m.response_time;
		++c.second;
		report.jobs.push_back(std::move(m));
	}

	const std::size_t n = report.jobs.size();
	if (n == 0)
		return report;
	report.mean_rt /= static_cast<double>(n);
	report.mean_slowdown /= static_cast<double>(n);
	for (auto& [user, u] : report.users) {
		u.mean_rt /= static_cast<double>(u.jobs);
		u.mean_slowdown /= static_cast<double>(u.jobs);
		if (ujf) {
			u.dvr = dvr(user_ratios[user], options.strict);
			u.dsr = dsr(user_ratios[user], options.strict);
		}
	}
	for (const auto& [cls, c] : by_class)
		report.class_mean_rt[cls] = c.first / static_cast<double>(c.second);
	if (ujf) {
		report.dvr = dvr(ratios, options.strict);
		report.dsr = dsr(ratios, options.strict);
	}

	std::vector<const JobMetrics*> ranked;
	for (const auto& m : report.jobs)
		ranked.push_back(&m);
	std::sort(ranked.begin(), ranked.end(), [](const JobMetrics* a, const JobMetrics* b) {
		return a->response_time != b->response_time ? a->response_time < b->response_time
		                                            : a->job_id < b->job_id;
	});
	std::vector<double> rts;
	for (const auto* m : ranked)
		rts.push_back(m->response_time);
	const auto c80 = static_cast<std::size_t>(std::floor(0.8 * static_cast<double>(n)));
	const auto c95 = static_cast<std::size_t>(std::floor(0.95 * static_cast<double>(n)));
	report.band_0_80 = mean_of(rts, 0, c80);
	report.band_80_95 = mean_of(rts, c80, c95);
	report.band_95_100 = mean_of(rts, c95, n);
	report.band_sizes[0] = c80;
	report.band_sizes[1] = c95 - c80;
	report.band_sizes[2] = n - c95;
	const auto worst = static_cast<std::size_t>(std::ceil(0.1 * static_cast<double>(n)));
	report.worst10_rt = mean_of(rts, n - worst, n);
	return report;
}

void write_report_csv(const MetricsReport& report, std::ostream& os)
{
	os << "job_id,user_id,response_time,slowdown,ratio\n";
	for (const auto& m : report.jobs)
		os << m.job_id << ',' << m.user_id << ',' << num(m.response_time) << ',' << num(m.slowdown)
		   << ',' << num(m.ratio) << '\n';
}

void write_summary(const MetricsReport& report, std::ostream& os)
{
	os << "jobs=" << report.jobs.size() << '\n';
	os << "mean_rt=" << num(report.mean_rt) << '\n';
	os << "mean_slowdown=" << num(report.mean_slowdown) << '\n';
	os << "worst10_rt=" << num(report.worst10_rt) << '\n';
	os << "band_0_80=" << num(report.band_0_80) << '\n';
	os << "band_80_95=" << num(report.band_80_95) << '\n';
	os << "band_95_100=" << num(report.band_95_100) << '\n';
	if (report.has_comparison) {
		os << "dvr=" << num(report.dvr.value) << '\n';
		os << "violations=" << report.dvr.count << '\n';
		os << "dsr=" << num(report.dsr.value) << '\n';
		os << "slack=" << report.dsr.count << '\n';
	}
	for (const auto& [cls, rt] : report.class_mean_rt)
		os << "class." << cls << ".mean_rt=" << num(rt) << '\n';
	for (const auto& [user, u] : report.users) {
		os << "user." << user << ".jobs=" << u.jobs << '\n';
		os << "user." << user << ".mean_rt=" << num(u.mean_rt) << '\n';
		if (report.has_comparison) {
			os << "user." << user << ".dvr=" << num(u.dvr.value) << '\n';
			os << "user." << user << ".dsr=" << num(u.dsr.value) << '\n';
		}
	}
}

} // namespace uwfq
