#include "uwfq/fluid_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <set>
#include <tuple>

#include "uwfq/errors.hpp"

namespace uwfq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct FluidJob {
	JobId id;
	UserId user;
	double arrival = 0.0;
	double work = 0.0;
	double remaining = 0.0;
};

std::vector<FluidJob> fluid_jobs(const Workload& workload)
{
	std::vector<FluidJob> jobs;
	for (const auto& job : workload.jobs) {
		const double work = job_slot_time(job);
		jobs.push_back(FluidJob{job.job_id, job.user_id, job.arrival_time, work, work});
	}
	std::stable_sort(jobs.begin(), jobs.end(),
	                 [](const FluidJob& a, const FluidJob& b) { return a.arrival < b.arrival; });
	return jobs;
}

bool drained(const FluidJob& job)
{
	return job.remaining <= 1e-9 * std::max(1.0, job.work);
}

void check_resources(int resources)
{
	if (resources < 1)
		throw ValidationError("fluid oracle: resources must be >= 1");
}

// Splits `capacity` over `demands` so nobody gets more than it asks for and
// the rest share equally.
std::vector<double> water_fill(const std::vector<double>& demands, double capacity)
{
	std::vector<std::size_t> order(demands.size());
	std::iota(order.begin(), order.end(), 0);
	std::stable_sort(order.begin(), order.end(),
	                 [&](std::size_t a, std::size_t b) { return demands[a] < demands[b]; });
	std::vector<double> alloc(demands.size(), 0.0);
	double left = capacity;
	for (std::size_t i = 0; i < order.size(); ++i) {
		const double level = left / static_cast<double>(order.size() - i);
		const double take = std::min(demands[order[i]], level);
		alloc[order[i]] = take;
		left -= take;
	}
	return alloc;
}

} // namespace

double FluidSchedule::service_of(const JobId& job) const
{
	double sum = 0.0;
	for (const auto& seg : segments)
		if (seg.job_id == job)
			sum += (seg.end - seg.start) * seg.rate;
	return sum;
}

double FluidSchedule::total_service() const
{
	double sum = 0.0;
	for (const auto& seg : segments)
		sum += (seg.end - seg.start) * seg.rate;
	return sum;
}

FluidSchedule ujf_fluid(const Workload& workload, int resources)
{
	check_resources(resources);
	auto jobs = fluid_jobs(workload);
	FluidSchedule out;

	std::map<UserId, std::vector<std::size_t>> active;
	std::size_t next = 0;
	double t = 0.0;
	auto admit = [&] {
		while (next < jobs.size() && jobs[next].arrival <= t + kTimeEps) {
			active[jobs[next].user].push_back(next);
			++next;
		}
	};

	while (true) {
		if (active.empty()) {
			if (next == jobs.size())
				break;
			t = std::max(t, jobs[next].arrival);
			admit();
			continue;
		}

		const double user_share = resources / static_cast<double>(active.size());
		double step = next < jobs.size() ? jobs[next].arrival - t : kInf;
		for (const auto& [_, ids] : active) {
			const double rate = user_share / static_cast<double>(ids.size());
			for (std::size_t id : ids)
				step = std::min(step, jobs[id].remaining / rate);
		}
		step = std::max(step, 0.0);

		for (auto it = active.begin(); it != active.end();) {
			auto& ids = it->second;
			const double rate = user_share / static_cast<double>(ids.size());
			for (std::size_t id : ids) {
				jobs[id].remaining -= rate * step;
				if (step > 0.0)
					out.segments.push_back(FluidSegment{jobs[id].id, t, t + step, rate});
			}
			std::erase_if(ids, [&](std::size_t id) {
				if (!drained(jobs[id]))
					return false;
				out.finish_times[jobs[id].id] = t + step;
				return true;
			});
			it = ids.empty() ? active.erase(it) : std::next(it);
		}
		t += step;
		admit();
	}
	return out;
}

FluidSchedule two_level_virtual_fluid(const Workload& workload, int resources)
{
	check_resources(resources);
	const FluidSchedule fair = ujf_fluid(workload, resources);
	auto jobs = fluid_jobs(workload);
	FluidSchedule out;

	// Per user, pending jobs ranked by their user-level fair finish time.
	using Rank = std::tuple<double, double, JobId, std::size_t>;
	std::map<UserId, std::set<Rank>> active;
	std::size_t next = 0;
	double t = 0.0;
	auto admit = [&] {
		while (next < jobs.size() && jobs[next].arrival <= t + kTimeEps) {
			const auto& j = jobs[next];
			active[j.user].insert(Rank{fair.finish_times.at(j.id), j.arrival, j.id, next});
			++next;
		}
	};

	while (true) {
		if (active.empty()) {
			if (next == jobs.size())
				break;
			t = std::max(t, jobs[next].arrival);
			admit();
			continue;
		}

		const double rate = resources / static_cast<double>(active.size());
		double step = next < jobs.size() ? jobs[next].arrival - t : kInf;
		for (const auto& [_, ranks] : active)
			step = std::min(step, jobs[std::get<3>(*ranks.begin())].remaining / rate);
		step = std::max(step, 0.0);

		for (auto it = active.begin(); it != active.end();) {
			auto& ranks = it->second;
			FluidJob& head = jobs[std::get<3>(*ranks.begin())];
			head.remaining -= rate * step;
			if (step > 0.0)
				out.segments.push_back(FluidSegment{head.id, t, t + step, rate});
			if (drained(head)) {
				out.finish_times[head.id] = t + step;
				ranks.erase(ranks.begin());
			}
			it = ranks.empty() ? active.erase(it) : std::next(it);
		}
		t += step;
		admit();
	}
	return out;
}

FluidSchedule brute_force_fluid(const Workload& workload, int resources, double dt)
{
	check_resources(resources);
	if (!(dt > 0.0))
		throw ValidationError("brute force fluid: dt must be > 0");
	auto jobs = fluid_jobs(workload);
	FluidSchedule out;

	std::size_t next = 0;
	std::size_t finished = 0;
	std::vector<std::size_t> active;
	long long tick = 0;
	double t = 0.0;
	while (finished < jobs.size()) {
		while (next < jobs.size() && jobs[next].arrival <= t + kTimeEps)
			active.push_back(next++);
		if (active.empty()) {
			t = jobs[next].arrival;
			tick = static_cast<long long>(std::floor(t / dt));
			continue;
		}
		const double grid_end = static_cast<double>(tick + 1) * dt;
		if (grid_end <= t + kTimeEps) {
			++tick;
			continue;
		}

		double end = grid_end;
		if (next < jobs.size())
			end = std::min(end, jobs[next].arrival);
		const double h = end - t;

		std::map<UserId, std::vector<std::size_t>> by_user;
		for (std::size_t id : active)
			by_user[jobs[id].user].push_back(id);
		std::vector<double> demand;
		for (const auto& [_, ids] : by_user) {
			double d = 0.0;
			for (std::size_t id : ids)
				d += jobs[id].remaining;
			demand.push_back(d);
		}
		const auto user_alloc = water_fill(demand, resources * h);
		std::size_t u = 0;
		for (const auto& [_, ids] : by_user) {
			std::vector<double> rem;
			for (std::size_t id : ids)
				rem.push_back(jobs[id].remaining);
			const auto job_alloc = water_fill(rem, user_alloc[u++]);
			for (std::size_t k = 0; k < ids.size(); ++k) {
				FluidJob& j = jobs[ids[k]];
				if (h > 0.0)
					out.segments.push_back(FluidSegment{j.id, t, end, job_alloc[k] / h});
				j.remaining -= job_alloc[k];
			}
		}
		std::erase_if(active, [&](std::size_t id) {
			if (!drained(jobs[id]))
				return false;
			out.finish_times[jobs[id].id] = end;
			++finished;
			return true;
		});

		if (end >= grid_end - kTimeEps)
			++tick;
		t = end;
	}
	return out;
}

void write_finish_csv(const FluidSchedule& schedule, std::ostream& os)
{
	os << "job_id,finish_time\n";
	char buf[64];
	for (const auto& [id, f] : schedule.finish_times) {
		std::snprintf(buf, sizeof buf, "%.9f", f);
		os << id << ',' << buf << '\n';
	}
}

} // namespace uwfq
