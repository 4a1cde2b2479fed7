#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "uwfq/core_model.hpp"

namespace uwfq::test {

inline Job make_job(const std::string& id, const std::string& user, double arrival,
                    const std::vector<std::vector<double>>& stages)
{
	Job job;
	job.job_id = id;
	job.user_id = user;
	job.arrival_time = arrival;
	for (std::size_t s = 0; s < stages.size(); ++s)
		job.stages.push_back(make_stage(id + "/s" + std::to_string(s), s, stages[s]));
	return job;
}

inline Workload make_workload(std::vector<Job> jobs, int cores = 32)
{
	return validate_workload(std::move(jobs), Cluster{cores});
}

struct CorpusOptions {
	int max_users = 8;
	int max_jobs = 8;
	double min_slot = 0.5;
	double max_slot = 20.0;
	double max_arrival = 60.0;
	int max_tasks = 8;
	// Every job of a user arrives at the user's first arrival.
	bool user_batches = false;
};

// Random single-stage jobs: slot time uniform in [min_slot, max_slot], split
// into 1..max_tasks tasks of random relative size.
inline Workload random_workload(std::uint64_t seed, const CorpusOptions& opt = {})
{
	std::mt19937_64 rng(seed);
	std::uniform_int_distribution<int> users_dist(1, opt.max_users);
	std::uniform_int_distribution<int> jobs_dist(1, opt.max_jobs);
	std::uniform_int_distribution<int> tasks_dist(1, opt.max_tasks);
	std::uniform_real_distribution<double> slot_dist(opt.min_slot, opt.max_slot);
	std::uniform_real_distribution<double> arrival_dist(0.0, opt.max_arrival);
	std::uniform_real_distribution<double> weight_dist(0.2, 1.0);

	std::vector<Job> jobs;
	const int users = users_dist(rng);
	for (int u = 0; u < users; ++u) {
		const std::string user = "u" + std::to_string(u);
		const int n = jobs_dist(rng);
		const double batch_arrival = arrival_dist(rng);
		for (int j = 0; j < n; ++j) {
			const double slot = slot_dist(rng);
			const int k = tasks_dist(rng);
			std::vector<double> w(k);
			double total = 0.0;
			for (auto& x : w)
				total += (x = weight_dist(rng));
			for (auto& x : w)
				x *= slot / total;
			const double arrival = opt.user_batches ? batch_arrival : arrival_dist(rng);
			jobs.push_back(make_job(user + "-j" + std::to_string(j), user, arrival, {w}));
		}
	}
	return make_workload(std::move(jobs));
}

} // namespace uwfq::test
