#include "uwfq/workload_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "uwfq/errors.hpp"

namespace uwfq {

using nlohmann::json;

Workload parse_workload_json(const std::string& text)
{
	json doc;
	try {
		doc = json::parse(text);
	} catch (const json::parse_error& e) {
		throw ValidationError(std::string("workload json: ") + e.what());
	}

	Workload w;
	try {
		if (doc.contains("users")) {
			for (const auto& u : doc.at("users")) {
				const auto id = u.at("id").get<std::string>();
				w.user_weight[id] = u.value("weight", 1.0);
				if (u.contains("class"))
					w.user_class[id] = u.at("class").get<std::string>();
			}
		}
		for (const auto& j : doc.at("jobs")) {
			Job job;
			job.job_id = j.at("id").get<std::string>();
			job.user_id = j.at("user").get<std::string>();
			job.arrival_time = j.value("arrival", 0.0);
			std::size_t idx = 0;
			for (const auto& s : j.at("stages")) {
				auto stage = make_stage(job.job_id + "/s" + std::to_string(idx), idx,
				                        s.at("units").get<std::vector<double>>());
				if (s.contains("estimated_runtime"))
					stage.estimated_runtime = s.at("estimated_runtime").get<double>();
				job.stages.push_back(std::move(stage));
				++idx;
			}
			w.jobs.push_back(std::move(job));
		}
	} catch (const json::exception& e) {
		throw ValidationError(std::string("workload json: ") + e.what());
	}
	return w;
}

Workload load_workload_file(const std::string& path)
{
	std::ifstream in(path);
	if (!in)
		throw ValidationError("cannot open workload file '" + path + "'");
	std::stringstream buf;
	buf << in.rdbuf();
	return parse_workload_json(buf.str());
}

std::string workload_to_json(const Workload& workload)
{
	json doc;
	doc["users"] = json::array();
	std::map<UserId, bool> users;
	for (const auto& job : workload.jobs)
		users[job.user_id] = true;
	for (const auto& [user, _] : users) {
		json u{{"id", user}, {"weight", workload.weight_of(user)}};
		if (workload.user_class.count(user))
			u["class"] = workload.user_class.at(user);
		doc["users"].push_back(u);
	}
	doc["jobs"] = json::array();
	for (const auto& job : workload.jobs) {
		json j{{"id", job.job_id}, {"user", job.user_id}, {"arrival", job.arrival_time}};
		j["stages"] = json::array();
		for (const auto& stage : job.stages) {
			std::vector<double> units;
			for (const auto& u : stage.work_units)
				units.push_back(u.duration);
			j["stages"].push_back(json{{"units", units}, {"estimated_runtime", stage.estimated_runtime}});
		}
		doc["jobs"].push_back(j);
	}
	return doc.dump(2);
}

} // namespace uwfq
