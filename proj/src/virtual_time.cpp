#include "uwfq/virtual_time.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <tuple>

#include "uwfq/errors.hpp"

namespace uwfq {

namespace {

// Relative slack when deciding whether a user clock has reached a deadline.
double virtual_eps(double v)
{
	return 1e-9 * (1.0 + std::abs(v));
}

bool entry_before(const UserJobEntry& a, const UserJobEntry& b)
{
	return std::tie(a.user_deadline, a.arrival_time, a.job_id) <
	       std::tie(b.user_deadline, b.arrival_time, b.job_id);
}

} // namespace

double UserState::latest_global_deadline() const
{
	if (jobs.empty())
		throw EmptyUser("user '" + user_id + "' has no jobs");
	return jobs.back().global_deadline;
}

VirtualTimeKernel::VirtualTimeKernel(int total_resources, double grace_resource_seconds)
: resources_(total_resources), grace_(grace_resource_seconds)
{
	if (total_resources < 1)
		throw ValidationError("virtual time: resources must be >= 1");
	if (grace_resource_seconds < 0.0)
		throw ValidationError("virtual time: grace period must be >= 0");
}

void VirtualTimeKernel::check_clock(double t, const char* op) const
{
	if (t < t_previous_ - kTimeEps) {
		std::ostringstream msg;
		msg << op << ": time " << t << " is before previous update " << t_previous_;
		throw NonMonotonicClock(msg.str());
	}
}

const UserState* VirtualTimeKernel::find_user(const UserId& user) const
{
	auto it = users_.find(user);
	return it == users_.end() ? nullptr : &it->second;
}

double VirtualTimeKernel::deadline_of(const JobId& job) const
{
	auto it = deadlines_.find(job);
	if (it == deadlines_.end())
		throw MissingDeadline("job '" + job + "' has no deadline");
	return it->second;
}

void VirtualTimeKernel::create_user(const UserId& user, double weight)
{
	UserState state;
	state.user_id = user;
	state.v_arrival = v_global_;
	state.weight = weight;
	if (auto it = departed_.find(user); it != departed_.end()) {
		// Keep the user clock monotone across sessions; only its offset matters.
		state.v_user = it->second.v_user;
		departed_.erase(it);
	}
	users_.emplace(user, std::move(state));
}

void VirtualTimeKernel::reassign_global_deadlines(UserState& user)
{
	double previous = user.v_arrival;
	for (auto& entry : user.jobs) {
		entry.global_deadline = previous + entry.slot_time * user.weight;
		deadlines_[entry.job_id] = entry.global_deadline;
		previous = entry.global_deadline;
	}
}

double VirtualTimeKernel::assign_deadline(const UserId& user, const JobId& job, double now,
                                          double slot_time, double weight)
{
	if (!(slot_time > 0.0))
		throw ValidationError("job '" + job + "': slot time must be > 0");
	if (!(weight > 0.0))
		throw ValidationError("user '" + user + "': weight must be > 0");
	check_clock(now, "assign_deadline");

	update_virtual_time(now);
	if (!users_.count(user)) {
		if (!(departed_.count(user) && maybe_revive_user(user, now)))
			create_user(user, weight);
	}

	UserState& state = users_.at(user);
	state.weight = weight;

	UserJobEntry entry;
	entry.job_id = job;
	entry.slot_time = slot_time;
	entry.arrival_time = now;
	entry.user_deadline = state.v_user + slot_time * weight;
	auto pos = std::upper_bound(state.jobs.begin(), state.jobs.end(), entry, entry_before);
	state.jobs.insert(pos, entry);

	reassign_global_deadlines(state);
	dump("assign_deadline");
	return deadlines_.at(job);
}

double VirtualTimeKernel::get_user_finish_time(const UserState& user, double user_share) const
{
	const double latest = user.latest_global_deadline();
	return t_previous_ + (latest - v_global_) / user_share;
}

void VirtualTimeKernel::update_virtual_time(double now)
{
	check_clock(now, "update_virtual_time");
	now = std::max(now, t_previous_);

	while (!users_.empty()) {
		// The user whose last deadline comes first leaves first.
		auto next = users_.end();
		for (auto it = users_.begin(); it != users_.end(); ++it) {
			if (it->second.jobs.empty()) {
				next = it;
				break;
			}
			if (next == users_.end() ||
			    it->second.latest_global_deadline() < next->second.latest_global_deadline())
				next = it;
		}
		const double share = static_cast<double>(resources_) / static_cast<double>(users_.size());
		double finish = t_previous_;
		if (!next->second.jobs.empty())
			finish = std::max(get_user_finish_time(next->second, share), t_previous_);
		if (finish > now + kTimeEps)
			break;
		finish = std::min(finish, now);
		progress_virtual_time(finish, share);
		depart(next->first, finish);
	}

	if (users_.empty()) {
		// Nothing to serve: the global clock stands still.
		t_previous_ = now;
		record_point();
	} else {
		progress_virtual_time(now, static_cast<double>(resources_) / static_cast<double>(users_.size()));
	}
	dump("update_virtual_time");
}

void VirtualTimeKernel::progress_virtual_time(double t, double user_share)
{
	check_clock(t, "progress_virtual_time");
	t = std::max(t, t_previous_);
	v_global_ += (t - t_previous_) * user_share;
	for (auto& [_, user] : users_)
		update_user_virtual_time(user, user_share, t);
	t_previous_ = t;
	record_point();
}

void VirtualTimeKernel::update_user_virtual_time(UserState& user, double user_share, double t_current)
{
	check_clock(t_current, "update_user_virtual_time");
	double t_user_previous = t_previous_;
	double v_user = user.v_user;

	while (!user.jobs.empty()) {
		const UserJobEntry& first = user.jobs.front();
		const double job_share = user_share / static_cast<double>(user.jobs.size());
		const double assumed = v_user + (t_current - t_user_previous) * job_share;
		if (first.user_deadline > assumed + virtual_eps(first.user_deadline))
			break;
		const double spent = std::max(0.0, first.user_deadline - v_user);
		v_user += spent;
		t_user_previous = std::min(t_current, t_user_previous + spent / job_share);
		user.v_arrival += first.slot_time * user.weight;
		retired_.push_back({first.job_id, t_user_previous});
		user.jobs.erase(user.jobs.begin());
	}
	if (!user.jobs.empty()) {
		const double job_share = user_share / static_cast<double>(user.jobs.size());
		v_user += (t_current - t_user_previous) * job_share;
	}
	user.v_user = v_user;
}

void VirtualTimeKernel::depart(const UserId& user, double wall_time)
{
	auto it = users_.find(user);
	UserState& state = it->second;
	// Rounding can leave the last job a hair short of its deadline.
	for (const auto& entry : state.jobs) {
		state.v_arrival += entry.slot_time * state.weight;
		retired_.push_back({entry.job_id, wall_time});
		state.v_user = std::max(state.v_user, entry.user_deadline);
	}
	departed_[user] = DepartedUser{v_global_, state.v_arrival, state.v_user, state.weight, wall_time};
	departures_.push_back({user, wall_time});
	users_.erase(it);
}

bool VirtualTimeKernel::maybe_revive_user(const UserId& user, double now)
{
	if (users_.count(user))
		return false;
	if (!departed_.count(user))
		throw UnknownUser("user '" + user + "' never departed");
	update_virtual_time(now);
	auto it = departed_.find(user);
	if (it == departed_.end())
		return false;
	const DepartedUser& gone = it->second;
	if (!(v_global_ < gone.v_global_end + grace_ * static_cast<double>(resources_)))
		return false;

	UserState state;
	state.user_id = user;
	state.v_arrival = gone.v_arrival;
	state.v_user = gone.v_user;
	state.weight = gone.weight;
	departed_.erase(it);
	users_.emplace(user, std::move(state));
	dump("maybe_revive_user");
	return true;
}

void VirtualTimeKernel::record_point()
{
	auto& last = trajectory_.back();
	if (t_previous_ == last.first && v_global_ == last.second)
		return;
	trajectory_.emplace_back(t_previous_, v_global_);
}

std::optional<double> VirtualTimeKernel::wall_time_at(double v) const
{
	const double eps = virtual_eps(v);
	if (trajectory_.front().second >= v - eps)
		return trajectory_.front().first;
	for (std::size_t i = 1; i < trajectory_.size(); ++i) {
		const auto& [t1, v1] = trajectory_[i];
		if (v1 >= v - eps) {
			const auto& [t0, v0] = trajectory_[i - 1];
			if (v1 <= v0)
				return t1;
			const double frac = std::clamp((v - v0) / (v1 - v0), 0.0, 1.0);
			return t0 + frac * (t1 - t0);
		}
	}
	return std::nullopt;
}

void VirtualTimeKernel::dump(const char* op) const
{
	if (!debug_)
		return;
	auto& os = *debug_;
	os << std::setprecision(12) << op << " t=" << t_previous_ << " V_global=" << v_global_;
	for (const auto& [id, user] : users_) {
		os << " | " << id << " V_user=" << user.v_user << " V_arrival=" << user.v_arrival << " [";
		for (std::size_t i = 0; i < user.jobs.size(); ++i) {
			const auto& e = user.jobs[i];
			os << (i ? " " : "") << e.job_id << ':' << e.user_deadline << '/' << e.global_deadline;
		}
		os << ']';
	}
	os << '\n';
}

} // namespace uwfq
