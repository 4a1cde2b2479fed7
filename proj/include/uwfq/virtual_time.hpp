#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <vector>

#include "uwfq/core_model.hpp"

namespace uwfq {

// One job in a user's deadline-ordered set.
struct UserJobEntry {
	JobId job_id;
	double slot_time = 0.0;       // L
	double arrival_time = 0.0;    // wall time of assignment, used for ties
	double user_deadline = 0.0;   // D_user, user-virtual units
	double global_deadline = 0.0; // D_global, global-virtual units
};

struct UserState {
	UserId user_id;
	double v_user = 0.0;
	double v_arrival = 0.0;
	double weight = 1.0;
	// Sorted by (user_deadline, arrival_time, job_id).
	std::vector<UserJobEntry> jobs;

	double latest_global_deadline() const;
};

struct DepartedUser {
	double v_global_end = 0.0;
	double v_arrival = 0.0;
	double v_user = 0.0;
	double weight = 1.0;
	double wall_time = 0.0;
};

struct KernelEvent {
	std::string id;
	double wall_time = 0.0;
};

// Two-level virtual time: a global clock advancing at each active user's share
// R/|users| and a per-user clock advancing at each of that user's job shares.
// Job deadlines in the global clock order every job in the system.
//
// Not thread-safe; callers serialize all operations.
class VirtualTimeKernel {
public:
	explicit VirtualTimeKernel(int total_resources, double grace_resource_seconds = 2.0);

	// Registers a job and returns its global deadline. Revives a recently
	// departed user when the grace window allows it.
	double assign_deadline(const UserId& user, const JobId& job, double now, double slot_time,
	                       double weight = 1.0);

	// Advances both clock levels to `now`, retiring users whose last job
	// finished in the meantime.
	void update_virtual_time(double now);

	double get_user_finish_time(const UserState& user, double user_share) const;
	void progress_virtual_time(double t, double user_share);
	void update_user_virtual_time(UserState& user, double user_share, double t_current);

	// True iff the departed user came back within the grace window; it then
	// keeps its previous virtual arrival time.
	bool maybe_revive_user(const UserId& user, double now);

	double v_global() const { return v_global_; }
	double t_previous() const { return t_previous_; }
	int resources() const { return resources_; }
	double grace() const { return grace_; }

	const std::map<UserId, UserState>& users() const { return users_; }
	std::map<UserId, UserState>& mutable_users() { return users_; }
	const std::map<UserId, DepartedUser>& departed() const { return departed_; }
	const UserState* find_user(const UserId& user) const;

	// Last global deadline assigned to the job; kept after the job retires.
	double deadline_of(const JobId& job) const;
	bool has_deadline(const JobId& job) const { return deadlines_.count(job) != 0; }

	// Jobs retired by the per-user clock, with the wall time they finished at.
	const std::vector<KernelEvent>& retired_jobs() const { return retired_; }
	const std::vector<KernelEvent>& departures() const { return departures_; }

	// Earliest wall time at which the global clock reached `v`, interpolated
	// over the recorded trajectory; nullopt if it has not got there yet.
	std::optional<double> wall_time_at(double v) const;

	// Writes one line per public operation when set.
	void set_debug_stream(std::ostream* os) { debug_ = os; }

private:
	void depart(const UserId& user, double wall_time);
	void create_user(const UserId& user, double weight);
	void reassign_global_deadlines(UserState& user);
	void check_clock(double t, const char* op) const;
	void record_point();
	void dump(const char* op) const;

	int resources_;
	double grace_;
	double v_global_ = 0.0;
	double t_previous_ = 0.0;
	std::map<UserId, UserState> users_;
	std::map<UserId, DepartedUser> departed_;
	std::map<JobId, double> deadlines_;
	std::vector<KernelEvent> retired_;
	std::vector<KernelEvent> departures_;
	std::vector<std::pair<double, double>> trajectory_{{0.0, 0.0}};
	std::ostream* debug_ = nullptr;
};

} // namespace uwfq
