#include "uwfq/partitioning.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "uwfq/errors.hpp"

namespace uwfq {

namespace {

// ceil() that ignores representation noise just above an integer.
long long tolerant_ceil(double x)
{
	return static_cast<long long>(std::ceil(x - 1e-9));
}

// Longest-processing-time packing of `units` into `bins` groups.
std::vector<std::vector<WorkUnit>> lpt_pack(std::vector<WorkUnit> units, std::size_t bins)
{
	std::stable_sort(units.begin(), units.end(),
	                 [](const WorkUnit& a, const WorkUnit& b) { return a.duration > b.duration; });
	bins = std::max<std::size_t>(1, std::min(bins, units.size()));

	using Load = std::pair<double, std::size_t>;
	std::priority_queue<Load, std::vector<Load>, std::greater<>> lightest;
	for (std::size_t i = 0; i < bins; ++i)
		lightest.emplace(0.0, i);

	std::vector<std::vector<WorkUnit>> groups(bins);
	for (const auto& unit : units) {
		auto [load, idx] = lightest.top();
		lightest.pop();
		groups[idx].push_back(unit);
		lightest.emplace(load + unit.duration, idx);
	}
	return groups;
}

PartitionPlan make_plan(std::vector<std::vector<WorkUnit>> groups)
{
	PartitionPlan plan;
	plan.tasks = std::move(groups);
	plan.partition_count = plan.tasks.size();
	return plan;
}

long long atr_count(const Stage& stage, const AtrConfig& cfg)
{
	if (!(cfg.atr > 0.0))
		throw ValidationError("atr must be > 0");
	return std::max<long long>(1, tolerant_ceil(stage.estimated_runtime / cfg.atr));
}

} // namespace

double PartitionPlan::task_duration(std::size_t i) const
{
	double sum = 0.0;
	for (const auto& unit : tasks.at(i))
		sum += unit.duration;
	return sum;
}

double PartitionPlan::max_task_duration() const
{
	double best = 0.0;
	for (std::size_t i = 0; i < tasks.size(); ++i)
		best = std::max(best, task_duration(i));
	return best;
}

double PartitionPlan::total_work() const
{
	double sum = 0.0;
	for (std::size_t i = 0; i < tasks.size(); ++i)
		sum += task_duration(i);
	return sum;
}

PartitionPlan static_partition(const Stage& stage, int cores)
{
	if (cores < 1)
		throw ValidationError("static partitioning needs at least one core");
	return make_plan(lpt_pack(stage.work_units, static_cast<std::size_t>(cores)));
}

PartitionPlan runtime_partition(const Stage& stage, const AtrConfig& cfg)
{
	const auto target = static_cast<std::size_t>(atr_count(stage, cfg));

	std::vector<WorkUnit> pieces;
	for (const auto& unit : stage.work_units) {
		const long long k = std::max<long long>(1, tolerant_ceil(unit.duration / cfg.atr));
		const double piece = unit.duration / static_cast<double>(k);
		double left = unit.duration;
		for (long long i = 0; i + 1 < k; ++i) {
			pieces.push_back(WorkUnit{piece});
			left -= piece;
		}
		// The last piece absorbs rounding so the unit's total is preserved.
		pieces.push_back(WorkUnit{left});
	}
	return make_plan(lpt_pack(std::move(pieces), target));
}

int coalesce_floor(const Stage& stage, const AtrConfig& cfg, int initial)
{
	if (initial < 1)
		throw ValidationError("initial partition count must be >= 1");
	return static_cast<int>(std::min<long long>(initial, atr_count(stage, cfg)));
}

PartitionPlan partition(const Stage& stage, const PartitionerConfig& cfg, int cores)
{
	switch (cfg.kind) {
	case PartitionerKind::Static:
		return static_partition(stage, cores);
	case PartitionerKind::Runtime:
		return runtime_partition(stage, cfg.atr);
	}
	return static_partition(stage, cores);
}

PartitionerKind parse_partitioner(std::string_view name)
{
	if (name == "static")
		return PartitionerKind::Static;
	if (name == "runtime")
		return PartitionerKind::Runtime;
	throw ValidationError("unknown partitioner '" + std::string(name) + "' (expected static|runtime)");
}

std::string_view partitioner_name(PartitionerKind kind)
{
	return kind == PartitionerKind::Static ? "static" : "runtime";
}

} // namespace uwfq
