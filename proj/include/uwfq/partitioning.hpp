#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "uwfq/core_model.hpp"

namespace uwfq {

struct PartitionPlan {
	std::vector<std::vector<WorkUnit>> tasks;
	std::size_t partition_count = 0;

	double task_duration(std::size_t i) const;
	double max_task_duration() const;
	double total_work() const;
};

// Advisory task runtime: the desired duration of a single task.
struct AtrConfig {
	double atr = 1.0;
};

enum class PartitionerKind { Static, Runtime };

struct PartitionerConfig {
	PartitionerKind kind = PartitionerKind::Static;
	AtrConfig atr{};
	// Constant added to every task's runtime; models per-task launch cost.
	double task_overhead = 0.0;
};

// Size-based grouping into at most `cores` tasks; large units stay whole.
PartitionPlan static_partition(const Stage& stage, int cores);

// ceil(estimated_runtime / atr) tasks, after splitting units longer than atr.
PartitionPlan runtime_partition(const Stage& stage, const AtrConfig& cfg);

// Smallest partition count adaptive coalescing may shrink a stage to.
int coalesce_floor(const Stage& stage, const AtrConfig& cfg, int initial = 200);

PartitionPlan partition(const Stage& stage, const PartitionerConfig& cfg, int cores);

PartitionerKind parse_partitioner(std::string_view name);
std::string_view partitioner_name(PartitionerKind kind);

} // namespace uwfq
