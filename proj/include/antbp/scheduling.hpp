#pragma once
// Link activation under interference: distributed greedy (LGS), plain greedy,
// and an exact max-weight solver for small instances.
#include <vector>

#include "antbp/topology.hpp"

namespace antbp {

// active[e] == 1 when link e transmits this slot
using Schedule = std::vector<uint8_t>;

// Local greedy: in rounds, every undecided link whose utility strictly beats
// all undecided conflicting neighbors (ties to the lower id) activates and
// silences its neighbors. Zero-utility links never activate.
Schedule lgs_schedule(const ConflictGraph& cg, const std::vector<double>& utility);

// Centralized: scan links by descending utility (ties to the lower id), take
// what fits.
Schedule greedy_schedule(const ConflictGraph& cg, const std::vector<double>& utility);

// Exact max-weight independent set by branch and bound. Guard for tests:
// throws if more than 24 links carry positive utility.
Schedule exact_mwis(const ConflictGraph& cg, const std::vector<double>& utility);

bool schedule_is_independent(const ConflictGraph& cg, const Schedule& s);
// no inactive positive-utility link could be added without a conflict
bool schedule_is_maximal(const ConflictGraph& cg, const std::vector<double>& utility,
                         const Schedule& s);
double schedule_weight(const std::vector<double>& utility, const Schedule& s);

}  // namespace antbp
