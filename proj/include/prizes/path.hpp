#ifndef PRIZES_PATH_HPP
#define PRIZES_PATH_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "prizes/rules.hpp"

namespace prizes {

struct PathSample {
    double endowment = 0.0;
    Allocation allocation;
};

/// Allocations of one rule as the endowment grows; endowments strictly increase.
struct PathTrace {
    std::vector<PathSample> samples;
};

/// Samples E = 0, step, 2·step, ... and finally E_max. Default step 0.01 · max(1, E_max).
PathTrace trace_path(const RuleSpec& rule, std::size_t n, double max_endowment,
                     std::optional<double> step = std::nullopt, const SolverConfig& cfg = {});

}  // namespace prizes

#endif  // PRIZES_PATH_HPP
