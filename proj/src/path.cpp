#include "prizes/path.hpp"

#include <cmath>

namespace prizes {

PathTrace trace_path(const RuleSpec& rule, std::size_t n, double max_endowment,
                     std::optional<double> step, const SolverConfig& cfg) {
    if (!(max_endowment >= 0.0) || !std::isfinite(max_endowment)) {
        throw Error(ErrorCode::negative_endowment, "path needs a finite E_max >= 0");
    }
    const double h = step.value_or(0.01 * std::max(1.0, max_endowment));
    if (!(h > 0.0)) throw Error(ErrorCode::invalid_rule_params, "path step must be positive");

    const auto base = make_competition(n, 0.0);
    PathTrace trace;
    // Grid points within half a step of E_max are replaced by E_max itself.
    for (std::size_t k = 0;; ++k) {
        const double e = static_cast<double>(k) * h;
        if (e >= max_endowment - 0.5 * h) break;
        trace.samples.push_back({e, allocate(rule, base.with_endowment(e), cfg)});
    }
    trace.samples.push_back(
        {max_endowment, allocate(rule, base.with_endowment(max_endowment), cfg)});
    return trace;
}

}  // namespace prizes
