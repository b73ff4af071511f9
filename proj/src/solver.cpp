#include "prizes/solver.hpp"

#include <algorithm>
#include <cmath>

#include "prizes/core.hpp"

namespace prizes {

double SolverConfig::residual_for(double endowment) const {
    return residual_tol.value_or(1e-10 * std::max(1.0, endowment));
}

double iterate_f(const MonotoneFn& f, double x, std::size_t k) {
    double v = x;
    for (std::size_t step = 0; step < k; ++step) v = f(v);
    return v;
}

double solve_level(const FunctionSequence& fs, std::size_t n, double endowment,
                   const SolverConfig& cfg) {
    if (n == 0) throw Error(ErrorCode::invalid_rule_params, "level equation needs n >= 1");
    if (!(endowment >= 0.0) || !std::isfinite(endowment)) {
        throw Error(ErrorCode::negative_endowment, "level equation needs finite E >= 0");
    }
    if (endowment == 0.0 || n == 1) return endowment;

    const double tol = cfg.residual_for(endowment);
    double lo = 0.0;
    double hi = endowment;
    double lo_res = endowment;                          // E − g(lo) ≥ 0
    double hi_res = fs.total(n, hi) - endowment;        // g(hi) − E ≥ 0
    for (int iter = 0; iter < cfg.max_iter; ++iter) {
        if (hi_res == 0.0) return hi;
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi) break;
        const double g = fs.total(n, mid);
        if (g < endowment) {
            lo = mid;
            lo_res = endowment - g;
        } else {
            hi = mid;
            hi_res = g - endowment;
        }
    }
    const double x = lo_res < hi_res ? lo : hi;
    const double residual = std::min(lo_res, hi_res);
    if (!(residual <= tol)) {
        throw Error(ErrorCode::solver_failure,
                    "level equation residual " + std::to_string(residual) +
                        " above tolerance after " + std::to_string(cfg.max_iter) +
                        " iterations");
    }
    return x;
}

std::optional<std::size_t> interval_locate(const IntervalList& intervals, double average) {
    // Sorted and disjoint, so the first interval whose upper end reaches `average`
    // is the only candidate (a shared endpoint goes to the earlier interval).
    const auto& list = intervals.intervals();
    const auto it = std::lower_bound(list.begin(), list.end(), average,
                                     [](const Interval& iv, double v) { return iv.upper < v; });
    if (it == list.end() || it->lower > average) return std::nullopt;
    return static_cast<std::size_t>(it - list.begin());
}

}  // namespace prizes
