#ifndef PRIZES_SOLVER_HPP
#define PRIZES_SOLVER_HPP

#include <cstddef>
#include <optional>

#include "prizes/functions.hpp"

namespace prizes {

struct SolverConfig {
    /// Unset means 1e-10 · max(1, E).
    std::optional<double> residual_tol;
    int max_iter = 200;

    double residual_for(double endowment) const;
};

/// f applied k times; k = 0 returns x.
double iterate_f(const MonotoneFn& f, double x, std::size_t k);

/// The unique x ≥ 0 with Σ_{k≤n} f_k(x) = E, by bisection on [0, E].
///
/// g(x) = Σ f_k(x) is continuous with g(0) = 0 and g(E) ≥ f_1(E) = E, and it is
/// strictly increasing because f_1 is the identity, so the bracket always holds
/// the root. Bisection runs until the bracket collapses to adjacent doubles;
/// throws SolverFailure if max_iter is hit with the residual still above tolerance.
double solve_level(const FunctionSequence& fs, std::size_t n, double endowment,
                   const SolverConfig& cfg = {});

/// First interval (0-based) whose closure holds `average`, if any.
std::optional<std::size_t> interval_locate(const IntervalList& intervals, double average);

}  // namespace prizes

#endif  // PRIZES_SOLVER_HPP
