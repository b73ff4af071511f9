#ifndef PRIZES_ANALYSIS_HPP
#define PRIZES_ANALYSIS_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "prizes/axioms.hpp"
#include "prizes/core.hpp"
#include "prizes/rules.hpp"

namespace prizes {

struct FitTolerances {
    double rel = 0.01;
    /// Absolute slack subtracted from every deviation before it is made relative.
    /// Use 1 for data rounded to whole units (thousands of dollars in the bundled sets).
    double abs_slack = 0.0;
};

struct FitReport {
    std::string family;  // "geometric", "proportional", "interval-pattern", "scale-invariance"
    /// Named scalars: lambda; or a, b, x, split.
    std::vector<std::pair<std::string, double>> parameters;
    /// Share vector in percent (proportional, scale-invariance); empty otherwise.
    std::vector<double> shares;
    /// Fitted prizes, one vector per event.
    std::vector<std::vector<double>> reconstructed;
    double max_rel_dev = 0.0;
    double tolerance = 0.01;
    bool verdict = false;  // max_rel_dev <= tolerance
    std::vector<std::string> warnings;

    std::optional<double> parameter(const std::string& name) const;

    friend bool operator==(const FitReport&, const FitReport&) = default;
};

enum class Tier { consistent_shape, locally_consistent, top_consistent, unordered };

const char* to_string(Tier tier);

struct Classification {
    bool order_preserved = true;
    FitReport geometric;
    FitReport proportional;
    FitReport interval_pattern;
    std::optional<FitReport> scale_invariant_across_events;  // only with two or more events
    Tier tier = Tier::unordered;

    friend bool operator==(const Classification&, const Classification&) = default;
};

/// λ̂ is the geometric mean of consecutive ratios over strictly positive pairs.
/// A block of trailing zeros is compatible only with λ = 0 after the winner.
FitReport fit_geometric(const PrizeTable& table, const FitTolerances& tol = {});

FitReport fit_proportional(const EventSet& events, const FitTolerances& tol = {});

/// Same share vector as fit_proportional, without the monotonicity requirement.
FitReport fit_scale_invariance(const EventSet& events, const FitTolerances& tol = {});

/// Looks for (b, ..., b, x, a, ..., a) with a <= x <= b; `split` is the 1-based
/// position of x. The largest matching split is reported.
FitReport detect_interval_pattern(const PrizeTable& table, const FitTolerances& tol = {});

/// Pure function of the component verdicts.
Tier decide_tier(bool order_preserved, bool interval_match, bool degenerate_shape,
                 const std::optional<bool>& scale_invariant, bool geometric, bool proportional);

Classification classify(const EventSet& events, const FitTolerances& tol = {});

/// For every prefix length m, reallocates the observed prefix sum to the top m
/// positions under `rule` and compares with the observed prizes.
Verdict check_data_top_consistency(const PrizeTable& table, const RuleSpec& rule,
                                   const FitTolerances& tol = {});

}  // namespace prizes

#endif  // PRIZES_ANALYSIS_HPP
