#ifndef PRIZES_RULES_HPP
#define PRIZES_RULES_HPP

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "prizes/core.hpp"
#include "prizes/functions.hpp"
#include "prizes/solver.hpp"

namespace prizes {

struct EqualDivision {
    friend bool operator==(const EqualDivision&, const EqualDivision&) = default;
};

struct WinnerTakesAll {
    friend bool operator==(const WinnerTakesAll&, const WinnerTakesAll&) = default;
};

/// Equal division up to n·cap; beyond that everyone keeps `cap` and the winner takes the rest.
struct WinnerTakesSurplus {
    double cap = 0.0;  // may be +∞
    friend bool operator==(const WinnerTakesSurplus&, const WinnerTakesSurplus&) = default;
};

struct IntervalRule {
    IntervalList intervals;
    friend bool operator==(const IntervalRule&, const IntervalRule&) = default;
};

struct SingleParametricRule {
    MonotoneFn f;
    friend bool operator==(const SingleParametricRule&, const SingleParametricRule&) = default;
};

struct ParametricRule {
    FunctionSequence fs;
    friend bool operator==(const ParametricRule&, const ParametricRule&) = default;
};

struct GeometricRule {
    double lambda = 1.0;
    /// Admits λ > 1. Only for exhibiting the order-preservation counterexample.
    bool allow_increasing = false;
    friend bool operator==(const GeometricRule&, const GeometricRule&) = default;
};

struct ProportionalRule {
    std::vector<double> weights;  // λ_1 > 0, non-increasing
    friend bool operator==(const ProportionalRule&, const ProportionalRule&) = default;
};

enum class CounterexampleKind {
    lowest_takes_all,  // everything to the last position
    threshold_switch,  // ED while E ≤ 1, WTA above
    pair_favoritism,   // i first and j second split E; WTA otherwise
    late_dollar,       // dollar-by-dollar schedule that delays the winner
    ed2_wta3,          // ED for two competitors, WTA for more
};

const char* to_string(CounterexampleKind kind);

struct CounterexampleRule {
    CounterexampleKind kind = CounterexampleKind::lowest_takes_all;
    CompetitorId first{"i"};   // favoured pair for pair_favoritism
    CompetitorId second{"j"};
    friend bool operator==(const CounterexampleRule&, const CounterexampleRule&) = default;
};

/// One allocation rule: a family with parameters, or a named counterexample.
class RuleSpec {
public:
    using Variant = std::variant<EqualDivision, WinnerTakesAll, WinnerTakesSurplus, IntervalRule,
                                 SingleParametricRule, ParametricRule, GeometricRule,
                                 ProportionalRule, CounterexampleRule>;

    /// Validates the parameters; throws InvalidRuleParams.
    RuleSpec(Variant rule);  // NOLINT(google-explicit-constructor)

    static RuleSpec ed() { return Variant{EqualDivision{}}; }
    static RuleSpec wta() { return Variant{WinnerTakesAll{}}; }
    static RuleSpec wts(double cap) { return Variant{WinnerTakesSurplus{cap}}; }
    static RuleSpec interval(IntervalList intervals) { return Variant{IntervalRule{std::move(intervals)}}; }
    static RuleSpec single_parametric(MonotoneFn f) { return Variant{SingleParametricRule{std::move(f)}}; }
    static RuleSpec parametric(FunctionSequence fs) { return Variant{ParametricRule{std::move(fs)}}; }
    static RuleSpec geometric(double lambda, bool allow_increasing = false) {
        return Variant{GeometricRule{lambda, allow_increasing}};
    }
    static RuleSpec proportional(std::vector<double> weights) {
        return Variant{ProportionalRule{std::move(weights)}};
    }
    static RuleSpec counterexample(CounterexampleKind kind) { return Variant{CounterexampleRule{kind}}; }

    const Variant& get() const noexcept { return rule_; }

    template <typename T>
    const T* as() const noexcept {
        return std::get_if<T>(&rule_);
    }

    friend bool operator==(const RuleSpec&, const RuleSpec&) = default;

private:
    Variant rule_;
};

/// Canonical mini-language text for the rule (parseable for every rule the CLI accepts).
std::string describe(const RuleSpec& rule);

/// Competitor ids the rule treats specially (non-empty only for non-anonymous rules).
std::vector<CompetitorId> distinguished_ids(const RuleSpec& rule);

Allocation allocate(const RuleSpec& rule, const Competition& competition,
                    const SolverConfig& cfg = {});

/// Prizes by position for an anonymous evaluation over numbered ids.
std::vector<double> allocate_positions(const RuleSpec& rule, std::size_t n, double endowment,
                                       const SolverConfig& cfg = {});

Allocation allocate_ed(const Competition& competition);
Allocation allocate_wta(const Competition& competition);
Allocation allocate_wts(double cap, const Competition& competition);
Allocation allocate_interval(const IntervalList& intervals, const Competition& competition);
Allocation allocate_single_parametric(const MonotoneFn& f, const Competition& competition,
                                      const SolverConfig& cfg = {});
Allocation allocate_parametric(const FunctionSequence& fs, const Competition& competition,
                               const SolverConfig& cfg = {});
Allocation allocate_geometric(double lambda, const Competition& competition,
                              bool allow_increasing = false);
Allocation allocate_proportional(const std::vector<double>& weights,
                                 const Competition& competition);
Allocation allocate_counterexample(const CounterexampleRule& rule,
                                   const Competition& competition);

/// Weights λ^(k−1), k = 1..count.
std::vector<double> geometric_weights(double lambda, std::size_t count);

}  // namespace prizes

#endif  // PRIZES_RULES_HPP
