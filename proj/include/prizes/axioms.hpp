#ifndef PRIZES_AXIOMS_HPP
#define PRIZES_AXIOMS_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "prizes/core.hpp"
#include "prizes/rules.hpp"

namespace prizes {

enum class Axiom {
    anonymity,
    order_preservation,
    endowment_monotonicity,
    lipschitz,
    scale_invariance,
    consistency,
};

enum class Mode {
    none,
    // order preservation
    weak,
    winner_loser_strict,
    strict,
    // endowment monotonicity (also uses weak and strict)
    winner_strict,
    // consistency
    full,
    bilateral,
    local,
    top,
};

struct AxiomCheck {
    Axiom axiom = Axiom::anonymity;
    Mode mode = Mode::none;

    friend bool operator==(const AxiomCheck&, const AxiomCheck&) = default;
};

/// "consistency/full", "anonymity", ...
std::string to_string(const AxiomCheck& check);
/// Inverse of to_string; also accepts the axiom name with a separate mode name.
std::optional<AxiomCheck> parse_axiom_check(const std::string& axiom, const std::string& mode);

/// Every (axiom, mode) cell of the property matrix, in column order.
const std::vector<AxiomCheck>& standard_checks();

std::vector<double> default_endowment_grid(std::uint64_t seed, std::size_t random_draws = 50);

struct SampleBudget {
    std::size_t max_n = 5;
    std::uint64_t rng_seed = 2021;
    /// 0, 0.25, ..., 10 followed by 50 seeded draws from [0, 10].
    std::vector<double> endowment_grid = default_endowment_grid(2021);
    /// Consistency only on two-competitor subsets.
    bool pair_only = false;
    /// Extra relabellings per sample for the anonymity check.
    std::size_t random_relabellings = 4;
    Tolerances tol;

    static SampleBudget with_seed(std::uint64_t seed, std::size_t random_draws = 50);

    /// Stable text identifying the budget, grid included.
    std::string fingerprint() const;

    friend bool operator==(const SampleBudget& a, const SampleBudget& b) {
        return a.fingerprint() == b.fingerprint();
    }
};

enum class ScaleClause { none, homogeneity, additivity };

/// Concrete competitions on which a relation is evaluated.
struct Scenario {
    Competition primary;
    /// Relabelled copy (anonymity) or the same competition at another endowment.
    std::optional<Competition> secondary;
    /// Reduced competitor set for the consistency axioms.
    std::vector<CompetitorId> subset;
    ScaleClause clause = ScaleClause::none;

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

struct Witness {
    AxiomCheck check;
    Scenario scenario;
    /// Competitors whose prizes exhibit the violation.
    std::vector<CompetitorId> focus;
    /// The two sides of the violated relation.
    double lhs = 0.0;
    double rhs = 0.0;
    /// Rendered relation, e.g. "phi_c1(N,R,7) = 4 vs phi_c1(S,R_S,5) = 3.333333".
    std::string relation;
    /// Non-strict relations: amount by which the relation is broken (> tolerance).
    /// Strict relations: the gap that failed to exceed the tolerance.
    double margin = 0.0;
    bool strict_relation = false;

    friend bool operator==(const Witness&, const Witness&) = default;
};

enum class Outcome { pass, fail, skipped };

const char* to_string(Outcome outcome);

struct Verdict {
    AxiomCheck check;
    Outcome outcome = Outcome::pass;
    std::size_t samples_checked = 0;
    std::optional<Witness> witness;
    double tolerance = 0.0;
    std::string budget;
    std::string note;

    bool passed() const noexcept { return outcome == Outcome::pass; }
    bool failed() const noexcept { return outcome == Outcome::fail; }

    friend bool operator==(const Verdict&, const Verdict&) = default;
};

/// Evaluates one scenario from scratch; returns the worst violation, if any.
std::optional<Witness> evaluate_scenario(const RuleSpec& rule, const AxiomCheck& check,
                                         const Scenario& scenario, const Tolerances& tol = {},
                                         const SolverConfig& cfg = {});

/// True iff re-evaluating the witness from scratch reproduces its violation.
bool reverify(const RuleSpec& rule, const Witness& witness, const Tolerances& tol = {});

Verdict check_anonymity(const RuleSpec& rule, const SampleBudget& budget);
Verdict check_order_preservation(const RuleSpec& rule, const SampleBudget& budget, Mode mode);
Verdict check_endowment_monotonicity(const RuleSpec& rule, const SampleBudget& budget,
                                     Mode mode);
/// Requires a weak endowment-monotonicity Pass on the same budget; throws
/// PreconditionNotChecked otherwise.
Verdict check_lipschitz(const RuleSpec& rule, const SampleBudget& budget,
                        const Verdict& monotonicity);
Verdict check_scale_invariance(const RuleSpec& rule, const SampleBudget& budget);
Verdict check_consistency(const RuleSpec& rule, const SampleBudget& budget, Mode mode);

/// Dispatch by check. Lipschitz runs the weak monotonicity check first and is
/// skipped when that fails.
Verdict run_check(const RuleSpec& rule, const AxiomCheck& check, const SampleBudget& budget);

struct NamedRule {
    std::string name;
    RuleSpec rule;
};

struct AxiomMatrix {
    std::vector<NamedRule> rules;
    std::vector<AxiomCheck> checks;
    std::vector<std::vector<Verdict>> cells;  // cells[rule][check]
};

/// Rows evaluate in parallel; the result does not depend on scheduling.
AxiomMatrix run_axiom_matrix(const std::vector<NamedRule>& rules, const SampleBudget& budget,
                             const std::vector<AxiomCheck>& checks = standard_checks());

/// Published golf share row, percent of the endowment for positions 1..10.
const std::vector<double>& golf_shares();

/// ED, WTA, WTS(1), the unit-step interval rule, geometric 0.5, the arithmetic
/// single-parametric rule, the hyperarithmetic parametric rule, golf proportional
/// shares, and the five counterexample rules.
std::vector<NamedRule> bundled_rules();

}  // namespace prizes

#endif  // PRIZES_AXIOMS_HPP
