#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "prizes/axioms.hpp"
#include "support/oracles.hpp"

using namespace prizes;
using doctest::Approx;

namespace {

const AxiomCheck full{Axiom::consistency, Mode::full};
const AxiomCheck local{Axiom::consistency, Mode::local};
const AxiomCheck top{Axiom::consistency, Mode::top};

Scenario reduction(std::size_t n, double e, std::initializer_list<std::size_t> positions) {
    const auto c = make_competition(n, e);
    std::vector<CompetitorId> subset;
    for (const std::size_t p : positions) subset.push_back(c.ranking().at_position(p));
    return Scenario{c, std::nullopt, subset, ScaleClause::none};
}

RuleSpec unit_steps() { return RuleSpec::interval(IntervalList::unit_steps(50)); }
RuleSpec hyper() { return RuleSpec::parametric(FunctionSequence::hyperarithmetic()); }
RuleSpec cx(CounterexampleKind kind) { return RuleSpec::counterexample(kind); }

SampleBudget small_budget() {
    SampleBudget b = SampleBudget::with_seed(7, 10);
    b.max_n = 4;
    return b;
}

}  // namespace

TEST_CASE("check names round-trip") {
    for (const auto& check : standard_checks()) {
        CHECK(parse_axiom_check(to_string(check), "") == check);
    }
    CHECK(parse_axiom_check("consistency", "local") == local);
    CHECK(parse_axiom_check("consistency", "") == full);
    CHECK_FALSE(parse_axiom_check("fairness", "").has_value());
    CHECK(standard_checks().size() == 13);
}

TEST_CASE("anonymity examples") {
    const SampleBudget budget;
    CHECK(check_anonymity(RuleSpec::ed(), budget).passed());
    CHECK(check_anonymity(RuleSpec::geometric(0.713), budget).passed());
    const auto v = check_anonymity(cx(CounterexampleKind::pair_favoritism), budget);
    REQUIRE(v.failed());
    REQUIRE(v.witness.has_value());
    CHECK(v.witness->scenario.secondary.has_value());
    CHECK(v.witness->scenario.primary.size() == 2);
    CHECK(reverify(cx(CounterexampleKind::pair_favoritism), *v.witness));
}

TEST_CASE("order preservation examples") {
    const SampleBudget budget;
    CHECK(check_order_preservation(RuleSpec::wta(), budget, Mode::winner_loser_strict).passed());
    CHECK(check_order_preservation(RuleSpec::ed(), budget, Mode::winner_loser_strict).failed());
    const auto increasing = RuleSpec::geometric(2, true);
    const auto v = check_order_preservation(increasing, budget, Mode::weak);
    REQUIRE(v.failed());
    CHECK(reverify(increasing, *v.witness));
}

TEST_CASE("geometric with lambda 2 breaks only order preservation among the claimed axioms") {
    const SampleBudget budget;
    const auto rule = RuleSpec::geometric(2, true);
    CHECK(check_anonymity(rule, budget).passed());
    CHECK(check_endowment_monotonicity(rule, budget, Mode::winner_strict).passed());
    CHECK(check_consistency(rule, budget, Mode::local).passed());
    CHECK(check_consistency(rule, budget, Mode::top).passed());
    CHECK(check_order_preservation(rule, budget, Mode::weak).failed());
}

TEST_CASE("endowment monotonicity examples") {
    const SampleBudget budget;
    CHECK(check_endowment_monotonicity(RuleSpec::ed(), budget, Mode::strict).passed());
    const auto wta = check_endowment_monotonicity(RuleSpec::wta(), budget, Mode::strict);
    REQUIRE(wta.failed());
    CHECK(wta.witness->strict_relation);
    CHECK(wta.witness->lhs == 0.0);
    CHECK(wta.witness->rhs == 0.0);
    const auto late = cx(CounterexampleKind::late_dollar);
    const auto v = check_endowment_monotonicity(late, budget, Mode::winner_strict);
    REQUIRE(v.failed());
    CHECK(reverify(late, *v.witness));
}

TEST_CASE("lipschitz examples and precondition") {
    const SampleBudget budget;
    for (const auto& rule : {RuleSpec::ed(), RuleSpec::wts(1), unit_steps()}) {
        const auto mono = check_endowment_monotonicity(rule, budget, Mode::weak);
        REQUIRE(mono.passed());
        CHECK(check_lipschitz(rule, budget, mono).passed());
    }

    const auto mono = check_endowment_monotonicity(RuleSpec::ed(), budget, Mode::weak);
    try {
        check_lipschitz(RuleSpec::ed(), SampleBudget::with_seed(99), mono);
        FAIL("expected PreconditionNotChecked");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::precondition_not_checked);
    }
    const auto bad = check_endowment_monotonicity(cx(CounterexampleKind::threshold_switch), budget,
                                                  Mode::weak);
    REQUIRE(bad.failed());
    CHECK_THROWS_AS(check_lipschitz(cx(CounterexampleKind::threshold_switch), budget, bad), Error);

    const auto skipped = run_check(cx(CounterexampleKind::threshold_switch),
                                   {Axiom::lipschitz, Mode::none}, budget);
    CHECK(skipped.outcome == Outcome::skipped);
}

TEST_CASE("scale invariance examples") {
    const SampleBudget budget;
    CHECK(check_scale_invariance(RuleSpec::geometric(0.5), budget).passed());
    CHECK(check_scale_invariance(RuleSpec::proportional(golf_shares()), budget).passed());
    const auto v = check_scale_invariance(RuleSpec::wts(1), budget);
    REQUIRE(v.failed());
    CHECK(reverify(RuleSpec::wts(1), *v.witness));
}

TEST_CASE("consistency examples evaluated on single scenarios") {
    // Unit-step rule: (2,2,1,1) restricted to positions 1 and 3 is (2,1) at E = 3.
    CHECK_FALSE(evaluate_scenario(unit_steps(), full, reduction(4, 6, {1, 3})).has_value());

    // Geometric 0.5: (4,2,1) restricted to {1,3} should be (10/3, 5/3).
    const auto w = evaluate_scenario(RuleSpec::geometric(0.5), full, reduction(3, 7, {1, 3}));
    REQUIRE(w.has_value());
    CHECK(std::abs(w->lhs - w->rhs) == Approx(2.0 / 3));
    CHECK(w->margin > 1e-9);
    CHECK(reverify(RuleSpec::geometric(0.5), *w));

    // Hyperarithmetic: (10/3, 4/3, 1/3) restricted to {2,3} gives (5/3, 0) at E = 5/3.
    const auto h = evaluate_scenario(hyper(), local, reduction(3, 5, {2, 3}));
    REQUIRE(h.has_value());
    CHECK(std::abs(h->lhs - h->rhs) == Approx(1.0 / 3));
    CHECK_FALSE(evaluate_scenario(hyper(), top, reduction(3, 5, {1, 2})).has_value());

    // Subsets that do not qualify for the mode are ignored.
    CHECK_FALSE(evaluate_scenario(RuleSpec::geometric(0.5), top, reduction(3, 7, {2, 3})).has_value());
    CHECK_FALSE(evaluate_scenario(RuleSpec::geometric(0.5), local, reduction(3, 7, {1, 3})).has_value());
}

TEST_CASE("consistency checks find the expected failures") {
    const SampleBudget budget;
    CHECK(check_consistency(unit_steps(), budget, Mode::full).passed());
    const auto geo = check_consistency(RuleSpec::geometric(0.5), budget, Mode::full);
    REQUIRE(geo.failed());
    CHECK(reverify(RuleSpec::geometric(0.5), *geo.witness));
    CHECK(geo.witness->scenario.primary.size() == 3);

    const auto h = check_consistency(hyper(), budget, Mode::local);
    REQUIRE(h.failed());
    CHECK(reverify(hyper(), *h.witness));
    CHECK(check_consistency(hyper(), budget, Mode::top).passed());
}

TEST_CASE("mode nesting") {
    const SampleBudget budget;
    for (const auto& named : bundled_rules()) {
        const auto bi = check_consistency(named.rule, budget, Mode::bilateral);
        if (bi.failed()) {
            INFO(named.name);
            CHECK(evaluate_scenario(named.rule, full, bi.witness->scenario).has_value());
        }
        const auto loc = check_consistency(named.rule, budget, Mode::local);
        if (loc.failed()) {
            const auto& s = loc.witness->scenario;
            const auto& first = s.primary.ranking().at_position(1);
            const bool top_segment =
                std::find(s.subset.begin(), s.subset.end(), first) != s.subset.end();
            if (top_segment) {
                INFO(named.name);
                CHECK(evaluate_scenario(named.rule, top, s).has_value());
            }
        }
    }
}

TEST_CASE("full and bilateral agree on the bundled rules") {
    const SampleBudget budget;
    for (const auto& named : bundled_rules()) {
        INFO(named.name);
        CHECK(check_consistency(named.rule, budget, Mode::full).outcome ==
              check_consistency(named.rule, budget, Mode::bilateral).outcome);
    }
}

TEST_CASE("every failing verdict re-verifies with a positive margin") {
    const auto matrix = run_axiom_matrix(bundled_rules(), SampleBudget{});
    for (std::size_t r = 0; r < matrix.rules.size(); ++r) {
        for (std::size_t c = 0; c < matrix.checks.size(); ++c) {
            const auto& v = matrix.cells[r][c];
            if (!v.failed()) continue;
            INFO(matrix.rules[r].name << " " << to_string(matrix.checks[c]));
            REQUIRE(v.witness.has_value());
            CHECK(reverify(matrix.rules[r].rule, *v.witness));
            if (!v.witness->strict_relation) CHECK(v.witness->margin > 1e-9);
        }
    }
}

TEST_CASE("verdicts are deterministic for a fixed budget") {
    const auto budget = small_budget();
    for (const auto& named : bundled_rules()) {
        for (const auto& check : standard_checks()) {
            CHECK(run_check(named.rule, check, budget) == run_check(named.rule, check, budget));
        }
    }
    const auto a = run_axiom_matrix(bundled_rules(), budget);
    const auto b = run_axiom_matrix(bundled_rules(), budget);
    CHECK(a.cells == b.cells);
}

TEST_CASE("budget fingerprint and grid") {
    const SampleBudget b;
    CHECK(b.endowment_grid.size() == 91);
    CHECK(b.endowment_grid.front() == 0.0);
    CHECK(b.endowment_grid[40] == 10.0);
    CHECK(b == SampleBudget::with_seed(2021));
    CHECK_FALSE(b == SampleBudget::with_seed(2022));
    CHECK(b.fingerprint().find("seed=2021") != std::string::npos);
}

TEST_CASE("matrix matches the golden file") {
    std::ifstream in(PRIZES_GOLDEN_DIR "/axiom_matrix.tsv");
    REQUIRE(in.good());
    std::string header;
    std::getline(in, header);
    const auto matrix = run_axiom_matrix(bundled_rules(), SampleBudget{});
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        std::istringstream cells(line);
        std::string name;
        std::getline(cells, name, '\t');
        REQUIRE(row < matrix.rules.size());
        CHECK(name == matrix.rules[row].name);
        std::string cell;
        for (std::size_t c = 0; std::getline(cells, cell, '\t'); ++c) {
            INFO(name << " " << to_string(matrix.checks[c]));
            CHECK(cell == to_string(matrix.cells[row][c].outcome));
        }
        ++row;
    }
    CHECK(row == matrix.rules.size());
}
