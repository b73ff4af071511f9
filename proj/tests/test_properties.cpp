#include <doctest.h>

#include <random>

#include "prizes/analysis.hpp"
#include "prizes/axioms.hpp"
#include "prizes/rules.hpp"
#include "support/oracles.hpp"

using namespace prizes;

namespace {

double tau(double e) { return 1e-9 * std::max(1.0, e); }

RuleSpec random_family_rule(std::mt19937_64& rng) {
    switch (rng() % 8) {
        case 0: return RuleSpec::ed();
        case 1: return RuleSpec::wta();
        case 2: return RuleSpec::wts(oracle::uniform(rng, 0, 5));
        case 3: {
            std::vector<Interval> list;
            double at = oracle::uniform(rng, 0, 1);
            for (std::size_t k = oracle::pick(rng, 0, 4); k > 0; --k) {
                const double lower = at + oracle::uniform(rng, 0, 1);
                list.push_back({lower, lower + oracle::uniform(rng, 0.1, 2)});
                at = list.back().upper;
            }
            return RuleSpec::interval(IntervalList(list));
        }
        case 4: return RuleSpec::single_parametric(MonotoneFn::shift(oracle::uniform(rng, 0, 2)));
        case 5: return RuleSpec::parametric(FunctionSequence::hyperarithmetic());
        case 6: return RuleSpec::geometric(oracle::uniform(rng, 0, 1));
        default: {
            std::vector<double> w(oracle::pick(rng, 1, 8));
            double level = oracle::uniform(rng, 0.1, 10);
            for (auto& v : w) {
                v = level;
                level *= oracle::uniform(rng, 0, 1);
            }
            return RuleSpec::proportional(w);
        }
    }
}

}  // namespace

TEST_CASE("family rules allocate E exactly and preserve order") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 3000; ++trial) {
        const auto rule = random_family_rule(rng);
        std::size_t n = oracle::pick(rng, 1, 8);
        if (const auto* p = rule.as<ProportionalRule>()) n = std::min(n, p->weights.size());
        const double e = oracle::uniform(rng, 0, 50);
        const auto prizes = allocate_positions(rule, n, e);
        INFO(describe(rule) << " n=" << n << " E=" << e);
        CHECK(std::abs(oracle::sum(prizes) - e) <= tau(e));
        for (std::size_t r = 0; r < n; ++r) {
            CHECK(prizes[r] >= 0.0);
            if (r + 1 < n) CHECK(prizes[r] >= prizes[r + 1] - tau(e));
        }
    }
}

TEST_CASE("monotone rules are 1-Lipschitz in E") {
    std::mt19937_64 rng(31);
    for (const auto& named : bundled_rules()) {
        if (named.name == "threshold-switch") continue;
        for (int trial = 0; trial < 300; ++trial) {
            const std::size_t n = oracle::pick(rng, 1, 7);
            const double e = oracle::uniform(rng, 0, 30);
            const double e2 = e + oracle::uniform(rng, 0, 3);
            const auto a = allocate_positions(named.rule, n, e);
            const auto b = allocate_positions(named.rule, n, e2);
            INFO(named.name << " n=" << n << " E=" << e << " E'=" << e2);
            for (std::size_t r = 0; r < n; ++r) {
                CHECK(b[r] >= a[r] - tau(e2));
                CHECK(b[r] - a[r] <= e2 - e + tau(e2));
            }
        }
    }
}

TEST_CASE("reduction identities") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 2000; ++trial) {
        const std::size_t n = oracle::pick(rng, 1, 9);
        const double e = oracle::uniform(rng, 0, 40);
        const double lambda = oracle::uniform(rng, 0, 1);
        const double c = oracle::uniform(rng, 0, 3);
        const auto at = [&](const RuleSpec& r) { return allocate_positions(r, n, e); };
        CHECK(oracle::max_abs_diff(at(RuleSpec::wts(0)), at(RuleSpec::wta())) <= tau(e));
        CHECK(oracle::max_abs_diff(at(RuleSpec::wts(infinity)), at(RuleSpec::ed())) <= tau(e));
        CHECK(oracle::max_abs_diff(at(RuleSpec::interval(IntervalList{})), at(RuleSpec::ed())) <= tau(e));
        CHECK(oracle::max_abs_diff(at(RuleSpec::interval(IntervalList({{0, infinity}}))),
                                   at(RuleSpec::wta())) <= tau(e));
        const auto geo = at(RuleSpec::geometric(lambda));
        CHECK(oracle::max_abs_diff(geo, at(RuleSpec::single_parametric(MonotoneFn::linear(lambda)))) <=
              tau(e));
        CHECK(oracle::max_abs_diff(geo, at(RuleSpec::proportional(geometric_weights(lambda, n)))) <=
              tau(e));
        CHECK(oracle::max_abs_diff(
                  at(RuleSpec::single_parametric(MonotoneFn::shift(c))),
                  at(RuleSpec::parametric(FunctionSequence::iterated(MonotoneFn::shift(c))))) <= tau(e));
        CHECK(oracle::max_abs_diff(at(RuleSpec::interval(IntervalList::unit_steps(60))),
                                   oracle::round_robin_dollars(n, e)) <= tau(e));
    }
}

TEST_CASE("interval rules satisfy full consistency on exhaustive subsets") {
    std::mt19937_64 rng(12);
    const Tolerances tol;
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Interval> list;
        double at = oracle::uniform(rng, 0, 1);
        for (std::size_t k = oracle::pick(rng, 1, 4); k > 0; --k) {
            const double lower = at + (rng() % 2 == 0 ? 0.0 : oracle::uniform(rng, 0, 1));
            list.push_back({lower, lower + oracle::uniform(rng, 0.2, 2)});
            at = list.back().upper;
        }
        const auto rule = RuleSpec::interval(IntervalList(list));
        for (std::size_t n = 3; n <= 5; ++n) {
            for (int g = 0; g <= 20; ++g) {
                const auto c = make_competition(n, 0.5 * g);
                const auto& ids = c.ranking().in_order();
                for (unsigned mask = 1; mask + 1 < (1u << n); ++mask) {
                    std::vector<CompetitorId> subset;
                    for (std::size_t b = 0; b < n; ++b) {
                        if (mask & (1u << b)) subset.push_back(ids[b]);
                    }
                    if (subset.size() < 2) continue;
                    const auto w = evaluate_scenario(rule, {Axiom::consistency, Mode::full},
                                                     Scenario{c, std::nullopt, subset}, tol);
                    CHECK_FALSE(w.has_value());
                }
            }
        }
    }
}

TEST_CASE("interval allocations show the interval pattern") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<Interval> list;
        double at = oracle::uniform(rng, 0, 1);
        for (std::size_t k = oracle::pick(rng, 0, 4); k > 0; --k) {
            const double lower = at + oracle::uniform(rng, 0, 1);
            list.push_back({lower, lower + oracle::uniform(rng, 0.1, 3)});
            at = list.back().upper;
        }
        const auto rule = RuleSpec::interval(IntervalList(list));
        const std::size_t n = oracle::pick(rng, 2, 8);
        const double e = oracle::uniform(rng, 0.01, (at + 1) * static_cast<double>(n));
        const PrizeTable t{"synthetic", e, allocate_positions(rule, n, e)};
        INFO(describe(rule) << " n=" << n << " E=" << e);
        CHECK(detect_interval_pattern(t, {1e-9, 0}).verdict);
    }
}

TEST_CASE("synthesize-then-fit recovers the parameters") {
    for (int step = 0; step <= 10; ++step) {
        const double lambda = step / 10.0;
        for (std::size_t n : {2u, 5u, 10u}) {
            const double e = 1000.0;
            const PrizeTable t{"synthetic", e, allocate_positions(RuleSpec::geometric(lambda), n, e)};
            const auto report = fit_geometric(t, {1e-9, 0});
            INFO("lambda=" << lambda << " n=" << n);
            CHECK(std::abs(*report.parameter("lambda") - lambda) <= 1e-9);
            CHECK(report.max_rel_dev <= 1e-9);
            CHECK(report.verdict);
        }
    }

    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<double> w(oracle::pick(rng, 1, 10));
        double level = oracle::uniform(rng, 0.5, 10);
        for (auto& v : w) {
            v = level;
            level *= oracle::uniform(rng, 0.2, 1);
        }
        const auto rule = RuleSpec::proportional(w);
        const double e1 = oracle::uniform(rng, 1, 1000);
        const double e2 = e1 * oracle::uniform(rng, 1.1, 5);
        const EventSet events{{PrizeTable{"a", e1, allocate_positions(rule, w.size(), e1)},
                               PrizeTable{"b", e2, allocate_positions(rule, w.size(), e2)}}};
        const auto report = fit_proportional(events, {1e-9, 0});
        CHECK(report.verdict);
        CHECK(report.max_rel_dev <= 1e-9);
        const double total = oracle::sum(w);
        for (std::size_t k = 0; k < w.size(); ++k) {
            CHECK(std::abs(report.shares[k] - 100.0 * w[k] / total) <= 1e-9);
        }
    }
}
