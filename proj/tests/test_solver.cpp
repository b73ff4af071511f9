#include <doctest.h>

#include <random>

#include "prizes/path.hpp"
#include "prizes/solver.hpp"
#include "support/oracles.hpp"

using namespace prizes;
using doctest::Approx;

TEST_CASE("builtin monotone functions") {
    CHECK(MonotoneFn::identity()(3.5) == 3.5);
    CHECK(MonotoneFn::zero()(3.5) == 0.0);
    CHECK(MonotoneFn::linear(0.25)(8.0) == 2.0);
    CHECK(MonotoneFn::shift(1.0)(0.5) == 0.0);
    CHECK(MonotoneFn::shift(1.0)(3.0) == 2.0);
    CHECK(MonotoneFn::cap(2.0)(1.5) == 1.5);
    CHECK(MonotoneFn::cap(2.0)(7.0) == 2.0);
    CHECK_THROWS_AS(MonotoneFn::linear(1.5), Error);
    CHECK_THROWS_AS(MonotoneFn::linear(-0.1), Error);
    CHECK_THROWS_AS(MonotoneFn::shift(-1.0), Error);
    CHECK_THROWS_AS(MonotoneFn::cap(-1.0), Error);
}

TEST_CASE("piecewise-linear functions are validated on breakpoints and tail") {
    const auto f = MonotoneFn::piecewise({{1, 0}, {3, 1}});
    CHECK(f(0.5) == 0.0);
    CHECK(f(2.0) == Approx(0.5));
    CHECK(f(5.0) == Approx(2.0));  // continues along the last slope
    CHECK(f.describe() == "pwl=0:0,1:0,3:1");

    CHECK_THROWS_AS(MonotoneFn::piecewise({{1, 2}}), Error);          // f(x) > x
    CHECK_THROWS_AS(MonotoneFn::piecewise({{1, 1}, {2, 0.5}}), Error);  // decreasing
    CHECK_THROWS_AS(MonotoneFn::piecewise({{2, 0}, {1, 0}}), Error);  // unsorted
    CHECK_THROWS_AS(MonotoneFn::piecewise({{1, 0}, {2, 1.5}}), Error);  // tail slope 1.5
}

TEST_CASE("pointwise ordering is exact for piecewise-linear curves") {
    CHECK(pointwise_le(MonotoneFn::shift(2.0), MonotoneFn::shift(1.0)));
    CHECK_FALSE(pointwise_le(MonotoneFn::shift(1.0), MonotoneFn::shift(2.0)));
    CHECK(pointwise_le(MonotoneFn::linear(0.5), MonotoneFn::identity()));
    // 0.5x stays under min{2, x} only up to x = 4.
    CHECK_FALSE(pointwise_le(MonotoneFn::linear(0.5), MonotoneFn::cap(2.0)));
}

TEST_CASE("interval lists are validated") {
    CHECK_NOTHROW(IntervalList({{1, 2.5}, {2.5, 3}, {3.5, infinity}}));
    CHECK_THROWS_AS(IntervalList({{2, 1}}), Error);
    CHECK_THROWS_AS(IntervalList({{0, 2}, {1, 3}}), Error);           // overlap
    CHECK_THROWS_AS(IntervalList({{0, infinity}, {5, 6}}), Error);    // ∞ not last
    CHECK_THROWS_AS(IntervalList({{-1, 1}}), Error);
    CHECK(IntervalList::unit_steps(3).intervals() ==
          std::vector<Interval>{{0, 1}, {1, 2}, {2, 3}});
}

TEST_CASE("function sequences") {
    const auto hyper = FunctionSequence::hyperarithmetic();
    CHECK(hyper.value(1, 5.0) == 5.0);
    CHECK(hyper.value(2, 5.0) == 3.0);
    CHECK(hyper.value(4, 5.0) == 1.0);
    CHECK(hyper.value(9, 5.0) == 0.0);

    const auto it = FunctionSequence::iterated(MonotoneFn::linear(0.5));
    CHECK(it.value(3, 8.0) == 2.0);

    const auto listed = FunctionSequence::listed({MonotoneFn::identity(), MonotoneFn::linear(0.5)});
    CHECK(listed.value(5, 8.0) == 4.0);  // last function repeats
    CHECK_THROWS_AS(FunctionSequence::listed({MonotoneFn::linear(0.5)}), Error);
    CHECK_THROWS_AS(FunctionSequence::listed({MonotoneFn::identity(), MonotoneFn::shift(2.0),
                                              MonotoneFn::shift(1.0)}),
                    Error);
}

TEST_CASE("iterate_f") {
    CHECK(iterate_f(MonotoneFn::shift(1.0), 8.0 / 3, 2) == Approx(2.0 / 3).epsilon(1e-12));
    CHECK(iterate_f(MonotoneFn::cap(1.0), 4.0, 0) == 4.0);
    CHECK(iterate_f(MonotoneFn::linear(0.5), 4.0, 2) == 1.0);
}

TEST_CASE("solve_level examples") {
    CHECK(solve_level(FunctionSequence::iterated(MonotoneFn::zero()), 1, 5.0) == 5.0);
    CHECK(solve_level(FunctionSequence::iterated(MonotoneFn::shift(1.0)), 3, 5.0) ==
          Approx(8.0 / 3).epsilon(1e-12));
    CHECK(solve_level(FunctionSequence::iterated(MonotoneFn::linear(0.5)), 3, 7.0) ==
          Approx(4.0).epsilon(1e-12));
    CHECK(solve_level(FunctionSequence::hyperarithmetic(), 4, 0.0) == 0.0);
}

TEST_CASE("solve_level meets its residual contract and is monotone in E") {
    std::mt19937_64 rng(11);
    const std::vector<FunctionSequence> families{
        FunctionSequence::hyperarithmetic(),
        FunctionSequence::iterated(MonotoneFn::shift(1.0)),
        FunctionSequence::iterated(MonotoneFn::linear(0.7)),
        FunctionSequence::iterated(MonotoneFn::cap(2.0)),
        FunctionSequence::iterated(MonotoneFn::piecewise({{1, 0}, {2, 0.5}, {6, 4}})),
    };
    for (const auto& fs : families) {
        for (int trial = 0; trial < 400; ++trial) {
            const std::size_t n = oracle::pick(rng, 1, 12);
            const double e = oracle::uniform(rng, 0.0, 1000.0);
            const double x = solve_level(fs, n, e);
            CHECK(std::abs(fs.total(n, x) - e) <= 1e-10 * std::max(1.0, e));
            const double x2 = solve_level(fs, n, e + oracle::uniform(rng, 0.0, 5.0));
            CHECK(x2 >= x);
        }
    }
}

TEST_CASE("solve_level reports failure when iterations run out") {
    SolverConfig cfg;
    cfg.max_iter = 2;
    try {
        solve_level(FunctionSequence::hyperarithmetic(), 4, 8.0, cfg);
        FAIL("expected SolverFailure");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::solver_failure);
    }
}

TEST_CASE("interval_locate") {
    CHECK(interval_locate(IntervalList({{0, infinity}}), 3.0) == std::optional<std::size_t>(0));
    const IntervalList example({{1, 2.5}, {2.5, 3}, {3.5, infinity}});
    CHECK_FALSE(interval_locate(example, 3.2).has_value());
    CHECK(interval_locate(example, 2.5) == std::optional<std::size_t>(0));  // shared endpoint
    CHECK(interval_locate(example, 0.5) == std::nullopt);
    CHECK(interval_locate(IntervalList::unit_steps(5), 1.5) == std::optional<std::size_t>(1));
    CHECK(interval_locate(IntervalList{}, 1.0) == std::nullopt);
}

TEST_CASE("interval_locate agrees with a linear scan") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<Interval> list;
        double at = oracle::uniform(rng, 0.0, 2.0);
        const std::size_t count = oracle::pick(rng, 0, 6);
        for (std::size_t k = 0; k < count; ++k) {
            const double lower = at + (rng() % 2 == 0 ? 0.0 : oracle::uniform(rng, 0.0, 1.0));
            const double upper = lower + oracle::uniform(rng, 0.1, 2.0);
            list.push_back({lower, upper});
            at = upper;
        }
        const IntervalList intervals(list);
        for (int probe = 0; probe < 20; ++probe) {
            const double avg = oracle::uniform(rng, 0.0, at + 1.0);
            std::optional<std::size_t> expected;
            for (std::size_t k = 0; k < list.size(); ++k) {
                if (list[k].lower <= avg && avg <= list[k].upper) {
                    expected = k;
                    break;
                }
            }
            CHECK(interval_locate(intervals, avg) == expected);
        }
    }
}

TEST_CASE("trace_path samples") {
    const auto ed = trace_path(RuleSpec::ed(), 2, 1.0, 0.5);
    REQUIRE(ed.samples.size() == 3);
    CHECK(ed.samples[1].endowment == 0.5);
    CHECK(ed.samples[1].allocation.prize_at(0) == 0.25);
    CHECK(ed.samples[2].allocation.prize_at(1) == 0.5);

    const auto step = trace_path(RuleSpec::interval(IntervalList::unit_steps(10)), 2, 3.0, 1.0);
    CHECK(step.samples.back().endowment == 3.0);
    CHECK(step.samples.back().allocation.prize_at(0) == 2.0);
    CHECK(step.samples.back().allocation.prize_at(1) == 1.0);

    const auto geo = trace_path(RuleSpec::geometric(0.713), 2, 5.0);
    CHECK(geo.samples.back().allocation.prize_at(0) == Approx(5.0 / 1.713));
    CHECK(geo.samples.back().allocation.prize_at(1) == Approx(5.0 * 0.713 / 1.713));

    CHECK_THROWS_AS(trace_path(RuleSpec::ed(), 2, 1.0, 0.0), Error);
    CHECK_THROWS_AS(trace_path(RuleSpec::ed(), 2, -1.0), Error);
}

TEST_CASE("trace_path endowments increase and monotone rules stay 1-Lipschitz") {
    for (const auto& rule : {RuleSpec::wts(1.0), RuleSpec::interval(IntervalList::unit_steps(20)),
                             RuleSpec::single_parametric(MonotoneFn::shift(1.0)),
                             RuleSpec::parametric(FunctionSequence::hyperarithmetic())}) {
        const auto trace = trace_path(rule, 4, 10.0, 0.07);
        for (std::size_t k = 1; k < trace.samples.size(); ++k) {
            const auto& a = trace.samples[k - 1];
            const auto& b = trace.samples[k];
            REQUIRE(b.endowment > a.endowment);
            for (std::size_t r = 0; r < 4; ++r) {
                CHECK(std::abs(b.allocation.prize_at(r) - a.allocation.prize_at(r)) <=
                      b.endowment - a.endowment + 1e-9);
            }
        }
    }
}
