#include "prizes/rules.hpp"

#include <algorithm>
#include <cmath>

#include "prizes/format.hpp"

namespace prizes {

namespace {

[[noreturn]] void invalid(const std::string& what) {
    throw Error(ErrorCode::invalid_rule_params, what);
}

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::vector<double> ed_prizes(std::size_t n, double endowment) {
    return std::vector<double>(n, endowment / static_cast<double>(n));
}

std::vector<double> wta_prizes(std::size_t n, double endowment) {
    std::vector<double> prizes(n, 0.0);
    prizes.front() = endowment;
    return prizes;
}

std::vector<double> wts_prizes(double cap, std::size_t n, double endowment) {
    const auto count = static_cast<double>(n);
    if (std::isinf(cap) || endowment < count * cap) return ed_prizes(n, endowment);
    std::vector<double> prizes(n, cap);
    prizes.front() = endowment - (count - 1.0) * cap;
    return prizes;
}

std::vector<double> interval_prizes(const IntervalList& intervals, std::size_t n,
                                    double endowment) {
    const auto count = static_cast<double>(n);
    const auto k = interval_locate(intervals, endowment / count);
    if (!k) return ed_prizes(n, endowment);
    const double a = intervals[*k].lower;
    const double b = intervals[*k].upper;

    std::vector<double> prizes(n);
    for (std::size_t pos = 1; pos <= n; ++pos) {
        const auto r = static_cast<double>(pos);
        // (r−1)·b with r = 1 must stay 0 when b = +∞.
        const double above = pos == 1 ? 0.0 : (r - 1.0) * b;
        const double split_low = (count - r + 1.0) * a + above;   // position r still at a
        const double split_high = (count - r) * a + r * b;        // position r reached b
        if (endowment <= split_low) {
            prizes[pos - 1] = a;
        } else if (endowment <= split_high) {
            const double x = endowment - (count - r) * a - above;
            prizes[pos - 1] = std::clamp(x, a, b);
        } else {
            prizes[pos - 1] = b;
        }
    }
    return prizes;
}

std::vector<double> level_prizes(const FunctionSequence& fs, std::size_t n, double endowment,
                                 const SolverConfig& cfg) {
    const double x = solve_level(fs, n, endowment, cfg);
    std::vector<double> prizes(n);
    fs.values(x, prizes);
    return prizes;
}

std::vector<double> weighted_prizes(const std::vector<double>& weights, std::size_t n,
                                    double endowment) {
    if (weights.size() < n) {
        invalid("proportional rule lists " + std::to_string(weights.size()) +
                " weights but the competition has " + std::to_string(n) + " competitors");
    }
    double total = 0.0;
    for (std::size_t k = 0; k < n; ++k) total += weights[k];
    std::vector<double> prizes(n);
    for (std::size_t k = 0; k < n; ++k) prizes[k] = weights[k] / total * endowment;
    return prizes;
}

std::vector<double> late_dollar_prizes(std::size_t n, double endowment) {
    std::vector<double> prizes(n, 0.0);
    double left = endowment;
    auto pay = [&](std::size_t index) {
        const double amount = std::min(1.0, left);
        prizes[index] += amount;
        left -= amount;
        return left > 0.0;
    };
    // Phase k hands one dollar each to positions k, k−1, ..., 1.
    for (std::size_t phase = 1; phase <= n; ++phase) {
        for (std::size_t pos = phase; pos >= 1; --pos) {
            if (!pay(pos - 1)) return prizes;
        }
    }
    // Then whole rounds from the last position up to the first.
    const auto count = static_cast<double>(n);
    const double rounds = std::floor(left / count);
    for (auto& p : prizes) p += rounds;
    left -= rounds * count;
    for (std::size_t pos = n; pos >= 1 && left > 0.0; --pos) pay(pos - 1);
    return prizes;
}

std::vector<double> counterexample_prizes(const CounterexampleRule& rule,
                                          const Competition& competition) {
    const std::size_t n = competition.size();
    const double endowment = competition.endowment();
    switch (rule.kind) {
        case CounterexampleKind::lowest_takes_all: {
            std::vector<double> prizes(n, 0.0);
            prizes.back() = endowment;
            return prizes;
        }
        case CounterexampleKind::threshold_switch:
            return endowment <= 1.0 ? ed_prizes(n, endowment) : wta_prizes(n, endowment);
        case CounterexampleKind::pair_favoritism: {
            const auto& ranking = competition.ranking();
            if (n >= 2 && ranking.at_position(1) == rule.first &&
                ranking.at_position(2) == rule.second) {
                std::vector<double> prizes(n, 0.0);
                prizes[0] = prizes[1] = endowment / 2.0;
                return prizes;
            }
            return wta_prizes(n, endowment);
        }
        case CounterexampleKind::late_dollar:
            return late_dollar_prizes(n, endowment);
        case CounterexampleKind::ed2_wta3:
            return n == 2 ? ed_prizes(n, endowment) : wta_prizes(n, endowment);
    }
    throw Error(ErrorCode::unknown_counterexample, "unknown counterexample rule");
}

void check_geometric(double lambda, bool allow_increasing) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) invalid("geometric lambda must be >= 0");
    if (lambda > 1.0 && !allow_increasing) invalid("geometric lambda must lie in [0, 1]");
}

void check_proportional(const std::vector<double>& weights) {
    if (weights.empty()) invalid("proportional rule needs weights");
    if (!(weights.front() > 0.0)) invalid("proportional rule needs lambda_1 > 0");
    for (std::size_t k = 0; k < weights.size(); ++k) {
        if (!(weights[k] >= 0.0) || !std::isfinite(weights[k])) {
            invalid("proportional weights must be finite and non-negative");
        }
        if (k > 0 && weights[k] > weights[k - 1]) {
            invalid("proportional weights must be non-increasing");
        }
    }
}

}  // namespace

const char* to_string(CounterexampleKind kind) {
    switch (kind) {
        case CounterexampleKind::lowest_takes_all: return "lowest-takes-all";
        case CounterexampleKind::threshold_switch: return "threshold-switch";
        case CounterexampleKind::pair_favoritism: return "pair-favoritism";
        case CounterexampleKind::late_dollar: return "late-dollar";
        case CounterexampleKind::ed2_wta3: return "ed2-wta3";
    }
    return "unknown";
}

RuleSpec::RuleSpec(Variant rule) : rule_(std::move(rule)) {
    std::visit(overloaded{
                   [](const WinnerTakesSurplus& r) {
                       if (!(r.cap >= 0.0)) invalid("WTS cap must be >= 0");
                   },
                   [](const GeometricRule& r) { check_geometric(r.lambda, r.allow_increasing); },
                   [](const ProportionalRule& r) { check_proportional(r.weights); },
                   [](const CounterexampleRule& r) {
                       if (r.kind == CounterexampleKind::pair_favoritism && r.first == r.second) {
                           invalid("pair favoritism needs two distinct competitors");
                       }
                   },
                   [](const auto&) {},
               },
               rule_);
}

std::string describe(const RuleSpec& rule) {
    return std::visit(
        overloaded{
            [](const EqualDivision&) { return std::string("ed"); },
            [](const WinnerTakesAll&) { return std::string("wta"); },
            [](const WinnerTakesSurplus& r) { return "wts:a=" + format_shortest(r.cap); },
            [](const IntervalRule& r) {
                std::string out = "interval:";
                for (std::size_t k = 0; k < r.intervals.size(); ++k) {
                    if (k > 0) out += ';';
                    out += '[' + format_shortest(r.intervals[k].lower) + ',' +
                           format_shortest(r.intervals[k].upper) + ']';
                }
                return out;
            },
            [](const SingleParametricRule& r) { return "sp:" + r.f.describe(); },
            [](const ParametricRule& r) {
                switch (r.fs.kind()) {
                    case FunctionSequence::Kind::hyperarithmetic:
                        return std::string("param:hyperarithmetic");
                    case FunctionSequence::Kind::iterated:
                        return "param:iterated=" + r.fs.functions().front().describe();
                    case FunctionSequence::Kind::listed: {
                        std::string out = "param:listed=";
                        for (std::size_t k = 0; k < r.fs.functions().size(); ++k) {
                            if (k > 0) out += ';';
                            out += r.fs.functions()[k].describe();
                        }
                        return out;
                    }
                }
                return std::string("param:?");
            },
            [](const GeometricRule& r) { return "geometric:lambda=" + format_shortest(r.lambda); },
            [](const ProportionalRule& r) {
                std::string out = "proportional:";
                for (std::size_t k = 0; k < r.weights.size(); ++k) {
                    if (k > 0) out += ',';
                    out += format_shortest(r.weights[k]);
                }
                return out;
            },
            [](const CounterexampleRule& r) {
                std::string out = std::string("cx:") + to_string(r.kind);
                if (r.kind == CounterexampleKind::pair_favoritism &&
                    (r.first.str() != "i" || r.second.str() != "j")) {
                    out += '=' + r.first.str() + ',' + r.second.str();
                }
                return out;
            },
        },
        rule.get());
}

std::vector<CompetitorId> distinguished_ids(const RuleSpec& rule) {
    if (const auto* cx = rule.as<CounterexampleRule>();
        cx != nullptr && cx->kind == CounterexampleKind::pair_favoritism) {
        return {cx->first, cx->second};
    }
    return {};
}

Allocation allocate(const RuleSpec& rule, const Competition& competition,
                    const SolverConfig& cfg) {
    const std::size_t n = competition.size();
    const double endowment = competition.endowment();
    auto prizes = std::visit(
        overloaded{
            [&](const EqualDivision&) { return ed_prizes(n, endowment); },
            [&](const WinnerTakesAll&) { return wta_prizes(n, endowment); },
            [&](const WinnerTakesSurplus& r) { return wts_prizes(r.cap, n, endowment); },
            [&](const IntervalRule& r) { return interval_prizes(r.intervals, n, endowment); },
            [&](const SingleParametricRule& r) {
                return level_prizes(FunctionSequence::iterated(r.f), n, endowment, cfg);
            },
            [&](const ParametricRule& r) { return level_prizes(r.fs, n, endowment, cfg); },
            [&](const GeometricRule& r) {
                return weighted_prizes(geometric_weights(r.lambda, n), n, endowment);
            },
            [&](const ProportionalRule& r) { return weighted_prizes(r.weights, n, endowment); },
            [&](const CounterexampleRule& r) { return counterexample_prizes(r, competition); },
        },
        rule.get());
    return Allocation::by_position(competition, std::move(prizes));
}

std::vector<double> allocate_positions(const RuleSpec& rule, std::size_t n, double endowment,
                                       const SolverConfig& cfg) {
    const auto allocation = allocate(rule, make_competition(n, endowment), cfg);
    return {allocation.prizes().begin(), allocation.prizes().end()};
}

Allocation allocate_ed(const Competition& competition) {
    return allocate(RuleSpec::ed(), competition);
}

Allocation allocate_wta(const Competition& competition) {
    return allocate(RuleSpec::wta(), competition);
}

Allocation allocate_wts(double cap, const Competition& competition) {
    return allocate(RuleSpec::wts(cap), competition);
}

Allocation allocate_interval(const IntervalList& intervals, const Competition& competition) {
    return allocate(RuleSpec::interval(intervals), competition);
}

Allocation allocate_single_parametric(const MonotoneFn& f, const Competition& competition,
                                      const SolverConfig& cfg) {
    return allocate(RuleSpec::single_parametric(f), competition, cfg);
}

Allocation allocate_parametric(const FunctionSequence& fs, const Competition& competition,
                               const SolverConfig& cfg) {
    return allocate(RuleSpec::parametric(fs), competition, cfg);
}

Allocation allocate_geometric(double lambda, const Competition& competition,
                              bool allow_increasing) {
    return allocate(RuleSpec::geometric(lambda, allow_increasing), competition);
}

Allocation allocate_proportional(const std::vector<double>& weights,
                                 const Competition& competition) {
    return allocate(RuleSpec::proportional(weights), competition);
}

Allocation allocate_counterexample(const CounterexampleRule& rule,
                                   const Competition& competition) {
    return allocate(RuleSpec(rule), competition);
}

std::vector<double> geometric_weights(double lambda, std::size_t count) {
    std::vector<double> weights(count);
    double w = 1.0;  // λ^0 = 1, also for λ = 0
    for (auto& v : weights) {
        v = w;
        w *= lambda;
    }
    return weights;
}

}  // namespace prizes
