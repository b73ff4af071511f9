#include "prizes/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "prizes/format.hpp"

namespace prizes {

namespace {

/// Deviation beyond the absolute slack, relative to `scale`.
double rel_dev(double diff, double scale, const FitTolerances& tol) {
    const double excess = std::max(0.0, std::abs(diff) - tol.abs_slack);
    if (excess == 0.0) return 0.0;
    if (!(scale > 0.0)) return std::numeric_limits<double>::infinity();
    return excess / scale;
}

double top_of(const std::vector<double>& prizes) {
    return prizes.empty() ? 0.0 : *std::max_element(prizes.begin(), prizes.end());
}

void finish(FitReport& report, const FitTolerances& tol) {
    report.tolerance = tol.rel;
    report.verdict = report.max_rel_dev <= tol.rel;
}

void note_order(const PrizeTable& table, std::vector<std::string>& warnings) {
    for (std::size_t k = 0; k + 1 < table.prizes.size(); ++k) {
        if (table.prizes[k + 1] > table.prizes[k]) {
            warnings.push_back("NonMonotoneInput: " + table.name + " position " +
                               std::to_string(k + 2) + " exceeds position " +
                               std::to_string(k + 1));
        }
    }
}

FitReport fit_shares(const EventSet& events, const FitTolerances& tol, std::string family,
                     bool require_monotone) {
    validate(events);
    const std::size_t n = events.positions();
    if (n < 1) throw Error(ErrorCode::too_few_positions, "share fit needs at least one position");

    FitReport report;
    report.family = std::move(family);
    report.shares.assign(n, 0.0);
    for (const auto& event : events.events) {
        for (std::size_t r = 0; r < n; ++r) report.shares[r] += event.prizes[r] / event.endowment;
    }
    for (auto& s : report.shares) s *= 100.0 / static_cast<double>(events.events.size());

    for (const auto& event : events.events) {
        note_order(event, report.warnings);
        const double top = top_of(event.prizes);
        std::vector<double> fitted(n);
        for (std::size_t r = 0; r < n; ++r) {
            fitted[r] = report.shares[r] / 100.0 * event.endowment;
            const double p = event.prizes[r];
            report.max_rel_dev =
                std::max(report.max_rel_dev, rel_dev(p - fitted[r], p > 0.0 ? p : top, tol));
        }
        report.reconstructed.push_back(std::move(fitted));
    }
    if (require_monotone && report.shares.front() > 0.0) {
        // Increasing shares count as a deviation relative to the top share.
        for (std::size_t r = 0; r + 1 < n; ++r) {
            const double rise = report.shares[r + 1] - report.shares[r];
            if (rise > 0.0) {
                report.max_rel_dev = std::max(report.max_rel_dev, rise / report.shares.front());
            }
        }
    }
    finish(report, tol);
    return report;
}

bool degenerate(const PrizeTable& table, const FitTolerances& tol) {
    const auto& p = table.prizes;
    const double top = top_of(p);
    const double allowed = tol.rel * top + tol.abs_slack;
    const auto [lo, hi] = std::minmax_element(p.begin(), p.end());
    if (*hi - *lo <= allowed) return true;  // equal division
    return std::all_of(p.begin() + 1, p.end(), [&](double v) { return v <= allowed; });
}

const FitReport& worst(const std::vector<FitReport>& reports) {
    return *std::max_element(reports.begin(), reports.end(),
                             [](const FitReport& a, const FitReport& b) {
                                 return a.max_rel_dev < b.max_rel_dev;
                             });
}

}  // namespace

std::optional<double> FitReport::parameter(const std::string& name) const {
    for (const auto& [key, value] : parameters) {
        if (key == name) return value;
    }
    return std::nullopt;
}

const char* to_string(Tier tier) {
    switch (tier) {
        case Tier::consistent_shape: return "consistent-shape";
        case Tier::locally_consistent: return "locally-consistent";
        case Tier::top_consistent: return "top-consistent";
        case Tier::unordered: return "unordered";
    }
    return "?";
}

FitReport fit_geometric(const PrizeTable& table, const FitTolerances& tol) {
    const auto& p = table.prizes;
    if (p.size() < 2) throw Error(ErrorCode::too_few_positions, "geometric fit needs two positions");
    if (!(top_of(p) > 0.0)) {
        throw Error(ErrorCode::too_few_positions, "geometric fit needs a positive prize");
    }

    FitReport report;
    report.family = "geometric";
    note_order(table, report.warnings);

    double log_sum = 0.0;
    std::size_t pairs = 0;
    for (std::size_t k = 0; k + 1 < p.size(); ++k) {
        if (p[k] > 0.0 && p[k + 1] > 0.0) {
            log_sum += std::log(p[k + 1] / p[k]);
            ++pairs;
        }
    }
    const double lambda = pairs == 0 ? 0.0 : std::exp(log_sum / static_cast<double>(pairs));
    report.parameters = {{"lambda", lambda}};

    // A drop to zero after a positive prize contributes a deviation of λ̂.
    for (std::size_t k = 0; k + 1 < p.size(); ++k) {
        if (p[k] > 0.0) {
            report.max_rel_dev =
                std::max(report.max_rel_dev, rel_dev(p[k + 1] - lambda * p[k], p[k], tol));
        }
    }
    std::vector<double> fitted(p.size());
    double level = p.front();
    for (auto& v : fitted) {
        v = level;
        level *= lambda;
    }
    report.reconstructed.push_back(std::move(fitted));
    finish(report, tol);
    return report;
}

FitReport fit_proportional(const EventSet& events, const FitTolerances& tol) {
    return fit_shares(events, tol, "proportional", true);
}

FitReport fit_scale_invariance(const EventSet& events, const FitTolerances& tol) {
    return fit_shares(events, tol, "scale-invariance", false);
}

FitReport detect_interval_pattern(const PrizeTable& table, const FitTolerances& tol) {
    const auto& p = table.prizes;
    const std::size_t n = p.size();
    if (n < 2) throw Error(ErrorCode::too_few_positions, "interval pattern needs two positions");
    const double top = top_of(p);

    struct Candidate {
        std::size_t split;
        double a, b, x, dev;
    };
    auto evaluate = [&](std::size_t split) {
        const std::size_t xi = split - 1;
        const double x = p[xi];
        const double b =
            xi == 0 ? x : std::accumulate(p.begin(), p.begin() + xi, 0.0) / static_cast<double>(xi);
        const double a = xi + 1 == n ? x
                                     : std::accumulate(p.begin() + xi + 1, p.end(), 0.0) /
                                           static_cast<double>(n - xi - 1);
        double dev = 0.0;
        for (std::size_t k = 0; k < xi; ++k) dev = std::max(dev, rel_dev(p[k] - b, top, tol));
        for (std::size_t k = xi + 1; k < n; ++k) dev = std::max(dev, rel_dev(p[k] - a, top, tol));
        dev = std::max(dev, rel_dev(std::max(0.0, a - x), top, tol));
        dev = std::max(dev, rel_dev(std::max(0.0, x - b), top, tol));
        return Candidate{split, a, b, x, dev};
    };

    std::optional<Candidate> chosen;
    std::optional<Candidate> closest;
    for (std::size_t split = n; split >= 1; --split) {
        const auto c = evaluate(split);
        if (!closest || c.dev < closest->dev) closest = c;
        if (c.dev <= tol.rel) {
            chosen = c;
            break;
        }
    }
    const Candidate& c = chosen ? *chosen : *closest;

    FitReport report;
    report.family = "interval-pattern";
    note_order(table, report.warnings);
    report.parameters = {{"a", c.a}, {"b", c.b}, {"x", c.x}, {"split", static_cast<double>(c.split)}};
    std::vector<double> fitted(n);
    for (std::size_t k = 0; k < n; ++k) {
        fitted[k] = k + 1 < c.split ? c.b : (k + 1 == c.split ? c.x : c.a);
    }
    report.reconstructed.push_back(std::move(fitted));
    report.max_rel_dev = c.dev;
    finish(report, tol);
    return report;
}

Tier decide_tier(bool order_preserved, bool interval_match, bool degenerate_shape,
                 const std::optional<bool>& scale_invariant, bool geometric, bool proportional) {
    if (!order_preserved) return Tier::unordered;
    // Scale-invariant interval shapes across events leave only ED and WTA.
    if (interval_match && (!scale_invariant.value_or(false) || degenerate_shape)) {
        return Tier::consistent_shape;
    }
    if (geometric) return Tier::locally_consistent;
    if (proportional) return Tier::top_consistent;
    return Tier::unordered;
}

Classification classify(const EventSet& events, const FitTolerances& tol) {
    validate(events);
    Classification out;

    std::vector<FitReport> geometric;
    std::vector<FitReport> pattern;
    bool interval_match = true;
    bool geometric_ok = true;
    bool degenerate_shape = true;
    for (const auto& event : events.events) {
        for (std::size_t k = 0; k + 1 < event.prizes.size(); ++k) {
            if (event.prizes[k + 1] > event.prizes[k] + tol.abs_slack) out.order_preserved = false;
        }
        geometric.push_back(fit_geometric(event, tol));
        pattern.push_back(detect_interval_pattern(event, tol));
        geometric_ok = geometric_ok && geometric.back().verdict;
        interval_match = interval_match && pattern.back().verdict;
        degenerate_shape = degenerate_shape && degenerate(event, tol);
    }
    out.geometric = worst(geometric);
    out.interval_pattern = worst(pattern);
    out.proportional = fit_proportional(events, tol);

    std::optional<bool> scale_invariant;
    if (events.events.size() >= 2) {
        out.scale_invariant_across_events = fit_scale_invariance(events, tol);
        scale_invariant = out.scale_invariant_across_events->verdict;
    }
    out.tier = decide_tier(out.order_preserved, interval_match, degenerate_shape, scale_invariant,
                           geometric_ok, out.proportional.verdict);
    return out;
}

Verdict check_data_top_consistency(const PrizeTable& table, const RuleSpec& rule,
                                   const FitTolerances& tol) {
    validate(table);
    const auto& p = table.prizes;
    const double top = top_of(p);

    Verdict verdict;
    verdict.check = {Axiom::consistency, Mode::top};
    verdict.tolerance = tol.rel;
    verdict.budget = "data:" + table.name;

    double prefix = 0.0;
    for (std::size_t m = 1; m <= p.size() && !verdict.witness; ++m) {
        prefix += p[m - 1];
        const auto fitted = allocate_positions(rule, m, prefix);
        ++verdict.samples_checked;
        std::optional<std::size_t> worst_k;
        double worst_dev = tol.rel;
        for (std::size_t k = 0; k < m; ++k) {
            const double dev = rel_dev(p[k] - fitted[k], p[k] > 0.0 ? p[k] : top, tol);
            if (dev > worst_dev) {
                worst_dev = dev;
                worst_k = k;
            }
        }
        if (!worst_k) continue;
        const std::size_t k = *worst_k;
        const auto id = CompetitorId("c" + std::to_string(k + 1));
        verdict.witness = Witness{verdict.check,
                                  Scenario{make_competition(m, prefix), std::nullopt, {}},
                                  {id},
                                  p[k],
                                  fitted[k],
                                  "observed prize " + format_shortest(p[k]) + " at position " +
                                      std::to_string(k + 1) + " != " + describe(rule) + " prize " +
                                      format_shortest(fitted[k]) + " for the top " +
                                      std::to_string(m) + " sharing " + format_shortest(prefix),
                                  worst_dev,
                                  false};
    }
    verdict.outcome = verdict.witness ? Outcome::fail : Outcome::pass;
    verdict.note = verdict.witness ? "prefix reallocation departs from the observed prizes"
                                   : "every prefix reallocation reproduces the observed prizes";
    return verdict;
}

}  // namespace prizes
