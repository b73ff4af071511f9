#include "prizes/axioms.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <future>
#include <random>
#include <sstream>

#include "prizes/format.hpp"

namespace prizes {

namespace {

constexpr std::size_t exhaustive_subset_limit = 6;
constexpr std::size_t random_subsets_per_n = 64;

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Endowment pairs closer than this are treated as indistinguishable.
double min_endowment_gap(double e) { return 1e-6 * std::max(1.0, e); }

std::string num(double v) { return format_shortest(v); }

std::string phi(const CompetitorId& id, const std::string& where, double endowment) {
    return "phi_" + id.str() + "(" + where + "," + num(endowment) + ")";
}

double scenario_scale(const Scenario& s) {
    double scale = s.primary.endowment();
    if (s.secondary) scale = std::max(scale, s.secondary->endowment());
    if (s.clause == ScaleClause::additivity && s.secondary) {
        scale = s.primary.endowment() + s.secondary->endowment();
    }
    return scale;
}

/// Keeps the worst violation seen; non-strict violations outrank strict ones.
class WorstViolation {
public:
    WorstViolation(AxiomCheck check, const Scenario& scenario) : check_(check), scenario_(scenario) {}

    void broken(double margin, double lhs, double rhs, std::vector<CompetitorId> focus,
                std::string relation) {
        if (found_ && (found_->strict_relation == false && margin <= found_->margin)) return;
        store(margin, lhs, rhs, std::move(focus), std::move(relation), false);
    }

    void not_strict(double gap, double lhs, double rhs, std::vector<CompetitorId> focus,
                    std::string relation) {
        if (found_ && (!found_->strict_relation || gap >= found_->margin)) return;
        store(gap, lhs, rhs, std::move(focus), std::move(relation), true);
    }

    std::optional<Witness> result() && { return std::move(found_); }

private:
    void store(double margin, double lhs, double rhs, std::vector<CompetitorId> focus,
               std::string relation, bool strict) {
        found_ = Witness{check_,  scenario_, std::move(focus), lhs, rhs, std::move(relation),
                         margin, strict};
    }

    AxiomCheck check_;
    const Scenario& scenario_;
    std::optional<Witness> found_;
};

bool subset_qualifies(const Ranking& ranking, const std::vector<CompetitorId>& subset,
                      Mode mode) {
    if (subset.empty()) return false;
    std::vector<std::size_t> pos;
    for (const auto& id : subset) {
        if (!ranking.contains(id)) return false;
        pos.push_back(ranking.position_of(id));
    }
    std::sort(pos.begin(), pos.end());
    if (std::adjacent_find(pos.begin(), pos.end()) != pos.end()) return false;
    switch (mode) {
        case Mode::full: return true;
        case Mode::bilateral: return subset.size() == 2;
        case Mode::local: return pos.back() - pos.front() <= subset.size() - 1;
        case Mode::top: return pos.back() <= subset.size();
        default: return false;
    }
}

std::vector<std::vector<CompetitorId>> arrangements(const RuleSpec& rule, std::size_t n) {
    std::vector<std::vector<CompetitorId>> out{numbered_ids(n)};
    const auto special = distinguished_ids(rule);
    if (special.empty()) return out;

    auto fill = [&](std::vector<CompetitorId> head) {
        head.resize(std::min(head.size(), n));
        for (const auto& id : numbered_ids(n)) {
            if (head.size() == n) break;
            head.push_back(id);
        }
        return head;
    };
    out.push_back(fill(special));
    out.push_back(fill({special.rbegin(), special.rend()}));
    if (n >= 3 && special.size() >= 2) {
        // first special id on top, second at the bottom
        auto spread = fill({special.front()});
        spread.back() = special[1];
        out.push_back(std::move(spread));
    }
    return out;
}

/// Proper subsets of size ≥ 2 as 1-based position lists, smallest first.
/// Singletons and the full set satisfy every consistency relation trivially.
std::vector<std::vector<std::size_t>> subsets_for(std::size_t n, Mode mode, bool pair_only,
                                                  std::mt19937_64& rng) {
    std::vector<std::vector<std::size_t>> out;
    auto wanted = [&](const std::vector<std::size_t>& s) {
        if (s.size() < 2 || s.size() >= n) return false;
        if (pair_only && s.size() != 2) return false;
        switch (mode) {
            case Mode::bilateral: return s.size() == 2;
            case Mode::local: return s.back() - s.front() == s.size() - 1;
            case Mode::top: return s.back() == s.size();
            default: return true;
        }
    };
    if (n <= exhaustive_subset_limit || mode == Mode::local || mode == Mode::top) {
        if (mode == Mode::local || mode == Mode::top) {
            for (std::size_t size = 2; size < n; ++size) {
                for (std::size_t start = 1; start + size - 1 <= n; ++start) {
                    std::vector<std::size_t> s(size);
                    for (std::size_t k = 0; k < size; ++k) s[k] = start + k;
                    if (wanted(s)) out.push_back(std::move(s));
                }
            }
            return out;
        }
        for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
            std::vector<std::size_t> s;
            for (std::size_t k = 0; k < n; ++k) {
                if (mask & (std::uint64_t{1} << k)) s.push_back(k + 1);
            }
            if (wanted(s)) out.push_back(std::move(s));
        }
    } else {
        for (std::size_t draw = 0; draw < random_subsets_per_n; ++draw) {
            std::vector<std::size_t> s;
            const std::size_t size = mode == Mode::bilateral || pair_only
                                         ? 2
                                         : 2 + static_cast<std::size_t>(rng() % (n - 2));
            std::vector<std::size_t> all(n);
            for (std::size_t k = 0; k < n; ++k) all[k] = k + 1;
            std::shuffle(all.begin(), all.end(), rng);
            s.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(size));
            std::sort(s.begin(), s.end());
            if (wanted(s)) out.push_back(std::move(s));
        }
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const auto& a, const auto& b) { return a.size() < b.size(); });
    return out;
}

std::vector<double> snap_candidates(double e) {
    std::vector<double> out;
    for (const double denom : {1.0, 2.0, 4.0}) {
        const double c = std::round(e * denom) / denom;
        if (c != e && c >= 0.0 && std::find(out.begin(), out.end(), c) == out.end()) {
            out.push_back(c);
        }
    }
    return out;
}

/// Walks scenarios in a fixed order and stops at the first violation.
class Search {
public:
    Search(const RuleSpec& rule, AxiomCheck check, const SampleBudget& budget)
        : rule_(rule), check_(check), budget_(budget) {}

    /// Returns false once a violation has been found.
    bool visit(const Scenario& scenario) {
        ++samples_;
        auto w = evaluate_scenario(rule_, check_, scenario, budget_.tol);
        if (!w) return true;
        witness_ = shrink(std::move(*w));
        return false;
    }

    bool done() const { return witness_.has_value(); }

    Verdict verdict() && {
        Verdict v;
        v.check = check_;
        v.outcome = witness_ ? Outcome::fail : Outcome::pass;
        v.samples_checked = samples_;
        v.witness = std::move(witness_);
        v.tolerance = budget_.tol.eq;
        v.budget = budget_.fingerprint();
        std::ostringstream note;
        if (v.outcome == Outcome::pass) {
            note << "no violation in " << samples_ << " samples";
        } else {
            note << "violation found after " << samples_ << " samples";
        }
        note << " (max_n=" << budget_.max_n << ", " << budget_.endowment_grid.size()
             << " endowments, seed=" << budget_.rng_seed << ")";
        v.note = note.str();
        return v;
    }

private:
    // Scenarios are visited smallest n first and, for consistency, smallest
    // subset first, so the first witness is already minimal in both. What is
    // left is snapping endowments to round values while the violation holds.
    Witness shrink(Witness w) const {
        auto attempt = [&](Scenario s) -> bool {
            if (s.secondary && check_.axiom != Axiom::anonymity &&
                s.clause != ScaleClause::additivity && s.clause != ScaleClause::homogeneity) {
                if (!(s.secondary->endowment() - s.primary.endowment() >
                      min_endowment_gap(s.secondary->endowment()))) {
                    return false;
                }
            }
            auto again = evaluate_scenario(rule_, check_, s, budget_.tol);
            if (!again) return false;
            w = std::move(*again);
            return true;
        };
        for (const double c : snap_candidates(w.scenario.primary.endowment())) {
            Scenario s = w.scenario;
            s.primary = s.primary.with_endowment(c);
            if (check_.axiom == Axiom::anonymity && s.secondary) {
                s.secondary = s.secondary->with_endowment(c);
            }
            if (attempt(std::move(s))) break;
        }
        if (w.scenario.secondary && check_.axiom != Axiom::anonymity &&
            w.scenario.clause != ScaleClause::homogeneity) {
            for (const double c : snap_candidates(w.scenario.secondary->endowment())) {
                Scenario s = w.scenario;
                s.secondary = s.secondary->with_endowment(c);
                if (attempt(std::move(s))) break;
            }
        }
        return w;
    }

    const RuleSpec& rule_;
    AxiomCheck check_;
    const SampleBudget& budget_;
    std::size_t samples_ = 0;
    std::optional<Witness> witness_;
};

void require_budget(const SampleBudget& budget) {
    if (budget.max_n < 2) throw Error(ErrorCode::invalid_rule_params, "budget needs max_n >= 2");
    if (budget.endowment_grid.empty()) {
        throw Error(ErrorCode::invalid_rule_params, "budget needs a non-empty endowment grid");
    }
    for (const double e : budget.endowment_grid) {
        if (!(e >= 0.0) || !std::isfinite(e)) {
            throw Error(ErrorCode::negative_endowment, "budget endowments must be >= 0");
        }
    }
}

Competition competition_of(const std::vector<CompetitorId>& order, double endowment) {
    return {Ranking(order), endowment};
}

/// Ordered endowment pairs E < E' over the grid, in grid order.
std::vector<std::pair<double, double>> increasing_pairs(const std::vector<double>& grid) {
    std::vector<std::pair<double, double>> out;
    for (const double e : grid) {
        for (const double f : grid) {
            if (f - e > min_endowment_gap(f)) out.emplace_back(e, f);
        }
    }
    return out;
}

Verdict endowment_pair_search(const RuleSpec& rule, const SampleBudget& budget,
                              AxiomCheck check) {
    require_budget(budget);
    Search search(rule, check, budget);
    const auto pairs = increasing_pairs(budget.endowment_grid);
    for (std::size_t n = 1; n <= budget.max_n && !search.done(); ++n) {
        for (const auto& order : arrangements(rule, n)) {
            for (const auto& [e, f] : pairs) {
                Scenario s{competition_of(order, e), competition_of(order, f), {}};
                if (!search.visit(s)) break;
            }
            if (search.done()) break;
        }
    }
    return std::move(search).verdict();
}

}  // namespace

std::string to_string(const AxiomCheck& check) {
    std::string axiom;
    switch (check.axiom) {
        case Axiom::anonymity: axiom = "anonymity"; break;
        case Axiom::order_preservation: axiom = "order-preservation"; break;
        case Axiom::endowment_monotonicity: axiom = "endowment-monotonicity"; break;
        case Axiom::lipschitz: axiom = "lipschitz"; break;
        case Axiom::scale_invariance: axiom = "scale-invariance"; break;
        case Axiom::consistency: axiom = "consistency"; break;
    }
    switch (check.mode) {
        case Mode::none: return axiom;
        case Mode::weak: return axiom + "/weak";
        case Mode::winner_loser_strict: return axiom + "/winner-loser-strict";
        case Mode::strict: return axiom + "/strict";
        case Mode::winner_strict: return axiom + "/winner-strict";
        case Mode::full: return axiom + "/full";
        case Mode::bilateral: return axiom + "/bilateral";
        case Mode::local: return axiom + "/local";
        case Mode::top: return axiom + "/top";
    }
    return axiom;
}

std::optional<AxiomCheck> parse_axiom_check(const std::string& axiom_text,
                                            const std::string& mode_text) {
    std::string axiom = axiom_text;
    std::string mode = mode_text;
    if (const auto slash = axiom.find('/'); slash != std::string::npos) {
        if (mode.empty()) mode = axiom.substr(slash + 1);
        axiom = axiom.substr(0, slash);
    }
    for (const auto& check : standard_checks()) {
        const auto name = to_string(check);
        const auto base = name.substr(0, name.find('/'));
        if (base != axiom) continue;
        const auto slash = name.find('/');
        const std::string check_mode = slash == std::string::npos ? "" : name.substr(slash + 1);
        if (check_mode == mode) return check;
        if (mode.empty() && (check_mode.empty() || check_mode == "weak" || check_mode == "full")) {
            return check;
        }
    }
    return std::nullopt;
}

const std::vector<AxiomCheck>& standard_checks() {
    static const std::vector<AxiomCheck> checks{
        {Axiom::anonymity, Mode::none},
        {Axiom::order_preservation, Mode::weak},
        {Axiom::order_preservation, Mode::winner_loser_strict},
        {Axiom::order_preservation, Mode::strict},
        {Axiom::endowment_monotonicity, Mode::weak},
        {Axiom::endowment_monotonicity, Mode::winner_strict},
        {Axiom::endowment_monotonicity, Mode::strict},
        {Axiom::lipschitz, Mode::none},
        {Axiom::scale_invariance, Mode::none},
        {Axiom::consistency, Mode::full},
        {Axiom::consistency, Mode::bilateral},
        {Axiom::consistency, Mode::local},
        {Axiom::consistency, Mode::top},
    };
    return checks;
}

std::vector<double> default_endowment_grid(std::uint64_t seed, std::size_t random_draws) {
    std::vector<double> grid;
    for (int k = 0; k <= 40; ++k) grid.push_back(0.25 * k);
    std::mt19937_64 rng(seed);
    for (std::size_t k = 0; k < random_draws; ++k) grid.push_back(10.0 * uniform01(rng));
    return grid;
}

SampleBudget SampleBudget::with_seed(std::uint64_t seed, std::size_t random_draws) {
    SampleBudget budget;
    budget.rng_seed = seed;
    budget.endowment_grid = default_endowment_grid(seed, random_draws);
    return budget;
}

std::string SampleBudget::fingerprint() const {
    std::uint64_t hash = 1469598103934665603ULL;  // FNV-1a
    for (const double e : endowment_grid) {
        std::uint64_t bits = 0;
        std::memcpy(&bits, &e, sizeof bits);
        for (int b = 0; b < 8; ++b) {
            hash ^= (bits >> (8 * b)) & 0xffU;
            hash *= 1099511628211ULL;
        }
    }
    std::ostringstream out;
    out << "max_n=" << max_n << ";seed=" << rng_seed << ";pair_only=" << pair_only
        << ";relabel=" << random_relabellings << ";grid=" << endowment_grid.size() << ':'
        << std::hex << hash << std::dec << ";tol=" << format_shortest(tol.eq);
    return out.str();
}

const char* to_string(Outcome outcome) {
    switch (outcome) {
        case Outcome::pass: return "pass";
        case Outcome::fail: return "fail";
        case Outcome::skipped: return "skipped";
    }
    return "?";
}

std::optional<Witness> evaluate_scenario(const RuleSpec& rule, const AxiomCheck& check,
                                         const Scenario& sc, const Tolerances& tol,
                                         const SolverConfig& cfg) {
    const double t = tol.eq_for(scenario_scale(sc));
    WorstViolation worst(check, sc);
    const auto& primary = sc.primary;
    const double e = primary.endowment();
    const auto& order = primary.ranking().in_order();
    const std::size_t n = primary.size();

    switch (check.axiom) {
        case Axiom::anonymity: {
            if (!sc.secondary || sc.secondary->size() != n ||
                sc.secondary->endowment() != e) {
                return std::nullopt;
            }
            const auto a = allocate(rule, primary, cfg);
            const auto b = allocate(rule, *sc.secondary, cfg);
            const auto& other = sc.secondary->ranking().in_order();
            for (std::size_t r = 0; r < n; ++r) {
                const double d = std::abs(a.prize_at(r) - b.prize_at(r));
                if (d > t) {
                    worst.broken(d, a.prize_at(r), b.prize_at(r), {order[r], other[r]},
                                 phi(order[r], "N,R", e) + " = " + num(a.prize_at(r)) +
                                     " != " + phi(other[r], "N',R'", e) + " = " +
                                     num(b.prize_at(r)) + " at position " +
                                     std::to_string(r + 1));
                }
            }
            break;
        }
        case Axiom::order_preservation: {
            const auto a = allocate(rule, primary, cfg);
            for (std::size_t r = 0; r < n; ++r) {
                for (std::size_t s = r + 1; s < n; ++s) {
                    const double excess = a.prize_at(s) - a.prize_at(r);
                    if (excess > t) {
                        worst.broken(excess, a.prize_at(r), a.prize_at(s), {order[r], order[s]},
                                     phi(order[r], "N,R", e) + " = " + num(a.prize_at(r)) +
                                         " < " + phi(order[s], "N,R", e) + " = " +
                                         num(a.prize_at(s)));
                    }
                }
            }
            if (e > 0.0 && n >= 2) {
                auto strict_pair = [&](std::size_t r, std::size_t s) {
                    const double gap = a.prize_at(r) - a.prize_at(s);
                    if (gap <= t) {
                        worst.not_strict(gap, a.prize_at(r), a.prize_at(s), {order[r], order[s]},
                                         phi(order[r], "N,R", e) + " = " + num(a.prize_at(r)) +
                                             " is not > " + phi(order[s], "N,R", e) + " = " +
                                             num(a.prize_at(s)));
                    }
                };
                if (check.mode == Mode::winner_loser_strict) strict_pair(0, n - 1);
                if (check.mode == Mode::strict) {
                    for (std::size_t r = 0; r + 1 < n; ++r) {
                        for (std::size_t s = r + 1; s < n; ++s) strict_pair(r, s);
                    }
                }
            }
            break;
        }
        case Axiom::endowment_monotonicity:
        case Axiom::lipschitz: {
            if (!sc.secondary || sc.secondary->ranking() != primary.ranking()) return std::nullopt;
            const double f = sc.secondary->endowment();
            if (check.axiom == Axiom::endowment_monotonicity && !(f > e)) return std::nullopt;
            const auto a = allocate(rule, primary, cfg);
            const auto b = allocate(rule, *sc.secondary, cfg);
            for (std::size_t r = 0; r < n; ++r) {
                const double pa = a.prize_at(r);
                const double pb = b.prize_at(r);
                if (check.axiom == Axiom::lipschitz) {
                    const double excess = std::abs(pa - pb) - std::abs(e - f);
                    if (excess > t) {
                        worst.broken(excess, std::abs(pa - pb), std::abs(e - f), {order[r]},
                                     "|" + phi(order[r], "N,R", e) + " - " +
                                         phi(order[r], "N,R", f) + "| = " +
                                         num(std::abs(pa - pb)) + " > |E - E'| = " +
                                         num(std::abs(e - f)));
                    }
                    continue;
                }
                if (pa - pb > t) {
                    worst.broken(pa - pb, pa, pb, {order[r]},
                                 phi(order[r], "N,R", e) + " = " + num(pa) + " > " +
                                     phi(order[r], "N,R", f) + " = " + num(pb));
                }
                const bool strict_here = check.mode == Mode::strict ||
                                         (check.mode == Mode::winner_strict && r == 0);
                if (strict_here && pb - pa <= t) {
                    worst.not_strict(pb - pa, pa, pb, {order[r]},
                                     phi(order[r], "N,R", e) + " = " + num(pa) + " is not < " +
                                         phi(order[r], "N,R", f) + " = " + num(pb));
                }
            }
            break;
        }
        case Axiom::scale_invariance: {
            if (!sc.secondary || sc.secondary->ranking() != primary.ranking()) return std::nullopt;
            const double f = sc.secondary->endowment();
            const auto a = allocate(rule, primary, cfg);
            const auto b = allocate(rule, *sc.secondary, cfg);
            if (sc.clause == ScaleClause::homogeneity) {
                if (f != 1.0) return std::nullopt;
                for (std::size_t r = 0; r < n; ++r) {
                    const double d = std::abs(a.prize_at(r) - e * b.prize_at(r));
                    if (d > t) {
                        worst.broken(d, a.prize_at(r), e * b.prize_at(r), {order[r]},
                                     phi(order[r], "N,R", e) + " = " + num(a.prize_at(r)) +
                                         " != E * " + phi(order[r], "N,R", 1.0) + " = " +
                                         num(e * b.prize_at(r)));
                    }
                }
            } else if (sc.clause == ScaleClause::additivity) {
                const auto c = allocate(rule, primary.with_endowment(e + f), cfg);
                for (std::size_t r = 0; r < n; ++r) {
                    const double sum = a.prize_at(r) + b.prize_at(r);
                    const double d = std::abs(c.prize_at(r) - sum);
                    if (d > t) {
                        worst.broken(d, c.prize_at(r), sum, {order[r]},
                                     phi(order[r], "N,R", e + f) + " = " + num(c.prize_at(r)) +
                                         " != " + phi(order[r], "N,R", e) + " + " +
                                         phi(order[r], "N,R", f) + " = " + num(sum));
                    }
                }
            }
            break;
        }
        case Axiom::consistency: {
            if (!subset_qualifies(primary.ranking(), sc.subset, check.mode)) return std::nullopt;
            const auto a = allocate(rule, primary, cfg);
            double sub = 0.0;
            for (const auto& id : sc.subset) sub += a.prize(id);
            const Competition reduced(subranking(primary.ranking(), sc.subset), sub);
            const auto b = allocate(rule, reduced, cfg);
            for (const auto& id : reduced.ranking().in_order()) {
                const double d = std::abs(a.prize(id) - b.prize(id));
                if (d > t) {
                    worst.broken(d, a.prize(id), b.prize(id), {id},
                                 phi(id, "N,R", e) + " = " + num(a.prize(id)) + " != " +
                                     phi(id, "S,R_S", sub) + " = " + num(b.prize(id)));
                }
            }
            break;
        }
    }
    return std::move(worst).result();
}

bool reverify(const RuleSpec& rule, const Witness& witness, const Tolerances& tol) {
    const auto again = evaluate_scenario(rule, witness.check, witness.scenario, tol);
    if (!again) return false;
    if (witness.strict_relation) return again->strict_relation || again->margin > 0.0;
    return !again->strict_relation && again->margin > tol.eq_for(scenario_scale(witness.scenario));
}

Verdict check_anonymity(const RuleSpec& rule, const SampleBudget& budget) {
    require_budget(budget);
    const AxiomCheck check{Axiom::anonymity, Mode::none};
    Search search(rule, check, budget);
    std::mt19937_64 rng(budget.rng_seed);
    auto pool = distinguished_ids(rule);
    for (const auto& id : numbered_ids(budget.max_n + 2)) pool.push_back(id);

    for (std::size_t n = 1; n <= budget.max_n && !search.done(); ++n) {
        auto orders = arrangements(rule, n);
        for (std::size_t k = 0; k < budget.random_relabellings; ++k) {
            auto shuffled = pool;
            std::shuffle(shuffled.begin(), shuffled.end(), rng);
            shuffled.resize(n);
            orders.push_back(std::move(shuffled));
        }
        for (const double e : budget.endowment_grid) {
            const auto reference = competition_of(orders.front(), e);
            for (std::size_t k = 1; k < orders.size(); ++k) {
                if (!search.visit({reference, competition_of(orders[k], e), {}})) break;
            }
            if (search.done()) break;
        }
    }
    return std::move(search).verdict();
}

Verdict check_order_preservation(const RuleSpec& rule, const SampleBudget& budget, Mode mode) {
    if (mode != Mode::weak && mode != Mode::winner_loser_strict && mode != Mode::strict) {
        throw Error(ErrorCode::invalid_rule_params, "unknown order preservation mode");
    }
    require_budget(budget);
    Search search(rule, {Axiom::order_preservation, mode}, budget);
    for (std::size_t n = 1; n <= budget.max_n && !search.done(); ++n) {
        for (const auto& order : arrangements(rule, n)) {
            for (const double e : budget.endowment_grid) {
                if (!search.visit({competition_of(order, e), std::nullopt, {}})) break;
            }
            if (search.done()) break;
        }
    }
    return std::move(search).verdict();
}

Verdict check_endowment_monotonicity(const RuleSpec& rule, const SampleBudget& budget,
                                     Mode mode) {
    if (mode != Mode::weak && mode != Mode::winner_strict && mode != Mode::strict) {
        throw Error(ErrorCode::invalid_rule_params, "unknown endowment monotonicity mode");
    }
    return endowment_pair_search(rule, budget, {Axiom::endowment_monotonicity, mode});
}

Verdict check_lipschitz(const RuleSpec& rule, const SampleBudget& budget,
                        const Verdict& monotonicity) {
    const AxiomCheck needed{Axiom::endowment_monotonicity, Mode::weak};
    if (monotonicity.check != needed || !monotonicity.passed() ||
        monotonicity.budget != budget.fingerprint()) {
        throw Error(ErrorCode::precondition_not_checked,
                    "Lipschitz check needs a weak endowment monotonicity pass on the same budget");
    }
    return endowment_pair_search(rule, budget, {Axiom::lipschitz, Mode::none});
}

Verdict check_scale_invariance(const RuleSpec& rule, const SampleBudget& budget) {
    require_budget(budget);
    Search search(rule, {Axiom::scale_invariance, Mode::none}, budget);
    const auto& grid = budget.endowment_grid;
    for (std::size_t n = 1; n <= budget.max_n && !search.done(); ++n) {
        for (const auto& order : arrangements(rule, n)) {
            const auto unit = competition_of(order, 1.0);
            for (const double e : grid) {
                if (!search.visit({competition_of(order, e), unit, {}, ScaleClause::homogeneity})) {
                    break;
                }
            }
            for (std::size_t i = 0; i < grid.size() && !search.done(); ++i) {
                for (std::size_t j = i; j < grid.size(); ++j) {
                    const Scenario s{competition_of(order, grid[i]), competition_of(order, grid[j]),
                                     {}, ScaleClause::additivity};
                    if (!search.visit(s)) break;
                }
            }
            if (search.done()) break;
        }
    }
    return std::move(search).verdict();
}

Verdict check_consistency(const RuleSpec& rule, const SampleBudget& budget, Mode mode) {
    if (mode != Mode::full && mode != Mode::bilateral && mode != Mode::local && mode != Mode::top) {
        throw Error(ErrorCode::invalid_rule_params, "unknown consistency mode");
    }
    require_budget(budget);
    Search search(rule, {Axiom::consistency, mode}, budget);
    std::mt19937_64 rng(budget.rng_seed);
    for (std::size_t n = 3; n <= budget.max_n && !search.done(); ++n) {
        const auto orders = arrangements(rule, n);
        for (const auto& positions : subsets_for(n, mode, budget.pair_only, rng)) {
            for (const double e : budget.endowment_grid) {
                for (const auto& order : orders) {
                    std::vector<CompetitorId> subset;
                    for (const auto p : positions) subset.push_back(order[p - 1]);
                    if (!search.visit({competition_of(order, e), std::nullopt, std::move(subset)})) {
                        break;
                    }
                }
                if (search.done()) break;
            }
            if (search.done()) break;
        }
    }
    return std::move(search).verdict();
}

Verdict run_check(const RuleSpec& rule, const AxiomCheck& check, const SampleBudget& budget) {
    switch (check.axiom) {
        case Axiom::anonymity: return check_anonymity(rule, budget);
        case Axiom::order_preservation: return check_order_preservation(rule, budget, check.mode);
        case Axiom::endowment_monotonicity:
            return check_endowment_monotonicity(rule, budget, check.mode);
        case Axiom::lipschitz: {
            const auto mono = check_endowment_monotonicity(rule, budget, Mode::weak);
            if (!mono.passed()) {
                Verdict v;
                v.check = check;
                v.outcome = Outcome::skipped;
                v.tolerance = budget.tol.eq;
                v.budget = budget.fingerprint();
                v.note = "skipped: weak endowment monotonicity fails, so the bound is not implied";
                return v;
            }
            return check_lipschitz(rule, budget, mono);
        }
        case Axiom::scale_invariance: return check_scale_invariance(rule, budget);
        case Axiom::consistency: return check_consistency(rule, budget, check.mode);
    }
    throw Error(ErrorCode::invalid_rule_params, "unknown axiom");
}

AxiomMatrix run_axiom_matrix(const std::vector<NamedRule>& rules, const SampleBudget& budget,
                             const std::vector<AxiomCheck>& checks) {
    AxiomMatrix matrix{rules, checks, {}};
    std::vector<std::future<std::vector<Verdict>>> rows;
    rows.reserve(rules.size());
    for (const auto& named : rules) {
        rows.push_back(std::async(std::launch::async, [&named, &budget, &checks] {
            std::vector<Verdict> row;
            row.reserve(checks.size());
            for (const auto& check : checks) row.push_back(run_check(named.rule, check, budget));
            return row;
        }));
    }
    for (auto& row : rows) matrix.cells.push_back(row.get());
    return matrix;
}

const std::vector<double>& golf_shares() {
    static const std::vector<double> shares{18.0, 10.9, 6.9,  4.9,  4.1,
                                            3.63, 3.38, 3.13, 2.93, 2.73};
    return shares;
}

std::vector<NamedRule> bundled_rules() {
    using K = CounterexampleKind;
    return {
        {"ed", RuleSpec::ed()},
        {"wta", RuleSpec::wta()},
        {"wts-1", RuleSpec::wts(1.0)},
        {"unit-steps", RuleSpec::interval(IntervalList::unit_steps(1000))},
        {"geometric-0.5", RuleSpec::geometric(0.5)},
        {"arithmetic", RuleSpec::single_parametric(MonotoneFn::shift(1.0))},
        {"hyperarithmetic", RuleSpec::parametric(FunctionSequence::hyperarithmetic())},
        {"golf-proportional", RuleSpec::proportional(golf_shares())},
        {"lowest-takes-all", RuleSpec::counterexample(K::lowest_takes_all)},
        {"threshold-switch", RuleSpec::counterexample(K::threshold_switch)},
        {"pair-favoritism", RuleSpec::counterexample(K::pair_favoritism)},
        {"late-dollar", RuleSpec::counterexample(K::late_dollar)},
        {"ed2-wta3", RuleSpec::counterexample(K::ed2_wta3)},
    };
}

}  // namespace prizes
