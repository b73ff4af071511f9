#ifndef PRIZES_CORE_HPP
#define PRIZES_CORE_HPP

#include <algorithm>
#include <compare>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace prizes {

enum class ErrorCode {
    duplicate_id,
    not_a_permutation,
    negative_endowment,
    empty_subset,
    unknown_competitor,
    key_mismatch,
    invalid_rule_params,
    solver_failure,
    unknown_counterexample,
    precondition_not_checked,
    too_few_positions,
    inconsistent_position_counts,
    parse_error,
    io_error,
    schema_error,
    non_numeric,
};

const char* to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Numeric tolerances shared by validation and the axiom checkers.
struct Tolerances {
    double sum_rel = 1e-9;  // τ_sum = sum_rel · max(1, E)
    double eq = 1e-9;       // τ_eq, scaled by max(1, E) where endowments are involved

    double sum_for(double endowment) const { return sum_rel * std::max(1.0, endowment); }
    double eq_for(double scale) const { return eq * std::max(1.0, scale); }

    friend bool operator==(const Tolerances&, const Tolerances&) = default;
};

/// Opaque competitor token. Only identity matters.
class CompetitorId {
public:
    CompetitorId() = default;
    explicit CompetitorId(std::string token);

    const std::string& str() const noexcept { return token_; }

    friend auto operator<=>(const CompetitorId&, const CompetitorId&) = default;
    friend bool operator==(const CompetitorId&, const CompetitorId&) = default;

private:
    std::string token_;
};

/// Ids "prefix1" .. "prefixN".
std::vector<CompetitorId> numbered_ids(std::size_t n, const std::string& prefix = "c");

/// Bijection from a competitor set onto positions 1..n. Stored in position order.
class Ranking {
public:
    /// `order[r]` holds position r+1.
    explicit Ranking(std::vector<CompetitorId> order);

    static Ranking from_positions(const std::vector<CompetitorId>& ids,
                                  const std::vector<int>& positions);

    std::size_t size() const noexcept { return order_.size(); }
    const std::vector<CompetitorId>& in_order() const noexcept { return order_; }
    const CompetitorId& at_position(std::size_t position) const;  // 1-based
    std::size_t position_of(const CompetitorId& id) const;         // 1-based
    bool contains(const CompetitorId& id) const;

    friend bool operator==(const Ranking&, const Ranking&) = default;

private:
    std::vector<CompetitorId> order_;
};

/// Restriction of `ranking` to `subset`, renumbered 1..|subset| in the same relative order.
Ranking subranking(const Ranking& ranking, const std::vector<CompetitorId>& subset);

class Competition {
public:
    Competition(Ranking ranking, double endowment);

    const Ranking& ranking() const noexcept { return ranking_; }
    double endowment() const noexcept { return endowment_; }
    std::size_t size() const noexcept { return ranking_.size(); }

    Competition with_endowment(double endowment) const { return {ranking_, endowment}; }

    friend bool operator==(const Competition&, const Competition&) = default;

private:
    Ranking ranking_;
    double endowment_;
};

Competition make_competition(const std::vector<CompetitorId>& ids,
                             const std::vector<int>& positions, double endowment);

/// Competition over `numbered_ids(n)` ranked in id order.
Competition make_competition(std::size_t n, double endowment);

/// Prizes of one competition, kept in ranking order.
class Allocation {
public:
    Allocation() = default;
    Allocation(std::vector<CompetitorId> ids, std::vector<double> prizes);

    /// Attach position-ordered prizes to the competitors of `competition`.
    static Allocation by_position(const Competition& competition, std::vector<double> prizes);

    std::size_t size() const noexcept { return prizes_.size(); }
    const std::vector<CompetitorId>& ids() const noexcept { return ids_; }
    std::span<const double> prizes() const noexcept { return prizes_; }
    double prize(const CompetitorId& id) const;
    double prize_at(std::size_t index) const { return prizes_.at(index); }
    double total() const;

    friend bool operator==(const Allocation&, const Allocation&) = default;

private:
    std::vector<CompetitorId> ids_;
    std::vector<double> prizes_;
};

/// True iff every prize is non-negative and the total is within `sum_tol` of E.
/// Throws KeyMismatch when the allocation is not keyed by exactly the competitors.
bool validate_allocation(const Competition& competition, const Allocation& allocation,
                         double sum_tol);

struct PrizeTable {
    std::string name;
    double endowment = 0.0;
    std::vector<double> prizes;  // position 1 first

    friend bool operator==(const PrizeTable&, const PrizeTable&) = default;
};

void validate(const PrizeTable& table);

struct EventSet {
    std::vector<PrizeTable> events;

    std::size_t positions() const { return events.empty() ? 0 : events.front().prizes.size(); }

    friend bool operator==(const EventSet&, const EventSet&) = default;
};

void validate(const EventSet& events);

}  // namespace prizes

#endif  // PRIZES_CORE_HPP
