#include "prizes/core.hpp"

#include <cmath>
#include <set>

namespace prizes {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::duplicate_id: return "DuplicateId";
        case ErrorCode::not_a_permutation: return "NotAPermutation";
        case ErrorCode::negative_endowment: return "NegativeEndowment";
        case ErrorCode::empty_subset: return "EmptySubset";
        case ErrorCode::unknown_competitor: return "UnknownCompetitor";
        case ErrorCode::key_mismatch: return "KeyMismatch";
        case ErrorCode::invalid_rule_params: return "InvalidRuleParams";
        case ErrorCode::solver_failure: return "SolverFailure";
        case ErrorCode::unknown_counterexample: return "UnknownCounterexample";
        case ErrorCode::precondition_not_checked: return "PreconditionNotChecked";
        case ErrorCode::too_few_positions: return "TooFewPositions";
        case ErrorCode::inconsistent_position_counts: return "InconsistentPositionCounts";
        case ErrorCode::parse_error: return "ParseError";
        case ErrorCode::io_error: return "IoError";
        case ErrorCode::schema_error: return "SchemaError";
        case ErrorCode::non_numeric: return "NonNumeric";
    }
    return "Unknown";
}

CompetitorId::CompetitorId(std::string token) : token_(std::move(token)) {
    if (token_.empty()) {
        throw Error(ErrorCode::schema_error, "competitor id must be non-empty");
    }
}

std::vector<CompetitorId> numbered_ids(std::size_t n, const std::string& prefix) {
    std::vector<CompetitorId> ids;
    ids.reserve(n);
    for (std::size_t k = 1; k <= n; ++k) {
        ids.emplace_back(prefix + std::to_string(k));
    }
    return ids;
}

Ranking::Ranking(std::vector<CompetitorId> order) : order_(std::move(order)) {
    if (order_.empty()) {
        throw Error(ErrorCode::not_a_permutation, "ranking needs at least one competitor");
    }
    std::set<CompetitorId> seen;
    for (const auto& id : order_) {
        if (!seen.insert(id).second) {
            throw Error(ErrorCode::duplicate_id, "duplicate competitor id '" + id.str() + "'");
        }
    }
}

Ranking Ranking::from_positions(const std::vector<CompetitorId>& ids,
                                const std::vector<int>& positions) {
    if (ids.size() != positions.size()) {
        throw Error(ErrorCode::not_a_permutation, "ids and positions differ in length");
    }
    std::set<CompetitorId> seen;
    for (const auto& id : ids) {
        if (!seen.insert(id).second) {
            throw Error(ErrorCode::duplicate_id, "duplicate competitor id '" + id.str() + "'");
        }
    }
    const auto n = static_cast<int>(ids.size());
    std::vector<const CompetitorId*> slots(ids.size(), nullptr);
    for (std::size_t k = 0; k < ids.size(); ++k) {
        const int p = positions[k];
        if (p < 1 || p > n || slots[p - 1] != nullptr) {
            throw Error(ErrorCode::not_a_permutation,
                        "positions are not a permutation of 1.." + std::to_string(n));
        }
        slots[p - 1] = &ids[k];
    }
    std::vector<CompetitorId> order;
    order.reserve(ids.size());
    for (const auto* id : slots) order.push_back(*id);
    return Ranking(std::move(order));
}

const CompetitorId& Ranking::at_position(std::size_t position) const {
    if (position < 1 || position > order_.size()) {
        throw Error(ErrorCode::not_a_permutation, "position out of range");
    }
    return order_[position - 1];
}

std::size_t Ranking::position_of(const CompetitorId& id) const {
    const auto it = std::find(order_.begin(), order_.end(), id);
    if (it == order_.end()) {
        throw Error(ErrorCode::unknown_competitor, "unknown competitor '" + id.str() + "'");
    }
    return static_cast<std::size_t>(it - order_.begin()) + 1;
}

bool Ranking::contains(const CompetitorId& id) const {
    return std::find(order_.begin(), order_.end(), id) != order_.end();
}

Ranking subranking(const Ranking& ranking, const std::vector<CompetitorId>& subset) {
    if (subset.empty()) {
        throw Error(ErrorCode::empty_subset, "subranking of an empty subset");
    }
    std::vector<std::size_t> positions;
    positions.reserve(subset.size());
    for (const auto& id : subset) {
        positions.push_back(ranking.position_of(id));
    }
    std::sort(positions.begin(), positions.end());
    std::vector<CompetitorId> order;
    order.reserve(positions.size());
    for (const auto p : positions) order.push_back(ranking.at_position(p));
    return Ranking(std::move(order));
}

Competition::Competition(Ranking ranking, double endowment)
    : ranking_(std::move(ranking)), endowment_(endowment) {
    if (!(endowment_ >= 0.0) || !std::isfinite(endowment_)) {
        throw Error(ErrorCode::negative_endowment, "endowment must be finite and non-negative");
    }
}

Competition make_competition(const std::vector<CompetitorId>& ids,
                             const std::vector<int>& positions, double endowment) {
    return {Ranking::from_positions(ids, positions), endowment};
}

Competition make_competition(std::size_t n, double endowment) {
    return {Ranking(numbered_ids(n)), endowment};
}

Allocation::Allocation(std::vector<CompetitorId> ids, std::vector<double> prizes)
    : ids_(std::move(ids)), prizes_(std::move(prizes)) {
    if (ids_.size() != prizes_.size()) {
        throw Error(ErrorCode::key_mismatch, "allocation ids and prizes differ in length");
    }
}

Allocation Allocation::by_position(const Competition& competition, std::vector<double> prizes) {
    return {competition.ranking().in_order(), std::move(prizes)};
}

double Allocation::prize(const CompetitorId& id) const {
    const auto it = std::find(ids_.begin(), ids_.end(), id);
    if (it == ids_.end()) {
        throw Error(ErrorCode::key_mismatch, "no prize for competitor '" + id.str() + "'");
    }
    return prizes_[static_cast<std::size_t>(it - ids_.begin())];
}

double Allocation::total() const {
    double sum = 0.0;
    for (const double p : prizes_) sum += p;
    return sum;
}

bool validate_allocation(const Competition& competition, const Allocation& allocation,
                         double sum_tol) {
    const auto& order = competition.ranking().in_order();
    if (allocation.size() != order.size() ||
        std::set<CompetitorId>(allocation.ids().begin(), allocation.ids().end()) !=
            std::set<CompetitorId>(order.begin(), order.end())) {
        throw Error(ErrorCode::key_mismatch, "allocation is not keyed by the competitors");
    }
    for (const double p : allocation.prizes()) {
        if (!(p >= 0.0)) return false;
    }
    return std::abs(allocation.total() - competition.endowment()) <= sum_tol;
}

void validate(const PrizeTable& table) {
    if (!(table.endowment > 0.0) || !std::isfinite(table.endowment)) {
        throw Error(ErrorCode::schema_error,
                    "prize table '" + table.name + "': endowment must be positive");
    }
    double sum = 0.0;
    for (const double p : table.prizes) {
        if (!(p >= 0.0) || !std::isfinite(p)) {
            throw Error(ErrorCode::schema_error,
                        "prize table '" + table.name + "': prizes must be non-negative");
        }
        sum += p;
    }
    if (sum > table.endowment * (1.0 + 1e-12)) {
        throw Error(ErrorCode::schema_error,
                    "prize table '" + table.name + "': prizes exceed the endowment");
    }
}

void validate(const EventSet& events) {
    if (events.events.empty()) {
        throw Error(ErrorCode::schema_error, "event set is empty");
    }
    for (const auto& table : events.events) {
        validate(table);
        if (table.prizes.size() != events.positions()) {
            throw Error(ErrorCode::inconsistent_position_counts,
                        "events list different numbers of positions");
        }
    }
}

}  // namespace prizes
