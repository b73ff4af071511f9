#ifndef PRIZES_CLI_IO_HPP
#define PRIZES_CLI_IO_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "prizes/analysis.hpp"
#include "prizes/axioms.hpp"
#include "prizes/core.hpp"
#include "prizes/rules.hpp"

namespace prizes {

class ParseError : public Error {
public:
    ParseError(std::size_t position, std::vector<std::string> expected, const std::string& text);

    std::size_t position() const noexcept { return position_; }  // 0-based offset
    const std::vector<std::string>& expected() const noexcept { return expected_; }

private:
    std::size_t position_;
    std::vector<std::string> expected_;
};

struct ParseOptions {
    /// Admit geometric λ > 1 (order-preservation counterexample only).
    bool allow_increasing_geometric = false;
};

/// Grammar:
///   ed | wta | wts:a=<v|inf> | interval:[a,b];[a,b];... | geometric:lambda=<v>
///   proportional:<v>,<v>,... | sp:<fn> | param:hyperarithmetic | param:iterated=<fn>
///   param:listed=<fn>;<fn>;... | cx:<name>[=<id>,<id>]
///   <fn> := arithmetic | identity | zero | linear=<λ> | shift=<c> | cap=<a> | pwl=<x:y,...>
/// describe() output parses back to an equal rule.
RuleSpec parse_rule_spec(std::string_view text, const ParseOptions& options = {});

enum class DataFormat { csv, json };

/// Guesses from the file extension; nullopt when neither .csv nor .json.
std::optional<DataFormat> format_from_path(const std::string& path);

/// JSON: {"events":[{"name":..., "endowment":..., "prizes":[...]}]}; other keys are ignored.
EventSet parse_prize_json(std::string_view text);

/// CSV: header `position,prize`, one row per position; the endowment comes from outside.
EventSet parse_prize_csv(std::string_view text, std::optional<double> endowment,
                         const std::string& name = "event");

EventSet load_prize_data(const std::string& path, DataFormat format,
                         std::optional<double> csv_endowment = std::nullopt);

/// `start:stop:step` (stop included), a comma list, or one value.
std::vector<double> parse_endowments(std::string_view text);

struct AllocationRecord {
    double endowment = 0.0;
    std::vector<std::string> ids;  // position order
    std::vector<double> prizes;

    friend bool operator==(const AllocationRecord&, const AllocationRecord&) = default;
};

struct NamedVerdict {
    std::string rule;
    Verdict verdict;

    friend bool operator==(const NamedVerdict&, const NamedVerdict&) = default;
};

/// Machine-readable result of one command, with the inputs needed to rerun it.
struct Report {
    std::string command;
    std::string rule;  // canonical rule text, empty when not applicable
    std::size_t n = 0;
    std::optional<std::uint64_t> seed;
    std::string budget;
    Tolerances tol;
    std::vector<AllocationRecord> allocations;
    std::vector<NamedVerdict> verdicts;
    std::vector<FitReport> fits;
    std::optional<std::string> tier;

    friend bool operator==(const Report&, const Report&) = default;
};

std::string report_to_json(const Report& report, int indent = 2);
/// Throws SchemaError on malformed input.
Report report_from_json(std::string_view text);

/// Human-readable rendering of a witness, several lines.
std::string render_witness(const Witness& witness);

/// Exit codes: 0 success, 1 an axiom check failed, 2 input error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
/// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace prizes

#endif  // PRIZES_CLI_IO_HPP
