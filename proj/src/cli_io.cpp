#include "prizes/cli_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "prizes/format.hpp"
#include "prizes/path.hpp"

namespace prizes {

namespace {

using nlohmann::json;

std::string join_expected(const std::vector<std::string>& expected) {
    std::string out;
    for (std::size_t k = 0; k < expected.size(); ++k) {
        if (k > 0) out += k + 1 == expected.size() ? " or " : ", ";
        out += expected[k];
    }
    return out;
}

bool is_token_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '-' || c == '_' || c == '.';
}

class RuleParser {
public:
    RuleParser(std::string_view text, const ParseOptions& options)
        : text_(text), options_(options) {}

    RuleSpec parse() {
        RuleSpec rule = rule_spec();
        skip_ws();
        if (pos_ != text_.size()) fail({"end of input"});
        return rule;
    }

private:
    [[noreturn]] void fail(std::vector<std::string> expected) const {
        throw ParseError(pos_, std::move(expected), std::string(text_));
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])) != 0) {
            ++pos_;
        }
    }

    bool accept(std::string_view token) {
        skip_ws();
        if (text_.substr(pos_).starts_with(token)) {
            pos_ += token.size();
            return true;
        }
        return false;
    }

    void expect(std::string_view token) {
        if (!accept(token)) fail({"'" + std::string(token) + "'"});
    }

    double number(bool allow_inf = false) {
        const std::vector<std::string> expected =
            allow_inf ? std::vector<std::string>{"number", "'inf'"}
                      : std::vector<std::string>{"number"};
        if (allow_inf && accept("inf")) return infinity;
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == '+') ++pos_;
        if (pos_ >= text_.size()) fail(expected);
        const char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) == 0 && c != '.' && c != '-') fail(expected);
        double value = 0.0;
        const char* begin = text_.data() + pos_;
        const auto [end, ec] = std::from_chars(begin, text_.data() + text_.size(), value);
        if (ec != std::errc{} || !std::isfinite(value)) fail(expected);
        pos_ += static_cast<std::size_t>(end - begin);
        return value;
    }

    std::string token() {
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < text_.size() && is_token_char(text_[pos_])) ++pos_;
        if (pos_ == start) fail({"name"});
        return std::string(text_.substr(start, pos_ - start));
    }

    RuleSpec rule_spec() {
        if (accept("wta")) return RuleSpec::wta();
        if (accept("wts:")) {
            expect("a=");
            return RuleSpec::wts(number(true));
        }
        if (accept("ed")) return RuleSpec::ed();
        if (accept("interval:")) return interval();
        if (accept("geometric:")) {
            expect("lambda=");
            const double lambda = number();
            return RuleSpec::geometric(lambda, options_.allow_increasing_geometric && lambda > 1.0);
        }
        if (accept("proportional:")) {
            std::vector<double> weights{number()};
            while (accept(",")) weights.push_back(number());
            return RuleSpec::proportional(std::move(weights));
        }
        if (accept("sp:")) return RuleSpec::single_parametric(function());
        if (accept("param:")) {
            if (accept("hyperarithmetic")) {
                return RuleSpec::parametric(FunctionSequence::hyperarithmetic());
            }
            if (accept("iterated=")) return RuleSpec::parametric(FunctionSequence::iterated(function()));
            if (accept("listed=")) {
                std::vector<MonotoneFn> fs{function()};
                while (accept(";")) fs.push_back(function());
                return RuleSpec::parametric(FunctionSequence::listed(std::move(fs)));
            }
            fail({"'hyperarithmetic'", "'iterated='", "'listed='"});
        }
        if (accept("cx:")) return counterexample();
        fail({"'ed'", "'wta'", "'wts:'", "'interval:'", "'geometric:'", "'proportional:'", "'sp:'",
              "'param:'", "'cx:'"});
    }

    RuleSpec interval() {
        std::vector<Interval> list;
        skip_ws();
        if (pos_ == text_.size()) return RuleSpec::interval(IntervalList{});
        do {
            expect("[");
            const double lower = number();
            expect(",");
            const double upper = number(true);
            expect("]");
            list.push_back({lower, upper});
        } while (accept(";"));
        return RuleSpec::interval(IntervalList(std::move(list)));
    }

    MonotoneFn function() {
        if (accept("arithmetic")) return MonotoneFn::shift(1.0);
        if (accept("identity")) return MonotoneFn::identity();
        if (accept("zero")) return MonotoneFn::zero();
        if (accept("linear=")) return MonotoneFn::linear(number());
        if (accept("shift=")) return MonotoneFn::shift(number());
        if (accept("cap=")) return MonotoneFn::cap(number());
        if (accept("pwl=")) {
            std::vector<Breakpoint> points;
            do {
                const double x = number();
                expect(":");
                points.push_back({x, number()});
            } while (accept(","));
            return MonotoneFn::piecewise(std::move(points));
        }
        fail({"'arithmetic'", "'identity'", "'zero'", "'linear='", "'shift='", "'cap='", "'pwl='"});
    }

    RuleSpec counterexample() {
        const std::size_t start = pos_;
        const std::string name = token();
        for (const auto kind : {CounterexampleKind::lowest_takes_all, CounterexampleKind::threshold_switch,
                                CounterexampleKind::pair_favoritism, CounterexampleKind::late_dollar,
                                CounterexampleKind::ed2_wta3}) {
            if (name != to_string(kind)) continue;
            CounterexampleRule rule{kind};
            if (kind == CounterexampleKind::pair_favoritism && accept("=")) {
                rule.first = CompetitorId(token());
                expect(",");
                rule.second = CompetitorId(token());
            }
            return RuleSpec::Variant{rule};
        }
        throw Error(ErrorCode::unknown_counterexample,
                    "unknown counterexample '" + name + "' at position " + std::to_string(start));
    }

    std::string_view text_;
    ParseOptions options_;
    std::size_t pos_ = 0;
};

double parse_double(std::string_view text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())) != 0) {
        text.remove_prefix(1);
    }
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())) != 0) {
        text.remove_suffix(1);
    }
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double value = 0.0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc{} || end != text.data() + text.size() ||
        !std::isfinite(value)) {
        throw Error(ErrorCode::non_numeric, "not a number: '" + std::string(text) + "'");
    }
    return value;
}

std::string trim(std::string_view text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = text.find_last_not_of(" \t\r\n");
    return std::string(text.substr(first, last - first + 1));
}

// ---- JSON encoding ---------------------------------------------------------

json num_to_json(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

double num_from_json(const json& j) {
    if (j.is_number()) return j.get<double>();
    const auto s = j.get<std::string>();
    if (s == "inf") return infinity;
    if (s == "-inf") return -infinity;
    if (s == "nan") return std::nan("");
    throw Error(ErrorCode::schema_error, "expected a number, got '" + s + "'");
}

json to_json(const Competition& c) {
    json ids = json::array();
    for (const auto& id : c.ranking().in_order()) ids.push_back(id.str());
    return {{"ranking", ids}, {"endowment", num_to_json(c.endowment())}};
}

Competition competition_from_json(const json& j) {
    std::vector<CompetitorId> ids;
    for (const auto& id : j.at("ranking")) ids.emplace_back(id.get<std::string>());
    return {Ranking(std::move(ids)), num_from_json(j.at("endowment"))};
}

const char* clause_name(ScaleClause clause) {
    switch (clause) {
        case ScaleClause::none: return "none";
        case ScaleClause::homogeneity: return "homogeneity";
        case ScaleClause::additivity: return "additivity";
    }
    return "none";
}

ScaleClause clause_from(const std::string& s) {
    if (s == "homogeneity") return ScaleClause::homogeneity;
    if (s == "additivity") return ScaleClause::additivity;
    if (s == "none") return ScaleClause::none;
    throw Error(ErrorCode::schema_error, "unknown scale clause '" + s + "'");
}

AxiomCheck check_from(const std::string& s) {
    const auto check = parse_axiom_check(s, "");
    if (!check || to_string(*check) != s) {
        throw Error(ErrorCode::schema_error, "unknown check '" + s + "'");
    }
    return *check;
}

json to_json(const Witness& w) {
    json subset = json::array();
    for (const auto& id : w.scenario.subset) subset.push_back(id.str());
    json focus = json::array();
    for (const auto& id : w.focus) focus.push_back(id.str());
    return {
        {"check", to_string(w.check)},
        {"scenario",
         {{"primary", to_json(w.scenario.primary)},
          {"secondary", w.scenario.secondary ? to_json(*w.scenario.secondary) : json(nullptr)},
          {"subset", subset},
          {"clause", clause_name(w.scenario.clause)}}},
        {"focus", focus},
        {"lhs", num_to_json(w.lhs)},
        {"rhs", num_to_json(w.rhs)},
        {"relation", w.relation},
        {"margin", num_to_json(w.margin)},
        {"strict_relation", w.strict_relation},
    };
}

Witness witness_from_json(const json& j) {
    const auto& s = j.at("scenario");
    Scenario scenario{competition_from_json(s.at("primary")), std::nullopt, {},
                      clause_from(s.at("clause").get<std::string>())};
    if (!s.at("secondary").is_null()) scenario.secondary = competition_from_json(s.at("secondary"));
    for (const auto& id : s.at("subset")) scenario.subset.emplace_back(id.get<std::string>());
    std::vector<CompetitorId> focus;
    for (const auto& id : j.at("focus")) focus.emplace_back(id.get<std::string>());
    return {check_from(j.at("check").get<std::string>()),
            std::move(scenario),
            std::move(focus),
            num_from_json(j.at("lhs")),
            num_from_json(j.at("rhs")),
            j.at("relation").get<std::string>(),
            num_from_json(j.at("margin")),
            j.at("strict_relation").get<bool>()};
}

json to_json(const Verdict& v) {
    return {
        {"check", to_string(v.check)},
        {"outcome", to_string(v.outcome)},
        {"samples_checked", v.samples_checked},
        {"witness", v.witness ? to_json(*v.witness) : json(nullptr)},
        {"tolerance", num_to_json(v.tolerance)},
        {"budget", v.budget},
        {"note", v.note},
    };
}

Verdict verdict_from_json(const json& j) {
    Verdict v;
    v.check = check_from(j.at("check").get<std::string>());
    const auto outcome = j.at("outcome").get<std::string>();
    if (outcome == "pass") {
        v.outcome = Outcome::pass;
    } else if (outcome == "fail") {
        v.outcome = Outcome::fail;
    } else if (outcome == "skipped") {
        v.outcome = Outcome::skipped;
    } else {
        throw Error(ErrorCode::schema_error, "unknown outcome '" + outcome + "'");
    }
    v.samples_checked = j.at("samples_checked").get<std::size_t>();
    if (!j.at("witness").is_null()) v.witness = witness_from_json(j.at("witness"));
    v.tolerance = num_from_json(j.at("tolerance"));
    v.budget = j.at("budget").get<std::string>();
    v.note = j.at("note").get<std::string>();
    return v;
}

json to_json(const FitReport& f) {
    json params = json::array();
    for (const auto& [name, value] : f.parameters) {
        params.push_back({{"name", name}, {"value", num_to_json(value)}});
    }
    json shares = json::array();
    for (const double s : f.shares) shares.push_back(num_to_json(s));
    json recon = json::array();
    for (const auto& row : f.reconstructed) {
        json r = json::array();
        for (const double v : row) r.push_back(num_to_json(v));
        recon.push_back(r);
    }
    return {
        {"family", f.family},      {"parameters", params},
        {"shares", shares},        {"reconstructed", recon},
        {"max_rel_dev", num_to_json(f.max_rel_dev)},
        {"tolerance", num_to_json(f.tolerance)},
        {"verdict", f.verdict},    {"warnings", f.warnings},
    };
}

FitReport fit_from_json(const json& j) {
    FitReport f;
    f.family = j.at("family").get<std::string>();
    for (const auto& p : j.at("parameters")) {
        f.parameters.emplace_back(p.at("name").get<std::string>(), num_from_json(p.at("value")));
    }
    for (const auto& s : j.at("shares")) f.shares.push_back(num_from_json(s));
    for (const auto& row : j.at("reconstructed")) {
        std::vector<double> r;
        for (const auto& v : row) r.push_back(num_from_json(v));
        f.reconstructed.push_back(std::move(r));
    }
    f.max_rel_dev = num_from_json(j.at("max_rel_dev"));
    f.tolerance = num_from_json(j.at("tolerance"));
    f.verdict = j.at("verdict").get<bool>();
    f.warnings = j.at("warnings").get<std::vector<std::string>>();
    return f;
}

// ---- command line ----------------------------------------------------------

std::string resolve_data_path(const std::string& path) {
    namespace fs = std::filesystem;
    if (fs::exists(path)) return path;
#ifdef PRIZES_DATA_DIR
    const fs::path bundled = fs::path(PRIZES_DATA_DIR) / path;
    if (fs::exists(bundled)) return bundled.string();
#endif
    return path;
}

AllocationRecord record_of(double endowment, const Allocation& a) {
    AllocationRecord r{endowment, {}, {a.prizes().begin(), a.prizes().end()}};
    for (const auto& id : a.ids()) r.ids.push_back(id.str());
    return r;
}

std::string join_money(std::span<const double> values, char sep) {
    std::string out;
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (k > 0) out += sep;
        out += format_money(values[k]);
    }
    return out;
}

struct Options {
    std::string rule;
    std::vector<std::string> extra_rules;
    std::size_t n = 0;
    double endowment = 0.0;
    std::string endowments;
    std::string axiom;
    std::string mode;
    std::size_t samples = 50;
    std::uint64_t seed = 2021;
    std::size_t max_n = 5;
    bool pair_only = false;
    std::string data;
    std::string format;
    std::string family = "geometric";
    double tol = 0.0;
    double slack = 0.0;
    double step = 0.0;
    bool json = false;
    bool allow_increasing = false;
};

SampleBudget budget_from(const Options& o, bool tol_given) {
    auto budget = SampleBudget::with_seed(o.seed, o.samples);
    budget.max_n = o.max_n;
    budget.pair_only = o.pair_only;
    if (tol_given) budget.tol.eq = o.tol;
    return budget;
}

EventSet events_from(const Options& o, bool endowment_given) {
    const auto path = resolve_data_path(o.data);
    std::optional<DataFormat> format;
    if (o.format == "csv") {
        format = DataFormat::csv;
    } else if (o.format == "json") {
        format = DataFormat::json;
    } else if (o.format.empty()) {
        format = format_from_path(path);
    }
    if (!format) {
        throw Error(ErrorCode::schema_error, "cannot tell the data format of '" + o.data +
                                                 "'; pass --format csv or --format json");
    }
    return load_prize_data(path, *format,
                           endowment_given ? std::optional<double>(o.endowment) : std::nullopt);
}

void print_fit(std::ostream& out, const std::string& label, const FitReport& f) {
    out << label << ": " << f.family << (f.verdict ? " match" : " no match")
        << " (max_rel_dev " << format_money(f.max_rel_dev) << ", tolerance "
        << format_shortest(f.tolerance) << ")\n";
    for (const auto& [name, value] : f.parameters) {
        out << "  " << name << " = " << format_money(value) << '\n';
    }
    if (!f.shares.empty()) out << "  shares % = " << join_money(f.shares, ' ') << '\n';
    for (const auto& row : f.reconstructed) out << "  fitted = " << join_money(row, ' ') << '\n';
    for (const auto& w : f.warnings) out << "  warning: " << w << '\n';
}

void print_verdict(std::ostream& out, const std::string& rule, const Verdict& v) {
    out << "rule: " << rule << '\n'
        << "check: " << to_string(v.check) << '\n'
        << "verdict: " << to_string(v.outcome) << '\n'
        << "samples: " << v.samples_checked << '\n'
        << "budget: " << v.budget << '\n'
        << "note: " << v.note << '\n';
    if (v.witness) out << "witness:\n" << render_witness(*v.witness);
}

}  // namespace

ParseError::ParseError(std::size_t position, std::vector<std::string> expected,
                       const std::string& text)
    : Error(ErrorCode::parse_error, "rule spec '" + text + "': expected " +
                                        join_expected(expected) + " at position " +
                                        std::to_string(position)),
      position_(position),
      expected_(std::move(expected)) {}

RuleSpec parse_rule_spec(std::string_view text, const ParseOptions& options) {
    return RuleParser(text, options).parse();
}

std::optional<DataFormat> format_from_path(const std::string& path) {
    auto ext = std::filesystem::path(path).extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (ext == ".csv") return DataFormat::csv;
    if (ext == ".json") return DataFormat::json;
    return std::nullopt;
}

EventSet parse_prize_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::schema_error, std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("events") || !doc["events"].is_array()) {
        throw Error(ErrorCode::schema_error, "JSON data needs an \"events\" array");
    }
    EventSet set;
    std::size_t index = 0;
    for (const auto& e : doc["events"]) {
        ++index;
        const std::string where = "event " + std::to_string(index);
        if (!e.is_object()) throw Error(ErrorCode::schema_error, where + " is not an object");
        PrizeTable table;
        table.name = e.contains("name") && e["name"].is_string() ? e["name"].get<std::string>()
                                                                 : "event" + std::to_string(index);
        if (!e.contains("endowment")) {
            throw Error(ErrorCode::schema_error, where + " has no \"endowment\"");
        }
        if (!e["endowment"].is_number()) {
            throw Error(ErrorCode::non_numeric, where + ": endowment is not a number");
        }
        table.endowment = e["endowment"].get<double>();
        if (!e.contains("prizes") || !e["prizes"].is_array()) {
            throw Error(ErrorCode::schema_error, where + " has no \"prizes\" array");
        }
        for (const auto& p : e["prizes"]) {
            if (!p.is_number()) {
                throw Error(ErrorCode::non_numeric, where + ": prize " + p.dump() + " is not a number");
            }
            table.prizes.push_back(p.get<double>());
        }
        set.events.push_back(std::move(table));
    }
    validate(set);
    return set;
}

EventSet parse_prize_csv(std::string_view text, std::optional<double> endowment,
                         const std::string& name) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    std::map<long, double> rows;
    while (std::getline(in, line)) {
        ++line_no;
        const auto row = trim(line);
        if (row.empty()) continue;
        if (!header_seen) {
            std::string lowered = row;
            lowered.erase(std::remove_if(lowered.begin(), lowered.end(),
                                         [](unsigned char c) { return std::isspace(c) != 0; }),
                          lowered.end());
            std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                           [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
            if (lowered != "position,prize") {
                throw Error(ErrorCode::schema_error,
                            "line " + std::to_string(line_no) + ": expected header 'position,prize'");
            }
            header_seen = true;
            continue;
        }
        const auto comma = row.find(',');
        if (comma == std::string::npos || row.find(',', comma + 1) != std::string::npos) {
            throw Error(ErrorCode::schema_error,
                        "line " + std::to_string(line_no) + ": expected two fields");
        }
        double position = 0.0;
        double prize = 0.0;
        try {
            position = parse_double(std::string_view(row).substr(0, comma));
            prize = parse_double(std::string_view(row).substr(comma + 1));
        } catch (const Error& e) {
            throw Error(ErrorCode::non_numeric, "line " + std::to_string(line_no) + ": " + e.what());
        }
        if (position != std::floor(position) || position < 1) {
            throw Error(ErrorCode::schema_error,
                        "line " + std::to_string(line_no) + ": position must be a positive integer");
        }
        if (!rows.emplace(static_cast<long>(position), prize).second) {
            throw Error(ErrorCode::schema_error,
                        "line " + std::to_string(line_no) + ": duplicate position");
        }
    }
    if (!header_seen) throw Error(ErrorCode::schema_error, "line 1: missing header 'position,prize'");
    if (!endowment) throw Error(ErrorCode::schema_error, "CSV data needs an endowment (--endowment)");
    PrizeTable table{name, *endowment, {}};
    long expected = 1;
    for (const auto& [position, prize] : rows) {
        if (position != expected++) {
            throw Error(ErrorCode::schema_error, "positions must run 1..n without gaps");
        }
        table.prizes.push_back(prize);
    }
    EventSet set{{std::move(table)}};
    validate(set);
    return set;
}

EventSet load_prize_data(const std::string& path, DataFormat format,
                         std::optional<double> csv_endowment) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::io_error, "cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (format == DataFormat::json) return parse_prize_json(buffer.str());
    return parse_prize_csv(buffer.str(), csv_endowment,
                           std::filesystem::path(path).stem().string());
}

std::vector<double> parse_endowments(std::string_view text) {
    const std::string s = trim(text);
    std::vector<std::string> parts;
    auto split = [&](char sep) {
        parts.clear();
        std::size_t start = 0;
        for (;;) {
            const auto at = s.find(sep, start);
            parts.push_back(s.substr(start, at == std::string::npos ? std::string::npos : at - start));
            if (at == std::string::npos) break;
            start = at + 1;
        }
    };
    std::vector<double> out;
    if (s.find(':') != std::string::npos) {
        split(':');
        if (parts.size() != 3) {
            throw Error(ErrorCode::parse_error, "endowment range must be start:stop:step");
        }
        const double start = parse_double(parts[0]);
        const double stop = parse_double(parts[1]);
        const double step = parse_double(parts[2]);
        if (!(step > 0.0) || stop < start) {
            throw Error(ErrorCode::parse_error, "endowment range needs step > 0 and start <= stop");
        }
        // Multiplying instead of accumulating keeps 0:6:0.1 free of drift.
        const double slop = 1e-9 * step;
        for (std::size_t k = 0;; ++k) {
            const double e = start + static_cast<double>(k) * step;
            if (e > stop + slop) break;
            out.push_back(std::abs(e - stop) <= slop ? stop : e);
        }
    } else {
        split(',');
        for (const auto& p : parts) out.push_back(parse_double(p));
    }
    for (const double e : out) {
        if (e < 0.0) throw Error(ErrorCode::negative_endowment, "endowments must be >= 0");
    }
    return out;
}

std::string report_to_json(const Report& report, int indent) {
    json allocations = json::array();
    for (const auto& a : report.allocations) {
        json prizes = json::array();
        for (const double p : a.prizes) prizes.push_back(num_to_json(p));
        allocations.push_back({{"endowment", num_to_json(a.endowment)}, {"ids", a.ids}, {"prizes", prizes}});
    }
    json verdicts = json::array();
    for (const auto& v : report.verdicts) verdicts.push_back({{"rule", v.rule}, {"verdict", to_json(v.verdict)}});
    json fits = json::array();
    for (const auto& f : report.fits) fits.push_back(to_json(f));
    const json doc{
        {"command", report.command},
        {"rule", report.rule},
        {"n", report.n},
        {"seed", report.seed ? json(*report.seed) : json(nullptr)},
        {"budget", report.budget},
        {"tolerances", {{"eq", num_to_json(report.tol.eq)}, {"sum_rel", num_to_json(report.tol.sum_rel)}}},
        {"allocations", allocations},
        {"verdicts", verdicts},
        {"fits", fits},
        {"tier", report.tier ? json(*report.tier) : json(nullptr)},
    };
    return doc.dump(indent);
}

Report report_from_json(std::string_view text) {
    try {
        const json doc = json::parse(text);
        Report r;
        r.command = doc.at("command").get<std::string>();
        r.rule = doc.at("rule").get<std::string>();
        r.n = doc.at("n").get<std::size_t>();
        if (!doc.at("seed").is_null()) r.seed = doc.at("seed").get<std::uint64_t>();
        r.budget = doc.at("budget").get<std::string>();
        r.tol.eq = num_from_json(doc.at("tolerances").at("eq"));
        r.tol.sum_rel = num_from_json(doc.at("tolerances").at("sum_rel"));
        for (const auto& a : doc.at("allocations")) {
            AllocationRecord rec;
            rec.endowment = num_from_json(a.at("endowment"));
            rec.ids = a.at("ids").get<std::vector<std::string>>();
            for (const auto& p : a.at("prizes")) rec.prizes.push_back(num_from_json(p));
            r.allocations.push_back(std::move(rec));
        }
        for (const auto& v : doc.at("verdicts")) {
            r.verdicts.push_back({v.at("rule").get<std::string>(), verdict_from_json(v.at("verdict"))});
        }
        for (const auto& f : doc.at("fits")) r.fits.push_back(fit_from_json(f));
        if (!doc.at("tier").is_null()) r.tier = doc.at("tier").get<std::string>();
        return r;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::schema_error, std::string("malformed report: ") + e.what());
    }
}

std::string render_witness(const Witness& w) {
    std::ostringstream out;
    auto ranking = [](const Competition& c) {
        std::string s;
        for (const auto& id : c.ranking().in_order()) s += (s.empty() ? "" : " > ") + id.str();
        return s;
    };
    const auto& p = w.scenario.primary;
    out << "  competition: n=" << p.size() << " E=" << format_shortest(p.endowment())
        << " ranking " << ranking(p) << '\n';
    if (w.scenario.secondary) {
        const auto& s = *w.scenario.secondary;
        out << "  compared with: E=" << format_shortest(s.endowment()) << " ranking " << ranking(s)
            << '\n';
    }
    if (!w.scenario.subset.empty()) {
        out << "  subset: {";
        for (std::size_t k = 0; k < w.scenario.subset.size(); ++k) {
            out << (k > 0 ? "," : "") << w.scenario.subset[k].str();
        }
        out << "}\n";
    }
    if (w.scenario.clause != ScaleClause::none) out << "  clause: " << clause_name(w.scenario.clause) << '\n';
    out << "  relation: " << w.relation << '\n'
        << "  " << (w.strict_relation ? "gap" : "margin") << ": " << format_shortest(w.margin)
        << '\n';
    return out.str();
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv{"prizes"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Rank-order prize allocation rules: allocate, tabulate, check axioms, fit data",
                 "prizes"};
    app.require_subcommand(1);
    Options o;

    auto add_rule = [&](CLI::App* sub, bool required) {
        auto* opt = sub->add_option("--rule", o.rule, "Rule spec, e.g. geometric:lambda=0.5");
        if (required) opt->required();
        sub->add_flag("--allow-increasing", o.allow_increasing, "Admit geometric lambda > 1");
    };
    auto add_budget = [&](CLI::App* sub) {
        sub->add_option("--samples", o.samples, "Random endowment draws added to the grid")
            ->capture_default_str();
        sub->add_option("--seed", o.seed, "Seed for random draws")->capture_default_str();
        sub->add_option("--max-n", o.max_n, "Largest competition size")->capture_default_str()
            ->check(CLI::Range(2, 12));
        sub->add_flag("--pair-only", o.pair_only, "Consistency on two-competitor subsets only");
    };

    auto* allocate_cmd = app.add_subcommand("allocate", "Allocate one endowment");
    add_rule(allocate_cmd, true);
    allocate_cmd->add_option("--n", o.n, "Number of competitors")->required()->check(CLI::PositiveNumber);
    allocate_cmd->add_option("--endowment", o.endowment, "Prize endowment")->required();

    auto* table_cmd = app.add_subcommand("table", "Allocate a range of endowments");
    add_rule(table_cmd, true);
    table_cmd->add_option("--n", o.n, "Number of competitors")->required()->check(CLI::PositiveNumber);
    table_cmd->add_option("--endowments", o.endowments, "start:stop:step or a comma list")->required();

    auto* path_cmd = app.add_subcommand("path", "Allocation path as CSV");
    add_rule(path_cmd, true);
    path_cmd->add_option("--n", o.n, "Number of competitors")->required()->check(CLI::PositiveNumber);
    path_cmd->add_option("--endowment", o.endowment, "Largest endowment")->required();
    auto* step_opt = path_cmd->add_option("--step", o.step, "Grid step (default 1% of the endowment)");

    auto* check_cmd = app.add_subcommand("check", "Falsify one axiom");
    add_rule(check_cmd, true);
    check_cmd->add_option("--axiom", o.axiom, "Axiom name")->required();
    check_cmd->add_option("--mode", o.mode, "Axiom variant (weak, strict, full, top, ...)");
    add_budget(check_cmd);
    auto* check_tol = check_cmd->add_option("--tol", o.tol, "Equality tolerance");

    auto* matrix_cmd = app.add_subcommand("matrix", "Axiom matrix of the bundled rules");
    matrix_cmd->add_option("--rule", o.extra_rules, "Extra rule rows");
    matrix_cmd->add_flag("--allow-increasing", o.allow_increasing, "Admit geometric lambda > 1");
    add_budget(matrix_cmd);
    auto* matrix_tol = matrix_cmd->add_option("--tol", o.tol, "Equality tolerance");

    auto* fit_cmd = app.add_subcommand("fit", "Fit a family to prize data");
    fit_cmd->add_option("--family", o.family, "geometric, proportional, interval or scale")
        ->check(CLI::IsMember({"geometric", "proportional", "interval", "scale"}))
        ->capture_default_str();
    fit_cmd->add_option("--data", o.data, "JSON or CSV prize data")->required();
    fit_cmd->add_option("--format", o.format, "Data format")->check(CLI::IsMember({"csv", "json"}));
    auto* fit_endowment = fit_cmd->add_option("--endowment", o.endowment, "Endowment for CSV data");
    auto* fit_tol = fit_cmd->add_option("--tol", o.tol, "Relative fit tolerance (default 0.01)");
    fit_cmd->add_option("--slack", o.slack, "Absolute rounding slack")->capture_default_str();

    auto* classify_cmd = app.add_subcommand("classify", "Classify prize data");
    classify_cmd->add_option("--data", o.data, "JSON or CSV prize data")->required();
    classify_cmd->add_option("--format", o.format, "Data format")->check(CLI::IsMember({"csv", "json"}));
    auto* classify_endowment = classify_cmd->add_option("--endowment", o.endowment, "Endowment for CSV data");
    auto* classify_tol = classify_cmd->add_option("--tol", o.tol, "Relative fit tolerance (default 0.01)");
    classify_cmd->add_option("--slack", o.slack, "Absolute rounding slack")->capture_default_str();

    for (auto* sub : {allocate_cmd, table_cmd, path_cmd, check_cmd, matrix_cmd, fit_cmd, classify_cmd}) {
        sub->add_flag("--json", o.json, "Machine-readable report");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? 0 : 2;
    }

    try {
        const ParseOptions parse_options{o.allow_increasing};
        Report report;
        report.tol = Tolerances{};

        if (allocate_cmd->parsed()) {
            const auto rule = parse_rule_spec(o.rule, parse_options);
            const auto alloc = allocate(rule, make_competition(o.n, o.endowment));
            report.command = "allocate";
            report.rule = describe(rule);
            report.n = o.n;
            report.allocations.push_back(record_of(o.endowment, alloc));
            if (o.json) {
                out << report_to_json(report) << '\n';
            } else {
                out << join_money(alloc.prizes(), ' ') << '\n';
            }
            return 0;
        }

        if (table_cmd->parsed()) {
            const auto rule = parse_rule_spec(o.rule, parse_options);
            report.command = "table";
            report.rule = describe(rule);
            report.n = o.n;
            const auto base = make_competition(o.n, 0.0);
            for (const double e : parse_endowments(o.endowments)) {
                report.allocations.push_back(record_of(e, allocate(rule, base.with_endowment(e))));
            }
            if (o.json) {
                out << report_to_json(report) << '\n';
                return 0;
            }
            for (std::size_t k = 1; k <= o.n; ++k) out << "phi_" << k << ' ';
            out << "E\n";
            for (const auto& row : report.allocations) {
                out << join_money(row.prizes, ' ') << ' ' << format_money(row.endowment) << '\n';
            }
            return 0;
        }

        if (path_cmd->parsed()) {
            const auto rule = parse_rule_spec(o.rule, parse_options);
            const auto trace = trace_path(rule, o.n, o.endowment,
                                          step_opt->count() > 0 ? std::optional<double>(o.step)
                                                                : std::nullopt);
            report.command = "path";
            report.rule = describe(rule);
            report.n = o.n;
            for (const auto& s : trace.samples) report.allocations.push_back(record_of(s.endowment, s.allocation));
            if (o.json) {
                out << report_to_json(report) << '\n';
                return 0;
            }
            out << "endowment";
            for (std::size_t k = 1; k <= o.n; ++k) out << ",prize_" << k;
            out << '\n';
            for (const auto& row : report.allocations) {
                out << format_money(row.endowment) << ',' << join_money(row.prizes, ',') << '\n';
            }
            return 0;
        }

        if (check_cmd->parsed()) {
            const auto rule = parse_rule_spec(o.rule, parse_options);
            const auto check = parse_axiom_check(o.axiom, o.mode);
            if (!check) {
                throw Error(ErrorCode::parse_error,
                            "unknown axiom/mode '" + o.axiom + (o.mode.empty() ? "" : "/" + o.mode) + "'");
            }
            const auto budget = budget_from(o, check_tol->count() > 0);
            const auto verdict = run_check(rule, *check, budget);
            report.command = "check";
            report.rule = describe(rule);
            report.seed = o.seed;
            report.budget = budget.fingerprint();
            report.tol = budget.tol;
            report.verdicts.push_back({report.rule, verdict});
            if (o.json) {
                out << report_to_json(report) << '\n';
            } else {
                print_verdict(out, report.rule, verdict);
            }
            return verdict.failed() ? 1 : 0;
        }

        if (matrix_cmd->parsed()) {
            auto rules = bundled_rules();
            for (const auto& text : o.extra_rules) {
                auto rule = parse_rule_spec(text, parse_options);
                rules.push_back({describe(rule), std::move(rule)});
            }
            const auto budget = budget_from(o, matrix_tol->count() > 0);
            const auto matrix = run_axiom_matrix(rules, budget);
            report.command = "matrix";
            report.seed = o.seed;
            report.budget = budget.fingerprint();
            report.tol = budget.tol;
            for (std::size_t r = 0; r < matrix.rules.size(); ++r) {
                for (const auto& v : matrix.cells[r]) report.verdicts.push_back({matrix.rules[r].name, v});
            }
            if (o.json) {
                out << report_to_json(report) << '\n';
                return 0;
            }
            out << "rule";
            for (const auto& c : matrix.checks) out << '\t' << to_string(c);
            out << '\n';
            for (std::size_t r = 0; r < matrix.rules.size(); ++r) {
                out << matrix.rules[r].name;
                for (const auto& v : matrix.cells[r]) out << '\t' << to_string(v.outcome);
                out << '\n';
            }
            return 0;
        }

        if (fit_cmd->parsed() || classify_cmd->parsed()) {
            const bool is_fit = fit_cmd->parsed();
            const bool tol_given = is_fit ? fit_tol->count() > 0 : classify_tol->count() > 0;
            const bool endowment_given =
                is_fit ? fit_endowment->count() > 0 : classify_endowment->count() > 0;
            const FitTolerances tol{tol_given ? o.tol : FitTolerances{}.rel, o.slack};
            const auto events = events_from(o, endowment_given);
            report.command = is_fit ? "fit" : "classify";

            if (is_fit) {
                if (o.family == "proportional") {
                    report.fits.push_back(fit_proportional(events, tol));
                } else if (o.family == "scale") {
                    report.fits.push_back(fit_scale_invariance(events, tol));
                } else {
                    for (const auto& event : events.events) {
                        report.fits.push_back(o.family == "geometric"
                                                  ? fit_geometric(event, tol)
                                                  : detect_interval_pattern(event, tol));
                    }
                }
                if (o.json) {
                    out << report_to_json(report) << '\n';
                    return 0;
                }
                for (std::size_t k = 0; k < report.fits.size(); ++k) {
                    const bool per_event = report.fits.size() == events.events.size() &&
                                           (o.family == "geometric" || o.family == "interval");
                    print_fit(out, per_event ? events.events[k].name : std::string("events"),
                              report.fits[k]);
                }
                return 0;
            }

            const auto c = classify(events, tol);
            report.fits = {c.geometric, c.proportional, c.interval_pattern};
            if (c.scale_invariant_across_events) report.fits.push_back(*c.scale_invariant_across_events);
            report.tier = to_string(c.tier);
            if (o.json) {
                out << report_to_json(report) << '\n';
                return 0;
            }
            out << "events: " << events.events.size() << '\n'
                << "order preserved: " << (c.order_preserved ? "yes" : "no") << '\n';
            print_fit(out, "geometric", c.geometric);
            print_fit(out, "proportional", c.proportional);
            print_fit(out, "interval pattern", c.interval_pattern);
            if (c.scale_invariant_across_events) {
                print_fit(out, "scale invariance", *c.scale_invariant_across_events);
            }
            out << "tier: " << to_string(c.tier) << " (shape evidence, not a proof)\n";
            return 0;
        }
    } catch (const Error& e) {
        err << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
        return 2;
    }
    return 2;
}

}  // namespace prizes
