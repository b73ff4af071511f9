#include "prizes/functions.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "prizes/core.hpp"
#include "prizes/format.hpp"

namespace prizes {

namespace {

[[noreturn]] void invalid(const std::string& what) {
    throw Error(ErrorCode::invalid_rule_params, what);
}

bool finite_non_negative(double v) { return std::isfinite(v) && v >= 0.0; }

double curve_value(const std::vector<Breakpoint>& curve, double tail_slope, double x) {
    const auto& last = curve.back();
    if (x >= last.x) return last.y + tail_slope * (x - last.x);
    const auto upper = std::upper_bound(curve.begin(), curve.end(), x,
                                        [](double v, const Breakpoint& b) { return v < b.x; });
    const auto lower = upper - 1;
    const double t = (x - lower->x) / (upper->x - lower->x);
    return lower->y + t * (upper->y - lower->y);
}

}  // namespace

MonotoneFn::MonotoneFn(Kind kind, double parameter, std::vector<Breakpoint> curve)
    : kind_(kind), parameter_(parameter), curve_(std::move(curve)) {
    if (curve_.size() >= 2) {
        const auto& a = curve_[curve_.size() - 2];
        const auto& b = curve_.back();
        tail_slope_ = (b.y - a.y) / (b.x - a.x);
    }
}

MonotoneFn MonotoneFn::identity() { return {Kind::identity, 0.0, {{0, 0}, {1, 1}}}; }

MonotoneFn MonotoneFn::zero() { return {Kind::zero, 0.0, {{0, 0}}}; }

MonotoneFn MonotoneFn::linear(double slope) {
    if (!(slope >= 0.0 && slope <= 1.0)) invalid("linear slope must lie in [0, 1]");
    return {Kind::linear, slope, {{0, 0}, {1, slope}}};
}

MonotoneFn MonotoneFn::shift(double offset) {
    if (!finite_non_negative(offset)) invalid("shift offset must be finite and non-negative");
    if (offset == 0.0) return {Kind::shift, 0.0, {{0, 0}, {1, 1}}};
    return {Kind::shift, offset, {{0, 0}, {offset, 0}, {offset + 1, 1}}};
}

MonotoneFn MonotoneFn::cap(double level) {
    if (!finite_non_negative(level)) invalid("cap level must be finite and non-negative");
    if (level == 0.0) return {Kind::cap, 0.0, {{0, 0}, {1, 0}}};
    return {Kind::cap, level, {{0, 0}, {level, level}, {level + 1, level}}};
}

MonotoneFn MonotoneFn::piecewise(std::vector<Breakpoint> points) {
    if (points.empty()) invalid("piecewise curve needs at least one breakpoint");
    for (const auto& p : points) {
        if (!finite_non_negative(p.x) || !finite_non_negative(p.y)) {
            invalid("breakpoints must be finite and non-negative");
        }
    }
    if (points.front().x > 0.0) points.insert(points.begin(), Breakpoint{0.0, 0.0});
    if (points.front().y != 0.0) invalid("a curve through x = 0 must have f(0) = 0");
    for (std::size_t k = 0; k < points.size(); ++k) {
        if (points[k].y > points[k].x) invalid("breakpoints must satisfy f(x) <= x");
        if (k > 0) {
            if (!(points[k].x > points[k - 1].x)) invalid("breakpoint x must strictly increase");
            if (points[k].y < points[k - 1].y) invalid("breakpoint y must not decrease");
        }
    }
    MonotoneFn f(Kind::piecewise, 0.0, std::move(points));
    if (f.tail_slope_ > 1.0) invalid("last segment slope must not exceed 1");
    return f;
}

double MonotoneFn::operator()(double x) const {
    x = std::max(0.0, x);
    switch (kind_) {
        case Kind::identity: return x;
        case Kind::zero: return 0.0;
        case Kind::linear: return parameter_ * x;
        case Kind::shift: return std::max(0.0, x - parameter_);
        case Kind::cap: return std::min(parameter_, x);
        case Kind::piecewise: return curve_value(curve_, tail_slope_, x);
    }
    return 0.0;
}

bool MonotoneFn::is_identity() const {
    if (kind_ == Kind::identity) return true;
    return pointwise_le(*this, identity(), 0.0) && pointwise_le(identity(), *this, 0.0);
}

std::string MonotoneFn::describe() const {
    switch (kind_) {
        case Kind::identity: return "identity";
        case Kind::zero: return "zero";
        case Kind::linear: return "linear=" + format_shortest(parameter_);
        case Kind::shift:
            return parameter_ == 1.0 ? std::string("arithmetic")
                                     : "shift=" + format_shortest(parameter_);
        case Kind::cap: return "cap=" + format_shortest(parameter_);
        case Kind::piecewise: {
            std::string out = "pwl=";
            for (std::size_t k = 0; k < curve_.size(); ++k) {
                if (k > 0) out += ',';
                out += format_shortest(curve_[k].x) + ':' + format_shortest(curve_[k].y);
            }
            return out;
        }
    }
    return {};
}

bool pointwise_le(const MonotoneFn& lower, const MonotoneFn& upper, double tol) {
    std::set<double> xs;
    for (const auto& b : lower.curve()) xs.insert(b.x);
    for (const auto& b : upper.curve()) xs.insert(b.x);
    for (const double x : xs) {
        if (lower(x) > upper(x) + tol) return false;
    }
    return lower.tail_slope() <= upper.tail_slope() + tol;
}

IntervalList::IntervalList(std::vector<Interval> intervals) : intervals_(std::move(intervals)) {
    for (std::size_t k = 0; k < intervals_.size(); ++k) {
        const auto& iv = intervals_[k];
        if (!finite_non_negative(iv.lower)) invalid("interval lower bound must be finite and >= 0");
        if (!(iv.upper > iv.lower)) invalid("interval bounds must satisfy a < b");
        if (std::isinf(iv.upper) && k + 1 != intervals_.size()) {
            invalid("only the last interval may be unbounded");
        }
        if (k > 0 && iv.lower < intervals_[k - 1].upper) {
            invalid("intervals must be sorted and disjoint");
        }
    }
}

IntervalList IntervalList::unit_steps(std::size_t count) {
    std::vector<Interval> steps;
    steps.reserve(count);
    for (std::size_t k = 1; k <= count; ++k) {
        steps.push_back({static_cast<double>(k - 1), static_cast<double>(k)});
    }
    return IntervalList(std::move(steps));
}

FunctionSequence::FunctionSequence(Kind kind, std::vector<MonotoneFn> functions)
    : kind_(kind), functions_(std::move(functions)) {}

FunctionSequence FunctionSequence::listed(std::vector<MonotoneFn> functions) {
    if (functions.empty()) invalid("parametric rule needs at least f_1");
    if (!functions.front().is_identity()) invalid("f_1 must be the identity");
    for (std::size_t k = 1; k < functions.size(); ++k) {
        if (!pointwise_le(functions[k], functions[k - 1])) {
            invalid("f_" + std::to_string(k + 1) + " exceeds f_" + std::to_string(k));
        }
    }
    return {Kind::listed, std::move(functions)};
}

FunctionSequence FunctionSequence::iterated(MonotoneFn f) {
    return {Kind::iterated, {std::move(f)}};
}

FunctionSequence FunctionSequence::hyperarithmetic() { return {Kind::hyperarithmetic, {}}; }

double FunctionSequence::value(std::size_t k, double x) const {
    if (k <= 1) return std::max(0.0, x);
    switch (kind_) {
        case Kind::listed:
            return functions_[std::min(k, functions_.size()) - 1](x);
        case Kind::iterated: {
            double v = std::max(0.0, x);
            for (std::size_t step = 1; step < k; ++step) v = functions_.front()(v);
            return v;
        }
        case Kind::hyperarithmetic:
            return std::max(0.0, x - static_cast<double>(k));
    }
    return 0.0;
}

void FunctionSequence::values(double x, std::span<double> out) const {
    if (out.empty()) return;
    if (kind_ == Kind::iterated) {
        double v = std::max(0.0, x);
        out[0] = v;
        for (std::size_t k = 1; k < out.size(); ++k) {
            v = functions_.front()(v);
            out[k] = v;
        }
        return;
    }
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = value(k + 1, x);
}

double FunctionSequence::total(std::size_t n, double x) const {
    double sum = 0.0;
    if (kind_ == Kind::iterated) {
        double v = std::max(0.0, x);
        for (std::size_t k = 0; k < n; ++k) {
            sum += v;
            v = functions_.front()(v);
        }
        return sum;
    }
    for (std::size_t k = 1; k <= n; ++k) sum += value(k, x);
    return sum;
}

std::string FunctionSequence::describe() const {
    switch (kind_) {
        case Kind::hyperarithmetic: return "hyperarithmetic";
        case Kind::iterated: return "iterated(" + functions_.front().describe() + ")";
        case Kind::listed: {
            std::string out = "listed(";
            for (std::size_t k = 0; k < functions_.size(); ++k) {
                if (k > 0) out += ';';
                out += functions_[k].describe();
            }
            return out + ")";
        }
    }
    return {};
}

}  // namespace prizes
