#ifndef PRIZES_FUNCTIONS_HPP
#define PRIZES_FUNCTIONS_HPP

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace prizes {

inline constexpr double infinity = std::numeric_limits<double>::infinity();

struct Breakpoint {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Breakpoint&, const Breakpoint&) = default;
};

/// Continuous, non-decreasing f on [0, ∞) with 0 ≤ f(x) ≤ x.
///
/// Every function is held as a piecewise-linear curve starting at the origin;
/// past its last breakpoint it continues along the last segment's slope. The
/// named builtins are just curves with a fixed shape:
///   identity  x
///   zero      0
///   linear    λ·x            (0 ≤ λ ≤ 1)
///   shift     max{0, x − c}  (c ≥ 0)
///   cap       min{a, x}      (a ≥ 0)
class MonotoneFn {
public:
    enum class Kind { identity, zero, linear, shift, cap, piecewise };

    static MonotoneFn identity();
    static MonotoneFn zero();
    static MonotoneFn linear(double slope);
    static MonotoneFn shift(double offset);
    static MonotoneFn cap(double level);
    /// Breakpoints sorted by strictly increasing x ≥ 0. An origin point is implied.
    static MonotoneFn piecewise(std::vector<Breakpoint> points);

    double operator()(double x) const;

    Kind kind() const noexcept { return kind_; }
    double parameter() const noexcept { return parameter_; }
    const std::vector<Breakpoint>& curve() const noexcept { return curve_; }
    double tail_slope() const noexcept { return tail_slope_; }
    bool is_identity() const;

    /// Body of the rule mini-language, e.g. "linear=0.5" or "pwl=0:0,1:0,2:1".
    std::string describe() const;

    friend bool operator==(const MonotoneFn& a, const MonotoneFn& b) {
        return a.kind_ == b.kind_ && a.parameter_ == b.parameter_ && a.curve_ == b.curve_;
    }

private:
    MonotoneFn(Kind kind, double parameter, std::vector<Breakpoint> curve);

    Kind kind_;
    double parameter_;
    std::vector<Breakpoint> curve_;
    double tail_slope_ = 0.0;
};

/// lower(x) ≤ upper(x) + tol for every x ≥ 0. Exact for piecewise-linear curves:
/// checks the union of breakpoints and the tail slopes.
bool pointwise_le(const MonotoneFn& lower, const MonotoneFn& upper, double tol = 1e-12);

struct Interval {
    double lower = 0.0;
    double upper = 0.0;  // may be +∞

    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Sorted, pairwise disjoint open intervals (a_k, b_k). Neighbours may share an endpoint.
class IntervalList {
public:
    IntervalList() = default;
    explicit IntervalList(std::vector<Interval> intervals);

    /// (k−1, k) for k = 1..count.
    static IntervalList unit_steps(std::size_t count);

    const std::vector<Interval>& intervals() const noexcept { return intervals_; }
    bool empty() const noexcept { return intervals_.empty(); }
    std::size_t size() const noexcept { return intervals_.size(); }
    const Interval& operator[](std::size_t k) const { return intervals_[k]; }

    friend bool operator==(const IntervalList&, const IntervalList&) = default;

private:
    std::vector<Interval> intervals_;
};

/// f_1, f_2, ... for a parametric rule. f_1 is the identity and f_{k+1} ≤ f_k.
class FunctionSequence {
public:
    enum class Kind {
        listed,           // explicit prefix; the last function repeats afterwards
        iterated,         // f_k = f^(k−1)
        hyperarithmetic,  // f_1 = x, f_k = max{0, x − k} for k ≥ 2
    };

    static FunctionSequence listed(std::vector<MonotoneFn> functions);
    static FunctionSequence iterated(MonotoneFn f);
    static FunctionSequence hyperarithmetic();

    Kind kind() const noexcept { return kind_; }
    const std::vector<MonotoneFn>& functions() const noexcept { return functions_; }

    /// f_k(x), k ≥ 1.
    double value(std::size_t k, double x) const;
    /// out[k−1] = f_k(x) for k = 1..out.size().
    void values(double x, std::span<double> out) const;
    double total(std::size_t n, double x) const;

    std::string describe() const;

    friend bool operator==(const FunctionSequence&, const FunctionSequence&) = default;

private:
    FunctionSequence(Kind kind, std::vector<MonotoneFn> functions);

    Kind kind_;
    std::vector<MonotoneFn> functions_;
};

}  // namespace prizes

#endif  // PRIZES_FUNCTIONS_HPP
