#ifndef PRIZES_FORMAT_HPP
#define PRIZES_FORMAT_HPP

#include <string>

namespace prizes {

/// Shortest text that parses back to the same double; "inf" for +∞.
std::string format_shortest(double value);

/// Fixed six decimals with trailing zeros (and a bare point) trimmed. -0 prints as 0.
std::string format_money(double value);

}  // namespace prizes

#endif  // PRIZES_FORMAT_HPP
