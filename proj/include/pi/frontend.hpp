#pragma once

// Concrete syntax:
//   P ::= "0" | x "(" y ")" "." P | x "!" y "." P | P "|" P | "nu" x "." P | "(" P ")"
// Prefixes bind tighter than "|", "|" associates to the left and "nu"
// scopes as far right as possible.

#include <cstddef>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>

#include "pi/syntax.hpp"

namespace pi {

struct SourceSpan {
    std::size_t begin = 0;
    std::size_t end = 0;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, SourceSpan span, std::set<std::string> expected);

    const SourceSpan& span() const { return span_; }
    const std::set<std::string>& expected() const { return expected_; }
    /// Message with a caret line under the offending input.
    std::string render(std::string_view input) const;

private:
    SourceSpan span_;
    std::set<std::string> expected_;
};

Process parse_process(std::string_view text);
/// Accepts a single name token, including the reserved `hint#k` family.
Name parse_name(std::string_view text);

std::string print_process(const Process& p);

/// Display name for the binder of `abs`, distinct from `avoid` and from the
/// abstraction's free names.
Name display_binder(const Abstraction& abs, const NameSet& avoid);

/// "tau", "x!y", "x(y)"; bound actions need the displayed binder.
std::string print_action(const Action& a, Name binder = Name{});

}  // namespace pi
