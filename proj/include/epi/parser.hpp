#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "epi/formula.hpp"

namespace epi {

/// Raised for grammar violations, undeclared agents and empty group literals.
/// `position` is the 0-based byte offset into the parsed text.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t position, const std::string& message);
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

/// Parses the ASCII formula grammar. E{G} is expanded to a conjunction of K's;
/// other connectives are kept as written.
Formula parse(std::string_view text, const AgentSet& agents);

}  // namespace epi
