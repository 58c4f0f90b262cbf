#pragma once

#include "splab/problem.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

namespace splab {

/// Instance-text error with a 1-based source position.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& message);

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// Parses the line-oriented instance format:
///
///     # comment
///     family dense-deg3            (optional)
///     var x1 in [0, 1]
///     min: 2 x1^2*x2 - x2 + 1       (or max:, negated into min)
///     st c1: x1 + x2 >= 0.5         (<= is negated into >=; = kept)
///
/// Statements end at a newline or ';'. Duplicate supports are merged and
/// zero coefficients dropped.
Problem parse_problem(std::string_view text);

Problem read_problem(const std::filesystem::path& path);

/// Canonical text form; parse_problem(render_problem(p)) == p.
std::string render_problem(const Problem& problem);

void write_problem(const Problem& problem, const std::filesystem::path& path);

/// Shortest round-trip decimal form of a double.
std::string format_double(double value);

} // namespace splab
