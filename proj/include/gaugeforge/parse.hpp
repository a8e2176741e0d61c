#pragma once

// Recursive-descent parser for the surface expression grammar:
//
//   expr    := term (('+' | '-') term)*            left-associative
//   term    := factor (('*' | '/') factor)*        left-associative
//   factor  := '-' factor | power
//   power   := primary ('^' factor)?               right-associative
//   primary := number | ident | ident '(' expr ')' | '(' expr ')'
//
// '^' binds tighter than unary minus; integer literals parse exact.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "gaugeforge/expr.hpp"

namespace gaugeforge {

class ParseError : public std::runtime_error {
  public:
    ParseError(std::size_t offset, std::string expected, std::string_view text);

    std::size_t offset() const { return offset_; }
    const std::string& expected() const { return expected_; }

  private:
    std::size_t offset_;
    std::string expected_;
};

Expr parse(std::string_view text);

}  // namespace gaugeforge
