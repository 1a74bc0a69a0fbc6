#pragma once

#include <stdexcept>
#include <string>

#include "probneed/syntax.hpp"

namespace probneed {

struct ParseError : std::runtime_error {
    int line;
    int column;
    ParseError(const std::string& msg, int line_, int column_)
        : std::runtime_error(msg + " (line " + std::to_string(line_) + ", column " +
                             std::to_string(column_) + ")"),
          line(line_), column(column_) {}
};

// Concrete syntax:
//   \x y. e            abstraction (also \x.\y.e)
//   e1 e2              application, left-associative
//   e1 <+> e2          fair choice; NOT associative, nesting needs parentheses
//   let x=e1, y=e2 in e
//   Ctor e1 .. en      saturated constructor application (extended)
//   case e of { C x1 .. -> e1; ... }
//   seq e1 e2
//   -- comment to end of line
// The names id, K, K2, Bot, Omega are reserved shorthands for the usual
// combinators. `[.]` parses as the reserved hole variable used for contexts.
ExprPtr parse_expr(const std::string& text, const CtorTable& table = CtorTable::defaults(),
                   bool extended = false);

// parse_expr followed by freshening, so the result obeys the distinct
// variable convention expected by the reduction machine.
ExprPtr parse_program(const std::string& text, const CtorTable& table = CtorTable::defaults(),
                      bool extended = false);

std::string print_expr(const ExprPtr& e);

// The variable standing for a context hole; printed as [.]
const VarName& hole_name();
bool is_hole(const ExprPtr& e);

} // namespace probneed
