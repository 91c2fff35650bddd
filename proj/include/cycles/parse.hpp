#pragma once

// Text syntax shared by the CLI and the test suites.
//
//   point     :=  "inf" | "[" integer ":" integer "]" | rational
//   rational  :=  integer [ "/" positive-integer ]
//   map       :=  expression in z over Q with + - * / ^ and parentheses,
//                 e.g. "(2*z^3-3*z^2-3*z+2)/(2*z^2-2*z)" or "z^2-1"
//
// Printing is canonical (points as "[a:b]", maps as reduced quotients of
// integer polynomials) and parse(print(x)) == x.

#include "cycles/projline.hpp"
#include "cycles/ratmap.hpp"
#include "cycles/sarith.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace cycles {

Rat parse_rational(std::string_view text);

ProjPoint parse_point(std::string_view text);
std::string format_point(const ProjPoint& P);

std::vector<ProjPoint> parse_tuple(std::string_view text);   // whitespace-separated

HomogMap parse_map(std::string_view text);
std::string format_map(const HomogMap& map);

std::string format_rational(const Rat& q);

}  // namespace cycles
