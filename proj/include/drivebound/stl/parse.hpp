#pragma once

#include <string_view>

#include "drivebound/stl/formula.hpp"

namespace drivebound::stl {

// Concrete syntax:
//
//   formula     := [ 'param' ident (',' ident)* ';' ] implication
//   implication := disjunction [ '=>' implication ]            (right assoc)
//   disjunction := conjunction ( 'or' conjunction )*
//   conjunction := until ( 'and' until )*
//   until       := unary [ 'until_' interval unary ]
//   unary       := 'not' unary | 'alw_' interval unary | 'ev_' interval unary | atom
//   atom        := 'true' | '(' implication ')' | signal cmp rhs
//   cmp         := '<' | '<=' | '>' | '>=' | '=='
//   rhs         := number | declared parameter | 'G' | 'Y' | 'R'   (labels: s_TL with '==' only)
//   interval    := '[' number ',' (number | 'inf') ']'   with 0 <= lo <= hi
//
// Signals: d_x, v_x, t_el, l_q, s_TL, u. Throws ParseError with position info.
Formula parse(std::string_view text);

}  // namespace drivebound::stl
