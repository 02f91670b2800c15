#ifndef JDR_TEXTIO_HPP
#define JDR_TEXTIO_HPP

#include "jdr/diagram.hpp"

#include <string>

namespace jdr {

// Textual expression grammar shared by the CLI and the expected values of
// the verification scenarios:
//
//   expr    := term (('+'|'-') term)*
//   term    := factor ('*' factor)*
//   factor  := primary ('^' int)?
//   primary := rational | 'alpha'|'a'|'b'|'c'|'d'|'r'|'t' | '(' expr ')'
//            | generator-name | diagram
//   diagram := 'YY' '[' leg{3 ',' } ';' leg{3 ','} ']'
//            | 'H' '[' leg ',' leg '|' leg ',' leg ']'
//            | 'ladder' '[' leg ',' leg ']'
//            | 'loopstem' '[' 't^'int ';' leg ',' leg ']'
//            | 'lollipop' '[' 't^'int ';' leg '|' leg ',' leg ',' leg ']'
//            | 'closed' '[' ']'
//   leg     := '(' (int | 'g' | 'e') ',' int ')'        // (exponent, copy)
//
// Scalars multiply diagrams; t-powers are only legal in scalar positions of
// Laurent expressions.
ParamPoly parse_param_poly(const std::string& text);
LaurentPoly parse_laurent(const std::string& text);
LinCombo parse_lincombo(const std::string& text, const EssentialRegistry* registry);

} // namespace jdr

#endif
