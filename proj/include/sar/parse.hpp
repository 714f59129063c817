#pragma once

#include "sar/formula.hpp"

#include <string>
#include <variant>

namespace sar {

using ParseResult = std::variant<FormulaPtr, PrenexSentence>;

struct ParseOptions {
    // Underscore-prefixed names are reserved for machine-generated variables;
    // the CLI re-reads its own pipeline output, so it allows them.
    bool allow_reserved = false;
};

// Parses the formula text format. Quantifier blocks at the start switch to
// sentence mode; atoms with a nonzero right side are normalized to P rel 0.
ParseResult parse_text(const std::string& text, const ParseOptions& opts = {});

FormulaPtr parse_formula(const std::string& text, const ParseOptions& opts = {});
PrenexSentence parse_sentence(const std::string& text, const ParseOptions& opts = {});

Rational parse_decimal_or_fraction(const std::string& text);

// Deterministic text form; parse_text(print(f)) is structurally equal to f.
std::string print_formula(const FormulaPtr& f);
std::string print_sentence(const PrenexSentence& s);
std::string print_range_bound(const BlockRange& r);

}  // namespace sar
