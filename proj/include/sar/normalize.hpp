#pragma once

#include "sar/formula.hpp"

namespace sar {

// Relation elimination: every atom rewritten to < or <=.
//   P > 0  ->  -P < 0          P = 0  ->  (P <= 0) & (-P <= 0)
//   P >= 0 ->  -P <= 0         P != 0 ->  (P < 0) | (-P < 0)
// Length at most doubles under formula_length; semantics preserved pointwise.
FormulaPtr eliminate_relations(const FormulaPtr& f);

// Variant that keeps every atom strict; requires the input to contain only
// strict relations (<, >, !=).
FormulaPtr eliminate_relations_strict(const FormulaPtr& f);

// Negation normal form for atoms over {<, <=}:
//   !(P < 0) -> -P <= 0,  !(P <= 0) -> -P < 0, De Morgan elsewhere.
FormulaPtr to_nnf(const FormulaPtr& f);

// Generalized negation push-down over all six relations (complements each
// atom); used where equations must be preserved.
FormulaPtr push_negations(const FormulaPtr& f);

// Prenex conversion of a formula with nested quantifiers. Bound names are
// alpha-renamed apart automatically (deterministic numeric suffixes);
// quantifier order along any root-to-leaf path is preserved, and adjacent
// blocks with the same quantifier merge.
PrenexSentence to_prenex(const FormulaPtr& f);

// Disjunctive normal form; input must be negation-free. Aborts with a
// size-exceeded error when the output would exceed size_limit atoms.
FormulaPtr to_dnf(const FormulaPtr& f, std::size_t size_limit);

std::size_t count_atoms(const FormulaPtr& f);

}  // namespace sar
