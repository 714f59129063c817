#pragma once

#include "sar/polynomial.hpp"
#include "sar/tower.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace sar {

enum class Rel { LT, LE, EQ, NE, GE, GT };

const char* rel_text(Rel r);
Rel rel_negate(Rel r);   // complement: not(P rel 0)
bool rel_is_strict(Rel r);     // <, >, !=
bool rel_is_nonstrict(Rel r);  // <=, >=, =
bool rel_holds(Rel r, int sign_of_p);

// Atom P rel 0 (right side implicitly zero).
struct Atom {
    Polynomial lhs;
    Rel rel = Rel::LT;
    bool operator==(const Atom& o) const { return rel == o.rel && lhs == o.lhs; }
};

class Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

enum class Quant { Forall, Exists, ForallStar, ExistsStar };

// Symmetric range of a quantifier block: all of R, or [-bound, bound].
struct BlockRange {
    std::optional<std::variant<Rational, Tower>> bound;  // nullopt = all reals
    bool is_all_reals() const { return !bound.has_value(); }
};

struct QuantifierBlock {
    Quant quant = Quant::Forall;
    std::vector<std::string> vars;
    BlockRange range;
};

// Immutable formula tree: Atom | And | Or | Not | Quant (nested quantifier,
// only as an intermediate before prenexing).
class Formula {
public:
    enum class Kind { Atom, And, Or, Not, Quant };

    static FormulaPtr atom(Atom a);
    static FormulaPtr atom(Polynomial p, Rel r) { return atom(Atom{std::move(p), r}); }
    static FormulaPtr conj(std::vector<FormulaPtr> kids);  // flattens nested Ands
    static FormulaPtr disj(std::vector<FormulaPtr> kids);  // flattens nested Ors
    static FormulaPtr negate(FormulaPtr f);
    static FormulaPtr quantified(QuantifierBlock block, FormulaPtr body);

    Kind kind() const { return kind_; }
    const Atom& as_atom() const { return atom_; }
    const std::vector<FormulaPtr>& kids() const { return kids_; }
    const QuantifierBlock& block() const { return block_; }

    bool is_quantifier_free() const;
    bool contains_negation() const;
    std::vector<std::string> free_vars() const;  // all variables not bound inside
    std::vector<std::string> all_vars() const;

    bool structurally_equal(const Formula& o) const;

private:
    Formula() = default;
    Kind kind_ = Kind::Atom;
    Atom atom_;
    std::vector<FormulaPtr> kids_;
    QuantifierBlock block_;
};

bool structurally_equal(const FormulaPtr& a, const FormulaPtr& b);

struct PrenexSentence {
    std::vector<QuantifierBlock> blocks;
    FormulaPtr matrix;

    std::vector<std::string> bound_vars() const;
    // 0-based index of the block binding var, or npos.
    std::size_t block_of(const std::string& var) const;
};

bool structurally_equal(const PrenexSentence& a, const PrenexSentence& b);

struct SemiAlgebraicSet {
    unsigned ambient_dim = 0;
    std::vector<std::string> var_names;  // size == ambient_dim
    FormulaPtr defining;                 // quantifier-free, free vars == var_names
};

SemiAlgebraicSet make_set(unsigned dim, FormulaPtr defining);

struct HausdorffInstance {
    SemiAlgebraicSet A;
    SemiAlgebraicSet B;
    Rational t;
    bool directed = false;
    std::map<std::string, std::string> meta;
};

// ---- Length measure ----
// 1 per fixed symbol (relation, the 0, '+' between monomials, quantifier
// symbol), integer coefficients at binary length, exponents in unary (each
// variable occurrence costs ceil(log2(k+1)) where k = number of distinct
// variables). Connectives and parentheses are structure, not symbols.
BigInt formula_length(const FormulaPtr& f);
BigInt formula_length(const PrenexSentence& s);
BigInt var_occurrence_cost(std::size_t distinct_vars);

// ---- Classification ----
enum class QffClass { QFF, QFF_strict, QFF_nonstrict };
QffClass classify(const FormulaPtr& f);  // requires quantifier-free

// True iff every atom whose polynomial mentions a universally quantified
// variable is strict. Requires negation-free prenex matrix.
bool is_forall_strict(const PrenexSentence& s);

}  // namespace sar
