#include "sar/formula.hpp"

#include <algorithm>
#include <set>

namespace sar {

const char* rel_text(Rel r) {
    switch (r) {
        case Rel::LT: return "<";
        case Rel::LE: return "<=";
        case Rel::EQ: return "=";
        case Rel::NE: return "!=";
        case Rel::GE: return ">=";
        case Rel::GT: return ">";
    }
    return "?";
}

Rel rel_negate(Rel r) {
    switch (r) {
        case Rel::LT: return Rel::GE;
        case Rel::LE: return Rel::GT;
        case Rel::EQ: return Rel::NE;
        case Rel::NE: return Rel::EQ;
        case Rel::GE: return Rel::LT;
        case Rel::GT: return Rel::LE;
    }
    return Rel::LT;
}

bool rel_is_strict(Rel r) { return r == Rel::LT || r == Rel::GT || r == Rel::NE; }
bool rel_is_nonstrict(Rel r) { return r == Rel::LE || r == Rel::GE || r == Rel::EQ; }

bool rel_holds(Rel r, int s) {
    switch (r) {
        case Rel::LT: return s < 0;
        case Rel::LE: return s <= 0;
        case Rel::EQ: return s == 0;
        case Rel::NE: return s != 0;
        case Rel::GE: return s >= 0;
        case Rel::GT: return s > 0;
    }
    return false;
}

FormulaPtr Formula::atom(Atom a) {
    auto f = std::shared_ptr<Formula>(new Formula());
    f->kind_ = Kind::Atom;
    f->atom_ = std::move(a);
    return f;
}

FormulaPtr Formula::conj(std::vector<FormulaPtr> kids) {
    if (kids.empty()) throw Error(Error::Kind::Precondition, "And requires children");
    std::vector<FormulaPtr> flat;
    for (auto& c : kids) {
        if (c->kind() == Kind::And)
            for (const auto& cc : c->kids()) flat.push_back(cc);
        else
            flat.push_back(std::move(c));
    }
    if (flat.size() == 1) return flat[0];
    auto f = std::shared_ptr<Formula>(new Formula());
    f->kind_ = Kind::And;
    f->kids_ = std::move(flat);
    return f;
}

FormulaPtr Formula::disj(std::vector<FormulaPtr> kids) {
    if (kids.empty()) throw Error(Error::Kind::Precondition, "Or requires children");
    std::vector<FormulaPtr> flat;
    for (auto& c : kids) {
        if (c->kind() == Kind::Or)
            for (const auto& cc : c->kids()) flat.push_back(cc);
        else
            flat.push_back(std::move(c));
    }
    if (flat.size() == 1) return flat[0];
    auto f = std::shared_ptr<Formula>(new Formula());
    f->kind_ = Kind::Or;
    f->kids_ = std::move(flat);
    return f;
}

FormulaPtr Formula::negate(FormulaPtr f) {
    auto n = std::shared_ptr<Formula>(new Formula());
    n->kind_ = Kind::Not;
    n->kids_ = {std::move(f)};
    return n;
}

FormulaPtr Formula::quantified(QuantifierBlock block, FormulaPtr body) {
    auto n = std::shared_ptr<Formula>(new Formula());
    n->kind_ = Kind::Quant;
    n->block_ = std::move(block);
    n->kids_ = {std::move(body)};
    return n;
}

bool Formula::is_quantifier_free() const {
    if (kind_ == Kind::Quant) return false;
    for (const auto& k : kids_)
        if (!k->is_quantifier_free()) return false;
    return true;
}

bool Formula::contains_negation() const {
    if (kind_ == Kind::Not) return true;
    for (const auto& k : kids_)
        if (k->contains_negation()) return true;
    return false;
}

static void collect_vars(const Formula& f, std::set<std::string>& out) {
    if (f.kind() == Formula::Kind::Atom) {
        for (const auto& v : f.as_atom().lhs.vars()) out.insert(v);
        return;
    }
    if (f.kind() == Formula::Kind::Quant)
        for (const auto& v : f.block().vars) out.insert(v);
    for (const auto& k : f.kids()) collect_vars(*k, out);
}

static void collect_free(const Formula& f, std::set<std::string>& bound, std::set<std::string>& out) {
    if (f.kind() == Formula::Kind::Atom) {
        for (const auto& v : f.as_atom().lhs.vars())
            if (!bound.count(v)) out.insert(v);
        return;
    }
    if (f.kind() == Formula::Kind::Quant) {
        std::vector<std::string> added;
        for (const auto& v : f.block().vars)
            if (bound.insert(v).second) added.push_back(v);
        collect_free(*f.kids()[0], bound, out);
        for (const auto& v : added) bound.erase(v);
        return;
    }
    for (const auto& k : f.kids()) collect_free(*k, bound, out);
}

std::vector<std::string> Formula::free_vars() const {
    std::set<std::string> bound, out;
    collect_free(*this, bound, out);
    return {out.begin(), out.end()};
}

std::vector<std::string> Formula::all_vars() const {
    std::set<std::string> out;
    collect_vars(*this, out);
    return {out.begin(), out.end()};
}

static bool ranges_equal(const BlockRange& a, const BlockRange& b) {
    if (a.is_all_reals() != b.is_all_reals()) return false;
    if (a.is_all_reals()) return true;
    const auto& va = *a.bound;
    const auto& vb = *b.bound;
    if (va.index() != vb.index()) return false;
    if (std::holds_alternative<Rational>(va))
        return std::get<Rational>(va) == std::get<Rational>(vb);
    return std::get<Tower>(va).structurally_equal(std::get<Tower>(vb));
}

static bool blocks_equal(const QuantifierBlock& a, const QuantifierBlock& b) {
    return a.quant == b.quant && a.vars == b.vars && ranges_equal(a.range, b.range);
}

bool Formula::structurally_equal(const Formula& o) const {
    if (this == &o) return true;
    if (kind_ != o.kind_) return false;
    if (kind_ == Kind::Atom) return atom_ == o.atom_;
    if (kind_ == Kind::Quant && !blocks_equal(block_, o.block_)) return false;
    if (kids_.size() != o.kids_.size()) return false;
    for (std::size_t i = 0; i < kids_.size(); ++i)
        if (!kids_[i]->structurally_equal(*o.kids_[i])) return false;
    return true;
}

bool structurally_equal(const FormulaPtr& a, const FormulaPtr& b) {
    if (!a || !b) return a == b;
    return a->structurally_equal(*b);
}

std::vector<std::string> PrenexSentence::bound_vars() const {
    std::vector<std::string> out;
    for (const auto& b : blocks)
        for (const auto& v : b.vars) out.push_back(v);
    return out;
}

std::size_t PrenexSentence::block_of(const std::string& var) const {
    for (std::size_t i = 0; i < blocks.size(); ++i)
        for (const auto& v : blocks[i].vars)
            if (v == var) return i;
    return static_cast<std::size_t>(-1);
}

bool structurally_equal(const PrenexSentence& a, const PrenexSentence& b) {
    if (a.blocks.size() != b.blocks.size()) return false;
    for (std::size_t i = 0; i < a.blocks.size(); ++i)
        if (!blocks_equal(a.blocks[i], b.blocks[i])) return false;
    return structurally_equal(a.matrix, b.matrix);
}

SemiAlgebraicSet make_set(unsigned dim, FormulaPtr defining) {
    SemiAlgebraicSet s;
    s.ambient_dim = dim;
    s.defining = std::move(defining);
    for (unsigned i = 1; i <= dim; ++i) s.var_names.push_back("x" + std::to_string(i));
    return s;
}

BigInt var_occurrence_cost(std::size_t distinct_vars) {
    return ceil_log2(BigInt(distinct_vars) + 1);
}

static BigInt atom_length(const Atom& a, const BigInt& var_cost) {
    // relation + the implicit 0 + polynomial
    return poly_length(a.lhs, var_cost) + 2;
}

static BigInt formula_length_rec(const Formula& f, const BigInt& var_cost) {
    switch (f.kind()) {
        case Formula::Kind::Atom:
            return atom_length(f.as_atom(), var_cost);
        case Formula::Kind::Quant: {
            BigInt len = 1;  // quantifier symbol
            len += BigInt(f.block().vars.size()) * var_cost;
            if (!f.block().range.is_all_reals()) len += 2;  // the two endpoints
            return len + formula_length_rec(*f.kids()[0], var_cost);
        }
        default: {
            BigInt len = 0;
            for (const auto& k : f.kids()) len += formula_length_rec(*k, var_cost);
            return len;
        }
    }
}

BigInt formula_length(const FormulaPtr& f) {
    BigInt var_cost = var_occurrence_cost(f->all_vars().size());
    return formula_length_rec(*f, var_cost);
}

BigInt formula_length(const PrenexSentence& s) {
    std::set<std::string> vars;
    for (const auto& v : s.matrix->all_vars()) vars.insert(v);
    for (const auto& b : s.blocks)
        for (const auto& v : b.vars) vars.insert(v);
    BigInt var_cost = var_occurrence_cost(vars.size());
    BigInt len = formula_length_rec(*s.matrix, var_cost);
    for (const auto& b : s.blocks) {
        len += 1;  // quantifier symbol
        len += BigInt(b.vars.size()) * var_cost;
        if (!b.range.is_all_reals()) len += 2;
    }
    return len;
}

QffClass classify(const FormulaPtr& f) {
    if (!f->is_quantifier_free())
        throw Error(Error::Kind::Precondition, "classify requires a quantifier-free formula");
    if (f->contains_negation()) return QffClass::QFF;
    bool all_strict = true, all_nonstrict = true;
    std::vector<const Formula*> stack{f.get()};
    while (!stack.empty()) {
        const Formula* g = stack.back();
        stack.pop_back();
        if (g->kind() == Formula::Kind::Atom) {
            all_strict &= rel_is_strict(g->as_atom().rel);
            all_nonstrict &= rel_is_nonstrict(g->as_atom().rel);
        } else {
            for (const auto& k : g->kids()) stack.push_back(k.get());
        }
    }
    if (all_strict) return QffClass::QFF_strict;
    if (all_nonstrict) return QffClass::QFF_nonstrict;
    return QffClass::QFF;
}

bool is_forall_strict(const PrenexSentence& s) {
    if (s.matrix->contains_negation())
        throw Error(Error::Kind::NotNormalized, "is_forall_strict requires a negation-free matrix");
    std::set<std::string> universal;
    for (const auto& b : s.blocks)
        if (b.quant == Quant::Forall || b.quant == Quant::ForallStar)
            universal.insert(b.vars.begin(), b.vars.end());
    bool ok = true;
    std::vector<const Formula*> stack{s.matrix.get()};
    while (!stack.empty() && ok) {
        const Formula* g = stack.back();
        stack.pop_back();
        if (g->kind() == Formula::Kind::Atom) {
            if (rel_is_strict(g->as_atom().rel)) continue;
            for (const auto& v : g->as_atom().lhs.vars())
                if (universal.count(v)) {
                    ok = false;
                    break;
                }
        } else {
            for (const auto& k : g->kids()) stack.push_back(k.get());
        }
    }
    return ok;
}

}  // namespace sar
