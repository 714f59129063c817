#include "sar/normalize.hpp"

#include <map>
#include <set>

namespace sar {

namespace {

FormulaPtr rewrite_atom(const Atom& a, bool strict_only) {
    const Polynomial& p = a.lhs;
    switch (a.rel) {
        case Rel::LT:
            return Formula::atom(p, Rel::LT);
        case Rel::GT:
            return Formula::atom(-p, Rel::LT);
        case Rel::NE:
            return Formula::disj({Formula::atom(p, Rel::LT), Formula::atom(-p, Rel::LT)});
        case Rel::LE:
            if (strict_only)
                throw Error(Error::Kind::WrongRelation, "non-strict atom in strict-only rewrite");
            return Formula::atom(p, Rel::LE);
        case Rel::GE:
            if (strict_only)
                throw Error(Error::Kind::WrongRelation, "non-strict atom in strict-only rewrite");
            return Formula::atom(-p, Rel::LE);
        case Rel::EQ:
            if (strict_only)
                throw Error(Error::Kind::WrongRelation, "non-strict atom in strict-only rewrite");
            return Formula::conj({Formula::atom(p, Rel::LE), Formula::atom(-p, Rel::LE)});
    }
    throw Error(Error::Kind::Precondition, "unknown relation");
}

FormulaPtr eliminate_rec(const Formula& f, bool strict_only) {
    switch (f.kind()) {
        case Formula::Kind::Atom:
            return rewrite_atom(f.as_atom(), strict_only);
        case Formula::Kind::Not:
            return Formula::negate(eliminate_rec(*f.kids()[0], strict_only));
        case Formula::Kind::And: {
            std::vector<FormulaPtr> kids;
            for (const auto& k : f.kids()) kids.push_back(eliminate_rec(*k, strict_only));
            return Formula::conj(std::move(kids));
        }
        case Formula::Kind::Or: {
            std::vector<FormulaPtr> kids;
            for (const auto& k : f.kids()) kids.push_back(eliminate_rec(*k, strict_only));
            return Formula::disj(std::move(kids));
        }
        case Formula::Kind::Quant:
            throw Error(Error::Kind::Precondition, "eliminate_relations requires a quantifier-free formula");
    }
    throw Error(Error::Kind::Precondition, "unreachable");
}

FormulaPtr nnf_rec(const Formula& f, bool negated) {
    switch (f.kind()) {
        case Formula::Kind::Atom: {
            const Atom& a = f.as_atom();
            if (a.rel != Rel::LT && a.rel != Rel::LE)
                throw Error(Error::Kind::NotNormalized,
                            "to_nnf expects atoms over < and <= only; run eliminate_relations first");
            if (!negated) return Formula::atom(a);
            // !(P < 0) -> -P <= 0 ; !(P <= 0) -> -P < 0
            return Formula::atom(-a.lhs, a.rel == Rel::LT ? Rel::LE : Rel::LT);
        }
        case Formula::Kind::Not:
            return nnf_rec(*f.kids()[0], !negated);
        case Formula::Kind::And:
        case Formula::Kind::Or: {
            std::vector<FormulaPtr> kids;
            for (const auto& k : f.kids()) kids.push_back(nnf_rec(*k, negated));
            bool and_out = (f.kind() == Formula::Kind::And) != negated;
            return and_out ? Formula::conj(std::move(kids)) : Formula::disj(std::move(kids));
        }
        case Formula::Kind::Quant:
            throw Error(Error::Kind::Precondition, "to_nnf requires a quantifier-free formula");
    }
    throw Error(Error::Kind::Precondition, "unreachable");
}

FormulaPtr push_neg_rec(const Formula& f, bool negated) {
    switch (f.kind()) {
        case Formula::Kind::Atom: {
            const Atom& a = f.as_atom();
            return Formula::atom(a.lhs, negated ? rel_negate(a.rel) : a.rel);
        }
        case Formula::Kind::Not:
            return push_neg_rec(*f.kids()[0], !negated);
        case Formula::Kind::And:
        case Formula::Kind::Or: {
            std::vector<FormulaPtr> kids;
            for (const auto& k : f.kids()) kids.push_back(push_neg_rec(*k, negated));
            bool and_out = (f.kind() == Formula::Kind::And) != negated;
            return and_out ? Formula::conj(std::move(kids)) : Formula::disj(std::move(kids));
        }
        case Formula::Kind::Quant:
            throw Error(Error::Kind::Precondition, "push_negations requires a quantifier-free formula");
    }
    throw Error(Error::Kind::Precondition, "unreachable");
}

Quant flip(Quant q) {
    switch (q) {
        case Quant::Forall: return Quant::Exists;
        case Quant::Exists: return Quant::Forall;
        case Quant::ForallStar: return Quant::ExistsStar;
        case Quant::ExistsStar: return Quant::ForallStar;
    }
    return q;
}

struct PrenexCtx {
    std::set<std::string> used;

    std::string fresh(const std::string& base) {
        if (!used.count(base)) {
            used.insert(base);
            return base;
        }
        for (int i = 2;; ++i) {
            std::string cand = base + std::to_string(i);
            if (!used.count(cand)) {
                used.insert(cand);
                return cand;
            }
        }
    }
};

// Pulls quantifiers to the front; `negated` tracks an odd number of enclosing
// negations (flips quantifiers, complements atoms).
FormulaPtr prenex_rec(const Formula& f, bool negated, PrenexCtx& ctx,
                      std::map<std::string, std::string> renaming,
                      std::vector<QuantifierBlock>& out_blocks) {
    switch (f.kind()) {
        case Formula::Kind::Atom: {
            const Atom& a = f.as_atom();
            Polynomial p = a.lhs.rename(renaming);
            return Formula::atom(p, negated ? rel_negate(a.rel) : a.rel);
        }
        case Formula::Kind::Not:
            return prenex_rec(*f.kids()[0], !negated, ctx, renaming, out_blocks);
        case Formula::Kind::Quant: {
            QuantifierBlock b = f.block();
            if (negated) b.quant = flip(b.quant);
            for (auto& v : b.vars) {
                std::string nv = ctx.fresh(v);
                if (nv != v)
                    renaming[v] = nv;
                else
                    renaming.erase(v);
                v = nv;
            }
            out_blocks.push_back(b);
            return prenex_rec(*f.kids()[0], negated, ctx, renaming, out_blocks);
        }
        case Formula::Kind::And:
        case Formula::Kind::Or: {
            std::vector<FormulaPtr> kids;
            for (const auto& k : f.kids())
                kids.push_back(prenex_rec(*k, negated, ctx, renaming, out_blocks));
            bool and_out = (f.kind() == Formula::Kind::And) != negated;
            return and_out ? Formula::conj(std::move(kids)) : Formula::disj(std::move(kids));
        }
    }
    throw Error(Error::Kind::Precondition, "unreachable");
}

}  // namespace

FormulaPtr eliminate_relations(const FormulaPtr& f) { return eliminate_rec(*f, false); }
FormulaPtr eliminate_relations_strict(const FormulaPtr& f) { return eliminate_rec(*f, true); }

FormulaPtr to_nnf(const FormulaPtr& f) { return nnf_rec(*f, false); }
FormulaPtr push_negations(const FormulaPtr& f) { return push_neg_rec(*f, false); }

PrenexSentence to_prenex(const FormulaPtr& f) {
    PrenexCtx ctx;
    for (const auto& v : f->free_vars()) ctx.used.insert(v);
    std::vector<QuantifierBlock> blocks;
    FormulaPtr matrix = prenex_rec(*f, false, ctx, {}, blocks);
    // merge adjacent blocks with the same quantifier and unbounded range
    std::vector<QuantifierBlock> merged;
    for (auto& b : blocks) {
        if (!merged.empty() && merged.back().quant == b.quant &&
            merged.back().range.is_all_reals() && b.range.is_all_reals()) {
            for (auto& v : b.vars) merged.back().vars.push_back(v);
        } else {
            merged.push_back(std::move(b));
        }
    }
    return PrenexSentence{std::move(merged), std::move(matrix)};
}

std::size_t count_atoms(const FormulaPtr& f) {
    if (f->kind() == Formula::Kind::Atom) return 1;
    std::size_t n = 0;
    for (const auto& k : f->kids()) n += count_atoms(k);
    return n;
}

namespace {

using Clause = std::vector<FormulaPtr>;

void dnf_rec(const Formula& f, std::vector<Clause>& clauses, std::size_t limit) {
    switch (f.kind()) {
        case Formula::Kind::Atom:
            clauses = {{Formula::atom(f.as_atom())}};
            return;
        case Formula::Kind::Or: {
            std::vector<Clause> all;
            for (const auto& k : f.kids()) {
                std::vector<Clause> sub;
                dnf_rec(*k, sub, limit);
                for (auto& c : sub) all.push_back(std::move(c));
                std::size_t atoms = 0;
                for (const auto& c : all) atoms += c.size();
                if (atoms > limit)
                    throw Error(Error::Kind::SizeExceeded, "DNF exceeds the size limit");
            }
            clauses = std::move(all);
            return;
        }
        case Formula::Kind::And: {
            std::vector<Clause> acc = {{}};
            for (const auto& k : f.kids()) {
                std::vector<Clause> sub;
                dnf_rec(*k, sub, limit);
                std::vector<Clause> next;
                for (const auto& a : acc) {
                    for (const auto& b : sub) {
                        Clause c = a;
                        c.insert(c.end(), b.begin(), b.end());
                        next.push_back(std::move(c));
                    }
                }
                std::size_t atoms = 0;
                for (const auto& c : next) atoms += c.size();
                if (atoms > limit)
                    throw Error(Error::Kind::SizeExceeded, "DNF exceeds the size limit");
                acc = std::move(next);
            }
            clauses = std::move(acc);
            return;
        }
        case Formula::Kind::Not:
            throw Error(Error::Kind::Precondition, "to_dnf requires a negation-free formula");
        case Formula::Kind::Quant:
            throw Error(Error::Kind::Precondition, "to_dnf requires a quantifier-free formula");
    }
}

}  // namespace

FormulaPtr to_dnf(const FormulaPtr& f, std::size_t size_limit) {
    std::vector<Clause> clauses;
    dnf_rec(*f, clauses, size_limit);
    std::vector<FormulaPtr> disjuncts;
    for (auto& c : clauses)
        disjuncts.push_back(c.size() == 1 ? c[0] : Formula::conj(std::move(c)));
    return disjuncts.size() == 1 ? disjuncts[0] : Formula::disj(std::move(disjuncts));
}

}  // namespace sar
