#include "sar/gadgets.hpp"

#include "sar/normalize.hpp"

#include <algorithm>
#include <cmath>

namespace sar {

FormulaPtr chi_over(const std::vector<std::string>& chain) {
    if (chain.empty()) throw Error(Error::Kind::Precondition, "chi needs at least one variable");
    std::vector<FormulaPtr> atoms;
    // 2*U0 - 1 = 0
    atoms.push_back(Formula::atom(
        BigInt(2) * Polynomial::variable(chain[0]) - Polynomial::constant(1), Rel::EQ));
    for (std::size_t i = 1; i < chain.size(); ++i) {
        Polynomial prev = Polynomial::variable(chain[i - 1]);
        atoms.push_back(
            Formula::atom(Polynomial::variable(chain[i]) - prev * prev, Rel::EQ));
    }
    return atoms.size() == 1 ? atoms[0] : Formula::conj(std::move(atoms));
}

FormulaPtr chi(unsigned n) {
    std::vector<std::string> chain;
    for (unsigned i = 0; i <= n; ++i) chain.push_back("u" + std::to_string(i));
    return chi_over(chain);
}

std::vector<Rational> chi_solution(unsigned n) {
    if (n > 25)
        throw Error(Error::Kind::BudgetExceeded, "chi solution beyond materialization range; use dyadics");
    std::vector<Rational> u;
    u.push_back(Rational(1, 2));
    for (unsigned i = 1; i <= n; ++i) u.push_back(u.back() * u.back());
    return u;
}

std::vector<Dyadic> chi_solution_dyadic(unsigned n) {
    std::vector<Dyadic> u;
    u.push_back(Dyadic(BigInt(1), BigInt(-1)));
    for (unsigned i = 1; i <= n; ++i) u.push_back(u.back() * u.back());
    return u;
}

namespace {

// Matches 2*v - 1 = 0, returning v.
std::optional<std::string> match_chain_head(const Atom& a) {
    if (a.rel != Rel::EQ) return std::nullopt;
    if (a.lhs.term_count() != 2) return std::nullopt;
    std::string var;
    for (const auto& [m, c] : a.lhs.terms()) {
        if (m.empty()) {
            if (c != -1) return std::nullopt;
        } else if (m.size() == 1 && m[0].second == 1 && c == 2) {
            var = m[0].first;
        } else {
            return std::nullopt;
        }
    }
    if (var.empty()) return std::nullopt;
    return var;
}

// Matches v - w^2 = 0, returning (v, w).
std::optional<std::pair<std::string, std::string>> match_chain_link(const Atom& a) {
    if (a.rel != Rel::EQ) return std::nullopt;
    if (a.lhs.term_count() != 2) return std::nullopt;
    std::string v, w;
    for (const auto& [m, c] : a.lhs.terms()) {
        if (m.size() == 1 && m[0].second == 1 && c == 1)
            v = m[0].first;
        else if (m.size() == 1 && m[0].second == 2 && c == -1)
            w = m[0].first;
        else
            return std::nullopt;
    }
    if (v.empty() || w.empty()) return std::nullopt;
    return std::make_pair(v, w);
}

}  // namespace

std::optional<std::vector<std::string>> find_chi_chain(const FormulaPtr& matrix) {
    std::vector<FormulaPtr> conjuncts;
    if (matrix->kind() == Formula::Kind::And)
        conjuncts = matrix->kids();
    else
        conjuncts = {matrix};
    std::optional<std::string> head;
    std::map<std::string, std::string> next;  // w -> v where v = w^2
    for (const auto& c : conjuncts) {
        if (c->kind() != Formula::Kind::Atom) continue;
        if (auto h = match_chain_head(c->as_atom())) head = h;
        if (auto l = match_chain_link(c->as_atom())) next[l->second] = l->first;
    }
    if (!head) return std::nullopt;
    std::vector<std::string> chain{*head};
    while (true) {
        auto it = next.find(chain.back());
        if (it == next.end()) break;
        chain.push_back(it->second);
    }
    return chain;
}

std::pair<Atom, std::string> strengthen_atom(const Atom& a, FreshCtx& ctx) {
    if (a.rel != Rel::LT)
        throw Error(Error::Kind::WrongRelation, "strengthen_atom requires an atom of the form P < 0");
    std::string z = ctx.fresh("_z");
    Polynomial zz = Polynomial::variable(z);
    return {Atom{zz * zz * a.lhs + Polynomial::constant(1), Rel::LT}, z};
}

namespace {

bool atom_only_over(const Atom& a, const std::set<std::string>& vars) {
    for (const auto& v : a.lhs.vars())
        if (!vars.count(v)) return false;
    return true;
}

Polynomial scale_poly(const Polynomial& p, const std::map<std::string, unsigned>& scales,
                      const std::vector<std::string>& chain, unsigned k_exp, unsigned degree) {
    Polynomial out;
    for (const auto& [m, c] : p.terms()) {
        unsigned scaled_deg = 0;
        for (const auto& [v, e] : m)
            if (scales.count(v)) scaled_deg += e;
        if (scaled_deg > degree)
            throw Error(Error::Kind::Precondition, "scaling degree smaller than a monomial's degree");
        Monomial nm = m;
        // u_K^(d - A)
        if (degree > scaled_deg) nm.push_back({chain[k_exp], degree - scaled_deg});
        // (u_K / u_e)^(a_v) = (prod_{j=e}^{K-1} u_j)^(a_v) per occurrence
        for (const auto& [v, e] : m) {
            auto it = scales.find(v);
            if (it == scales.end()) continue;
            for (unsigned j = it->second; j < k_exp; ++j) nm.push_back({chain[j], e});
        }
        std::sort(nm.begin(), nm.end());
        Monomial merged;
        for (const auto& [v, e] : nm) {
            if (!merged.empty() && merged.back().first == v)
                merged.back().second += e;
            else
                merged.push_back({v, e});
        }
        out = out + Polynomial::monomial(c, merged);
    }
    return out;
}

FormulaPtr scale_formula_rec(const Formula& f, const std::map<std::string, unsigned>& scales,
                             const std::vector<std::string>& chain,
                             const std::set<std::string>& chain_set, unsigned k_exp,
                             unsigned degree) {
    switch (f.kind()) {
        case Formula::Kind::Atom: {
            const Atom& a = f.as_atom();
            if (atom_only_over(a, chain_set)) return Formula::atom(a);  // chi conjunct
            return Formula::atom(scale_poly(a.lhs, scales, chain, k_exp, degree), a.rel);
        }
        case Formula::Kind::Not:
            return Formula::negate(
                scale_formula_rec(*f.kids()[0], scales, chain, chain_set, k_exp, degree));
        case Formula::Kind::And: {
            std::vector<FormulaPtr> kids;
            for (const auto& k : f.kids())
                kids.push_back(scale_formula_rec(*k, scales, chain, chain_set, k_exp, degree));
            return Formula::conj(std::move(kids));
        }
        case Formula::Kind::Or: {
            std::vector<FormulaPtr> kids;
            for (const auto& k : f.kids())
                kids.push_back(scale_formula_rec(*k, scales, chain, chain_set, k_exp, degree));
            return Formula::disj(std::move(kids));
        }
        case Formula::Kind::Quant:
            throw Error(Error::Kind::Precondition, "scale_matrix requires a quantifier-free matrix");
    }
    throw Error(Error::Kind::Precondition, "unreachable");
}

}  // namespace

FormulaPtr scale_matrix(const FormulaPtr& matrix, const std::map<std::string, unsigned>& scales,
                        const std::vector<std::string>& chain, unsigned k_exp, unsigned degree) {
    if (chain.size() <= k_exp)
        throw Error(Error::Kind::Precondition, "chi chain shorter than the scaling exponent");
    for (const auto& [v, e] : scales)
        if (e > k_exp) throw Error(Error::Kind::Precondition, "scale exponent exceeds K");
    std::set<std::string> chain_set(chain.begin(), chain.end());
    return scale_formula_rec(*matrix, scales, chain, chain_set, k_exp, degree);
}

PrenexSentence scale_block(const PrenexSentence& s, std::size_t block_index, unsigned k_exp,
                           unsigned e_exp, unsigned degree) {
    if (block_index >= s.blocks.size())
        throw Error(Error::Kind::Precondition, "block index out of range");
    if (k_exp < e_exp) throw Error(Error::Kind::Precondition, "K < target exponent");
    auto chain = find_chi_chain(s.matrix);
    if (!chain || chain->size() <= k_exp)
        throw Error(Error::Kind::Precondition, "matrix has no chi(U) conjunct over u0..uK");

    const QuantifierBlock& target = s.blocks[block_index];
    // Identity path: box already [-1,1] and nothing to scale.
    if (!target.range.is_all_reals() && std::holds_alternative<Rational>(*target.range.bound) &&
        std::get<Rational>(*target.range.bound) == 1 && e_exp == 0)
        return s;

    std::map<std::string, unsigned> scales;
    for (const auto& v : target.vars) scales[v] = e_exp;
    PrenexSentence out = s;
    out.blocks[block_index].range.bound = Rational(1);
    out.matrix = scale_matrix(s.matrix, scales, *chain, k_exp, degree);
    return out;
}

// ---------------- Tseitin ----------------

namespace {

struct TseitinBuilder {
    FreshCtx& ctx;
    std::vector<Polynomial> defs;          // definitional equations, degree handled later
    std::vector<std::string> fresh_vars;
    std::vector<WitnessRule> witness;
    std::map<std::pair<std::string, std::string>, std::string> product_vars;

    explicit TseitinBuilder(FreshCtx& c) : ctx(c) {}

    std::string add_fresh(WitnessRule::Kind kind, const Polynomial& expr) {
        std::string v = ctx.fresh("_t");
        fresh_vars.push_back(v);
        witness.push_back(WitnessRule{v, kind, expr});
        return v;
    }

    // System of equations whose simultaneous vanishing (for some fresh vars)
    // is equivalent to f.
    std::vector<Polynomial> build(const Formula& f) {
        switch (f.kind()) {
            case Formula::Kind::Atom:
                return {encode_atom(f.as_atom())};
            case Formula::Kind::And: {
                std::vector<Polynomial> all;
                for (const auto& k : f.kids()) {
                    auto sub = build(*k);
                    all.insert(all.end(), sub.begin(), sub.end());
                }
                return all;
            }
            case Formula::Kind::Or: {
                Polynomial prod = Polynomial::constant(1);
                for (const auto& k : f.kids()) prod = prod * aggregate(build(*k));
                return {prod};
            }
            case Formula::Kind::Not:
                throw Error(Error::Kind::Precondition, "negations must be pushed before flattening");
            case Formula::Kind::Quant:
                throw Error(Error::Kind::Precondition, "tseitin requires a quantifier-free formula");
        }
        throw Error(Error::Kind::Precondition, "unreachable");
    }

    // Folds a system {F_i = 0} into one variable e with e = sum f_i^2,
    // f_i := F_i; e vanishes iff the whole system does. A single equation
    // multiplies directly.
    Polynomial aggregate(const std::vector<Polynomial>& system) {
        if (system.size() == 1) return system[0];
        Polynomial sum;
        for (const auto& F : system) {
            std::string fi = add_fresh(WitnessRule::Kind::Poly, F);
            defs.push_back(Polynomial::variable(fi) - F);
            sum = sum + Polynomial::variable(fi) * Polynomial::variable(fi);
        }
        std::string e = add_fresh(WitnessRule::Kind::Poly, sum);
        defs.push_back(Polynomial::variable(e) - sum);
        return Polynomial::variable(e);
    }

    Polynomial encode_atom(const Atom& a) {
        const Polynomial& p = a.lhs;
        switch (a.rel) {
            case Rel::EQ:
                return p;
            case Rel::LE: {
                std::string s = add_fresh(WitnessRule::Kind::Sqrt, -p);
                return p + Polynomial::variable(s) * Polynomial::variable(s);
            }
            case Rel::GE: {
                std::string s = add_fresh(WitnessRule::Kind::Sqrt, p);
                return -p + Polynomial::variable(s) * Polynomial::variable(s);
            }
            case Rel::LT: {
                std::string z = add_fresh(WitnessRule::Kind::InvSqrt, -p);
                return Polynomial::variable(z) * Polynomial::variable(z) * p + Polynomial::constant(1);
            }
            case Rel::GT: {
                std::string z = add_fresh(WitnessRule::Kind::InvSqrt, p);
                return Polynomial::variable(z) * Polynomial::variable(z) * (-p) + Polynomial::constant(1);
            }
            case Rel::NE: {
                std::string z = add_fresh(WitnessRule::Kind::Inv, p);
                return Polynomial::variable(z) * p - Polynomial::constant(1);
            }
        }
        throw Error(Error::Kind::Precondition, "unknown relation");
    }

    // Reduces every equation to total degree <= 2 by introducing product
    // variables w = v1*v2 (memoized across equations).
    std::vector<Polynomial> reduce_degrees(std::vector<Polynomial> eqs) {
        bool changed = true;
        while (changed) {
            changed = false;
            for (auto& eq : eqs) {
                if (eq.total_degree() <= 2) continue;
                // first monomial of degree > 2, first two variable factors
                Monomial culprit;
                for (const auto& [m, c] : eq.terms()) {
                    unsigned d = 0;
                    for (const auto& [v, e] : m) d += e;
                    if (d > 2) {
                        culprit = m;
                        break;
                    }
                }
                if (culprit.empty()) continue;
                std::string v1 = culprit[0].first;
                std::string v2 = (culprit[0].second >= 2) ? v1 : culprit[1].first;
                bool created = false;
                std::string w = product_var(v1, v2, created);
                if (created)
                    eqs.push_back(Polynomial::variable(w) -
                                  Polynomial::variable(v1) * Polynomial::variable(v2));
                for (auto& e2 : eqs) e2 = substitute_pair(e2, v1, v2, w);
                changed = true;
                break;
            }
        }
        return eqs;
    }

    std::string product_var(const std::string& v1, const std::string& v2, bool& created) {
        auto key = std::minmax(v1, v2);
        auto it = product_vars.find(key);
        if (it != product_vars.end()) {
            created = false;
            return it->second;
        }
        std::string w =
            add_fresh(WitnessRule::Kind::Poly, Polynomial::variable(v1) * Polynomial::variable(v2));
        product_vars[key] = w;
        created = true;
        return w;
    }

    // In every monomial of p of degree > 2 that contains the pair v1*v2,
    // replace one such pair by w (repeatedly while the degree stays > 2).
    Polynomial substitute_pair(const Polynomial& p, const std::string& v1, const std::string& v2,
                               const std::string& w) {
        Polynomial out;
        for (const auto& [m, c] : p.terms()) {
            std::map<std::string, unsigned> exps(m.begin(), m.end());
            auto deg = [&]() {
                unsigned d = 0;
                for (const auto& [v, e] : exps) d += e;
                return d;
            };
            auto available = [&]() {
                if (v1 == v2) return exps[v1] >= 2;
                return exps[v1] >= 1 && exps[v2] >= 1;
            };
            while (deg() > 2 && available()) {
                exps[v1] -= 1;
                exps[v2] -= 1;
                exps[w] += 1;
            }
            Monomial nm;
            for (const auto& [v, e] : exps)
                if (e > 0) nm.push_back({v, e});
            out = out + Polynomial::monomial(c, nm);
        }
        return out;
    }

    TseitinSystem finalize(std::vector<Polynomial> eqs) {
        for (const auto& d : defs) eqs.push_back(d);
        eqs = reduce_degrees(std::move(eqs));
        TseitinSystem out;
        out.equations = std::move(eqs);
        out.fresh_vars = fresh_vars;
        out.witness = witness;
        return out;
    }
};

}  // namespace

TseitinSystem tseitin_quadratic(const FormulaPtr& f, FreshCtx& ctx) {
    if (!f->is_quantifier_free())
        throw Error(Error::Kind::Precondition, "tseitin requires a quantifier-free formula");
    FormulaPtr nnf = push_negations(f);
    TseitinBuilder b(ctx);
    std::vector<Polynomial> eqs = b.build(*nnf);
    return b.finalize(std::move(eqs));
}

TseitinSystem tseitin_quadratic(const FormulaPtr& f) {
    FreshCtx ctx(f->all_vars());
    return tseitin_quadratic(f, ctx);
}

TseitinQuartic tseitin_quartic(const FormulaPtr& f, FreshCtx& ctx) {
    TseitinSystem sys = tseitin_quadratic(f, ctx);
    Polynomial sum;
    for (const auto& e : sys.equations) sum = sum + e * e;
    TseitinQuartic out;
    out.equation = sum;
    out.fresh_vars = std::move(sys.fresh_vars);
    out.witness = std::move(sys.witness);
    return out;
}

TseitinQuartic tseitin_quartic(const FormulaPtr& f) {
    FreshCtx ctx(f->all_vars());
    return tseitin_quartic(f, ctx);
}

double witness_residual(const std::vector<Polynomial>& equations,
                        const std::map<std::string, double>& point) {
    double worst = 0;
    for (const auto& eq : equations) {
        double scale = 1.0;
        for (const auto& [m, c] : eq.terms()) {
            double t = std::abs(c.convert_to<double>());
            for (const auto& [v, e] : m) {
                auto it = point.find(v);
                if (it == point.end())
                    throw Error(Error::Kind::MissingAssignment, "unassigned variable: " + v);
                t *= std::pow(std::abs(it->second), static_cast<int>(e));
            }
            scale += t;
        }
        worst = std::max(worst, std::abs(eq.eval_double(point)) / scale);
    }
    return worst;
}

std::map<std::string, double> eval_witness(const std::vector<WitnessRule>& rules,
                                           std::map<std::string, double> point) {
    for (const auto& r : rules) {
        double v = r.expr.eval_double(point);
        double out = 0.0;
        switch (r.kind) {
            case WitnessRule::Kind::Poly:
                out = v;
                break;
            case WitnessRule::Kind::Sqrt:
                out = v >= 0 ? std::sqrt(v) : 0.0;
                break;
            case WitnessRule::Kind::Inv:
                out = v != 0 ? 1.0 / v : 0.0;
                break;
            case WitnessRule::Kind::InvSqrt:
                out = v > 0 ? 1.0 / std::sqrt(v) : 0.0;
                break;
        }
        point[r.var] = out;
    }
    return point;
}

}  // namespace sar
