#include "sar/reductions.hpp"

#include "sar/normalize.hpp"
#include "sar/parse.hpp"

#include <algorithm>
#include <set>

namespace sar {

BigInt PipelineLimits::apply(const BigInt& faithful, const std::string& key,
                             std::map<std::string, std::string>& info) const {
    info[key + "_faithful"] = faithful.str();
    BigInt used = faithful;
    if (exponent_cap && faithful > BigInt(*exponent_cap)) used = BigInt(*exponent_cap);
    info[key] = used.str();
    return used;
}

namespace {

unsigned to_exponent(const BigInt& e, const PipelineLimits& limits) {
    if (e > BigInt(limits.max_vars))
        throw Error(Error::Kind::SizeExceeded,
                    "computed range exponent " + e.str() +
                        " exceeds the construction budget; rerun with an exponent cap "
                        "(--cap-exponent) or a smaller alpha");
    return e.convert_to<unsigned>();
}

std::vector<FormulaPtr> conjuncts_of(const FormulaPtr& f) {
    if (f->kind() == Formula::Kind::And) return f->kids();
    return {f};
}

// Collects the atoms of a negation-free formula in deterministic order.
void collect_atoms(const FormulaPtr& f, std::vector<const Atom*>& out) {
    if (f->kind() == Formula::Kind::Atom) {
        out.push_back(&f->as_atom());
        return;
    }
    for (const auto& k : f->kids()) collect_atoms(k, out);
}

// Rewrites each atom of a negation-free formula via fn.
FormulaPtr map_atoms(const FormulaPtr& f, const std::function<FormulaPtr(const Atom&)>& fn) {
    switch (f->kind()) {
        case Formula::Kind::Atom:
            return fn(f->as_atom());
        case Formula::Kind::And: {
            std::vector<FormulaPtr> kids;
            for (const auto& k : f->kids()) kids.push_back(map_atoms(k, fn));
            return Formula::conj(std::move(kids));
        }
        case Formula::Kind::Or: {
            std::vector<FormulaPtr> kids;
            for (const auto& k : f->kids()) kids.push_back(map_atoms(k, fn));
            return Formula::disj(std::move(kids));
        }
        default:
            throw Error(Error::Kind::NotNormalized, "expected a negation-free matrix");
    }
}

FormulaPtr substitute_in_formula(const FormulaPtr& f, const std::string& var, const Polynomial& rep) {
    return map_atoms(f, [&](const Atom& a) {
        return Formula::atom(a.lhs.substitute(var, rep), a.rel);
    });
}

QuantifierBlock box_block(Quant q, std::vector<std::string> vars, const Rational& bound) {
    QuantifierBlock b;
    b.quant = q;
    b.vars = std::move(vars);
    b.range.bound = bound;
    return b;
}

QuantifierBlock tower_block(Quant q, std::vector<std::string> vars, unsigned exp2exp) {
    QuantifierBlock b;
    b.quant = q;
    b.vars = std::move(vars);
    b.range.bound = Tower::pow2pow2(exp2exp);
    return b;
}

// Probe axis pinned to the single dyadic value `v`.
ProbeAxis pinned_axis(const Dyadic& v) {
    ProbeAxis a;
    a.lo = a.hi = Rational(1);
    a.cells = 1;
    a.scale = v;
    return a;
}

Dyadic pow2pow2_dyadic(unsigned e, int sign_of_exponent) {
    BigInt exp = BigInt(1) << e;
    return Dyadic(BigInt(1), sign_of_exponent >= 0 ? exp : -exp);
}

struct StrictInput {
    std::vector<std::string> xs, ys;
    FormulaPtr matrix_lt;  // every atom P < 0
};

// Validates the Strict-UETR shape and rewrites all atoms to P < 0.
StrictInput check_strict_uetr(const PrenexSentence& s) {
    if (s.blocks.size() != 2 || s.blocks[0].quant != Quant::Forall ||
        s.blocks[1].quant != Quant::Exists)
        throw Error(Error::Kind::Precondition,
                    "expected one universal block followed by one existential block");
    for (const auto& b : s.blocks)
        if (!b.range.is_all_reals())
            throw Error(Error::Kind::Precondition, "expected unrestricted quantifier ranges");
    if (s.matrix->contains_negation())
        throw Error(Error::Kind::NotNormalized, "matrix must be negation-free");
    if (classify(s.matrix) != QffClass::QFF_strict)
        throw Error(Error::Kind::WrongRelation, "matrix must contain only strict atoms");
    StrictInput in;
    in.xs = s.blocks[0].vars;
    in.ys = s.blocks[1].vars;
    in.matrix_lt = eliminate_relations_strict(s.matrix);
    return in;
}

}  // namespace

PipelineOutput expand_counterexamples(const PrenexSentence& s, const BoundConfig& cfg,
                                      const PipelineLimits& limits) {
    StrictInput in = check_strict_uetr(s);
    PipelineOutput out;

    FreshCtx fresh;
    fresh.reserve_all(in.xs);
    fresh.reserve_all(in.ys);

    // Stage 1: strengthen every atom P < 0 to Z^2 P + 1 < 0 with fresh
    // existential Z, hoisted into the existential block.
    std::vector<std::string> zs;
    FormulaPtr strengthened = map_atoms(in.matrix_lt, [&](const Atom& a) {
        auto [sa, z] = strengthen_atom(a, fresh);
        zs.push_back(z);
        return Formula::atom(sa);
    });

    BigInt n = in.xs.size();
    BigInt m_tilde = BigInt(in.ys.size()) + BigInt(zs.size());
    BigInt L = formula_length(strengthened);
    out.info["L"] = L.str();
    out.info["atoms"] = std::to_string(zs.size());

    // Stage 2 and 3: range exponents.
    unsigned N = to_exponent(limits.apply(universal_range_exponent(n, m_tilde, L, cfg), "N", out.info),
                             limits);
    unsigned M = to_exponent(
        limits.apply(existential_range_exponent(n, m_tilde, BigInt(N), L, cfg), "M", out.info),
        limits);
    unsigned K = std::max(N, M);
    out.info["K"] = std::to_string(K);

    // Stage 4: scale every block to [-1,1] against the chi chain.
    std::vector<std::string> chain;
    for (unsigned i = 0; i <= K; ++i) chain.push_back(fresh.fresh("_u"));
    unsigned d = 0;
    {
        std::vector<const Atom*> atoms;
        collect_atoms(strengthened, atoms);
        for (const Atom* a : atoms) d = std::max(d, a->lhs.total_degree());
    }
    out.info["d"] = std::to_string(d);
    std::map<std::string, unsigned> scales;
    for (const auto& v : in.xs) scales[v] = N;
    for (const auto& v : in.ys) scales[v] = M;
    for (const auto& v : zs) scales[v] = M;
    FormulaPtr scaled = scale_matrix(strengthened, scales, chain, K, d);

    std::vector<std::string> exist_vars = in.ys;
    exist_vars.insert(exist_vars.end(), zs.begin(), zs.end());
    exist_vars.insert(exist_vars.end(), chain.begin(), chain.end());
    out.sentence.blocks = {box_block(Quant::Forall, in.xs, Rational(1)),
                           box_block(Quant::Exists, exist_vars, Rational(1))};
    out.sentence.matrix = Formula::conj({chi_over(chain), scaled});

    // Desk-scale equivalent: exists Z in [-D,D] : Z^2 P + 1 < 0 is exactly
    // P < -1/D^2, i.e. cD2 * P + 1 < 0 with cD2 pinned to D^2 = 2^(2^(M+1)).
    std::string cvar = fresh.fresh("_c");
    FormulaPtr testable_matrix = map_atoms(in.matrix_lt, [&](const Atom& a) {
        return Formula::atom(Polynomial::variable(cvar) * a.lhs + Polynomial::constant(1), Rel::LT);
    });
    QuantifierBlock ys_block;
    ys_block.quant = Quant::Exists;
    ys_block.vars = in.ys;
    ys_block.vars.push_back(cvar);
    QuantifierBlock xs_block;
    xs_block.quant = Quant::Forall;
    xs_block.vars = in.xs;
    out.testable.blocks = {xs_block, ys_block};
    out.testable.matrix = testable_matrix;
    out.probe_hints.axes[cvar] = pinned_axis(pow2pow2_dyadic(M + 1, +1));
    out.info["universal_box_exponent"] = std::to_string(N);
    out.info["existential_box_exponent"] = std::to_string(M);
    return out;
}

// ---------------------------------------------------------------------------

namespace {

// Product of squared-distance terms: q^2 * sum (a_i - b_i)^2 - p^2.
Polynomial squared_distance_atom_poly(const std::vector<std::string>& as,
                                      const std::vector<std::string>& bs, const Rational& t) {
    BigInt p = num(t), q = den(t);
    Polynomial d2;
    for (std::size_t i = 0; i < as.size(); ++i) {
        Polynomial diff = Polynomial::variable(as[i]) - Polynomial::variable(bs[i]);
        d2 = d2 + diff * diff;
    }
    return (q * q) * d2 - Polynomial::constant(p * p);
}

std::vector<std::string> numbered(const std::string& prefix, std::size_t n) {
    std::vector<std::string> v;
    for (std::size_t i = 1; i <= n; ++i) v.push_back(prefix + std::to_string(i));
    return v;
}

FormulaPtr rename_formula(const FormulaPtr& f, const std::map<std::string, std::string>& renaming) {
    switch (f->kind()) {
        case Formula::Kind::Atom:
            return Formula::atom(f->as_atom().lhs.rename(renaming), f->as_atom().rel);
        case Formula::Kind::Not:
            return Formula::negate(rename_formula(f->kids()[0], renaming));
        case Formula::Kind::And: {
            std::vector<FormulaPtr> kids;
            for (const auto& k : f->kids()) kids.push_back(rename_formula(k, renaming));
            return Formula::conj(std::move(kids));
        }
        case Formula::Kind::Or: {
            std::vector<FormulaPtr> kids;
            for (const auto& k : f->kids()) kids.push_back(rename_formula(k, renaming));
            return Formula::disj(std::move(kids));
        }
        case Formula::Kind::Quant:
            throw Error(Error::Kind::Precondition, "unexpected quantifier");
    }
    throw Error(Error::Kind::Precondition, "unreachable");
}

std::map<std::string, std::string> make_renaming(const std::vector<std::string>& from,
                                                 const std::vector<std::string>& to) {
    std::map<std::string, std::string> r;
    for (std::size_t i = 0; i < from.size(); ++i) r[from[i]] = to[i];
    return r;
}

// The Lemma 6.4 + Lemma 6.2 tail shared by encode_membership and
// exotic_to_strict. Input shape (already prenex, integer polynomials):
//   forall eps > 0, X . exists Y :
//     [F(X)^2 > 0 or]  G(Y) = 0  /\  P(X,Y) < eps^c
// where X/Y here are the caller's universal/existential variable lists
// (eps excluded). Returns the Strict-UETR sentence plus the testable form
// pieces the caller embeds.
struct Lemma64Input {
    std::vector<std::string> univ;   // X (without eps)
    std::vector<std::string> exist;  // Y
    std::optional<Polynomial> f_poly;
    Polynomial g_poly;
    Polynomial p_poly;
    unsigned eps_power = 1;  // c in P < eps^c
};

struct Lemma64Result {
    PrenexSentence sentence;
    std::map<std::string, std::string> info;
    // components for the caller's testable construction
    std::string eps_var;
    Dyadic eps_threshold;      // guard: eps < this
    Dyadic slack_bound_sq;     // E^2
};

Lemma64Result lemma64_to_strict(const Lemma64Input& input, FreshCtx& fresh, const BoundConfig& cfg,
                                const PipelineLimits& limits) {
    Lemma64Result out;
    std::string eps = fresh.fresh("_eps");
    std::string dlt = fresh.fresh("_dlt");
    std::string slk = fresh.fresh("_slk");
    out.eps_var = eps;

    Polynomial eps_p = Polynomial::variable(eps);
    Polynomial dlt_p = Polynomial::variable(dlt);
    Polynomial slk_p = Polynomial::variable(slk);

    // (delta^2 eps - 1)^2 > 0 encodes the eps > 0 guard universally.
    Polynomial guard = dlt_p * dlt_p * eps_p - Polynomial::constant(1);
    guard = guard * guard;

    Polynomial eps_pow = eps_p;
    for (unsigned i = 1; i < input.eps_power; ++i) eps_pow = eps_pow * eps_p;

    // Length of the matrix before range bounding.
    std::vector<FormulaPtr> disj0;
    disj0.push_back(Formula::atom(guard, Rel::GT));
    if (input.f_poly) disj0.push_back(Formula::atom(*input.f_poly * *input.f_poly, Rel::GT));
    disj0.push_back(Formula::conj({Formula::atom(input.g_poly, Rel::EQ),
                                   Formula::atom(input.p_poly - eps_pow, Rel::LT)}));
    BigInt L = formula_length(Formula::disj(disj0));
    out.info["L"] = L.str();

    BigInt n_univ = BigInt(input.univ.size()) + 2;  // eps, delta
    BigInt m_exist = BigInt(input.exist.size()) + 1;  // slack
    unsigned N = to_exponent(
        limits.apply(universal_range_exponent(n_univ, m_exist, L, cfg), "N", out.info), limits);
    unsigned M = to_exponent(
        limits.apply(existential_range_exponent(n_univ, m_exist, BigInt(N), L, cfg), "M", out.info),
        limits);

    // Slack range: E = 2^(2^K) bounds |B| with B^2 = eps^c - P over the box.
    BigInt k_faithful = compact_poly_bound_exponent(
        eps_pow - input.p_poly, BigInt(std::max(N, M)), n_univ + m_exist, cfg);
    unsigned Kb = to_exponent(limits.apply(k_faithful, "K", out.info), limits);

    unsigned S = std::max({N, M, Kb});
    out.info["S"] = std::to_string(S);

    // H := G^2 + (P - eps^c + B^2)^2
    Polynomial slack_term = input.p_poly - eps_pow + slk_p * slk_p;
    Polynomial H = input.g_poly * input.g_poly + slack_term * slack_term;

    // Scale everything by u_S and multiply through by u_S^d.
    std::vector<std::string> chain;
    for (unsigned i = 0; i <= S; ++i) chain.push_back(fresh.fresh("_u"));
    std::map<std::string, unsigned> scales;
    scales[eps] = S;
    scales[dlt] = S;
    scales[slk] = S;
    for (const auto& v : input.univ) scales[v] = S;
    for (const auto& v : input.exist) scales[v] = S;

    std::vector<FormulaPtr> payload;
    payload.push_back(Formula::atom(guard, Rel::GT));
    if (input.f_poly) payload.push_back(Formula::atom(*input.f_poly * *input.f_poly, Rel::GT));
    FormulaPtr phi_less = Formula::disj(payload);
    unsigned d = std::max({guard.total_degree(),
                           input.f_poly ? (input.f_poly->total_degree() * 2) : 0u,
                           H.total_degree()});
    out.info["d"] = std::to_string(d);

    FormulaPtr phi_less_scaled = scale_matrix(phi_less, scales, chain, S, d);
    Polynomial h_scaled;
    {
        FormulaPtr h_atom = Formula::atom(H, Rel::EQ);
        h_scaled = scale_matrix(h_atom, scales, chain, S, d)->as_atom().lhs;
    }
    FormulaPtr not_chi = push_negations(Formula::negate(chi_over(chain)));

    // Lemma 6.2 finish: replace H' = 0 by H'^2 < v_{N2} with a second chain.
    std::size_t n_prime = input.univ.size() + 2 + chain.size();
    std::size_t m_prime = input.exist.size() + 1;
    BigInt L2 = formula_length(Formula::disj(
        {not_chi, phi_less_scaled, Formula::atom(h_scaled, Rel::EQ)}));
    BigInt n2_faithful =
        ceil_log2(pow_big(cfg.beta, 4) * BigInt(n_prime) * BigInt(m_prime) * bound_log(L2) + 1);
    unsigned N2 = to_exponent(limits.apply(n2_faithful, "N2", out.info), limits);
    std::vector<std::string> chain2;
    for (unsigned i = 0; i <= N2; ++i) chain2.push_back(fresh.fresh("_v"));
    FormulaPtr not_chi2 = push_negations(Formula::negate(chi_over(chain2)));

    Polynomial threshold_atom = h_scaled * h_scaled - Polynomial::variable(chain2.back());

    std::vector<std::string> univ_all;
    univ_all.push_back(eps);
    univ_all.push_back(dlt);
    univ_all.insert(univ_all.end(), input.univ.begin(), input.univ.end());
    univ_all.insert(univ_all.end(), chain.begin(), chain.end());
    univ_all.insert(univ_all.end(), chain2.begin(), chain2.end());
    std::vector<std::string> exist_all = input.exist;
    exist_all.push_back(slk);

    out.sentence.blocks = {box_block(Quant::Forall, univ_all, Rational(1)),
                           box_block(Quant::Exists, exist_all, Rational(1))};
    out.sentence.matrix = Formula::disj(
        {not_chi2, not_chi, phi_less_scaled, Formula::atom(threshold_atom, Rel::LT)});

    // eps threshold for the testable form: the delta guard holds for every
    // delta in [-2^(2^S), 2^(2^S)] iff eps < 2^(-2^(S+1)).
    out.eps_threshold = pow2pow2_dyadic(S + 1, -1);
    out.slack_bound_sq = pow2pow2_dyadic(Kb + 1, +1);  // E^2 = 2^(2*2^K)
    return out;
}

}  // namespace

PrenexSentence encode_directed_hausdorff(const HausdorffInstance& h) {
    if (h.A.ambient_dim != h.B.ambient_dim)
        throw Error(Error::Kind::DimensionMismatch, "instance sets have different ambient dimensions");
    if (h.t < 0) throw Error(Error::Kind::Precondition, "threshold must be >= 0");
    std::size_t n = h.A.ambient_dim;

    auto one_direction = [&](const SemiAlgebraicSet& A, const SemiAlgebraicSet& B,
                             const std::string& eps_name, const std::string& a_prefix,
                             const std::string& b_prefix) {
        std::vector<std::string> as = numbered(a_prefix, n);
        std::vector<std::string> bs = numbered(b_prefix, n);
        FormulaPtr phiA = rename_formula(A.defining, make_renaming(A.var_names, as));
        FormulaPtr phiB = rename_formula(B.defining, make_renaming(B.var_names, bs));
        Polynomial dist = squared_distance_atom_poly(as, bs, h.t);
        BigInt q = den(h.t);
        // |a-b|^2 < t^2 + eps, multiplied by q^2
        Polynomial dist_atom = dist - (q * q) * Polynomial::variable(eps_name);

        // eps <= 0  \/  !phiA  \/  (phiB /\ dist)
        FormulaPtr matrix = Formula::disj(
            {Formula::atom(Polynomial::variable(eps_name), Rel::LE),
             to_nnf(Formula::negate(eliminate_relations(phiA))),
             Formula::conj({eliminate_relations(phiB), Formula::atom(dist_atom, Rel::LT)})});

        PrenexSentence s;
        std::vector<std::string> univ{eps_name};
        univ.insert(univ.end(), as.begin(), as.end());
        s.blocks = {QuantifierBlock{Quant::Forall, univ, {}},
                    QuantifierBlock{Quant::Exists, bs, {}}};
        s.matrix = matrix;
        return s;
    };

    if (h.directed) return one_direction(h.A, h.B, "_eps1", "a", "b");

    // Undirected: conjunction of both directions with disjoint names,
    // prenexed by concatenating the quantifier prefixes.
    PrenexSentence d1 = one_direction(h.A, h.B, "_eps1", "a", "b");
    PrenexSentence d2 = one_direction(h.B, h.A, "_eps2", "c", "d");
    PrenexSentence s;
    QuantifierBlock univ = d1.blocks[0];
    univ.vars.insert(univ.vars.end(), d2.blocks[0].vars.begin(), d2.blocks[0].vars.end());
    QuantifierBlock exist = d1.blocks[1];
    exist.vars.insert(exist.vars.end(), d2.blocks[1].vars.begin(), d2.blocks[1].vars.end());
    s.blocks = {univ, exist};
    s.matrix = Formula::conj({d1.matrix, d2.matrix});
    return s;
}

PipelineOutput encode_membership(const HausdorffInstance& h, const BoundConfig& cfg,
                                 const PipelineLimits& limits) {
    if (h.A.ambient_dim != h.B.ambient_dim)
        throw Error(Error::Kind::DimensionMismatch, "instance sets have different ambient dimensions");
    std::size_t n = h.A.ambient_dim;

    auto one_direction = [&](const SemiAlgebraicSet& A, const SemiAlgebraicSet& B,
                             const std::string& a_prefix, const std::string& b_prefix,
                             const std::string& info_prefix, PipelineOutput& out) {
        FreshCtx fresh;
        std::vector<std::string> as = numbered(a_prefix, n);
        std::vector<std::string> bs = numbered(b_prefix, n);
        fresh.reserve_all(as);
        fresh.reserve_all(bs);
        FormulaPtr phiA = rename_formula(A.defining, make_renaming(A.var_names, as));
        FormulaPtr phiB = rename_formula(B.defining, make_renaming(B.var_names, bs));

        TseitinQuartic FA = tseitin_quartic(phiA, fresh);
        TseitinQuartic FB = tseitin_quartic(phiB, fresh);

        Lemma64Input li;
        li.univ = as;
        li.univ.insert(li.univ.end(), FA.fresh_vars.begin(), FA.fresh_vars.end());
        li.exist = bs;
        li.exist.insert(li.exist.end(), FB.fresh_vars.begin(), FB.fresh_vars.end());
        li.f_poly = FA.equation;
        li.g_poly = FB.equation;
        li.p_poly = squared_distance_atom_poly(as, bs, h.t);
        li.eps_power = 1;
        Lemma64Result lr = lemma64_to_strict(li, fresh, cfg, limits);
        for (const auto& [k, v] : lr.info) out.info[info_prefix + k] = v;

        // Testable desk-scale direction: the guard projects to
        // eps < 2^(-2^(S+1)); the Tseitin polynomials project back to the
        // defining formulas; the slack projects to 0 <= eps - P <= E^2.
        std::string cthr = fresh.fresh("_c");
        std::string cesq = fresh.fresh("_c");
        Polynomial eps_p = Polynomial::variable(lr.eps_var);
        FormulaPtr guard_small = Formula::atom(eps_p - Polynomial::variable(cthr), Rel::LT);
        FormulaPtr slack_lo = Formula::atom(li.p_poly - eps_p, Rel::LE);
        FormulaPtr slack_hi =
            Formula::atom(eps_p - li.p_poly - Polynomial::variable(cesq), Rel::LE);
        FormulaPtr t_matrix = Formula::disj(
            {guard_small, to_nnf(Formula::negate(eliminate_relations(phiA))),
             Formula::conj({eliminate_relations(phiB), slack_lo, slack_hi})});
        PrenexSentence t_sentence;
        std::vector<std::string> univ{lr.eps_var};
        univ.insert(univ.end(), as.begin(), as.end());
        std::vector<std::string> exist = bs;
        exist.push_back(cthr);
        exist.push_back(cesq);
        t_sentence.blocks = {QuantifierBlock{Quant::Forall, univ, {}},
                             QuantifierBlock{Quant::Exists, exist, {}}};
        t_sentence.matrix = t_matrix;
        out.probe_hints.axes[cthr] = pinned_axis(lr.eps_threshold);
        out.probe_hints.axes[cesq] = pinned_axis(lr.slack_bound_sq);
        return std::make_pair(lr.sentence, t_sentence);
    };

    PipelineOutput out;
    if (h.directed) {
        auto [s, t] = one_direction(h.A, h.B, "a", "b", "", out);
        out.sentence = s;
        out.testable = t;
        return out;
    }
    auto [s1, t1] = one_direction(h.A, h.B, "a", "b", "ab_", out);
    auto [s2, t2] = one_direction(h.B, h.A, "c", "d", "ba_", out);
    auto concat = [](const PrenexSentence& x, const PrenexSentence& y) {
        PrenexSentence s;
        QuantifierBlock univ = x.blocks[0];
        univ.vars.insert(univ.vars.end(), y.blocks[0].vars.begin(), y.blocks[0].vars.end());
        QuantifierBlock exist = x.blocks[1];
        exist.vars.insert(exist.vars.end(), y.blocks[1].vars.begin(), y.blocks[1].vars.end());
        s.blocks = {univ, exist};
        s.matrix = Formula::conj({x.matrix, y.matrix});
        return s;
    };
    out.sentence = concat(s1, s2);
    out.testable = concat(t1, t2);
    return out;
}

PrenexSentence expand_exotic(const PrenexSentence& s) {
    if (s.blocks.empty())
        throw Error(Error::Kind::Precondition, "sentence has no quantifier blocks");
    for (std::size_t i = 1; i < s.blocks.size(); ++i)
        if (s.blocks[i].quant == Quant::ForallStar || s.blocks[i].quant == Quant::ExistsStar)
            throw Error(Error::Kind::UnsupportedPosition,
                        "exotic quantifier in non-leading position");
    const QuantifierBlock& lead = s.blocks[0];
    if (lead.quant != Quant::ForallStar && lead.quant != Quant::ExistsStar)
        throw Error(Error::Kind::UnsupportedPosition, "leading block is not exotic");

    FreshCtx fresh;
    fresh.reserve_all(s.bound_vars());
    std::string eps = fresh.fresh("_eps");
    std::vector<std::string> shadow;
    std::map<std::string, std::string> renaming;
    for (const auto& v : lead.vars) {
        std::string nv = fresh.fresh("_x");
        shadow.push_back(nv);
        renaming[v] = nv;
    }
    FormulaPtr moved = rename_formula(s.matrix, renaming);
    Polynomial dist;
    for (std::size_t i = 0; i < lead.vars.size(); ++i) {
        Polynomial diff = Polynomial::variable(lead.vars[i]) - Polynomial::variable(shadow[i]);
        dist = dist + diff * diff;
    }
    Polynomial eps_sq = Polynomial::variable(eps) * Polynomial::variable(eps);

    PrenexSentence out;
    if (lead.quant == Quant::ForallStar) {
        // forall X, eps . exists X~ [, rest] : eps <= 0 \/ (|X-X~|^2 < eps^2 /\ phi(X~))
        QuantifierBlock univ{Quant::Forall, lead.vars, lead.range};
        univ.vars.push_back(eps);
        univ.range = {};
        QuantifierBlock exist{Quant::Exists, shadow, {}};
        out.blocks.push_back(univ);
        out.blocks.push_back(exist);
        for (std::size_t i = 1; i < s.blocks.size(); ++i) out.blocks.push_back(s.blocks[i]);
        if (out.blocks.size() >= 3 && out.blocks[1].quant == out.blocks[2].quant &&
            out.blocks[1].range.is_all_reals() && out.blocks[2].range.is_all_reals()) {
            out.blocks[1].vars.insert(out.blocks[1].vars.end(), out.blocks[2].vars.begin(),
                                      out.blocks[2].vars.end());
            out.blocks.erase(out.blocks.begin() + 2);
        }
        out.matrix = Formula::disj(
            {Formula::atom(Polynomial::variable(eps), Rel::LE),
             Formula::conj({Formula::atom(dist - eps_sq, Rel::LT), moved})});
    } else {
        // exists X, eps . forall X~ [, rest] : eps > 0 /\ (|X-X~|^2 >= eps^2 \/ phi(X~))
        QuantifierBlock exist{Quant::Exists, lead.vars, lead.range};
        exist.vars.push_back(eps);
        exist.range = {};
        QuantifierBlock univ{Quant::Forall, shadow, {}};
        out.blocks.push_back(exist);
        out.blocks.push_back(univ);
        for (std::size_t i = 1; i < s.blocks.size(); ++i) out.blocks.push_back(s.blocks[i]);
        if (out.blocks.size() >= 3 && out.blocks[1].quant == out.blocks[2].quant &&
            out.blocks[1].range.is_all_reals() && out.blocks[2].range.is_all_reals()) {
            out.blocks[1].vars.insert(out.blocks[1].vars.end(), out.blocks[2].vars.begin(),
                                      out.blocks[2].vars.end());
            out.blocks.erase(out.blocks.begin() + 2);
        }
        out.matrix = Formula::conj(
            {Formula::atom(Polynomial::variable(eps), Rel::GT),
             Formula::disj({Formula::atom(dist - eps_sq, Rel::GE), moved})});
    }
    return out;
}

PipelineOutput exotic_to_strict(const PrenexSentence& s, const BoundConfig& cfg,
                                const PipelineLimits& limits) {
    if (s.blocks.empty() || s.blocks[0].quant != Quant::ForallStar)
        throw Error(Error::Kind::Precondition, "expected a sentence of shape forall* X . exists Y");
    PrenexSentence expanded = expand_exotic(s);

    PipelineOutput out;
    FreshCtx fresh;
    fresh.reserve_all(expanded.bound_vars());

    const std::vector<std::string>& xs = s.blocks[0].vars;
    // shadow variables and the rest of the existential block
    std::vector<std::string> exist_vars = expanded.blocks[1].vars;

    // phi over the shadow (and further existential) variables
    std::map<std::string, std::string> renaming;
    std::vector<std::string> shadow;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        shadow.push_back(exist_vars[i]);
        renaming[xs[i]] = exist_vars[i];
    }
    FormulaPtr phi_shadow = rename_formula(s.matrix, renaming);

    TseitinQuartic G = tseitin_quartic(phi_shadow, fresh);

    Polynomial dist;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        Polynomial diff = Polynomial::variable(xs[i]) - Polynomial::variable(shadow[i]);
        dist = dist + diff * diff;
    }

    Lemma64Input li;
    li.univ = xs;
    li.exist = exist_vars;
    li.exist.insert(li.exist.end(), G.fresh_vars.begin(), G.fresh_vars.end());
    li.g_poly = G.equation;
    li.p_poly = dist;
    li.eps_power = 2;
    Lemma64Result lr = lemma64_to_strict(li, fresh, cfg, limits);
    out.sentence = lr.sentence;
    out.info = lr.info;

    // Testable: forall eps, X . exists X~, Y :
    //   eps < thr \/ (|X-X~|^2 <= eps^2 /\ eps^2 - |X-X~|^2 <= E^2 /\ phi(X~,Y))
    std::string cthr = fresh.fresh("_c");
    std::string cesq = fresh.fresh("_c");
    Polynomial eps_p = Polynomial::variable(lr.eps_var);
    Polynomial eps_sq = eps_p * eps_p;
    FormulaPtr t_matrix = Formula::disj(
        {Formula::atom(eps_p - Polynomial::variable(cthr), Rel::LT),
         Formula::conj({Formula::atom(dist - eps_sq, Rel::LE),
                        Formula::atom(eps_sq - dist - Polynomial::variable(cesq), Rel::LE),
                        phi_shadow})});
    std::vector<std::string> univ{lr.eps_var};
    univ.insert(univ.end(), xs.begin(), xs.end());
    std::vector<std::string> exist = exist_vars;
    exist.push_back(cthr);
    exist.push_back(cesq);
    out.testable.blocks = {QuantifierBlock{Quant::Forall, univ, {}},
                           QuantifierBlock{Quant::Exists, exist, {}}};
    out.testable.matrix = t_matrix;
    out.probe_hints.axes[cthr] = pinned_axis(lr.eps_threshold);
    out.probe_hints.axes[cesq] = pinned_axis(lr.slack_bound_sq);
    return out;
}

HausdorffInstance erd_to_hausdorff(const SemiAlgebraicSet& A, const SemiAlgebraicSet& B) {
    if (A.ambient_dim != B.ambient_dim)
        throw Error(Error::Kind::DimensionMismatch, "ERD requires equal ambient dimensions");
    auto lift = [](const SemiAlgebraicSet& S, const BigInt& pin) {
        SemiAlgebraicSet out = S;
        out.ambient_dim += 1;
        std::string extra = "x" + std::to_string(out.ambient_dim);
        // avoid collision with existing names
        FreshCtx fresh(S.var_names);
        if (std::find(S.var_names.begin(), S.var_names.end(), extra) != S.var_names.end())
            extra = fresh.fresh("_w");
        out.var_names.push_back(extra);
        out.defining = Formula::conj(
            {S.defining,
             Formula::atom(Polynomial::variable(extra) - Polynomial::constant(pin), Rel::EQ)});
        return out;
    };
    HausdorffInstance h;
    h.A = lift(A, 0);
    h.B = lift(B, 1);
    h.t = Rational(1);
    h.directed = true;
    h.meta["reduction"] = "erd_shift";
    return h;
}

// ---------------------------------------------------------------------------

HausdorffInstance encode_hardness(const PrenexSentence& s, const BoundConfig& cfg,
                                  const PipelineLimits& limits) {
    PipelineOutput expanded = expand_counterexamples(s, cfg, limits);
    const PrenexSentence& psi_prime = expanded.sentence;
    std::vector<std::string> xs = psi_prime.blocks[0].vars;
    std::vector<std::string> ys = psi_prime.blocks[1].vars;
    std::size_t n = xs.size(), m = ys.size();

    // psi := psi' \/ /\ X_i = 0  (keeps A non-empty)
    std::vector<FormulaPtr> zero_atoms;
    for (const auto& x : xs)
        zero_atoms.push_back(Formula::atom(Polynomial::variable(x), Rel::EQ));
    FormulaPtr psi = Formula::disj({psi_prime.matrix, Formula::conj(std::move(zero_atoms))});

    FreshCtx fresh;
    fresh.reserve_all(xs);
    fresh.reserve_all(ys);

    HausdorffInstance h;
    h.t = Rational(m);
    h.directed = false;

    // N from the open-ball radius r of the counterexample sentence
    //   exists r, X . forall X~, Y : |X - X~|^2 < r^2 => !psi(X~, Y)
    // via the epsilon lower bound r >= 2^(-L^(beta^4 n (n+m))), choosing the
    // smallest N with r * 2^(2^N) > m.
    BigInt L_r;
    {
        std::vector<std::string> xt;
        std::map<std::string, std::string> ren;
        FreshCtx f2;
        f2.reserve_all(xs);
        f2.reserve_all(ys);
        for (const auto& x : xs) {
            xt.push_back(f2.fresh("_x"));
            ren[x] = xt.back();
        }
        Polynomial dist;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            Polynomial diff = Polynomial::variable(xs[i]) - Polynomial::variable(xt[i]);
            dist = dist + diff * diff;
        }
        std::string r = f2.fresh("_r");
        Polynomial r_sq = Polynomial::variable(r) * Polynomial::variable(r);
        FormulaPtr ball_matrix = Formula::disj(
            {Formula::atom(dist - r_sq, Rel::GE),
             push_negations(Formula::negate(rename_formula(psi, ren)))});
        L_r = formula_length(ball_matrix);
    }
    h.meta["L_r"] = L_r.str();
    BigInt e = pow_big(cfg.beta, 4) * BigInt(n) * (BigInt(n) + BigInt(m));
    BigInt n_faithful = ceil_log2(e * bound_log(L_r) + ceil_log2(BigInt(m) + 1) + 2);
    std::map<std::string, std::string> info;
    unsigned Nh = to_exponent(limits.apply(n_faithful, "N_hard", info), limits);
    for (const auto& [k, v] : info) h.meta[k] = v;
    for (const auto& [k, v] : expanded.info) h.meta["expand_" + k] = v;
    h.meta["u_encoding"] = "chi";
    h.meta["t"] = Rational(m).str();

    // hard chain u (fresh, distinct from the inner chain inside psi)
    std::vector<std::string> hard_chain;
    for (unsigned i = 0; i <= Nh; ++i) hard_chain.push_back(fresh.fresh("_h"));
    std::string uN = hard_chain.back();

    // A := { (x, y, u) : chi(u) /\ psi(u_N x, y) /\ boxes }
    FormulaPtr psi_scaled = psi;
    for (const auto& x : xs)
        psi_scaled = substitute_in_formula(psi_scaled, x,
                                           Polynomial::variable(uN) * Polynomial::variable(x));
    std::vector<FormulaPtr> a_parts{chi_over(hard_chain), psi_scaled};
    std::vector<FormulaPtr> box_parts;
    for (const auto& x : xs) {
        // x in [-C, C] iff (u_N x)^2 <= 1
        Polynomial ux = Polynomial::variable(uN) * Polynomial::variable(x);
        box_parts.push_back(Formula::atom(ux * ux - Polynomial::constant(1), Rel::LE));
    }
    for (const auto& y : ys) {
        Polynomial yp = Polynomial::variable(y);
        box_parts.push_back(Formula::atom(yp * yp - Polynomial::constant(1), Rel::LE));
    }
    for (const auto& p : box_parts) a_parts.push_back(p);

    std::vector<std::string> ambient = xs;
    ambient.insert(ambient.end(), ys.begin(), ys.end());
    ambient.insert(ambient.end(), hard_chain.begin(), hard_chain.end());

    h.A.ambient_dim = static_cast<unsigned>(ambient.size());
    h.A.var_names = ambient;
    h.A.defining = Formula::conj(a_parts);

    // B := [-C,C]^n x {0}^m x chi-coordinates
    std::vector<FormulaPtr> b_parts{chi_over(hard_chain)};
    for (const auto& p : box_parts) b_parts.push_back(p);
    for (const auto& y : ys)
        b_parts.push_back(Formula::atom(Polynomial::variable(y), Rel::EQ));
    h.B.ambient_dim = h.A.ambient_dim;
    h.B.var_names = ambient;
    h.B.defining = Formula::conj(b_parts);
    return h;
}

HausdorffInstance encode_hardness_simple(const PrenexSentence& s, SimpleVariant variant,
                                         const BoundConfig& cfg, const PipelineLimits& limits) {
    HausdorffInstance h = encode_hardness(s, cfg, limits);
    auto flatten = [&](SemiAlgebraicSet& S, const std::string& tag) {
        FreshCtx fresh(S.var_names);
        if (variant == SimpleVariant::QuadraticSystem) {
            TseitinSystem sys = tseitin_quadratic(S.defining, fresh);
            std::vector<FormulaPtr> eqs;
            for (const auto& e : sys.equations) eqs.push_back(Formula::atom(e, Rel::EQ));
            S.defining = eqs.size() == 1 ? eqs[0] : Formula::conj(std::move(eqs));
            for (const auto& v : sys.fresh_vars) S.var_names.push_back(v);
            S.ambient_dim += static_cast<unsigned>(sys.fresh_vars.size());
            h.meta[tag + "_extra_dims"] = std::to_string(sys.fresh_vars.size());
        } else {
            TseitinQuartic q = tseitin_quartic(S.defining, fresh);
            S.defining = Formula::atom(q.equation, Rel::EQ);
            for (const auto& v : q.fresh_vars) S.var_names.push_back(v);
            S.ambient_dim += static_cast<unsigned>(q.fresh_vars.size());
            h.meta[tag + "_extra_dims"] = std::to_string(q.fresh_vars.size());
        }
    };
    flatten(h.A, "A");
    flatten(h.B, "B");
    h.meta["variant"] =
        variant == SimpleVariant::QuadraticSystem ? "quadratic-system" : "single-quartic";
    return h;
}

}  // namespace sar
