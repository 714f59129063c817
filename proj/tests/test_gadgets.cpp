#include "doctest.h"

#include "sar/decide.hpp"
#include "sar/gadgets.hpp"
#include "sar/normalize.hpp"
#include "sar/parse.hpp"

#include <cmath>
#include <random>

using namespace sar;

namespace {

std::mt19937_64 rng(31007);

Rational pow2_exact(int e) {
    return e >= 0 ? Rational(BigInt(1) << e) : Rational(1, BigInt(1) << (-e));
}

// Interval arithmetic over rationals (monotone ops only), for the
// chi-uniqueness subdivision proof.
struct IR {
    Rational lo, hi;
};
IR iadd(IR a, IR b) { return {a.lo + b.lo, a.hi + b.hi}; }
IR isub(IR a, IR b) { return {a.lo - b.hi, a.hi - b.lo}; }
IR imul(IR a, IR b) {
    Rational c[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
    IR r{c[0], c[0]};
    for (int i = 1; i < 4; ++i) {
        r.lo = std::min(r.lo, c[i]);
        r.hi = std::max(r.hi, c[i]);
    }
    return r;
}
bool excludes_zero(IR a) { return a.lo > 0 || a.hi < 0; }

std::map<std::string, Rational> pt2(Rational x, Rational y) {
    return {{"x", x}, {"y", y}};
}

std::mt19937_64& gen() { return rng; }
Rational rnd_rat(long span) {
    return Rational(static_cast<long>(gen()() % (2 * span + 1)) - span,
                    static_cast<long>(gen()() % 4) + 1);
}

// Strict atoms with near-zero values make inverse-square-root witnesses
// numerically wild; equivalence sampling keeps away from those boundaries.
bool point_is_robust(const FormulaPtr& f, const std::map<std::string, Rational>& pt) {
    if (f->kind() == Formula::Kind::Atom) {
        const Atom& a = f->as_atom();
        if (a.rel == Rel::LT || a.rel == Rel::GT || a.rel == Rel::NE) {
            Rational v = a.lhs.eval(pt);
            if (abs_rat(v) < Rational(1, 100)) return false;
        }
        return true;
    }
    for (const auto& k : f->kids())
        if (!point_is_robust(k, pt)) return false;
    return true;
}

FormulaPtr random_qff(int depth) {
    const char* names[] = {"x", "y"};
    if (depth == 0 || gen()() % 3 == 0) {
        Polynomial p;
        int terms = 1 + static_cast<int>(gen()() % 3);
        for (int t = 0; t < terms; ++t) {
            long c = static_cast<long>(gen()() % 9) - 4;
            if (c == 0) c = 1;
            Monomial m;
            for (int v = 0; v < 2; ++v) {
                unsigned e = static_cast<unsigned>(gen()() % 3);
                if (e > 0) m.push_back({names[v], e});
            }
            p = p + Polynomial::monomial(BigInt(c), m);
        }
        if (p.is_zero()) p = Polynomial::variable("x") - Polynomial::constant(1);
        Rel rels[] = {Rel::LT, Rel::LE, Rel::EQ, Rel::NE, Rel::GE, Rel::GT};
        return Formula::atom(p, rels[gen()() % 6]);
    }
    if (gen()() % 2 == 0)
        return Formula::conj({random_qff(depth - 1), random_qff(depth - 1)});
    return Formula::disj({random_qff(depth - 1), random_qff(depth - 1)});
}

}  // namespace

TEST_CASE("chi: structure and exact solutions") {
    // N = 0: single atom 2*u0 - 1 = 0, solution 1/2
    auto c0 = chi(0);
    REQUIRE(c0->kind() == Formula::Kind::Atom);
    CHECK(eval_formula(c0, {{"u0", Rational(1, 2)}}));
    CHECK_FALSE(eval_formula(c0, {{"u0", Rational(1, 4)}}));

    // N = 2: solution (1/2, 1/4, 1/16)
    auto sol2 = chi_solution(2);
    CHECK(sol2 == std::vector<Rational>{Rational(1, 2), Rational(1, 4), Rational(1, 16)});
    auto c2 = chi(2);
    CHECK(eval_formula(c2, {{"u0", sol2[0]}, {"u1", sol2[1]}, {"u2", sol2[2]}}));

    // N = 3: u3 = 2^(-8) = 1/256
    CHECK(chi_solution(3)[3] == Rational(1, 256));

    // u_i = 2^(-2^i) exactly, for N <= 6
    for (unsigned n = 0; n <= 6; ++n) {
        auto sol = chi_solution(n);
        for (unsigned i = 0; i <= n; ++i) CHECK(sol[i] == pow2_exact(-(1 << i)));
    }

    // dyadic chain matches for large N without materializing
    auto dyn = chi_solution_dyadic(200);
    CHECK(dyn[200].mantissa() == 1);
    CHECK(dyn[200].exponent() == -(BigInt(1) << 200));
}

TEST_CASE("chi uniqueness in [-1,1]^(N+1) by exact interval subdivision") {
    // Branch-and-prune on [-1,1]^(N+1): a box survives only if no chain
    // equation's interval excludes zero. The survivors must all contain the
    // known solution point.
    for (unsigned n = 1; n <= 4; ++n) {
        auto sol = chi_solution(n);
        std::vector<std::vector<IR>> work{std::vector<IR>(n + 1, IR{Rational(-1), Rational(1)})};
        std::vector<std::vector<IR>> survivors;
        // depth counts single-coordinate splits; (n+1)*8 splits shrink every
        // coordinate of a surviving box to width 2^-7
        int depth_limit = static_cast<int>(n + 1) * 8;
        std::vector<std::pair<std::vector<IR>, int>> stack;
        stack.push_back({work[0], 0});
        while (!stack.empty()) {
            auto [box, depth] = stack.back();
            stack.pop_back();
            // prune via 2*u0 - 1 and u_i - u_{i-1}^2
            IR head = isub(imul(IR{Rational(2), Rational(2)}, box[0]), IR{Rational(1), Rational(1)});
            bool pruned = excludes_zero(head);
            for (unsigned i = 1; !pruned && i <= n; ++i)
                pruned = excludes_zero(isub(box[i], imul(box[i - 1], box[i - 1])));
            if (pruned) continue;
            if (depth >= depth_limit) {
                survivors.push_back(box);
                continue;
            }
            // split the widest coordinate
            unsigned widest = 0;
            Rational w = box[0].hi - box[0].lo;
            for (unsigned i = 1; i <= n; ++i)
                if (box[i].hi - box[i].lo > w) {
                    w = box[i].hi - box[i].lo;
                    widest = i;
                }
            Rational mid = (box[widest].lo + box[widest].hi) / 2;
            auto left = box, right = box;
            left[widest].hi = mid;
            right[widest].lo = mid;
            stack.push_back({left, depth + 1});
            stack.push_back({right, depth + 1});
        }
        REQUIRE(!survivors.empty());
        // every surviving box clusters around the known solution: uniqueness
        Rational max_width(1, 64);
        for (const auto& box : survivors)
            for (unsigned i = 0; i <= n; ++i) {
                CHECK(box[i].lo <= sol[i] + max_width);
                CHECK(box[i].hi >= sol[i] - max_width);
            }
    }
}

TEST_CASE("chi print/parse round trip") {
    auto c = chi(2);
    CHECK(structurally_equal(parse_formula(print_formula(c)), c));
}

TEST_CASE("strengthen_atom") {
    FreshCtx ctx;
    Atom a{Polynomial::variable("x"), Rel::LT};
    auto [sa, z] = strengthen_atom(a, ctx);
    CHECK(sa.rel == Rel::LT);

    // x = -1, z = 2: z^2 x + 1 = -3 < 0
    CHECK(eval_formula(Formula::atom(sa), {{"x", Rational(-1)}, {z, Rational(2)}}));
    // x = 0: unsatisfiable for all z (atom value is 1)
    for (int i = -8; i <= 8; ++i)
        CHECK_FALSE(eval_formula(Formula::atom(sa), {{"x", Rational(0)}, {z, Rational(i, 2)}}));
    // z restricted to [-1,1], x = -1/2: z^2 (-1/2) + 1 >= 1/2 > 0 on a sweep
    for (int i = -16; i <= 16; ++i) {
        Rational zv(i, 16);
        Rational val = sa.lhs.eval({{"x", Rational(-1, 2)}, {z, zv}});
        CHECK(val >= Rational(1, 2));
    }
    CHECK_THROWS_AS(strengthen_atom(Atom{Polynomial::variable("x"), Rel::LE}, ctx), Error);
}

TEST_CASE("strengthen_atom: unbounded-Z equivalence on random inputs") {
    FreshCtx ctx;
    Atom a{parse_formula("x^2 - 2*x - 1 < 0")->as_atom()};
    auto [sa, z] = strengthen_atom(a, ctx);
    for (int i = 0; i < 100; ++i) {
        Rational x = rnd_rat(12);
        Rational p = a.lhs.eval({{"x", x}});
        bool direct = p < 0;
        // candidate z values: if P(x) = -num/den < 0 then z^2 must exceed
        // den/num; build one exact candidate z = ceil(sqrt(den/num)) + 1.
        bool witnessed = false;
        if (p < 0) {
            Rational need = -1 / p;  // z^2 > need
            BigInt zc = 1;
            while (Rational(zc * zc) <= need) ++zc;
            Rational val = sa.lhs.eval({{"x", x}, {z, Rational(zc)}});
            witnessed = val < 0;
        }
        CHECK(direct == witnessed);
    }
}

TEST_CASE("scale_block: sign preservation at mapped sample points") {
    // forall x : x < 0 over [-2^2^1, 2^2^1], chain u0..u1, K = 1, e = 1.
    PrenexSentence s;
    QuantifierBlock xb{Quant::Forall, {"x"}, {}};
    xb.range.bound = Tower::pow2pow2(1);
    QuantifierBlock ub{Quant::Exists, {"u0", "u1"}, {}};
    ub.range.bound = Rational(1);
    s.blocks = {xb, ub};
    s.matrix = Formula::conj({chi_over({"u0", "u1"}), parse_formula("x < 0")});
    PrenexSentence scaled = scale_block(s, 0, 1, 1, 1);
    REQUIRE(!scaled.blocks[0].range.is_all_reals());
    CHECK(std::get<Rational>(*scaled.blocks[0].range.bound) == 1);

    // the scaled matrix's payload atom at (x_scaled = x/C, chi solution) has
    // the sign of x at 20 paired sample points
    auto sol = chi_solution(1);  // C = 2^2 = 4
    Rational C(4);
    auto payload = scaled.matrix->kids().back();
    for (int i = 1; i <= 20; ++i) {
        Rational x(i % 2 == 0 ? i : -i, 3);
        std::map<std::string, Rational> pt{
            {"x", x / C}, {"u0", sol[0]}, {"u1", sol[1]}};
        CHECK(eval_formula(payload, pt) == (x < 0));
    }

    // identity path
    PrenexSentence id = s;
    id.blocks[0].range.bound = Rational(1);
    CHECK(structurally_equal(scale_block(id, 0, 1, 0, 1), id));

    // missing chi conjunct
    PrenexSentence bad = s;
    bad.matrix = parse_formula("x < 0");
    CHECK_THROWS_AS(scale_block(bad, 0, 1, 1, 1), Error);
    CHECK_THROWS_AS(scale_block(s, 0, 0, 1, 1), Error);  // K < e
}

TEST_CASE("scale_matrix division elimination uses the chain product") {
    // u_K / u_N = prod_{j=N}^{K-1} u_j at the chi solution; check the scaled
    // atom evaluates with exactly that factor: K = 3, N = 1, atom x < 0.
    std::vector<std::string> chain{"u0", "u1", "u2", "u3"};
    auto scaled = scale_matrix(parse_formula("x < 0"), {{"x", 1u}}, chain, 3, 1);
    auto sol = chi_solution(3);
    // x_orig = 12 -> x_scaled = 12 * u1; expect atom value u3/u1 * 12 > 0
    std::map<std::string, Rational> pt{{"x", Rational(12) * sol[1]},
                                       {"u0", sol[0]},
                                       {"u1", sol[1]},
                                       {"u2", sol[2]},
                                       {"u3", sol[3]}};
    Rational v = scaled->as_atom().lhs.eval(pt);
    CHECK(v == sol[3] * Rational(12));  // u_3 * x_orig
    CHECK(v > 0);
}

TEST_CASE("tseitin_quadratic: examples") {
    // f = (x = 0): single equation, no fresh vars
    auto t1 = tseitin_quadratic(parse_formula("x = 0"));
    CHECK(t1.equations.size() == 1);
    CHECK(t1.fresh_vars.empty());

    // f = (x < 0): all equations degree <= 2; witness solves them for x < 0
    auto t2 = tseitin_quadratic(parse_formula("x < 0"));
    for (const auto& e : t2.equations) CHECK(e.total_degree() <= 2);
    for (double x : {-4.0, -1.0, -0.25}) {
        auto w = eval_witness(t2.witness, {{"x", x}});
        for (const auto& e : t2.equations) CHECK(std::abs(e.eval_double(w)) < 1e-12);
    }
    // no witness at x >= 0: residuals stay bounded away from zero
    for (double x : {0.0, 0.5, 2.0}) {
        auto w = eval_witness(t2.witness, {{"x", x}});
        double worst = 0;
        for (const auto& e : t2.equations) worst = std::max(worst, std::abs(e.eval_double(w)));
        CHECK(worst > 1e-6);
    }

    // f = (x = 0) | (y = 0): product encoding; membership on a 5x5 grid
    auto t3 = tseitin_quadratic(parse_formula("x = 0 | y = 0"));
    for (const auto& e : t3.equations) CHECK(e.total_degree() <= 2);
    for (int xi = -2; xi <= 2; ++xi)
        for (int yi = -2; yi <= 2; ++yi) {
            auto w = eval_witness(t3.witness,
                                  {{"x", static_cast<double>(xi)}, {"y", static_cast<double>(yi)}});
            double worst = 0;
            for (const auto& e : t3.equations) worst = std::max(worst, std::abs(e.eval_double(w)));
            bool direct = (xi == 0) || (yi == 0);
            CHECK((worst < 1e-12) == direct);
        }
}

TEST_CASE("tseitin_quartic: examples") {
    // f = (x = 0): F = x^2
    auto q1 = tseitin_quartic(parse_formula("x = 0"));
    CHECK(q1.equation == Polynomial::variable("x") * Polynomial::variable("x"));
    CHECK(q1.equation.total_degree() <= 4);

    // membership equivalence for (x < 0) | (y = 0) on a 5x5 grid
    auto q2 = tseitin_quartic(parse_formula("x < 0 | y = 0"));
    CHECK(q2.equation.total_degree() <= 4);
    for (int xi = -2; xi <= 2; ++xi)
        for (int yi = -2; yi <= 2; ++yi) {
            auto w = eval_witness(q2.witness,
                                  {{"x", static_cast<double>(xi)}, {"y", static_cast<double>(yi)}});
            bool direct = (xi < 0) || (yi == 0);
            CHECK((std::abs(q2.equation.eval_double(w)) < 1e-12) == direct);
        }
}

TEST_CASE("tseitin: random formulas, degrees, equivalence, size ratio") {
    double worst_ratio = 0;
    for (int i = 0; i < 100; ++i) {
        auto f = random_qff(2);
        auto sys = tseitin_quadratic(f);
        for (const auto& e : sys.equations) CHECK(e.total_degree() <= 2);
        auto quartic = tseitin_quartic(f);
        CHECK(quartic.equation.total_degree() <= 4);

        BigInt in_len = formula_length(f);
        BigInt out_len = 0;
        for (const auto& e : sys.equations) out_len += poly_length(e, 1);
        worst_ratio = std::max(
            worst_ratio, out_len.convert_to<double>() / std::max(1.0, in_len.convert_to<double>()));

        int done = 0;
        for (int j = 0; j < 200 && done < 20; ++j) {
            Rational x = rnd_rat(5), y = rnd_rat(5);
            if (!point_is_robust(f, pt2(x, y))) continue;
            ++done;
            bool direct = eval_formula(f, pt2(x, y));
            std::map<std::string, double> p0{{"x", x.convert_to<double>()},
                                             {"y", y.convert_to<double>()}};
            auto w = eval_witness(sys.witness, p0);
            double worst = witness_residual(sys.equations, w);
            if (direct)
                CHECK(worst < 1e-12);
            else
                CHECK(worst > 1e-9);
        }
    }
    MESSAGE("tseitin quadratic output/input size ratio (measured): ", worst_ratio);
    CHECK(worst_ratio < 60.0);
}
