#include "doctest.h"

#include "sar/formula.hpp"
#include "sar/parse.hpp"

#include <random>

using namespace sar;

namespace {

std::mt19937_64 rng(77001);

FormulaPtr random_formula(int depth, int vars) {
    const char* names[] = {"a", "b", "c", "d"};
    if (depth == 0 || rng() % 3 == 0) {
        Polynomial p;
        int terms = 1 + static_cast<int>(rng() % 3);
        for (int t = 0; t < terms; ++t) {
            long c = static_cast<long>(rng() % 15) - 7;
            if (c == 0) c = 1;
            Monomial m;
            for (int v = 0; v < vars; ++v) {
                unsigned e = static_cast<unsigned>(rng() % 3);
                if (e > 0) m.push_back({names[v], e});
            }
            p = p + Polynomial::monomial(BigInt(c), m);
        }
        if (p.is_zero()) p = Polynomial::variable("a");
        Rel rels[] = {Rel::LT, Rel::LE, Rel::EQ, Rel::NE, Rel::GE, Rel::GT};
        return Formula::atom(p, rels[rng() % 6]);
    }
    switch (rng() % 3) {
        case 0: {
            std::vector<FormulaPtr> kids;
            int n = 2 + static_cast<int>(rng() % 2);
            for (int i = 0; i < n; ++i) kids.push_back(random_formula(depth - 1, vars));
            return Formula::conj(std::move(kids));
        }
        case 1: {
            std::vector<FormulaPtr> kids;
            int n = 2 + static_cast<int>(rng() % 2);
            for (int i = 0; i < n; ++i) kids.push_back(random_formula(depth - 1, vars));
            return Formula::disj(std::move(kids));
        }
        default:
            return Formula::negate(random_formula(depth - 1, vars));
    }
}

}  // namespace

TEST_CASE("parse_formula examples") {
    // the introduction's example sentence
    auto s = parse_sentence("forall x . exists y : x*y > 1");
    REQUIRE(s.blocks.size() == 2);
    CHECK(s.blocks[0].quant == Quant::Forall);
    CHECK(s.blocks[0].vars == std::vector<std::string>{"x"});
    CHECK(s.blocks[1].quant == Quant::Exists);
    REQUIRE(s.matrix->kind() == Formula::Kind::Atom);
    CHECK(s.matrix->as_atom().rel == Rel::GT);
    // normalized to x*y - 1 > 0
    auto expected = parse_formula("x*y - 1 > 0");
    CHECK(structurally_equal(s.matrix, expected));

    auto disk = parse_formula("x^2 + y^2 <= 1");
    CHECK(disk->kind() == Formula::Kind::Atom);
    CHECK(disk->as_atom().rel == Rel::LE);

    auto mixed = parse_formula("(x < 0) & !(y = 0)");
    REQUIRE(mixed->kind() == Formula::Kind::And);
    REQUIRE(mixed->kids().size() == 2);
    CHECK(mixed->kids()[0]->kind() == Formula::Kind::Atom);
    CHECK(mixed->kids()[1]->kind() == Formula::Kind::Not);
}

TEST_CASE("parse errors") {
    CHECK_THROWS_AS(parse_sentence("forall x, x : x > 0"), Error);       // duplicate var
    CHECK_THROWS_AS(parse_sentence("forall x : x + y > 0"), Error);      // unbound y
    CHECK_THROWS_AS(parse_formula("x <"), Error);                        // syntax
    CHECK_THROWS_AS(parse_formula("_t0 > 0"), Error);                    // reserved name
    CHECK_NOTHROW(parse_formula("_t0 > 0", ParseOptions{true}));
    // error message carries position
    try {
        parse_formula("x >\n  & y");
        FAIL("expected parse error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("2:") != std::string::npos);
    }
}

TEST_CASE("implication desugars to !A | B") {
    auto f = parse_formula("x > 0 => y > 0");
    auto expected = Formula::disj({Formula::negate(parse_formula("x > 0")), parse_formula("y > 0")});
    CHECK(structurally_equal(f, expected));
}

TEST_CASE("formula_length hand counts") {
    // "2x < 0", one variable: 1(<) + 1(0) + 2(coefficient 2 in binary) + 1(occurrence) = 5
    CHECK(formula_length(parse_formula("2*x < 0")) == 5);
    // "x < 0": coefficient 1 costs one bit, so 4
    CHECK(formula_length(parse_formula("x < 0")) == 4);
    // strict monotonicity under conjunction
    auto f1 = parse_formula("x < 0");
    auto f2 = parse_formula("x*y - 1 > 0");
    CHECK(formula_length(Formula::conj({f1, f2})) > formula_length(f1));
}

TEST_CASE("formula_length never decreases under wrapping") {
    for (int i = 0; i < 50; ++i) {
        auto f = random_formula(2, 2);
        CHECK(formula_length(Formula::negate(f)) >= formula_length(f));
        CHECK(formula_length(Formula::conj({f, f})) >= formula_length(f));
        CHECK(formula_length(Formula::disj({f, f})) >= formula_length(f));
    }
}

TEST_CASE("print/parse round trip is the identity on ASTs") {
    for (int i = 0; i < 500; ++i) {
        auto f = random_formula(3, 1 + static_cast<int>(rng() % 4));
        auto printed = print_formula(f);
        auto reparsed = parse_formula(printed);
        CHECK(structurally_equal(f, reparsed));
    }
    // sentences too
    auto s = parse_sentence("forall x in [-1, 1] . exists y, z in [-5/2, 5/2] : x*y > 1 | z <= 0");
    auto s2 = parse_sentence(print_sentence(s));
    CHECK(structurally_equal(s, s2));
    // tower-bounded block
    auto t = parse_sentence("forall x in [-2^2^8, 2^2^8] : x < 1");
    auto t2 = parse_sentence(print_sentence(t));
    CHECK(structurally_equal(t, t2));
}

TEST_CASE("print respects precedence") {
    auto f = Formula::disj({Formula::conj({parse_formula("x < 0"), parse_formula("y < 0")}),
                            parse_formula("z > 0")});
    auto g = Formula::conj({Formula::disj({parse_formula("x < 0"), parse_formula("y < 0")}),
                            parse_formula("z > 0")});
    CHECK(structurally_equal(parse_formula(print_formula(f)), f));
    CHECK(structurally_equal(parse_formula(print_formula(g)), g));
    CHECK(print_formula(g).find("(") != std::string::npos);  // Or inside And parenthesized
}

TEST_CASE("classify") {
    CHECK(classify(parse_formula("x < 0 | y > 0")) == QffClass::QFF_strict);
    CHECK(classify(parse_formula("x != 0")) == QffClass::QFF_strict);
    CHECK(classify(parse_formula("x <= 0 & y = 0")) == QffClass::QFF_nonstrict);
    CHECK(classify(parse_formula("!(x < 0)")) == QffClass::QFF);
    CHECK(classify(parse_formula("x < 0 & y = 0")) == QffClass::QFF);  // mixed
}

TEST_CASE("is_forall_strict") {
    CHECK(is_forall_strict(parse_sentence("forall x . exists y : x*y > 1")));
    CHECK_FALSE(is_forall_strict(parse_sentence("forall x . exists y : x + y = 0")));
    // the = atom has no universal variable
    CHECK(is_forall_strict(parse_sentence("forall x . exists y : (x < 0) | (y = 0)")));
    CHECK_THROWS_AS(is_forall_strict(parse_sentence("forall x . exists y : !(x < 0)")), Error);
}

TEST_CASE("free and bound variables") {
    auto f = parse_formula("x + y < 0");
    CHECK(f->free_vars() == std::vector<std::string>{"x", "y"});
    auto q = Formula::quantified(QuantifierBlock{Quant::Exists, {"y"}, {}}, f);
    CHECK(q->free_vars() == std::vector<std::string>{"x"});
}
