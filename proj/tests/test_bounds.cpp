#include "doctest.h"

#include "sar/bounds.hpp"
#include "sar/decide.hpp"
#include "sar/parse.hpp"

#include <random>

using namespace sar;

namespace {
BoundConfig cfg(long a, long b) { return BoundConfig(BigInt(a), BigInt(b)); }
Polynomial poly(const std::string& text) { return parse_formula(text + " = 0")->as_atom().lhs; }
}  // namespace

TEST_CASE("BoundConfig invariants") {
    CHECK_THROWS_AS(cfg(8, 16), Error);   // beta < 32
    CHECK_THROWS_AS(cfg(64, 32), Error);  // beta < alpha
    CHECK_NOTHROW(cfg(8, 32));
    CHECK_NOTHROW(cfg(64, 64));
}

TEST_CASE("qe_size_bound hand values") {
    // L=2, k=1, n1=1, m=1, alpha=2 -> 2^(2^2*1*1) = 16
    Tower t = qe_size_bound(2, {BigInt(1)}, 1, cfg(2, 32));
    CHECK(t.materialize(64).value() == 16);

    // monotone in L and in each block size
    auto v = [&](long L, long n1) {
        return qe_size_bound(L, {BigInt(n1)}, 1, cfg(2, 32)).materialize(4096).value();
    };
    CHECK(v(2, 1) < v(3, 1));
    CHECK(v(2, 1) < v(2, 2));
    CHECK(v(3, 2) < v(4, 2));
    // two blocks: alpha^(k+1) with k=2
    Tower t2 = qe_size_bound(2, {BigInt(1), BigInt(1)}, 1, cfg(2, 32));
    CHECK(t2.materialize(64).value() == 256);  // 2^(2^3)
}

TEST_CASE("ball_radius_bound") {
    // L=4, n=1 -> 2^(4^8) = 2^65536
    Tower t = ball_radius_bound(4, 1);
    CHECK(tower_compare(t, Tower::pow2(Tower::from_int(65536))) == 0);
    CHECK_THROWS_AS(ball_radius_bound(3, 1), Error);  // requires L >= 4
    // monotone in n and L
    CHECK(tower_le(ball_radius_bound(4, 1), ball_radius_bound(4, 2)));
    CHECK(tower_le(ball_radius_bound(4, 2), ball_radius_bound(5, 2)));
    CHECK_FALSE(tower_le(ball_radius_bound(5, 2), ball_radius_bound(4, 2)));
}

TEST_CASE("epsilon_lower_bound stays symbolic and ordered") {
    // k=1, n1=1, beta=32, L=2: 2^(2^32768), held symbolically
    Tower t = epsilon_lower_bound(2, {BigInt(1)}, cfg(1, 32));
    CHECK_FALSE(t.materialize(1u << 20).has_value());
    // reciprocal ordering: larger L -> larger denominator -> smaller eps*
    Tower t3 = epsilon_lower_bound(3, {BigInt(1)}, cfg(1, 32));
    CHECK(tower_le(t, t3));
    CHECK_FALSE(tower_le(t3, t));
    // monotone in k (extra block)
    Tower tk2 = epsilon_lower_bound(2, {BigInt(1), BigInt(1)}, cfg(1, 32));
    CHECK(tower_le(t, tk2));
}

TEST_CASE("universal_range_exponent hand values and monotonicity") {
    // alpha=1, L=2, n=1, m=1 -> N = 8
    CHECK(universal_range_exponent(1, 1, 2, cfg(1, 32)) == 8);
    // quadratic growth in n at fixed L, m, alpha
    BigInt n1 = universal_range_exponent(1, 1, 2, cfg(1, 32));
    BigInt n2 = universal_range_exponent(2, 1, 2, cfg(1, 32));
    BigInt n3 = universal_range_exponent(3, 1, 2, cfg(1, 32));
    CHECK(n2 == 4 * n1);
    CHECK(n3 == 9 * n1);
    // polynomial envelope: N <= 8*alpha^2*n^2*m*clog2(L)
    for (long L : {2, 5, 9})
        for (long n = 1; n <= 3; ++n)
            for (long m = 1; m <= 3; ++m) {
                BigInt N = universal_range_exponent(n, m, L, cfg(2, 32));
                CHECK(N <= BigInt(8 * 4) * ceil_log2(L) * n * n * m);
            }
}

TEST_CASE("existential_range_exponent hand values and monotonicity") {
    // alpha=1, L=2, n=1, m=1, N=8 -> M = 8*1*1*1*10*1 = 80
    CHECK(existential_range_exponent(1, 1, 8, 2, cfg(1, 32)) == 80);
    // monotone in N
    CHECK(existential_range_exponent(1, 1, 8, 2, cfg(1, 32)) <
          existential_range_exponent(1, 1, 9, 2, cfg(1, 32)));
}

TEST_CASE("bound operations: monotonicity lattice") {
    BoundConfig c = cfg(2, 32);
    std::vector<long> ls{2, 3, 7}, ns{1, 2}, ms{1, 2};
    for (std::size_t i = 0; i + 1 < ls.size(); ++i)
        for (long n : ns)
            for (long m : ms) {
                CHECK(universal_range_exponent(n, m, ls[i], c) <=
                      universal_range_exponent(n, m, ls[i + 1], c));
                CHECK(existential_range_exponent(n, m, 4, ls[i], c) <=
                      existential_range_exponent(n, m, 4, ls[i + 1], c));
                CHECK(tower_le(qe_size_bound(ls[i], {BigInt(n)}, m, c),
                               qe_size_bound(ls[i + 1], {BigInt(n)}, m, c)));
            }
    for (long n : ns)
        for (long m : ms) {
            CHECK(universal_range_exponent(n, m, 2, c) <= universal_range_exponent(n + 1, m, 2, c));
            CHECK(universal_range_exponent(n, m, 2, c) <= universal_range_exponent(n, m + 1, 2, c));
        }
}

TEST_CASE("compact_poly_bound_exponent") {
    BoundConfig c = cfg(1, 32);
    // constant polynomial 5: direct path gives K = 2 (2^(2^2) = 16 >= 5)
    CHECK(compact_poly_bound_exponent(Polynomial::constant(5), 0, 1, c) == 2);
    // p = x on [-2, 2] (N = 0): direct interval bound 2 <= 2^(2^1)
    BigInt k = compact_poly_bound_exponent(poly("x"), 0, 1, c);
    CHECK(k <= 1);
    CHECK(poly_sup_bound(poly("x"), 2) <= 4);  // cross-check 2 <= 2^(2^1)
    // monotone in N
    Polynomial p = poly("3*x^2 - x + 1");
    BigInt k0 = compact_poly_bound_exponent(p, 0, 1, c);
    BigInt k1 = compact_poly_bound_exponent(p, 1, 1, c);
    BigInt k2 = compact_poly_bound_exponent(p, 2, 1, c);
    CHECK(k0 <= k1);
    CHECK(k1 <= k2);
    // the bound actually dominates max |p| on the box (interval oracle)
    for (long N = 0; N <= 3; ++N) {
        BigInt K = compact_poly_bound_exponent(p, N, 1, c);
        BigInt C = BigInt(1) << (1u << static_cast<unsigned>(N));
        BigInt E_exp = BigInt(1) << K.convert_to<unsigned>();
        // E = 2^(2^K) >= sup bound; compare exponents: sup <= 2^E_exp
        CHECK(ceil_log2(poly_sup_bound(p, C)) <= E_exp);
    }
}

TEST_CASE("interval cross-check: sampled max |p| <= materialized E") {
    std::mt19937_64 rng(424242);
    BoundConfig c = cfg(1, 32);
    for (int trial = 0; trial < 30; ++trial) {
        Polynomial p;
        int terms = 1 + static_cast<int>(rng() % 4);
        for (int t = 0; t < terms; ++t) {
            long coef = static_cast<long>(rng() % 17) - 8;
            Monomial m;
            unsigned e1 = static_cast<unsigned>(rng() % 3);
            unsigned e2 = static_cast<unsigned>(rng() % 2);
            if (e1) m.push_back({"x", e1});
            if (e2) m.push_back({"y", e2});
            p = p + Polynomial::monomial(BigInt(coef), m);
        }
        unsigned N = static_cast<unsigned>(rng() % 2);  // box 2 or 4
        BigInt K = compact_poly_bound_exponent(p, N, 2, c);
        BigInt C = BigInt(1) << (1u << N);
        Rational worst = 0;
        for (int i = -4; i <= 4; ++i)
            for (int j = -4; j <= 4; ++j) {
                Rational x = Rational(i) * Rational(C) / 4;
                Rational y = Rational(j) * Rational(C) / 4;
                Rational v = abs_rat(p.eval({{"x", x}, {"y", y}}));
                if (v > worst) worst = v;
            }
        // sampled max <= 2^(2^K) whenever it fits the budget
        if (K <= 24) {
            Rational E = Rational(BigInt(1) << (std::size_t(1) << K.convert_to<unsigned>()));
            CHECK(worst <= E);
        }
    }
}
