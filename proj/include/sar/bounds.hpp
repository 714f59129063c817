#pragma once

#include "sar/polynomial.hpp"
#include "sar/tower.hpp"

#include <vector>

namespace sar {

// Constants of the quantitative bound calculus. The source results only
// assert existence of alpha and beta; the artifact pins overridable defaults.
struct BoundConfig {
    BigInt alpha = 8;
    BigInt beta = 32;

    BoundConfig() = default;
    BoundConfig(const BigInt& a, const BigInt& b) : alpha(a), beta(b) { validate(); }
    void validate() const {
        if (alpha < 1) throw Error(Error::Kind::Precondition, "alpha must be >= 1");
        if (beta < 32 || beta < alpha)
            throw Error(Error::Kind::Precondition, "beta must be >= max(32, alpha)");
    }
};

// log(L) in the proof formulas, computed as ceil(log2 L).
BigInt bound_log(const BigInt& L);

// Size bound for quantifier elimination on k blocks of sizes n_1..n_k with m
// free variables: L^(alpha^(k+1) * n_1*...*n_k * m).
Tower qe_size_bound(const BigInt& L, const std::vector<BigInt>& block_sizes, const BigInt& m,
                    const BoundConfig& cfg);

// Ball bound: a non-empty semi-algebraic set of complexity L >= 4 in R^n has
// a point within 2^(L^(8n)) of the origin.
Tower ball_radius_bound(const BigInt& L, const BigInt& n);

// Denominator tower 2^(L^(beta^(k+2) * n_1*...*n_k)); the guaranteed epsilon*
// is its reciprocal.
Tower epsilon_lower_bound(const BigInt& L, const std::vector<BigInt>& block_sizes,
                          const BoundConfig& cfg);

// N = 8 * alpha^2 * log(L) * n^2 * m; C := 2^(2^N) bounds the universals.
BigInt universal_range_exponent(const BigInt& n, const BigInt& m, const BigInt& L,
                                const BoundConfig& cfg);

// M = 8 * alpha^3 * log(L) * n * (n+N+1) * m; D := 2^(2^M) bounds the
// existentials of a forall-strict sentence.
BigInt existential_range_exponent(const BigInt& n, const BigInt& m, const BigInt& N,
                                  const BigInt& L, const BoundConfig& cfg);

// K with E = 2^(2^K) >= max |p| over [-2^(2^N), 2^(2^N)]^n. Uses the proof
// formula (with |psi| bounded via qe_size_bound); when the box materializes,
// a direct interval bound is taken if smaller.
BigInt compact_poly_bound_exponent(const Polynomial& p, const BigInt& N, const BigInt& n,
                                   const BoundConfig& cfg);

// Sum-of-absolute-coefficients interval bound: max |p| <= this on [-C, C]^n
// for C >= 1.
BigInt poly_sup_bound(const Polynomial& p, const BigInt& C);

}  // namespace sar
