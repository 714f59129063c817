#include "sar/bounds.hpp"

#include "sar/formula.hpp"

namespace sar {

BigInt bound_log(const BigInt& L) {
    if (L < 2) throw Error(Error::Kind::Precondition, "bound formulas require L >= 2");
    return ceil_log2(L);
}

Tower qe_size_bound(const BigInt& L, const std::vector<BigInt>& block_sizes, const BigInt& m,
                    const BoundConfig& cfg) {
    cfg.validate();
    if (L < 2) throw Error(Error::Kind::Precondition, "qe_size_bound requires L >= 2");
    if (block_sizes.empty()) throw Error(Error::Kind::Precondition, "need at least one block");
    if (m < 1) throw Error(Error::Kind::Precondition, "free variable count must be >= 1");
    BigInt e = pow_big(cfg.alpha, BigInt(block_sizes.size()) + 1);
    for (const auto& n : block_sizes) {
        if (n < 1) throw Error(Error::Kind::Precondition, "block sizes must be >= 1");
        e *= n;
    }
    e *= m;
    return Tower::pow(Tower::from_int(L), e);
}

Tower ball_radius_bound(const BigInt& L, const BigInt& n) {
    if (L < 4)
        throw Error(Error::Kind::Precondition, "ball bound requires complexity L >= 4");
    if (n < 1) throw Error(Error::Kind::Precondition, "dimension must be >= 1");
    return Tower::pow2(Tower::pow(Tower::from_int(L), 8 * n));
}

Tower epsilon_lower_bound(const BigInt& L, const std::vector<BigInt>& block_sizes,
                          const BoundConfig& cfg) {
    cfg.validate();
    if (L < 2) throw Error(Error::Kind::Precondition, "epsilon bound requires L >= 2");
    if (block_sizes.empty()) throw Error(Error::Kind::Precondition, "need at least one block");
    BigInt e = pow_big(cfg.beta, BigInt(block_sizes.size()) + 2);
    for (const auto& n : block_sizes) {
        if (n < 1) throw Error(Error::Kind::Precondition, "block sizes must be >= 1");
        e *= n;
    }
    return Tower::pow2(Tower::pow(Tower::from_int(L), e));
}

BigInt universal_range_exponent(const BigInt& n, const BigInt& m, const BigInt& L,
                                const BoundConfig& cfg) {
    cfg.validate();
    if (n < 1 || m < 1) throw Error(Error::Kind::Precondition, "block sizes must be >= 1");
    return 8 * cfg.alpha * cfg.alpha * bound_log(L) * n * n * m;
}

BigInt existential_range_exponent(const BigInt& n, const BigInt& m, const BigInt& N,
                                  const BigInt& L, const BoundConfig& cfg) {
    cfg.validate();
    if (n < 1 || m < 1) throw Error(Error::Kind::Precondition, "block sizes must be >= 1");
    if (N < 0) throw Error(Error::Kind::Precondition, "N must be >= 0");
    return 8 * pow_big(cfg.alpha, 3) * bound_log(L) * n * (n + N + 1) * m;
}

BigInt poly_sup_bound(const Polynomial& p, const BigInt& C) {
    if (C < 1) throw Error(Error::Kind::Precondition, "box bound must be >= 1");
    BigInt total = 0;
    for (const auto& [m, c] : p.terms()) {
        BigInt deg = 0;
        for (const auto& [v, e] : m) deg += e;
        total += boost::multiprecision::abs(c) * pow_big(C, deg);
    }
    return total;
}

BigInt compact_poly_bound_exponent(const Polynomial& p, const BigInt& N, const BigInt& n,
                                   const BoundConfig& cfg) {
    cfg.validate();
    if (n < 1) throw Error(Error::Kind::Precondition, "dimension must be >= 1");
    if (N < 0) throw Error(Error::Kind::Precondition, "N must be >= 0");

    // Proof formula: |psi| <= L0^(alpha^3 n (N+1)) after eliminating the two
    // inner blocks (X of size n, U of size N+1) with one free variable E, so
    // K = 8 * log(|psi|) * alpha^3 * n * (N+1).
    BigInt k_vars = n + N + 2;
    BigInt len_p = poly_length(p, var_occurrence_cost(k_vars.convert_to<std::size_t>()));
    BigInt L0 = len_p + 6 * (n + N + 2);  // box guards and the |P| <= E shell
    BigInt a3 = pow_big(cfg.alpha, 3);
    BigInt log_psi = a3 * n * (N + 1) * bound_log(L0 < 2 ? BigInt(2) : L0);
    BigInt k_formula = 8 * log_psi * a3 * n * (N + 1);

    // Direct interval bound when the box materializes.
    if (N <= 24) {
        BigInt C = BigInt(1) << (std::size_t(1) << N.convert_to<unsigned>());
        BigInt bound = poly_sup_bound(p, C);
        BigInt lb = bound < 1 ? BigInt(0) : ceil_log2(bound);
        BigInt k_direct = lb < 1 ? BigInt(0) : ceil_log2(lb);
        if (k_direct < k_formula) return k_direct;
    }
    return k_formula;
}

}  // namespace sar
