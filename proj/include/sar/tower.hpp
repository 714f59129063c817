#pragma once

#include "sar/bigint.hpp"

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sar {

// Lazily represented positive integer built from {integer, 2^(.), product,
// power, ceil-log2}. Values of shape 2^(2^N) or 2^(L^e) stay symbolic; they
// are compared by exponent-level arithmetic and only materialized when they
// fit the configured budget.
class Tower {
public:
    enum class Kind { Int, Pow2, Mul, Pow, CeilLog2 };

    static Tower from_int(const BigInt& v);
    static Tower pow2(const Tower& e);                    // 2^e
    static Tower pow2pow2(const BigInt& n);               // 2^(2^n)
    static Tower mul(const Tower& a, const Tower& b);
    static Tower pow(const Tower& base, const BigInt& e); // base^e, e >= 0
    static Tower ceil_log2_of(const Tower& a);

    Kind kind() const { return node_->kind; }

    // Exact value if its bit length fits max_bits, otherwise nullopt.
    std::optional<BigInt> materialize(std::size_t max_bits) const;

    // Environment-configured default materialization budget in bits
    // (SAR_MATERIALIZE_BUDGET, default 64).
    static std::size_t default_budget();

    std::string to_string() const;

    bool structurally_equal(const Tower& o) const;

private:
    struct Node {
        Kind kind;
        BigInt value;                 // Kind::Int payload; Kind::Pow exponent
        std::vector<Tower> kids;
    };
    std::shared_ptr<const Node> node_;

    explicit Tower(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

    friend int tower_compare(const Tower& a, const Tower& b);
    friend std::optional<std::pair<BigInt, BigInt>> tower_value_bounds(const Tower& t, std::size_t max_bits);
    friend std::optional<std::pair<BigInt, BigInt>> tower_log2_bounds(const Tower& t);
};

// True iff a <= b as integers. Throws Error(BudgetExceeded) when the order
// cannot be decided without materializing beyond the budget.
bool tower_le(const Tower& a, const Tower& b);

// -1, 0, +1; same caveat as tower_le.
int tower_compare(const Tower& a, const Tower& b);

// r <= t, exact; throws like tower_le.
bool rational_le_tower(const Rational& r, const Tower& t);

}  // namespace sar
