#include "sar/tower.hpp"

#include <cstdlib>
#include <sstream>

namespace sar {

namespace {
// Bit budget used for intermediate exponent arithmetic (not for tower values).
constexpr std::size_t kExponentBits = 1u << 22;
}  // namespace

Tower Tower::from_int(const BigInt& v) {
    if (v < 1) throw Error(Error::Kind::Precondition, "tower values are positive integers");
    auto n = std::make_shared<Node>();
    n->kind = Kind::Int;
    n->value = v;
    return Tower(std::move(n));
}

Tower Tower::pow2(const Tower& e) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Pow2;
    n->kids = {e};
    return Tower(std::move(n));
}

Tower Tower::pow2pow2(const BigInt& n) { return pow2(pow2(from_int(n < 1 ? BigInt(1) : n))); }

Tower Tower::mul(const Tower& a, const Tower& b) {
    if (a.kind() == Kind::Int && b.kind() == Kind::Int &&
        bit_length(a.node_->value) + bit_length(b.node_->value) <= 4096)
        return from_int(a.node_->value * b.node_->value);
    auto n = std::make_shared<Node>();
    n->kind = Kind::Mul;
    n->kids = {a, b};
    return Tower(std::move(n));
}

Tower Tower::pow(const Tower& base, const BigInt& e) {
    if (e == 0) return from_int(1);
    if (e == 1) return base;
    if (base.kind() == Kind::Int && BigInt(bit_length(base.node_->value)) * e <= 4096)
        return from_int(pow_big(base.node_->value, e));
    auto n = std::make_shared<Node>();
    n->kind = Kind::Pow;
    n->value = e;
    n->kids = {base};
    return Tower(std::move(n));
}

Tower Tower::ceil_log2_of(const Tower& a) {
    if (a.kind() == Kind::Int) return from_int(std::max(BigInt(1), ceil_log2(a.node_->value)));
    auto n = std::make_shared<Node>();
    n->kind = Kind::CeilLog2;
    n->kids = {a};
    return Tower(std::move(n));
}

std::size_t Tower::default_budget() {
    static std::size_t budget = [] {
        const char* env = std::getenv("SAR_MATERIALIZE_BUDGET");
        if (env != nullptr) {
            long v = std::atol(env);
            if (v > 0) return static_cast<std::size_t>(v);
        }
        return static_cast<std::size_t>(64);
    }();
    return budget;
}

std::optional<BigInt> Tower::materialize(std::size_t max_bits) const {
    switch (kind()) {
        case Kind::Int:
            if (bit_length(node_->value) > max_bits + 1) return std::nullopt;
            return node_->value;
        case Kind::Pow2: {
            auto e = node_->kids[0].materialize(kExponentBits);
            if (!e || *e > BigInt(max_bits)) return std::nullopt;
            return BigInt(1) << static_cast<std::size_t>(*e);
        }
        case Kind::Mul: {
            auto a = node_->kids[0].materialize(max_bits);
            auto b = node_->kids[1].materialize(max_bits);
            if (!a || !b) return std::nullopt;
            if (bit_length(*a) + bit_length(*b) > max_bits + 1) return std::nullopt;
            return *a * *b;
        }
        case Kind::Pow: {
            auto base = node_->kids[0].materialize(max_bits);
            if (!base) return std::nullopt;
            BigInt bits = BigInt(bit_length(*base)) * node_->value;
            if (bits > BigInt(max_bits) + 1) return std::nullopt;
            return pow_big(*base, node_->value);
        }
        case Kind::CeilLog2: {
            auto v = node_->kids[0].materialize(kExponentBits);
            if (v) return std::max(BigInt(1), ceil_log2(*v));
            auto lb = tower_log2_bounds(node_->kids[0]);
            if (lb && lb->first == lb->second) return std::max(BigInt(1), lb->first);
            return std::nullopt;
        }
    }
    return std::nullopt;
}

// Exact bounds [lo, hi] on the value, as big integers within max_bits.
std::optional<std::pair<BigInt, BigInt>> tower_value_bounds(const Tower& t, std::size_t max_bits) {
    auto exact = t.materialize(max_bits);
    if (exact) return std::make_pair(*exact, *exact);
    if (t.kind() == Tower::Kind::CeilLog2) {
        auto lb = tower_log2_bounds(t.node_->kids[0]);
        if (lb) return std::make_pair(std::max(BigInt(1), lb->first), std::max(BigInt(1), lb->second));
    }
    return std::nullopt;
}

// Bounds [lo, hi] with 2^lo <= value <= 2^hi, as big integers; nullopt when
// even the logarithm overflows the exponent budget.
std::optional<std::pair<BigInt, BigInt>> tower_log2_bounds(const Tower& t) {
    switch (t.kind()) {
        case Tower::Kind::Int:
            return std::make_pair(floor_log2(t.node_->value), ceil_log2(t.node_->value));
        case Tower::Kind::Pow2:
            return tower_value_bounds(t.node_->kids[0], kExponentBits);
        case Tower::Kind::Mul: {
            auto a = tower_log2_bounds(t.node_->kids[0]);
            auto b = tower_log2_bounds(t.node_->kids[1]);
            if (!a || !b) return std::nullopt;
            return std::make_pair(a->first + b->first, a->second + b->second);
        }
        case Tower::Kind::Pow: {
            auto a = tower_log2_bounds(t.node_->kids[0]);
            if (!a) return std::nullopt;
            return std::make_pair(a->first * t.node_->value, a->second * t.node_->value);
        }
        case Tower::Kind::CeilLog2: {
            auto vb = tower_value_bounds(t, kExponentBits);
            if (!vb) return std::nullopt;
            return std::make_pair(floor_log2(std::max(BigInt(1), vb->first)),
                                  ceil_log2(std::max(BigInt(1), vb->second)));
        }
    }
    return std::nullopt;
}

bool Tower::structurally_equal(const Tower& o) const {
    if (node_ == o.node_) return true;
    if (kind() != o.kind()) return false;
    if (node_->value != o.node_->value) return false;
    if (node_->kids.size() != o.node_->kids.size()) return false;
    for (std::size_t i = 0; i < node_->kids.size(); ++i)
        if (!node_->kids[i].structurally_equal(o.node_->kids[i])) return false;
    return true;
}

int tower_compare(const Tower& a, const Tower& b) {
    if (a.structurally_equal(b)) return 0;
    std::size_t budget = Tower::default_budget();
    auto va = a.materialize(budget);
    auto vb = b.materialize(budget);
    if (va && vb) return *va == *vb ? 0 : (*va < *vb ? -1 : 1);
    auto la = tower_log2_bounds(a);
    auto lb = tower_log2_bounds(b);
    if (la && lb) {
        if (la->second < lb->first) return -1;  // a <= 2^hi_a < 2^lo_b <= b
        if (lb->second < la->first) return 1;
        if (la->second <= lb->first && lb->second <= la->first) return 0;  // both exact, equal
    }
    // Structural descent for powers of two.
    if (a.kind() == Tower::Kind::Pow2 && b.kind() == Tower::Kind::Pow2)
        return tower_compare(a.node_->kids[0], b.node_->kids[0]);
    if (a.kind() == Tower::Kind::Pow2 && lb) {
        // a = 2^x: a <= b if x <= floor(log2 b); a > b if x >= ceil(log2 b)+1.
        if (tower_compare(a.node_->kids[0], Tower::from_int(std::max(BigInt(1), lb->first))) <= 0) return -1;
        if (tower_compare(Tower::from_int(lb->second + 1), a.node_->kids[0]) <= 0) return 1;
    }
    if (b.kind() == Tower::Kind::Pow2 && la) {
        if (tower_compare(b.node_->kids[0], Tower::from_int(std::max(BigInt(1), la->first))) <= 0) return 1;
        if (tower_compare(Tower::from_int(la->second + 1), b.node_->kids[0]) <= 0) return -1;
    }
    throw Error(Error::Kind::BudgetExceeded,
                "tower comparison undecidable within materialization budget: " + a.to_string() +
                    " vs " + b.to_string());
}

bool tower_le(const Tower& a, const Tower& b) { return tower_compare(a, b) <= 0; }

bool rational_le_tower(const Rational& r, const Tower& t) {
    if (r <= 1) return true;  // towers are >= 1
    // r <= ceil(r) <= 2^ceil_log2(ceil(r))
    BigInt c = num(r) / den(r) + 1;
    Tower upper = Tower::pow2(Tower::from_int(ceil_log2(c)));
    int cmp = tower_compare(upper, t);
    if (cmp <= 0) return true;
    // Inconclusive via the upper bound; try the floor side: 2^floor_log2(floor(r)) <= r.
    BigInt f = num(r) / den(r);
    if (f >= 1) {
        Tower lower = Tower::pow2(Tower::from_int(std::max(BigInt(0), floor_log2(f))));
        if (tower_compare(t, lower) < 0) return false;
    }
    // Fall back to materializing t.
    auto v = t.materialize(Tower::default_budget());
    if (v) return r <= Rational(*v);
    throw Error(Error::Kind::BudgetExceeded, "rational/tower comparison undecidable within budget");
}

std::string Tower::to_string() const {
    std::ostringstream os;
    switch (kind()) {
        case Kind::Int:
            os << node_->value.str();
            break;
        case Kind::Pow2:
            os << "2^(" << node_->kids[0].to_string() << ")";
            break;
        case Kind::Mul:
            os << "(" << node_->kids[0].to_string() << "*" << node_->kids[1].to_string() << ")";
            break;
        case Kind::Pow:
            os << "(" << node_->kids[0].to_string() << ")^" << node_->value.str();
            break;
        case Kind::CeilLog2:
            os << "clog2(" << node_->kids[0].to_string() << ")";
            break;
    }
    return os.str();
}

}  // namespace sar
