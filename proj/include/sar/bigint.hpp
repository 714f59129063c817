#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>

namespace sar {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

class Error : public std::runtime_error {
public:
    enum class Kind {
        Parse,
        MissingAssignment,
        Precondition,
        BudgetExceeded,
        SizeExceeded,
        NotNormalized,
        WrongRelation,
        UnsupportedPosition,
        DimensionMismatch,
        EmptyInput,
        Io,
    };

    Error(Kind k, std::string msg) : std::runtime_error(std::move(msg)), kind_(k) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

inline BigInt num(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt den(const Rational& r) { return boost::multiprecision::denominator(r); }

// Number of bits of |x|; bit_length(0) = 0.
inline std::size_t bit_length(const BigInt& x) {
    if (x == 0) return 0;
    return boost::multiprecision::msb(boost::multiprecision::abs(x)) + 1;
}

// Smallest e with 2^e >= x, for x >= 1.
inline BigInt ceil_log2(const BigInt& x) {
    if (x < 1) throw Error(Error::Kind::Precondition, "ceil_log2 requires x >= 1");
    std::size_t bits = bit_length(x);
    BigInt e = BigInt(bits) - 1;
    if ((BigInt(1) << bits - 1) == x) return e;  // exact power of two
    return e + 1;
}

// Largest e with 2^e <= x, for x >= 1.
inline BigInt floor_log2(const BigInt& x) {
    if (x < 1) throw Error(Error::Kind::Precondition, "floor_log2 requires x >= 1");
    return BigInt(bit_length(x)) - 1;
}

inline BigInt pow_big(const BigInt& base, const BigInt& exp) {
    if (exp < 0) throw Error(Error::Kind::Precondition, "pow_big requires exp >= 0");
    BigInt result = 1, b = base, e = exp;
    while (e > 0) {
        if ((e & 1) != 0) result *= b;
        b *= b;
        e >>= 1;
    }
    return result;
}

inline Rational abs_rat(const Rational& r) { return r < 0 ? Rational(-r) : r; }

}  // namespace sar
