#pragma once

#include "sar/bigint.hpp"

#include <vector>

namespace sar {

// Exact number of the form mantissa * 2^exponent. The exponent is itself an
// arbitrary-precision integer, so values like 2^(-2^80) are representable:
// the *value* is astronomically small but its representation is a few bytes.
// These arise when the chi-gadget solution u_i = 2^(-2^i) is substituted
// into scaled formulas.
class Dyadic {
public:
    Dyadic() : mant_(0), exp_(0) {}
    Dyadic(BigInt mantissa, BigInt exponent) : mant_(std::move(mantissa)), exp_(std::move(exponent)) {
        normalize();
    }
    explicit Dyadic(const BigInt& i) : Dyadic(i, 0) {}
    static Dyadic from_int(long v) { return Dyadic(BigInt(v), BigInt(0)); }

    // Exact conversion; requires a power-of-two denominator.
    static Dyadic from_rational(const Rational& r);
    static bool rational_is_dyadic(const Rational& r);

    const BigInt& mantissa() const { return mant_; }
    const BigInt& exponent() const { return exp_; }
    bool is_zero() const { return mant_ == 0; }
    int sign() const { return mant_ == 0 ? 0 : (mant_ < 0 ? -1 : 1); }

    Dyadic operator-() const { return Dyadic(-mant_, exp_); }
    Dyadic operator*(const Dyadic& o) const { return Dyadic(mant_ * o.mant_, exp_ + o.exp_); }

    // Exact addition. Throws BudgetExceeded if the exponent gap is too wide
    // to align (use DyadicSum for far-apart terms).
    Dyadic operator+(const Dyadic& o) const;
    Dyadic operator-(const Dyadic& o) const { return *this + (-o); }

    Dyadic pow(unsigned e) const;

    bool operator==(const Dyadic& o) const { return mant_ == o.mant_ && (mant_ == 0 || exp_ == o.exp_); }

    // Exact comparison (works for arbitrary exponent gaps).
    int compare(const Dyadic& o) const;
    bool operator<(const Dyadic& o) const { return compare(o) < 0; }
    bool operator<=(const Dyadic& o) const { return compare(o) <= 0; }

    // Value as rational; throws BudgetExceeded if |exponent| is over budget.
    Rational to_rational() const;

    std::string to_string() const;

    // Maximum exponent-gap (in bits) that addition will align exactly.
    static constexpr long kAlignBudgetBits = 1 << 22;

private:
    void normalize();  // keep mantissa odd (or zero)

    BigInt mant_;
    BigInt exp_;
};

// Sum of dyadics with possibly astronomically different scales. Supports the
// one operation formula evaluation needs: an exact sign.
class DyadicSum {
public:
    DyadicSum() = default;
    void add(const Dyadic& d);
    void add_product(const Dyadic& a, const Dyadic& b) { add(a * b); }

    // Exact sign of the sum: -1, 0, +1.
    int sign() const;

    bool empty() const { return terms_.empty(); }
    const std::vector<Dyadic>& terms() const { return terms_; }

private:
    std::vector<Dyadic> terms_;
};

}  // namespace sar
