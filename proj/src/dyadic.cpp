#include "sar/dyadic.hpp"

#include <algorithm>
#include <sstream>

namespace sar {

void Dyadic::normalize() {
    if (mant_ == 0) {
        exp_ = 0;
        return;
    }
    std::size_t tz = boost::multiprecision::lsb(boost::multiprecision::abs(mant_));
    if (tz > 0) {
        mant_ >>= tz;
        exp_ += tz;
    }
}

bool Dyadic::rational_is_dyadic(const Rational& r) {
    BigInt d = den(r);
    return d == (BigInt(1) << boost::multiprecision::lsb(d));
}

Dyadic Dyadic::from_rational(const Rational& r) {
    BigInt n = num(r), d = den(r);
    std::size_t tz = boost::multiprecision::lsb(d);
    if (d != (BigInt(1) << tz))
        throw Error(Error::Kind::Precondition, "rational is not dyadic: " + r.str());
    return Dyadic(n, -BigInt(tz));
}

Dyadic Dyadic::operator+(const Dyadic& o) const {
    if (mant_ == 0) return o;
    if (o.mant_ == 0) return *this;
    const Dyadic& lo = (exp_ <= o.exp_) ? *this : o;
    const Dyadic& hi = (exp_ <= o.exp_) ? o : *this;
    BigInt gap = hi.exp_ - lo.exp_;
    if (gap > kAlignBudgetBits)
        throw Error(Error::Kind::BudgetExceeded,
                    "dyadic addition: exponent gap " + gap.str() + " exceeds alignment budget");
    BigInt shifted = hi.mant_ << static_cast<std::size_t>(gap);
    return Dyadic(lo.mant_ + shifted, lo.exp_);
}

Dyadic Dyadic::pow(unsigned e) const {
    Dyadic result(BigInt(1), BigInt(0));
    Dyadic b = *this;
    while (e > 0) {
        if (e & 1u) result = result * b;
        b = b * b;
        e >>= 1u;
    }
    return result;
}

int Dyadic::compare(const Dyadic& o) const {
    if (sign() != o.sign()) return sign() < o.sign() ? -1 : 1;
    if (mant_ == 0) return 0;
    // Same nonzero sign. Compare magnitudes via top-bit positions first.
    BigInt top_a = exp_ + BigInt(bit_length(mant_));   // |a| in [2^(top-1), 2^top)
    BigInt top_b = o.exp_ + BigInt(bit_length(o.mant_));
    int s = sign();
    if (top_a != top_b) return (top_a < top_b ? -1 : 1) * s;
    // Same magnitude window; align exactly (gap <= mantissa bit lengths).
    BigInt gap = exp_ - o.exp_;
    BigInt ma = mant_, mb = o.mant_;
    if (gap >= 0)
        ma <<= static_cast<std::size_t>(gap);
    else
        mb <<= static_cast<std::size_t>(-gap);
    if (ma == mb) return 0;
    return ma < mb ? -1 : 1;
}

Rational Dyadic::to_rational() const {
    if (mant_ == 0) return Rational(0);
    if (boost::multiprecision::abs(exp_) > kAlignBudgetBits)
        throw Error(Error::Kind::BudgetExceeded, "dyadic exponent too large to materialize");
    if (exp_ >= 0) return Rational(mant_ << static_cast<std::size_t>(exp_));
    return Rational(mant_, BigInt(1) << static_cast<std::size_t>(-exp_));
}

std::string Dyadic::to_string() const {
    std::ostringstream os;
    os << mant_.str() << "*2^" << exp_.str();
    return os.str();
}

void DyadicSum::add(const Dyadic& d) {
    if (!d.is_zero()) terms_.push_back(d);
}

int DyadicSum::sign() const {
    if (terms_.empty()) return 0;
    // Work on a sorted copy, largest top-bit position first.
    std::vector<Dyadic> ts = terms_;
    auto top = [](const Dyadic& d) { return d.exponent() + BigInt(bit_length(d.mantissa())); };
    std::sort(ts.begin(), ts.end(), [&](const Dyadic& a, const Dyadic& b) { return top(a) > top(b); });
    // Merge terms whose exponents are close enough to align; leave the rest
    // in tower-separated groups.
    std::vector<Dyadic> groups;
    for (const Dyadic& t : ts) {
        if (!groups.empty()) {
            BigInt gap = boost::multiprecision::abs(groups.back().exponent() - t.exponent());
            if (gap <= Dyadic::kAlignBudgetBits) {
                groups.back() = groups.back() + t;
                continue;
            }
        }
        groups.push_back(t);
    }
    // Drop zero groups, keep order by top-bit position.
    std::vector<Dyadic> nz;
    for (const Dyadic& g : groups)
        if (!g.is_zero()) nz.push_back(g);
    if (nz.empty()) return 0;
    std::sort(nz.begin(), nz.end(), [&](const Dyadic& a, const Dyadic& b) { return top(a) > top(b); });
    // The leading group dominates if the runner-up's magnitude cannot reach it.
    // |lead| >= 2^(top(lead)-1), and the sum of the rest is < 2^(top(next)+bits).
    const Dyadic& lead = nz.front();
    if (nz.size() == 1) return lead.sign();
    BigInt lead_low = top(lead) - 1;
    BigInt rest_high = top(nz[1]) + BigInt(bit_length(BigInt(static_cast<long>(nz.size()))));
    if (rest_high < lead_low) return lead.sign();
    // Groups too close to separate but too far to align should not happen:
    // they would have been merged above. Fall back to a hard alignment.
    Dyadic total = nz.front();
    for (std::size_t i = 1; i < nz.size(); ++i) total = total + nz[i];
    return total.sign();
}

}  // namespace sar
