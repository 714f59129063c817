#pragma once

#include "sar/bigint.hpp"
#include "sar/dyadic.hpp"

#include <map>
#include <string>
#include <vector>

namespace sar {

// Monomial: sorted (variable, exponent) pairs, exponents >= 1.
using Monomial = std::vector<std::pair<std::string, unsigned>>;

// Sparse multivariate polynomial with exact integer coefficients.
// Canonical: no zero coefficients, monomial factors sorted by variable name;
// structural equality coincides with mathematical equality.
class Polynomial {
public:
    Polynomial() = default;
    static Polynomial constant(const BigInt& c);
    static Polynomial variable(const std::string& name);
    static Polynomial monomial(const BigInt& c, const Monomial& m);

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty()); }
    BigInt constant_value() const;  // requires is_constant()

    const std::map<Monomial, BigInt>& terms() const { return terms_; }
    std::size_t term_count() const { return terms_.size(); }

    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator-() const;
    Polynomial operator*(const Polynomial& o) const;
    Polynomial pow(unsigned e) const;
    bool operator==(const Polynomial& o) const { return terms_ == o.terms_; }
    bool operator!=(const Polynomial& o) const { return !(*this == o); }

    unsigned total_degree() const;        // zero polynomial -> 0
    unsigned degree_in(const std::string& var) const;
    std::vector<std::string> vars() const;
    bool mentions(const std::string& var) const;

    Rational eval(const std::map<std::string, Rational>& point) const;
    double eval_double(const std::map<std::string, double>& point) const;
    // Exact sign at a point with dyadic coordinates and dyadic per-term scale
    // factors (used after chi-substitution); scale of a term defaults to 1.
    DyadicSum eval_dyadic(const std::map<std::string, Dyadic>& point) const;

    Polynomial substitute(const std::string& var, const Polynomial& replacement) const;
    Polynomial rename(const std::map<std::string, std::string>& renaming) const;
    Polynomial derivative(const std::string& var) const;

    std::string to_string() const;

private:
    void add_term(const Monomial& m, const BigInt& c);
    std::map<Monomial, BigInt> terms_;
};

Polynomial operator*(const BigInt& c, const Polynomial& p);

// Length of a polynomial under the formula length measure: binary coefficient
// lengths, exponents in unary (each variable occurrence costs var_cost), one
// symbol per '+' between monomials. The zero polynomial costs 1.
BigInt poly_length(const Polynomial& p, const BigInt& var_cost);

}  // namespace sar
