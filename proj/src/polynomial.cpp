#include "sar/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace sar {

namespace {
constexpr unsigned kMaxExponent = 1u << 24;

unsigned checked_exp_add(unsigned a, unsigned b) {
    unsigned long s = static_cast<unsigned long>(a) + b;
    if (s > kMaxExponent) throw Error(Error::Kind::SizeExceeded, "exponent overflow");
    return static_cast<unsigned>(s);
}
}  // namespace

Polynomial Polynomial::constant(const BigInt& c) {
    Polynomial p;
    if (c != 0) p.terms_[{}] = c;
    return p;
}

Polynomial Polynomial::variable(const std::string& name) {
    Polynomial p;
    p.terms_[{{name, 1u}}] = 1;
    return p;
}

Polynomial Polynomial::monomial(const BigInt& c, const Monomial& m) {
    Polynomial p;
    p.add_term(m, c);
    return p;
}

BigInt Polynomial::constant_value() const {
    if (terms_.empty()) return 0;
    return terms_.begin()->second;
}

void Polynomial::add_term(const Monomial& m, const BigInt& c) {
    if (c == 0) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_[m] = c;
    } else {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
    Polynomial r = *this;
    for (const auto& [m, c] : o.terms_) r.add_term(m, c);
    return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
    Polynomial r = *this;
    for (const auto& [m, c] : o.terms_) r.add_term(m, -c);
    return r;
}

Polynomial Polynomial::operator-() const {
    Polynomial r;
    for (const auto& [m, c] : terms_) r.terms_[m] = -c;
    return r;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
    Polynomial r;
    for (const auto& [ma, ca] : terms_) {
        for (const auto& [mb, cb] : o.terms_) {
            Monomial m;
            m.reserve(ma.size() + mb.size());
            auto ia = ma.begin();
            auto ib = mb.begin();
            while (ia != ma.end() || ib != mb.end()) {
                if (ib == mb.end() || (ia != ma.end() && ia->first < ib->first)) {
                    m.push_back(*ia++);
                } else if (ia == ma.end() || ib->first < ia->first) {
                    m.push_back(*ib++);
                } else {
                    m.emplace_back(ia->first, checked_exp_add(ia->second, ib->second));
                    ++ia;
                    ++ib;
                }
            }
            r.add_term(m, ca * cb);
        }
    }
    return r;
}

Polynomial Polynomial::pow(unsigned e) const {
    Polynomial r = constant(1);
    Polynomial b = *this;
    while (e > 0) {
        if (e & 1u) r = r * b;
        e >>= 1u;
        if (e > 0) b = b * b;
    }
    return r;
}

Polynomial operator*(const BigInt& c, const Polynomial& p) { return Polynomial::constant(c) * p; }

unsigned Polynomial::total_degree() const {
    unsigned d = 0;
    for (const auto& [m, c] : terms_) {
        unsigned s = 0;
        for (const auto& [v, e] : m) s = checked_exp_add(s, e);
        d = std::max(d, s);
    }
    return d;
}

unsigned Polynomial::degree_in(const std::string& var) const {
    unsigned d = 0;
    for (const auto& [m, c] : terms_)
        for (const auto& [v, e] : m)
            if (v == var) d = std::max(d, e);
    return d;
}

std::vector<std::string> Polynomial::vars() const {
    std::set<std::string> s;
    for (const auto& [m, c] : terms_)
        for (const auto& [v, e] : m) s.insert(v);
    return {s.begin(), s.end()};
}

bool Polynomial::mentions(const std::string& var) const {
    for (const auto& [m, c] : terms_)
        for (const auto& [v, e] : m)
            if (v == var) return true;
    return false;
}

Rational Polynomial::eval(const std::map<std::string, Rational>& point) const {
    Rational total = 0;
    for (const auto& [m, c] : terms_) {
        Rational t(c);
        for (const auto& [v, e] : m) {
            auto it = point.find(v);
            if (it == point.end())
                throw Error(Error::Kind::MissingAssignment, "unassigned variable: " + v);
            Rational base = it->second;
            for (unsigned i = 0; i < e; ++i) t *= base;
        }
        total += t;
    }
    return total;
}

double Polynomial::eval_double(const std::map<std::string, double>& point) const {
    double total = 0;
    for (const auto& [m, c] : terms_) {
        double t = c.convert_to<double>();
        for (const auto& [v, e] : m) {
            auto it = point.find(v);
            if (it == point.end())
                throw Error(Error::Kind::MissingAssignment, "unassigned variable: " + v);
            t *= std::pow(it->second, static_cast<int>(e));
        }
        total += t;
    }
    return total;
}

DyadicSum Polynomial::eval_dyadic(const std::map<std::string, Dyadic>& point) const {
    DyadicSum sum;
    for (const auto& [m, c] : terms_) {
        Dyadic t(c);
        for (const auto& [v, e] : m) {
            auto it = point.find(v);
            if (it == point.end())
                throw Error(Error::Kind::MissingAssignment, "unassigned variable: " + v);
            t = t * it->second.pow(e);
        }
        sum.add(t);
    }
    return sum;
}

Polynomial Polynomial::substitute(const std::string& var, const Polynomial& replacement) const {
    Polynomial r;
    for (const auto& [m, c] : terms_) {
        Monomial rest;
        unsigned e = 0;
        for (const auto& [v, ve] : m) {
            if (v == var)
                e = ve;
            else
                rest.push_back({v, ve});
        }
        Polynomial t = Polynomial::monomial(c, rest);
        if (e > 0) t = t * replacement.pow(e);
        r = r + t;
    }
    return r;
}

Polynomial Polynomial::rename(const std::map<std::string, std::string>& renaming) const {
    Polynomial r;
    for (const auto& [m, c] : terms_) {
        Monomial nm;
        for (const auto& [v, e] : m) {
            auto it = renaming.find(v);
            nm.push_back({it == renaming.end() ? v : it->second, e});
        }
        std::sort(nm.begin(), nm.end());
        // merge duplicates created by the renaming
        Monomial merged;
        for (const auto& [v, e] : nm) {
            if (!merged.empty() && merged.back().first == v)
                merged.back().second = checked_exp_add(merged.back().second, e);
            else
                merged.push_back({v, e});
        }
        r.add_term(merged, c);
    }
    return r;
}

Polynomial Polynomial::derivative(const std::string& var) const {
    Polynomial r;
    for (const auto& [m, c] : terms_) {
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (m[i].first != var) continue;
            Monomial d = m;
            if (d[i].second == 1)
                d.erase(d.begin() + static_cast<long>(i));
            else
                d[i].second -= 1;
            r.add_term(d, c * m[i].second);
        }
    }
    return r;
}

std::string Polynomial::to_string() const {
    if (terms_.empty()) return "0";
    // Deterministic print order: total degree descending, then monomial lex.
    std::vector<std::pair<Monomial, BigInt>> ts(terms_.begin(), terms_.end());
    auto deg = [](const Monomial& m) {
        unsigned d = 0;
        for (const auto& [v, e] : m) d += e;
        return d;
    };
    std::stable_sort(ts.begin(), ts.end(), [&](const auto& a, const auto& b) {
        unsigned da = deg(a.first), db = deg(b.first);
        if (da != db) return da > db;
        return a.first < b.first;
    });
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : ts) {
        BigInt a = c < 0 ? BigInt(-c) : c;
        if (first) {
            if (c < 0) os << "-";
            first = false;
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        bool needs_star = false;
        if (a != 1 || m.empty()) {
            os << a.str();
            needs_star = true;
        }
        for (const auto& [v, e] : m) {
            if (needs_star) os << "*";
            os << v;
            if (e > 1) os << "^" << e;
            needs_star = true;
        }
    }
    return os.str();
}

BigInt poly_length(const Polynomial& p, const BigInt& var_cost) {
    if (p.is_zero()) return 1;
    BigInt len = 0;
    bool first = true;
    for (const auto& [m, c] : p.terms()) {
        if (!first) len += 1;  // '+' between monomials
        first = false;
        len += BigInt(bit_length(c));  // coefficient in binary, sign-free
        for (const auto& [v, e] : m) len += BigInt(e) * var_cost;  // exponent in unary
    }
    return len;
}

}  // namespace sar
