#include "sar/parse.hpp"

#include <cctype>
#include <set>
#include <sstream>

namespace sar {

namespace {

struct Token {
    enum class Kind { Ident, Number, Punct, End };
    Kind kind = Kind::End;
    std::string text;
    int line = 1, col = 1;
};

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(&src) { advance(); }

    const Token& peek() const { return tok_; }
    Token next() {
        Token t = tok_;
        advance();
        return t;
    }

    [[noreturn]] void fail(const std::string& msg) const {
        std::ostringstream os;
        os << "syntax error at " << tok_.line << ":" << tok_.col << ": " << msg;
        if (tok_.kind != Token::Kind::End) os << " (near '" << tok_.text << "')";
        throw Error(Error::Kind::Parse, os.str());
    }

private:
    void advance() {
        const std::string& src = *src_;
        while (pos_ < src.size()) {
            char c = src[pos_];
            if (c == '#') {  // comment to end of line
                while (pos_ < src.size() && src[pos_] != '\n') ++pos_;
                continue;
            }
            if (c == '\n') {
                ++line_;
                col_ = 1;
                ++pos_;
                continue;
            }
            if (std::isspace(static_cast<unsigned char>(c))) {
                ++col_;
                ++pos_;
                continue;
            }
            break;
        }
        tok_.line = line_;
        tok_.col = col_;
        if (pos_ >= src.size()) {
            tok_ = Token{Token::Kind::End, "", line_, col_};
            return;
        }
        char c = src[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < src.size() &&
                   (std::isalnum(static_cast<unsigned char>(src[pos_])) || src[pos_] == '_'))
                ++pos_;
            tok_ = Token{Token::Kind::Ident, src.substr(start, pos_ - start), line_, col_};
            col_ += static_cast<int>(pos_ - start);
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < src.size() && std::isdigit(static_cast<unsigned char>(src[pos_]))) ++pos_;
            // decimal fraction: digits '.' digits (the dot glues only to digits)
            if (pos_ + 1 < src.size() && src[pos_] == '.' &&
                std::isdigit(static_cast<unsigned char>(src[pos_ + 1]))) {
                ++pos_;
                while (pos_ < src.size() && std::isdigit(static_cast<unsigned char>(src[pos_]))) ++pos_;
            }
            tok_ = Token{Token::Kind::Number, src.substr(start, pos_ - start), line_, col_};
            col_ += static_cast<int>(pos_ - start);
            return;
        }
        // multi-char puncts
        auto two = src.substr(pos_, 2);
        if (two == "<=" || two == ">=" || two == "!=" || two == "=>") {
            tok_ = Token{Token::Kind::Punct, two, line_, col_};
            pos_ += 2;
            col_ += 2;
            return;
        }
        static const std::string singles = "()[],.:<>=&|!+-*^/";
        if (singles.find(c) != std::string::npos) {
            tok_ = Token{Token::Kind::Punct, std::string(1, c), line_, col_};
            ++pos_;
            ++col_;
            return;
        }
        std::ostringstream os;
        os << "syntax error at " << line_ << ":" << col_ << ": unexpected character '" << c << "'";
        throw Error(Error::Kind::Parse, os.str());
    }

    const std::string* src_;
    std::size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    Token tok_;
};

class Parser {
public:
    Parser(const std::string& text, const ParseOptions& opts) : lex_(text), opts_(opts) {}

    ParseResult parse() {
        if (is_quantifier_keyword(lex_.peek())) {
            PrenexSentence s = parse_sentence_body();
            expect_end();
            return s;
        }
        FormulaPtr f = parse_formula_expr();
        expect_end();
        return f;
    }

private:
    static bool is_quantifier_keyword(const Token& t) {
        return t.kind == Token::Kind::Ident &&
               (t.text == "forall" || t.text == "exists");
    }

    void expect_end() {
        if (lex_.peek().kind != Token::Kind::End) lex_.fail("trailing input");
    }

    bool accept_punct(const std::string& p) {
        if (lex_.peek().kind == Token::Kind::Punct && lex_.peek().text == p) {
            lex_.next();
            return true;
        }
        return false;
    }

    void expect_punct(const std::string& p) {
        if (!accept_punct(p)) lex_.fail("expected '" + p + "'");
    }

    std::string parse_ident() {
        if (lex_.peek().kind != Token::Kind::Ident) lex_.fail("expected identifier");
        std::string name = lex_.next().text;
        if (!opts_.allow_reserved && !name.empty() && name[0] == '_')
            lex_.fail("variable names starting with '_' are reserved: " + name);
        return name;
    }

    PrenexSentence parse_sentence_body() {
        PrenexSentence s;
        std::set<std::string> seen;
        while (is_quantifier_keyword(lex_.peek())) {
            QuantifierBlock b;
            std::string kw = lex_.next().text;
            bool exotic = accept_punct("*");
            if (kw == "forall")
                b.quant = exotic ? Quant::ForallStar : Quant::Forall;
            else
                b.quant = exotic ? Quant::ExistsStar : Quant::Exists;
            b.vars.push_back(parse_ident());
            while (accept_punct(",")) b.vars.push_back(parse_ident());
            for (const auto& v : b.vars)
                if (!seen.insert(v).second)
                    lex_.fail("variable quantified twice: " + v);
            if (lex_.peek().kind == Token::Kind::Ident && lex_.peek().text == "in") {
                lex_.next();
                b.range = parse_range();
            }
            s.blocks.push_back(std::move(b));
            if (accept_punct(".")) continue;
            if (accept_punct(":")) break;
            if (!is_quantifier_keyword(lex_.peek())) lex_.fail("expected '.', ':' or another quantifier");
        }
        s.matrix = parse_formula_expr();
        // Sentence mode: every matrix variable must be bound.
        std::set<std::string> bound(seen);
        for (const auto& v : s.matrix->free_vars())
            if (!bound.count(v))
                throw Error(Error::Kind::Parse, "unbound variable in sentence: " + v);
        return s;
    }

    BlockRange parse_range() {
        expect_punct("[");
        auto [lo_neg, lo] = parse_signed_bound();
        expect_punct(",");
        auto [hi_neg, hi] = parse_signed_bound();
        expect_punct("]");
        // Boxes are symmetric about 0: lower = -upper.
        if (std::holds_alternative<Rational>(lo) && std::holds_alternative<Rational>(hi)) {
            Rational l = std::get<Rational>(lo) * (lo_neg ? -1 : 1);
            Rational h = std::get<Rational>(hi) * (hi_neg ? -1 : 1);
            if (l != -h) lex_.fail("quantifier boxes must be symmetric [-c, c]");
            BlockRange r;
            r.bound = h;
            return r;
        }
        if (std::holds_alternative<Tower>(lo) && std::holds_alternative<Tower>(hi)) {
            if (!lo_neg || hi_neg) lex_.fail("tower box must be [-2^2^N, 2^2^N]");
            if (!std::get<Tower>(lo).structurally_equal(std::get<Tower>(hi)))
                lex_.fail("quantifier boxes must be symmetric [-c, c]");
            BlockRange r;
            r.bound = std::get<Tower>(hi);
            return r;
        }
        lex_.fail("mismatched range endpoint kinds");
    }

    std::pair<bool, std::variant<Rational, Tower>> parse_signed_bound() {
        bool neg = accept_punct("-");
        if (lex_.peek().kind != Token::Kind::Number) lex_.fail("expected number in range");
        std::string first = lex_.next().text;
        // tower literal 2^2^N
        if (first == "2" && lex_.peek().kind == Token::Kind::Punct && lex_.peek().text == "^") {
            lex_.next();
            if (!(lex_.peek().kind == Token::Kind::Number && lex_.peek().text == "2"))
                lex_.fail("expected 2^2^N tower literal");
            lex_.next();
            expect_punct("^");
            if (lex_.peek().kind != Token::Kind::Number) lex_.fail("expected exponent in tower literal");
            BigInt n(lex_.next().text);
            return {neg, Tower::pow2pow2(n)};
        }
        if (accept_punct("/")) {
            if (lex_.peek().kind != Token::Kind::Number) lex_.fail("expected denominator");
            std::string d = lex_.next().text;
            return {neg, parse_decimal_or_fraction(first + "/" + d)};
        }
        return {neg, parse_decimal_or_fraction(first)};
    }

    // formula := impl; impl := disj ('=>' impl)?   (implication desugars)
    FormulaPtr parse_formula_expr() {
        FormulaPtr lhs = parse_disj();
        if (accept_punct("=>")) {
            FormulaPtr rhs = parse_formula_expr();
            return Formula::disj({Formula::negate(lhs), rhs});
        }
        return lhs;
    }

    FormulaPtr parse_disj() {
        std::vector<FormulaPtr> kids{parse_conj()};
        while (accept_punct("|")) kids.push_back(parse_conj());
        return kids.size() == 1 ? kids[0] : Formula::disj(std::move(kids));
    }

    FormulaPtr parse_conj() {
        std::vector<FormulaPtr> kids{parse_unit()};
        while (accept_punct("&")) kids.push_back(parse_unit());
        return kids.size() == 1 ? kids[0] : Formula::conj(std::move(kids));
    }

    FormulaPtr parse_unit() {
        if (accept_punct("!")) return Formula::negate(parse_unit());
        if (lex_.peek().kind == Token::Kind::Punct && lex_.peek().text == "(") {
            // Could be a parenthesized formula, a nested quantified group, or
            // a parenthesized arithmetic expression feeding an atom. Try the
            // quantifier case first, else fall through to atom parsing which
            // handles '(' in expressions.
            std::size_t save = save_state();
            lex_.next();
            if (is_quantifier_keyword(lex_.peek())) {
                PrenexSentence inner = parse_sentence_body();
                expect_punct(")");
                FormulaPtr f = inner.matrix;
                for (auto it = inner.blocks.rbegin(); it != inner.blocks.rend(); ++it)
                    f = Formula::quantified(*it, f);
                return f;
            }
            restore_state(save);
        }
        return parse_atom_or_group();
    }

    // Distinguishing "(x < 0) & ..." from "(x + 1)*y < 0" requires trying the
    // arithmetic route and checking what follows the closing paren.
    FormulaPtr parse_atom_or_group() {
        std::size_t save = save_state();
        if (accept_punct("(")) {
            try {
                FormulaPtr inner = parse_formula_expr();
                if (accept_punct(")") && !next_is_arith_continuation() && !next_is_rel()) return inner;
            } catch (const Error&) {
                // fall through to expression parsing
            }
            restore_state(save);
        }
        Polynomial lhs = parse_expr();
        Rel rel = parse_rel();
        Polynomial rhs = parse_expr();
        return Formula::atom(lhs - rhs, rel);
    }

    bool next_is_rel() const {
        const Token& t = lex_.peek();
        return t.kind == Token::Kind::Punct &&
               (t.text == "<" || t.text == "<=" || t.text == "=" || t.text == "!=" ||
                t.text == ">=" || t.text == ">");
    }

    bool next_is_arith_continuation() const {
        const Token& t = lex_.peek();
        return t.kind == Token::Kind::Punct &&
               (t.text == "+" || t.text == "-" || t.text == "*" || t.text == "^");
    }

    Rel parse_rel() {
        if (!next_is_rel()) lex_.fail("expected relation");
        std::string r = lex_.next().text;
        if (r == "<") return Rel::LT;
        if (r == "<=") return Rel::LE;
        if (r == "=") return Rel::EQ;
        if (r == "!=") return Rel::NE;
        if (r == ">=") return Rel::GE;
        return Rel::GT;
    }

    Polynomial parse_expr() {
        Polynomial p = parse_term();
        while (true) {
            if (accept_punct("+"))
                p = p + parse_term();
            else if (accept_punct("-"))
                p = p - parse_term();
            else
                return p;
        }
    }

    Polynomial parse_term() {
        Polynomial p = parse_factor();
        while (accept_punct("*")) p = p * parse_factor();
        return p;
    }

    Polynomial parse_factor() {
        Polynomial base = parse_base();
        if (accept_punct("^")) {
            if (lex_.peek().kind != Token::Kind::Number) lex_.fail("expected integer exponent");
            std::string e = lex_.next().text;
            if (e.find('.') != std::string::npos) lex_.fail("exponents must be positive integers");
            BigInt be(e);
            if (be < 1 || be > (1u << 24)) lex_.fail("exponent out of range");
            return base.pow(be.convert_to<unsigned>());
        }
        return base;
    }

    Polynomial parse_base() {
        if (accept_punct("-")) return -parse_factor();
        if (accept_punct("(")) {
            Polynomial p = parse_expr();
            expect_punct(")");
            return p;
        }
        if (lex_.peek().kind == Token::Kind::Number) {
            std::string n = lex_.next().text;
            if (n.find('.') != std::string::npos)
                lex_.fail("polynomial coefficients must be integers");
            return Polynomial::constant(BigInt(n));
        }
        if (lex_.peek().kind == Token::Kind::Ident) {
            std::string name = parse_ident();
            if (name == "forall" || name == "exists" || name == "in")
                lex_.fail("keyword in expression position");
            return Polynomial::variable(name);
        }
        lex_.fail("expected expression");
    }

    // The lexer is cheap; state save/restore re-lexes from a position.
    std::size_t save_state() {
        saves_.push_back(lex_);
        return saves_.size() - 1;
    }
    void restore_state(std::size_t s) {
        lex_ = saves_[s];
        saves_.erase(saves_.begin() + static_cast<long>(s), saves_.end());
    }

    Lexer lex_;
    ParseOptions opts_;
    std::vector<Lexer> saves_;
};

}  // namespace

Rational parse_decimal_or_fraction(const std::string& text) {
    std::string s = text;
    bool neg = false;
    if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
        neg = s[0] == '-';
        s = s.substr(1);
    }
    Rational r;
    auto slash = s.find('/');
    auto dot = s.find('.');
    if (slash != std::string::npos) {
        BigInt n(s.substr(0, slash)), d(s.substr(slash + 1));
        if (d == 0) throw Error(Error::Kind::Parse, "zero denominator");
        r = Rational(n, d);
    } else if (dot != std::string::npos) {
        std::string ip = s.substr(0, dot), fp = s.substr(dot + 1);
        if (ip.empty()) ip = "0";
        BigInt scale = pow_big(10, BigInt(fp.size()));
        r = Rational(BigInt(ip) * scale + BigInt(fp.empty() ? "0" : fp), scale);
    } else {
        r = Rational(BigInt(s));
    }
    return neg ? Rational(-r) : r;
}

ParseResult parse_text(const std::string& text, const ParseOptions& opts) {
    Parser p(text, opts);
    return p.parse();
}

FormulaPtr parse_formula(const std::string& text, const ParseOptions& opts) {
    ParseResult r = parse_text(text, opts);
    if (!std::holds_alternative<FormulaPtr>(r))
        throw Error(Error::Kind::Parse, "expected a quantifier-free formula, got a sentence");
    return std::get<FormulaPtr>(r);
}

PrenexSentence parse_sentence(const std::string& text, const ParseOptions& opts) {
    ParseResult r = parse_text(text, opts);
    if (std::holds_alternative<PrenexSentence>(r)) return std::get<PrenexSentence>(r);
    throw Error(Error::Kind::Parse, "expected a quantified sentence");
}

// ---------------- printing ----------------

namespace {

void print_rec(const Formula& f, std::ostream& os, int parent_prec) {
    // precedence: Or = 1, And = 2, Not/Atom/Quant = 3
    switch (f.kind()) {
        case Formula::Kind::Atom:
            os << f.as_atom().lhs.to_string() << " " << rel_text(f.as_atom().rel) << " 0";
            break;
        case Formula::Kind::Or: {
            bool paren = parent_prec > 1;
            if (paren) os << "(";
            for (std::size_t i = 0; i < f.kids().size(); ++i) {
                if (i) os << " | ";
                print_rec(*f.kids()[i], os, 2);
            }
            if (paren) os << ")";
            break;
        }
        case Formula::Kind::And: {
            bool paren = parent_prec > 2;
            if (paren) os << "(";
            for (std::size_t i = 0; i < f.kids().size(); ++i) {
                if (i) os << " & ";
                print_rec(*f.kids()[i], os, 3);
            }
            if (paren) os << ")";
            break;
        }
        case Formula::Kind::Not:
            os << "!";
            if (f.kids()[0]->kind() == Formula::Kind::Atom ||
                f.kids()[0]->kind() == Formula::Kind::Not) {
                os << "(";
                print_rec(*f.kids()[0], os, 0);
                os << ")";
            } else {
                print_rec(*f.kids()[0], os, 3);
            }
            break;
        case Formula::Kind::Quant: {
            os << "(";
            const auto& b = f.block();
            os << (b.quant == Quant::Forall || b.quant == Quant::ForallStar ? "forall" : "exists");
            if (b.quant == Quant::ForallStar || b.quant == Quant::ExistsStar) os << "*";
            os << " ";
            for (std::size_t i = 0; i < b.vars.size(); ++i) {
                if (i) os << ", ";
                os << b.vars[i];
            }
            if (!b.range.is_all_reals()) {
                std::string hi = print_range_bound(b.range);
                os << " in [-" << hi << ", " << hi << "]";
            }
            os << " : ";
            print_rec(*f.kids()[0], os, 0);
            os << ")";
            break;
        }
    }
}

}  // namespace

std::string print_range_bound(const BlockRange& r) {
    if (r.is_all_reals()) throw Error(Error::Kind::Precondition, "unbounded range has no endpoint");
    if (std::holds_alternative<Rational>(*r.bound)) {
        const Rational& q = std::get<Rational>(*r.bound);
        if (den(q) == 1) return num(q).str();
        return num(q).str() + "/" + den(q).str();
    }
    // Only 2^2^N towers appear in printable ranges.
    const Tower& t = std::get<Tower>(*r.bound);
    auto lb = tower_log2_bounds(t);
    if (lb && lb->first == lb->second) {
        BigInt e = lb->first;
        BigInt n = e >= 1 ? floor_log2(e) : BigInt(0);
        if ((BigInt(1) << static_cast<std::size_t>(n.convert_to<long>())) == e)
            return "2^2^" + n.str();
    }
    throw Error(Error::Kind::Precondition, "range bound not printable: " + t.to_string());
}

std::string print_formula(const FormulaPtr& f) {
    std::ostringstream os;
    print_rec(*f, os, 0);
    return os.str();
}

std::string print_sentence(const PrenexSentence& s) {
    std::ostringstream os;
    for (std::size_t i = 0; i < s.blocks.size(); ++i) {
        const auto& b = s.blocks[i];
        os << (b.quant == Quant::Forall || b.quant == Quant::ForallStar ? "forall" : "exists");
        if (b.quant == Quant::ForallStar || b.quant == Quant::ExistsStar) os << "*";
        os << " ";
        for (std::size_t j = 0; j < b.vars.size(); ++j) {
            if (j) os << ", ";
            os << b.vars[j];
        }
        if (!b.range.is_all_reals()) {
            std::string hi = print_range_bound(b.range);
            os << " in [-" << hi << ", " << hi << "]";
        }
        os << (i + 1 == s.blocks.size() ? " : " : " . ");
    }
    print_rec(*s.matrix, os, 0);
    return os.str();
}

}  // namespace sar
