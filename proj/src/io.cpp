#include "sar/io.hpp"

#include "sar/parse.hpp"

#include "json.hpp"

#include <algorithm>
#include <sstream>

namespace sar {

using nlohmann::json;

std::string rational_to_decimal_or_fraction(const Rational& r) {
    BigInt n = num(r), d = den(r);
    if (d == 1) return n.str();
    // terminating decimal iff d = 2^a * 5^b
    BigInt dd = d;
    unsigned a = 0, b = 0;
    while (dd % 2 == 0) {
        dd /= 2;
        ++a;
    }
    while (dd % 5 == 0) {
        dd /= 5;
        ++b;
    }
    if (dd != 1) return n.str() + "/" + d.str();
    unsigned digits = std::max(a, b);
    BigInt scale = pow_big(10, digits);
    BigInt scaled = n * (scale / d);
    bool neg = scaled < 0;
    std::string s = BigInt(boost::multiprecision::abs(scaled)).str();
    while (s.size() <= digits) s.insert(s.begin(), '0');
    s.insert(s.size() - digits, ".");
    return (neg ? "-" : "") + s;
}

std::string instance_to_json(const HausdorffInstance& h) {
    json j;
    j["n"] = h.A.ambient_dim;
    j["vars"] = h.A.var_names;
    j["phiA"] = print_formula(h.A.defining);
    j["phiB"] = print_formula(h.B.defining);
    j["t"] = {{"num", num(h.t).str()}, {"den", den(h.t).str()}};
    j["directed"] = h.directed;
    json meta = json::object();
    for (const auto& [k, v] : h.meta) meta[k] = v;
    j["meta"] = meta;
    return j.dump(2) + "\n";
}

HausdorffInstance instance_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(Error::Kind::Parse, std::string("instance JSON: ") + e.what());
    }
    HausdorffInstance h;
    if (!j.contains("n") || !j.contains("phiA") || !j.contains("phiB") || !j.contains("t"))
        throw Error(Error::Kind::Parse, "instance JSON missing required fields");
    unsigned n = j["n"].get<unsigned>();
    ParseOptions opts;
    opts.allow_reserved = true;
    h.A.ambient_dim = h.B.ambient_dim = n;
    if (j.contains("vars")) {
        h.A.var_names = j["vars"].get<std::vector<std::string>>();
    } else {
        for (unsigned i = 1; i <= n; ++i) h.A.var_names.push_back("x" + std::to_string(i));
    }
    if (h.A.var_names.size() != n)
        throw Error(Error::Kind::Parse, "vars length does not match n");
    h.B.var_names = h.A.var_names;
    h.A.defining = parse_formula(j["phiA"].get<std::string>(), opts);
    h.B.defining = parse_formula(j["phiB"].get<std::string>(), opts);
    BigInt tn(j["t"]["num"].get<std::string>());
    BigInt td(j["t"]["den"].get<std::string>());
    if (td <= 0) throw Error(Error::Kind::Parse, "threshold denominator must be positive");
    h.t = Rational(tn, td);
    if (h.t < 0) throw Error(Error::Kind::Parse, "threshold must be >= 0");
    h.directed = j.value("directed", false);
    if (j.contains("meta"))
        for (auto& [k, v] : j["meta"].items()) h.meta[k] = v.is_string() ? v.get<std::string>() : v.dump();
    return h;
}

std::string cloud_to_csv(const PointCloud& c) {
    std::ostringstream os;
    os << "# dim=" << c.ambient_dim << " tolerance=" << rational_to_decimal_or_fraction(c.tolerance)
       << "\n";
    for (const auto& p : c.points) {
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (i) os << ",";
            os << rational_to_decimal_or_fraction(p[i]);
        }
        os << "\n";
    }
    return os.str();
}

PointCloud cloud_from_csv(const std::string& text) {
    PointCloud c;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            auto dpos = line.find("dim=");
            if (dpos != std::string::npos) c.ambient_dim = std::stoul(line.substr(dpos + 4));
            auto tpos = line.find("tolerance=");
            if (tpos != std::string::npos)
                c.tolerance = parse_decimal_or_fraction(line.substr(tpos + 10));
            continue;
        }
        std::vector<Rational> p;
        std::istringstream ls(line);
        std::string field;
        while (std::getline(ls, field, ',')) p.push_back(parse_decimal_or_fraction(field));
        if (c.ambient_dim == 0) c.ambient_dim = static_cast<unsigned>(p.size());
        if (p.size() != c.ambient_dim)
            throw Error(Error::Kind::Parse, "CSV row has wrong coordinate count");
        c.points.push_back(std::move(p));
    }
    return c;
}

// ---------------- SMT-LIB2 ----------------

namespace {

void smt_poly(const Polynomial& p, std::ostream& os) {
    if (p.is_zero()) {
        os << "0";
        return;
    }
    // deterministic order: the canonical term map order
    std::vector<std::string> terms;
    for (const auto& [m, c] : p.terms()) {
        std::ostringstream t;
        BigInt a = c < 0 ? BigInt(-c) : c;
        std::size_t factors = m.empty() ? 1 : 0;
        for (const auto& [v, e] : m) factors += e;
        bool coeff = a != 1 || m.empty();
        std::size_t nmul = factors + (coeff && !m.empty() ? 1 : 0);
        if (nmul > 1) t << "(* ";
        bool first = true;
        if (coeff) {
            t << a.str();
            first = false;
        }
        for (const auto& [v, e] : m)
            for (unsigned i = 0; i < e; ++i) {
                if (!first) t << " ";
                t << v;
                first = false;
            }
        if (nmul > 1) t << ")";
        if (c < 0) terms.push_back("(- " + t.str() + ")");
        else terms.push_back(t.str());
    }
    if (terms.size() == 1) {
        os << terms[0];
        return;
    }
    os << "(+";
    for (const auto& t : terms) os << " " << t;
    os << ")";
}

void smt_formula(const Formula& f, std::ostream& os) {
    switch (f.kind()) {
        case Formula::Kind::Atom: {
            const Atom& a = f.as_atom();
            const char* op = nullptr;
            bool negate = false;
            switch (a.rel) {
                case Rel::LT: op = "<"; break;
                case Rel::LE: op = "<="; break;
                case Rel::EQ: op = "="; break;
                case Rel::GE: op = ">="; break;
                case Rel::GT: op = ">"; break;
                case Rel::NE:
                    op = "=";
                    negate = true;
                    break;
            }
            if (negate) os << "(not ";
            os << "(" << op << " ";
            smt_poly(a.lhs, os);
            os << " 0)";
            if (negate) os << ")";
            break;
        }
        case Formula::Kind::And:
        case Formula::Kind::Or: {
            os << (f.kind() == Formula::Kind::And ? "(and" : "(or");
            for (const auto& k : f.kids()) {
                os << " ";
                smt_formula(*k, os);
            }
            os << ")";
            break;
        }
        case Formula::Kind::Not:
            os << "(not ";
            smt_formula(*f.kids()[0], os);
            os << ")";
            break;
        case Formula::Kind::Quant:
            throw Error(Error::Kind::Precondition, "nested quantifiers: prenex first");
    }
}

std::string smt_rational(const Rational& r) {
    BigInt n = num(r), d = den(r);
    std::string ns = n < 0 ? "(- " + BigInt(-n).str() + ")" : n.str();
    if (d == 1) return ns;
    return "(/ " + ns + " " + d.str() + ")";
}

}  // namespace

std::string export_smt2(const PrenexSentence& s) {
    for (const auto& b : s.blocks)
        if (b.quant == Quant::ForallStar || b.quant == Quant::ExistsStar)
            throw Error(Error::Kind::Precondition,
                        "exotic quantifiers cannot be exported; expand them first");
    std::ostringstream os;
    os << "(set-logic NRA)\n";
    // body built inside out
    std::ostringstream body;
    smt_formula(*s.matrix, body);
    std::string inner = body.str();
    for (auto it = s.blocks.rbegin(); it != s.blocks.rend(); ++it) {
        std::ostringstream q;
        bool forall = it->quant == Quant::Forall;
        q << (forall ? "(forall (" : "(exists (");
        for (std::size_t i = 0; i < it->vars.size(); ++i) {
            if (i) q << " ";
            q << "(" << it->vars[i] << " Real)";
        }
        q << ") ";
        if (!it->range.is_all_reals()) {
            if (!std::holds_alternative<Rational>(*it->range.bound))
                throw Error(Error::Kind::Precondition, "tower-bounded block cannot be exported");
            Rational hi = std::get<Rational>(*it->range.bound);
            std::ostringstream guard;
            guard << "(and";
            for (const auto& v : it->vars)
                guard << " (<= (- " << smt_rational(hi) << ") " << v << ") (<= " << v << " "
                      << smt_rational(hi) << ")";
            guard << ")";
            if (forall)
                inner = "(=> " + guard.str() + " " + inner + ")";
            else
                inner = "(and " + guard.str() + " " + inner + ")";
        }
        q << inner << ")";
        inner = q.str();
    }
    os << "(assert " << inner << ")\n(check-sat)\n";
    return os.str();
}

// ---------------- SVG ----------------

std::string clouds_to_svg(const std::vector<PointCloud>& clouds,
                          const std::vector<Rational>* seg_a, const std::vector<Rational>* seg_b) {
    double lo_x = -1, hi_x = 1, lo_y = -1, hi_y = 1;
    bool first = true;
    auto upd = [&](double x, double y) {
        if (first) {
            lo_x = hi_x = x;
            lo_y = hi_y = y;
            first = false;
            return;
        }
        lo_x = std::min(lo_x, x);
        hi_x = std::max(hi_x, x);
        lo_y = std::min(lo_y, y);
        hi_y = std::max(hi_y, y);
    };
    for (const auto& c : clouds)
        for (const auto& p : c.points)
            if (p.size() >= 2) upd(p[0].convert_to<double>(), p[1].convert_to<double>());
    if (first) upd(0, 0);
    double w = std::max(1e-6, hi_x - lo_x), h = std::max(1e-6, hi_y - lo_y);
    double margin = 0.05 * std::max(w, h);
    lo_x -= margin;
    hi_x += margin;
    lo_y -= margin;
    hi_y += margin;
    w = hi_x - lo_x;
    h = hi_y - lo_y;
    const double W = 800, H = 800;
    auto sx = [&](double x) { return (x - lo_x) / w * W; };
    auto sy = [&](double y) { return H - (y - lo_y) / h * H; };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
       << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    const char* colors[] = {"#1f6fb5", "#2e9e4f", "#c23b22", "#8a2be2"};
    for (std::size_t ci = 0; ci < clouds.size(); ++ci) {
        os << "  <g fill=\"" << colors[ci % 4] << "\">\n";
        for (const auto& p : clouds[ci].points) {
            if (p.size() < 2) continue;
            os << "    <circle cx=\"" << sx(p[0].convert_to<double>()) << "\" cy=\""
               << sy(p[1].convert_to<double>()) << "\" r=\"1.2\"/>\n";
        }
        os << "  </g>\n";
    }
    if (seg_a && seg_b && seg_a->size() >= 2 && seg_b->size() >= 2) {
        os << "  <line x1=\"" << sx((*seg_a)[0].convert_to<double>()) << "\" y1=\""
           << sy((*seg_a)[1].convert_to<double>()) << "\" x2=\"" << sx((*seg_b)[0].convert_to<double>())
           << "\" y2=\"" << sy((*seg_b)[1].convert_to<double>())
           << "\" stroke=\"#e0a000\" stroke-width=\"2.5\"/>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace sar
