#pragma once

#include "sar/dyadic.hpp"
#include "sar/formula.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sar {

// Exact truth value of a quantifier-free formula at a rational point.
bool eval_formula(const FormulaPtr& f, const std::map<std::string, Rational>& point);

// One probe axis of the grid oracle. Probe values are scale * p for the
// cells+1 lattice points p of [lo, hi]. A non-unit scale lets tests probe a
// variable at the magnitude the pipelines assigned to it (e.g. 2^(-2^M));
// scaled axes require dyadic lattice points.
struct ProbeAxis {
    Rational lo = Rational(-1);
    Rational hi = Rational(1);
    unsigned cells = 16;
    Dyadic scale{BigInt(1), BigInt(0)};

    bool scaled() const { return !(scale.mantissa() == 1 && scale.exponent() == 0); }
};

struct GridSpec {
    std::map<std::string, ProbeAxis> axes;  // per-variable overrides
    ProbeAxis fallback;                     // used when a var has no override
    Rational margin = Rational(0);          // robustness threshold; 0 = exact

    ProbeAxis axis_for(const std::string& var) const {
        auto it = axes.find(var);
        return it == axes.end() ? fallback : it->second;
    }
    GridSpec with_margin(const Rational& m) const {
        GridSpec g = *this;
        g.margin = m;
        return g;
    }
};

enum class Verdict { True, False, Fragile };
const char* verdict_text(Verdict v);

struct OracleResult {
    // Fragile when the three-valued evaluation is undecided OR any evaluated
    // atom landed within `margin` of flipping (sticky fragility: a verdict
    // that leaned on near-boundary evaluations is not trusted).
    Verdict verdict = Verdict::Fragile;
    // The plain three-valued verdict, ignoring sticky boundary hits.
    Verdict kleene = Verdict::Fragile;
    bool boundary_hit = false;
    // Largest |unscaled probe value| over all existential witnesses actually
    // used to certify True subtrees (for box cross-checks).
    std::optional<Rational> max_witness_abs;
};

// Desk-scale truth oracle: evaluates the quantifier tree over lattice points.
// Requirements: classical quantifiers, every variable's probe range finite
// (block box or GridSpec axis), at most 2 quantifier alternations and at most
// 6 variables. The verdict Fragile means some decisive atom evaluation was
// within `margin` of flipping; such verdicts must not be trusted.
OracleResult oracle_decide(const PrenexSentence& s, const GridSpec& g);

// Lattice points x of the leading universal block for which the remainder of
// the sentence is False (decisively). Requires the leading block universal.
std::vector<std::vector<Rational>> oracle_counterexamples(const PrenexSentence& s, const GridSpec& g);

// Longest run of consecutive counterexample lattice indices along axis 0,
// in cells. 0 = no counterexamples; 1 = isolated points only.
std::size_t counterexample_run_cells(const PrenexSentence& s, const GridSpec& g);

}  // namespace sar
