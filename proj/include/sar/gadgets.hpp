#pragma once

#include "sar/formula.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace sar {

// Deterministic fresh-name source. Machine-generated names use reserved
// prefixes starting with '_' which the parser refuses in user input.
class FreshCtx {
public:
    FreshCtx() = default;
    explicit FreshCtx(const std::vector<std::string>& taken) : used_(taken.begin(), taken.end()) {}

    void reserve(const std::string& name) { used_.insert(name); }
    void reserve_all(const std::vector<std::string>& names) { used_.insert(names.begin(), names.end()); }

    std::string fresh(const std::string& prefix) {
        while (true) {
            std::string cand = prefix + std::to_string(counter_++);
            if (used_.insert(cand).second) return cand;
        }
    }

private:
    std::set<std::string> used_;
    unsigned counter_ = 0;
};

// chi(U): (2*U0 = 1) and U_i = U_{i-1}^2 for i = 1..N. Unique solution in
// [-1,1]^(N+1) is u_i = 2^(-2^i).
FormulaPtr chi(unsigned n);                                    // over u0..uN
FormulaPtr chi_over(const std::vector<std::string>& chain);    // custom names

// Exact chain solution u_i = 2^(-2^i).
std::vector<Rational> chi_solution(unsigned n);        // materialized; n small
std::vector<Dyadic> chi_solution_dyadic(unsigned n);   // any n

// Recognizes a chi conjunct inside a top-level conjunction; returns the chain
// variable names in order if found.
std::optional<std::vector<std::string>> find_chi_chain(const FormulaPtr& matrix);

// P < 0  ->  Z^2*P + 1 < 0 with a fresh existential Z. Over unbounded Z the
// two are equivalent; restricted to Z in [-D,D] the new atom forces
// P < -1/D^2.
std::pair<Atom, std::string> strengthen_atom(const Atom& a, FreshCtx& ctx);

// Core scaler: substitutes var -> var / u_{e(var)} for every var in `scales`,
// multiplies each atom through by u_K^d and eliminates all divisions via the
// chain identity u_K / u_e = prod_{j=e}^{K-1} u_j. Atoms over chain variables
// only (the chi conjunct) are left untouched.
FormulaPtr scale_matrix(const FormulaPtr& matrix, const std::map<std::string, unsigned>& scales,
                        const std::vector<std::string>& chain, unsigned k_exp, unsigned degree);

// Spec-shaped wrapper: rescales one block of a prenex sentence whose matrix
// carries a chi(U) conjunct over chain u0..uK, from box [-2^2^e, 2^2^e] to
// [-1,1]. Errors: missing chi conjunct; K < e.
PrenexSentence scale_block(const PrenexSentence& s, std::size_t block_index, unsigned k_exp,
                           unsigned e_exp, unsigned degree);

// ---- Tseitin flattening ----

struct WitnessRule {
    enum class Kind { Poly, Sqrt, Inv, InvSqrt };
    std::string var;
    Kind kind = Kind::Poly;
    Polynomial expr;  // var = expr / sqrt(expr) / 1/expr / 1/sqrt(expr)
};

struct TseitinSystem {
    std::vector<Polynomial> equations;     // interpret as: all equal 0
    std::vector<std::string> fresh_vars;   // existentially projected
    std::vector<WitnessRule> witness;      // dependency order
};

// {x | f(x)} = {x | exists Y: /\ F_i(x,Y) = 0}, each F_i of degree <= 2.
TseitinSystem tseitin_quadratic(const FormulaPtr& f);
TseitinSystem tseitin_quadratic(const FormulaPtr& f, FreshCtx& ctx);

struct TseitinQuartic {
    Polynomial equation;  // degree <= 4, sum of squares of the quadratic system
    std::vector<std::string> fresh_vars;
    std::vector<WitnessRule> witness;
};

// {x | f(x)} = {x | exists Y: F(x,Y) = 0}, F of degree <= 4.
TseitinQuartic tseitin_quartic(const FormulaPtr& f);
TseitinQuartic tseitin_quartic(const FormulaPtr& f, FreshCtx& ctx);

// Evaluates the witness rules at a point (doubles). Rules whose radicand or
// divisor is out of domain assign 0; the caller decides membership from the
// final equation residuals.
std::map<std::string, double> eval_witness(const std::vector<WitnessRule>& rules,
                                           std::map<std::string, double> point);

// Largest magnitude-normalized equation residual at the point:
// |F(p)| / (1 + sum of |term values|). Near machine epsilon exactly when the
// equations are satisfied.
double witness_residual(const std::vector<Polynomial>& equations,
                        const std::map<std::string, double>& point);

}  // namespace sar
