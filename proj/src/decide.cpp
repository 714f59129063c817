#include "sar/decide.hpp"

#include <algorithm>

namespace sar {

const char* verdict_text(Verdict v) {
    switch (v) {
        case Verdict::True: return "true";
        case Verdict::False: return "false";
        case Verdict::Fragile: return "fragile";
    }
    return "?";
}

namespace {

// Kleene values: -1 false, 0 unknown, +1 true.
int kleene_not(int v) { return -v; }

struct ProbeValue {
    Rational raw;                  // lattice coordinate before scaling
    std::optional<Dyadic> dyadic;  // scale * raw when exactly representable
    bool scaled = false;
};

struct VarInfo {
    std::string name;
    std::size_t block = 0;
    std::vector<ProbeValue> values;
    bool scaled = false;
};

struct Evaluator {
    const PrenexSentence& s;
    const GridSpec& g;
    std::vector<VarInfo> vars;                    // in block order
    std::vector<std::vector<std::size_t>> by_block;
    std::map<std::string, std::size_t> index_of;
    std::vector<std::size_t> current;             // chosen value index per var
    std::vector<bool> assigned;
    bool track_witness = true;
    Rational max_witness = 0;
    bool have_witness = false;
    bool boundary_hit = false;

    explicit Evaluator(const PrenexSentence& sent, const GridSpec& grid) : s(sent), g(grid) {
        std::size_t total_vars = 0;
        int alternations = 0;
        for (std::size_t i = 0; i < s.blocks.size(); ++i) {
            const auto& b = s.blocks[i];
            if (b.quant == Quant::ForallStar || b.quant == Quant::ExistsStar)
                throw Error(Error::Kind::Precondition,
                            "oracle_decide handles classical quantifiers only (expand exotic ones first)");
            if (i > 0 && s.blocks[i].quant != s.blocks[i - 1].quant) ++alternations;
            total_vars += b.vars.size();
        }
        if (alternations > 2)
            throw Error(Error::Kind::Precondition, "oracle_decide: more than 2 quantifier alternations");
        if (total_vars > 6)
            throw Error(Error::Kind::Precondition, "oracle_decide: more than 6 variables");

        by_block.resize(s.blocks.size());
        for (std::size_t i = 0; i < s.blocks.size(); ++i) {
            for (const auto& v : s.blocks[i].vars) {
                VarInfo info;
                info.name = v;
                info.block = i;
                ProbeAxis axis = resolve_axis(v, s.blocks[i]);
                fill_values(info, axis);
                index_of[v] = vars.size();
                by_block[i].push_back(vars.size());
                vars.push_back(std::move(info));
            }
        }
        current.assign(vars.size(), 0);
        assigned.assign(vars.size(), false);
        if (g.margin < 0) throw Error(Error::Kind::Precondition, "margin must be >= 0");
    }

    ProbeAxis resolve_axis(const std::string& v, const QuantifierBlock& b) const {
        auto it = g.axes.find(v);
        if (it != g.axes.end()) return it->second;
        if (!b.range.is_all_reals()) {
            if (std::holds_alternative<Rational>(*b.range.bound)) {
                ProbeAxis a = g.fallback;
                a.hi = std::get<Rational>(*b.range.bound);
                a.lo = -a.hi;
                a.scale = Dyadic(BigInt(1), BigInt(0));
                return a;
            }
            throw Error(Error::Kind::Precondition,
                        "block box for " + v + " is a tower; provide a probe axis");
        }
        throw Error(Error::Kind::Precondition, "unbounded block variable without probe axis: " + v);
    }

    void fill_values(VarInfo& info, const ProbeAxis& axis) {
        if (axis.cells < 1) throw Error(Error::Kind::Precondition, "probe axis needs >= 1 cell");
        info.scaled = axis.scaled();
        Rational width = axis.hi - axis.lo;
        unsigned steps = (width == 0) ? 0 : axis.cells;
        for (unsigned i = 0; i <= steps; ++i) {
            ProbeValue pv;
            pv.raw = axis.lo + width * Rational(i, steps == 0 ? 1 : steps);
            pv.scaled = info.scaled;
            if (Dyadic::rational_is_dyadic(pv.raw)) {
                pv.dyadic = Dyadic::from_rational(pv.raw) * axis.scale;
            } else if (info.scaled) {
                throw Error(Error::Kind::Precondition,
                            "scaled probe axis requires dyadic lattice points for " + info.name);
            }
            info.values.push_back(std::move(pv));
        }
    }

    // ---- atom evaluation ----
    int eval_atom(const Atom& a) {
        bool need_dyadic = false;
        for (const auto& v : a.lhs.vars()) {
            auto it = index_of.find(v);
            if (it == index_of.end())
                throw Error(Error::Kind::MissingAssignment, "unassigned variable: " + v);
            if (!assigned[it->second])
                throw Error(Error::Kind::MissingAssignment, "variable probed out of scope: " + v);
            if (vars[it->second].scaled) need_dyadic = true;
        }
        if (need_dyadic) return eval_atom_dyadic(a);
        return eval_atom_rational(a);
    }

    int truth_with_margin(Rel rel, int sign, bool within_margin) {
        if (within_margin) {
            boundary_hit = true;
            return 0;
        }
        return rel_holds(rel, sign) ? 1 : -1;
    }

    int eval_atom_rational(const Atom& a) {
        std::map<std::string, Rational> pt;
        for (const auto& v : a.lhs.vars()) pt[v] = vars[index_of[v]].values[current[index_of[v]]].raw;
        Rational val = a.lhs.eval(pt);
        bool within = g.margin > 0 && abs_rat(val) < g.margin;
        int sign = val == 0 ? 0 : (val < 0 ? -1 : 1);
        return truth_with_margin(a.rel, sign, within);
    }

    int eval_atom_dyadic(const Atom& a) {
        std::map<std::string, Dyadic> pt;
        for (const auto& v : a.lhs.vars()) {
            const auto& pv = vars[index_of[v]].values[current[index_of[v]]];
            if (!pv.dyadic)
                throw Error(Error::Kind::Precondition, "non-dyadic probe value in scaled evaluation");
            pt[v] = *pv.dyadic;
        }
        DyadicSum sum = a.lhs.eval_dyadic(pt);
        int sign = sum.sign();
        bool within = false;
        if (g.margin > 0) {
            if (sign == 0) {
                within = true;
            } else {
                if (!Dyadic::rational_is_dyadic(g.margin))
                    throw Error(Error::Kind::Precondition,
                                "scaled evaluation requires a dyadic margin (or 0)");
                DyadicSum m;
                for (const auto& t : sum.terms()) m.add(sign > 0 ? t : -t);  // |value|
                m.add(-Dyadic::from_rational(g.margin));
                within = m.sign() < 0;
            }
        }
        return truth_with_margin(a.rel, sign, within);
    }

    int eval_matrix(const Formula& f) {
        switch (f.kind()) {
            case Formula::Kind::Atom:
                return eval_atom(f.as_atom());
            case Formula::Kind::Not:
                return kleene_not(eval_matrix(*f.kids()[0]));
            case Formula::Kind::And: {
                int acc = 1;
                for (const auto& k : f.kids()) {
                    acc = std::min(acc, eval_matrix(*k));
                    if (acc == -1) break;
                }
                return acc;
            }
            case Formula::Kind::Or: {
                int acc = -1;
                for (const auto& k : f.kids()) {
                    acc = std::max(acc, eval_matrix(*k));
                    if (acc == 1) break;
                }
                return acc;
            }
            case Formula::Kind::Quant:
                throw Error(Error::Kind::Precondition, "matrix must be quantifier-free");
        }
        return 0;
    }

    void note_witness(const std::vector<std::size_t>& block_vars) {
        if (!track_witness) return;
        for (std::size_t vi : block_vars) {
            const auto& pv = vars[vi].values[current[vi]];
            if (pv.scaled) continue;  // tower-scaled magnitudes are not comparable here
            Rational mag = abs_rat(pv.raw);
            if (!have_witness || mag > max_witness) {
                max_witness = mag;
                have_witness = true;
            }
        }
    }

    int eval_blocks(std::size_t bi) {
        if (bi == s.blocks.size()) return eval_matrix(*s.matrix);
        const auto& vars_here = by_block[bi];
        bool is_forall = s.blocks[bi].quant == Quant::Forall;
        int acc = is_forall ? 1 : -1;
        // odometer over the block's lattice product
        std::vector<std::size_t> idx(vars_here.size(), 0);
        for (std::size_t vi : vars_here) assigned[vi] = true;
        while (true) {
            for (std::size_t k = 0; k < vars_here.size(); ++k) current[vars_here[k]] = idx[k];
            int v = eval_blocks(bi + 1);
            if (is_forall) {
                acc = std::min(acc, v);
                if (acc == -1) break;
            } else {
                if (v == 1) note_witness(vars_here);
                acc = std::max(acc, v);
                if (acc == 1) break;
            }
            // advance odometer
            std::size_t k = 0;
            while (k < idx.size()) {
                if (++idx[k] < vars[vars_here[k]].values.size()) break;
                idx[k] = 0;
                ++k;
            }
            if (k == idx.size()) break;
        }
        for (std::size_t vi : vars_here) assigned[vi] = false;
        return acc;
    }
};

}  // namespace

bool eval_formula(const FormulaPtr& f, const std::map<std::string, Rational>& point) {
    switch (f->kind()) {
        case Formula::Kind::Atom: {
            Rational v = f->as_atom().lhs.eval(point);
            int sign = v == 0 ? 0 : (v < 0 ? -1 : 1);
            return rel_holds(f->as_atom().rel, sign);
        }
        case Formula::Kind::Not:
            return !eval_formula(f->kids()[0], point);
        case Formula::Kind::And:
            for (const auto& k : f->kids())
                if (!eval_formula(k, point)) return false;
            return true;
        case Formula::Kind::Or:
            for (const auto& k : f->kids())
                if (eval_formula(k, point)) return true;
            return false;
        case Formula::Kind::Quant:
            throw Error(Error::Kind::Precondition, "eval_formula requires a quantifier-free formula");
    }
    return false;
}

OracleResult oracle_decide(const PrenexSentence& s, const GridSpec& g) {
    Evaluator ev(s, g);
    int v = ev.eval_blocks(0);
    OracleResult r;
    r.kleene = v == 1 ? Verdict::True : (v == -1 ? Verdict::False : Verdict::Fragile);
    r.boundary_hit = ev.boundary_hit;
    r.verdict = ev.boundary_hit ? Verdict::Fragile : r.kleene;
    if (ev.have_witness) r.max_witness_abs = ev.max_witness;
    return r;
}

std::vector<std::vector<Rational>> oracle_counterexamples(const PrenexSentence& s, const GridSpec& g) {
    if (s.blocks.empty() || s.blocks[0].quant != Quant::Forall)
        throw Error(Error::Kind::Precondition, "counterexample scan requires a leading universal block");
    PrenexSentence rest;
    rest.blocks.assign(s.blocks.begin() + 1, s.blocks.end());
    rest.matrix = s.matrix;

    Evaluator outer(s, g);  // validates sizes and builds probe values
    const auto& lead = outer.by_block[0];
    std::vector<std::vector<Rational>> result;
    std::vector<std::size_t> idx(lead.size(), 0);
    while (true) {
        GridSpec inner = g;
        std::vector<Rational> point;
        for (std::size_t k = 0; k < lead.size(); ++k) {
            const auto& vi = outer.vars[lead[k]];
            const auto& pv = vi.values[idx[k]];
            point.push_back(pv.raw);
            ProbeAxis pin;
            pin.lo = pin.hi = pv.raw;
            pin.cells = 1;
            pin.scale = outer.g.axis_for(vi.name).scale;
            inner.axes[vi.name] = pin;
        }
        // keep the leading vars bound in the reduced sentence
        PrenexSentence probe;
        QuantifierBlock pinned;
        pinned.quant = Quant::Exists;  // single-point lattice, quantifier moot
        for (std::size_t k = 0; k < lead.size(); ++k) pinned.vars.push_back(outer.vars[lead[k]].name);
        probe.blocks.push_back(pinned);
        for (std::size_t i = 1; i < s.blocks.size(); ++i) probe.blocks.push_back(s.blocks[i]);
        probe.matrix = s.matrix;
        OracleResult r = oracle_decide(probe, inner);
        if (r.verdict == Verdict::False) result.push_back(point);

        std::size_t k = 0;
        while (k < idx.size()) {
            if (++idx[k] < outer.vars[lead[k]].values.size()) break;
            idx[k] = 0;
            ++k;
        }
        if (k == idx.size()) break;
    }
    return result;
}

std::size_t counterexample_run_cells(const PrenexSentence& s, const GridSpec& g) {
    if (s.blocks.empty() || s.blocks[0].quant != Quant::Forall)
        throw Error(Error::Kind::Precondition, "counterexample scan requires a leading universal block");
    auto ces = oracle_counterexamples(s, g);
    if (ces.empty()) return 0;
    // Measure along the first universal variable, other coordinates fixed to
    // those of the first counterexample.
    std::vector<Rational> anchor = ces.front();
    std::vector<Rational> axis_points;
    for (const auto& ce : ces) {
        bool same = true;
        for (std::size_t i = 1; i < ce.size(); ++i)
            if (ce[i] != anchor[i]) same = false;
        if (same) axis_points.push_back(ce[0]);
    }
    std::sort(axis_points.begin(), axis_points.end());
    ProbeAxis ax = g.axis_for(s.blocks[0].vars[0]);
    Rational step = (ax.hi - ax.lo) / Rational(ax.cells);
    std::size_t best = 1, run = 1;
    for (std::size_t i = 1; i < axis_points.size(); ++i) {
        if (axis_points[i] - axis_points[i - 1] == step)
            ++run;
        else
            run = 1;
        best = std::max(best, run);
    }
    return best;
}

}  // namespace sar
