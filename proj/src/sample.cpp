#include "sar/sample.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace sar {

namespace {

void collect_eq_polys(const FormulaPtr& f, std::vector<Polynomial>& out) {
    if (f->kind() == Formula::Kind::Atom) {
        if (f->as_atom().rel == Rel::EQ) out.push_back(f->as_atom().lhs);
        return;
    }
    for (const auto& k : f->kids()) collect_eq_polys(k, out);
}

// Membership with equations relaxed to |P| <= slack (inequalities exact).
bool eval_relaxed(const FormulaPtr& f, const std::map<std::string, Rational>& pt,
                  const Rational& slack) {
    switch (f->kind()) {
        case Formula::Kind::Atom: {
            const Atom& a = f->as_atom();
            Rational v = a.lhs.eval(pt);
            if (a.rel == Rel::EQ) return abs_rat(v) <= slack;
            int sign = v == 0 ? 0 : (v < 0 ? -1 : 1);
            return rel_holds(a.rel, sign);
        }
        case Formula::Kind::Not:
            return !eval_relaxed(f->kids()[0], pt, slack);
        case Formula::Kind::And:
            for (const auto& k : f->kids())
                if (!eval_relaxed(k, pt, slack)) return false;
            return true;
        case Formula::Kind::Or:
            for (const auto& k : f->kids())
                if (eval_relaxed(k, pt, slack)) return true;
            return false;
        case Formula::Kind::Quant:
            throw Error(Error::Kind::Precondition, "defining formula must be quantifier-free");
    }
    return false;
}

}  // namespace

SampleResult sample_set(const SemiAlgebraicSet& S, const GridSpec& g) {
    if (S.ambient_dim == 0 || S.ambient_dim > 3)
        throw Error(Error::Kind::Precondition, "sample_set supports dimensions 1..3");
    const unsigned dim = S.ambient_dim;
    std::vector<ProbeAxis> axes;
    for (const auto& v : S.var_names) {
        ProbeAxis a = g.axis_for(v);
        if (a.scaled())
            throw Error(Error::Kind::Precondition, "sample_set expects unscaled axes");
        if (!(a.lo < a.hi)) throw Error(Error::Kind::Precondition, "axis box must satisfy lo < hi");
        if (a.cells < 2) throw Error(Error::Kind::Precondition, "resolution must be >= 2");
        axes.push_back(a);
    }

    std::vector<Rational> step(dim);
    Rational diag_sq = 0;
    for (unsigned i = 0; i < dim; ++i) {
        step[i] = (axes[i].hi - axes[i].lo) / Rational(axes[i].cells);
        diag_sq += step[i] * step[i];
    }
    // coverage tolerance: cell diagonal (conservative rational sqrt bound)
    Rational tol = 0;
    for (unsigned i = 0; i < dim; ++i) tol += step[i];  // |diag| <= sum of steps

    std::vector<Polynomial> eqs;
    collect_eq_polys(S.defining, eqs);

    SampleResult result;
    result.cloud.ambient_dim = dim;
    result.cloud.tolerance = tol;

    auto corner_value = [&](const std::vector<unsigned>& cell, unsigned mask,
                            const Polynomial& p) {
        std::map<std::string, Rational> pt;
        for (unsigned i = 0; i < dim; ++i) {
            unsigned idx = cell[i] + ((mask >> i) & 1u);
            pt[S.var_names[i]] = axes[i].lo + step[i] * Rational(idx);
        }
        return p.eval(pt);
    };

    std::vector<unsigned> cell(dim, 0);
    std::set<std::vector<Rational>> emitted;
    while (true) {
        // cell center
        std::map<std::string, Rational> center;
        for (unsigned i = 0; i < dim; ++i)
            center[S.var_names[i]] =
                axes[i].lo + step[i] * Rational(cell[i]) + step[i] / 2;
        if (eval_formula(S.defining, center)) {
            std::vector<Rational> p;
            for (unsigned i = 0; i < dim; ++i) p.push_back(center[S.var_names[i]]);
            if (emitted.insert(p).second) result.cloud.points.push_back(p);
        } else if (!eqs.empty()) {
            // refine equation roots along cell diagonals
            for (const auto& eq : eqs) {
                // main diagonal and its reflections
                for (unsigned diagmask = 0; diagmask < (1u << (dim - 1)); ++diagmask) {
                    unsigned m0 = diagmask;            // one end
                    unsigned m1 = (~diagmask) & ((1u << dim) - 1);  // opposite corner
                    Rational v0 = corner_value(cell, m0, eq);
                    Rational v1 = corner_value(cell, m1, eq);
                    if (v0 == 0 || v1 == 0 || (v0 < 0) == (v1 < 0)) continue;
                    // bisection along the segment corner(m0) -> corner(m1)
                    Rational t0 = 0, t1 = 1;
                    auto at = [&](const Rational& t) {
                        std::map<std::string, Rational> pt;
                        for (unsigned i = 0; i < dim; ++i) {
                            unsigned i0 = cell[i] + ((m0 >> i) & 1u);
                            unsigned i1 = cell[i] + ((m1 >> i) & 1u);
                            Rational c0 = axes[i].lo + step[i] * Rational(i0);
                            Rational c1 = axes[i].lo + step[i] * Rational(i1);
                            pt[S.var_names[i]] = c0 + (c1 - c0) * t;
                        }
                        return pt;
                    };
                    for (int it = 0; it < 24; ++it) {
                        Rational tm = (t0 + t1) / 2;
                        Rational vm = eq.eval(at(tm));
                        if (vm == 0) {
                            t0 = t1 = tm;
                            break;
                        }
                        if ((vm < 0) == (v0 < 0))
                            t0 = tm;
                        else
                            t1 = tm;
                    }
                    auto pt = at((t0 + t1) / 2);
                    // acceptance slack for the remaining constraints
                    Rational slack = tol / 4;
                    if (!eval_relaxed(S.defining, pt, slack)) continue;
                    std::vector<Rational> p;
                    for (unsigned i = 0; i < dim; ++i) p.push_back(pt[S.var_names[i]]);
                    if (emitted.insert(p).second) result.cloud.points.push_back(p);
                    break;  // one root per equation per cell is enough
                }
            }
        }
        // odometer
        unsigned k = 0;
        while (k < dim) {
            if (++cell[k] < axes[k].cells) break;
            cell[k] = 0;
            ++k;
        }
        if (k == dim) break;
    }

    if (result.cloud.points.empty()) result.possibly_missed_lower_dim = !eqs.empty();
    return result;
}

namespace {

struct Index3 {
    // uniform cells over the cloud's bounding box
    const std::vector<std::vector<double>>& pts;
    unsigned dim;
    double lo[3] = {0, 0, 0};
    double cell = 1;
    int ncell[3] = {1, 1, 1};
    std::map<std::array<int, 3>, std::vector<std::size_t>> buckets;

    Index3(const std::vector<std::vector<double>>& p, unsigned d) : pts(p), dim(d) {
        double hi[3] = {0, 0, 0};
        for (unsigned i = 0; i < dim; ++i) {
            lo[i] = std::numeric_limits<double>::infinity();
            hi[i] = -std::numeric_limits<double>::infinity();
        }
        for (const auto& q : pts)
            for (unsigned i = 0; i < dim; ++i) {
                lo[i] = std::min(lo[i], q[i]);
                hi[i] = std::max(hi[i], q[i]);
            }
        double extent = 0;
        for (unsigned i = 0; i < dim; ++i) extent = std::max(extent, hi[i] - lo[i]);
        double target = std::pow(static_cast<double>(pts.size()), 1.0 / dim);
        cell = extent > 0 ? extent / std::max(1.0, target) : 1.0;
        if (cell <= 0) cell = 1.0;
        for (unsigned i = 0; i < dim; ++i)
            ncell[i] = std::max(1, static_cast<int>((hi[i] - lo[i]) / cell) + 1);
        for (std::size_t j = 0; j < pts.size(); ++j) buckets[key(pts[j])].push_back(j);
    }

    std::array<int, 3> key(const std::vector<double>& q) const {
        std::array<int, 3> k{0, 0, 0};
        for (unsigned i = 0; i < dim; ++i)
            k[i] = std::max(0, std::min(ncell[i] - 1, static_cast<int>((q[i] - lo[i]) / cell)));
        return k;
    }

    static double dist2(const std::vector<double>& a, const std::vector<double>& b, unsigned dim) {
        double s = 0;
        for (unsigned i = 0; i < dim; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
        return s;
    }

    // nearest point index, deterministic tie-break by index
    std::size_t nearest(const std::vector<double>& q) const {
        std::array<int, 3> c = key(q);
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_idx = 0;
        bool found = false;
        int max_ring = ncell[0] + ncell[1] + ncell[2] + 2;
        for (int ring = 0; ring <= max_ring; ++ring) {
            int r1 = dim > 1 ? ring : 0;
            int r2 = dim > 2 ? ring : 0;
            for (int k0 = c[0] - ring; k0 <= c[0] + ring; ++k0) {
                if (k0 < 0 || k0 >= ncell[0]) continue;
                for (int k1 = c[1] - r1; k1 <= c[1] + r1; ++k1) {
                    if (k1 < 0 || (dim > 1 && k1 >= ncell[1])) continue;
                    for (int k2 = c[2] - r2; k2 <= c[2] + r2; ++k2) {
                        if (k2 < 0 || (dim > 2 && k2 >= ncell[2])) continue;
                        int cheb = std::abs(k0 - c[0]);
                        cheb = std::max(cheb, std::abs(k1 - c[1]));
                        cheb = std::max(cheb, std::abs(k2 - c[2]));
                        if (cheb != ring) continue;
                        auto it = buckets.find({k0, k1, k2});
                        if (it == buckets.end()) continue;
                        for (std::size_t j : it->second) {
                            double d = dist2(q, pts[j], dim);
                            if (!found || d < best || (d == best && j < best_idx)) {
                                best = d;
                                best_idx = j;
                                found = true;
                            }
                        }
                    }
                }
            }
            // Any point in an unscanned cell is at least ring*cell away.
            double cutoff = static_cast<double>(ring) * cell;
            if (found && best <= cutoff * cutoff) break;
        }
        return best_idx;
    }
};

std::vector<std::vector<double>> to_doubles(const PointCloud& c) {
    std::vector<std::vector<double>> out;
    out.reserve(c.points.size());
    for (const auto& p : c.points) {
        std::vector<double> q;
        for (const auto& r : p) q.push_back(r.convert_to<double>());
        out.push_back(std::move(q));
    }
    return out;
}

}  // namespace

DistanceEstimate directed_hausdorff(const PointCloud& P, const PointCloud& Q) {
    if (P.ambient_dim != Q.ambient_dim)
        throw Error(Error::Kind::DimensionMismatch, "clouds have different ambient dimensions");
    if (P.points.empty() || Q.points.empty())
        throw Error(Error::Kind::EmptyInput, "directed_hausdorff requires non-empty clouds");
    auto ps = to_doubles(P);
    auto qs = to_doubles(Q);
    Index3 index(qs, Q.ambient_dim);
    double best = -1;
    std::size_t best_p = 0, best_q = 0;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        std::size_t j = index.nearest(ps[i]);
        double d = std::sqrt(Index3::dist2(ps[i], qs[j], P.ambient_dim));
        if (d > best) {
            best = d;
            best_p = i;
            best_q = j;
        }
    }
    DistanceEstimate e;
    e.value = best;
    e.error = (P.tolerance + Q.tolerance).convert_to<double>() + 1e-12 * (1.0 + best);
    e.witness_p = P.points[best_p];
    e.witness_q = Q.points[best_q];
    return e;
}

DistanceEstimate hausdorff(const PointCloud& P, const PointCloud& Q) {
    DistanceEstimate a = directed_hausdorff(P, Q);
    DistanceEstimate b = directed_hausdorff(Q, P);
    // witness_p belongs to the realizing direction's source cloud
    DistanceEstimate out = (b.value > a.value) ? b : a;
    out.error = std::max(a.error, b.error);
    return out;
}

bool cloud_subset_exact(const PointCloud& P, const PointCloud& Q) {
    std::set<std::vector<Rational>> qs(Q.points.begin(), Q.points.end());
    for (const auto& p : P.points)
        if (!qs.count(p)) return false;
    return true;
}

RefinedPair refine_extremal_pair(const Polynomial& f, const Polynomial& g,
                                 std::array<double, 2> a0, std::array<double, 2> b0) {
    const std::string X = "x", Y = "y";
    Polynomial fx = f.derivative(X), fy = f.derivative(Y);
    Polynomial gx = g.derivative(X), gy = g.derivative(Y);

    auto evalp = [&](const Polynomial& p, double x, double y) {
        std::map<std::string, double> pt{{X, x}, {Y, y}};
        return p.eval_double(pt);
    };

    // unknowns v = (ax, ay, bx, by)
    auto residual = [&](const std::array<double, 4>& v, std::array<double, 4>& r) {
        double ax = v[0], ay = v[1], bx = v[2], by = v[3];
        double dfx = evalp(fx, ax, ay), dfy = evalp(fy, ax, ay);
        double dgx = evalp(gx, bx, by), dgy = evalp(gy, bx, by);
        r[0] = evalp(f, ax, ay);
        r[1] = evalp(g, bx, by);
        // grad f(a) parallel to (a - b): cross product zero
        r[2] = dfx * (ay - by) - dfy * (ax - bx);
        r[3] = dgx * (ay - by) - dgy * (ax - bx);
    };

    auto norm = [](const std::array<double, 4>& r) {
        return std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2] + r[3] * r[3]);
    };

    std::array<double, 4> v{a0[0], a0[1], b0[0], b0[1]};
    std::array<double, 4> r{};
    residual(v, r);
    double rn = norm(r);
    bool ok = false;
    for (int iter = 0; iter < 80; ++iter) {
        if (rn < 1e-10) {
            ok = true;
            break;
        }
        // numeric Jacobian
        double J[4][4];
        std::array<double, 4> rp{};
        for (int c = 0; c < 4; ++c) {
            double h = 1e-7 * (1.0 + std::abs(v[c]));
            auto vp = v;
            vp[c] += h;
            residual(vp, rp);
            for (int rw = 0; rw < 4; ++rw) J[rw][c] = (rp[rw] - r[rw]) / h;
        }
        // solve J dx = -r by Gaussian elimination with partial pivoting
        double A[4][5];
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) A[i][j] = J[i][j];
            A[i][4] = -r[i];
        }
        bool singular = false;
        for (int col = 0; col < 4; ++col) {
            int piv = col;
            for (int rw = col + 1; rw < 4; ++rw)
                if (std::abs(A[rw][col]) > std::abs(A[piv][col])) piv = rw;
            if (std::abs(A[piv][col]) < 1e-14) {
                singular = true;
                break;
            }
            std::swap(A[col], A[piv]);
            for (int rw = col + 1; rw < 4; ++rw) {
                double fmul = A[rw][col] / A[col][col];
                for (int j = col; j < 5; ++j) A[rw][j] -= fmul * A[col][j];
            }
        }
        if (singular) break;
        std::array<double, 4> dx{};
        for (int i = 3; i >= 0; --i) {
            double s = A[i][4];
            for (int j = i + 1; j < 4; ++j) s -= A[i][j] * dx[j];
            dx[i] = s / A[i][i];
        }
        // damped step
        double lambda = 1.0;
        bool improved = false;
        for (int half = 0; half < 30; ++half) {
            auto vn = v;
            for (int i = 0; i < 4; ++i) vn[i] += lambda * dx[i];
            std::array<double, 4> rn2{};
            residual(vn, rn2);
            if (norm(rn2) < rn) {
                v = vn;
                r = rn2;
                rn = norm(rn2);
                improved = true;
                break;
            }
            lambda /= 2;
        }
        if (!improved) break;
    }
    if (rn < 1e-10) ok = true;

    RefinedPair out;
    out.a = {v[0], v[1]};
    out.b = {v[2], v[3]};
    out.distance = std::sqrt((v[0] - v[2]) * (v[0] - v[2]) + (v[1] - v[3]) * (v[1] - v[3]));
    out.converged = ok;
    return out;
}

}  // namespace sar
