#include "doctest.h"

#include "sar/decide.hpp"
#include "sar/io.hpp"
#include "sar/parse.hpp"
#include "sar/sample.hpp"

#include <cmath>
#include <random>

using namespace sar;

namespace {

Polynomial poly(const std::string& text) { return parse_formula(text + " = 0")->as_atom().lhs; }

ProbeAxis axis(const Rational& lo, const Rational& hi, unsigned cells) {
    ProbeAxis a;
    a.lo = lo;
    a.hi = hi;
    a.cells = cells;
    return a;
}

GridSpec grid1(const std::string& v, long lo, long hi, unsigned cells) {
    GridSpec g;
    g.axes[v] = axis(Rational(lo), Rational(hi), cells);
    return g;
}

}  // namespace

TEST_CASE("eval_formula examples") {
    auto disk = parse_formula("x^2 + y^2 <= 1");
    CHECK(eval_formula(disk, {{"x", Rational(0)}, {"y", Rational(0)}}));
    CHECK_FALSE(eval_formula(parse_formula("x*y > 1"), {{"x", Rational(1, 2)}, {"y", Rational(1)}}));
    auto f = parse_formula("x^4 + y^4 + 12*x^3 + 2*y^3 - 3*x*y + 11 = 0");
    CHECK_FALSE(eval_formula(f, {{"x", Rational(0)}, {"y", Rational(0)}}));  // value 11
    CHECK_THROWS_AS(eval_formula(disk, {{"x", Rational(0)}}), Error);
}

TEST_CASE("oracle: bounded xy > 1 is false with every lattice x a counterexample") {
    auto s = parse_sentence("forall x in [-1, 1] . exists y in [-1, 1] : x*y > 1");
    GridSpec g;
    g.fallback.cells = 64;
    auto r = oracle_decide(s, g);
    CHECK(r.verdict == Verdict::False);
    auto ces = oracle_counterexamples(s, g);
    CHECK(ces.size() == 65);  // all 64+1 lattice points
}

TEST_CASE("oracle: lattice alignment makes y = x true at margin 0") {
    auto s = parse_sentence("forall x in [-1, 1] . exists y in [-1, 1] : y = x");
    GridSpec g;
    g.fallback.cells = 16;
    CHECK(oracle_decide(s, g).verdict == Verdict::True);
}

TEST_CASE("oracle: near-threshold atom turns fragile at coarse margin") {
    // x*y > 1 touches its boundary at the lattice corners: exact at margin 0,
    // fragile once a positive margin flags the boundary evaluations.
    auto s = parse_sentence("forall x in [-1, 1] . exists y in [-1, 1] : x*y > 1");
    GridSpec g;
    g.fallback.cells = 64;
    CHECK(oracle_decide(s, g).verdict == Verdict::False);  // margin 0: exact
    g.margin = Rational(1, 100);
    auto r = oracle_decide(s, g);
    CHECK(r.verdict == Verdict::Fragile);
    CHECK(r.boundary_hit);
    CHECK(r.kleene == Verdict::False);  // the three-valued verdict is robust
}

TEST_CASE("oracle: unbounded-y variant shrinks counterexamples as the box grows") {
    auto s = parse_sentence("forall x . exists y : x*y > 1");
    GridSpec g10 = grid1("x", -1, 1, 64);
    g10.axes["y"] = axis(Rational(-10), Rational(10), 400);
    auto c10 = oracle_counterexamples(s, g10);
    GridSpec g100 = grid1("x", -1, 1, 64);
    g100.axes["y"] = axis(Rational(-100), Rational(100), 4000);
    auto c100 = oracle_counterexamples(s, g100);
    CHECK(c100.size() < c10.size());
    // both contain 0
    auto has_zero = [](const std::vector<std::vector<Rational>>& cs) {
        for (const auto& c : cs)
            if (c[0] == 0) return true;
        return false;
    };
    CHECK(has_zero(c10));
    CHECK(has_zero(c100));
}

TEST_CASE("oracle: witness magnitudes are tracked") {
    auto s = parse_sentence("forall x in [-2, 2] . exists y in [-8, 8] : y - 2*x = 0");
    GridSpec g;
    g.fallback.cells = 8;
    g.axes["y"] = axis(Rational(-8), Rational(8), 16);
    auto r = oracle_decide(s, g);
    CHECK(r.verdict == Verdict::True);
    REQUIRE(r.max_witness_abs.has_value());
    CHECK(*r.max_witness_abs == 4);  // y = 2x at x = +-2
}

TEST_CASE("oracle: preconditions") {
    auto s = parse_sentence("forall x . exists y : x*y > 1");
    GridSpec g;  // no axis for unbounded blocks
    CHECK_THROWS_AS(oracle_decide(s, g), Error);
    auto seven = parse_sentence(
        "forall a, b, c, d in [-1, 1] . exists e, f, g in [-1, 1] : a + b + c + d + e + f + g > 0");
    GridSpec g2;
    CHECK_THROWS_AS(oracle_decide(seven, g2), Error);  // 7 variables
}

TEST_CASE("oracle: scaled probe axes with dyadic tower constants") {
    // exists c : x * c > 0 at x pinned, c pinned to 2^(-2^10)
    PrenexSentence s;
    s.blocks = {QuantifierBlock{Quant::Forall, {"x"}, {}},
                QuantifierBlock{Quant::Exists, {"c"}, {}}};
    s.matrix = parse_formula("x*c > 0");
    GridSpec g = grid1("x", 1, 1, 1);
    ProbeAxis pinned;
    pinned.lo = pinned.hi = Rational(1);
    pinned.cells = 1;
    pinned.scale = Dyadic(BigInt(1), -(BigInt(1) << 10));
    g.axes["c"] = pinned;
    CHECK(oracle_decide(s, g).verdict == Verdict::True);

    // the tiny constant loses against a desk-scale negative term:
    // x*c - 1 > 0 is false although x*c > 0
    PrenexSentence s2 = s;
    s2.matrix = parse_formula("x*c - 1 > 0");
    CHECK(oracle_decide(s2, g).verdict == Verdict::False);
}

TEST_CASE("counterexample run measurement") {
    // forall x exists y : 16 x^2 - 1 > 0 is false exactly on |x| < 1/4
    auto s = parse_sentence("forall x in [-1, 1] . exists y in [-1, 1] : 16*x^2 - 1 > 0");
    GridSpec g;
    g.fallback.cells = 16;  // step 1/8: counterexamples at x in {-1/4..1/4} minus endpoints
    std::size_t run = counterexample_run_cells(s, g);
    CHECK(run >= 2);
    // isolated point: xy > 1 with huge y-box leaves only x = 0
    auto iso = parse_sentence("forall x in [-1, 1] . exists y : x*y > 1");
    GridSpec gi;
    gi.fallback.cells = 32;
    gi.axes["y"] = axis(Rational(-64), Rational(64), 4096);
    CHECK(counterexample_run_cells(iso, gi) == 1);
}

TEST_CASE("sample_set: unit circle") {
    SemiAlgebraicSet S;
    S.ambient_dim = 2;
    S.var_names = {"x", "y"};
    S.defining = parse_formula("x^2 + y^2 - 1 = 0");
    GridSpec g;
    g.axes["x"] = axis(Rational(-2), Rational(2), 256);
    g.axes["y"] = axis(Rational(-2), Rational(2), 256);
    auto r = sample_set(S, g);
    CHECK_FALSE(r.possibly_missed_lower_dim);
    CHECK(r.cloud.points.size() > 200);
    double worst = 0;
    for (const auto& p : r.cloud.points) {
        double x = p[0].convert_to<double>(), y = p[1].convert_to<double>();
        worst = std::max(worst, std::abs(std::sqrt(x * x + y * y) - 1.0));
    }
    CHECK(worst < 2e-3);
}

TEST_CASE("sample_set: empty set warns, disk members are exact") {
    SemiAlgebraicSet empty;
    empty.ambient_dim = 1;
    empty.var_names = {"x"};
    empty.defining = parse_formula("x^2 + 1 = 0");
    GridSpec g;
    g.axes["x"] = axis(Rational(-2), Rational(2), 64);
    auto r = sample_set(empty, g);
    CHECK(r.cloud.points.empty());
    CHECK(r.possibly_missed_lower_dim);

    SemiAlgebraicSet disk;
    disk.ambient_dim = 2;
    disk.var_names = {"x", "y"};
    disk.defining = parse_formula("x^2 + y^2 <= 1");
    GridSpec g2;
    g2.axes["x"] = axis(Rational(-2), Rational(2), 64);
    g2.axes["y"] = axis(Rational(-2), Rational(2), 64);
    auto rd = sample_set(disk, g2);
    // ~ pi/16 of the 64x64 cells
    CHECK(rd.cloud.points.size() > 700);
    for (const auto& p : rd.cloud.points)
        CHECK(eval_formula(disk.defining, {{"x", p[0]}, {"y", p[1]}}));
    // dimension guard
    SemiAlgebraicSet four;
    four.ambient_dim = 4;
    CHECK_THROWS_AS(sample_set(four, g2), Error);
}

TEST_CASE("directed and symmetric hausdorff on clouds") {
    PointCloud p, q;
    p.ambient_dim = q.ambient_dim = 2;
    p.tolerance = q.tolerance = Rational(0);
    for (int i = 0; i < 100; ++i) {
        double a = 2 * 3.14159265358979 * i / 100;
        p.points.push_back({Rational(static_cast<long>(1000 * std::cos(a)), 1000),
                            Rational(static_cast<long>(1000 * std::sin(a)), 1000)});
        q.points.push_back({Rational(static_cast<long>(2000 * std::cos(a)), 1000),
                            Rational(static_cast<long>(2000 * std::sin(a)), 1000)});
    }
    // P = Q -> 0, exact subset
    auto same = directed_hausdorff(p, p);
    CHECK(same.value == 0.0);
    CHECK(cloud_subset_exact(p, p));

    // concentric circles radii 1, 2: both directions ~ 1
    auto d1 = directed_hausdorff(p, q);
    auto d2 = directed_hausdorff(q, p);
    CHECK(std::abs(d1.value - 1.0) < 0.02);
    CHECK(std::abs(d2.value - 1.0) < 0.02);
    auto h = hausdorff(p, q);
    CHECK(std::abs(h.value - 1.0) < 0.02);

    // containment: P subset of Q gives directed 0, reverse positive
    PointCloud sub;
    sub.ambient_dim = 2;
    sub.points.assign(q.points.begin(), q.points.begin() + 10);
    CHECK(directed_hausdorff(sub, q).value == 0.0);
    CHECK(directed_hausdorff(q, sub).value > 0.0);

    CHECK_THROWS_AS(directed_hausdorff(PointCloud{2, {}, Rational(0)}, q), Error);
}

TEST_CASE("triangle-style sanity on random cloud triples") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 10; ++trial) {
        PointCloud a, b, c;
        a.ambient_dim = b.ambient_dim = c.ambient_dim = 2;
        auto fill = [&](PointCloud& cl) {
            int n = 5 + static_cast<int>(rng() % 20);
            for (int i = 0; i < n; ++i)
                cl.points.push_back({Rational(static_cast<long>(rng() % 2001) - 1000, 100),
                                     Rational(static_cast<long>(rng() % 2001) - 1000, 100)});
        };
        fill(a);
        fill(b);
        fill(c);
        double ab = hausdorff(a, b).value;
        double bc = hausdorff(b, c).value;
        double ac = hausdorff(a, c).value;
        CHECK(ac <= ab + bc + 1e-9);
    }
}

TEST_CASE("monotonicity under refinement: error bound never grows") {
    SemiAlgebraicSet circ;
    circ.ambient_dim = 2;
    circ.var_names = {"x", "y"};
    circ.defining = parse_formula("x^2 + y^2 - 1 = 0");
    Rational prev_err = -1;
    for (unsigned res : {64, 128, 256}) {
        GridSpec g;
        g.axes["x"] = axis(Rational(-2), Rational(2), res);
        g.axes["y"] = axis(Rational(-2), Rational(2), res);
        auto r = sample_set(circ, g);
        if (prev_err >= 0) CHECK(r.cloud.tolerance <= prev_err);
        prev_err = r.cloud.tolerance;
    }
}

TEST_CASE("refine_extremal_pair: concentric circles refine to distance 1") {
    Polynomial f = poly("x^2 + y^2 - 1");
    Polynomial g = poly("x^2 + y^2 - 4");
    auto r = refine_extremal_pair(f, g, {0.98, 0.05}, {1.95, 0.12});
    CHECK(r.converged);
    CHECK(std::abs(r.distance - 1.0) < 1e-10);
    // the witnesses sit on their curves
    CHECK(std::abs(f.eval_double({{"x", r.a[0]}, {"y", r.a[1]}})) < 1e-9);
    CHECK(std::abs(g.eval_double({{"x", r.b[0]}, {"y", r.b[1]}})) < 1e-9);

    // identical circles from a degenerate seed: flagged, not trusted
    auto deg = refine_extremal_pair(f, f, {1.0, 0.0}, {1.0, 0.0});
    CHECK((deg.converged == false || deg.distance < 1e-8));
}
