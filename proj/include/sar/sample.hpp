#pragma once

#include "sar/decide.hpp"
#include "sar/formula.hpp"

#include <array>
#include <vector>

namespace sar {

// Numeric stand-in for a semi-algebraic set: exact rational sample points
// plus a coverage tolerance (max distance from any true set point within the
// sampled box to its nearest representative, for sets that meet cells fairly).
struct PointCloud {
    unsigned ambient_dim = 0;
    std::vector<std::vector<Rational>> points;
    Rational tolerance = Rational(0);
};

struct SampleResult {
    PointCloud cloud;
    bool possibly_missed_lower_dim = false;  // empty result, set may be thin
};

// Samples S over the axes of g (per-variable boxes, cells per axis).
// Full-dimensional constraints contribute cell centers that satisfy the
// formula exactly; equation constraints contribute diagonal-bisection roots
// of sign-changing cells. Ambient dimension must be <= 3.
SampleResult sample_set(const SemiAlgebraicSet& S, const GridSpec& g);

struct DistanceEstimate {
    double value = 0;
    double error = 0;  // additive bound: sum of cloud tolerances + rounding
    std::vector<Rational> witness_p, witness_q;
};

// max over p of min over q of |p - q|, via a uniform-cell spatial index;
// deterministic (ties broken by point order).
DistanceEstimate directed_hausdorff(const PointCloud& P, const PointCloud& Q);
DistanceEstimate hausdorff(const PointCloud& P, const PointCloud& Q);

// Exact inclusion of P's points in Q's point set (the zero-distance path).
bool cloud_subset_exact(const PointCloud& P, const PointCloud& Q);

struct RefinedPair {
    std::array<double, 2> a{0, 0}, b{0, 0};
    double distance = 0;
    bool converged = false;
};

// Damped Newton on { f(a)=0, g(b)=0, grad f(a) x (a-b) = 0, grad g(b) x (a-b) = 0 }
// from the given seeds, to residual < 1e-10. Curves over variables (x, y).
RefinedPair refine_extremal_pair(const Polynomial& f, const Polynomial& g,
                                 std::array<double, 2> a0, std::array<double, 2> b0);

}  // namespace sar
