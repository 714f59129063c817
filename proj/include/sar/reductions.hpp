#pragma once

#include "sar/bounds.hpp"
#include "sar/decide.hpp"
#include "sar/formula.hpp"
#include "sar/gadgets.hpp"

#include <map>
#include <optional>
#include <string>

namespace sar {

// Desk-scale execution controls. The faithful range exponents are doubly
// exponential in effect (M >= 80 already for the smallest inputs, so
// D = 2^(2^80)); with exponent_cap set, a computed exponent e is replaced by
// min(e, cap) and both values are recorded in the output info. Without a cap
// the construction refuses when it would exceed max_vars variables.
struct PipelineLimits {
    std::optional<unsigned> exponent_cap;
    std::size_t max_vars = 200000;

    BigInt apply(const BigInt& faithful, const std::string& key,
                 std::map<std::string, std::string>& info) const;
};

struct PipelineOutput {
    PrenexSentence sentence;   // the constructed sentence
    // Desk-scale equivalent of `sentence` for the grid oracle: chi chains,
    // strengthening/slack/guard variables are projected out exactly; the
    // tower constants appear as probe-pinned auxiliary variables.
    PrenexSentence testable;
    GridSpec probe_hints;      // pinned axes for the auxiliary variables
    std::map<std::string, std::string> info;
};

// Theorem "open ball of counterexamples" pipeline: Strict-UETR sentence
// (forall X in R^n . exists Y in R^m, strict negation-free matrix) into an
// equivalent sentence over [-1,1] boxes whose counterexample set is either
// empty or contains an n-dimensional open ball.
PipelineOutput expand_counterexamples(const PrenexSentence& s, const BoundConfig& cfg,
                                      const PipelineLimits& limits = {});

// Hardness construction: Strict-UETR sentence -> Hausdorff instance (A, B, t)
// with d_H(A,B) <= t iff the sentence is true.
HausdorffInstance encode_hardness(const PrenexSentence& s, const BoundConfig& cfg,
                                  const PipelineLimits& limits = {});

enum class SimpleVariant { QuadraticSystem, SingleQuartic };

// Same instance with both defining formulas flattened to a conjunction of
// quadratic equations or a single quartic equation (ambient dimension grows
// by the flattening variables).
HausdorffInstance encode_hardness_simple(const PrenexSentence& s, SimpleVariant variant,
                                         const BoundConfig& cfg, const PipelineLimits& limits = {});

// Directed Hausdorff <= t as a two-block sentence (the strict form):
// forall eps > 0, a . exists b : phiA(a) => (phiB(b) /\ |a-b|^2 < t^2 + eps).
// Undirected instances produce the conjunction of both directions.
PrenexSentence encode_directed_hausdorff(const HausdorffInstance& h);

// Membership pipeline: Hausdorff instance -> equivalent Strict-UETR sentence.
PipelineOutput encode_membership(const HausdorffInstance& h, const BoundConfig& cfg,
                                 const PipelineLimits& limits = {});

// Definitional expansion of a leading exotic quantifier into classical ones.
PrenexSentence expand_exotic(const PrenexSentence& s);

// forall* X . exists Y : phi  ->  equivalent Strict-UETR sentence.
PipelineOutput exotic_to_strict(const PrenexSentence& s, const BoundConfig& cfg,
                                const PipelineLimits& limits = {});

// ERD shift: A' := (A,0), B' := (B,1), t = 1, directed; then
// A subset of closure(B) iff the directed distance of the lifted pair is <= 1.
HausdorffInstance erd_to_hausdorff(const SemiAlgebraicSet& A, const SemiAlgebraicSet& B);

}  // namespace sar
