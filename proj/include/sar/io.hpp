#pragma once

#include "sar/formula.hpp"
#include "sar/sample.hpp"

#include <string>

namespace sar {

// JSON HausdorffInstance:
// { "n": int, "phiA": string, "phiB": string,
//   "t": {"num": string, "den": string}, "directed": bool, "meta": {...} }
std::string instance_to_json(const HausdorffInstance& h);
HausdorffInstance instance_from_json(const std::string& text);

// Point cloud CSV: one point per row, exact decimal strings where the
// coordinate is a terminating decimal, otherwise num/den.
std::string cloud_to_csv(const PointCloud& c);
PointCloud cloud_from_csv(const std::string& text);

// SMT-LIB2 over nonlinear real arithmetic: declarations, one assert of the
// quantified sentence, check-sat. Classical quantifiers only; byte-identical
// across runs for identical inputs.
std::string export_smt2(const PrenexSentence& s);

// Curves as polylines; the witness segment, when given, is highlighted.
std::string clouds_to_svg(const std::vector<PointCloud>& clouds,
                          const std::vector<Rational>* seg_a = nullptr,
                          const std::vector<Rational>* seg_b = nullptr);

std::string rational_to_decimal_or_fraction(const Rational& r);

}  // namespace sar
