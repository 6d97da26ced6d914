#pragma once

#include <iosfwd>
#include <string>

#include "funcgauss/sample.hpp"

namespace funcgauss {

// Curve CSV: header "label,<t0>,...,<tN>" carrying the grid times, then one
// row per curve with the integer label followed by the N+1 values.  Numbers
// are written in shortest round-trip form so emit -> parse -> emit is
// byte-identical.
void write_curves_csv(std::ostream& out, const LabeledSample& sample);
std::string curves_to_csv(const LabeledSample& sample);

LabeledSample read_curves_csv(std::istream& in, Prior prior = Prior::from_counts());
LabeledSample curves_from_csv(const std::string& text, Prior prior = Prior::from_counts());

// Shortest round-trip decimal formatting used across all file output.
std::string format_double(double x);
double parse_double(const std::string& token, const char* context);

}  // namespace funcgauss
