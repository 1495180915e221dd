#pragma once

#include <iosfwd>
#include <vector>

#include "ltlab/spectrum.hpp"
#include "ltlab/weights.hpp"

namespace ltlab {

// CSV dialect: comma separated, one header row, LF line endings, floats with
// 17 significant digits.

/// Columns: j, parity, re_mu, im_mu, re_lambda, im_lambda, residual, seed_deviation.
void write_spectrum_csv(std::ostream& out, const std::vector<Eigenvalue>& eigs);

/// Inverse of write_spectrum_csv. An empty stream or a lone header yields no
/// rows; anything malformed throws ParseError.
std::vector<Eigenvalue> read_spectrum_csv(std::istream& in);

/// Columns: seg_index, a, b, kind, anchor, anchor_value, rate; b is "inf" on the
/// last segment and the exponential fields are empty on original segments.
void write_segments_csv(std::ostream& out, const PiecewiseLogLinear& pll);

}  // namespace ltlab
