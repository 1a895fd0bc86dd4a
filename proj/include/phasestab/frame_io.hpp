#pragma once

#include <stdexcept>
#include <string>

#include "phasestab/frames.hpp"

namespace phasestab {

struct FrameFormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Frame documents are JSON objects {"field": "real"|"complex", "dim": M,
/// "vectors": [[...], ...]}; complex entries are [re, im] pairs.
FiniteFrame parse_frame(const std::string& text);
FiniteFrame read_frame_file(const std::string& path);

/// Every number is written with 17 significant digits.
std::string format_frame(const FiniteFrame& frame);
std::string format_vector(const HVector& v, ScalarField field);

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace phasestab
