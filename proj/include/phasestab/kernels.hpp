#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <span>

#include "phasestab/hilbert.hpp"

// Data-parallel kernels. Every parallel kernel has a serial twin that runs the
// identical reduction order, so results are bit-identical to the serial twin
// and independent of the thread count.
namespace phasestab::kernels {

/// Outcome of scanning index splits S / S^c, encoded as bit masks over the
/// frame vectors (bit n set <=> phi_n in S).
struct SplitScan {
  bool has_failure = false;      // some split with neither side spanning
  std::uint64_t first_failure = 0;
  double sigma = std::numeric_limits<double>::infinity();  // min over splits of max(lambda_S, lambda_Sc)
  std::uint64_t sigma_mask = 0;
  std::uint64_t scanned = 0;
};

/// One side's smallest frame-operator eigenvalue, taken as exactly 0 when the
/// side does not span (numerical rank below dim).
double side_lower_bound(const CMatrix& synthesis, std::uint64_t mask, ScalarField field, bool* spans = nullptr);

/// Scans all masks with the top bit clear (each split once). Requires N <= 24.
SplitScan scan_splits_serial(const CMatrix& synthesis, ScalarField field);
SplitScan scan_splits_parallel(const CMatrix& synthesis, ScalarField field);

/// Scans an explicit list of masks; "first" refers to list order.
SplitScan scan_masks_serial(const CMatrix& synthesis, ScalarField field, std::span<const std::uint64_t> masks);
SplitScan scan_masks_parallel(const CMatrix& synthesis, ScalarField field, std::span<const std::uint64_t> masks);

/// Sum of term(0..count-1) in fixed chunks whose partial sums are added in chunk order.
inline constexpr Index kChunk = Index{1} << 14;
double chunked_sum_serial(Index count, const std::function<double(Index)>& term);
double chunked_sum_parallel(Index count, const std::function<double(Index)>& term);

struct ArgMin {
  double value = std::numeric_limits<double>::infinity();
  Index index = -1;
};

/// Minimum of value(0..count-1); ties go to the lowest index. NaNs are skipped.
ArgMin argmin_serial(Index count, const std::function<double(Index)>& value);
ArgMin argmin_parallel(Index count, const std::function<double(Index)>& value);

}  // namespace phasestab::kernels
