#pragma once

#include <span>
#include <vector>

#include "phasestab/hilbert.hpp"

namespace phasestab {

struct FrameBounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// N measurement vectors phi_1..phi_N in an M-dimensional coordinate space.
///
/// Stored as the M x N synthesis matrix (column n is phi_n). Norms and the
/// frame bounds are computed once at construction.
class FiniteFrame {
 public:
  /// Throws std::invalid_argument for an empty frame, zero dimension, or
  /// non-zero imaginary parts under the real field.
  FiniteFrame(ScalarField field, CMatrix synthesis);
  static FiniteFrame from_vectors(ScalarField field, std::span<const HVector> vectors);

  ScalarField field() const { return field_; }
  Index dim() const { return synthesis_.rows(); }
  Index size() const { return synthesis_.cols(); }
  const CMatrix& synthesis() const { return synthesis_; }
  HVector vector(Index n) const { return synthesis_.col(n); }

  const Eigen::VectorXd& norms() const { return norms_; }
  double max_norm() const { return norms_.maxCoeff(); }
  double min_norm() const { return norms_.minCoeff(); }

  /// Extreme eigenvalues of sum_n phi_n phi_n^*. The lower bound is exactly
  /// 0 when the vectors do not span (numerical rank < M).
  FrameBounds bounds() const { return bounds_; }
  bool is_frame() const { return bounds_.lower > 0.0; }

  /// Sub-family with the given (0-based) indices, in that order.
  FiniteFrame subset(std::span<const Index> indices) const;

 private:
  ScalarField field_;
  CMatrix synthesis_;
  Eigen::VectorXd norms_;
  FrameBounds bounds_;
};

/// Intensity measurements (|<f, phi_n>|)_n, plus a certified bound on the
/// l2 mass of any omitted indices.
struct MeasurementSeq {
  std::vector<double> values;
  double tail_bound = 0.0;
};

/// l2 distance between two measurement sequences of equal length.
double measurement_gap(const MeasurementSeq& a, const MeasurementSeq& b);

Eigen::VectorXcd analysis(const FiniteFrame& frame, const HVector& f);
MeasurementSeq measure(const FiniteFrame& frame, const HVector& f);
FrameBounds frame_bounds(const FiniteFrame& frame);

/// (<X phi_n, phi_n>)_n, linear in X.
Eigen::VectorXd lifted_analysis(const FiniteFrame& frame, const HermitianOperator& x);

/// The lifted measurement map as an N x dim(lifted space) real matrix whose
/// rows are hermitian_coords(phi_n phi_n^*).
Eigen::MatrixXd lifted_matrix(const FiniteFrame& frame);

struct PerturbationResult {
  FiniteFrame perturbed;
  Index k = 0;                // psi_n = phi_n for n <= k (1-based count)
  double removed_mass = 0.0;  // sum_n ||phi_n - psi_n||^2
  Index head_rank = 0;        // rank of {psi_n}_{n <= k}
  Index tail_rank = 0;        // rank of {psi_n}_{n > k}
  bool cp_failure_certified = false;
  double perturbed_lower_bound = 0.0;
  bool frame_degraded = false;  // perturbed lower bound below 1e-12
};

/// Removes the `reference` component from every vector past the smallest k
/// whose tail mass sum_{n>k} |<reference, phi_n>|^2 is below eps, then checks
/// by rank computation that the split {1..k} / {k+1..N} violates the
/// complement property. `reference` must be a unit vector.
PerturbationResult perturb_destroy_pr(const FiniteFrame& frame, double eps, const HVector& reference);
PerturbationResult perturb_destroy_pr(const FiniteFrame& frame, double eps);

}  // namespace phasestab
