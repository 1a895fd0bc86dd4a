#include "phasestab/frames.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "phasestab/linalg.hpp"

namespace phasestab {

FiniteFrame::FiniteFrame(ScalarField field, CMatrix synthesis)
    : field_(field), synthesis_(std::move(synthesis)) {
  if (synthesis_.rows() == 0) throw std::invalid_argument("FiniteFrame: zero dimension");
  if (synthesis_.cols() == 0) throw std::invalid_argument("FiniteFrame: empty frame");
  if (field_ == ScalarField::real && synthesis_.imag().cwiseAbs().maxCoeff() != 0.0) {
    throw std::invalid_argument("FiniteFrame: complex entries in a real frame");
  }
  norms_ = synthesis_.colwise().norm().transpose();

  const CMatrix s = synthesis_ * synthesis_.adjoint();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(s, Eigen::EigenvaluesOnly);
  bounds_.upper = es.eigenvalues()(dim() - 1);
  bounds_.lower = numerical_rank(synthesis_) < dim() ? 0.0 : std::max(0.0, es.eigenvalues()(0));
}

FiniteFrame FiniteFrame::from_vectors(ScalarField field, std::span<const HVector> vectors) {
  if (vectors.empty()) throw std::invalid_argument("FiniteFrame: empty frame");
  CMatrix m(vectors.front().size(), static_cast<Index>(vectors.size()));
  for (std::size_t n = 0; n < vectors.size(); ++n) {
    if (vectors[n].size() != m.rows()) throw std::invalid_argument("FiniteFrame: vectors of unequal length");
    m.col(static_cast<Index>(n)) = vectors[n];
  }
  return FiniteFrame(field, std::move(m));
}

FiniteFrame FiniteFrame::subset(std::span<const Index> indices) const {
  CMatrix m(dim(), static_cast<Index>(indices.size()));
  for (std::size_t i = 0; i < indices.size(); ++i) m.col(static_cast<Index>(i)) = synthesis_.col(indices[i]);
  return FiniteFrame(field_, std::move(m));
}

double measurement_gap(const MeasurementSeq& a, const MeasurementSeq& b) {
  if (a.values.size() != b.values.size()) throw std::invalid_argument("measurement_gap: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    const double d = a.values[i] - b.values[i];
    s += d * d;
  }
  return std::sqrt(s);
}

Eigen::VectorXcd analysis(const FiniteFrame& frame, const HVector& f) {
  if (f.size() != frame.dim()) throw std::invalid_argument("analysis: dimension mismatch");
  return frame.synthesis().adjoint() * f;
}

MeasurementSeq measure(const FiniteFrame& frame, const HVector& f) {
  const Eigen::VectorXcd t = analysis(frame, f);
  MeasurementSeq out;
  out.values.resize(static_cast<std::size_t>(t.size()));
  for (Index n = 0; n < t.size(); ++n) out.values[static_cast<std::size_t>(n)] = std::abs(t(n));
  return out;
}

FrameBounds frame_bounds(const FiniteFrame& frame) { return frame.bounds(); }

Eigen::VectorXd lifted_analysis(const FiniteFrame& frame, const HermitianOperator& x) {
  if (x.dim() != frame.dim()) throw std::invalid_argument("lifted_analysis: dimension mismatch");
  const CMatrix xm = x.dense();
  const CMatrix& phi = frame.synthesis();
  Eigen::VectorXd out(frame.size());
  for (Index n = 0; n < frame.size(); ++n) out(n) = phi.col(n).dot(xm * phi.col(n)).real();
  return out;
}

Eigen::MatrixXd lifted_matrix(const FiniteFrame& frame) {
  Eigen::MatrixXd a(frame.size(), lifted_dimension(frame.dim(), frame.field()));
  for (Index n = 0; n < frame.size(); ++n) a.row(n) = lifted_coords(frame.vector(n), frame.field()).transpose();
  return a;
}

PerturbationResult perturb_destroy_pr(const FiniteFrame& frame, double eps, const HVector& reference) {
  if (!(eps > 0.0)) throw std::invalid_argument("perturb_destroy_pr: eps must be positive");
  if (reference.size() != frame.dim() || std::abs(reference.norm() - 1.0) > 1e-12) {
    throw std::invalid_argument("perturb_destroy_pr: reference must be a unit vector of the frame dimension");
  }
  const Index count = frame.size();
  const Eigen::VectorXcd coeff = frame.synthesis().adjoint() * reference;  // conj(<reference, phi_n>)

  // suffix[n] = sum_{j >= n} |<reference, phi_j>|^2
  std::vector<double> suffix(static_cast<std::size_t>(count) + 1, 0.0);
  for (Index n = count - 1; n >= 0; --n) {
    suffix[static_cast<std::size_t>(n)] = suffix[static_cast<std::size_t>(n) + 1] + std::norm(coeff(n));
  }
  Index k = 0;
  while (suffix[static_cast<std::size_t>(k)] >= eps) ++k;

  CMatrix psi = frame.synthesis();
  for (Index n = k; n < count; ++n) psi.col(n) -= reference * std::conj(coeff(n));
  if (frame.field() == ScalarField::real) psi = psi.real().cast<Complex>();

  PerturbationResult r{FiniteFrame(frame.field(), psi)};
  r.k = k;
  r.removed_mass = (psi - frame.synthesis()).colwise().squaredNorm().sum();
  r.head_rank = k == 0 ? 0 : numerical_rank(CMatrix(psi.leftCols(k)));
  r.tail_rank = k == count ? 0 : numerical_rank(CMatrix(psi.rightCols(count - k)));
  r.cp_failure_certified = r.head_rank < frame.dim() && r.tail_rank < frame.dim();
  r.perturbed_lower_bound = r.perturbed.bounds().lower;
  r.frame_degraded = r.perturbed_lower_bound < 1e-12;
  return r;
}

PerturbationResult perturb_destroy_pr(const FiniteFrame& frame, double eps) {
  HVector e1 = HVector::Zero(frame.dim());
  e1(0) = 1.0;
  return perturb_destroy_pr(frame, eps, e1);
}

}  // namespace phasestab
