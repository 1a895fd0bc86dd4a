#include "phasestab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace phasestab {

namespace {

template <typename Matrix>
Index rank_from_singular_values(const Matrix& a) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(a);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  const double tol = static_cast<double>(std::max(a.rows(), a.cols())) *
                     std::numeric_limits<double>::epsilon() * s(0);
  Index r = 0;
  for (Index i = 0; i < s.size(); ++i) {
    if (s(i) > tol) ++r;
  }
  return r;
}

}  // namespace

Index numerical_rank(const CMatrix& a) { return rank_from_singular_values(a); }
Index numerical_rank(const Eigen::MatrixXd& a) { return rank_from_singular_values(a); }

CMatrix orthogonal_complement(const CMatrix& columns, Index ambient) {
  if (columns.cols() > 0 && columns.rows() != ambient) {
    throw std::invalid_argument("orthogonal_complement: row count differs from ambient dimension");
  }
  if (columns.cols() == 0) return CMatrix::Identity(ambient, ambient);

  Eigen::ColPivHouseholderQR<CMatrix> qr(columns);
  const double tol = static_cast<double>(std::max(columns.rows(), columns.cols())) *
                     std::numeric_limits<double>::epsilon();
  qr.setThreshold(tol);
  const Index r = qr.rank();
  const CMatrix q = qr.householderQ();
  return q.rightCols(ambient - r);
}

HVector lowest_index_direction(const CMatrix& complement, double min_weight) {
  if (complement.cols() == 0) throw std::invalid_argument("lowest_index_direction: empty complement");
  Index best = 0;
  double best_w = -1.0;
  for (Index l = 0; l < complement.rows(); ++l) {
    const double w = complement.row(l).squaredNorm();
    if (w >= min_weight) {
      best = l;
      best_w = w;
      break;
    }
    if (w > best_w) {
      best = l;
      best_w = w;
    }
  }
  // P e_l = Q Q^* e_l.
  HVector v = complement * complement.row(best).adjoint();
  return v / v.norm();
}

double min_eigenvalue(const CMatrix& hermitian) {
  if (hermitian.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

HVector random_gaussian(Index dim, ScalarField field, Rng& rng) {
  std::normal_distribution<double> n01(0.0, 1.0);
  HVector v(dim);
  for (Index i = 0; i < dim; ++i) {
    const double re = n01(rng);
    const double im = field == ScalarField::complex ? n01(rng) : 0.0;
    v(i) = Complex{re, im};
  }
  return v;
}

HVector random_unit(Index dim, ScalarField field, Rng& rng) {
  HVector v;
  do {
    v = random_gaussian(dim, field, rng);
  } while (v.norm() == 0.0);
  return v / v.norm();
}

Complex random_phase(ScalarField field, Rng& rng) {
  if (field == ScalarField::real) {
    return std::bernoulli_distribution(0.5)(rng) ? 1.0 : -1.0;
  }
  const double t = std::uniform_real_distribution<double>(0.0, 2.0 * std::numbers::pi)(rng);
  return std::polar(1.0, t);
}

}  // namespace phasestab
