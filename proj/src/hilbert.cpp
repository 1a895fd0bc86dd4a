#include "phasestab/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace phasestab {

namespace {

void require_same_length(const HVector& f, const HVector& g, const char* what) {
  if (f.size() != g.size()) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                std::to_string(f.size()) + " vs " + std::to_string(g.size()) + ")");
  }
}

}  // namespace

std::string_view to_string(ScalarField field) {
  return field == ScalarField::real ? "real" : "complex";
}

ScalarField parse_field(std::string_view text) {
  if (text == "real") return ScalarField::real;
  if (text == "complex") return ScalarField::complex;
  throw std::invalid_argument("unknown scalar field '" + std::string(text) + "'");
}

Complex inner(const HVector& f, const HVector& g) {
  require_same_length(f, g, "inner");
  // Eigen's dot conjugates its first operand.
  return g.dot(f);
}

HermitianOperator::HermitianOperator(Index dim)
    : dim_(dim), lower_(static_cast<std::size_t>(dim * (dim + 1) / 2), Complex{0.0, 0.0}) {
  if (dim < 0) throw std::invalid_argument("HermitianOperator: negative dimension");
}

HermitianOperator HermitianOperator::from_lower(const CMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("HermitianOperator: matrix not square");
  HermitianOperator x(m.rows());
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j <= i; ++j) x.set(i, j, m(i, j));
  }
  return x;
}

HermitianOperator HermitianOperator::identity(Index dim) {
  HermitianOperator x(dim);
  for (Index i = 0; i < dim; ++i) x.set(i, i, 1.0);
  return x;
}

Complex HermitianOperator::operator()(Index i, Index j) const {
  return i >= j ? lower_[static_cast<std::size_t>(slot(i, j))]
                : std::conj(lower_[static_cast<std::size_t>(slot(j, i))]);
}

void HermitianOperator::set(Index i, Index j, Complex value) {
  if (i < 0 || j < 0 || i >= dim_ || j >= dim_) throw std::out_of_range("HermitianOperator::set");
  if (i == j) {
    value = Complex{value.real(), 0.0};
  } else if (i < j) {
    std::swap(i, j);
    value = std::conj(value);
  }
  lower_[static_cast<std::size_t>(slot(i, j))] = value;
}

CMatrix HermitianOperator::dense() const {
  CMatrix m(dim_, dim_);
  for (Index i = 0; i < dim_; ++i) {
    for (Index j = 0; j < dim_; ++j) m(i, j) = (*this)(i, j);
  }
  return m;
}

double HermitianOperator::trace() const {
  double t = 0.0;
  for (Index i = 0; i < dim_; ++i) t += lower_[static_cast<std::size_t>(slot(i, i))].real();
  return t;
}

double HermitianOperator::hs_norm() const {
  double s = 0.0;
  for (Index i = 0; i < dim_; ++i) {
    for (Index j = 0; j <= i; ++j) {
      const double a = std::norm(lower_[static_cast<std::size_t>(slot(i, j))]);
      s += i == j ? a : 2.0 * a;
    }
  }
  return std::sqrt(s);
}

Eigen::VectorXd HermitianOperator::eigenvalues() const {
  if (dim_ == 0) return {};
  Eigen::SelfAdjointEigenSolver<CMatrix> es(dense(), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double HermitianOperator::op_norm() const {
  if (dim_ == 0) return 0.0;
  return eigenvalues().cwiseAbs().maxCoeff();
}

HermitianOperator& HermitianOperator::operator+=(const HermitianOperator& other) {
  if (other.dim_ != dim_) throw std::invalid_argument("HermitianOperator: dimension mismatch");
  for (std::size_t i = 0; i < lower_.size(); ++i) lower_[i] += other.lower_[i];
  return *this;
}

HermitianOperator& HermitianOperator::operator-=(const HermitianOperator& other) {
  if (other.dim_ != dim_) throw std::invalid_argument("HermitianOperator: dimension mismatch");
  for (std::size_t i = 0; i < lower_.size(); ++i) lower_[i] -= other.lower_[i];
  return *this;
}

HermitianOperator& HermitianOperator::operator*=(double s) {
  for (auto& v : lower_) v *= s;
  return *this;
}

double quotient_distance(const HVector& f, const HVector& g, ScalarField field) {
  require_same_length(f, g, "quotient_distance");
  const Complex fg = inner(f, g);
  const double overlap = field == ScalarField::real ? std::abs(fg.real()) : std::abs(fg);
  const double d2 = f.squaredNorm() + g.squaredNorm() - 2.0 * overlap;
  return std::sqrt(std::max(0.0, d2));
}

HermitianOperator lift(const HVector& f) {
  HermitianOperator x(f.size());
  for (Index i = 0; i < f.size(); ++i) {
    for (Index j = 0; j <= i; ++j) x.set(i, j, f(i) * std::conj(f(j)));
  }
  return x;
}

double lifted_pair_opnorm(const HVector& f, const HVector& g) {
  require_same_length(f, g, "lifted_pair_opnorm");
  double a = f.squaredNorm();
  double b = g.squaredNorm();
  if (a < b) std::swap(a, b);
  const double c = std::norm(inner(f, g));
  const double disc = std::max(0.0, (a + b) * (a + b) - 4.0 * c);
  return 0.5 * (a - b + std::sqrt(disc));
}

LiftBound quotient_vs_lift_bound(const HVector& f, const HVector& g, ScalarField field) {
  require_same_length(f, g, "quotient_vs_lift_bound");
  constexpr double slack = 1e-12;
  if (std::abs(f.norm() - 1.0) > slack || g.norm() > 1.0 + slack) {
    throw std::invalid_argument("quotient_vs_lift_bound: requires ||f|| = 1 and ||g|| <= 1");
  }
  return {quotient_distance(f, g, field), 2.0 * lifted_pair_opnorm(f, g)};
}

Index lifted_dimension(Index dim, ScalarField field) {
  return field == ScalarField::real ? dim * (dim + 1) / 2 : dim * dim;
}

// Layout: diagonal entries first, then sqrt(2) Re X(i,j) for i > j, then
// (complex only) sqrt(2) Im X(i,j) for i > j, both in row-major lower order.
Eigen::VectorXd hermitian_coords(const HermitianOperator& x, ScalarField field) {
  const Index m = x.dim();
  Eigen::VectorXd c(lifted_dimension(m, field));
  const double r2 = std::sqrt(2.0);
  const Index off = m * (m - 1) / 2;
  Index p = 0;
  for (Index i = 0; i < m; ++i) c(p++) = x(i, i).real();
  Index q = 0;
  for (Index i = 1; i < m; ++i) {
    for (Index j = 0; j < i; ++j, ++q) {
      c(m + q) = r2 * x(i, j).real();
      if (field == ScalarField::complex) c(m + off + q) = r2 * x(i, j).imag();
    }
  }
  return c;
}

HermitianOperator from_hermitian_coords(const Eigen::VectorXd& coords, Index dim, ScalarField field) {
  if (coords.size() != lifted_dimension(dim, field)) {
    throw std::invalid_argument("from_hermitian_coords: coordinate length does not match dimension");
  }
  HermitianOperator x(dim);
  const double r2 = std::sqrt(2.0);
  const Index off = dim * (dim - 1) / 2;
  for (Index i = 0; i < dim; ++i) x.set(i, i, coords(i));
  Index q = 0;
  for (Index i = 1; i < dim; ++i) {
    for (Index j = 0; j < i; ++j, ++q) {
      const double im = field == ScalarField::complex ? coords(dim + off + q) / r2 : 0.0;
      x.set(i, j, Complex{coords(dim + q) / r2, im});
    }
  }
  return x;
}

Eigen::VectorXd lifted_coords(const HVector& f, ScalarField field) {
  const Index m = f.size();
  Eigen::VectorXd c(lifted_dimension(m, field));
  const double r2 = std::sqrt(2.0);
  const Index off = m * (m - 1) / 2;
  for (Index i = 0; i < m; ++i) c(i) = std::norm(f(i));
  Index q = 0;
  for (Index i = 1; i < m; ++i) {
    for (Index j = 0; j < i; ++j, ++q) {
      const Complex v = f(i) * std::conj(f(j));
      c(m + q) = r2 * v.real();
      if (field == ScalarField::complex) c(m + off + q) = r2 * v.imag();
    }
  }
  return c;
}

}  // namespace phasestab
