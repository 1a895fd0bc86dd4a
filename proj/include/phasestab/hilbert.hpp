#pragma once

#include <complex>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace phasestab {

using Index = Eigen::Index;
using Complex = std::complex<double>;

/// Coordinates of a Hilbert-space element against a fixed orthonormal basis.
/// Real-field vectors are stored with zero imaginary parts.
using HVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

enum class ScalarField { real, complex };

std::string_view to_string(ScalarField field);
/// Throws std::invalid_argument for anything but "real" / "complex".
ScalarField parse_field(std::string_view text);

/// <f, g>, linear in the first argument.
Complex inner(const HVector& f, const HVector& g);

/// M x M Hermitian (real symmetric for the real field) operator.
///
/// Only the lower triangle is stored; the upper triangle is its mirror and
/// diagonal entries are real, so Hermiticity holds exactly.
class HermitianOperator {
 public:
  explicit HermitianOperator(Index dim = 0);

  /// Takes the lower triangle of `m` (imaginary parts of the diagonal are
  /// dropped, the strict upper triangle is ignored).
  static HermitianOperator from_lower(const CMatrix& m);
  static HermitianOperator identity(Index dim);

  Index dim() const { return dim_; }
  Complex operator()(Index i, Index j) const;
  /// Sets entry (i, j) and, implicitly, its mirror (j, i).
  void set(Index i, Index j, Complex value);

  CMatrix dense() const;
  double trace() const;
  double hs_norm() const;
  /// Largest eigenvalue in absolute value.
  double op_norm() const;
  Eigen::VectorXd eigenvalues() const;  // ascending

  HermitianOperator& operator+=(const HermitianOperator& other);
  HermitianOperator& operator-=(const HermitianOperator& other);
  HermitianOperator& operator*=(double s);

  friend HermitianOperator operator+(HermitianOperator a, const HermitianOperator& b) { return a += b; }
  friend HermitianOperator operator-(HermitianOperator a, const HermitianOperator& b) { return a -= b; }
  friend HermitianOperator operator*(double s, HermitianOperator a) { return a *= s; }

 private:
  Index slot(Index i, Index j) const { return i * (i + 1) / 2 + j; }  // requires i >= j

  Index dim_;
  std::vector<Complex> lower_;
};

/// inf over unimodular alpha of ||f - alpha g||, in closed form.
/// Real field: alpha in {+1,-1}; complex field: alpha on the unit circle.
double quotient_distance(const HVector& f, const HVector& g, ScalarField field);

/// The rank-one operator f f^*.
HermitianOperator lift(const HVector& f);

/// Operator norm of f f^* - g g^*, via the closed-form largest eigenvalue.
double lifted_pair_opnorm(const HVector& f, const HVector& g);

struct LiftBound {
  double lhs;  // quotient distance
  double rhs;  // 2 ||f f^* - g g^*||
};

/// Requires ||f|| = 1 and ||g|| <= 1 (1e-12 slack); throws std::invalid_argument otherwise.
LiftBound quotient_vs_lift_bound(const HVector& f, const HVector& g,
                                 ScalarField field = ScalarField::complex);

/// Real dimension of the Hermitian (complex) or symmetric (real) M x M matrices.
Index lifted_dimension(Index dim, ScalarField field);

/// Coordinates of X in an orthonormal basis of the lifted space under the
/// Hilbert-Schmidt inner product. For the real field only the real parts of
/// the off-diagonal entries are kept.
Eigen::VectorXd hermitian_coords(const HermitianOperator& x, ScalarField field);
HermitianOperator from_hermitian_coords(const Eigen::VectorXd& coords, Index dim, ScalarField field);

/// hermitian_coords(lift(f)) without forming the operator.
Eigen::VectorXd lifted_coords(const HVector& f, ScalarField field);

}  // namespace phasestab
