#pragma once

#include <cstdint>
#include <random>

#include "phasestab/hilbert.hpp"

namespace phasestab {

/// Numerical rank with the relative threshold max(rows, cols) * eps * sigma_max.
Index numerical_rank(const CMatrix& a);
Index numerical_rank(const Eigen::MatrixXd& a);

/// Orthonormal basis (as columns) of the orthogonal complement of the column
/// span of `columns` inside C^ambient. `columns` may have zero columns.
CMatrix orthogonal_complement(const CMatrix& columns, Index ambient);

/// Projects e_1, e_2, ... onto the complement basis and returns the first
/// projection whose squared norm reaches `min_weight` (or the largest one),
/// normalized. Requires a non-empty complement.
HVector lowest_index_direction(const CMatrix& complement, double min_weight = 0.25);

/// Smallest eigenvalue of a Hermitian matrix given densely.
double min_eigenvalue(const CMatrix& hermitian);

// Randomness. Every run owns one seed; tasks derive their own streams from it.
using Rng = std::mt19937_64;

/// SplitMix64 mixing of (seed, stream) into an independent seed.
std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream);

HVector random_gaussian(Index dim, ScalarField field, Rng& rng);
HVector random_unit(Index dim, ScalarField field, Rng& rng);
/// Uniform unimodular scalar of the field (+-1 or e^{i theta}).
Complex random_phase(ScalarField field, Rng& rng);

}  // namespace phasestab
