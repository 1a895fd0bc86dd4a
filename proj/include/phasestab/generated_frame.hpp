#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "phasestab/frames.hpp"

namespace phasestab {

/// A countable frame {phi_n}, n = 1, 2, ..., given lazily by its coordinates
/// against a fixed reference orthonormal basis {e_l}, l = 1, 2, ...
///
/// All tail quantities are certified upper bounds, not estimates.
struct GeneratedFrame {
  std::string name;
  ScalarField field = ScalarField::real;

  std::function<Complex(Index n, Index l)> coord;  // <phi_n, e_l>
  std::function<Complex(Index j, Index n)> inner;  // <phi_j, phi_n>
  /// Bound on sum_{l > L} |<phi_n, e_l>|^2; non-increasing in L.
  std::function<double(Index n, Index L)> tail_norm_sq;
  /// Bound on sum_{n > m} |<phi_k, phi_n>|^2; non-increasing in m.
  std::function<double(Index k, Index m)> cross_tail_sq;
  /// Last l with <phi_n, e_l> != 0, or -1 when the support is unbounded.
  std::function<Index(Index n)> support_end;

  double lower_bound = 0.0;
  double upper_bound = 0.0;
  double min_norm = 0.0;  // c with ||phi_n|| >= c for every n

  double norm(Index n) const;
  /// Vectors 1..count against coordinates 1..coords.
  FiniteFrame truncated(Index count, Index coords) const;
};

GeneratedFrame onb_frame(ScalarField field = ScalarField::real);

// Integer indexing of the sinc family: n = 1, 2, 3, 4, 5, ... <-> 0, 1, -1, 2, -2, ...
// The prefix {1..L} maps onto [-floor((L-1)/2), floor(L/2)].
Index zigzag(Index n);
Index zigzag_index(Index z);

/// sin(pi d / 4) / (pi d / 4) for integer d, with the sine taken from a table.
double sinc_quarter(std::int64_t d);

/// Quarter-shifted sinc functions sinc(pi(x - z/4)) on the real Paley-Wiener
/// space, with the Shannon basis e_l = sinc(pi(x - z(l))) as reference basis.
GeneratedFrame sinc_frame();

using BlockCertifier = std::function<bool(const FiniteFrame&)>;

/// phi_1 = e_1, phi_n = e_n + psi_n where psi_n runs through the blocks in
/// order (block m lives on span{e_1..e_m}), and phi_n = e_n past the last
/// block. Block m is rescaled to total squared norm eps 2^{-m-1}.
/// Throws std::invalid_argument when a block is on the wrong space, has too
/// few vectors, or is rejected by `certify`.
GeneratedFrame riesz_frame(double eps, const std::vector<FiniteFrame>& blocks, const BlockCertifier& certify);

/// Seeded Gaussian blocks, block m having 2m (real) or 4m (complex) vectors in dimension m.
std::vector<FiniteFrame> gaussian_blocks(Index m_max, ScalarField field, std::uint64_t seed);

/// Truncation of the countable frame that lists block m (on span{e_1..e_m})
/// scaled by decay^{m-1}, blocks in order. Early vectors live in small
/// coordinate subspaces, as they do for any truncated countable frame.
FiniteFrame nested_block_frame(const std::vector<FiniteFrame>& blocks, double decay);

}  // namespace phasestab
