#include "phasestab/generated_frame.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <stdexcept>

#include "phasestab/linalg.hpp"

namespace phasestab {

double GeneratedFrame::norm(Index n) const { return std::sqrt(inner(n, n).real()); }

FiniteFrame GeneratedFrame::truncated(Index count, Index coords) const {
  CMatrix m(coords, count);
  for (Index n = 1; n <= count; ++n) {
    for (Index l = 1; l <= coords; ++l) m(l - 1, n - 1) = coord(n, l);
  }
  return FiniteFrame(field, std::move(m));
}

GeneratedFrame onb_frame(ScalarField field) {
  GeneratedFrame g;
  g.name = "onb";
  g.field = field;
  g.coord = [](Index n, Index l) { return Complex{n == l ? 1.0 : 0.0, 0.0}; };
  g.inner = [](Index j, Index n) { return Complex{j == n ? 1.0 : 0.0, 0.0}; };
  g.tail_norm_sq = [](Index n, Index L) { return n > L ? 1.0 : 0.0; };
  g.cross_tail_sq = [](Index k, Index m) { return k > m ? 1.0 : 0.0; };
  g.support_end = [](Index n) { return n; };
  g.lower_bound = g.upper_bound = g.min_norm = 1.0;
  return g;
}

Index zigzag(Index n) { return n % 2 == 0 ? n / 2 : -(n - 1) / 2; }

Index zigzag_index(Index z) { return z > 0 ? 2 * z : 1 - 2 * z; }

double sinc_quarter(std::int64_t d) {
  if (d == 0) return 1.0;
  static constexpr double h = std::numbers::sqrt2 / 2.0;
  static constexpr std::array<double, 8> sine{0.0, h, 1.0, h, 0.0, -h, -1.0, -h};
  const double s = sine[static_cast<std::size_t>(((d % 8) + 8) % 8)];
  return 4.0 * s / (std::numbers::pi * static_cast<double>(d));
}

namespace {

// Bound on sum over integers j outside [lo, hi] of 1/(j - x0)^2, for lo <= x0 <= hi.
// Each side is compared with the integral of 1/(x - x0)^2 from the window edge.
double outside_inverse_square(double x0, double lo, double hi) {
  if (x0 >= hi || x0 <= lo) return std::numeric_limits<double>::infinity();
  return 1.0 / (hi - x0) + 1.0 / (x0 - lo);
}

}  // namespace

GeneratedFrame sinc_frame() {
  GeneratedFrame g;
  g.name = "sinc";
  g.field = ScalarField::real;
  g.coord = [](Index n, Index l) { return Complex{sinc_quarter(4 * zigzag(l) - zigzag(n)), 0.0}; };
  g.inner = [](Index j, Index n) { return Complex{sinc_quarter(zigzag(j) - zigzag(n)), 0.0}; };
  g.tail_norm_sq = [](Index n, Index L) {
    const Index z = zigzag(n);
    const double lo = -static_cast<double>((L - 1) / 2);
    const double hi = static_cast<double>(L / 2);
    const double x0 = static_cast<double>(z) / 4.0;
    if (z % 4 == 0) return x0 >= lo && x0 <= hi ? 0.0 : 1.0;
    const double b = outside_inverse_square(x0, lo, hi) / (std::numbers::pi * std::numbers::pi);
    return std::min(1.0, b);
  };
  g.cross_tail_sq = [](Index k, Index m) {
    // |<phi_k, phi_n>|^2 <= 16 / (pi^2 (z_n - z_k)^2)
    const double lo = -static_cast<double>((m - 1) / 2);
    const double hi = static_cast<double>(m / 2);
    const double zk = static_cast<double>(zigzag(k));
    const double b = 16.0 * outside_inverse_square(zk, lo, hi) / (std::numbers::pi * std::numbers::pi);
    return std::min(1.0, b);
  };
  g.support_end = [](Index n) {
    const Index z = zigzag(n);
    return z % 4 == 0 ? zigzag_index(z / 4) : Index{-1};
  };
  g.lower_bound = g.upper_bound = 4.0;
  g.min_norm = 1.0;
  return g;
}

namespace {

struct RieszData {
  ScalarField field;
  std::vector<HVector> psi;  // psi[i] belongs to phi_{i+2}
  Index last = 1;            // last index carrying a psi
  Index max_support = 1;

  const HVector* psi_of(Index n) const {
    if (n < 2 || n > last) return nullptr;
    return &psi[static_cast<std::size_t>(n - 2)];
  }
  Complex coord(Index n, Index l) const {
    Complex v = n == l ? 1.0 : 0.0;
    if (const HVector* p = psi_of(n); p && l <= p->size()) v += (*p)(l - 1);
    return v;
  }
  Index support_end(Index n) const {
    const HVector* p = psi_of(n);
    return p ? std::max(n, p->size()) : n;
  }
  Complex inner(Index j, Index n) const {
    const Index end = std::min(support_end(j), support_end(n));
    Complex s = 0.0;
    for (Index l = 1; l <= end; ++l) s += coord(j, l) * std::conj(coord(n, l));
    return s;
  }
};

}  // namespace

GeneratedFrame riesz_frame(double eps, const std::vector<FiniteFrame>& blocks, const BlockCertifier& certify) {
  if (!(eps > 0.0)) throw std::invalid_argument("riesz_frame: eps must be positive");
  if (blocks.empty()) throw std::invalid_argument("riesz_frame: no blocks");
  auto data = std::make_shared<RieszData>();
  data->field = blocks.front().field();
  const Index r = data->field == ScalarField::real ? 2 : 4;

  double mass = 0.0;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const FiniteFrame& b = blocks[i];
    const Index m = static_cast<Index>(i) + 1;
    if (b.dim() != m) throw std::invalid_argument("riesz_frame: block " + std::to_string(m) + " is not on V_m");
    if (b.field() != data->field) throw std::invalid_argument("riesz_frame: blocks over different fields");
    if (b.size() < r * m) throw std::invalid_argument("riesz_frame: block " + std::to_string(m) + " has too few vectors");
    if (!certify(b)) {
      throw std::invalid_argument("riesz_frame: block " + std::to_string(m) + " does not do phase retrieval");
    }
    const double target = eps * std::ldexp(1.0, -static_cast<int>(m) - 1);
    const double scale = std::sqrt(target / b.synthesis().squaredNorm());
    for (Index n = 0; n < b.size(); ++n) {
      data->psi.push_back(scale * b.synthesis().col(n));
      mass += data->psi.back().squaredNorm();
    }
    data->max_support = std::max(data->max_support, m);
  }
  data->last = static_cast<Index>(data->psi.size()) + 1;
  data->max_support = std::max(data->max_support, data->last);

  GeneratedFrame g;
  g.name = "riesz";
  g.field = data->field;
  g.coord = [data](Index n, Index l) { return data->coord(n, l); };
  g.inner = [data](Index j, Index n) { return data->inner(j, n); };
  g.support_end = [data](Index n) { return data->support_end(n); };
  g.tail_norm_sq = [data](Index n, Index L) {
    double s = 0.0;
    for (Index l = L + 1; l <= data->support_end(n); ++l) s += std::norm(data->coord(n, l));
    return s;
  };
  g.cross_tail_sq = [data](Index k, Index m) {
    // <phi_k, phi_n> vanishes once n exceeds both the support of phi_k and the last block.
    const Index end = std::max(data->support_end(k), data->last);
    double s = 0.0;
    for (Index n = m + 1; n <= end; ++n) s += std::norm(data->inner(k, n));
    return s;
  };
  const double root = std::sqrt(mass);
  g.lower_bound = (1.0 - root) * (1.0 - root);
  g.upper_bound = (1.0 + root) * (1.0 + root);
  double c = 1.0;
  for (Index n = 1; n <= data->last; ++n) c = std::min(c, std::sqrt(data->inner(n, n).real()));
  g.min_norm = c;
  return g;
}

std::vector<FiniteFrame> gaussian_blocks(Index m_max, ScalarField field, std::uint64_t seed) {
  const Index r = field == ScalarField::real ? 2 : 4;
  std::vector<FiniteFrame> blocks;
  for (Index m = 1; m <= m_max; ++m) {
    Rng rng(split_seed(seed, static_cast<std::uint64_t>(m)));
    CMatrix s(m, r * m);
    for (Index n = 0; n < s.cols(); ++n) s.col(n) = random_gaussian(m, field, rng);
    blocks.emplace_back(field, std::move(s));
  }
  return blocks;
}

FiniteFrame nested_block_frame(const std::vector<FiniteFrame>& blocks, double decay) {
  if (blocks.empty()) throw std::invalid_argument("nested_block_frame: no blocks");
  if (!(decay > 0.0)) throw std::invalid_argument("nested_block_frame: decay must be positive");
  const Index dim = static_cast<Index>(blocks.size());
  Index count = 0;
  for (const auto& b : blocks) count += b.size();
  CMatrix s = CMatrix::Zero(dim, count);
  Index col = 0;
  double scale = 1.0;
  for (const auto& b : blocks) {
    if (b.dim() > dim || b.field() != blocks.front().field()) {
      throw std::invalid_argument("nested_block_frame: block does not fit");
    }
    s.block(0, col, b.dim(), b.size()) = scale * b.synthesis();
    col += b.size();
    scale *= decay;
  }
  return FiniteFrame(blocks.front().field(), std::move(s));
}

}  // namespace phasestab
