#include "phasestab/instability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "phasestab/kernels.hpp"
#include "phasestab/linalg.hpp"

namespace phasestab {

LemmaResult lemma_search(const GeneratedFrame& gen, double eps, Index N, const SearchBudget& budget) {
  if (!(eps > 0.0)) throw std::invalid_argument("lemma_search: eps must be positive");
  if (N < 1) throw std::invalid_argument("lemma_search: N must be at least 1");

  CMatrix gram(N, N);
  for (Index i = 0; i < N; ++i) {
    for (Index j = 0; j < N; ++j) gram(i, j) = gen.inner(j + 1, i + 1);
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(gram);
  const Eigen::VectorXd& lam = es.eigenvalues();
  const double cutoff = static_cast<double>(N) * std::numeric_limits<double>::epsilon() * std::max(lam.maxCoeff(), 0.0);

  // ||P_V phi_k||^2 = b^* G^+ b with b_i = <phi_k, phi_i>.
  auto projection_sq = [&](Index k) {
    HVector b(N);
    for (Index i = 0; i < N; ++i) b(i) = gen.inner(k, i + 1);
    const HVector y = es.eigenvectors().adjoint() * b;
    double s = 0.0;
    for (Index i = 0; i < N; ++i) {
      if (lam(i) > cutoff) s += std::norm(y(i)) / lam(i);
    }
    return s;
  };
  auto head_sum = [&](Index k) {
    double s = 0.0;
    for (Index n = 1; n <= N; ++n) s += std::norm(gen.inner(k, n));
    return s;
  };

  LemmaResult out;
  double best = std::numeric_limits<double>::infinity();
  const double threshold = eps / (2.0 * gen.upper_bound);
  for (Index k = N + 1; k <= N + budget.k_scan; ++k) {
    if (projection_sq(k) >= threshold) continue;
    const double head = head_sum(k);
    best = std::min(best, head);
    if (head < eps / 2.0) {
      out.k = k;
      out.head_sum = head;
      break;
    }
  }
  if (out.k == 0) throw SearchBudgetExhausted("lemma_search: no k within the scan budget", best);

  const Index k = out.k;
  const double half = eps / 2.0;
  Index lo = k;  // cross_tail(k, lo) >= half, or lo == k
  Index step = 1;
  while (gen.cross_tail_sq(k, k + step) >= half) {
    lo = k + step;
    step *= 2;
    if (k + step > budget.m_limit) {
      throw SearchBudgetExhausted("lemma_search: no m within the budget", out.head_sum + gen.cross_tail_sq(k, lo));
    }
  }
  Index hi = k + step;
  while (hi - lo > 1) {
    const Index mid = lo + (hi - lo) / 2;
    if (gen.cross_tail_sq(k, mid) < half) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  out.m = hi;
  out.tail_bound = gen.cross_tail_sq(k, hi);
  if (!(out.k > N && out.m > out.k && out.certified_sum() < eps)) {
    throw std::logic_error("lemma_search: certification failed");
  }
  return out;
}

namespace {

// psi = sum_i coords[i] e_{support[i]} + alpha u, with u = phi_k / ||phi_k||.
struct Psi {
  std::vector<Index> support;
  std::vector<Complex> coords;
  Complex alpha{0.0, 0.0};
};

struct Context {
  const GeneratedFrame& gen;
  Index k;
  double nk;

  Complex u_coord(Index l) const { return gen.coord(k, l) / nk; }
  Complex a(Index n) const { return gen.inner(k, n) / nk; }
  Complex b(const Psi& psi, Index n) const {
    Complex s = psi.alpha * a(n);
    for (std::size_t i = 0; i < psi.support.size(); ++i) s += psi.coords[i] * std::conj(gen.coord(n, psi.support[i]));
    return s;
  }
  double gap_sq(const Psi& psi, Index window) const {
    return kernels::chunked_sum_parallel(window, [&](Index i) {
      const Complex an = a(i + 1);
      const Complex bn = b(psi, i + 1);
      const double d = std::abs(an + bn) - std::abs(an - bn);
      return d * d;
    });
  }
  double gap_tail(Index window) const { return 2.0 * std::sqrt(gen.cross_tail_sq(k, window)) / nk; }
};

Psi complement_psi(const GeneratedFrame& gen, Index N, Index m, Index ambient) {
  CMatrix cols(ambient, m - N);
  for (Index j = 0; j < m - N; ++j) {
    for (Index l = 1; l <= ambient; ++l) cols(l - 1, j) = gen.coord(N + 1 + j, l);
  }
  HVector psi = lowest_index_direction(orthogonal_complement(cols, ambient));
  if (gen.field == ScalarField::real) {
    psi = psi.real().cast<Complex>();
    psi /= psi.norm();
  }
  Psi out;
  for (Index l = 1; l <= ambient; ++l) {
    if (psi(l - 1) != Complex{0.0, 0.0}) {
      out.support.push_back(l);
      out.coords.push_back(psi(l - 1));
    }
  }
  return out;
}

// e_P made orthogonal to u, for a reference index P far from every vector of interest.
Psi far_field_psi(const Context& ctx, Index P) {
  const Complex c0 = ctx.u_coord(P);
  const double s = std::sqrt(1.0 - std::norm(c0));
  Psi out;
  out.support = {P};
  out.coords = {Complex{1.0 / s, 0.0}};
  out.alpha = -std::conj(c0) / s;
  return out;
}

void fill_pair(const Context& ctx, const Psi& psi, Index coord_window, WitnessPair& w) {
  // Norms and <f, g> from the structure u, w, alpha rather than truncated coordinates.
  double ww = 0.0;
  Complex uw{0.0, 0.0};
  for (std::size_t i = 0; i < psi.support.size(); ++i) {
    ww += std::norm(psi.coords[i]);
    uw += ctx.u_coord(psi.support[i]) * std::conj(psi.coords[i]);
  }
  const double uu = ctx.gen.inner(ctx.k, ctx.k).real() / (ctx.nk * ctx.nk);
  const double pp = ww + std::norm(psi.alpha) * uu + 2.0 * (std::conj(psi.alpha) * std::conj(uw)).real();
  const Complex up = uw + std::conj(psi.alpha) * uu;
  const double ff = uu + pp + 2.0 * up.real();
  const double gg = uu + pp - 2.0 * up.real();
  const Complex fg = Complex{uu - pp, -2.0 * up.imag()};
  const double overlap = ctx.gen.field == ScalarField::real ? std::abs(fg.real()) : std::abs(fg);
  w.norm_f = std::sqrt(ff);
  w.norm_g = std::sqrt(gg);
  w.distance = std::sqrt(std::max(0.0, ff + gg - 2.0 * overlap));

  w.psi_support = psi.support;
  w.psi_coords = psi.coords;
  w.psi_u = psi.alpha;

  std::vector<Index> support;
  for (Index l = 1; l <= coord_window; ++l) support.push_back(l);
  for (Index l : psi.support) {
    if (l > coord_window) support.push_back(l);
  }
  w.support = support;
  w.f.clear();
  w.g.clear();
  for (Index l : support) {
    Complex wl{0.0, 0.0};
    for (std::size_t i = 0; i < psi.support.size(); ++i) {
      if (psi.support[i] == l) wl = psi.coords[i];
    }
    const Complex ul = ctx.u_coord(l);
    w.f.push_back(ul + psi.alpha * ul + wl);
    w.g.push_back(ul - psi.alpha * ul - wl);
  }
  const double amp = std::max(std::norm(1.0 + psi.alpha), std::norm(1.0 - psi.alpha));
  w.coord_tail_sq = amp * ctx.gen.tail_norm_sq(ctx.k, coord_window) / (ctx.nk * ctx.nk);
}

bool postconditions_hold(const WitnessPair& w) {
  const double root2 = std::sqrt(2.0);
  return std::abs(w.distance - 2.0) <= 1e-9 && std::abs(w.norm_f - root2) <= 1e-9 &&
         std::abs(w.norm_g - root2) <= 1e-9 && w.gap_value + w.gap_tail_bound <= w.delta;
}

Index floor_div(Index a, Index b) { return a / b - ((a % b != 0) && ((a < 0) != (b < 0)) ? 1 : 0); }

}  // namespace

WitnessPair build_witness(const GeneratedFrame& gen, double delta, Index N, const WitnessOptions& options) {
  if (!(delta > 0.0)) throw std::invalid_argument("build_witness: delta must be positive");
  if (!(gen.min_norm > 0.0)) throw std::invalid_argument("build_witness: generator needs a positive lower norm bound");

  WitnessPair w;
  w.generator = gen.name;
  w.N = N;
  w.delta = delta;
  w.epsilon = gen.min_norm * gen.min_norm * delta * delta / 4.0;
  const LemmaResult lemma = lemma_search(gen, w.epsilon, N, options.budget);
  w.k = lemma.k;
  w.m = lemma.m;
  const Context ctx{gen, lemma.k, gen.norm(lemma.k)};

  bool finite = lemma.m - N <= options.dense_cap && gen.support_end(lemma.k) >= 0;
  Index ambient = std::max(lemma.m + 16, gen.support_end(lemma.k));
  for (Index n = N + 1; finite && n <= lemma.m; ++n) {
    const Index end = gen.support_end(n);
    if (end < 0) finite = false;
    ambient = std::max(ambient, end);
  }

  if (finite) {
    w.psi_mode = "complement";
    const Psi psi = complement_psi(gen, N, lemma.m, ambient);
    for (Index n = N + 1; n <= lemma.m; ++n) w.block_residual = std::max(w.block_residual, std::abs(ctx.b(psi, n)));
    Index window = std::max(ambient, lemma.m);
    while (ctx.gap_tail(window) > delta / 2.0) window *= 2;
    w.gap_window = window;
    w.gap_value = std::sqrt(ctx.gap_sq(psi, window));
    w.gap_tail_bound = ctx.gap_tail(window);
    fill_pair(ctx, psi, ambient, w);
    w.verified = postconditions_hold(w);
    return w;
  }

  // Far field: psi sits on a single reference vector placed well past the
  // block, and the measurement gap is certified directly.
  w.psi_mode = "far_field";
  Index coord_window = 64;
  while (coord_window < (Index{1} << 20) && gen.tail_norm_sq(lemma.k, coord_window) > 1e-4) coord_window *= 2;
  const Index zk = zigzag(lemma.k);
  double best = std::numeric_limits<double>::infinity();
  Index sep = std::max(static_cast<Index>(std::ceil(16.0 / (delta * delta))), lemma.m / 8 + 1);
  for (int attempt = 0; attempt < options.far_field_attempts; ++attempt, sep *= 2) {
    const Index P = zigzag_index(floor_div(zk, 4) + sep);
    const Psi psi = far_field_psi(ctx, P);
    Index window = std::max({4 * P, lemma.m, Index{1}});
    while (ctx.gap_tail(window) > delta / 2.0) window *= 2;
    const double gap = std::sqrt(ctx.gap_sq(psi, window));
    const double tail = ctx.gap_tail(window);
    best = std::min(best, gap + tail);
    if (gap + tail > delta) continue;
    w.gap_window = window;
    w.gap_value = gap;
    w.gap_tail_bound = tail;
    w.block_residual = 0.0;
    for (Index n = N + 1; n <= lemma.m; ++n) {
      w.block_residual = std::max(w.block_residual, std::abs(ctx.b(psi, n)));
    }
    fill_pair(ctx, psi, coord_window, w);
    w.verified = postconditions_hold(w);
    return w;
  }
  throw SearchBudgetExhausted("build_witness: measurement gap not certified below delta", best);
}

}  // namespace phasestab
