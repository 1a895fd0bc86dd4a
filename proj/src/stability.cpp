#include "phasestab/stability.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "phasestab/kernels.hpp"
#include "phasestab/linalg.hpp"

namespace phasestab {

std::string_view to_string(CPStatus status) {
  switch (status) {
    case CPStatus::holds: return "holds";
    case CPStatus::fails: return "fails";
    default: return "unknown";
  }
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::yes: return "yes";
    case Verdict::no: return "no";
    default: return "heuristic_yes";
  }
}

std::string_view to_string(PRMethod m) {
  switch (m) {
    case PRMethod::complement: return "complement";
    case PRMethod::lifted: return "lifted";
    default: return "auto";
  }
}

namespace {

std::vector<Index> mask_to_subset(std::uint64_t mask, Index count) {
  std::vector<Index> s;
  for (Index n = 0; n < count; ++n) {
    if (mask >> n & 1U) s.push_back(n);
  }
  return s;
}

CMatrix columns(const FiniteFrame& frame, const std::vector<Index>& idx) {
  CMatrix m(frame.dim(), static_cast<Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) m.col(static_cast<Index>(i)) = frame.synthesis().col(idx[i]);
  return m;
}

}  // namespace

VectorPair complement_counterexample(const FiniteFrame& frame, const std::vector<Index>& subset) {
  std::vector<bool> in(static_cast<std::size_t>(frame.size()), false);
  for (Index n : subset) in.at(static_cast<std::size_t>(n)) = true;
  std::vector<Index> rest;
  for (Index n = 0; n < frame.size(); ++n) {
    if (!in[static_cast<std::size_t>(n)]) rest.push_back(n);
  }
  const CMatrix qs = orthogonal_complement(columns(frame, subset), frame.dim());
  const CMatrix qr = orthogonal_complement(columns(frame, rest), frame.dim());
  if (qs.cols() == 0 || qr.cols() == 0) {
    throw std::invalid_argument("complement_counterexample: one side of the split spans");
  }
  HVector u = lowest_index_direction(qs);
  HVector v = lowest_index_direction(qr);
  if (frame.field() == ScalarField::real) {
    u = u.real().cast<Complex>();
    v = v.real().cast<Complex>();
    u /= u.norm();
    v /= v.norm();
  } else if (std::abs(inner(v, u).imag()) > 0.5) {
    v *= Complex{0.0, 1.0};  // keeps d(u + v, u - v) away from 0
  }
  return {u + v, u - v};
}

CPReport complement_property(const FiniteFrame& frame, CPMode mode, std::uint64_t seed, std::uint64_t samples) {
  const Index count = frame.size();
  if (mode == CPMode::automatic) mode = count <= 24 ? CPMode::exhaustive : CPMode::randomized;
  if (mode == CPMode::exhaustive && count > 24) {
    throw std::invalid_argument("complement_property: exhaustive mode supports at most 24 vectors");
  }

  CPReport r;
  kernels::SplitScan scan;
  if (mode == CPMode::exhaustive) {
    r.exhaustive = true;
    scan = kernels::scan_splits_parallel(frame.synthesis(), frame.field());
  } else {
    if (count > 64) throw std::invalid_argument("complement_property: randomized mode supports at most 64 vectors");
    Rng rng(split_seed(seed, 0xC0));
    const std::uint64_t top = count == 64 ? ~std::uint64_t{0} >> 1 : (std::uint64_t{1} << (count - 1)) - 1;
    std::vector<std::uint64_t> masks(samples);
    for (auto& m : masks) m = rng() & top;
    scan = kernels::scan_masks_parallel(frame.synthesis(), frame.field(), masks);
  }
  r.splits_scanned = scan.scanned;
  if (scan.has_failure) {
    r.status = CPStatus::fails;
    r.witness_subset = mask_to_subset(scan.first_failure, count);
    r.counterexample = complement_counterexample(frame, r.witness_subset);
  } else {
    r.status = r.exhaustive ? CPStatus::holds : CPStatus::unknown;
  }
  return r;
}

double strong_cp_sigma(const FiniteFrame& frame) {
  if (frame.size() > 24) throw std::invalid_argument("strong_cp_sigma: at most 24 vectors");
  const auto scan = kernels::scan_splits_parallel(frame.synthesis(), frame.field());
  return scan.has_failure ? 0.0 : scan.sigma;
}

double lipschitz_constant(const FiniteFrame& frame, double c) {
  if (!(c > 0.0)) throw std::invalid_argument("lipschitz_constant: c must be positive");
  return 4.0 * frame.max_norm() / c;
}

PRVerdict does_phase_retrieval(const FiniteFrame& frame, PRMethod method, std::uint64_t seed, Index restarts) {
  PRVerdict v;
  v.lifted_dim = lifted_dimension(frame.dim(), frame.field());
  if (method == PRMethod::automatic) {
    method = frame.field() == ScalarField::real && frame.size() <= 24 ? PRMethod::complement : PRMethod::lifted;
  }

  if (method == PRMethod::complement) {
    const CPReport cp = complement_property(frame, CPMode::automatic, seed);
    if (cp.status == CPStatus::fails) {
      v.verdict = Verdict::no;
      v.method = "complement";
      v.witness = cp.counterexample;
      v.witness_subset = cp.witness_subset;
      return v;
    }
    if (cp.status == CPStatus::holds && frame.field() == ScalarField::real) {
      v.verdict = Verdict::yes;
      v.method = "complement";
      return v;
    }
  }

  // Lifted route: A^2 injective on rank <= 2 operators.
  const Eigen::MatrixXd a = lifted_matrix(frame);
  v.lifted_rank = numerical_rank(a);
  if (v.lifted_rank == v.lifted_dim) {
    v.verdict = Verdict::yes;
    v.method = "lifted-kernel";
    return v;
  }
  const LiftedGain gain = min_lifted_gain(frame, restarts, seed);
  v.method = "lifted-gain";
  v.confidence = gain.c;
  const double scale = frame.max_norm() * frame.max_norm();
  if (gain.c <= 1e-7 * scale) {
    v.verdict = Verdict::no;
    // u u^* + t v v^* ~ 0 on the frame: t < 0 gives equal measurements of u and
    // sqrt(-t) v; t >= 0 forces u to be orthogonal to every frame vector.
    const HVector g = gain.t < 0.0 ? HVector(std::sqrt(-gain.t) * gain.v) : HVector(HVector::Zero(frame.dim()));
    v.witness = VectorPair{gain.u, g};
  } else {
    v.verdict = Verdict::heuristic_yes;
  }
  return v;
}

std::vector<Index> select_pr_subset(const std::vector<HVector>& vectors, ScalarField field) {
  std::vector<Index> kept;
  std::vector<Eigen::VectorXd> basis;
  for (std::size_t n = 0; n < vectors.size(); ++n) {
    Eigen::VectorXd x = lifted_coords(vectors[n], field);
    const double scale = x.norm();
    if (scale == 0.0) continue;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) x -= b.dot(x) * b;
    }
    if (x.norm() > 1e-10 * scale) {
      basis.push_back(x / x.norm());
      kept.push_back(static_cast<Index>(n));
    }
  }
  return kept;
}

Comparison upper_lipschitz_check(const FiniteFrame& frame, const HVector& f, const HVector& g) {
  return {measurement_gap(measure(frame, f), measure(frame, g)),
          std::sqrt(frame.bounds().upper) * quotient_distance(f, g, frame.field())};
}

namespace {

double pair_ratio(const FiniteFrame& frame, const HVector& f, const HVector& g) {
  const double d = quotient_distance(f, g, frame.field());
  if (d <= 0.0) return std::numeric_limits<double>::infinity();
  return measurement_gap(measure(frame, f), measure(frame, g)) / d;
}

Eigen::VectorXd min_eigvec(const Eigen::MatrixXd& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  return es.eigenvectors().col(0);
}

// Real field: with f = x + y, g = x - y the measurement gap is
// 2 (sum_n min(|<x,phi_n>|, |<y,phi_n>|)^2)^{1/2} and d = 2 min(||x||, ||y||).
// Alternate between the split S = {n : |<x,phi_n>| < |<y,phi_n>|} and the
// smallest-eigenvector choice of x (on S) and y (on S^c); each step can only
// lower the ratio.
double refine_real(const FiniteFrame& frame, HVector x, HVector y, std::map<std::uint64_t, double>* cache) {
  const Eigen::MatrixXd phi = frame.synthesis().real();
  const Index count = frame.size();
  double best = pair_ratio(frame, x + y, x - y);
  std::uint64_t prev = ~std::uint64_t{0};
  for (int it = 0; it < 50; ++it) {
    const Eigen::VectorXd tx = phi.transpose() * x.real();
    const Eigen::VectorXd ty = phi.transpose() * y.real();
    std::uint64_t mask = 0;
    Eigen::MatrixXd fs = Eigen::MatrixXd::Zero(frame.dim(), frame.dim());
    Eigen::MatrixXd fc = fs;
    for (Index n = 0; n < count; ++n) {
      const bool s = std::abs(tx(n)) < std::abs(ty(n));
      if (s && n < 64) mask |= std::uint64_t{1} << n;
      (s ? fs : fc) += phi.col(n) * phi.col(n).transpose();
    }
    if (mask == prev && count <= 64) break;
    prev = mask;
    if (cache && count <= 64) {
      if (auto hit = cache->find(mask); hit != cache->end()) return std::min(best, hit->second);
    }
    x = min_eigvec(fs).cast<Complex>();
    y = min_eigvec(fc).cast<Complex>();
    const double r = pair_ratio(frame, x + y, x - y);
    best = std::min(best, r);
    if (cache && count <= 64) (*cache)[mask] = r;
  }
  return best;
}

// Complex field: compass search on the real and imaginary parts of (f, g).
double refine_pattern(const FiniteFrame& frame, HVector f, HVector g) {
  const Index m = frame.dim();
  double best = pair_ratio(frame, f, g);
  double step = 0.25;
  for (int sweep = 0; sweep < 400 && step > 1e-12; ++sweep) {
    bool improved = false;
    for (Index p = 0; p < 4 * m; ++p) {
      HVector& w = p < 2 * m ? f : g;
      const Index i = (p % (2 * m)) / 2;
      const Complex dir = p % 2 == 0 ? Complex{1.0, 0.0} : Complex{0.0, 1.0};
      for (double sgn : {1.0, -1.0}) {
        w(i) += sgn * step * dir;
        const double r = pair_ratio(frame, f, g);
        if (r < best) {
          best = r;
          improved = true;
          break;
        }
        w(i) -= sgn * step * dir;
      }
    }
    if (!improved) step *= 0.5;
  }
  return best;
}

}  // namespace

double empirical_lower_lipschitz(const FiniteFrame& frame, Index trials, std::uint64_t seed) {
  const Index m = frame.dim();
  Rng rng(split_seed(seed, 0x1F));
  double best = std::numeric_limits<double>::infinity();
  if (frame.field() == ScalarField::real) {
    std::map<std::uint64_t, double> cache;
    for (Index t = 0; t < trials; ++t) {
      const HVector x = random_unit(m, ScalarField::real, rng);
      const HVector y = random_unit(m, ScalarField::real, rng);
      best = std::min(best, refine_real(frame, x, y, &cache));
    }
    return best;
  }

  struct Sample {
    double ratio;
    HVector f, g;
  };
  std::vector<Sample> samples;
  for (Index t = 0; t < trials; ++t) {
    HVector f = random_unit(m, frame.field(), rng);
    HVector g = random_unit(m, frame.field(), rng);
    samples.push_back({pair_ratio(frame, f, g), std::move(f), std::move(g)});
  }
  std::stable_sort(samples.begin(), samples.end(), [](const Sample& a, const Sample& b) { return a.ratio < b.ratio; });
  for (std::size_t i = 0; i < std::min<std::size_t>(8, samples.size()); ++i) {
    best = std::min(best, refine_pattern(frame, samples[i].f, samples[i].g));
  }
  return best;
}

LipschitzVerification verify_lipschitz(const FiniteFrame& frame, double constant, Index trials, std::uint64_t seed) {
  LipschitzVerification v;
  v.trials = trials;
  Rng rng(split_seed(seed, 0x11));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (Index t = 0; t < trials; ++t) {
    const HVector f = random_unit(frame.dim(), frame.field(), rng);
    const HVector g = unit(rng) * random_unit(frame.dim(), frame.field(), rng);
    const double d = quotient_distance(f, g, frame.field());
    const double gap = measurement_gap(measure(frame, f), measure(frame, g));
    if (d <= constant * gap * (1.0 + 1e-9) + 1e-12) ++v.passed;
    if (gap > 0.0) v.worst_ratio = std::max(v.worst_ratio, d / (constant * gap));
  }
  return v;
}

BlockCertifier pr_certifier() {
  return [](const FiniteFrame& block) {
    if (block.field() == ScalarField::real) return complement_property(block, CPMode::exhaustive).holds();
    return does_phase_retrieval(block, PRMethod::lifted).verdict != Verdict::no;
  };
}

}  // namespace phasestab
