#include "phasestab/kernels.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <omp.h>

namespace phasestab::kernels {

namespace {

template <typename Matrix>
double side_bound(const Matrix& full, std::uint64_t mask, bool* spans) {
  const Index dim = full.rows();
  const Index count = std::popcount(mask);
  if (count < dim) {
    if (spans) *spans = false;
    return 0.0;
  }
  Matrix sub(dim, count);
  Index c = 0;
  for (Index n = 0; n < full.cols(); ++n) {
    if (mask >> n & 1U) sub.col(c++) = full.col(n);
  }
  Eigen::JacobiSVD<Matrix> svd(sub);
  const auto& s = svd.singularValues();
  const double tol = static_cast<double>(std::max(dim, count)) * std::numeric_limits<double>::epsilon() * s(0);
  const bool full_rank = s(0) > 0.0 && s(dim - 1) > tol;
  if (spans) *spans = full_rank;
  return full_rank ? s(dim - 1) * s(dim - 1) : 0.0;
}

struct SplitEval {
  bool fails;
  double sigma;
};

class SplitEvaluator {
 public:
  SplitEvaluator(const CMatrix& synthesis, ScalarField field)
      : field_(field), complex_(synthesis), real_(synthesis.real()), all_(low_bits(synthesis.cols())) {}

  SplitEval operator()(std::uint64_t mask) const {
    bool a = false;
    bool b = false;
    const double la = bound(mask, &a);
    const double lb = bound(all_ & ~mask, &b);
    return {!a && !b, std::max(la, lb)};
  }

 private:
  static std::uint64_t low_bits(Index n) { return n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1; }
  double bound(std::uint64_t mask, bool* spans) const {
    return field_ == ScalarField::real ? side_bound(real_, mask, spans) : side_bound(complex_, mask, spans);
  }

  ScalarField field_;
  CMatrix complex_;
  Eigen::MatrixXd real_;
  std::uint64_t all_;
};

// Lexicographic combine: the failure with the smaller position wins, the sigma
// with the smaller value (then smaller position) wins.
struct Partial {
  std::uint64_t fail_pos = ~std::uint64_t{0};
  double sigma = std::numeric_limits<double>::infinity();
  std::uint64_t sigma_pos = ~std::uint64_t{0};

  void add(std::uint64_t pos, const SplitEval& e) {
    if (e.fails && pos < fail_pos) fail_pos = pos;
    if (e.sigma < sigma || (e.sigma == sigma && pos < sigma_pos)) {
      sigma = e.sigma;
      sigma_pos = pos;
    }
  }
  void merge(const Partial& o) {
    fail_pos = std::min(fail_pos, o.fail_pos);
    if (o.sigma < sigma || (o.sigma == sigma && o.sigma_pos < sigma_pos)) {
      sigma = o.sigma;
      sigma_pos = o.sigma_pos;
    }
  }
};

template <typename MaskAt>
SplitScan finish(const Partial& p, std::uint64_t count, MaskAt mask_at) {
  SplitScan r;
  r.scanned = count;
  r.has_failure = p.fail_pos != ~std::uint64_t{0};
  if (r.has_failure) r.first_failure = mask_at(p.fail_pos);
  r.sigma = p.sigma;
  if (p.sigma_pos != ~std::uint64_t{0}) r.sigma_mask = mask_at(p.sigma_pos);
  return r;
}

void check_size(const CMatrix& synthesis) {
  if (synthesis.cols() > 24) throw std::invalid_argument("split scan: exhaustive mode supports at most 24 vectors");
  if (synthesis.cols() < 1) throw std::invalid_argument("split scan: empty frame");
}

template <typename MaskAt>
SplitScan scan_serial(const CMatrix& synthesis, ScalarField field, std::uint64_t count, MaskAt mask_at) {
  const SplitEvaluator eval(synthesis, field);
  Partial p;
  for (std::uint64_t i = 0; i < count; ++i) p.add(i, eval(mask_at(i)));
  return finish(p, count, mask_at);
}

template <typename MaskAt>
SplitScan scan_parallel(const CMatrix& synthesis, ScalarField field, std::uint64_t count, MaskAt mask_at) {
  const SplitEvaluator eval(synthesis, field);
  const auto n = static_cast<std::int64_t>(count);
  Partial total;
#pragma omp parallel
  {
    Partial local;
#pragma omp for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
      const auto pos = static_cast<std::uint64_t>(i);
      local.add(pos, eval(mask_at(pos)));
    }
#pragma omp critical
    total.merge(local);
  }
  return finish(total, count, mask_at);
}

}  // namespace

double side_lower_bound(const CMatrix& synthesis, std::uint64_t mask, ScalarField field, bool* spans) {
  if (field == ScalarField::real) return side_bound(Eigen::MatrixXd(synthesis.real()), mask, spans);
  return side_bound(synthesis, mask, spans);
}

SplitScan scan_splits_serial(const CMatrix& synthesis, ScalarField field) {
  check_size(synthesis);
  const std::uint64_t count = std::uint64_t{1} << (synthesis.cols() - 1);
  return scan_serial(synthesis, field, count, [](std::uint64_t i) { return i; });
}

SplitScan scan_splits_parallel(const CMatrix& synthesis, ScalarField field) {
  check_size(synthesis);
  const std::uint64_t count = std::uint64_t{1} << (synthesis.cols() - 1);
  return scan_parallel(synthesis, field, count, [](std::uint64_t i) { return i; });
}

SplitScan scan_masks_serial(const CMatrix& synthesis, ScalarField field, std::span<const std::uint64_t> masks) {
  return scan_serial(synthesis, field, masks.size(), [masks](std::uint64_t i) { return masks[i]; });
}

SplitScan scan_masks_parallel(const CMatrix& synthesis, ScalarField field, std::span<const std::uint64_t> masks) {
  return scan_parallel(synthesis, field, masks.size(), [masks](std::uint64_t i) { return masks[i]; });
}

double chunked_sum_serial(Index count, const std::function<double(Index)>& term) {
  double total = 0.0;
  for (Index start = 0; start < count; start += kChunk) {
    const Index end = std::min(count, start + kChunk);
    double s = 0.0;
    for (Index i = start; i < end; ++i) s += term(i);
    total += s;
  }
  return total;
}

double chunked_sum_parallel(Index count, const std::function<double(Index)>& term) {
  if (count <= 0) return 0.0;
  const Index chunks = (count + kChunk - 1) / kChunk;
  std::vector<double> partial(static_cast<std::size_t>(chunks), 0.0);
#pragma omp parallel for schedule(dynamic, 1)
  for (Index c = 0; c < chunks; ++c) {
    const Index start = c * kChunk;
    const Index end = std::min(count, start + kChunk);
    double s = 0.0;
    for (Index i = start; i < end; ++i) s += term(i);
    partial[static_cast<std::size_t>(c)] = s;
  }
  double total = 0.0;
  for (double s : partial) total += s;
  return total;
}

namespace {

void take(ArgMin& best, double v, Index i) {
  if (std::isnan(v)) return;
  if (v < best.value || (v == best.value && (best.index < 0 || i < best.index))) best = {v, i};
}

}  // namespace

ArgMin argmin_serial(Index count, const std::function<double(Index)>& value) {
  ArgMin best;
  for (Index i = 0; i < count; ++i) take(best, value(i), i);
  return best;
}

ArgMin argmin_parallel(Index count, const std::function<double(Index)>& value) {
  ArgMin best;
#pragma omp parallel
  {
    ArgMin local;
#pragma omp for schedule(static)
    for (Index i = 0; i < count; ++i) take(local, value(i), i);
#pragma omp critical
    if (local.index >= 0) take(best, local.value, local.index);
  }
  return best;
}

}  // namespace phasestab::kernels
