#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "phasestab/kernels.hpp"
#include "phasestab/linalg.hpp"
#include "phasestab/stability.hpp"

// min ||A^2(X)|| over X = u u^* + t v v^*, u, v orthonormal, t in [-1, 1].
// For fixed (u, v) the objective J = sum_n (p_n + t q_n)^2 with p_n = |<u,phi_n>|^2,
// q_n = |<v,phi_n>|^2 is a quadratic in t, so t is always eliminated exactly.
namespace phasestab {

namespace {

struct Objective {
  const CMatrix& phi;

  // Returns J and writes the minimizing t.
  double operator()(const HVector& u, const HVector& v, double* t_out) const {
    const Eigen::VectorXd p = (phi.adjoint() * u).cwiseAbs2();
    const Eigen::VectorXd q = (phi.adjoint() * v).cwiseAbs2();
    const double qq = q.squaredNorm();
    double t = qq > 0.0 ? -p.dot(q) / qq : 0.0;
    t = std::clamp(t, -1.0, 1.0);
    if (t_out) *t_out = t;
    return (p + t * q).squaredNorm();
  }
};

LiftedGain make_result(const HVector& u, const HVector& v, double t, double j) {
  LiftedGain g;
  g.c = std::sqrt(std::max(0.0, j));
  g.u = u;
  g.v = v;
  g.t = t;
  HermitianOperator x = lift(u);
  if (v.size() > 0) x += t * lift(v);
  g.minimizer = x;
  return g;
}

CMatrix retract(const CMatrix& y) {
  Eigen::HouseholderQR<CMatrix> qr(y);
  CMatrix q = qr.householderQ() * CMatrix::Identity(y.rows(), y.cols());
  const CMatrix r = qr.matrixQR().topRows(y.cols()).triangularView<Eigen::Upper>();
  for (Index j = 0; j < y.cols(); ++j) {
    const Complex d = r(j, j);
    if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

// Variable-projection gradient descent on the Stiefel manifold of orthonormal
// pairs, QR retraction, Armijo backtracking.
LiftedGain descend(const FiniteFrame& frame, CMatrix y) {
  const Objective obj{frame.synthesis()};
  const CMatrix& phi = frame.synthesis();
  double scale = 0.0;
  for (Index n = 0; n < frame.size(); ++n) scale += std::pow(frame.norms()(n), 4);
  double t = 0.0;
  double j = obj(y.col(0), y.col(1), &t);
  double alpha = 0.1 / scale;
  for (int it = 0; it < 2000; ++it) {
    const Eigen::VectorXd p = (phi.adjoint() * y.col(0)).cwiseAbs2();
    const Eigen::VectorXd q = (phi.adjoint() * y.col(1)).cwiseAbs2();
    const Eigen::VectorXd r = p + t * q;
    CMatrix g(y.rows(), 2);
    g.col(0) = 4.0 * phi * (r.cast<Complex>().asDiagonal() * (phi.adjoint() * y.col(0)));
    g.col(1) = 4.0 * t * phi * (r.cast<Complex>().asDiagonal() * (phi.adjoint() * y.col(1)));
    const CMatrix yg = y.adjoint() * g;
    const CMatrix xi = g - y * (0.5 * (yg + yg.adjoint()));
    const double gn = xi.squaredNorm();
    if (gn <= 1e-30 * scale * scale) break;

    bool accepted = false;
    while (alpha > 1e-30 / scale) {
      const CMatrix cand = retract(y - alpha * xi);
      double tc = 0.0;
      const double jc = obj(cand.col(0), cand.col(1), &tc);
      if (jc <= j - 1e-4 * alpha * gn) {
        y = cand;
        t = tc;
        j = jc;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) break;
    alpha *= 2.0;
  }
  return make_result(y.col(0), y.col(1), t, j);
}

LiftedGain one_dimensional(const FiniteFrame& frame) {
  const double j = frame.norms().array().pow(4).sum();
  HVector u(1);
  u(0) = 1.0;
  return make_result(u, HVector(), 0.0, j);
}

}  // namespace

LiftedGain min_lifted_gain(const FiniteFrame& frame, Index restarts, std::uint64_t seed) {
  if (frame.dim() == 1) {
    LiftedGain g = one_dimensional(frame);
    g.restart_values.assign(static_cast<std::size_t>(std::max<Index>(restarts, 1)), g.c);
    return g;
  }
  restarts = std::max<Index>(restarts, 1);
  std::vector<LiftedGain> results(static_cast<std::size_t>(restarts));
#pragma omp parallel for schedule(dynamic, 1)
  for (Index r = 0; r < restarts; ++r) {
    Rng rng(split_seed(seed, static_cast<std::uint64_t>(r)));
    CMatrix y(frame.dim(), 2);
    y.col(0) = random_gaussian(frame.dim(), frame.field(), rng);
    y.col(1) = random_gaussian(frame.dim(), frame.field(), rng);
    results[static_cast<std::size_t>(r)] = descend(frame, retract(y));
  }
  std::size_t best = 0;
  std::vector<double> values;
  for (std::size_t r = 0; r < results.size(); ++r) {
    values.push_back(results[r].c);
    if (results[r].c < results[best].c) best = r;
  }
  LiftedGain out = results[best];
  out.restart_values = std::move(values);
  return out;
}

namespace {

using Pair = std::pair<HVector, HVector>;
using Param = std::function<Pair(const Eigen::VectorXd&)>;

struct GridSpec {
  Eigen::VectorXd lo, hi;
  std::vector<Index> points;
  Param build;
};

GridSpec real2() {
  return {Eigen::VectorXd::Constant(1, 0.0), Eigen::VectorXd::Constant(1, std::numbers::pi), {4096},
          [](const Eigen::VectorXd& p) {
            HVector u(2), v(2);
            u << std::cos(p(0)), std::sin(p(0));
            v << -std::sin(p(0)), std::cos(p(0));
            return Pair{u, v};
          }};
}

GridSpec complex2() {
  Eigen::VectorXd lo(2), hi(2);
  lo << 0.0, 0.0;
  hi << std::numbers::pi, 2.0 * std::numbers::pi;
  return {lo, hi, {181, 360}, [](const Eigen::VectorXd& p) {
            const double c = std::cos(p(0) / 2.0);
            const double s = std::sin(p(0) / 2.0);
            const Complex e = std::polar(1.0, p(1));
            HVector u(2), v(2);
            u << c, e * s;
            v << -std::conj(e) * s, c;
            return Pair{u, v};
          }};
}

GridSpec real3() {
  Eigen::VectorXd lo(3), hi(3);
  lo << 0.0, 0.0, 0.0;
  hi << std::numbers::pi / 2.0, 2.0 * std::numbers::pi, std::numbers::pi;
  return {lo, hi, {46, 180, 90}, [](const Eigen::VectorXd& p) {
            const double st = std::sin(p(0)), ct = std::cos(p(0));
            const double sp = std::sin(p(1)), cp = std::cos(p(1));
            HVector u(3), a(3), b(3);
            u << st * cp, st * sp, ct;
            a << ct * cp, ct * sp, -st;
            b << -sp, cp, 0.0;
            return Pair{u, std::cos(p(2)) * a + std::sin(p(2)) * b};
          }};
}

}  // namespace

std::optional<LiftedGain> grid_lifted_gain(const FiniteFrame& frame) {
  if (frame.dim() == 1) return one_dimensional(frame);
  GridSpec spec;
  if (frame.field() == ScalarField::real && frame.dim() == 2) {
    spec = real2();
  } else if (frame.field() == ScalarField::real && frame.dim() == 3) {
    spec = real3();
  } else if (frame.field() == ScalarField::complex && frame.dim() == 2) {
    spec = complex2();
  } else {
    return std::nullopt;
  }
  const Objective obj{frame.synthesis()};
  const Index d = spec.lo.size();
  Eigen::VectorXd step(d);
  Index total = 1;
  for (Index i = 0; i < d; ++i) {
    step(i) = (spec.hi(i) - spec.lo(i)) / static_cast<double>(spec.points[static_cast<std::size_t>(i)]);
    total *= spec.points[static_cast<std::size_t>(i)];
  }
  auto point = [&](Index flat) {
    Eigen::VectorXd p(d);
    for (Index i = d - 1; i >= 0; --i) {
      const Index k = spec.points[static_cast<std::size_t>(i)];
      p(i) = spec.lo(i) + step(i) * static_cast<double>(flat % k);
      flat /= k;
    }
    return p;
  };
  auto value = [&](const Eigen::VectorXd& p) {
    const Pair uv = spec.build(p);
    return obj(uv.first, uv.second, nullptr);
  };

  const auto best = kernels::argmin_parallel(total, [&](Index i) { return value(point(i)); });
  Eigen::VectorXd p = point(best.index);
  double j = best.value;

  // Compass refinement from the best grid point.
  Eigen::VectorXd h = step;
  while (h.maxCoeff() > 1e-13) {
    bool improved = false;
    for (Index i = 0; i < d && !improved; ++i) {
      for (double sgn : {1.0, -1.0}) {
        Eigen::VectorXd q = p;
        q(i) += sgn * h(i);
        const double jq = value(q);
        if (jq < j) {
          p = q;
          j = jq;
          improved = true;
          break;
        }
      }
    }
    if (!improved) h *= 0.5;
  }
  const Pair uv = spec.build(p);
  double t = 0.0;
  j = obj(uv.first, uv.second, &t);
  return make_result(uv.first, uv.second, t, j);
}

}  // namespace phasestab
