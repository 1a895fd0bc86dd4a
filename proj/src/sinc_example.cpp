#include "phasestab/sinc_example.hpp"

#include <cmath>
#include <cstdio>
#include <exception>
#include <numbers>

namespace phasestab {

BigInt binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  BigInt r = 1;
  for (unsigned i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

SincPairExact sinc_pair(unsigned m) {
  if (m < 1) throw std::invalid_argument("sinc_pair: m must be at least 1");
  SincPairExact p;
  p.m = m;
  const std::int64_t mm = m;
  BigInt sum_sq = 0;
  for (unsigned l = 0; l <= m; ++l) {
    const BigInt b = binomial(m, l);
    sum_sq += b * b;
    const std::int64_t left = 4 * (-2 * mm + l);
    const std::int64_t right = 4 * (2 * mm - l);
    p.f[left] += b;
    p.g[left] += b;
    p.f[right] += b;
    p.g[right] -= b;
  }
  BigInt minus = 0, plus = 0;
  for (const auto& [key, fv] : p.f) {
    const auto it = p.g.find(key);
    const BigInt gv = it == p.g.end() ? BigInt(0) : it->second;
    minus += (fv - gv) * (fv - gv);
    plus += (fv + gv) * (fv + gv);
  }
  p.dist_sq = minus < plus ? minus : plus;
  if (p.dist_sq != 4 * sum_sq || sum_sq != binomial(2 * m, m)) {
    throw std::logic_error("sinc_pair: squared distance evaluations disagree");
  }
  return p;
}

namespace {

double sin_pi(double x) {
  const double r = x - 2.0 * std::round(x / 2.0);
  return std::sin(std::numbers::pi * r);
}

bool is_integer(double x) { return std::isfinite(x) && x == std::round(x); }

// 24 (m!)^2 / pi^2 (W + m)^{-(2m+1)} / (2m+1), in logs.
double tail_bound(unsigned m, Index window) {
  const double p = 2.0 * m + 1.0;
  const double log_t = std::log(24.0 / (std::numbers::pi * std::numbers::pi)) + 2.0 * std::lgamma(m + 1.0) -
                       p * std::log(static_cast<double>(window) + m) - std::log(p);
  return std::exp(log_t);
}

double windowed_gap_sq(unsigned m, Index window) {
  double s = 0.0;
  for (Index j = 1; j <= 4 * window + 3; ++j) {
    if (j % 4 == 0) continue;
    s += 2.0 * sinc_gap_term(m, static_cast<double>(j) / 4.0);
  }
  return s;
}

}  // namespace

double sinc_pi(double x) {
  if (x == 0.0) return 1.0;
  if (is_integer(x)) return 0.0;
  return sin_pi(x) / (std::numbers::pi * x);
}

double sinc_gap_term(unsigned m, double x) {
  const double a = std::abs(x);
  double r = 1.0 / (a + m);
  for (unsigned i = 1; i <= m; ++i) r *= i / (a + m + i);
  const double s = sin_pi(a);
  return 4.0 / (std::numbers::pi * std::numbers::pi) * s * s * r * r;
}

std::pair<double, double> sinc_pair_values(unsigned m, double x) {
  double a = 0.0, b = 0.0;  // s_m(x + m), s_m(x - 2m)
  for (unsigned l = 0; l <= m; ++l) {
    const double w = static_cast<double>(binomial(m, l));
    a += w * sinc_pi(x + 2.0 * m - l);
    b += w * sinc_pi(x - 2.0 * m + l);
  }
  return {a + b, a - b};
}

double SincGap::gap() const { return std::sqrt(gap_sq); }

SincGap sinc_gap(unsigned m, std::optional<Index> window) {
  if (m < 1) throw std::invalid_argument("sinc_gap: m must be at least 1");
  const Index min_window = 4 * static_cast<Index>(m);
  if (window && *window < min_window) throw std::invalid_argument("sinc_gap: window must be at least 4m");

  SincGap out;
  out.m = m;
  for (Index k = -min_window; k <= min_window; ++k) {
    const auto [f, g] = sinc_pair_values(m, static_cast<double>(k));
    out.integer_max = std::max(out.integer_max, std::abs(std::abs(f) - std::abs(g)));
  }

  Index w = window.value_or(min_window);
  for (;;) {
    out.window = w;
    out.gap_sq = windowed_gap_sq(m, w);
    out.tail_bound = tail_bound(m, w);
    if (out.tail_bound <= 1e-12 * out.gap_sq) return out;
    if (window) throw WindowTooSmall("sinc_gap: window " + std::to_string(w) + " cannot certify the tail");
    w *= 2;
  }
}

std::vector<GrowthRow> growth_table(unsigned m_max, std::optional<Index> window) {
  if (m_max < 2) throw std::invalid_argument("growth_table: m_max must be at least 2");
  if (window && *window < 4 * static_cast<Index>(m_max)) {
    throw std::invalid_argument("growth_table: window must be at least 4 m_max");
  }
  std::vector<GrowthRow> rows(m_max);
  std::vector<std::exception_ptr> errors(m_max);
#pragma omp parallel for schedule(dynamic, 1)
  for (int i = 0; i < static_cast<int>(m_max); ++i) {
    try {
      const unsigned m = static_cast<unsigned>(i) + 1;
      const SincPairExact pair = sinc_pair(m);
      const SincGap gap = sinc_gap(m, window);
      GrowthRow& row = rows[static_cast<std::size_t>(i)];
      row.m = m;
      row.central = binomial(2 * m, m);
      row.dist = std::sqrt(static_cast<double>(pair.dist_sq));
      row.gap = gap.gap();
      row.gap_tail = gap.tail_bound;
      row.ratio = row.dist / std::sqrt(gap.certified_sq());
      const double c = static_cast<double>(row.central);
      row.dist_exact = pair.dist_sq == 4 * row.central;
      row.gap_bound = gap.certified_sq() <= 32.0 / (std::numbers::pi * std::numbers::pi * c * c);
      row.ratio_bound = row.ratio >= std::numbers::pi / std::sqrt(8.0) * std::pow(c, 1.5);
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) rows[i].log2_incr = std::log2(rows[i + 1].ratio / rows[i].ratio);
  return rows;
}

std::string format_growth_table(const std::vector<GrowthRow>& rows) {
  std::string out = "m,dist,gap,gap_tail,ratio,log2_incr\n";
  char buf[256];
  for (const GrowthRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%u,%.17g,%.17g,%.17g,%.17g,", r.m, r.dist, r.gap, r.gap_tail, r.ratio);
    out += buf;
    if (r.log2_incr) {
      std::snprintf(buf, sizeof buf, "%.17g", *r.log2_incr);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

double s_k_recursive(unsigned k, double x) {
  std::vector<double> v(k + 1);
  for (unsigned j = 0; j <= k; ++j) v[j] = sinc_pi(x + j);
  for (unsigned level = 1; level <= k; ++level) {
    for (unsigned j = 0; j + level <= k; ++j) v[j] += v[j + 1];
  }
  return v[0];
}

double s_k_eval(unsigned k, double x) {
  if (is_integer(x)) {
    const double n = -x;
    return n >= 0.0 && n <= k ? static_cast<double>(binomial(k, static_cast<unsigned>(n))) : 0.0;
  }
  for (unsigned n = 0; n <= k; ++n) {
    if (std::abs(x + n) < 1e-8) return s_k_recursive(k, x);
  }
  // k! sin(pi x) / (pi x (x+1) ... (x+k))
  double r = sin_pi(x) / (std::numbers::pi * x);
  for (unsigned i = 1; i <= k; ++i) r *= i / (x + i);
  return r;
}

}  // namespace phasestab
