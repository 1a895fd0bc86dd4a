#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "phasestab/hilbert.hpp"

namespace phasestab {

using BigInt = boost::multiprecision::cpp_int;

BigInt binomial(unsigned n, unsigned k);

/// The pair f_m = s_m(. + m) + s_m(. - 2m), g_m = s_m(. + m) - s_m(. - 2m) in
/// integer Shannon coordinates. Keys are sample positions in quarter units
/// (key 4j is the Shannon vector centred at j).
struct SincPairExact {
  unsigned m = 0;
  std::map<std::int64_t, BigInt> f, g;
  BigInt dist_sq;  // min over signs of ||f -+ g||^2
};

/// Throws std::invalid_argument for m < 1 and std::logic_error if the three
/// evaluations of the squared distance disagree.
SincPairExact sinc_pair(unsigned m);

struct WindowTooSmall : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SincGap {
  unsigned m = 0;
  Index window = 0;
  double gap_sq = 0.0;      // sum over quarter-integer samples with |x| <= window + 3/4
  double tail_bound = 0.0;  // bound on the squared gap from |x| > window + 3/4
  double integer_max = 0.0; // largest | |f(k)| - |g(k)| | over integers |k| <= 4m
  double gap() const;
  double certified_sq() const { return gap_sq + tail_bound; }
};

/// Squared measurement gap of the sinc pair. With no window, the smallest
/// doubling of 4m that pushes the tail below 1e-12 gap^2 is used. Throws
/// std::invalid_argument for m < 1 or window < 4m, and WindowTooSmall when an
/// explicit window cannot certify the tail.
SincGap sinc_gap(unsigned m, std::optional<Index> window = std::nullopt);

/// Closed-form |f_m(x)| - |g_m(x)| squared at a non-integer x.
double sinc_gap_term(unsigned m, double x);

/// f_m(x), g_m(x) by direct summation of the binomial definition.
std::pair<double, double> sinc_pair_values(unsigned m, double x);

struct GrowthRow {
  unsigned m = 0;
  BigInt central;  // binom(2m, m)
  double dist = 0.0;
  double gap = 0.0;
  double gap_tail = 0.0;
  double ratio = 0.0;  // dist / sqrt(gap^2 + tail)
  std::optional<double> log2_incr;
  bool dist_exact = false;   // dist^2 = 4 binom(2m, m)
  bool gap_bound = false;    // gap^2 + tail <= 32 / (pi^2 binom^2)
  bool ratio_bound = false;  // ratio >= pi / sqrt(8) binom^{3/2}
  bool checks_pass() const { return dist_exact && gap_bound && ratio_bound; }
};

/// Rows m = 1..m_max in ascending order. Throws std::invalid_argument for
/// m_max < 2 or an explicit window below 4 m_max.
std::vector<GrowthRow> growth_table(unsigned m_max, std::optional<Index> window = std::nullopt);

/// CSV with header m,dist,gap,gap_tail,ratio,log2_incr.
std::string format_growth_table(const std::vector<GrowthRow>& rows);

/// s_0(x) = sin(pi x) / (pi x), s_k(x) = s_{k-1}(x + 1) + s_{k-1}(x).
double s_k_eval(unsigned k, double x);
double s_k_recursive(unsigned k, double x);
double sinc_pi(double x);

}  // namespace phasestab
