#ifndef GERM_DYNAMICS_HPP
#define GERM_DYNAMICS_HPP

// Floating-point side: orbits x_{n+1} = f(x_n) of maps tangent to the
// identity, estimators for the decay x_n ~ C n^{-b}, the least-squares fit
// of the log(n)/n coefficient, and the comparator maps used to sandwich
// orbits between explicit sequences.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "germ/error.hpp"
#include "germ/field.hpp"
#include "germ/normal_form.hpp"
#include "germ/series.hpp"

namespace germ {

/// A real map f on [0, basin_bound) with 0 < f(x) < x, started at x0.
struct RealMapSpec {
  enum class Kind { Sine, Polynomial };

  Kind kind = Kind::Sine;
  /// a_2..a_N of x + a_2 x^2 + ... for Kind::Polynomial.
  std::vector<Rational> coeffs;
  double basin_bound = 3.0;
  double x0 = 1.0;

  static RealMapSpec sine(double x0, double basin_bound = 3.0) {
    RealMapSpec spec;
    spec.kind = Kind::Sine;
    spec.x0 = x0;
    spec.basin_bound = basin_bound;
    return spec;
  }

  static RealMapSpec polynomial(const TruncSeries<Rationals>& f, double x0, double basin_bound = 1.0) {
    RealMapSpec spec;
    spec.kind = Kind::Polynomial;
    spec.coeffs.assign(f.higher_coeffs().begin(), f.higher_coeffs().end());
    spec.x0 = x0;
    spec.basin_bound = basin_bound;
    spec.cache();
    return spec;
  }

  template <class Real>
  Real operator()(Real x) const {
    if (kind == Kind::Sine) {
      using std::sin;
      return sin(x);
    }
    const auto& c = coeffs_as<Real>();
    Real acc = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = (acc + *it) * x;
    return (acc + Real(1)) * x;
  }

  /// The Taylor polynomial of the map as an exact series at precision n.
  TruncSeries<Rationals> taylor(int precision) const {
    std::vector<Rational> c(static_cast<std::size_t>(precision - 1));
    if (kind == Kind::Polynomial) {
      for (std::size_t i = 0; i < c.size() && i < coeffs.size(); ++i) c[i] = coeffs[i];
    } else {
      // sin x = sum (-1)^k x^{2k+1} / (2k+1)!
      BigInt factorial = 1;
      for (int d = 2; d <= precision; ++d) {
        factorial *= d;
        if (d % 2 == 1) c[static_cast<std::size_t>(d - 2)] = Rational(((d / 2) % 2 == 1) ? -1 : 1, factorial);
      }
    }
    return TruncSeries<Rationals>(Rationals{}, std::move(c));
  }

  std::string name() const {
    if (kind == Kind::Sine) return "sin";
    return to_polynomial_string(TruncSeries<Rationals>(Rationals{}, coeffs));
  }

 private:
  void cache() {
    coeffs_d_.clear();
    coeffs_ld_.clear();
    for (const auto& c : coeffs) {
      coeffs_d_.push_back(c.to_double());
      coeffs_ld_.push_back(c.to_long_double());
    }
  }

  template <class Real>
  const std::vector<Real>& coeffs_as() const {
    if constexpr (std::is_same_v<Real, long double>) {
      return coeffs_ld_;
    } else {
      return coeffs_d_;
    }
  }

  std::vector<double> coeffs_d_;
  std::vector<long double> coeffs_ld_;
};

/// Checks x0 in (0, basin_bound) and 0 < f(x) < x on `samples` evenly spaced
/// points of (0, x0]. A numerical check, not a proof.
inline void validate_map(const RealMapSpec& spec, int samples = 10000) {
  if (!(spec.x0 > 0.0 && spec.x0 < spec.basin_bound)) {
    throw Error(ErrorKind::BasinViolation, "x0 must lie in (0, basin_bound)");
  }
  for (int i = 1; i <= samples; ++i) {
    const double x = spec.x0 * i / samples;
    const double y = spec(x);
    if (!(y > 0.0 && y < x)) {
      throw Error(ErrorKind::BasinViolation, "f(x) not in (0, x) at x = " + std::to_string(x));
    }
  }
}

template <class Real>
struct Checkpoint {
  std::uint64_t n;
  Real x;
};

/// Orbit values stored at selected indices only.
template <class Real>
struct BasicTrace {
  RealMapSpec map;
  std::vector<Checkpoint<Real>> points;  // strictly increasing n

  bool contains(std::uint64_t n) const {
    return std::binary_search(points.begin(), points.end(), Checkpoint<Real>{n, Real(0)},
                              [](const auto& a, const auto& b) { return a.n < b.n; });
  }

  Real at(std::uint64_t n) const {
    auto it = std::lower_bound(points.begin(), points.end(), n, [](const auto& a, std::uint64_t v) { return a.n < v; });
    if (it == points.end() || it->n != n) {
      throw Error(ErrorKind::MissingCheckpoint, "no checkpoint at n = " + std::to_string(n));
    }
    return it->x;
  }
};

using Trace = BasicTrace<double>;

/// Default schedule: 0, powers of two, multiples of 100 up to 1000, n_max.
inline std::vector<std::uint64_t> checkpoint_schedule(std::uint64_t n_max, std::span<const std::uint64_t> extra) {
  std::vector<std::uint64_t> out{0, n_max};
  for (std::uint64_t p = 1; p <= n_max; p *= 2) {
    out.push_back(p);
    if (p > (std::numeric_limits<std::uint64_t>::max() >> 1U)) break;
  }
  for (std::uint64_t n = 100; n <= 1000 && n <= n_max; n += 100) out.push_back(n);
  for (auto n : extra) {
    if (n <= n_max) out.push_back(n);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// `count` roughly log-spaced integers in [lo, hi], endpoints included.
inline std::vector<std::uint64_t> log_spaced(std::uint64_t lo, std::uint64_t hi, int count) {
  std::vector<std::uint64_t> out;
  if (count < 2 || lo == 0 || hi <= lo) return {lo, hi};
  const double ratio = std::log(static_cast<double>(hi) / static_cast<double>(lo));
  for (int i = 0; i < count; ++i) {
    out.push_back(static_cast<std::uint64_t>(std::llround(static_cast<double>(lo) * std::exp(ratio * i / (count - 1)))));
  }
  out.front() = lo;
  out.back() = hi;
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Iterates the map n_max times in `Real` arithmetic, keeping the
/// checkpoint_schedule() points. Throws BasinViolation if an iterate fails
/// to lie in (0, previous iterate).
template <class Real = double>
BasicTrace<Real> iterate_map(const RealMapSpec& spec, std::uint64_t n_max, std::span<const std::uint64_t> extra = {}) {
  const auto schedule = checkpoint_schedule(n_max, extra);
  BasicTrace<Real> trace{spec, {}};
  trace.points.reserve(schedule.size());
  Real x = static_cast<Real>(spec.x0);
  if (!(x > 0)) throw Error(ErrorKind::BasinViolation, "x0 must be positive");
  auto next = schedule.begin();
  for (std::uint64_t n = 0;; ++n) {
    if (next != schedule.end() && *next == n) {
      trace.points.push_back({n, x});
      ++next;
    }
    if (n == n_max) break;
    const Real y = spec(x);
    if (!(y > 0 && y < x)) {
      throw Error(ErrorKind::BasinViolation, "iterate " + std::to_string(n + 1) + " left (0, x_n)");
    }
    x = y;
  }
  return trace;
}

/// -(1/m) log2 x_{2^m}.
inline double estimate_b(const Trace& trace, int m) {
  if (m < 1 || m > 62) throw Error(ErrorKind::OutOfRange, "m must be in [1, 62]");
  return -std::log2(trace.at(std::uint64_t{1} << static_cast<unsigned>(m))) / m;
}

/// n x_n^r, which tends to C^r.
inline double estimate_C(const Trace& trace, int r, std::uint64_t n) {
  return static_cast<double>(n) * std::pow(trace.at(n), r);
}

struct FitWindow {
  std::uint64_t lo;
  std::uint64_t hi;
};

struct FitResult {
  double b_hat;
  double C_hat;
  double gamma_hat;
  FitWindow window;  // first and last checkpoint used
  double residual_norm;
  std::size_t points;
};

/// Least-squares fit of y_n = x_n / (C n^{-b}) - 1 against log(n)/n and
/// the correction terms listed in the prediction (always 1/n, which
/// absorbs the x_0-dependent term). gamma_hat is the log(n)/n coefficient.
/// b_hat and C_hat come from an ordinary fit of log x_n against log n.
inline FitResult fit_gamma(const Trace& trace, const AsymptoticPrediction& prediction, FitWindow window) {
  std::vector<Checkpoint<double>> pts;
  for (const auto& c : trace.points) {
    if (c.n >= window.lo && c.n <= window.hi && c.n > 0) pts.push_back(c);
  }
  if (pts.size() < 20) {
    throw Error(ErrorKind::MissingCheckpoint,
                "fit window holds " + std::to_string(pts.size()) + " checkpoints; at least 20 are needed");
  }

  const double b = prediction.b.to_double();
  const double C = prediction.c_value;
  const double r = prediction.r;
  const auto rows = static_cast<Eigen::Index>(pts.size());
  const auto cols = static_cast<Eigen::Index>(1 + prediction.correction_orders.size() +
                                              (prediction.log_correction_order ? 1 : 0));
  Eigen::MatrixXd design(rows, cols);
  Eigen::VectorXd y(rows);
  Eigen::MatrixXd loglog(rows, 2);
  Eigen::VectorXd logx(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double n = static_cast<double>(pts[static_cast<std::size_t>(i)].n);
    const double x = pts[static_cast<std::size_t>(i)].x;
    const double ln = std::log(n);
    y(i) = x / (C * std::pow(n, -b)) - 1.0;
    Eigen::Index c = 0;
    design(i, c++) = ln / n;
    for (int j : prediction.correction_orders) design(i, c++) = std::pow(n, -j / r);
    if (prediction.log_correction_order) design(i, c++) = ln * std::pow(n, -*prediction.log_correction_order / r);
    loglog(i, 0) = 1.0;
    loglog(i, 1) = ln;
    logx(i) = std::log(x);
  }

  // Condition number of the column-scaled design decides separability.
  const Eigen::VectorXd scale = design.colwise().norm().transpose();
  const Eigen::MatrixXd scaled = design * scale.cwiseInverse().asDiagonal();
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(scaled, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double cond = sv(0) / sv(sv.size() - 1);
  if (!std::isfinite(cond) || cond > 1e9) {
    throw Error(ErrorKind::IllConditioned,
                "window [" + std::to_string(window.lo) + ", " + std::to_string(window.hi) +
                    "] cannot separate the predictors (condition " + std::to_string(cond) + ")");
  }
  const Eigen::VectorXd coef = svd.solve(y).cwiseQuotient(scale);
  const Eigen::VectorXd line = loglog.colPivHouseholderQr().solve(logx);

  FitResult out;
  out.gamma_hat = coef(0);
  out.b_hat = -line(1);
  out.C_hat = std::exp(line(0));
  out.window = {pts.front().n, pts.back().n};
  out.residual_norm = (design * coef - y).norm();
  out.points = pts.size();
  return out;
}

/// a(u) = (1/u)(1 + lambda u^{-delta}).
struct PowerDelta {
  double lambda;
  double delta;
};

/// a(u) = (1/u)(1 + beta log(u) / u).
struct LogTerm {
  double beta;
};

/// The map g with g(a(u)) = a(u + 1) for a strictly decreasing a on
/// [u_min, inf). Lambda = 0 gives g(x) = x / (1 + x).
class Comparator {
 public:
  using Family = std::variant<PowerDelta, LogTerm>;

  Comparator(Family family, double u_min) : family_(family), u_min_(u_min) {
    if (!(u_min > 0)) throw Error(ErrorKind::OutOfRange, "u_min must be positive");
    if (const auto* pd = std::get_if<PowerDelta>(&family_)) {
      if (!(pd->lambda >= -1 && pd->lambda <= 1 && pd->delta > 0 && pd->delta < 1)) {
        throw Error(ErrorKind::OutOfRange, "need lambda in [-1, 1] and delta in (0, 1)");
      }
    }
    // Sample the closed-form derivative over [u_min, 1e15].
    for (int i = 0; i <= 400; ++i) {
      const double u = u_min_ * std::pow(1e15 / u_min_, i / 400.0);
      if (!(derivative(u) < 0)) {
        throw Error(ErrorKind::OutOfRange, "a(u) is not decreasing at u = " + std::to_string(u));
      }
    }
  }

  /// u_min chosen so that a'(u) < 0 with margin.
  static Comparator power_delta(double lambda, double delta) {
    const double u_min = std::max(1.0, std::pow(2.0 * std::abs(lambda) * (1.0 + delta), 1.0 / delta));
    return Comparator(PowerDelta{lambda, delta}, u_min);
  }

  static Comparator log_term(double beta) {
    double u = 5.0;
    while (std::abs(beta) * (2.0 * std::log(u) - 1.0) / u > 0.5) u *= 2.0;
    return Comparator(LogTerm{beta}, u);
  }

  double a(double u) const {
    if (const auto* pd = std::get_if<PowerDelta>(&family_)) {
      return (1.0 + pd->lambda * std::pow(u, -pd->delta)) / u;
    }
    const double beta = std::get<LogTerm>(family_).beta;
    return (1.0 + beta * std::log(u) / u) / u;
  }

  double derivative(double u) const {
    if (const auto* pd = std::get_if<PowerDelta>(&family_)) {
      return -(1.0 + pd->lambda * (1.0 + pd->delta) * std::pow(u, -pd->delta)) / (u * u);
    }
    const double beta = std::get<LogTerm>(family_).beta;
    return -(1.0 + beta * (2.0 * std::log(u) - 1.0) / u) / (u * u);
  }

  double u_min() const noexcept { return u_min_; }
  /// Inputs must be below this value.
  double domain_limit() const { return a(u_min_); }

  /// u with a(u) = x: bracketing bisection, then Newton to relative 1e-14.
  double solve(double x) const {
    if (!(x > 0 && x < domain_limit())) {
      throw Error(ErrorKind::OutOfRange, "x = " + std::to_string(x) + " outside (0, a(u_min))");
    }
    double lo = u_min_, hi = std::max(u_min_ * 2.0, 1.0 / x);
    while (a(hi) > x) {
      lo = hi;
      hi *= 2.0;
    }
    while (hi - lo > 1e-6 * lo) {
      const double mid = 0.5 * (lo + hi);
      (a(mid) > x ? lo : hi) = mid;
    }
    double u = 0.5 * (lo + hi);
    for (int it = 0; it < 50; ++it) {
      const double step = (a(u) - x) / derivative(u);
      double next = u - step;
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      (a(next) > x ? lo : hi) = next;
      const bool done = std::abs(next - u) <= 1e-14 * u;
      u = next;
      if (done) break;
    }
    return u;
  }

  /// g(x) = a(solve(x) + 1).
  double next(double x) const { return a(solve(x) + 1.0); }

 private:
  Family family_;
  double u_min_;
};

inline double comparator_next(const Comparator& comparator, double x) { return comparator.next(x); }

/// True when two orbits of the same map started at x0 <= y0 stay ordered
/// for n_max steps.
template <class Map>
bool orbits_stay_ordered(const Map& map, double x0, double y0, std::uint64_t n_max) {
  double x = x0, y = y0;
  for (std::uint64_t n = 0; n <= n_max; ++n) {
    if (x > y) return false;
    x = map(x);
    y = map(y);
  }
  return true;
}

/// Change of variable z = r alpha x^r, which turns x - alpha x^{r+1} + ...
/// into z - z^2 + ...
struct PowerTransport {
  int r;
  double alpha;

  double forward(double x) const { return r * alpha * std::pow(x, r); }
  double backward(double z) const { return std::pow(z / (r * alpha), 1.0 / r); }
};

/// (z' - (z - z^2)) / z^2 for z = T(x), z' = T(f(x)); tends to 0 as x -> 0.
inline double transport_defect(const RealMapSpec& spec, const PowerTransport& t, double x) {
  const double z = t.forward(x);
  const double z1 = t.forward(spec(x));
  return (z1 - (z - z * z)) / (z * z);
}

struct SandwichReport {
  double delta = 0;
  std::size_t grid_points = 0;
  /// Grid points z with g_{-1}(z) > F(z) or F(z) > g_{1}(z).
  std::vector<double> lower_violations;
  std::vector<double> upper_violations;
  /// Smallest k >= 0 with 1/(n+k)(1-(n+k)^-delta) <= z_n <= 1/(n-k)(1+(n-k)^-delta)
  /// on every trace checkpoint n > k; absent if none up to the search limit.
  std::optional<std::uint64_t> shift_k;
  std::size_t trace_points = 0;

  bool pointwise_ok() const { return lower_violations.empty() && upper_violations.empty(); }
  bool ok() const { return pointwise_ok() && shift_k.has_value(); }
};

/// Pointwise comparison g_{-1} <= F <= g_{1} on `grid`, where F is the map
/// transported to the form z - z^2 + O(z^3), followed by the two-sided bound
/// on an actual transported orbit of n_max steps.
inline SandwichReport sandwich_check(const RealMapSpec& spec, const PowerTransport& transport, double delta,
                                     std::span<const double> grid, std::uint64_t n_max,
                                     std::uint64_t k_limit = 1'000'000) {
  const auto lower = Comparator::power_delta(-1.0, delta);
  const auto upper = Comparator::power_delta(1.0, delta);
  SandwichReport report;
  report.delta = delta;
  report.grid_points = grid.size();
  for (double z : grid) {
    const double fz = transport.forward(spec(transport.backward(z)));
    if (lower.next(z) > fz) report.lower_violations.push_back(z);
    if (fz > upper.next(z)) report.upper_violations.push_back(z);
  }

  const auto extra = log_spaced(1, std::max<std::uint64_t>(n_max, 2), 400);
  const auto trace = iterate_map(spec, n_max, extra);
  report.trace_points = trace.points.size();
  const auto holds = [&](std::uint64_t k) {
    for (const auto& c : trace.points) {
      if (c.n <= k) continue;
      const double z = transport.forward(c.x);
      const double plus = static_cast<double>(c.n + k);
      const double minus = static_cast<double>(c.n - k);
      if (z < (1.0 - std::pow(plus, -delta)) / plus) return false;
      if (z > (1.0 + std::pow(minus, -delta)) / minus) return false;
    }
    return true;
  };
  for (std::uint64_t k = 0; k <= k_limit; ++k) {
    if (holds(k)) {
      report.shift_k = k;
      break;
    }
  }
  return report;
}

}  // namespace germ

#endif  // GERM_DYNAMICS_HPP
