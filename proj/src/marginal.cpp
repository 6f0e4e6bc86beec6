#include "fpp/marginal.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "fpp/errors.hpp"
#include "fpp/numerics.hpp"

namespace fpp {

namespace detail {

struct MarginalImpl {
  explicit MarginalImpl(MarginalFn::Kind k) : kind(k) {}
  virtual ~MarginalImpl() = default;
  virtual double eval(double y) const = 0;
  MarginalFn::Kind kind;
  // Set when the function is exactly pv_scale * y^-pv_theta. True for the
  // power kinds and for series over a power base, which sum to a single
  // power in closed form.
  bool power_view = false;
  double pv_theta = 0.0;
  double pv_scale = 0.0;
};

namespace {

struct PowerImpl final : MarginalImpl {
  PowerImpl(MarginalFn::Kind k, double theta_, double scale_)
      : MarginalImpl(k) {
    power_view = true;
    pv_theta = theta_;
    pv_scale = scale_;
  }
  double eval(double y) const override {
    return pv_scale * std::pow(y, -pv_theta);
  }
};

// Least-squares slope of (x, y) over index range [i0, i1].
double fit_slope(const std::vector<double>& x, const std::vector<double>& y,
                 size_t i0, size_t i1) {
  assert(i1 > i0 + 1);
  double n = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (size_t i = i0; i < i1; ++i) {
    n += 1.0;
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

struct TabulatedImpl final : MarginalImpl {
  TabulatedImpl(std::vector<double> ys_, const std::vector<double>& vals)
      : MarginalImpl(MarginalFn::Kind::Tabulated), ys(std::move(ys_)) {
    const size_t n = ys.size();
    ly.resize(n);
    lv.resize(n);
    for (size_t i = 0; i < n; ++i) {
      ly[i] = std::log(ys[i]);
      lv[i] = std::log(vals[i]);
    }

    // Fritsch-Carlson slopes: secant averages clamped so the interpolant
    // never overshoots the data's local monotonicity.
    std::vector<double> del(n - 1);
    for (size_t i = 0; i + 1 < n; ++i) del[i] = (lv[i + 1] - lv[i]) / (ly[i + 1] - ly[i]);
    slope.assign(n, 0.0);
    slope[0] = del[0];
    slope[n - 1] = del[n - 2];
    for (size_t i = 1; i + 1 < n; ++i)
      slope[i] = (del[i - 1] * del[i] > 0.0) ? 0.5 * (del[i - 1] + del[i]) : 0.0;
    for (size_t i = 0; i + 1 < n; ++i) {
      if (del[i] == 0.0) {
        slope[i] = slope[i + 1] = 0.0;
        continue;
      }
      const double alpha = slope[i] / del[i];
      const double beta = slope[i + 1] / del[i];
      if (alpha < 0.0) slope[i] = 0.0;
      if (beta < 0.0) slope[i + 1] = 0.0;
      const double s2 = alpha * alpha + beta * beta;
      if (s2 > 9.0) {
        const double tau = 3.0 / std::sqrt(s2);
        slope[i] = tau * alpha * del[i];
        slope[i + 1] = tau * beta * del[i];
      }
    }

    // Power-law tails fitted to the outermost decade (at least 3 knots).
    const double dec = std::log(10.0);
    size_t nl = 3;
    while (nl < n && ly[nl - 1] - ly[0] < dec) ++nl;
    size_t nr = 3;
    while (nr < n && ly[n - 1] - ly[n - nr] < dec) ++nr;
    left_slope = fit_slope(ly, lv, 0, nl);
    right_slope = fit_slope(ly, lv, n - nr, n);
  }

  double eval(double y) const override {
    const double t = std::log(y);
    if (t <= ly.front())
      return std::exp(lv.front() + left_slope * (t - ly.front()));
    if (t >= ly.back())
      return std::exp(lv.back() + right_slope * (t - ly.back()));
    size_t i = std::upper_bound(ly.begin(), ly.end(), t) - ly.begin() - 1;
    i = std::min(i, ly.size() - 2);
    const double h = ly[i + 1] - ly[i];
    const double s = (t - ly[i]) / h;
    const double s2 = s * s, s3 = s2 * s;
    const double v = (2.0 * s3 - 3.0 * s2 + 1.0) * lv[i] +
                     (s3 - 2.0 * s2 + s) * h * slope[i] +
                     (-2.0 * s3 + 3.0 * s2) * lv[i + 1] +
                     (s3 - s2) * h * slope[i + 1];
    return std::exp(v);
  }

  std::vector<double> ys, ly, lv, slope;
  double left_slope = 0.0, right_slope = 0.0;
};

struct SeriesImpl final : MarginalImpl {
  SeriesImpl(MarginalFn base_, double pref, double wr, double ar, double as,
             double tol_, int cap_)
      : MarginalImpl(MarginalFn::Kind::SeriesBacked),
        base(std::move(base_)),
        prefactor(pref),
        weight_ratio(wr),
        arg_ratio(ar),
        arg_scale(as),
        tol(tol_),
        cap(cap_) {
    // Over a power base the terms form a geometric sequence; the sum is a
    // single power law. Exposing that closed form lets the solver treat
    // chained series exactly.
    if (base.is_power_form()) {
      const double th = base.power_theta();
      const double r = weight_ratio * std::pow(arg_ratio, -th);
      if (r < 1.0) {
        power_view = true;
        pv_theta = th;
        pv_scale = prefactor * base.power_scale() *
                   std::pow(arg_scale, -th) / (1.0 + r);
      }
    }
  }

  double eval(double y) const override {
    double arg = arg_scale * y;
    double wpow = prefactor;
    double sum = 0.0;
    double prev_mag = std::numeric_limits<double>::infinity();
    for (int m = 0; m < cap; ++m) {
      if (!(arg > 0.0) || !std::isfinite(arg))
        throw DivergenceDetected(
            "alternating_series: argument left the representable range "
            "before convergence");
      const double mag = wpow * base(arg);
      if (m > 0 && mag < tol * std::abs(sum)) return sum;
      if (mag >= prev_mag)
        throw DivergenceDetected(
            "alternating_series: term magnitudes stopped decreasing at m=" +
            std::to_string(m));
      sum += (m % 2 == 0) ? mag : -mag;
      prev_mag = mag;
      arg *= arg_ratio;
      wpow *= weight_ratio;
    }
    throw DivergenceDetected("alternating_series: no convergence within " +
                             std::to_string(cap) + " terms");
  }

  MarginalFn base;
  double prefactor, weight_ratio, arg_ratio, arg_scale, tol;
  int cap;
};

struct LogPeriodicImpl final : MarginalImpl {
  LogPeriodicImpl(double k, double lvl, double amp_, double period)
      : MarginalImpl(MarginalFn::Kind::LogPeriodic),
        exponent(k),
        level(lvl),
        amp(amp_),
        log_period(period) {}
  double eval(double y) const override {
    const double t = std::log(y);
    return std::pow(y, exponent) *
           (level + amp * std::sin(std::numbers::pi * t / log_period));
  }
  double exponent, level, amp, log_period;
};

}  // namespace
}  // namespace detail

MarginalFn::MarginalFn(std::shared_ptr<const detail::MarginalImpl> impl)
    : impl_(std::move(impl)) {}

MarginalFn MarginalFn::power(double theta) {
  if (!(theta > 0.0) || !std::isfinite(theta))
    throw DomainError("power: theta must be positive, got " +
                      std::to_string(theta));
  return MarginalFn(std::make_shared<detail::PowerImpl>(Kind::Power, theta, 1.0));
}

MarginalFn MarginalFn::scaled_power(double theta, double scale) {
  if (!(theta > 0.0) || !std::isfinite(theta))
    throw DomainError("scaled_power: theta must be positive, got " +
                      std::to_string(theta));
  if (!(scale > 0.0) || !std::isfinite(scale))
    throw DomainError("scaled_power: scale must be positive, got " +
                      std::to_string(scale));
  return MarginalFn(
      std::make_shared<detail::PowerImpl>(Kind::Scaled, theta, scale));
}

MarginalFn MarginalFn::tabulated(std::vector<double> ys,
                                 std::vector<double> values) {
  if (ys.size() != values.size())
    throw DomainError("tabulated: ys and values differ in length");
  if (ys.size() < 4)
    throw DomainError("tabulated: need at least 4 knots, got " +
                      std::to_string(ys.size()));
  for (size_t i = 0; i < ys.size(); ++i) {
    if (!std::isfinite(ys[i]) || !std::isfinite(values[i]) || ys[i] <= 0.0 ||
        values[i] <= 0.0)
      throw DomainError("tabulated: knots must be finite and positive (row " +
                        std::to_string(i) + ")");
    if (i > 0 && ys[i] <= ys[i - 1])
      throw DomainError("tabulated: ys must be strictly increasing (row " +
                        std::to_string(i) + ")");
  }
  return MarginalFn(
      std::make_shared<detail::TabulatedImpl>(std::move(ys), values));
}

MarginalFn MarginalFn::alternating_series(MarginalFn base, double prefactor,
                                          double weight_ratio,
                                          double arg_ratio, double arg_scale,
                                          double tol, int max_terms) {
  if (!base.impl_) throw DomainError("alternating_series: empty base");
  if (!(prefactor > 0.0) || !(weight_ratio > 0.0) || !(arg_ratio > 0.0) ||
      !(arg_scale > 0.0) || !(tol > 0.0) || max_terms < 2)
    throw DomainError("alternating_series: invalid coefficients");
  return MarginalFn(std::make_shared<detail::SeriesImpl>(
      std::move(base), prefactor, weight_ratio, arg_ratio, arg_scale, tol,
      max_terms));
}

MarginalFn MarginalFn::log_periodic(double exponent, double level,
                                    double amplitude, double log_period) {
  if (!(level > 0.0) || !(amplitude >= 0.0) || amplitude >= level)
    throw DomainError("log_periodic: need 0 <= amplitude < level");
  if (log_period == 0.0 || !std::isfinite(log_period))
    throw DomainError("log_periodic: log_period must be nonzero and finite");
  return MarginalFn(std::make_shared<detail::LogPeriodicImpl>(
      exponent, level, amplitude, log_period));
}

double MarginalFn::operator()(double y) const {
  if (!impl_) throw DomainError("MarginalFn: empty function");
  if (!(y > 0.0) || !std::isfinite(y))
    throw DomainError("MarginalFn: argument must be positive and finite, got " +
                      std::to_string(y));
  return impl_->eval(y);
}

double MarginalFn::invert(double z, double tol) const {
  if (!impl_) throw DomainError("invert: empty function");
  if (!(z > 0.0) || !std::isfinite(z))
    throw DomainError("invert: target must be positive and finite, got " +
                      std::to_string(z));
  if (is_power_form())
    return std::pow(power_scale() / z, 1.0 / power_theta());

  // Interior seed, then geometric expansion until I(lo) >= z >= I(hi).
  double seed = 1.0;
  if (impl_->kind == Kind::Tabulated) {
    const auto* tab = static_cast<const detail::TabulatedImpl*>(impl_.get());
    seed = std::exp(0.5 * (tab->ly.front() + tab->ly.back()));
  }
  const auto f = [&](double y) { return (*this)(y) - z; };
  double lo = seed, hi = seed;
  double flo = f(lo), fhi = flo;
  constexpr double kGrow = 8.0;
  constexpr int kMaxExpand = 300;
  int i = 0;
  for (; flo < 0.0 && i < kMaxExpand && lo > 1e-300; ++i) flo = f(lo /= kGrow);
  if (flo < 0.0)
    throw BracketFailure("invert: no lower bracket for z=" + std::to_string(z));
  for (i = 0; fhi > 0.0 && i < kMaxExpand && hi < 1e300; ++i) fhi = f(hi *= kGrow);
  if (fhi > 0.0)
    throw BracketFailure("invert: no upper bracket for z=" + std::to_string(z));

  const double t = num::brent_root(
      [&](double lt) { return (*this)(std::exp(lt)) - z; }, std::log(lo),
      std::log(hi), 1e-13);
  const double y = std::exp(t);
  if (std::abs((*this)(y) - z) > std::max(tol, 1e-9) * z)
    throw BracketFailure("invert: failed to meet tolerance at z=" +
                         std::to_string(z));
  return y;
}

MarginalFn::Kind MarginalFn::kind() const {
  if (!impl_) throw DomainError("kind: empty function");
  return impl_->kind;
}

bool MarginalFn::is_power_form() const {
  return impl_ && impl_->power_view;
}

double MarginalFn::power_theta() const {
  if (!is_power_form()) throw DomainError("power_theta: not a power form");
  return impl_->pv_theta;
}

double MarginalFn::power_scale() const {
  if (!is_power_form()) throw DomainError("power_scale: not a power form");
  return impl_->pv_scale;
}

std::vector<double> MarginalFn::knots() const {
  if (impl_ && impl_->kind == Kind::Tabulated)
    return static_cast<const detail::TabulatedImpl*>(impl_.get())->ys;
  return {};
}

MarginalFn MarginalFn::tabulate(int n, double y_min, double y_max) const {
  if (n < 4 || !(0.0 < y_min && y_min < y_max))
    throw DomainError("tabulate: invalid grid");
  auto ys = num::logspace(y_min, y_max, n);
  std::vector<double> vals(ys.size());
  for (size_t i = 0; i < ys.size(); ++i) vals[i] = (*this)(ys[i]);
  return tabulated(std::move(ys), std::move(vals));
}

InadaReport check_inada(const MarginalFn& fn, double y_min, double y_max,
                        int samples) {
  if (!(0.0 < y_min && y_min < y_max) || samples < 2)
    throw DomainError("check_inada: invalid grid");
  const auto ys = num::logspace(y_min, y_max, samples);
  InadaReport rep;
  rep.samples = samples;
  double prev = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double v = fn(ys[i]);
    if (i == 0) rep.value_at_min = v;
    if (i == samples - 1) rep.value_at_max = v;
    if (i > 0 && v >= prev) ++rep.monotonicity_violations;
    prev = v;
  }
  return rep;
}

namespace {
std::string fmt_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
}  // namespace

void save_marginal_csv(const MarginalFn& fn, const std::filesystem::path& path,
                       const std::vector<double>& grid) {
  std::ofstream out(path);
  if (!out) throw ParseError("save_marginal_csv: cannot open " + path.string());
  out << "y,I\n";
  for (double y : grid) out << fmt_full(y) << ',' << fmt_full(fn(y)) << '\n';
  if (!out) throw ParseError("save_marginal_csv: write failed on " + path.string());
}

MarginalFn load_marginal_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("load_marginal_csv: cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line))
    throw ParseError("load_marginal_csv: empty file " + path.string());
  {
    std::istringstream probe(line);
    double y, v;
    char comma;
    if (probe >> y >> comma >> v)
      throw ParseError("load_marginal_csv: missing header row in " +
                       path.string());
  }
  std::vector<double> ys, vals;
  size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream row(line);
    double y, v;
    char comma;
    if (!(row >> y >> comma >> v) || comma != ',')
      throw ParseError("load_marginal_csv: bad row at line " +
                       std::to_string(lineno) + " of " + path.string());
    ys.push_back(y);
    vals.push_back(v);
  }
  return MarginalFn::tabulated(std::move(ys), std::move(vals));
}

}  // namespace fpp
