#include "fpp/utility.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <string>
#include <unordered_map>

#include "fpp/errors.hpp"
#include "fpp/numerics.hpp"

namespace fpp {

struct UtilityFn::Impl {
  MarginalFn inv;
  double ax = 1.0;
  double av = 0.0;
  QuadratureConfig quad;
  mutable std::mutex mu;
  mutable std::unordered_map<std::uint64_t, double> memo;
};

UtilityFn::UtilityFn(MarginalFn inv_marginal, double anchor_x, double anchor_v,
                     QuadratureConfig cfg) {
  if (!(anchor_x > 0.0) || !std::isfinite(anchor_x) || !std::isfinite(anchor_v))
    throw DomainError("UtilityFn: anchor must be finite with positive wealth");
  auto impl = std::make_shared<Impl>();
  impl->inv = std::move(inv_marginal);
  impl->inv(1.0);  // reject empty functions eagerly
  impl->ax = anchor_x;
  impl->av = anchor_v;
  impl->quad = cfg;
  impl_ = std::move(impl);
}

double UtilityFn::value(double x) const {
  if (!impl_) throw DomainError("UtilityFn: empty function");
  if (!(x > 0.0) || !std::isfinite(x))
    throw DomainError("UtilityFn: wealth must be positive and finite, got " +
                      std::to_string(x));
  const auto key = std::bit_cast<std::uint64_t>(x);
  {
    std::lock_guard lock(impl_->mu);
    if (auto it = impl_->memo.find(key); it != impl_->memo.end())
      return it->second;
  }
  const auto& q = impl_->quad;
  const double v =
      impl_->av + num::integrate([this](double xi) { return marginal(xi); },
                                 impl_->ax, x, q.rel_tol, 0.0, q.max_evals);
  std::lock_guard lock(impl_->mu);
  impl_->memo.emplace(key, v);
  return v;
}

double UtilityFn::marginal(double x) const {
  if (!impl_) throw DomainError("UtilityFn: empty function");
  if (!(x > 0.0) || !std::isfinite(x))
    throw DomainError("UtilityFn: wealth must be positive and finite, got " +
                      std::to_string(x));
  return impl_->inv.invert(x, impl_->quad.invert_tol);
}

const MarginalFn& UtilityFn::inv_marginal() const {
  if (!impl_) throw DomainError("UtilityFn: empty function");
  return impl_->inv;
}

double UtilityFn::anchor_x() const {
  if (!impl_) throw DomainError("UtilityFn: empty function");
  return impl_->ax;
}

double UtilityFn::anchor_v() const {
  if (!impl_) throw DomainError("UtilityFn: empty function");
  return impl_->av;
}

UtilityFn power_utility(double theta) {
  if (!(theta > 0.0) || !std::isfinite(theta))
    throw DomainError("power_utility: theta must be positive, got " +
                      std::to_string(theta));
  if (theta == 1.0)
    throw ThetaOne("power_utility: normalization degenerates at theta = 1; "
                   "use log_utility");
  return UtilityFn(MarginalFn::power(theta), 1.0, theta / (theta - 1.0));
}

UtilityFn log_utility() { return UtilityFn(MarginalFn::power(1.0), 1.0, 0.0); }

UtilityFn reconstruct(const MarginalFn& I1, const UtilityFn& U0,
                      const PeriodParams& params, double anchor_wealth,
                      QuadratureConfig cfg) {
  if (!(anchor_wealth > 0.0) || !std::isfinite(anchor_wealth))
    throw DomainError("reconstruct: anchor wealth must be positive");
  const double m0 = U0.marginal(anchor_wealth);
  const double v0 = U0.value(anchor_wealth);
  const double xu = I1(params.rho_u * m0);
  const double xd = I1(params.rho_d * m0);
  const auto dU1 = [&](double xi) { return I1.invert(xi, cfg.invert_tol); };
  const double av =
      v0 +
      params.p * num::integrate(dU1, xu, anchor_wealth, cfg.rel_tol, 0.0,
                                cfg.max_evals) +
      (1.0 - params.p) * num::integrate(dU1, xd, anchor_wealth, cfg.rel_tol,
                                        0.0, cfg.max_evals);
  return UtilityFn(I1, anchor_wealth, av, cfg);
}

namespace {
std::string fmt_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
}  // namespace

void save_utility_csv(const UtilityFn& fn, const std::filesystem::path& path,
                      const std::vector<double>& grid) {
  std::ofstream out(path);
  if (!out) throw ParseError("save_utility_csv: cannot open " + path.string());
  out << "x,U,dU\n";
  for (double x : grid)
    out << fmt_full(x) << ',' << fmt_full(fn.value(x)) << ','
        << fmt_full(fn.marginal(x)) << '\n';
  if (!out) throw ParseError("save_utility_csv: write failed on " + path.string());
}

}  // namespace fpp
