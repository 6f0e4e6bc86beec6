#include "fpp/numerics.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <string>

#include "fpp/errors.hpp"

namespace fpp::num {

namespace {

// Kronrod 15-point nodes on [-1, 1] (positive half) with the embedded
// 7-point Gauss rule on the odd-indexed nodes.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526, 0.949107912342758524526189684048,
    0.864864423359769072789712788641, 0.741531185599394439863864773281,
    0.586087235467691130294144838259, 0.405845151377397166906606412077,
    0.207784955007898467600689403773, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529224963732008059, 0.063092092629978553290700663189,
    0.104790010322250183839876322541, 0.140653259715525918745189590510,
    0.169004726639267902826583426599, 0.190350578064785409913256402421,
    0.204432940075298892414161999234, 0.209482141084727828012999174892};
constexpr double kWg[4] = {
    0.129484966168869693270611432679, 0.279705391489276667901467771424,
    0.381830050505118944950369775489, 0.417959183673469387755102040816};

struct Panel {
  double a, b;
  double value, err;
};

// One K15 evaluation over [a, b]; err is |K15 - G7| rescaled per QUADPACK.
Panel eval_panel(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double k15 = kWgk[7] * fc;
  double g7 = kWg[3] * fc;
  double resabs = std::abs(k15);
  for (int j = 0; j < 7; ++j) {
    const double x = h * kXgk[j];
    const double f1 = f(c - x);
    const double f2 = f(c + x);
    k15 += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) g7 += kWg[j / 2] * (f1 + f2);
    resabs += kWgk[j] * (std::abs(f1) + std::abs(f2));
  }
  k15 *= h;
  g7 *= h;
  resabs *= std::abs(h);
  double err = std::abs(k15 - g7);
  if (!std::isfinite(k15) || !std::isfinite(err)) {
    err = std::numeric_limits<double>::infinity();
  } else if (resabs > 0.0 && err > 0.0) {
    const double scale = std::pow(200.0 * err / resabs, 1.5);
    if (scale < 1.0) err = resabs * scale;
  }
  return {a, b, k15, err};
}

bool at_width_floor(const Panel& p) {
  const double w = p.b - p.a;
  return w <= 8.0 * std::numeric_limits<double>::epsilon() *
                  (std::abs(p.a) + std::abs(p.b)) ||
         w <= 1e-290;
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol, double abs_tol, long max_evals) {
  if (a == b) return 0.0;
  if (a > b) return -integrate(f, b, a, rel_tol, abs_tol, max_evals);

  // Refine the worst panel until the summed error estimate meets tolerance.
  // Purely local acceptance never terminates on integrable endpoint
  // singularities, whose error-to-value ratio is scale invariant.
  const auto worse = [](const Panel& x, const Panel& y) { return x.err < y.err; };
  std::vector<Panel> heap;
  std::vector<Panel> frozen;  // at the width floor, kept but never split
  heap.push_back(eval_panel(f, a, b));
  long evals = 15;
  double heap_err = heap[0].err;
  double frozen_err = 0.0;
  double value = heap[0].value;

  while (true) {
    if (std::isfinite(value) &&
        heap_err + frozen_err <= std::max(abs_tol, rel_tol * std::abs(value)))
      break;
    if (heap.empty())
      throw QuadratureFailure(
          "integrate: tolerance unreachable, interval subdivided to roundoff");
    std::pop_heap(heap.begin(), heap.end(), worse);
    const Panel p = heap.back();
    heap.pop_back();
    heap_err -= p.err;
    if (at_width_floor(p)) {
      if (!std::isfinite(p.value))
        throw QuadratureFailure(
            "integrate: integrand not finite near x=" + std::to_string(p.a));
      frozen.push_back(p);
      frozen_err += p.err;
      continue;
    }
    if (evals + 30 > max_evals)
      throw QuadratureFailure(
          "integrate: evaluation budget " + std::to_string(max_evals) +
          " exhausted on [" + std::to_string(p.a) + ", " +
          std::to_string(p.b) + "]");
    const double m = 0.5 * (p.a + p.b);
    const Panel left = eval_panel(f, p.a, m);
    const Panel right = eval_panel(f, m, p.b);
    evals += 30;
    for (const Panel& child : {left, right}) {
      heap.push_back(child);
      std::push_heap(heap.begin(), heap.end(), worse);
      heap_err += child.err;
    }
    if (std::isfinite(p.value) && std::isfinite(left.value) &&
        std::isfinite(right.value)) {
      value += left.value + right.value - p.value;
    } else {  // re-sum to purge inf/NaN once the offending panel is replaced
      value = 0.0;
      for (const Panel& q : heap) value += q.value;
      for (const Panel& q : frozen) value += q.value;
    }
  }

  double sum = 0.0;
  for (const Panel& p : heap) sum += p.value;
  for (const Panel& p : frozen) sum += p.value;
  return sum;
}

double brent_root(const std::function<double(double)>& f, double lo, double hi,
                  double x_tol, int max_iter) {
  double a = lo, b = hi;
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0))
    throw BracketFailure("brent_root: no sign change on [" +
                         std::to_string(lo) + ", " + std::to_string(hi) + "]");
  double c = a, fc = fa;
  double e = b - a, d = e;
  for (int it = 0; it < max_iter; ++it) {
    if (std::abs(fc) < std::abs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    const double tol_act =
        2.0 * std::numeric_limits<double>::epsilon() * std::abs(b) +
        0.5 * x_tol;
    const double m = 0.5 * (c - b);
    if (std::abs(m) <= tol_act || fb == 0.0) return b;
    if (std::abs(e) < tol_act || std::abs(fa) <= std::abs(fb)) {
      e = d = m;  // bisection
    } else {
      double pp, qq;
      const double s = fb / fa;
      if (a == c) {  // secant
        pp = 2.0 * m * s;
        qq = 1.0 - s;
      } else {  // inverse quadratic
        const double q0 = fa / fc, r = fb / fc;
        pp = s * (2.0 * m * q0 * (q0 - r) - (b - a) * (r - 1.0));
        qq = (q0 - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (pp > 0.0) qq = -qq; else pp = -pp;
      if (2.0 * pp < std::min(3.0 * m * qq - std::abs(tol_act * qq),
                              std::abs(e * qq))) {
        e = d;
        d = pp / qq;
      } else {
        e = d = m;
      }
    }
    a = b; fa = fb;
    b += (std::abs(d) > tol_act) ? d : (m > 0.0 ? tol_act : -tol_act);
    fb = f(b);
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a; fc = fa;
      e = d = b - a;
    }
  }
  return b;
}

GoldenResult golden_max(const std::function<double(double)>& f, double lo,
                        double hi, int n_scan, double window_tol) {
  assert(n_scan >= 3 && hi > lo);
  std::vector<double> xs(n_scan), vs(n_scan);
  for (int i = 0; i < n_scan; ++i) {
    xs[i] = lo + (hi - lo) * double(i) / double(n_scan - 1);
    vs[i] = f(xs[i]);
  }
  int k = int(std::max_element(vs.begin(), vs.end()) - vs.begin());

  // Reject scans that rise again after the peak (or dip before it) beyond
  // noise: the objective is supposed to be concave in the allocation.
  const double vmax = vs[k];
  const double vmin = *std::min_element(vs.begin(), vs.end());
  const double noise = 1e-9 * (std::abs(vmax) + std::abs(vmin)) + 1e-15;
  for (int i = 0; i + 1 < n_scan; ++i) {
    const bool rising = vs[i + 1] >= vs[i] - noise;
    const bool falling = vs[i + 1] <= vs[i] + noise;
    if ((i + 1 <= k && !rising) || (i >= k && !falling))
      throw NonConcaveDetected(
          "golden_max: scan not unimodal near x=" + std::to_string(xs[i]));
  }

  double a = xs[std::max(k - 1, 0)];
  double b = xs[std::min(k + 1, n_scan - 1)];
  constexpr double r = 0.6180339887498948482;
  double x1 = b - r * (b - a), x2 = a + r * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > window_tol) {
    if (f1 >= f2) {
      b = x2; x2 = x1; f2 = f1;
      x1 = b - r * (b - a);
      f1 = f(x1);
    } else {
      a = x1; x1 = x2; f1 = f2;
      x2 = a + r * (b - a);
      f2 = f(x2);
    }
  }
  const double xm = 0.5 * (a + b);
  return {xm, f(xm)};
}

std::vector<double> logspace(double y0, double y1, int n) {
  assert(y0 > 0.0 && y1 > 0.0 && n >= 2);
  std::vector<double> out(n);
  const double l0 = std::log(y0), l1 = std::log(y1);
  for (int i = 0; i < n; ++i)
    out[i] = std::exp(l0 + (l1 - l0) * double(i) / double(n - 1));
  out.front() = y0;
  out.back() = y1;
  return out;
}

}  // namespace fpp::num
