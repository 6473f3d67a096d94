#include "halfhilbert/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <limits>
#include <queue>

#include "halfhilbert/errors.hpp"

namespace halfhilbert::quad {

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 15>;

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment rule(const RealFn& f, double a, double b) {
  double err = 0.0;
  const double v = GK::integrate(f, a, b, 0, 0.0, &err);
  return {a, b, v, err};
}

// Refines the worst segment until the summed error meets the target given by
// max(abs_floor, rel_tol * |value|, extra_scale * rel_tol).
Estimate adapt(const RealFn& f, double a, double b, const Options& opt, double extra_scale) {
  std::priority_queue<Segment> heap;
  Segment s0 = rule(f, a, b);
  double value = s0.value, error = s0.error;
  heap.push(s0);
  int count = 1;
  auto target = [&] {
    return std::max({opt.abs_tol, opt.rel_tol * std::fabs(value), opt.rel_tol * extra_scale});
  };
  while (error > target() && count < opt.max_segments) {
    Segment w = heap.top();
    heap.pop();
    const double m = 0.5 * (w.a + w.b);
    if (!(m > w.a && m < w.b)) {
      heap.push(w);
      break;
    }
    Segment l = rule(f, w.a, m), r = rule(f, m, w.b);
    value += l.value + r.value - w.value;
    error += l.error + r.error - w.error;
    heap.push(l);
    heap.push(r);
    ++count;
  }
  // Recompute from the leaves to shed accumulated rounding in the running totals.
  CompensatedSum v, e;
  while (!heap.empty()) {
    v += heap.top().value;
    e += heap.top().error;
    heap.pop();
  }
  const double val = v.value();
  if (!std::isfinite(val)) throw DivergenceError("quadrature produced a non-finite value");
  return {val, e.value()};
}

// Sweeps y from 0 outward for G(y), where x = anchor * exp(dir * y).
Estimate sweep(const RealFn& f, double anchor, int dir, const Options& opt) {
  const double x_edge = dir > 0 ? opt.x_max : opt.x_min;
  const double y_limit = std::max(0.0, std::log(x_edge / anchor) * dir);
  auto g = [&](double y) {
    const double x = anchor * std::exp(dir * y);
    if (!(x > 0.0) || !std::isfinite(x)) return 0.0;
    return f(x) * x;
  };
  const RealFn gfn = g;
  CompensatedSum acc;
  double err = 0.0;
  double y = 0.0, w = 0.5;
  while (true) {
    const double y1 = std::min(y + w, y_limit);
    const Estimate p = adapt(gfn, y, y1, opt, std::fabs(acc.value()));
    acc += p.value;
    err += p.error;
    y = y1;
    const double total = std::fabs(acc.value());
    const double d = std::min(0.5, 0.5 * w);
    const double g0 = std::fabs(g(y)), g1 = std::fabs(g(y - d)), g2 = std::fabs(g(y - 2 * d));
    if (g0 == 0.0) {
      if (total > 0.0 && std::fabs(p.value) <= opt.rel_tol * total) break;
      if (total == 0.0 && y > 80.0) break;
    } else if (g1 > 0.0 && g2 > 0.0) {
      const double lam1 = std::log(g1 / g0) / d, lam2 = std::log(g2 / g1) / d;
      if (lam1 > 0.0) {
        const double closure = g0 / lam1;
        const double closure_err = closure * std::fabs(lam1 - lam2) / lam1 + 1e-3 * closure;
        if (closure <= 0.1 * opt.rel_tol * total || y >= y_limit) {
          acc += closure;
          err += closure_err;
          break;
        }
      } else if (y >= y_limit) {
        throw DivergenceError("integrand does not decay at the edge of the representable range");
      }
    }
    if (y >= y_limit) {
      if (g0 != 0.0) throw DivergenceError("integrand does not decay at the edge of the representable range");
      break;
    }
    w = std::min(1.5 * w, opt.max_panel);
  }
  return {acc.value(), err};
}

}  // namespace

Estimate gauss_kronrod(const RealFn& f, double a, double b, const Options& opt) {
  if (!(a < b)) return {0.0, 0.0};
  return adapt(f, a, b, opt, 0.0);
}

Estimate log_interval(const RealFn& f, double a, double b, const Options& opt) {
  if (!(a > 0.0)) throw DomainError("log_interval requires a positive lower limit");
  if (!(a < b)) return {0.0, 0.0};
  const RealFn g = [&](double y) {
    const double x = std::exp(y);
    return f(x) * x;
  };
  const double ya = std::log(a), yb = std::log(b);
  const int panels = std::max(1, static_cast<int>(std::ceil(yb - ya)));
  CompensatedSum v;
  double e = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double lo = ya + (yb - ya) * i / panels;
    const double hi = i + 1 == panels ? yb : ya + (yb - ya) * (i + 1) / panels;
    const Estimate p = adapt(g, lo, hi, opt, std::fabs(v.value()));
    v += p.value;
    e += p.error;
  }
  return {v.value(), e};
}

Estimate log_upper(const RealFn& f, double a, const Options& opt) {
  if (!(a > 0.0)) throw DomainError("log_upper requires a positive anchor");
  return sweep(f, a, +1, opt);
}

Estimate log_lower(const RealFn& f, double b, const Options& opt) {
  if (!(b > 0.0)) throw DomainError("log_lower requires a positive anchor");
  return sweep(f, b, -1, opt);
}

Estimate half_line(const RealFn& f, std::vector<double> bp, const Options& opt) {
  bp.erase(std::remove_if(bp.begin(), bp.end(), [](double v) { return !(v > 0.0) || !std::isfinite(v); }),
           bp.end());
  if (bp.empty()) bp.push_back(1.0);
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
  Estimate lo = log_lower(f, bp.front(), opt);
  Estimate hi = log_upper(f, bp.back(), opt);
  CompensatedSum v;
  v += lo.value;
  v += hi.value;
  double e = lo.error + hi.error;
  for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
    const Estimate m = log_interval(f, bp[i], bp[i + 1], opt);
    v += m.value;
    e += m.error;
  }
  return {v.value(), e};
}

Estimate tanh_sinh(const RealFn& f, double a, double b, double rel_tol) {
  thread_local boost::math::quadrature::tanh_sinh<double> integrator;
  double err = 0.0, l1 = 0.0;
  const double v = integrator.integrate(f, a, b, rel_tol, &err, &l1);
  return {v, err};
}

Estimate exp_sinh(const RealFn& f, double a, double rel_tol) {
  thread_local boost::math::quadrature::exp_sinh<double> integrator;
  double err = 0.0, l1 = 0.0;
  auto shifted = [&](double t) { return f(a + t); };
  const double v = integrator.integrate(shifted, 0.0, std::numeric_limits<double>::infinity(), rel_tol, &err, &l1);
  return {v, err};
}

}  // namespace halfhilbert::quad
