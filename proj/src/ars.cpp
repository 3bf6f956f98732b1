#include "glmm/ars.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "glmm/errors.hpp"

namespace glmm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxHullPoints = 64;
constexpr int kMaxRejections = 10000;

struct HullPoint {
  double x;
  double logf;
  double slope;
};

class AdaptiveHull {
 public:
  AdaptiveHull(const LogConcaveDensity& f) : f_(f) {
    initialize();
  }

  double draw(RngStream& rng) {
    for (int iter = 0; iter < kMaxRejections; ++iter) {
      rebuild();
      const int seg = pick_segment(rng);
      const double x = sample_segment(rng, seg);
      const double hull = tangent_value(seg, x);
      const double logu = std::log(rng.uniform());
      if (logu <= squeeze_value(x) - hull) return x;  // squeeze accept
      const double hx = f_.log_density(x);
      if (hx > hull + 1e-6 * (1.0 + std::fabs(hull))) {
        throw ContractError(
            "sample_log_concave: density exceeds the tangent hull; "
            "log-concavity assertion violated");
      }
      if (logu <= hx - hull) {
        insert(x, hx);
        return x;
      }
      insert(x, hx);
    }
    throw NumericalError("sample_log_concave: rejection loop did not finish");
  }

 private:
  double eval(double x) const { return f_.log_density(x); }

  double derivative(double x) const {
    double step = 1e-6 * std::max(1.0, std::fabs(x));
    double lo = x - step, hi = x + step;
    if (lo <= f_.lower) lo = x;
    if (hi >= f_.upper) hi = x;
    return (eval(hi) - eval(lo)) / (hi - lo);
  }

  double clip_into_domain(double x, double scale) const {
    const double pad = 1e-8 * std::max(1.0, scale);
    if (std::isfinite(f_.lower)) x = std::max(x, f_.lower + pad);
    if (std::isfinite(f_.upper)) x = std::min(x, f_.upper - pad);
    return x;
  }

  // Walk uphill (doubling steps) then golden-section to locate the mode
  // roughly; placement only, no precision needed.
  double locate_mode() const {
    if (f_.mode_hint) return *f_.mode_hint;
    double x0;
    if (std::isfinite(f_.lower) && std::isfinite(f_.upper)) {
      x0 = 0.5 * (f_.lower + f_.upper);
    } else if (std::isfinite(f_.lower)) {
      x0 = f_.lower + 1.0;
    } else if (std::isfinite(f_.upper)) {
      x0 = f_.upper - 1.0;
    } else {
      x0 = 0.0;
    }
    x0 = clip_into_domain(x0, 1.0);
    double a = x0, b = x0;
    double fa = eval(a);
    double step = 1.0;
    // expand to bracket: move in the ascending direction until f drops
    double right = clip_into_domain(x0 + step, 1.0);
    const int dir = (eval(right) > fa) ? +1 : -1;
    double best = x0, fbest = fa;
    for (int i = 0; i < 64; ++i) {
      const double cand = clip_into_domain(x0 + dir * step, step);
      const double fc = eval(cand);
      if (fc > fbest) {
        best = cand;
        fbest = fc;
        step *= 2.0;
      } else {
        a = std::min(x0, cand);
        b = std::max(x0, cand);
        break;
      }
    }
    if (a == b) {  // never bracketed; fall back to best seen
      return best;
    }
    const double gr = 0.61803398874989484820;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    for (int i = 0; i < 40; ++i) {
      if (eval(c) > eval(d)) {
        b = d;
      } else {
        a = c;
      }
      c = b - gr * (b - a);
      d = a + gr * (b - a);
    }
    return clip_into_domain(0.5 * (a + b), 1.0);
  }

  void initialize() {
    const double mode = locate_mode();
    // curvature-based spread
    const double h = std::max(1e-4, 1e-4 * std::fabs(mode));
    double scale = 1.0;
    const double xm = clip_into_domain(mode - h, h);
    const double xp = clip_into_domain(mode + h, h);
    if (xp > xm) {
      const double second =
          (eval(xp) - 2.0 * eval(clip_into_domain(mode, h)) + eval(xm)) /
          ((0.5 * (xp - xm)) * (0.5 * (xp - xm)));
      if (second < 0.0 && std::isfinite(second))
        scale = 1.0 / std::sqrt(-second);
    }
    for (int k = -2; k <= 2; ++k) {
      const double x = clip_into_domain(mode + k * scale, scale);
      insert(x, eval(x));
    }
    // Unbounded sides need a bracketing slope so the hull integrates.
    if (!std::isfinite(f_.lower)) {
      double step = scale;
      for (int i = 0; i < 200 && points_.front().slope <= 0.0; ++i) {
        const double x = points_.front().x - step;
        insert(x, eval(x));
        step *= 2.0;
      }
      if (points_.front().slope <= 0.0) {
        throw ContractError(
            "sample_log_concave: could not find rising slope on the left");
      }
    }
    if (!std::isfinite(f_.upper)) {
      double step = scale;
      for (int i = 0; i < 200 && points_.back().slope >= 0.0; ++i) {
        const double x = points_.back().x + step;
        insert(x, eval(x));
        step *= 2.0;
      }
      if (points_.back().slope >= 0.0) {
        throw ContractError(
            "sample_log_concave: could not find falling slope on the right");
      }
    }
  }

  void insert(double x, double logf) {
    if (!std::isfinite(x) || !std::isfinite(logf)) return;
    if (static_cast<int>(points_.size()) >= kMaxHullPoints) return;
    for (const auto& p : points_) {
      if (std::fabs(p.x - x) <= 1e-12 * std::max(1.0, std::fabs(x))) return;
    }
    HullPoint p{x, logf, derivative(x)};
    if (!std::isfinite(p.slope)) return;
    const auto pos = std::lower_bound(
        points_.begin(), points_.end(), x,
        [](const HullPoint& a, double v) { return a.x < v; });
    points_.insert(pos, p);
    dirty_ = true;
  }

  // Tangent intersections and per-segment log masses.
  void rebuild() {
    if (!dirty_) return;
    const int k = static_cast<int>(points_.size());
    cuts_.assign(k + 1, 0.0);
    cuts_[0] = f_.lower;
    cuts_[k] = f_.upper;
    for (int i = 0; i + 1 < k; ++i) {
      const HullPoint& a = points_[i];
      const HullPoint& b = points_[i + 1];
      double z;
      if (std::fabs(a.slope - b.slope) < 1e-12 * (1.0 + std::fabs(a.slope))) {
        z = 0.5 * (a.x + b.x);
      } else {
        z = (b.logf - a.logf - b.x * b.slope + a.x * a.slope) /
            (a.slope - b.slope);
      }
      z = std::clamp(z, a.x, b.x);
      cuts_[i + 1] = std::max(z, cuts_[i]);
    }
    log_mass_.assign(k, -kInf);
    double lmax = -kInf;
    for (int i = 0; i < k; ++i) {
      log_mass_[i] = segment_log_mass(i);
      lmax = std::max(lmax, log_mass_[i]);
    }
    weights_.assign(k, 0.0);
    double total = 0.0;
    for (int i = 0; i < k; ++i) {
      weights_[i] = std::exp(log_mass_[i] - lmax);
      total += weights_[i];
    }
    for (auto& w : weights_) w /= total;
    dirty_ = false;
  }

  double tangent_value(int seg, double x) const {
    const HullPoint& p = points_[seg];
    return p.logf + p.slope * (x - p.x);
  }

  double segment_log_mass(int seg) const {
    const double l = cuts_[seg], r = cuts_[seg + 1];
    const double s = points_[seg].slope;
    if (r <= l) return -kInf;
    if (l == -kInf) {
      return tangent_value(seg, r) - std::log(s);
    }
    if (r == kInf) {
      return tangent_value(seg, l) - std::log(-s);
    }
    const double tl = tangent_value(seg, l);
    const double tr = tangent_value(seg, r);
    if (std::fabs(s) * (r - l) < 1e-12) {
      return 0.5 * (tl + tr) + std::log(r - l);
    }
    if (s > 0.0) {
      return tr + std::log1p(-std::exp(tl - tr)) - std::log(s);
    }
    return tl + std::log1p(-std::exp(tr - tl)) - std::log(-s);
  }

  int pick_segment(RngStream& rng) const {
    const double u = rng.uniform();
    double acc = 0.0;
    for (int i = 0; i < static_cast<int>(weights_.size()); ++i) {
      acc += weights_[i];
      if (u <= acc) return i;
    }
    return static_cast<int>(weights_.size()) - 1;
  }

  // Inverse-cdf draw from the truncated exponential tangent piece.
  double sample_segment(RngStream& rng, int seg) const {
    const double l = cuts_[seg], r = cuts_[seg + 1];
    const double s = points_[seg].slope;
    const double u = rng.uniform();
    if (l == -kInf) return r + std::log(u) / s;
    if (r == kInf) return l + std::log(u) / s;
    const double width = r - l;
    if (std::fabs(s) * width < 1e-12) return l + u * width;
    if (s > 0.0) {
      return r + std::log(u + (1.0 - u) * std::exp(-s * width)) / s;
    }
    return l + std::log1p(-u * (1.0 - std::exp(s * width))) / s;
  }

  // Chord lower bound between bracketing hull points; -inf outside them.
  double squeeze_value(double x) const {
    const int k = static_cast<int>(points_.size());
    if (x < points_.front().x || x > points_.back().x) return -kInf;
    for (int i = 0; i + 1 < k; ++i) {
      if (x <= points_[i + 1].x) {
        const HullPoint& a = points_[i];
        const HullPoint& b = points_[i + 1];
        const double w = (x - a.x) / (b.x - a.x);
        return a.logf + w * (b.logf - a.logf);
      }
    }
    return -kInf;
  }

  const LogConcaveDensity& f_;
  std::vector<HullPoint> points_;
  std::vector<double> cuts_;
  std::vector<double> log_mass_;
  std::vector<double> weights_;
  bool dirty_ = true;
};

}  // namespace

double sample_log_concave(RngStream& rng, const LogConcaveDensity& f) {
  if (!(f.lower < f.upper)) {
    throw ContractError("sample_log_concave: empty domain");
  }
  AdaptiveHull hull(f);
  return hull.draw(rng);
}

}  // namespace glmm
