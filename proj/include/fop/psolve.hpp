#pragma once

#include "fop/polynomial.hpp"
#include "fop/random.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace fop {

inline constexpr int kMaxSolverVars = 4;
inline constexpr long kMaxBezout = 5000;

/// Square system of scalar polynomial equations in n complex unknowns.
struct PolySystem {
  int nvars = 0;
  std::vector<PolyMap> equations;  // each nvars -> 1

  int size() const { return static_cast<int>(equations.size()); }

  std::vector<int> degrees() const {
    std::vector<int> d;
    for (const auto& e : equations) d.push_back(e.actual_degree());
    return d;
  }

  CVec evaluate(const CVec& x) const {
    CVec f(size());
    for (int i = 0; i < size(); ++i) f(i) = equations[i].evaluate(x)(0);
    return f;
  }

  CMat jacobian(const CVec& x) const {
    CMat j(size(), nvars);
    for (int i = 0; i < size(); ++i) j.row(i) = equations[i].jacobian(x).row(0);
    return j;
  }

  /// Rows of a polynomial map as separate equations.
  static PolySystem from_map(const PolyMap& p) {
    PolySystem s;
    s.nvars = p.nvars;
    for (int k = 0; k < p.ntarget; ++k) s.equations.push_back(component(p, k));
    return s;
  }
};

struct SolveOptions {
  std::uint64_t seed = kSolverSeed;
  int threads = 1;
  double max_step = 0.05;
  double min_step = 1e-12;
  double divergence = 1e8;
  double dedup = tol::dedup;
  double endgame = 1e-10;
  double stall_fraction = 0.05;
};

struct Solution {
  CVec x;
  double residual = 0.0;
  int multiplicity = 1;
  bool singular = false;  // multiplicity cluster or rank-deficient Jacobian
};

struct SolutionSet {
  std::vector<Solution> points;
  int paths = 0;
  int diverged = 0;
  int stalled = 0;
  int retracks = 0;
  std::uint64_t seed = kSolverSeed;

  int count_with_multiplicity() const {
    int c = 0;
    for (const auto& p : points) c += p.multiplicity;
    return c;
  }
};

struct PolishResult {
  bool ok = false;
  CVec x;
  double residual = 0.0;
  std::string reason;
};

namespace detail {

inline double system_scale(const PolySystem& f, const CVec& x) {
  double s = 1.0;
  for (int d : f.degrees()) s = std::max(s, std::pow(x.norm(), std::max(d, 0)));
  return s;
}

// Scales each equation to unit max coefficient and clears negligible terms.
inline PolySystem normalized(const PolySystem& f) {
  PolySystem g = f;
  for (auto& e : g.equations) {
    double m = e.sup_norm();
    if (m == 0.0) continue;
    e.coeffs /= m;
    for (Eigen::Index i = 0; i < e.coeffs.size(); ++i)
      if (std::abs(e.coeffs.data()[i]) < 1e-12) e.coeffs.data()[i] = 0.0;
  }
  return g;
}

inline bool lex_less(const CVec& a, const CVec& b) {
  auto r = [](double v) { return std::round(v * 1e8) / 1e8; };
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    double ar = r(a(i).real()), br = r(b(i).real());
    if (ar != br) return ar < br;
    double ai = r(a(i).imag()), bi = r(b(i).imag());
    if (ai != bi) return ai < bi;
  }
  return false;
}

}  // namespace detail

/// Plain Newton on F from x0, at most 50 iterations.
inline PolishResult newton_polish(const PolySystem& f, const CVec& x0) {
  require(f.size() == f.nvars, "Newton polishing needs a square system");
  PolishResult r;
  r.x = x0;
  double last_step = std::numeric_limits<double>::infinity();
  bool contracted = false;
  for (int it = 0; it < 50; ++it) {
    CVec fx = f.evaluate(r.x);
    r.residual = fx.norm();
    if (!std::isfinite(r.residual)) {
      r.reason = "non-finite residual";
      return r;
    }
    if (r.residual <= 1e-12 * detail::system_scale(f, r.x) && (contracted || it == 0 || r.residual == 0.0)) {
      r.ok = true;
      return r;
    }
    CMat j = f.jacobian(r.x);
    Eigen::JacobiSVD<CMat> svd(j);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(sv.size() - 1) == 0.0 || sv(0) / sv(sv.size() - 1) > 1e12) {
      r.reason = "singular Jacobian";
      return r;
    }
    CVec dx = j.partialPivLu().solve(-fx);
    double step = dx.norm();
    contracted = step < last_step;
    last_step = step;
    r.x += dx;
  }
  r.residual = f.evaluate(r.x).norm();
  r.ok = r.residual <= 1e-12 * detail::system_scale(f, r.x) && contracted;
  if (!r.ok) r.reason = "no convergence in 50 iterations";
  return r;
}

namespace detail {

enum class PathStatus { finite, diverged, stalled };

struct PathEnd {
  PathStatus status = PathStatus::stalled;
  CVec x;
  double residual = 0.0;
  bool singular = false;
};

class Tracker {
 public:
  Tracker(const PolySystem& f, cplx gamma, const SolveOptions& o) : f_(f), gamma_(gamma), o_(o), deg_(f.degrees()) {}

  PathEnd track(CVec x, double max_step) const {
    PathEnd end;
    double t = 0.0;
    double h = std::min(0.01, max_step);
    int successes = 0;
    while (1.0 - t > o_.endgame) {
      if (x.norm() > o_.divergence) {
        end.status = PathStatus::diverged;
        end.x = x;
        return end;
      }
      const double hh = std::min(h, 1.0 - t);
      CVec dx = tangent(x, t);
      CVec x1 = x + hh * dx;
      const double t1 = t + hh;
      bool converged = false;
      for (int it = 0; it < 3 && x1.allFinite(); ++it) {
        CVec delta = hx(x1, t1).partialPivLu().solve(-h_of(x1, t1));
        x1 += delta;
        if (delta.norm() <= 1e-9 * (1.0 + x1.norm())) {
          converged = true;
          break;
        }
      }
      if (converged && x1.allFinite()) {
        x = x1;
        t = t1;
        if (++successes >= 4) {
          h = std::min(h * 1.5, max_step);
          successes = 0;
        }
      } else {
        h /= 2.0;
        successes = 0;
        if (h < o_.min_step) {
          end.status = x.norm() > 1e4 ? PathStatus::diverged : PathStatus::stalled;
          end.x = x;
          return end;
        }
      }
    }
    return refine(x);
  }

 private:
  // Endgame: least-squares Newton on F so singular endpoints still converge.
  PathEnd refine(CVec x) const {
    PathEnd end;
    double best = f_.evaluate(x).norm();
    for (int it = 0; it < 200; ++it) {
      CVec fx = f_.evaluate(x);
      if (fx.norm() <= 1e-15 * system_scale(f_, x)) break;
      CMat j = f_.jacobian(x);
      CVec dx = j.completeOrthogonalDecomposition().solve(-fx);
      if (!dx.allFinite()) break;
      CVec xn = x + dx;
      double rn = f_.evaluate(xn).norm();
      if (rn > 2.0 * best && it > 5) break;
      x = xn;
      best = std::min(best, rn);
      if (dx.norm() <= 1e-15 * (1.0 + x.norm())) break;
    }
    end.x = x;
    end.residual = f_.evaluate(x).norm();
    const double scale = system_scale(f_, x);
    if (!x.allFinite() || x.norm() > o_.divergence) {
      end.status = PathStatus::diverged;
      return end;
    }
    if (end.residual > 1e-9 * scale) {
      end.status = x.norm() > 1e4 ? PathStatus::diverged : PathStatus::stalled;
      return end;
    }
    end.status = PathStatus::finite;
    Eigen::JacobiSVD<CMat> svd(f_.jacobian(x));
    const auto& sv = svd.singularValues();
    end.singular = sv(sv.size() - 1) <= 1e-8 * std::max(1.0, sv(0));
    return end;
  }

  static cplx ipow(cplx z, int k) {
    cplx r = 1.0;
    for (int i = 0; i < k; ++i) r *= z;
    return r;
  }
  CVec start_value(const CVec& x) const {
    CVec g(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) g(i) = ipow(x(i), deg_[i]) - 1.0;
    return g;
  }
  CMat start_jacobian(const CVec& x) const {
    CMat j = CMat::Zero(x.size(), x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) j(i, i) = static_cast<double>(deg_[i]) * ipow(x(i), deg_[i] - 1);
    return j;
  }
  CVec h_of(const CVec& x, double t) const { return gamma_ * (1.0 - t) * start_value(x) + t * f_.evaluate(x); }
  CMat hx(const CVec& x, double t) const { return gamma_ * (1.0 - t) * start_jacobian(x) + t * f_.jacobian(x); }
  CVec tangent(const CVec& x, double t) const {
    CVec ht = f_.evaluate(x) - gamma_ * start_value(x);
    return hx(x, t).partialPivLu().solve(-ht);
  }

  const PolySystem& f_;
  cplx gamma_;
  const SolveOptions& o_;
  std::vector<int> deg_;
};

}  // namespace detail

/// All isolated solutions of a square system by total-degree homotopy.
inline SolutionSet solve_system(const PolySystem& input, const SolveOptions& opts = {}) {
  require(input.size() == input.nvars, "system must be square");
  require(input.nvars >= 1 && input.nvars <= kMaxSolverVars, "solver supports 1 to 4 unknowns");
  for (const auto& e : input.equations) require(e.nvars == input.nvars && e.ntarget == 1, "equations must be scalar in the system unknowns");
  PolySystem f = detail::normalized(input);
  auto deg = f.degrees();
  long bezout = 1;
  for (int d : deg) {
    if (d < 0) throw ValidationError("an equation vanishes identically");
    bezout *= std::max(d, 0);
    require(bezout <= kMaxBezout, "Bezout number exceeds 5000");
  }
  SolutionSet out;
  out.seed = opts.seed;
  out.paths = static_cast<int>(bezout);
  if (bezout == 0) return out;  // a nonzero constant equation has no solutions

  RandomStream rng(opts.seed);
  const cplx gamma = rng.unit_complex();
  detail::Tracker tracker(f, gamma, opts);

  // start points: products of roots of unity
  std::vector<CVec> starts;
  {
    std::vector<int> idx(f.nvars, 0);
    for (long p = 0; p < bezout; ++p) {
      CVec x(f.nvars);
      for (int i = 0; i < f.nvars; ++i) x(i) = std::polar(1.0, 2.0 * std::numbers::pi * idx[i] / deg[i]);
      starts.push_back(x);
      for (int i = 0; i < f.nvars; ++i) {
        if (++idx[i] < deg[i]) break;
        idx[i] = 0;
      }
    }
  }

  std::vector<detail::PathEnd> ends(starts.size());
  auto run = [&](const std::vector<size_t>& which, double max_step) {
    std::atomic<size_t> next{0};
    auto worker = [&] {
      for (size_t k = next++; k < which.size(); k = next++) ends[which[k]] = tracker.track(starts[which[k]], max_step);
    };
    const int nt = std::max(1, std::min<int>(opts.threads, static_cast<int>(which.size())));
    if (nt == 1) {
      worker();
      return;
    }
    std::vector<std::thread> pool;
    for (int i = 0; i < nt; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  };

  std::vector<size_t> all(starts.size());
  for (size_t i = 0; i < all.size(); ++i) all[i] = i;
  run(all, opts.max_step);

  // Two regular endpoints landing together means a path jumped: retrack them.
  double step = opts.max_step;
  for (int pass = 0; pass < 3; ++pass) {
    std::vector<size_t> redo;
    for (size_t i = 0; i < ends.size(); ++i) {
      if (ends[i].status != detail::PathStatus::finite || ends[i].singular) continue;
      for (size_t j = i + 1; j < ends.size(); ++j) {
        if (ends[j].status != detail::PathStatus::finite || ends[j].singular) continue;
        if ((ends[i].x - ends[j].x).norm() <= opts.dedup * std::max(1.0, ends[i].x.norm())) {
          redo.push_back(i);
          redo.push_back(j);
        }
      }
    }
    std::sort(redo.begin(), redo.end());
    redo.erase(std::unique(redo.begin(), redo.end()), redo.end());
    if (redo.empty()) break;
    step /= 4.0;
    out.retracks += static_cast<int>(redo.size());
    run(redo, step);
  }

  for (const auto& e : ends) {
    if (e.status == detail::PathStatus::diverged) ++out.diverged;
    if (e.status == detail::PathStatus::stalled) ++out.stalled;
  }
  if (out.stalled > opts.stall_fraction * static_cast<double>(bezout))
    throw NumericalError("path tracking stalled on " + std::to_string(out.stalled) + " of " + std::to_string(bezout) + " paths");

  // cluster endpoints; singular ones merge at a wider radius and are
  // represented by the cluster centroid
  std::vector<CVec> sums;
  for (const auto& e : ends) {
    if (e.status != detail::PathStatus::finite) continue;
    bool merged = false;
    for (size_t k = 0; k < out.points.size(); ++k) {
      auto& s = out.points[k];
      const double base = std::max(1.0, s.x.norm());
      const double radius = (s.singular || e.singular) ? 1e-4 * base : opts.dedup * base;
      if ((s.x - e.x).norm() <= radius) {
        ++s.multiplicity;
        s.singular = true;
        sums[k] += e.x;
        merged = true;
        break;
      }
    }
    if (!merged) {
      out.points.push_back(Solution{e.x, e.residual, 1, e.singular});
      sums.push_back(e.x);
    }
  }
  for (size_t k = 0; k < out.points.size(); ++k) {
    auto& s = out.points[k];
    if (s.multiplicity == 1) continue;
    CVec c = sums[k] / static_cast<double>(s.multiplicity);
    double rc = f.evaluate(c).norm();
    if (rc <= std::max(s.residual, f.evaluate(s.x).norm())) s.x = c;
    s.residual = f.evaluate(s.x).norm();
  }
  std::sort(out.points.begin(), out.points.end(), [](const Solution& a, const Solution& b) { return detail::lex_less(a.x, b.x); });
  return out;
}

inline int count_with_multiplicity(const PolySystem& f, const SolveOptions& opts = {}) {
  return solve_system(f, opts).count_with_multiplicity();
}

}  // namespace fop
