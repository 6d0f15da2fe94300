#pragma once

// Integration cycles from -1/2 to 1/2 (optionally shifted by a periodic
// offset), deformed by semicircular arcs around poles near the real axis and
// completed by small closed loops around poles that sit on the wrong side of
// the axis. Integration is adaptive Gauss-Kronrod 7/15 with a global queue.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "ellid/numeric.hpp"

namespace ellid {

enum class Side { above, below };

inline const char* to_string(Side s) { return s == Side::above ? "above" : "below"; }

template <class R>
struct Deformation {
  R center;
  Side side;
  R radius;
};

// Closed circle; orientation +1 is counterclockwise.
template <class R>
struct Loop {
  cplx<R> center;
  R radius;
  int orientation;
};

template <class R>
struct Contour {
  R offset = 0;
  std::vector<Deformation<R>> deformations;
  std::vector<Loop<R>> loops;
  bool reversed = false;

  R left() const { return R(-0.5) + offset; }
  R right() const { return R(0.5) + offset; }
};

template <class R>
Contour<R> build_contour(std::vector<Deformation<R>> deformations, R offset = R(0),
                         std::vector<Loop<R>> loops = {}) {
  std::sort(deformations.begin(), deformations.end(),
            [](const Deformation<R>& a, const Deformation<R>& b) { return a.center < b.center; });
  const R lo = R(-0.5) + offset;
  const R hi = R(0.5) + offset;
  for (const auto& d : deformations) {
    if (!(d.radius > 0) || !(d.radius < R(0.25)))
      throw DomainViolation("deformation radius must lie in (0, 1/4)");
    if (!(d.center - d.radius > lo) || !(d.center + d.radius < hi))
      throw CenterOutOfRange("deformation does not fit inside the base segment");
  }
  for (std::size_t i = 1; i < deformations.size(); ++i) {
    const auto& a = deformations[i - 1];
    const auto& b = deformations[i];
    if (b.center - a.center < a.radius + b.radius)
      throw OverlappingDeformations("deformations overlap");
  }
  for (const auto& l : loops) {
    if (!(l.radius > 0) || (l.orientation != 1 && l.orientation != -1))
      throw DomainViolation("loop needs positive radius and orientation +-1");
  }
  Contour<R> c;
  c.offset = offset;
  c.deformations = std::move(deformations);
  c.loops = std::move(loops);
  return c;
}

template <class R>
Contour<R> reverse(Contour<R> c) {
  c.reversed = !c.reversed;
  return c;
}

// A smooth piece of the cycle, parameterized on [a, b].
template <class R>
struct PathPiece {
  enum Kind { segment, arc, circle } kind;
  cplx<R> center;  // segment: unused
  R radius;        // segment: unused
  R a, b;          // segment: real endpoints; arc/circle: angles
  int weight;      // +1 or -1 multiplier (loop orientation)

  void point(R s, cplx<R>& t, cplx<R>& dt) const {
    if (kind == segment) {
      t = cplx<R>(s, 0);
      dt = cplx<R>(1, 0);
      return;
    }
    const cplx<R> e = std::polar(R(1), s);
    t = center + radius * e;
    dt = cplx<R>(0, radius) * e;
  }
};

template <class R>
std::vector<PathPiece<R>> path_pieces(const Contour<R>& c) {
  std::vector<PathPiece<R>> out;
  R x = c.left();
  const R pi = pi_v<R>;
  for (const auto& d : c.deformations) {
    out.push_back({PathPiece<R>::segment, {}, 0, x, d.center - d.radius, 1});
    const R end = d.side == Side::above ? R(0) : R(2) * pi;
    out.push_back({PathPiece<R>::arc, cplx<R>(d.center, 0), d.radius, pi, end, 1});
    x = d.center + d.radius;
  }
  out.push_back({PathPiece<R>::segment, {}, 0, x, c.right(), 1});
  for (const auto& l : c.loops) out.push_back({PathPiece<R>::circle, l.center, l.radius, 0, 2 * pi, l.orientation});
  return out;
}

template <class R>
struct QuadratureResult {
  cplx<R> value;
  R error_estimate;
  long evaluations;
};

template <class R>
struct QuadratureOptions {
  long budget = 200000;
  R roundoff_factor = R(50);
};

namespace detail {

template <class R>
struct GK15 {
  static constexpr std::array<long double, 8> xgk{
      0.991455371120812639206854697526329L, 0.949107912342758524526189684047851L,
      0.864864423359769072789712788640926L, 0.741531185599394439863864773280788L,
      0.586087235467691130294144845693013L, 0.405845151377397166906606412076961L,
      0.207784955007898467600689403773245L, 0.000000000000000000000000000000000L};
  static constexpr std::array<long double, 8> wgk{
      0.022935322010529224963732008058970L, 0.063092092629978553290700663189204L,
      0.104790010322250183839876322541518L, 0.140653259715525918745189590510238L,
      0.169004726639267902826583426598550L, 0.190350578064785409913256402421014L,
      0.204432940075298892414161999234649L, 0.209482141084727828012999174891714L};
  static constexpr std::array<long double, 4> wg{
      0.129484966168869693270611432679082L, 0.279705391489276667901467771423780L,
      0.381830050505118944950369775488975L, 0.417959183673469387755102040816327L};
};

template <class R>
struct Panel {
  std::size_t piece;
  R a, b;
  cplx<R> value;
  R error;
  R abs_integral;
  long id;
};

template <class R>
struct PanelOrder {
  bool operator()(const Panel<R>& x, const Panel<R>& y) const {
    if (x.error != y.error) return x.error < y.error;
    return x.id > y.id;
  }
};

template <class R, class F>
Panel<R> gk_panel(const F& f, const PathPiece<R>& piece, std::size_t index, R a, R b, R roundoff, long id) {
  using G = GK15<R>;
  const R half = (b - a) / 2;
  const R mid = (a + b) / 2;
  cplx<R> kron(0), gauss(0);
  R absint = 0;
  cplx<R> t, dt;
  for (int i = 0; i < 8; ++i) {
    const R x = static_cast<R>(G::xgk[i]) * half;
    const R wk = static_cast<R>(G::wgk[i]);
    const int reps = i == 7 ? 1 : 2;
    for (int r = 0; r < reps; ++r) {
      const R s = r == 0 ? mid - x : mid + x;
      piece.point(s, t, dt);
      const cplx<R> v = f(t) * dt;
      if (!is_finite(v)) throw PoleHit("integrand not finite on the contour");
      kron += wk * v;
      absint += wk * std::abs(v);
      if (i % 2 == 1) gauss += static_cast<R>(G::wg[i / 2]) * v;
    }
  }
  kron *= half;
  gauss *= half;
  absint *= std::abs(half);
  const R err = std::max(std::abs(kron - gauss), roundoff * machine_eps<R>() * absint);
  return {index, a, b, kron * R(piece.weight), err, absint, id};
}

template <class R>
int initial_panels(const PathPiece<R>& p) {
  if (p.kind == PathPiece<R>::segment) return std::max(1, static_cast<int>(std::ceil((p.b - p.a) * 8)));
  return p.kind == PathPiece<R>::arc ? 2 : 4;
}

}  // namespace detail

// Adaptive integration of f along the cycle; stops once the summed error
// estimate is <= tol * max(1, |value|).
template <class R, class F>
QuadratureResult<R> integrate(const F& f, const Contour<R>& contour, R tol, const QuadratureOptions<R>& opts = {}) {
  if (!(tol > 0)) throw DomainViolation("integrate: tol must be positive");
  const auto pieces = path_pieces(contour);
  std::priority_queue<detail::Panel<R>, std::vector<detail::Panel<R>>, detail::PanelOrder<R>> queue;
  std::vector<detail::Panel<R>> settled;
  long evals = 0;
  long next_id = 0;
  auto eval_panel = [&](std::size_t i, R a, R b) {
    if (evals + 15 > opts.budget) throw ToleranceNotReached("integrate: evaluation budget exhausted");
    evals += 15;
    return detail::gk_panel(f, pieces[i], i, a, b, opts.roundoff_factor, next_id++);
  };
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const auto& p = pieces[i];
    if (p.kind == PathPiece<R>::segment && !(p.b > p.a)) continue;
    const int n = detail::initial_panels(p);
    for (int k = 0; k < n; ++k) {
      const R a = p.a + (p.b - p.a) * R(k) / R(n);
      const R b = k + 1 == n ? p.b : p.a + (p.b - p.a) * R(k + 1) / R(n);
      queue.push(eval_panel(i, a, b));
    }
  }
  auto totals = [&](cplx<R>& v, R& e) {
    v = 0;
    e = 0;
    auto copy = queue;
    while (!copy.empty()) {
      v += copy.top().value;
      e += copy.top().error;
      copy.pop();
    }
    for (const auto& s : settled) {
      v += s.value;
      e += s.error;
    }
  };
  cplx<R> value;
  R error;
  totals(value, error);
  while (error > tol * std::max(R(1), std::abs(value))) {
    if (queue.empty()) break;
    detail::Panel<R> worst = queue.top();
    queue.pop();
    if (worst.error <= opts.roundoff_factor * machine_eps<R>() * worst.abs_integral) {
      settled.push_back(worst);
      continue;
    }
    const R mid = (worst.a + worst.b) / 2;
    auto left = eval_panel(worst.piece, worst.a, mid);
    auto right = eval_panel(worst.piece, mid, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
  }
  // Re-sum in a fixed order to avoid drift from the incremental updates.
  totals(value, error);
  if (contour.reversed) value = -value;
  return {value, error, evals};
}

// Pole lattice base + n*step1 + m*step2, n, m >= 0. Upper lattices must stay
// above the cycle (steps with Im > 0), lower lattices below (Im < 0).
template <class R>
struct PoleLattice {
  cplx<R> base;
  cplx<R> step1;
  cplx<R> step2;
  Side required;
  bool single = false;  // only base + n*step1
};

template <class R>
struct DeclaredPole {
  cplx<R> point;
  std::optional<Side> required;
};

template <class R>
struct PoleVerdict {
  cplx<R> point;
  std::optional<Side> required;
  Side effective;
  R distance;
  bool too_close;
  bool ok;
};

template <class R>
struct AuditReport {
  std::vector<PoleVerdict<R>> verdicts;
  R margin;
  bool pass = true;

  std::string summary() const {
    std::string out;
    for (const auto& v : verdicts) {
      if (v.ok) continue;
      out += "pole (" + std::to_string(static_cast<double>(v.point.real())) + "," +
             std::to_string(static_cast<double>(v.point.imag())) + ") ";
      out += v.too_close ? "too close" : std::string("on the ") + to_string(v.effective) + " side";
      out += "; ";
    }
    return out;
  }
};

// Poles of a lattice that can interact with the cycle: |Im| < horizon, plus every
// pole on the wrong side of the real axis.
template <class R>
std::vector<cplx<R>> enumerate_lattice(const PoleLattice<R>& L, long limit = 4000, R horizon = R(1)) {
  const R dir = L.required == Side::above ? R(1) : R(-1);
  const R s1 = L.step1.imag() * dir;
  const R s2 = L.step2.imag() * dir;
  if (!(s1 > 0) || (!L.single && !(s2 > 0)))
    throw DomainViolation("pole lattice steps must point away from the cycle");
  std::vector<cplx<R>> out;
  for (long m = 0;; ++m) {
    const cplx<R> row = L.base + R(m) * L.step2;
    if (row.imag() * dir >= horizon) break;
    for (long n = 0;; ++n) {
      const cplx<R> p = row + R(n) * L.step1;
      if (p.imag() * dir >= horizon) break;
      out.push_back(p);
      if (static_cast<long>(out.size()) > limit) throw NonConvergent("pole lattice enumeration too large");
    }
    if (L.single) break;
  }
  return out;
}

template <class R>
R reduce_into(R x, R offset) {
  return x - std::floor(x - offset + R(0.5));
}

template <class R>
R graph_height(const Contour<R>& c, R x) {
  for (const auto& d : c.deformations) {
    const R u = x - d.center;
    if (std::abs(u) < d.radius) {
      const R h = std::sqrt(d.radius * d.radius - u * u);
      return d.side == Side::above ? h : -h;
    }
  }
  return 0;
}

template <class R>
R distance_to_path(const Contour<R>& c, const cplx<R>& p) {
  R best = std::numeric_limits<R>::infinity();
  for (const auto& piece : path_pieces(c)) {
    if (piece.kind == PathPiece<R>::segment) {
      const R x = std::clamp(p.real(), piece.a, piece.b);
      best = std::min(best, std::abs(p - cplx<R>(x, 0)));
      continue;
    }
    const cplx<R> d = p - piece.center;
    R ang = std::arg(d);
    if (piece.kind == PathPiece<R>::arc) {
      const R lo = std::min(piece.a, piece.b);
      const R hi = std::max(piece.a, piece.b);
      if (ang < 0 && hi > pi_v<R>) ang += 2 * pi_v<R>;
      if (ang >= lo && ang <= hi) {
        best = std::min(best, std::abs(std::abs(d) - piece.radius));
      } else {
        best = std::min(best, std::abs(p - (piece.center + std::polar(piece.radius, piece.a))));
        best = std::min(best, std::abs(p - (piece.center + std::polar(piece.radius, piece.b))));
      }
    } else {
      best = std::min(best, std::abs(std::abs(d) - piece.radius));
    }
  }
  return best;
}

template <class R>
R default_margin(const Contour<R>& c) {
  R m = std::numeric_limits<R>::infinity();
  for (const auto& d : c.deformations) m = std::min(m, d.radius);
  for (const auto& l : c.loops) m = std::min(m, l.radius);
  return std::isfinite(m) ? m / 4 : R(1) / 64;
}

// Classifies every pole (with its images shifted by -1, 0, 1) against the cycle.
template <class R>
AuditReport<R> pole_audit(const std::vector<DeclaredPole<R>>& poles, const Contour<R>& c,
                          std::optional<R> margin = std::nullopt) {
  AuditReport<R> rep;
  rep.margin = margin ? *margin : default_margin(c);
  for (const auto& pole : poles) {
    const R x0 = reduce_into(pole.point.real(), c.offset);
    PoleVerdict<R> v{pole.point, pole.required, Side::above, std::numeric_limits<R>::infinity(), false, true};
    for (int shift = -1; shift <= 1; ++shift) {
      const cplx<R> p(x0 + R(shift), pole.point.imag());
      v.distance = std::min(v.distance, distance_to_path(c, p));
    }
    const cplx<R> p(x0, pole.point.imag());
    v.effective = p.imag() > graph_height(c, x0) ? Side::above : Side::below;
    for (const auto& l : c.loops) {
      for (int shift = -1; shift <= 1; ++shift) {
        const cplx<R> ps(x0 + R(shift), pole.point.imag());
        if (std::abs(ps - l.center) < l.radius) {
          if (l.orientation > 0 && v.effective == Side::below) v.effective = Side::above;
          else if (l.orientation < 0 && v.effective == Side::above) v.effective = Side::below;
        }
      }
    }
    v.too_close = v.distance < rep.margin;
    v.ok = !v.too_close && (!v.required || *v.required == v.effective);
    rep.pass = rep.pass && v.ok;
    rep.verdicts.push_back(v);
  }
  return rep;
}

// Loops around wrong-side poles reach up to 1/8 beyond them, so the horizon
// grows to cover every pole that could fall inside one.
template <class R>
R pole_horizon(const std::vector<PoleLattice<R>>& lattices) {
  R depth = 0;
  for (const auto& L : lattices) {
    const R dir = L.required == Side::above ? R(1) : R(-1);
    for (const auto& p : enumerate_lattice(L)) depth = std::max(depth, -p.imag() * dir);
  }
  return std::max(R(1), depth + R(0.25));
}

template <class R>
std::vector<DeclaredPole<R>> declared_poles(const std::vector<PoleLattice<R>>& lattices) {
  std::vector<DeclaredPole<R>> out;
  const R tol = R(64) * machine_eps<R>();
  const R horizon = pole_horizon(lattices);
  for (const auto& L : lattices) {
    for (const auto& p : enumerate_lattice(L, 4000, horizon)) {
      // Repeated points of one family are a single higher-order pole.
      bool repeat = false;
      for (const auto& q : out) {
        cplx<R> d = p - q.point;
        d -= std::round(d.real());
        if (q.required == L.required && std::abs(d) <= tol * (R(1) + std::abs(p))) {
          repeat = true;
          break;
        }
      }
      if (!repeat) out.push_back({p, L.required});
    }
  }
  return out;
}

// The cycle that keeps every upper lattice above and every lower lattice below:
// arcs for poles near the axis, closed loops for poles on the wrong side.
template <class R>
Contour<R> separating_contour(const std::vector<PoleLattice<R>>& lattices) {
  const auto poles = declared_poles(lattices);
  const std::size_t n = poles.size();
  std::vector<R> radius(n, R(0.125));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (int shift = -1; shift <= 1; ++shift) {
        if (i == j && shift == 0) continue;
        cplx<R> d = poles[j].point - poles[i].point;
        d += R(shift) - std::round(d.real());
        radius[i] = std::min(radius[i], std::abs(d) / 2);
      }
    }
  }
  struct Arc {
    R x, r;
    Side side;
  };
  std::vector<Arc> arcs;
  std::vector<Loop<R>> loops;
  for (std::size_t i = 0; i < n; ++i) {
    const cplx<R> c = poles[i].point;
    const R r = radius[i];
    if (!(r > 0)) throw OverlappingDeformations("coincident poles");
    const bool upper = *poles[i].required == Side::above;
    if (std::abs(c.imag()) < r / 2) {
      arcs.push_back({c.real(), r, upper ? Side::below : Side::above});
    } else if (upper && c.imag() < 0) {
      loops.push_back({c, std::min(r, -c.imag() / 2), 1});
    } else if (!upper && c.imag() > 0) {
      loops.push_back({c, std::min(r, c.imag() / 2), -1});
    }
  }
  static constexpr std::array<double, 9> candidates{0, 0.25, -0.25, 0.125, -0.125, 0.375, -0.375, 0.0625, -0.0625};
  for (double cand : candidates) {
    const R off = static_cast<R>(cand);
    bool fits = true;
    std::vector<Deformation<R>> defs;
    for (const auto& a : arcs) {
      const R x = reduce_into(a.x, off);
      if (!(x - a.r > off - R(0.5) + R(1e-3)) || !(x + a.r < off + R(0.5) - R(1e-3))) {
        fits = false;
        break;
      }
      defs.push_back({x, a.side, a.r});
    }
    if (!fits) continue;
    std::vector<Loop<R>> ls;
    for (const auto& l : loops) ls.push_back({cplx<R>(reduce_into(l.center.real(), off), l.center.imag()), l.radius, l.orientation});
    return build_contour(std::move(defs), off, std::move(ls));
  }
  throw CenterOutOfRange("no periodic offset keeps every arc inside the base segment");
}

}  // namespace ellid
