#pragma once

#include <optional>
#include <vector>

#include "qmink/sets.hpp"

namespace qmink {

enum class ProductNote {
  FullSphere,    // result (or the only available bound) is all of S^3
  Embedded,      // arc-pair product is an embedded 2-surface with boundary
  ImmersedOnly,  // arc-pair product is immersed but not injective
  BoundOnly,     // no closed form; enclosing cap is a conservative bound
  NoClosedForm,  // a translate had no exact representative in the set family
};

inline const char* to_string(ProductNote n) {
  switch (n) {
    case ProductNote::FullSphere: return "FULL_SPHERE";
    case ProductNote::Embedded: return "EMBEDDED";
    case ProductNote::ImmersedOnly: return "IMMERSED_ONLY";
    case ProductNote::BoundOnly: return "BOUND_ONLY";
    case ProductNote::NoClosedForm: return "NO_CLOSED_FORM";
  }
  return "?";
}

enum class Side { Left, Right };

/// The doubly ruled surface P(s, t) = exp(s c1) exp(t c2) over
/// [phi1 - delta1, phi1 + delta1] x [phi2 - delta2, phi2 + delta2].
template <typename Scalar> struct ArcSurface {
  Vector3<Scalar> c1, c2;
  Scalar phi1 = 0, phi2 = 0, delta1 = 0, delta2 = 0;

  UnitQuaternion<Scalar> point(Scalar s, Scalar t) const {
    return exp_pure(s * c1) * exp_pure(t * c2);
  }

  /// Corner points, sign1/sign2 in {-1, +1}.
  UnitQuaternion<Scalar> corner(int sign1, int sign2) const {
    return point(phi1 + Scalar(sign1) * delta1, phi2 + Scalar(sign2) * delta2);
  }

  /// Gauss-Newton fit of (s, t) to a surface point x starting from (s0, t0).
  /// Returns the residual norm; parameters are written back.
  Scalar fit(const Vector4<Scalar>& x, Scalar& s, Scalar& t, int max_iter = 25) const {
    for (int it = 0; it < max_iter; ++it) {
      const Quaternion<Scalar> p = point(s, t).quat();
      const Vector4<Scalar> r = p.coeffs() - x;
      Eigen::Matrix<Scalar, 4, 2> jac;
      jac.col(0) = (Quaternion<Scalar>::pure(c1) * p).coeffs();  // d/ds exp(s c1) exp(t c2)
      jac.col(1) = (p * Quaternion<Scalar>::pure(c2)).coeffs();  // d/dt
      const Eigen::Matrix<Scalar, 2, 1> step =
          (jac.transpose() * jac).ldlt().solve(jac.transpose() * r);
      s -= step[0];
      t -= step[1];
      if (step.norm() < Scalar(1e-14)) break;
    }
    return (point(s, t).coeffs() - x).norm();
  }
};

template <typename Scalar> struct TranslateResult {
  RotationSet<Scalar> set;
  bool exact = true;  // false: `set` is the translated minimal enclosing cap
};

template <typename Scalar> struct ProductResult {
  std::optional<RotationSet<Scalar>> exact;
  std::optional<SphericalCap<Scalar>> enclosing_cap;
  std::optional<ArcSurface<Scalar>> surface;
  std::vector<SphericalCap<Scalar>> operand_caps;  // per-operand minimal hulls, when computed
  std::vector<ProductNote> notes;

  bool has_note(ProductNote n) const {
    for (ProductNote m : notes)
      if (m == n) return true;
    return false;
  }
};

/// Scalar part of exp(s c1) exp(t c2) as a function of the two parameters;
/// its minimum over the parameter box determines the enclosing cap radius.
template <typename S> S surface_scalar(S s, S t, S c1_dot_c2) {
  return std::cos(s) * std::cos(t) - std::sin(s) * std::sin(t) * c1_dot_c2;
}

/// Corner value of the minimum, valid when delta1, delta2 <= pi/2.
template <typename S> S corner_min_scalar(S c1_dot_c2, S delta1, S delta2) {
  return std::cos(delta1) * std::cos(delta2) - std::sin(delta1) * std::sin(delta2) * std::abs(c1_dot_c2);
}

namespace detail {

// Golden-section argmin of f on [a, b] (unimodal locally around the start).
template <typename S, typename F> S golden_argmin(F f, S a, S b, S tol) {
  constexpr double invphi = 0.6180339887498949;
  S x1 = b - S(invphi) * (b - a), x2 = a + S(invphi) * (b - a);
  S f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      b = x2, x2 = x1, f2 = f1;
      x1 = b - S(invphi) * (b - a);
      f1 = f(x1);
    } else {
      a = x1, x1 = x2, f1 = f2;
      x2 = a + S(invphi) * (b - a);
      f2 = f(x2);
    }
  }
  return (a + b) / 2;
}

}  // namespace detail

/// Dense inclusive grid minimum of surface_scalar over the parameter box,
/// finished by coordinate-wise golden-section around the best cell.
template <typename S> S grid_min_scalar(S c1_dot_c2, S delta1, S delta2, int grid = 1024) {
  std::vector<S> cs(grid), ss(grid), ct(grid), st(grid);
  for (int i = 0; i < grid; ++i) {
    const S s = grid == 1 ? S(0) : -delta1 + S(2) * delta1 * S(i) / S(grid - 1);
    const S t = grid == 1 ? S(0) : -delta2 + S(2) * delta2 * S(i) / S(grid - 1);
    cs[i] = std::cos(s), ss[i] = std::sin(s);
    ct[i] = std::cos(t), st[i] = std::sin(t);
  }
  S best = S(2);
  int bi = 0, bj = 0;
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      const S v = cs[i] * ct[j] - ss[i] * st[j] * c1_dot_c2;
      if (v < best) best = v, bi = i, bj = j;
    }
  }
  const S h1 = grid == 1 ? S(0) : S(2) * delta1 / S(grid - 1);
  const S h2 = grid == 1 ? S(0) : S(2) * delta2 / S(grid - 1);
  S s = -delta1 + S(bi) * h1;
  S t = -delta2 + S(bj) * h2;
  for (int sweep = 0; sweep < 3; ++sweep) {
    s = detail::golden_argmin([&](S x) { return surface_scalar(x, t, c1_dot_c2); },
                              std::max(-delta1, s - h1), std::min(delta1, s + h1), S(1e-10));
    t = detail::golden_argmin([&](S y) { return surface_scalar(s, y, c1_dot_c2); },
                              std::max(-delta2, t - h2), std::min(delta2, t + h2), S(1e-10));
  }
  return std::min(best, surface_scalar(s, t, c1_dot_c2));
}

/// Exact translate of a set by a singleton on the given side when a closed
/// form exists (caps always; arcs along their own axis; singletons; +-1 on
/// axis caps). Otherwise the translated minimal enclosing cap, exact = false.
template <typename S>
TranslateResult<S> translate(const RotationSet<S>& set, const UnitQuaternion<S>& q, Side side) {
  const auto mul = [&](const UnitQuaternion<S>& c) { return side == Side::Left ? q * c : c * q; };
  return std::visit(
      [&](const auto& s) -> TranslateResult<S> {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Singleton<S>>) {
          return {RotationSet<S>(Singleton<S>(mul(s.value))), true};
        } else if constexpr (std::is_same_v<T, SphericalCap<S>>) {
          return {RotationSet<S>(SphericalCap<S>(mul(s.center), s.t)), true};
        } else if constexpr (std::is_same_v<T, FullSphere<S>>) {
          return {set, true};
        } else if constexpr (std::is_same_v<T, Arc<S>>) {
          // q = exp(psi c) on the arc's own circle shifts phi by psi (either side)
          const S off = (q.vec() - q.vec().dot(s.axis) * s.axis).norm();
          if (off <= S(1e-12)) {
            const S psi = std::atan2(q.vec().dot(s.axis), q.w());
            return {RotationSet<S>(Arc<S>(s.axis, s.phi + psi, s.delta)), true};
          }
          const SphericalCap<S> hull = min_enclosing_cap(set);
          return {RotationSet<S>(SphericalCap<S>(mul(hull.center), hull.t)), false};
        } else {  // AxisCap
          if (q.vec().norm() <= S(1e-12)) {
            if (q.w() > S(0)) return {set, true};
            // -S(c, phi, xi) = S(-c, pi - phi, xi)
            return {RotationSet<S>(AxisCap<S>(Vector3<S>(-s.axis), pi<S> - s.phi, s.xi)), true};
          }
          const SphericalCap<S> hull = min_enclosing_cap(set);
          return {RotationSet<S>(SphericalCap<S>(mul(hull.center), hull.t)), false};
        }
      },
      set);
}

/// U(U0, s) x U(V0, t) -> U(U0 V0, s + t), or all of S^3 once s + t >= pi.
template <typename S> RotationSet<S> cap_product(const SphericalCap<S>& a, const SphericalCap<S>& b) {
  const S sum = a.t + b.t;
  if (sum >= pi<S>) return FullSphere<S>{};
  return SphericalCap<S>(a.center * b.center, sum);
}

/// Same-axis arcs compose by adding angles: C(c, phi1+phi2, min(delta1+delta2, pi)).
template <typename S> Arc<S> arc_product_same_axis(const Arc<S>& a, const Arc<S>& b) {
  if ((a.axis - b.axis).norm() > S(1e-12)) throw DomainError("use arc_product_general");
  return Arc<S>(a.axis, a.phi + b.phi, std::min(a.delta + b.delta, pi<S>));
}

/// Arcs about distinct axes: a 2-surface with the smallest enclosing cap
/// U(exp(phi1 c1) exp(phi2 c2), arccos(r)), r the scalar-part minimum over the
/// parameter box. For delta1, delta2 <= pi/2 the minimum sits at a corner.
template <typename S> ProductResult<S> arc_product_general(const Arc<S>& a, const Arc<S>& b) {
  const S d = a.axis.dot(b.axis);
  if (std::abs(d) >= S(1) - S(1e-12)) throw DomainError("arc axes are parallel");

  ProductResult<S> out;
  out.surface = ArcSurface<S>{a.axis, b.axis, a.phi, b.phi, a.delta, b.delta};

  const bool corner_case = a.delta <= pi<S> / 2 && b.delta <= pi<S> / 2;
  const S r = corner_case ? corner_min_scalar(d, a.delta, b.delta) : grid_min_scalar(d, a.delta, b.delta);
  const UnitQuaternion<S> center = exp_pure(a.phi * a.axis) * exp_pure(b.phi * b.axis);
  out.enclosing_cap = SphericalCap<S>(center, safe_acos(r));

  const bool embedded = a.delta < pi<S> && b.delta < pi<S> && (a.delta < pi<S> / 2 || b.delta < pi<S> / 2);
  out.notes.push_back(embedded ? ProductNote::Embedded : ProductNote::ImmersedOnly);
  return out;
}

/// Enclosing-cap bound for products of axis caps: U(exp(phi1 c1) exp(phi2 c2), T)
/// with T the sum of the per-operand minimal cap radii t(phi, xi).
template <typename S> ProductResult<S> axiscap_bound(const AxisCap<S>& a, const AxisCap<S>& b) {
  const S t1 = axiscap_enclosing_radius(a.phi, a.xi);
  const S t2 = axiscap_enclosing_radius(b.phi, b.xi);
  const UnitQuaternion<S> ca = exp_pure(a.phi * a.axis);
  const UnitQuaternion<S> cb = exp_pure(b.phi * b.axis);

  ProductResult<S> out;
  out.operand_caps = {SphericalCap<S>(ca, t1), SphericalCap<S>(cb, t2)};
  const S total = t1 + t2;
  out.enclosing_cap = SphericalCap<S>(ca * cb, std::min(total, pi<S>));
  out.notes.push_back(ProductNote::BoundOnly);
  if (total >= pi<S>) out.notes.push_back(ProductNote::FullSphere);
  if (a.xi == S(0) && b.xi == S(0)) out.exact = RotationSet<S>(Singleton<S>(ca * cb));
  return out;
}

/// True iff the differential of (exp(phi1 m), exp(phi2 n)) -> product has
/// rank below 3, evaluated as the numerical rank of the span
/// Pi_m exp(phi2 n) + exp(phi1 m) Pi_n. Equivalent to m = +-n.
template <typename S, typename D1, typename D2>
bool rank_defect_locus(const AxisCap<S>& a, const AxisCap<S>& b, const Eigen::MatrixBase<D1>& m_in,
                       const Eigen::MatrixBase<D2>& n_in) {
  const Vector3<S> m = m_in, n = n_in;
  const UnitQuaternion<S> p = a.point(m), q = b.point(n);
  const Eigen::Matrix<S, 3, 2> vm = orthogonal_complement(Vector3<S>(m.normalized()));
  const Eigen::Matrix<S, 3, 2> vn = orthogonal_complement(Vector3<S>(n.normalized()));
  Matrix4<S> span;
  span.col(0) = (Quaternion<S>::pure(Vector3<S>(vm.col(0))) * q.quat()).coeffs();
  span.col(1) = (Quaternion<S>::pure(Vector3<S>(vm.col(1))) * q.quat()).coeffs();
  span.col(2) = (p.quat() * Quaternion<S>::pure(Vector3<S>(vn.col(0)))).coeffs();
  span.col(3) = (p.quat() * Quaternion<S>::pure(Vector3<S>(vn.col(1)))).coeffs();
  Eigen::JacobiSVD<Matrix4<S>> svd(span);
  const auto& sv = svd.singularValues();
  return sv[2] <= S(1e-9) * sv[0];
}

/// Minkowski product dispatch over the set family. Exact closed forms where
/// they exist; conservative enclosing-cap bounds (flagged BOUND_ONLY) for the
/// remaining combinations via per-operand minimal caps.
template <typename S> ProductResult<S> product(const RotationSet<S>& a, const RotationSet<S>& b) {
  ProductResult<S> out;

  const auto singleton_of = [](const RotationSet<S>& s) -> std::optional<UnitQuaternion<S>> {
    if (const auto* p = std::get_if<Singleton<S>>(&s)) return p->value;
    if (const auto* c = std::get_if<SphericalCap<S>>(&s); c && c->t == S(0)) return c->center;
    if (const auto* r = std::get_if<Arc<S>>(&s); r && r->delta == S(0)) return r->point(r->phi);
    if (const auto* x = std::get_if<AxisCap<S>>(&s); x && x->xi == S(0)) return x->point(x->axis);
    return std::nullopt;
  };

  if (std::holds_alternative<FullSphere<S>>(a) || std::holds_alternative<FullSphere<S>>(b)) {
    out.exact = RotationSet<S>(FullSphere<S>{});
    out.notes.push_back(ProductNote::FullSphere);
    return out;
  }

  if (auto qa = singleton_of(a)) {
    TranslateResult<S> tr = translate(b, *qa, Side::Left);
    if (tr.exact) {
      out.exact = tr.set;
      out.enclosing_cap = min_enclosing_cap(tr.set);
    } else {
      out.enclosing_cap = std::get<SphericalCap<S>>(tr.set);
      out.notes.push_back(ProductNote::NoClosedForm);
      out.notes.push_back(ProductNote::BoundOnly);
    }
    return out;
  }
  if (auto qb = singleton_of(b)) {
    TranslateResult<S> tr = translate(a, *qb, Side::Right);
    if (tr.exact) {
      out.exact = tr.set;
      out.enclosing_cap = min_enclosing_cap(tr.set);
    } else {
      out.enclosing_cap = std::get<SphericalCap<S>>(tr.set);
      out.notes.push_back(ProductNote::NoClosedForm);
      out.notes.push_back(ProductNote::BoundOnly);
    }
    return out;
  }

  if (const auto* ca = std::get_if<SphericalCap<S>>(&a)) {
    if (const auto* cb = std::get_if<SphericalCap<S>>(&b)) {
      RotationSet<S> r = cap_product(*ca, *cb);
      out.exact = r;
      if (const auto* cap = std::get_if<SphericalCap<S>>(&r))
        out.enclosing_cap = *cap;
      else
        out.notes.push_back(ProductNote::FullSphere);
      return out;
    }
  }

  if (const auto* ra = std::get_if<Arc<S>>(&a)) {
    if (const auto* rb = std::get_if<Arc<S>>(&b)) {
      if ((ra->axis - rb->axis).norm() <= S(1e-12)) {
        Arc<S> r = arc_product_same_axis(*ra, *rb);
        out.exact = RotationSet<S>(r);
        out.enclosing_cap = min_enclosing_cap(RotationSet<S>(r));
        return out;
      }
      return arc_product_general(*ra, *rb);
    }
  }

  if (const auto* xa = std::get_if<AxisCap<S>>(&a)) {
    if (const auto* xb = std::get_if<AxisCap<S>>(&b)) return axiscap_bound(*xa, *xb);
  }

  // Mixed pair without a closed form: bound by the product of the minimal hulls.
  const SphericalCap<S> ha = min_enclosing_cap(a), hb = min_enclosing_cap(b);
  RotationSet<S> r = cap_product(ha, hb);
  out.notes.push_back(ProductNote::BoundOnly);
  if (const auto* cap = std::get_if<SphericalCap<S>>(&r)) {
    out.enclosing_cap = *cap;
  } else {
    out.enclosing_cap = SphericalCap<S>(ha.center * hb.center, pi<S>);
    out.notes.push_back(ProductNote::FullSphere);
  }
  return out;
}

using ArcSurfaced = ArcSurface<double>;
using ProductResultd = ProductResult<double>;

}  // namespace qmink
