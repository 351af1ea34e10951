#pragma once

#include <optional>
#include <string>

#include "qmink/product.hpp"

namespace qmink {

/// Directional derivative of the product map T(p, q) = p q: in direction
/// (v, 0) it is v q, in direction (0, v) it is p v.
template <typename S>
Quaternion<S> product_differential(const Quaternion<S>& p, const Quaternion<S>& q, Side dir, const Quaternion<S>& v) {
  return dir == Side::Left ? v * q : p * v;
}

/// A product u v is certified interior to U x V as soon as either factor is
/// interior to its operand.
inline bool interior_rule(bool u_interior, bool v_interior) { return u_interior || v_interior; }

/// Necessary condition for u v on the product boundary: the planes
/// u* T_u(dU) and T_v(dV) v* must coincide. False certifies u v is not a
/// boundary point of the product.
template <typename S>
bool necessary_condition(const RotationSet<S>& U, const UnitQuaternion<S>& u, const RotationSet<S>& V,
                         const UnitQuaternion<S>& v, S tol = S(kPlaneTol)) {
  if (!on_boundary(U, u, S(kDefaultTol)) || !on_boundary(V, v, S(kDefaultTol)))
    throw DomainError("points must lie on the operand boundaries");
  const TangentPlane4<S> pu = tangent_plane(U, u).left_multiplied(u.conjugate());
  const TangentPlane4<S> pv = tangent_plane(V, v).right_multiplied(v.conjugate());
  return planes_equal(pu, pv, tol);
}

/// Two caps whose boundaries meet at 1 produce 1 on their product boundary
/// exactly when both centers sit on a common axis: U0 = exp(s0 c),
/// V0 = exp(t0 c). Requires 0 < s0 <= t0 < pi/2 and scal(U0) = cos s0,
/// scal(V0) = cos t0.
template <typename S>
bool cap_product_boundary_at_one(const UnitQuaternion<S>& u0, S s0, const UnitQuaternion<S>& v0, S t0) {
  if (!(S(0) < s0 && s0 <= t0 && t0 < pi<S> / 2)) throw DomainError("need 0 < s0 <= t0 < pi/2");
  if (std::abs(u0.w() - std::cos(s0)) > S(kDefaultTol) || std::abs(v0.w() - std::cos(t0)) > S(kDefaultTol))
    throw DomainError("1 must lie on both cap boundaries");
  const Vector3<S> a = u0.vec().normalized();
  const Vector3<S> b = v0.vec().normalized();
  return (a - b).norm() <= S(kDefaultTol);
}

template <typename Scalar> struct BoundaryVerdict {
  enum class Status { CertifiedBoundary, CertifiedInterior, NecessaryFailed, Inconclusive };
  Status status = Status::Inconclusive;
  Scalar max_slack = Scalar(0);
  std::optional<Quaternion<Scalar>> witness;
  std::string detail;
};

inline const char* to_string(typename BoundaryVerdict<double>::Status s) {
  using St = BoundaryVerdict<double>::Status;
  switch (s) {
    case St::CertifiedBoundary: return "CertifiedBoundary";
    case St::CertifiedInterior: return "CertifiedInterior";
    case St::NecessaryFailed: return "NecessaryFailed";
    case St::Inconclusive: return "Inconclusive";
  }
  return "?";
}

/// Union of two spherical caps; the one boolean combination needed by the
/// boundary-exclusion test and its counterexamples.
template <typename Scalar> struct TwoCapUnion {
  SphericalCap<Scalar> first, second;
};

template <typename S> bool cap_includes(const SphericalCap<S>& inner_cap, const SphericalCap<S>& outer_cap,
                                        S tol = S(kDefaultTol)) {
  const S d = safe_acos(inner(inner_cap.center.quat(), outer_cap.center.quat()));
  return d + inner_cap.t <= outer_cap.t + tol;
}

namespace detail {

// Deterministic interior + boundary ladder on a cap: golden-spiral directions
// on the 2-sphere of geodesic directions, stratified radii with the sin^2
// surface density.
template <typename S, typename Fn> void cap_ladder(const SphericalCap<S>& cap, long n, Fn&& emit) {
  const Eigen::Matrix<S, 4, 3> basis = orthogonal_complement(Vector4<S>(cap.center.coeffs()));
  constexpr double ga = 2.399963229728653;  // golden angle
  const long n_boundary = n / 2;
  for (long i = 0; i < n; ++i) {
    const S z = S(1) - S(2) * (S(i) + S(0.5)) / S(n);
    const S r = std::sqrt(std::max(S(0), S(1) - z * z));
    const S az = S(ga) * S(i);
    const Vector3<S> dir(r * std::cos(az), r * std::sin(az), z);
    S alpha;
    if (i < n_boundary) {
      alpha = cap.t;
    } else {
      // stratified quantile of the sin^2 density via bisection of
      // F(a) = (a - sin a cos a) / (t - sin t cos t)
      const S q = (S(i - n_boundary) + S(0.5)) / S(n - n_boundary);
      const S total = cap.t - std::sin(cap.t) * std::cos(cap.t);
      S lo = 0, hi = cap.t;
      for (int it = 0; it < 60; ++it) {
        const S mid = (lo + hi) / 2;
        ((mid - std::sin(mid) * std::cos(mid)) / total < q ? lo : hi) = mid;
      }
      alpha = (lo + hi) / 2;
    }
    const Vector4<S> e = basis * dir;
    emit(UnitQuaternion<S>(
        Quaternion<S>(Vector4<S>(std::cos(alpha) * cap.center.coeffs() + std::sin(alpha) * e))));
  }
}

template <typename S, typename Fn>
void set_ladder(const RotationSet<S>& set, long n, Fn&& emit) {
  if (const auto* cap = std::get_if<SphericalCap<S>>(&set)) {
    if (cap->t > S(0)) {
      cap_ladder(*cap, n, emit);
      return;
    }
    for (long i = 0; i < n; ++i) emit(cap->center);
    return;
  }
  if (const auto* s = std::get_if<Singleton<S>>(&set)) {
    for (long i = 0; i < n; ++i) emit(s->value);
    return;
  }
  if (const auto* a = std::get_if<Arc<S>>(&set)) {
    if (a->delta < pi<S> && n >= 2) {
      emit(a->point(a->phi - a->delta));
      emit(a->point(a->phi + a->delta));
    }
    for (long i = 0; i < n; ++i) {
      const S s = a->phi - a->delta + S(2) * a->delta * (S(i) + S(0.5)) / S(n);
      emit(a->point(s));
    }
    return;
  }
  if (const auto* x = std::get_if<AxisCap<S>>(&set)) {
    const Eigen::Matrix<S, 3, 2> e = orthogonal_complement(x->axis);
    constexpr double ga = 2.399963229728653;
    const long n_boundary = n / 2;
    for (long i = 0; i < n; ++i) {
      const S q = i < n_boundary ? S(1) : (S(i - n_boundary) + S(0.5)) / S(n - n_boundary);
      const S z = S(1) - q * (S(1) - std::cos(x->xi));  // boundary at q = 1
      const S r = std::sqrt(std::max(S(0), S(1) - z * z));
      const S az = S(ga) * S(i);
      const Vector3<S> m = z * x->axis + r * (std::cos(az) * e.col(0) + std::sin(az) * e.col(1));
      emit(x->point(m.normalized()));
    }
    return;
  }
  throw DomainError("cannot enumerate points of S^3");
}

}  // namespace detail

/// Sufficient condition: a cap U(P, s), s < pi/2, with 1 on its boundary and
/// u* U subset of U(P, s) superset of V v* certifies u v on the product
/// boundary. Inclusion is checked on a deterministic ladder of n points per
/// operand; the worst membership slack and any witness are reported.
template <typename S>
BoundaryVerdict<S> sufficient_condition(const std::vector<RotationSet<S>>& U_parts, const UnitQuaternion<S>& u,
                                        const std::vector<RotationSet<S>>& V_parts, const UnitQuaternion<S>& v,
                                        const UnitQuaternion<S>& P, S s, long n = 10000) {
  if (!(S(0) < s && s < pi<S> / 2)) throw DomainError("cap radius must lie in (0, pi/2)");
  if (std::abs(P.w() - std::cos(s)) > S(kDefaultTol)) throw DomainError("1 must lie on the cap boundary");

  BoundaryVerdict<S> verdict;
  const S cos_s = std::cos(s);
  S worst = -S(2);  // slack = cos s - <x, P>, positive = violation
  std::optional<Quaternion<S>> witness;

  const auto check = [&](const Quaternion<S>& x) {
    const S slack = cos_s - inner(x, P.quat());
    if (slack > worst) {
      worst = slack;
      if (slack > S(kDefaultTol)) witness = x;
    }
  };
  const long per_u = std::max<long>(1, n / std::max<size_t>(1, U_parts.size()));
  for (const auto& part : U_parts)
    detail::set_ladder(part, per_u, [&](const UnitQuaternion<S>& x) { check(u.conjugate().quat() * x.quat()); });
  const long per_v = std::max<long>(1, n / std::max<size_t>(1, V_parts.size()));
  for (const auto& part : V_parts)
    detail::set_ladder(part, per_v, [&](const UnitQuaternion<S>& x) { check(x.quat() * v.conjugate().quat()); });

  verdict.max_slack = worst;
  if (witness) {
    verdict.status = BoundaryVerdict<S>::Status::Inconclusive;
    verdict.witness = witness;
    verdict.detail = "sampled point escapes the certifying cap";
  } else {
    verdict.status = BoundaryVerdict<S>::Status::CertifiedBoundary;
    verdict.detail = "u* U and V v* verified inside the certifying cap";
  }
  return verdict;
}

template <typename S>
BoundaryVerdict<S> sufficient_condition(const RotationSet<S>& U, const UnitQuaternion<S>& u, const RotationSet<S>& V,
                                        const UnitQuaternion<S>& v, const UnitQuaternion<S>& P, S s,
                                        long n = 10000) {
  return sufficient_condition(std::vector<RotationSet<S>>{U}, u, std::vector<RotationSet<S>>{V}, v, P, s, n);
}

/// Two incomparable caps inside U, both tangent to its boundary at u, exclude
/// every product u v (and v u) from the product boundary, for any tame V.
/// Verifies the geometric premises numerically and throws when they fail.
template <typename S> bool excluded_from_product_boundary(const TwoCapUnion<S>& U, const UnitQuaternion<S>& u) {
  const RotationSet<S> a{U.first}, b{U.second};
  if (!on_boundary(a, u, S(kDefaultTol)) || !on_boundary(b, u, S(kDefaultTol)))
    throw DomainError("point must lie on both cap boundaries");
  if (cap_includes(U.first, U.second) || cap_includes(U.second, U.first))
    throw DomainError("caps must be incomparable");
  if (!planes_equal(tangent_plane(a, u), tangent_plane(b, u), S(kPlaneTol)))
    throw DomainError("caps must be tangent at the point");
  return true;
}

/// Interior of a set in the topology of S^3: only caps with positive radius
/// and the full sphere have interior points; arcs and axis caps are
/// lower-dimensional.
template <typename S>
bool s3_interior_point(const RotationSet<S>& set, const UnitQuaternion<S>& u, S tol = S(kDefaultTol)) {
  if (std::holds_alternative<FullSphere<S>>(set)) return true;
  if (const auto* cap = std::get_if<SphericalCap<S>>(&set))
    return cap->t > S(0) && contains(set, u, tol) && !on_boundary(set, u, tol);
  return false;
}

/// Convenience classifier combining the interior rule, the necessary
/// condition and (when a candidate cap is supplied) the sufficient condition.
template <typename S>
BoundaryVerdict<S> classify_product_point(const RotationSet<S>& U, const UnitQuaternion<S>& u,
                                          const RotationSet<S>& V, const UnitQuaternion<S>& v,
                                          const std::optional<UnitQuaternion<S>>& P = std::nullopt,
                                          S s = S(0), long n = 10000) {
  BoundaryVerdict<S> verdict;
  if (interior_rule(s3_interior_point(U, u), s3_interior_point(V, v))) {
    verdict.status = BoundaryVerdict<S>::Status::CertifiedInterior;
    verdict.detail = "an operand point is interior";
    return verdict;
  }
  const auto tame = [](const RotationSet<S>& set) {
    return std::holds_alternative<SphericalCap<S>>(set) || std::holds_alternative<AxisCap<S>>(set);
  };
  if (tame(U) && tame(V) && on_boundary(U, u, S(kDefaultTol)) && on_boundary(V, v, S(kDefaultTol)) &&
      !necessary_condition(U, u, V, v)) {
    verdict.status = BoundaryVerdict<S>::Status::NecessaryFailed;
    verdict.detail = "tangent planes do not match";
    return verdict;
  }
  if (P) return sufficient_condition(U, u, V, v, *P, s, n);
  verdict.detail = "no certifying cap supplied";
  return verdict;
}

using BoundaryVerdictd = BoundaryVerdict<double>;
using TwoCapUniond = TwoCapUnion<double>;

}  // namespace qmink
