#pragma once

#include <variant>

#include "qmink/quat.hpp"

namespace qmink {

/// Spherical cap U(U0, t) = { u in S^3 : <u, U0> >= cos t }, t in [0, pi].
template <typename Scalar> struct SphericalCap {
  UnitQuaternion<Scalar> center;
  Scalar t = Scalar(0);

  SphericalCap() = default;
  SphericalCap(const UnitQuaternion<Scalar>& center_, Scalar t_) : center(center_), t(t_) {
    if (t < Scalar(0) && t > Scalar(-1e-12)) t = Scalar(0);
    if (t > pi<Scalar> && t < pi<Scalar> + Scalar(1e-12)) t = pi<Scalar>;
    if (t < Scalar(0) || t > pi<Scalar>) throw DomainError("cap radius outside [0, pi]");
  }

  /// Chord radius of the cutting 4-ball, rho = 2 sin(t/2); derived, never stored.
  Scalar rho() const { return Scalar(2) * std::sin(t / 2); }
};

/// Circular arc C(c, phi, delta) = { exp(s c) : |s - phi| <= delta } of the
/// great circle through 1 and c. The stored axis has its first component of
/// magnitude above 1e-12 positive (C(-c, phi, delta) = C(c, -phi, delta)),
/// which makes same-axis detection a plain comparison.
template <typename Scalar> struct Arc {
  Vector3<Scalar> axis = Vector3<Scalar>::UnitX();
  Scalar phi = Scalar(0);
  Scalar delta = Scalar(0);

  Arc() = default;
  Arc(const Vector3<Scalar>& axis_, Scalar phi_, Scalar delta_)
      : axis(require_unit(axis_, "arc axis is not unit")), phi(phi_), delta(delta_) {
    if (delta < Scalar(0) && delta > Scalar(-1e-12)) delta = Scalar(0);
    if (delta > pi<Scalar> && delta < pi<Scalar> + Scalar(1e-12)) delta = pi<Scalar>;
    if (delta < Scalar(0) || delta > pi<Scalar>) throw DomainError("arc half-width outside [0, pi]");
    for (int i = 0; i < 3; ++i) {
      if (std::abs(axis[i]) <= Scalar(1e-12)) continue;
      if (axis[i] < Scalar(0)) {
        axis = -axis;
        phi = -phi;
      }
      break;
    }
  }

  UnitQuaternion<Scalar> point(Scalar s) const { return exp_pure(s * axis); }
};

/// Axis cone cap S(c, phi, xi) = { cos phi + sin phi m : <m, c> >= cos xi },
/// phi in (0, pi): rotations with fixed angle 2*phi and axis within xi of c.
template <typename Scalar> struct AxisCap {
  Vector3<Scalar> axis = Vector3<Scalar>::UnitX();
  Scalar phi = pi<Scalar> / 2;
  Scalar xi = Scalar(0);

  AxisCap() = default;
  AxisCap(const Vector3<Scalar>& axis_, Scalar phi_, Scalar xi_)
      : axis(require_unit(axis_, "axis-cap axis is not unit")), phi(phi_), xi(xi_) {
    if (phi <= Scalar(0) || phi >= pi<Scalar>) throw DomainError("axis-cap phi outside (0, pi)");
    if (xi < Scalar(0) && xi > Scalar(-1e-12)) xi = Scalar(0);
    if (xi > pi<Scalar> && xi < pi<Scalar> + Scalar(1e-12)) xi = pi<Scalar>;
    if (xi < Scalar(0) || xi > pi<Scalar>) throw DomainError("axis-cap xi outside [0, pi]");
  }

  UnitQuaternion<Scalar> point(const Vector3<Scalar>& m) const {
    return UnitQuaternion<Scalar>(Quaternion<Scalar>(std::cos(phi), std::sin(phi) * m));
  }
};

template <typename Scalar> struct Singleton {
  UnitQuaternion<Scalar> value;
  Singleton() = default;
  explicit Singleton(const UnitQuaternion<Scalar>& v) : value(v) {}
};

template <typename Scalar> struct FullSphere {};

template <typename Scalar>
using RotationSet =
    std::variant<Singleton<Scalar>, SphericalCap<Scalar>, Arc<Scalar>, AxisCap<Scalar>, FullSphere<Scalar>>;

namespace detail {

// Signed circle parameter of u on the great circle span{1, c}: u ~ exp(s c).
template <typename S> S arc_parameter(const Arc<S>& a, const UnitQuaternion<S>& u) {
  return std::atan2(u.vec().dot(a.axis), u.w());
}

// Distance of u from the great circle plane span{1, c}.
template <typename S> S arc_off_circle(const Arc<S>& a, const UnitQuaternion<S>& u) {
  return (u.vec() - u.vec().dot(a.axis) * a.axis).norm();
}

}  // namespace detail

template <typename S> bool contains(const RotationSet<S>& set, const UnitQuaternion<S>& u, S tol = S(kDefaultTol)) {
  return std::visit(
      [&](const auto& s) -> bool {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Singleton<S>>) {
          return inner(u.quat(), s.value.quat()) >= S(1) - tol;
        } else if constexpr (std::is_same_v<T, SphericalCap<S>>) {
          return inner(u.quat(), s.center.quat()) >= std::cos(s.t) - tol;
        } else if constexpr (std::is_same_v<T, Arc<S>>) {
          if (detail::arc_off_circle(s, u) > tol) return false;
          const S d = std::abs(wrap_angle(detail::arc_parameter(s, u) - s.phi));
          return d <= s.delta + tol;
        } else if constexpr (std::is_same_v<T, AxisCap<S>>) {
          if (std::abs(u.w() - std::cos(s.phi)) > tol) return false;
          const S vn = u.vec().norm();
          if (vn <= S(1e-15)) return false;
          return u.vec().dot(s.axis) / vn >= std::cos(s.xi) - tol;
        } else {
          return true;  // FullSphere
        }
      },
      set);
}

/// Boundary test: caps use the S^3 boundary 2-sphere, axis caps the circle
/// boundary within their own 2-sphere, arcs with delta < pi their endpoints.
template <typename S>
bool on_boundary(const RotationSet<S>& set, const UnitQuaternion<S>& u, S tol = S(kDefaultTol)) {
  return std::visit(
      [&](const auto& s) -> bool {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Singleton<S>>) {
          throw DomainError("singleton has no boundary 2-surface");
        } else if constexpr (std::is_same_v<T, SphericalCap<S>>) {
          return std::abs(inner(u.quat(), s.center.quat()) - std::cos(s.t)) <= tol;
        } else if constexpr (std::is_same_v<T, Arc<S>>) {
          if (s.delta >= pi<S>) return false;  // full circle: no endpoints
          if (detail::arc_off_circle(s, u) > tol) return false;
          const S d = std::abs(wrap_angle(detail::arc_parameter(s, u) - s.phi));
          return std::abs(d - s.delta) <= tol;
        } else if constexpr (std::is_same_v<T, AxisCap<S>>) {
          if (std::abs(u.w() - std::cos(s.phi)) > tol) return false;
          const S vn = u.vec().norm();
          if (vn <= S(1e-15)) return false;
          return std::abs(u.vec().dot(s.axis) / vn - std::cos(s.xi)) <= tol;
        } else {
          throw DomainError("S^3 has empty boundary");
        }
      },
      set);
}

/// Oriented 2-plane in R^4 tangent to a boundary 2-surface at a point of S^3.
template <typename Scalar> struct TangentPlane4 {
  UnitQuaternion<Scalar> base;
  Eigen::Matrix<Scalar, 4, 2> frame;  // orthonormal, orthogonal to base

  Matrix4<Scalar> projector() const { return frame * frame.transpose(); }

  /// Image under left multiplication: q * plane.
  TangentPlane4 left_multiplied(const UnitQuaternion<Scalar>& q) const {
    return transformed(q, true);
  }
  /// Image under right multiplication: plane * q.
  TangentPlane4 right_multiplied(const UnitQuaternion<Scalar>& q) const {
    return transformed(q, false);
  }

 private:
  TangentPlane4 transformed(const UnitQuaternion<Scalar>& q, bool left) const {
    TangentPlane4 out;
    out.base = left ? q * base : base * q;
    for (int k = 0; k < 2; ++k) {
      const Quaternion<Scalar> f(Vector4<Scalar>(frame.col(k)));
      out.frame.col(k) = (left ? q.quat() * f : f * q.quat()).coeffs();
    }
    return out;
  }
};

/// Basis-independent 2-plane equality via orthogonal projectors.
template <typename S>
bool planes_equal(const TangentPlane4<S>& a, const TangentPlane4<S>& b, S tol = S(kPlaneTol)) {
  return (a.projector() - b.projector()).norm() <= tol;
}

/// Tangent plane of the boundary 2-surface at a boundary point u. Caps: the
/// orthogonal complement of span{u, U0}. Axis caps: the pure vectors
/// orthogonal to the rotation axis m of u (the tangent plane of the ambient
/// 2-sphere of fixed scalar part).
template <typename S> TangentPlane4<S> tangent_plane(const RotationSet<S>& set, const UnitQuaternion<S>& u) {
  if (!on_boundary(set, u, S(kDefaultTol))) throw DomainError("point is not on the set boundary");
  return std::visit(
      [&](const auto& s) -> TangentPlane4<S> {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, SphericalCap<S>>) {
          if (s.t <= S(1e-9) || s.t >= pi<S> - S(1e-9))
            throw DomainError("degenerate cap has no tangent plane");
          Eigen::Matrix<S, 4, 2> span;
          span.col(0) = u.coeffs();
          span.col(1) = s.center.coeffs();
          Eigen::HouseholderQR<Eigen::Matrix<S, 4, 2>> qr(span);
          Matrix4<S> q = qr.householderQ();
          TangentPlane4<S> out;
          out.base = u;
          out.frame = q.template rightCols<2>();
          return out;
        } else if constexpr (std::is_same_v<T, AxisCap<S>>) {
          const Vector3<S> m = u.vec().normalized();
          const Eigen::Matrix<S, 3, 2> e = orthogonal_complement(m);
          TangentPlane4<S> out;
          out.base = u;
          out.frame.setZero();
          out.frame.template block<3, 2>(1, 0) = e;
          return out;
        } else {
          throw DomainError("set has no 2-dimensional boundary");
        }
      },
      set);
}

/// Smallest spherical cap containing the set, used for conservative bounds.
/// Arcs: U(exp(phi c), delta) since <exp(s c), exp(phi c)> = cos(s - phi).
/// Axis caps: U(exp(phi c), t(phi, xi)) with t = arccos(cos^2 phi + sin^2 phi cos xi).
template <typename S> S axiscap_enclosing_radius(S phi, S xi) {
  const S c = std::cos(phi), s = std::sin(phi);
  return safe_acos(c * c + s * s * std::cos(xi));
}

template <typename S> SphericalCap<S> min_enclosing_cap(const RotationSet<S>& set) {
  return std::visit(
      [&](const auto& s) -> SphericalCap<S> {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Singleton<S>>) {
          return SphericalCap<S>(s.value, S(0));
        } else if constexpr (std::is_same_v<T, SphericalCap<S>>) {
          return s;
        } else if constexpr (std::is_same_v<T, Arc<S>>) {
          return SphericalCap<S>(exp_pure(s.phi * s.axis), s.delta);
        } else if constexpr (std::is_same_v<T, AxisCap<S>>) {
          return SphericalCap<S>(exp_pure(s.phi * s.axis), axiscap_enclosing_radius(s.phi, s.xi));
        } else {
          return SphericalCap<S>(UnitQuaternion<S>::identity(), pi<S>);
        }
      },
      set);
}

using SphericalCapd = SphericalCap<double>;
using Arcd = Arc<double>;
using AxisCapd = AxisCap<double>;
using Singletond = Singleton<double>;
using FullSphered = FullSphere<double>;
using RotationSetd = RotationSet<double>;
using TangentPlane4d = TangentPlane4<double>;

}  // namespace qmink
