#pragma once

#include "qmink/sets.hpp"

namespace qmink {

/// Cayley transform Phi(q) = (q + 1)^-1 (q - 1), defined away from -1.
/// Restricted to S^3 it is the stereographic projection from -1.
template <typename S> Quaternion<S> cayley_phi(const Quaternion<S>& q) {
  const Quaternion<S> one = Quaternion<S>::identity();
  if ((q + one).norm() <= S(1e-12)) throw DomainError("pole of Cayley transform");
  return (q + one).inverse() * (q - one);
}

/// Inverse Cayley transform Psi(q) = (1 - q)^-1 (1 + q), defined away from 1.
template <typename S> Quaternion<S> cayley_psi(const Quaternion<S>& q) {
  const Quaternion<S> one = Quaternion<S>::identity();
  if ((one - q).norm() <= S(1e-12)) throw DomainError("pole of Cayley transform");
  return (one - q).inverse() * (one + q);
}

/// Stereographic projection of S^3 from -1: u -> vect(u) / (1 + scal(u)),
/// which is tan(theta/4) n for u = cos(theta/2) + sin(theta/2) n.
template <typename S> Vector3<S> stereo_project(const UnitQuaternion<S>& u) {
  if ((u.quat() + Quaternion<S>::identity()).norm() <= S(1e-12)) throw DomainError("maps to infinity");
  return u.vec() / (S(1) + u.w());
}

/// Hyperspherical coordinates of a unit quaternion:
/// (w, x, y, z) = (cos a, sin a cos b, sin a sin b cos g, sin a sin b sin g),
/// a, b in [0, pi], g in [0, 2 pi). At a in {0, pi} both b and g are free,
/// at b in {0, pi} g is free; free angles are reported as 0 and flagged.
template <typename Scalar> struct Hyperspherical {
  Scalar alpha = 0, beta = 0, gamma = 0;
  bool beta_free = false;
  bool gamma_free = false;
};

template <typename S> Hyperspherical<S> hyperspherical(const UnitQuaternion<S>& u) {
  Hyperspherical<S> h;
  h.alpha = safe_acos(u.w());
  const S sa = u.vec().norm();
  if (sa <= S(1e-14)) {
    h.beta_free = h.gamma_free = true;
    return h;
  }
  h.beta = safe_acos(u.x() / sa);
  const S sb = std::hypot(u.y(), u.z());
  if (sb <= S(1e-14) * sa) {
    h.gamma_free = true;
    return h;
  }
  h.gamma = std::atan2(u.z(), u.y());
  if (h.gamma < S(0)) h.gamma += S(2) * pi<S>;
  return h;
}

template <typename S> UnitQuaternion<S> from_hyperspherical(S alpha, S beta, S gamma) {
  const S sa = std::sin(alpha), sb = std::sin(beta);
  return UnitQuaternion<S>(Quaternion<S>(
      std::cos(alpha), Vector3<S>(sa * std::cos(beta), sa * sb * std::cos(gamma), sa * sb * std::sin(gamma))));
}

/// so(3) isomorphism: hat maps v to the matrix of w -> v x w.
template <typename Derived> Matrix3<typename Derived::Scalar> hat(const Eigen::MatrixBase<Derived>& v_in) {
  using S = typename Derived::Scalar;
  const Vector3<S> v = v_in;
  Matrix3<S> m;
  m << S(0), -v.z(), v.y(),
       v.z(), S(0), -v.x(),
      -v.y(), v.x(), S(0);
  return m;
}

template <typename Derived> Vector3<typename Derived::Scalar> vee(const Eigen::MatrixBase<Derived>& a_in) {
  using S = typename Derived::Scalar;
  const Matrix3<S> a = a_in;
  if ((a + a.transpose()).norm() > S(1e-9)) throw DomainError("matrix is not skew-symmetric");
  return Vector3<S>((a(2, 1) - a(1, 2)) / 2, (a(0, 2) - a(2, 0)) / 2, (a(1, 0) - a(0, 1)) / 2);
}

/// Rodrigues exponential: I + sin(theta) N + (1 - cos(theta)) N^2 for the
/// Euler vector v = theta n; series coefficients below 1e-8.
template <typename Derived> Matrix3<typename Derived::Scalar> exp_so3(const Eigen::MatrixBase<Derived>& v_in) {
  using S = typename Derived::Scalar;
  const Vector3<S> v = v_in;
  const S theta = v.norm();
  const Matrix3<S> a = hat(v);
  S k1, k2;  // sin(t)/t, (1-cos(t))/t^2
  if (theta < S(1e-8)) {
    k1 = S(1) - theta * theta / 6;
    k2 = S(0.5) - theta * theta / 24;
  } else {
    k1 = std::sin(theta) / theta;
    k2 = (S(1) - std::cos(theta)) / (theta * theta);
  }
  return Matrix3<S>(Matrix3<S>::Identity() + k1 * a + k2 * a * a);
}

template <typename Derived>
bool is_rotation(const Eigen::MatrixBase<Derived>& m_in, typename Derived::Scalar tol = 1e-8) {
  using S = typename Derived::Scalar;
  const Matrix3<S> m = m_in;
  return (m.transpose() * m - Matrix3<S>::Identity()).norm() <= tol && std::abs(m.determinant() - S(1)) <= tol;
}

/// Logarithm of a rotation matrix, theta n with theta in [0, pi]. The
/// arcsin-based formula is only valid up to pi/2, so the angle comes from the
/// trace; the axis from the skew part away from theta = pi, and from the
/// dominant column of (M + I)/2 near theta = pi.
template <typename Derived> Vector3<typename Derived::Scalar> log_so3(const Eigen::MatrixBase<Derived>& m_in) {
  using S = typename Derived::Scalar;
  const Matrix3<S> m = m_in;
  if (!is_rotation(m)) throw DomainError("matrix is not a rotation");
  const S c = clamp_unit((m.trace() - S(1)) / 2);  // cos(theta)
  const S theta = std::acos(c);
  const Vector3<S> skew = vee(Matrix3<S>(((m - m.transpose()) / 2).eval()));  // = sin(theta) n
  if (theta < S(1e-6)) return skew;
  if (theta < pi<S> - S(1e-4)) return Vector3<S>((theta / std::sin(theta)) * skew);
  // near pi: sym(M) = c I + (1 - c) n n^T recovers the axis without the
  // vanishing skew part, and asin of |skew| fixes the angle where arccos
  // of the trace loses digits
  const Matrix3<S> outer = ((m + m.transpose()) / 2 - c * Matrix3<S>::Identity()) / (S(1) - c);
  int k;
  outer.diagonal().maxCoeff(&k);
  Vector3<S> n = outer.col(k) / std::sqrt(std::max(outer(k, k), S(0)));
  if (n.dot(skew) < S(0)) n = -n;
  const S angle = pi<S> - std::asin(clamp_unit(skew.norm()));
  return Vector3<S>(angle * n.normalized());
}

/// Composition in the Euler-vector chart: the v with
/// exp_so3(v) = exp_so3(v1) exp_so3(v2), computed by axis-angle composition.
template <typename D1, typename D2>
Vector3<typename D1::Scalar> bch(const Eigen::MatrixBase<D1>& v1_in, const Eigen::MatrixBase<D2>& v2_in) {
  using S = typename D1::Scalar;
  const Vector3<S> v1 = v1_in, v2 = v2_in;
  const S t1 = v1.norm(), t2 = v2.norm();
  if (t1 < S(1e-14)) return v2;
  if (t2 < S(1e-14)) return v1;
  const AxisAngle<S> c = compose_axis_angle(Vector3<S>(v1 / t1), t1, Vector3<S>(v2 / t2), t2);
  if (c.degenerate) return Vector3<S>::Zero();
  return Vector3<S>(c.angle * c.axis);
}

/// Rotation matrix of a unit quaternion, routed through axis-angle so that a
/// single conversion convention exists.
template <typename S> Matrix3<S> to_rotation_matrix(const UnitQuaternion<S>& u) {
  const AxisAngle<S> aa = to_axis_angle(u);
  return exp_so3(Vector3<S>(aa.angle * aa.axis));
}

/// Image of a spherical cap under the Cayley chart: a ball, a half-space, the
/// complement of an open ball, a point, or all of R^3, classified by the
/// position of the pole -1 relative to the cap.
template <typename Scalar> struct ChartImage {
  enum class Kind { Ball, HalfSpace, BallComplement, Point, AllSpace };
  Kind kind = Kind::AllSpace;
  Vector3<Scalar> center = Vector3<Scalar>::Zero();  // ball/complement center, or plane normal
  Scalar radius = Scalar(0);                         // ball/complement radius, or plane offset
  Vector3<Scalar> point = Vector3<Scalar>::Zero();   // Kind::Point payload
};

namespace detail {

// Circumsphere of four points in R^3 (they are affinely independent for a
// conformal image of a round 2-sphere).
template <typename S> void circumsphere(const Vector3<S> p[4], Vector3<S>& center, S& radius) {
  Matrix3<S> lhs;
  Vector3<S> rhs;
  for (int i = 0; i < 3; ++i) {
    lhs.row(i) = S(2) * (p[i + 1] - p[0]).transpose();
    rhs[i] = p[i + 1].squaredNorm() - p[0].squaredNorm();
  }
  center = lhs.fullPivLu().solve(rhs);
  radius = (p[0] - center).norm();
}

}  // namespace detail

template <typename S> ChartImage<S> cap_image_under_phi(const SphericalCap<S>& cap) {
  ChartImage<S> img;
  if (cap.t >= pi<S>) {
    img.kind = ChartImage<S>::Kind::AllSpace;
    return img;
  }
  if (cap.t == S(0)) {
    img.kind = ChartImage<S>::Kind::Point;
    img.point = stereo_project(cap.center);  // throws for the cap {-1}
    return img;
  }

  // -1 in the cap iff <-1, U0> >= cos t
  const S g = -cap.center.w() - std::cos(cap.t);

  // boundary 2-sphere samples cos(t) U0 + sin(t) e, e in the 3-space normal to U0
  const Eigen::Matrix<S, 4, 3> basis = orthogonal_complement(Vector4<S>(cap.center.coeffs()));
  const auto boundary_point = [&](const Vector3<S>& dir) {
    const Vector4<S> e = basis * dir.normalized();
    return UnitQuaternion<S>(Quaternion<S>(Vector4<S>(std::cos(cap.t) * cap.center.coeffs() + std::sin(cap.t) * e)));
  };

  if (std::abs(g) <= S(1e-12)) {
    // -1 on the boundary: image is a half-space; fit a plane through three
    // boundary images picked away from the pole direction
    const Vector4<S> pole_e = (Vector4<S>(-Quaternion<S>::identity().coeffs()) -
                               std::cos(cap.t) * cap.center.coeffs()) /
                              std::sin(cap.t);
    const Vector3<S> pole_dir = basis.transpose() * pole_e;
    const Eigen::Matrix<S, 3, 2> perp = orthogonal_complement(Vector3<S>(pole_dir.normalized()));
    const Vector3<S> d0 = perp.col(0), d1 = perp.col(1);
    const Vector3<S> p0 = stereo_project(boundary_point(d0));
    const Vector3<S> p1 = stereo_project(boundary_point(d1));
    const Vector3<S> p2 = stereo_project(boundary_point(Vector3<S>(-d0)));
    Vector3<S> normal = (p1 - p0).cross(p2 - p0).normalized();
    S offset = normal.dot(p0);
    const Vector3<S> inside = stereo_project(cap.center);
    if (normal.dot(inside) < offset) {
      normal = -normal;
      offset = -offset;
    }
    img.kind = ChartImage<S>::Kind::HalfSpace;
    img.center = normal;
    img.radius = offset;
    return img;
  }

  // four well-separated boundary directions -> circumsphere of their images
  Vector3<S> dirs[4] = {Vector3<S>(1, 0, 0), Vector3<S>(0, 1, 0), Vector3<S>(0, 0, 1),
                        Vector3<S>(-1, -1, -1).normalized()};
  Vector3<S> proj[4];
  for (int i = 0; i < 4; ++i) proj[i] = stereo_project(boundary_point(dirs[i]));
  Vector3<S> center;
  S radius;
  detail::circumsphere(proj, center, radius);
  img.center = center;
  img.radius = radius;
  img.kind = g < S(0) ? ChartImage<S>::Kind::Ball : ChartImage<S>::Kind::BallComplement;
  return img;
}

}  // namespace qmink
