#pragma once

#include <cmath>

#include "qmink/common.hpp"

namespace qmink {

/// Quaternion w + x i + y j + z k over H, stored as an R^4 coefficient vector
/// (w, x, y, z). Values are immutable after construction; all operations are
/// pure functions.
template <typename Scalar> class Quaternion {
 public:
  Quaternion() : c_(Vector4<Scalar>::Zero()) {}
  Quaternion(Scalar w, Scalar x, Scalar y, Scalar z) : c_(w, x, y, z) {}
  Quaternion(Scalar w, const Vector3<Scalar>& v) : c_(w, v.x(), v.y(), v.z()) {}
  explicit Quaternion(const Vector4<Scalar>& coeffs) : c_(coeffs) {}

  static Quaternion identity() { return Quaternion(Scalar(1), Scalar(0), Scalar(0), Scalar(0)); }
  static Quaternion pure(const Vector3<Scalar>& v) { return Quaternion(Scalar(0), v); }

  Scalar w() const { return c_[0]; }
  Scalar x() const { return c_[1]; }
  Scalar y() const { return c_[2]; }
  Scalar z() const { return c_[3]; }
  Vector3<Scalar> vec() const { return c_.template tail<3>(); }
  const Vector4<Scalar>& coeffs() const { return c_; }

  Scalar squaredNorm() const { return c_.squaredNorm(); }
  Scalar norm() const { return c_.norm(); }

  Quaternion conjugate() const { return Quaternion(w(), -vec()); }

  Quaternion inverse() const {
    const Scalar n2 = squaredNorm();
    if (n2 <= Scalar(0)) throw DomainError("zero quaternion has no inverse");
    return Quaternion(conjugate().coeffs() / n2);
  }

  friend Quaternion operator+(const Quaternion& a, const Quaternion& b) {
    return Quaternion(Vector4<Scalar>(a.c_ + b.c_));
  }
  friend Quaternion operator-(const Quaternion& a, const Quaternion& b) {
    return Quaternion(Vector4<Scalar>(a.c_ - b.c_));
  }
  friend Quaternion operator-(const Quaternion& a) { return Quaternion(Vector4<Scalar>(-a.c_)); }
  friend Quaternion operator*(Scalar s, const Quaternion& a) { return Quaternion(Vector4<Scalar>(s * a.c_)); }
  friend Quaternion operator*(const Quaternion& a, Scalar s) { return s * a; }
  friend Quaternion operator/(const Quaternion& a, Scalar s) { return Quaternion(Vector4<Scalar>(a.c_ / s)); }

  // Product in scalar-vector form: ab - <a,b> + a b_vec + b a_vec + a_vec x b_vec.
  friend Quaternion operator*(const Quaternion& a, const Quaternion& b) {
    const Scalar w = a.w() * b.w() - a.vec().dot(b.vec());
    const Vector3<Scalar> v = a.w() * b.vec() + b.w() * a.vec() + a.vec().cross(b.vec());
    return Quaternion(w, v);
  }

 private:
  Vector4<Scalar> c_;
};

template <typename S> Quaternion<S> conj(const Quaternion<S>& a) { return a.conjugate(); }

/// R^4 inner product <a,b> = ab + <a_vec, b_vec> = scal(a b*).
template <typename S> S inner(const Quaternion<S>& a, const Quaternion<S>& b) {
  return a.coeffs().dot(b.coeffs());
}

template <typename S> S scal(const Quaternion<S>& a) { return a.w(); }
template <typename S> Vector3<S> vect(const Quaternion<S>& a) { return a.vec(); }

/// Unit quaternion: |q| = 1 within 1e-12 after construction. Construction
/// renormalizes deviations below 1e-9 and rejects anything larger.
template <typename Scalar> class UnitQuaternion : public Quaternion<Scalar> {
 public:
  UnitQuaternion() : Quaternion<Scalar>(Quaternion<Scalar>::identity()) {}

  explicit UnitQuaternion(const Quaternion<Scalar>& q) : Quaternion<Scalar>(normalized_or_throw(q)) {}
  UnitQuaternion(Scalar w, Scalar x, Scalar y, Scalar z) : UnitQuaternion(Quaternion<Scalar>(w, x, y, z)) {}

  static UnitQuaternion identity() { return UnitQuaternion(); }

  const Quaternion<Scalar>& quat() const { return *this; }

  UnitQuaternion conjugate() const { return UnitQuaternion(Quaternion<Scalar>::conjugate()); }
  UnitQuaternion inverse() const { return conjugate(); }

  friend UnitQuaternion operator*(const UnitQuaternion& a, const UnitQuaternion& b) {
    return UnitQuaternion(static_cast<const Quaternion<Scalar>&>(a) * static_cast<const Quaternion<Scalar>&>(b));
  }
  friend UnitQuaternion operator-(const UnitQuaternion& a) {
    return UnitQuaternion(-static_cast<const Quaternion<Scalar>&>(a));
  }

 private:
  static Quaternion<Scalar> normalized_or_throw(const Quaternion<Scalar>& q) {
    const Scalar n = q.norm();
    if (std::abs(n - Scalar(1)) > Scalar(kNormalizeTol)) throw DomainError("quaternion is not unit");
    return q / n;
  }
};

/// cos(theta/2) + sin(theta/2) n, the rotation through theta about unit n.
template <typename Derived>
UnitQuaternion<typename Derived::Scalar> from_axis_angle(const Eigen::MatrixBase<Derived>& axis,
                                                         typename Derived::Scalar theta) {
  using S = typename Derived::Scalar;
  const Vector3<S> n = require_unit(axis, "rotation axis is not unit");
  if (std::abs(theta) > pi<S> + S(1e-9)) throw DomainError("rotation angle outside [-pi, pi]");
  return UnitQuaternion<S>(Quaternion<S>(std::cos(theta / 2), std::sin(theta / 2) * n));
}

template <typename S> struct AxisAngle {
  Vector3<S> axis;
  S angle = S(0);
  bool degenerate = false;  // |vector part| below threshold; axis is the x-hat convention
};

/// Inverse of from_axis_angle with angle in [0, pi]; units with negative
/// scalar part report the representation of -u (the equivalent rotation).
template <typename S> AxisAngle<S> to_axis_angle(const UnitQuaternion<S>& u) {
  Quaternion<S> q = u.quat();
  if (q.w() < S(0)) q = -q;
  const S vn = q.vec().norm();
  const S angle = S(2) * std::atan2(vn, q.w());
  if (vn <= S(1e-8)) return {Vector3<S>::UnitX(), angle, true};
  return {Vector3<S>(q.vec() / vn), angle, false};
}

/// Axis and angle of the compounded rotation (n1,theta1) followed on the right
/// by (n2,theta2), evaluated from the half-angle composition formulas.
template <typename D1, typename D2>
AxisAngle<typename D1::Scalar> compose_axis_angle(const Eigen::MatrixBase<D1>& n1, typename D1::Scalar theta1,
                                                  const Eigen::MatrixBase<D2>& n2, typename D2::Scalar theta2) {
  using S = typename D1::Scalar;
  const Vector3<S> a = require_unit(n1, "rotation axis is not unit");
  const Vector3<S> b = require_unit(n2, "rotation axis is not unit");
  const S c1 = std::cos(theta1 / 2), s1 = std::sin(theta1 / 2);
  const S c2 = std::cos(theta2 / 2), s2 = std::sin(theta2 / 2);
  S w = c1 * c2 - s1 * s2 * a.dot(b);
  Vector3<S> v = s1 * c2 * a + c1 * s2 * b + s1 * s2 * a.cross(b);
  if (w < S(0)) {
    w = -w;
    v = -v;
  }
  const S vn = v.norm();
  const S angle = S(2) * std::atan2(vn, w);
  if (vn <= S(1e-8)) return {Vector3<S>::UnitX(), angle, true};
  return {Vector3<S>(v / vn), angle, false};
}

/// u v u*, the rotation of v by u.
template <typename S, typename Derived>
Vector3<S> rotate(const UnitQuaternion<S>& u, const Eigen::MatrixBase<Derived>& v) {
  return (u.quat() * Quaternion<S>::pure(v) * u.quat().conjugate()).vec();
}

/// exp of the pure quaternion with vector part w: cos|w| + sin|w| w-hat.
template <typename Derived> UnitQuaternion<typename Derived::Scalar> exp_pure(const Eigen::MatrixBase<Derived>& w_in) {
  using S = typename Derived::Scalar;
  const Vector3<S> w = w_in;
  const S n = w.norm();
  if (n < S(1e-12)) {
    // sin(n)/n to second order keeps the result unit to machine precision
    return UnitQuaternion<S>(Quaternion<S>(std::cos(n), (S(1) - n * n / 6) * w));
  }
  return UnitQuaternion<S>(Quaternion<S>(std::cos(n), (std::sin(n) / n) * w));
}

/// Principal log: the pure vector p, |p| in [0, pi], with exp_pure(p) = u.
/// The antipode -1 maps to pi * x-hat by convention.
template <typename S> Vector3<S> quat_log(const UnitQuaternion<S>& u) {
  const S vn = u.vec().norm();
  const S s = std::atan2(vn, u.w());
  if (vn <= S(1e-12)) return u.w() < S(0) ? Vector3<S>(pi<S> * Vector3<S>::UnitX()) : Vector3<S>::Zero();
  return (s / vn) * u.vec();
}

using Quatd = Quaternion<double>;
using UnitQuatd = UnitQuaternion<double>;

}  // namespace qmink
