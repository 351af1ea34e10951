#pragma once

#include <Eigen/Core>
#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qmink {

template <typename Scalar> using Vector3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar> using Vector4 = Eigen::Matrix<Scalar, 4, 1>;
template <typename Scalar> using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;
template <typename Scalar> using Matrix4 = Eigen::Matrix<Scalar, 4, 4>;

using Vector3d = Vector3<double>;
using Vector4d = Vector4<double>;

/// Input outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed request (bad descriptor, unknown property, invalid flag).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// File / stream failure.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <typename Scalar> inline constexpr Scalar pi = std::numbers::pi_v<Scalar>;

// Tolerance conventions shared across the library.
inline constexpr double kDefaultTol = 1e-9;    // membership predicates
inline constexpr double kNormalizeTol = 1e-9;  // constructors renormalize below this
inline constexpr double kPlaneTol = 1e-8;      // 2-plane equality (projector Frobenius)

/// Reduce an angle to (-pi, pi].
template <typename S> S wrap_angle(S x) {
  x = std::fmod(x, S(2) * pi<S>);
  if (x <= -pi<S>) x += S(2) * pi<S>;
  if (x > pi<S>) x -= S(2) * pi<S>;
  return x;
}

template <typename S> S clamp_unit(S x) { return std::clamp(x, S(-1), S(1)); }

/// Angle between unit 4-vectors, safe at the ends of [-1, 1].
template <typename S> S safe_acos(S x) { return std::acos(clamp_unit(x)); }

/// Checks |v| = 1 up to kNormalizeTol and returns the renormalized vector.
template <typename Derived>
Vector3<typename Derived::Scalar> require_unit(const Eigen::MatrixBase<Derived>& v, const char* what) {
  using S = typename Derived::Scalar;
  const Vector3<S> vv = v;
  const S n = vv.norm();
  if (std::abs(n - S(1)) > S(kNormalizeTol)) throw DomainError(what);
  return vv / n;
}

/// Orthonormal completion: the returned columns span the complement of the
/// unit vector u in R^3 or R^4.
template <typename Derived> auto orthogonal_complement(const Eigen::MatrixBase<Derived>& u) {
  using S = typename Derived::Scalar;
  constexpr int R = Derived::RowsAtCompileTime;
  static_assert(R == 3 || R == 4, "orthogonal_complement expects a fixed 3- or 4-vector");
  const Eigen::Matrix<S, R, 1> uu = u;
  Eigen::HouseholderQR<Eigen::Matrix<S, R, 1>> qr(uu);
  const Eigen::Matrix<S, R, R> q = qr.householderQ();
  return Eigen::Matrix<S, R, R - 1>(q.template rightCols<R - 1>());
}

}  // namespace qmink
