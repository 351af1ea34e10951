#include <doctest.h>

#include "qmink/chart.hpp"
#include "qmink/rng.hpp"
#include "qmink/sample.hpp"

using namespace qmink;

namespace {

const double kPi = pi<double>;

UnitQuatd random_unit(RandomStream& rng) { return UnitQuatd(Quatd(rng.unit_vector4())); }

Quatd random_quat(RandomStream& rng) {
  return Quatd(rng.next_normal(), rng.next_normal(), rng.next_normal(), rng.next_normal());
}

}  // namespace

TEST_CASE("Cayley transforms") {
  CHECK((cayley_phi(Quatd::identity()) - Quatd()).norm() == 0);
  CHECK((cayley_phi(Quatd(0, 1, 0, 0)) - Quatd(0, 1, 0, 0)).norm() < 1e-15);
  CHECK((cayley_psi(Quatd()) - Quatd::identity()).norm() == 0);
  CHECK_THROWS_AS(cayley_phi(Quatd(-1, 0, 0, 0)), DomainError);
  CHECK_THROWS_AS(cayley_psi(Quatd::identity()), DomainError);

  RandomStream rng(61, 0);
  for (int i = 0; i < 1000; ++i) {
    const Quatd q = random_quat(rng);
    if ((q + Quatd::identity()).norm() < 1e-6) continue;
    const Quatd round = cayley_psi(cayley_phi(q));
    CHECK((round - q).norm() < 1e-10 * std::max(1.0, q.norm()));
  }
}

TEST_CASE("stereographic projection") {
  CHECK(stereo_project(UnitQuatd::identity()).norm() == 0);

  const UnitQuatd u = from_axis_angle(Vector3d::UnitX(), kPi / 2);
  CHECK((stereo_project(u) - std::tan(kPi / 8) * Vector3d::UnitX()).norm() < 1e-15);
  CHECK(std::abs(stereo_project(u).x() - 0.414214) < 1e-6);

  // u and -u land on distinct points tan(pi/8) n and -cot(pi/8) n
  const Vector3d img_neg = stereo_project(-u);
  CHECK((img_neg + (1.0 / std::tan(kPi / 8)) * Vector3d::UnitX()).norm() < 1e-12);

  CHECK_THROWS_AS(stereo_project(UnitQuatd(-1, 0, 0, 0)), DomainError);

  // agreement with the Cayley transform restricted to S^3
  RandomStream rng(62, 0);
  for (int i = 0; i < 1000; ++i) {
    UnitQuatd q = random_unit(rng);
    const Quatd phi = cayley_phi(q.quat());
    CHECK(std::abs(scal(phi)) < 1e-12);
    CHECK((stereo_project(q) - vect(phi)).norm() < 1e-12);
    // tan(theta/4) n for the canonical representative
    if (q.w() < 0) q = -q;
    const AxisAngle<double> aa = to_axis_angle(q);
    if (!aa.degenerate) CHECK((stereo_project(q) - std::tan(aa.angle / 4) * aa.axis).norm() < 1e-10);
  }
}

TEST_CASE("hyperspherical coordinates") {
  const Hyperspherical<double> one = hyperspherical(UnitQuatd::identity());
  CHECK(one.alpha == 0);
  CHECK(one.beta_free);
  CHECK(one.beta == 0);

  const Hyperspherical<double> i = hyperspherical(UnitQuatd(0, 1, 0, 0));
  CHECK(i.alpha == doctest::Approx(kPi / 2).epsilon(1e-15));
  CHECK(i.beta == 0);
  CHECK(i.gamma_free);

  RandomStream rng(63, 0);
  for (int k = 0; k < 1000; ++k) {
    const double alpha = 0.05 + rng.next_unit() * (kPi - 0.1);
    const double beta = 0.05 + rng.next_unit() * (kPi - 0.1);
    const double gamma = 0.05 + rng.next_unit() * (2 * kPi - 0.1);
    const UnitQuatd u = from_hyperspherical(alpha, beta, gamma);
    const Hyperspherical<double> h = hyperspherical(u);
    CHECK(!h.beta_free);
    CHECK(!h.gamma_free);
    CHECK(std::abs(h.alpha - alpha) < 1e-10);
    CHECK(std::abs(h.beta - beta) < 1e-10);
    CHECK(std::abs(h.gamma - gamma) < 1e-10);
    // stereographic image radius is tan(alpha / 2)
    CHECK(std::abs(stereo_project(u).norm() - std::tan(alpha / 2)) < 1e-10);
  }
}

TEST_CASE("hat and vee") {
  CHECK((hat(Vector3d::UnitZ()) * Vector3d::UnitX() - Vector3d::UnitY()).norm() == 0);
  CHECK((vee(hat(Vector3d(1, 2, 3))) - Vector3d(1, 2, 3)).norm() == 0);

  // commutator maps to the cross product
  const Matrix3<double> a = hat(Vector3d::UnitX()), b = hat(Vector3d::UnitY());
  CHECK((vee(a * b - b * a) - Vector3d::UnitZ()).norm() == 0);

  RandomStream rng(64, 0);
  for (int i = 0; i < 200; ++i) {
    const Vector3d x(rng.next_normal(), rng.next_normal(), rng.next_normal());
    const Vector3d y(rng.next_normal(), rng.next_normal(), rng.next_normal());
    const Matrix3<double> ax = hat(x), ay = hat(y);
    CHECK((hat(x) * y - x.cross(y)).norm() < 1e-14);
    CHECK((vee(ax * ay - ay * ax) - x.cross(y)).norm() < 1e-12);
  }

  Matrix3<double> bad = Matrix3<double>::Zero();
  bad(0, 1) = 1;  // not skew
  CHECK_THROWS_AS(vee(bad), DomainError);
}

TEST_CASE("rotation exponential") {
  CHECK((exp_so3(Vector3d::Zero()) - Matrix3<double>::Identity()).norm() == 0);

  const Matrix3<double> r = exp_so3((kPi / 2) * Vector3d::UnitZ());
  CHECK((r * Vector3d::UnitX() - Vector3d::UnitY()).norm() < 1e-15);

  RandomStream rng(65, 0);
  for (int i = 0; i < 500; ++i) {
    const Vector3d v = (rng.next_unit() * kPi) * rng.unit_vector3();
    const Matrix3<double> m = exp_so3(v);
    CHECK((m.transpose() * m - Matrix3<double>::Identity()).norm() < 1e-12);
    CHECK(std::abs(m.determinant() - 1) < 1e-12);
    // columnwise agreement with the quaternion rotation
    const UnitQuatd u = v.norm() > 0 ? from_axis_angle(Vector3d(v.normalized()), v.norm())
                                     : UnitQuatd::identity();
    for (int c = 0; c < 3; ++c)
      CHECK((m.col(c) - rotate(u, Vector3d(Matrix3<double>::Identity().col(c)))).norm() < 1e-12);
  }

  // series branch for tiny angles stays orthonormal
  const Matrix3<double> tiny = exp_so3(Vector3d(1e-10, -2e-10, 5e-11));
  CHECK((tiny.transpose() * tiny - Matrix3<double>::Identity()).norm() < 1e-15);
}

TEST_CASE("rotation logarithm with robust branches") {
  CHECK(log_so3(Matrix3<double>::Identity()).norm() == 0);
  CHECK((log_so3(exp_so3((kPi / 2) * Vector3d::UnitZ())) - (kPi / 2) * Vector3d::UnitZ()).norm() < 1e-12);

  // past pi/2 the arcsin-based formula would fold the angle back
  const Vector3d big = 2.5 * Vector3d::UnitZ();
  CHECK((log_so3(exp_so3(big)) - big).norm() < 1e-9);
  const Matrix3<double> m = exp_so3(big);
  const Vector3d skew = vee(((m - m.transpose()) / 2).eval());
  const double naive = std::asin(skew.norm());
  CHECK(std::abs(naive - 2.5) > 0.5);

  // the arcsin formula and the implementation agree up to pi/2
  RandomStream rng(66, 0);
  for (int i = 0; i < 500; ++i) {
    const Vector3d v = (rng.next_unit() * kPi / 2) * rng.unit_vector3();
    const Matrix3<double> r = exp_so3(v);
    const Vector3d a = vee(((r - r.transpose()) / 2).eval());
    if (a.norm() < 1e-12) continue;
    const Vector3d arcsin_formula = (std::asin(std::min(a.norm(), 1.0)) / a.norm()) * a;
    CHECK((log_so3(r) - arcsin_formula).norm() < 1e-10);
  }

  // near-pi branch
  for (int i = 0; i < 200; ++i) {
    const Vector3d v = (kPi - 1e-5 * rng.next_unit()) * rng.unit_vector3();
    const Matrix3<double> r = exp_so3(v);
    CHECK((exp_so3(log_so3(r)) - r).norm() < 1e-9);
  }

  Matrix3<double> not_rot = Matrix3<double>::Identity();
  not_rot(0, 0) = 2;
  CHECK_THROWS_AS(log_so3(not_rot), DomainError);
}

TEST_CASE("exp/log roundtrip including the far branch") {
  RandomStream rng(67, 0);
  for (int i = 0; i < 2000; ++i) {
    const Vector3d v = (rng.next_unit() * (kPi - 1e-3)) * rng.unit_vector3();
    CHECK((log_so3(exp_so3(v)) - v).norm() < 1e-9);
  }
}

TEST_CASE("Euler-vector composition") {
  const Vector3d v((kPi / 2) * Vector3d::UnitY());
  CHECK((bch(v, Vector3d::Zero()) - v).norm() == 0);
  CHECK((bch(Vector3d::Zero(), v) - v).norm() == 0);

  const Vector3d w = bch((kPi / 2) * Vector3d::UnitY(), (kPi / 2) * Vector3d::UnitZ());
  const Vector3d expect = (2 * kPi / 3) * Vector3d(1, 1, 1).normalized();
  CHECK((w - expect).norm() < 1e-12);

  // commuting rotations add
  CHECK((bch(0.4 * Vector3d::UnitX(), 0.5 * Vector3d::UnitX()) - 0.9 * Vector3d::UnitX()).norm() < 1e-14);

  // the chart is not additive
  CHECK((w - ((kPi / 2) * Vector3d::UnitY() + (kPi / 2) * Vector3d::UnitZ())).norm() > 0.1);

  RandomStream rng(68, 0);
  for (int i = 0; i < 1000; ++i) {
    const Vector3d v1 = (rng.next_unit() * (kPi - 1e-3)) * rng.unit_vector3();
    const Vector3d v2 = (rng.next_unit() * (kPi - 1e-3)) * rng.unit_vector3();
    const Vector3d via_quat = bch(v1, v2);
    if (via_quat.norm() > kPi - 1e-3) continue;
    CHECK((via_quat - log_so3((exp_so3(v1) * exp_so3(v2)).eval())).norm() < 1e-9);
  }
}

TEST_CASE("cap image: ball case") {
  const SphericalCapd cap(UnitQuatd::identity(), kPi / 4);
  const ChartImage<double> img = cap_image_under_phi(cap);
  REQUIRE(img.kind == ChartImage<double>::Kind::Ball);
  CHECK(img.center.norm() < 1e-12);
  CHECK(img.radius == doctest::Approx(std::tan(kPi / 8)).epsilon(1e-12));

  const RotationSetd set{cap};
  const PointCloud interior = sample(set, 1000, 70, SampleMode::Interior);
  for (long i = 0; i < interior.size(); ++i)
    CHECK((stereo_project(interior.unit_at(i)) - img.center).norm() <= img.radius + 1e-9);
  const PointCloud boundary = sample(set, 300, 71, SampleMode::Boundary);
  for (long i = 0; i < boundary.size(); ++i)
    CHECK(std::abs((stereo_project(boundary.unit_at(i)) - img.center).norm() - img.radius) < 1e-8);

  // an off-center cap still maps to a round ball
  RandomStream rng(72, 0);
  const SphericalCapd off(random_unit(rng), 0.6);
  if (-off.center.w() < std::cos(0.6) - 1e-9) {
    const ChartImage<double> img2 = cap_image_under_phi(off);
    REQUIRE(img2.kind == ChartImage<double>::Kind::Ball);
    const PointCloud pts = sample(RotationSetd{off}, 1000, 73, SampleMode::Interior);
    for (long i = 0; i < pts.size(); ++i)
      CHECK((stereo_project(pts.unit_at(i)) - img2.center).norm() <= img2.radius + 1e-8);
  }
}

TEST_CASE("cap image: half-space case") {
  const SphericalCapd cap(UnitQuatd(0, 1, 0, 0), kPi / 2);  // pole on the boundary
  const ChartImage<double> img = cap_image_under_phi(cap);
  REQUIRE(img.kind == ChartImage<double>::Kind::HalfSpace);
  // members have x >= 0 and so do their images
  CHECK((img.center - Vector3d::UnitX()).norm() < 1e-9);
  CHECK(std::abs(img.radius) < 1e-9);
  const PointCloud pts = sample(RotationSetd{cap}, 1000, 74, SampleMode::Interior);
  for (long i = 0; i < pts.size(); ++i)
    CHECK(img.center.dot(stereo_project(pts.unit_at(i))) >= img.radius - 1e-8);
}

TEST_CASE("cap image: ball-complement case") {
  const SphericalCapd cap(UnitQuatd(-1, 0, 0, 0), kPi / 4);  // pole interior
  const ChartImage<double> img = cap_image_under_phi(cap);
  REQUIRE(img.kind == ChartImage<double>::Kind::BallComplement);
  CHECK(img.radius == doctest::Approx(std::tan(3 * kPi / 8)).epsilon(1e-12));
  const PointCloud pts = sample(RotationSetd{cap}, 1000, 75, SampleMode::Interior);
  for (long i = 0; i < pts.size(); ++i) {
    const UnitQuatd u = pts.unit_at(i);
    if ((u.quat() + Quatd::identity()).norm() < 1e-9) continue;
    CHECK((stereo_project(u) - img.center).norm() >= img.radius - 1e-8);
  }
}

TEST_CASE("cap image: degenerate cases") {
  const ChartImage<double> pt = cap_image_under_phi(SphericalCapd(UnitQuatd(0, 0, 1, 0), 0.0));
  REQUIRE(pt.kind == ChartImage<double>::Kind::Point);
  CHECK((pt.point - Vector3d::UnitY()).norm() < 1e-15);

  const ChartImage<double> all = cap_image_under_phi(SphericalCapd(UnitQuatd::identity(), kPi));
  CHECK(all.kind == ChartImage<double>::Kind::AllSpace);

  CHECK_THROWS_AS(cap_image_under_phi(SphericalCapd(UnitQuatd(-1, 0, 0, 0), 0.0)), DomainError);
}

TEST_CASE("quaternion to rotation matrix uses one conversion convention") {
  RandomStream rng(76, 0);
  for (int i = 0; i < 300; ++i) {
    const UnitQuatd u = random_unit(rng);
    const Matrix3<double> m = to_rotation_matrix(u);
    const Vector3d v(rng.next_normal(), rng.next_normal(), rng.next_normal());
    CHECK((m * v - rotate(u, v)).norm() < 1e-12 * std::max(1.0, v.norm()));
  }
}
