#include <doctest.h>

#include "qmink/product.hpp"
#include "qmink/rng.hpp"
#include "qmink/sample.hpp"

using namespace qmink;

namespace {

const double kPi = pi<double>;

UnitQuatd random_unit(RandomStream& rng) { return UnitQuatd(Quatd(rng.unit_vector4())); }

bool same_cap(const SphericalCapd& a, const SphericalCapd& b, double tol = 1e-12) {
  return (a.center.coeffs() - b.center.coeffs()).norm() <= tol && std::abs(a.t - b.t) <= tol;
}

}  // namespace

TEST_CASE("translate closed forms") {
  RandomStream rng(41, 0);
  const UnitQuatd v0 = random_unit(rng);

  // cap on the right keeps its radius and moves its center
  const auto cap = translate(RotationSetd{SphericalCapd(UnitQuatd::identity(), 0.6)}, v0, Side::Right);
  CHECK(cap.exact);
  CHECK(same_cap(std::get<SphericalCapd>(cap.set), SphericalCapd(v0, 0.6)));

  // arc translated along its own circle shifts phi
  const auto arc = translate(RotationSetd{Arcd(Vector3d::UnitZ(), 0.0, 0.4)},
                             exp_pure(0.9 * Vector3d::UnitZ()), Side::Right);
  CHECK(arc.exact);
  CHECK(std::get<Arcd>(arc.set).phi == doctest::Approx(0.9).epsilon(1e-14));
  CHECK(std::get<Arcd>(arc.set).delta == 0.4);

  const auto single = translate(RotationSetd{Singletond(UnitQuatd::identity())}, v0, Side::Left);
  CHECK(single.exact);
  CHECK((std::get<Singletond>(single.set).value.coeffs() - v0.coeffs()).norm() == 0);

  // -1 = exp(pi c) along any axis
  const auto arc_neg = translate(RotationSetd{Arcd(Vector3d::UnitZ(), 0.1, 0.2)},
                                 UnitQuatd(-1, 0, 0, 0), Side::Right);
  CHECK(arc_neg.exact);
  CHECK(std::get<Arcd>(arc_neg.set).phi == doctest::Approx(0.1 + kPi).epsilon(1e-14));

  // a general translate of an arc leaves the family: enclosing cap, inexact
  const auto off = translate(RotationSetd{Arcd(Vector3d::UnitZ(), 0.0, 0.4)}, v0, Side::Right);
  CHECK(!off.exact);
  const SphericalCapd hull = std::get<SphericalCapd>(off.set);
  CHECK(hull.t == doctest::Approx(0.4).epsilon(1e-14));
  RandomStream rs(42, 0);
  for (int i = 0; i < 200; ++i) {
    const double s = (2 * rs.next_unit() - 1) * 0.4;
    const UnitQuatd p = exp_pure(s * Vector3d::UnitZ()) * v0;
    CHECK(contains(off.set, p, 1e-9));
  }
}

TEST_CASE("cap products add radii until the sphere saturates") {
  const UnitQuatd one = UnitQuatd::identity();
  const RotationSetd r1 = cap_product(SphericalCapd(one, kPi / 3), SphericalCapd(one, kPi / 3));
  CHECK(same_cap(std::get<SphericalCapd>(r1), SphericalCapd(one, 2 * kPi / 3)));

  // degenerate first factor acts as a translate
  RandomStream rng(43, 0);
  const UnitQuatd u0 = random_unit(rng), v0 = random_unit(rng);
  const RotationSetd r2 = cap_product(SphericalCapd(u0, 0.0), SphericalCapd(v0, 0.7));
  CHECK(same_cap(std::get<SphericalCapd>(r2), SphericalCapd(u0 * v0, 0.7)));

  const RotationSetd r3 =
      cap_product(SphericalCapd(UnitQuatd(0, 1, 0, 0), kPi / 2), SphericalCapd(UnitQuatd(0, 0, 1, 0), 3 * kPi / 4));
  CHECK(std::holds_alternative<FullSphered>(r3));

  // sum exactly pi is the canonical full tag
  const RotationSetd r4 = cap_product(SphericalCapd(one, kPi / 2), SphericalCapd(one, kPi / 2));
  CHECK(std::holds_alternative<FullSphered>(r4));
}

TEST_CASE("cap product sampling oracle: containment and boundary attainment") {
  const SphericalCapd a(exp_pure(0.3 * Vector3d::UnitX()), 1.0);
  const SphericalCapd b(exp_pure(-0.2 * Vector3d::UnitY()), 0.9);
  const SphericalCapd prod = std::get<SphericalCapd>(cap_product(a, b));
  CHECK(prod.t == doctest::Approx(1.9).epsilon(1e-15));
  CHECK(prod.t < kPi);

  const double bound = std::cos(prod.t);
  RandomStream rng(44, 0);
  for (int i = 0; i < 20000; ++i) {
    RandomStream ra(44, 2 * i), rb(44, 2 * i + 1);
    const UnitQuatd u = detail::draw_point(RotationSetd{a}, ra, SampleMode::Interior, nullptr);
    const UnitQuatd v = detail::draw_point(RotationSetd{b}, rb, SampleMode::Interior, nullptr);
    CHECK(inner((u * v).quat(), prod.center.quat()) >= bound - 1e-9);
  }
  // boundary attained by a same-axis pair
  const Vector3d p = rng.unit_vector3();
  const UnitQuatd ub = a.center * exp_pure(1.0 * p);
  const UnitQuatd vb = exp_pure(0.9 * p) * b.center;
  CHECK(std::abs(inner((ub * vb).quat(), prod.center.quat()) - bound) < 1e-12);
}

TEST_CASE("cap sharpness over random boundary pairs") {
  RandomStream meta(45, 0);
  const UnitQuatd u0 = random_unit(meta), v0 = random_unit(meta);
  const double s = 0.8, t = 0.75;
  const UnitQuatd center = u0 * v0;
  double min_gap = 2;
  for (long i = 0; i < 100000; ++i) {
    RandomStream rng(46, i);
    const UnitQuatd u = u0 * exp_pure(s * rng.unit_vector3());
    const UnitQuatd v = exp_pure(t * rng.unit_vector3()) * v0;
    min_gap = std::min(min_gap, inner((u * v).quat(), center.quat()) - std::cos(s + t));
  }
  CHECK(min_gap >= 0.0 - 1e-12);
  CHECK(min_gap <= 1e-3);
}

TEST_CASE("cap products associate") {
  RandomStream rng(47, 0);
  for (int i = 0; i < 20; ++i) {
    const SphericalCapd a(random_unit(rng), 0.2 + 0.5 * rng.next_unit());
    const SphericalCapd b(random_unit(rng), 0.2 + 0.5 * rng.next_unit());
    const SphericalCapd c(random_unit(rng), 0.2 + 0.5 * rng.next_unit());
    if (a.t + b.t + c.t >= kPi) continue;
    const auto ab_c = cap_product(std::get<SphericalCapd>(cap_product(a, b)), c);
    const auto a_bc = cap_product(a, std::get<SphericalCapd>(cap_product(b, c)));
    CHECK(same_cap(std::get<SphericalCapd>(ab_c), std::get<SphericalCapd>(a_bc)));
  }
}

TEST_CASE("same-axis arc products") {
  const Arcd a(Vector3d::UnitZ(), 0.0, kPi / 4);
  const Arcd r = arc_product_same_axis(a, a);
  CHECK(r.delta == doctest::Approx(kPi / 2).epsilon(1e-15));
  CHECK(r.phi == 0.0);

  const Arcd s1(Vector3d::UnitZ(), 0.4, 0.0), s2(Vector3d::UnitZ(), 0.5, 0.0);
  const Arcd point = arc_product_same_axis(s1, s2);
  CHECK(point.delta == 0.0);
  CHECK((point.point(point.phi).coeffs() - exp_pure(0.9 * Vector3d::UnitZ()).coeffs()).norm() < 1e-15);

  const Arcd wide(Vector3d::UnitZ(), 0.0, 3 * kPi / 4);
  CHECK(arc_product_same_axis(wide, wide).delta == kPi);

  CHECK_THROWS_AS(arc_product_same_axis(a, Arcd(Vector3d::UnitY(), 0, 0.1)), DomainError);

  // opposite stored axes are the same circle family after normalization
  const Arcd neg(-Vector3d::UnitZ(), 0.3, 0.1);
  CHECK_NOTHROW(arc_product_same_axis(a, neg));
}

TEST_CASE("different-axis arc product: corner formula") {
  const Arcd a(Vector3d::UnitY(), 0.0, kPi / 4);
  const Arcd b(Vector3d::UnitZ(), 0.0, kPi / 4);
  const ProductResultd res = arc_product_general(a, b);
  CHECK(res.enclosing_cap->t == doctest::Approx(kPi / 3).epsilon(1e-12));  // arccos(cos^2(pi/4))
  CHECK(res.enclosing_cap->t < a.delta + b.delta);
  CHECK(res.has_note(ProductNote::Embedded));
  CHECK(res.surface.has_value());

  // grid cross-check of the corner value
  const double r_grid = grid_min_scalar(0.0, kPi / 4, kPi / 4, 256);
  CHECK(std::abs(std::cos(res.enclosing_cap->t) - r_grid) < 1e-9);

  // the minimizing corners sit exactly on the enclosing boundary
  const double at_corner = inner(res.surface->corner(+1, +1).quat(), res.enclosing_cap->center.quat());
  CHECK(std::abs(at_corner - std::cos(res.enclosing_cap->t)) < 1e-12);
}

TEST_CASE("different-axis arc product: containment and flags") {
  RandomStream rng(48, 0);
  for (int rep = 0; rep < 10; ++rep) {
    const Vector3d c1 = rng.unit_vector3();
    Vector3d c2 = rng.unit_vector3();
    while (std::abs(c1.dot(c2)) > 0.99) c2 = rng.unit_vector3();
    const Arcd a(c1, 2 * rng.next_unit() - 1, rng.next_unit() * kPi / 2);
    const Arcd b(c2, 2 * rng.next_unit() - 1, rng.next_unit() * kPi / 2);
    const ProductResultd res = arc_product_general(a, b);
    const double bound = std::cos(res.enclosing_cap->t);
    for (int i = 0; i < 300; ++i) {
      const double s = a.phi + (2 * rng.next_unit() - 1) * a.delta;
      const double t = b.phi + (2 * rng.next_unit() - 1) * b.delta;
      CHECK(inner(res.surface->point(s, t).quat(), res.enclosing_cap->center.quat()) >= bound - 1e-9);
    }
  }

  // two great circles: immersed only, trivial enclosing cap
  const ProductResultd circles =
      arc_product_general(Arcd(Vector3d::UnitY(), 0, kPi), Arcd(Vector3d::UnitZ(), 0, kPi));
  CHECK(circles.has_note(ProductNote::ImmersedOnly));
  CHECK(circles.enclosing_cap->t == doctest::Approx(kPi).epsilon(1e-9));

  // delta above pi/2 with the other below stays embedded
  const ProductResultd mixed =
      arc_product_general(Arcd(Vector3d::UnitY(), 0, 2.0), Arcd(Vector3d::UnitZ(), 0, 0.4));
  CHECK(mixed.has_note(ProductNote::Embedded));

  CHECK_THROWS_AS(arc_product_general(Arcd(Vector3d::UnitZ(), 0, 1), Arcd(Vector3d::UnitZ(), 1, 1)), DomainError);
}

TEST_CASE("degenerate second arc reduces to a translate of the first") {
  const Arcd a(Vector3d::UnitY(), 0.3, 0.5);
  const Arcd b(Vector3d::UnitZ(), 0.8, 0.0);
  const ProductResultd res = arc_product_general(a, b);
  CHECK(res.enclosing_cap->t == doctest::Approx(0.5).epsilon(1e-12));
  const auto tr = translate(RotationSetd{a}, exp_pure(0.8 * Vector3d::UnitZ()), Side::Right);
  CHECK(!tr.exact);
  CHECK(same_cap(*res.enclosing_cap, std::get<SphericalCapd>(tr.set), 1e-12));
}

TEST_CASE("grid minimization handles interior minima") {
  // deltas beyond pi/2: the minimum moves off the corners; compare against a
  // dense brute scan
  const double d = 0.37;
  const double d1 = 2.5, d2 = 2.8;
  const double via_grid = grid_min_scalar(d, d1, d2, 512);
  double brute = 2;
  for (int i = 0; i < 2000; ++i)
    for (int j = 0; j < 2000; ++j) {
      const double s = -d1 + 2 * d1 * i / 1999.0;
      const double t = -d2 + 2 * d2 * j / 1999.0;
      brute = std::min(brute, surface_scalar(s, t, d));
    }
  CHECK(via_grid <= brute + 1e-9);
  CHECK(via_grid >= -1.0 - 1e-12);
}

TEST_CASE("axis-cap bound and sharpness") {
  // phi = pi/2: per-operand radius equals xi and the antipodal pair attains 2 xi
  const double xi = kPi / 6;
  const AxisCapd s(Vector3d::UnitZ(), kPi / 2, xi);
  const ProductResultd res = axiscap_bound(s, s);
  CHECK(res.enclosing_cap->t == doctest::Approx(2 * xi).epsilon(1e-12));
  CHECK((res.enclosing_cap->center.coeffs() - Vector4d(-1, 0, 0, 0)).norm() < 1e-12);
  CHECK(res.operand_caps.size() == 2);
  CHECK(res.operand_caps[0].t == doctest::Approx(xi).epsilon(1e-12));

  const Vector3d v = Vector3d::UnitX();
  const Vector3d m = std::cos(xi) * Vector3d::UnitZ() + std::sin(xi) * v;
  const Vector3d n = std::cos(xi) * Vector3d::UnitZ() - std::sin(xi) * v;
  const UnitQuatd pair = s.point(m) * s.point(n);
  CHECK(std::abs(inner(pair.quat(), res.enclosing_cap->center.quat()) - std::cos(2 * xi)) < 1e-12);

  // zero aperture on both sides gives an exact singleton
  const ProductResultd point =
      axiscap_bound(AxisCapd(Vector3d::UnitZ(), 0.4, 0), AxisCapd(Vector3d::UnitY(), 0.9, 0));
  CHECK(point.exact.has_value());
  CHECK(std::holds_alternative<Singletond>(*point.exact));
}

TEST_CASE("axis-cap bound containment over samples") {
  RandomStream meta(49, 0);
  const AxisCapd a(meta.unit_vector3(), 1.1, 0.5);
  const AxisCapd b(meta.unit_vector3(), 0.7, 0.35);
  const ProductResultd res = axiscap_bound(a, b);
  const double bound = std::cos(res.enclosing_cap->t);
  for (long i = 0; i < 10000; ++i) {
    RandomStream ra(50, 2 * i), rb(50, 2 * i + 1);
    const UnitQuatd u = detail::draw_point(RotationSetd{a}, ra, SampleMode::Interior, nullptr);
    const UnitQuatd v = detail::draw_point(RotationSetd{b}, rb, SampleMode::Interior, nullptr);
    CHECK(inner((u * v).quat(), res.enclosing_cap->center.quat()) >= bound - 1e-9);
  }
}

TEST_CASE("rank defect exactly on aligned or opposite axes") {
  const AxisCapd a(Vector3d::UnitZ(), kPi / 3, 0.8);
  const AxisCapd b(Vector3d::UnitZ(), kPi / 4, 0.8);
  const Vector3d m = Vector3d(0.2, 0.1, 1).normalized();
  CHECK(rank_defect_locus(a, b, m, m));
  CHECK(rank_defect_locus(a, b, m, Vector3d(-m)));
  CHECK(!rank_defect_locus(a, b, Vector3d::UnitX(), Vector3d::UnitY()));

  RandomStream rng(51, 0);
  for (int i = 0; i < 50; ++i) {
    const Vector3d x = rng.unit_vector3(), y = rng.unit_vector3();
    CHECK(rank_defect_locus(a, b, x, y) == (std::abs(x.dot(y)) > 1 - 1e-12));
    CHECK(rank_defect_locus(a, b, x, x));
  }
}

TEST_CASE("product dispatch") {
  RandomStream rng(52, 0);
  const UnitQuatd u0 = random_unit(rng), v0 = random_unit(rng);

  const ProductResultd ss = product(RotationSetd{Singletond(u0)}, RotationSetd{Singletond(v0)});
  CHECK((std::get<Singletond>(*ss.exact).value.coeffs() - (u0 * v0).coeffs()).norm() < 1e-15);

  const ProductResultd cc = product(RotationSetd{SphericalCapd(UnitQuatd::identity(), kPi / 3)},
                                    RotationSetd{SphericalCapd(UnitQuatd::identity(), kPi / 3)});
  CHECK(same_cap(std::get<SphericalCapd>(*cc.exact), SphericalCapd(UnitQuatd::identity(), 2 * kPi / 3)));

  const ProductResultd full = product(RotationSetd{SphericalCapd(UnitQuatd(0, 1, 0, 0), kPi / 2)},
                                      RotationSetd{SphericalCapd(UnitQuatd(0, 0, 1, 0), 3 * kPi / 4)});
  CHECK(std::holds_alternative<FullSphered>(*full.exact));
  CHECK(full.has_note(ProductNote::FullSphere));

  // full sphere absorbs
  const ProductResultd fs = product(RotationSetd{FullSphered{}}, RotationSetd{Singletond(u0)});
  CHECK(std::holds_alternative<FullSphered>(*fs.exact));

  // singleton-degenerate arc routes through translate
  const ProductResultd deg =
      product(RotationSetd{Arcd(Vector3d::UnitZ(), 0.7, 0.0)}, RotationSetd{Arcd(Vector3d::UnitZ(), 0.2, 0.3)});
  CHECK(deg.exact.has_value());
  CHECK(std::get<Arcd>(*deg.exact).phi == doctest::Approx(0.9).epsilon(1e-14));

  // arcs on the same circle use the closed form
  const ProductResultd aa =
      product(RotationSetd{Arcd(Vector3d::UnitZ(), 0.0, kPi / 4)}, RotationSetd{Arcd(Vector3d::UnitZ(), 0.2, kPi / 4)});
  CHECK(std::get<Arcd>(*aa.exact).phi == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(std::get<Arcd>(*aa.exact).delta == doctest::Approx(kPi / 2).epsilon(1e-14));
}

TEST_CASE("mixed products fall back to enclosing-cap bounds") {
  const RotationSetd cap{SphericalCapd(UnitQuatd::identity(), 0.5)};
  const RotationSetd arc{Arcd(Vector3d::UnitZ(), 0.3, 0.4)};
  const ProductResultd res = product(cap, arc);
  CHECK(!res.exact.has_value());
  CHECK(res.has_note(ProductNote::BoundOnly));
  CHECK(res.enclosing_cap->t == doctest::Approx(0.9).epsilon(1e-12));

  for (long i = 0; i < 2000; ++i) {
    RandomStream ra(53, 2 * i), rb(53, 2 * i + 1);
    const UnitQuatd u = detail::draw_point(cap, ra, SampleMode::Interior, nullptr);
    const UnitQuatd v = detail::draw_point(arc, rb, SampleMode::Interior, nullptr);
    CHECK(inner((u * v).quat(), res.enclosing_cap->center.quat()) >= std::cos(res.enclosing_cap->t) - 1e-9);
  }
}

TEST_CASE("arc-surface parameter fit recovers generating parameters") {
  const ArcSurfaced surf{Vector3d::UnitY(), Vector3d(1, 1, 0).normalized(), 0.2, -0.4, 1.0, 0.8};
  RandomStream rng(54, 0);
  for (int i = 0; i < 100; ++i) {
    const double s = surf.phi1 + (2 * rng.next_unit() - 1) * surf.delta1;
    const double t = surf.phi2 + (2 * rng.next_unit() - 1) * surf.delta2;
    double sf = surf.phi1, tf = surf.phi2;  // start from the box center
    const double res = surf.fit(Vector4d(surf.point(s, t).coeffs()), sf, tf);
    CHECK(res < 1e-9);
    CHECK((surf.point(sf, tf).coeffs() - surf.point(s, t).coeffs()).norm() < 1e-9);
  }
}
