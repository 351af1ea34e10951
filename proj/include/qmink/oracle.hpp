#pragma once

#include <chrono>
#include <map>
#include <optional>

#include "qmink/boundary.hpp"
#include "qmink/chart.hpp"
#include "qmink/product.hpp"
#include "qmink/sample.hpp"

namespace qmink {

/// n products of independently sampled operand points. Point i depends only
/// on (seed, i), so the cloud is reproducible for any thread count. Operand
/// parameter tags are kept with "a_" / "b_" prefixes.
inline PointCloud product_cloud(const RotationSetd& a, const RotationSetd& b, long n, std::uint64_t seed) {
  if (n < 1) throw DomainError("need at least one sample");
  PointCloud cloud;
  cloud.frame = Frame::S3;
  const auto ta = detail::sample_tag_names(a), tb = detail::sample_tag_names(b);
  for (const auto& s : ta) cloud.tag_names.push_back("a_" + s);
  for (const auto& s : tb) cloud.tag_names.push_back("b_" + s);
  cloud.points.resize(n, 4);
  cloud.tags.resize(n, Eigen::Index(cloud.tag_names.size()));
  parallel_for(n, [&](long begin, long end, unsigned) {
    double tga[2] = {0, 0}, tgb[2] = {0, 0};
    for (long i = begin; i < end; ++i) {
      RandomStream ra(seed, 2 * std::uint64_t(i));
      RandomStream rb(seed, 2 * std::uint64_t(i) + 1);
      const UnitQuatd u = detail::draw_point(a, ra, SampleMode::Interior, tga);
      const UnitQuatd v = detail::draw_point(b, rb, SampleMode::Interior, tgb);
      cloud.points.row(i) = (u * v).coeffs();
      Eigen::Index k = 0;
      for (std::size_t j = 0; j < ta.size(); ++j) cloud.tags(i, k++) = tga[j];
      for (std::size_t j = 0; j < tb.size(); ++j) cloud.tags(i, k++) = tgb[j];
    }
  });
  return cloud;
}

/// Chart projection of an S^3 cloud. Stereo drops (and counts) points within
/// 1e-9 of the pole -1; the Euler-vector chart stays inside the radius-pi
/// ball, with the exact antipode sent to the boundary representative pi*x-hat.
inline PointCloud project_cloud(const PointCloud& cloud, Frame method) {
  if (cloud.frame != Frame::S3) throw UsageError("cloud is not in the S3 frame");
  if (method == Frame::S3) return cloud;
  PointCloud out;
  out.frame = method;
  out.tag_names = cloud.tag_names;
  out.points.resize(cloud.size(), 3);
  out.tags.resize(cloud.size(), cloud.tags.cols());
  long kept = 0;
  for (long i = 0; i < cloud.size(); ++i) {
    const UnitQuatd u = cloud.unit_at(i);
    Vector3d p;
    if (method == Frame::R3Stereo) {
      if ((u.quat() + Quatd::identity()).norm() <= 1e-9) {
        ++out.dropped;
        continue;
      }
      p = stereo_project(u);
    } else {
      if (u.w() < 0 && u.vec().norm() <= 1e-12) {
        p = pi<double> * Vector3d::UnitX();  // antipode convention
      } else {
        const AxisAngle<double> aa = to_axis_angle(u);
        p = aa.angle * aa.axis;
      }
    }
    out.points.row(kept) = p;
    out.tags.row(kept) = cloud.tags.row(i);
    ++kept;
  }
  out.points.conservativeResize(kept, 3);
  out.tags.conservativeResize(kept, cloud.tags.cols());
  return out;
}

enum class Property {
  CapClosure,
  CapSharpness,
  ArcSameAxis,
  ArcSurfaceCap,
  CornerMin,
  AxiscapBound,
  AxiscapSharpHalfpi,
  BchConsistency,
  BoundaryInProductOfBoundaries,
  NecessaryFilter,
};

inline const char* property_name(Property p) {
  switch (p) {
    case Property::CapClosure: return "CAP_CLOSURE";
    case Property::CapSharpness: return "CAP_SHARPNESS";
    case Property::ArcSameAxis: return "ARC_SAME_AXIS";
    case Property::ArcSurfaceCap: return "ARC_SURFACE_CAP";
    case Property::CornerMin: return "CORNER_MIN";
    case Property::AxiscapBound: return "AXISCAP_BOUND";
    case Property::AxiscapSharpHalfpi: return "AXISCAP_SHARP_HALFPI";
    case Property::BchConsistency: return "BCH_CONSISTENCY";
    case Property::BoundaryInProductOfBoundaries: return "BOUNDARY_IN_PRODUCT_OF_BOUNDARIES";
    case Property::NecessaryFilter: return "NECESSARY_FILTER";
  }
  return "?";
}

inline Property parse_property(const std::string& name) {
  for (Property p : {Property::CapClosure, Property::CapSharpness, Property::ArcSameAxis, Property::ArcSurfaceCap,
                     Property::CornerMin, Property::AxiscapBound, Property::AxiscapSharpHalfpi,
                     Property::BchConsistency, Property::BoundaryInProductOfBoundaries, Property::NecessaryFilter})
    if (name == property_name(p)) return p;
  throw UsageError("unknown property: " + name);
}

struct VerifyOptions {
  std::optional<long> n;
  std::uint64_t seed = 42;
  std::optional<double> s, t, phi, phi1, phi2, xi, xi1, xi2, delta1, delta2;
};

struct VerificationReport {
  std::string property;
  std::string description;
  long n = 0;
  long violations = 0;
  double worst_slack = 0;  // positive = amount past the tolerance budget
  double tolerance = 0;
  std::uint64_t seed = 0;
  double runtime_sec = 0;
  bool pass = false;
  std::vector<std::string> notes;
  std::map<std::string, double> params;
};

namespace detail {

constexpr std::uint64_t kMetaStream = 0x8000000000000000ull;

inline UnitQuatd random_unit(RandomStream& rng) { return UnitQuatd(Quatd(rng.unit_vector4())); }

struct Reduction {
  std::vector<long> violations;
  std::vector<double> worst;
  explicit Reduction(double init) : violations(thread_cap(), 0), worst(thread_cap(), init) {}
  long total_violations() const {
    long v = 0;
    for (long x : violations) v += x;
    return v;
  }
  double max_worst() const {
    double w = worst[0];
    for (double x : worst) w = std::max(w, x);
    return w;
  }
};

}  // namespace detail

/// Seeded verification run for one named property. Reports the violation
/// count against the property's pinned tolerance and the worst slack seen.
inline VerificationReport verify(Property property, const VerifyOptions& opt = {}) {
  const auto start = std::chrono::steady_clock::now();
  VerificationReport rep;
  rep.property = property_name(property);
  rep.seed = opt.seed;
  RandomStream meta(opt.seed, detail::kMetaStream);

  const auto pick = [](const std::optional<double>& v, double dflt) { return v.value_or(dflt); };
  const double quarter = pi<double> / 4;

  switch (property) {
    case Property::CapClosure: {
      rep.description = "sampled cap-pair products stay inside the cap of summed radii";
      rep.tolerance = 1e-9;
      rep.n = opt.n.value_or(10000);
      const double s = pick(opt.s, quarter), t = pick(opt.t, quarter);
      rep.params = {{"s", s}, {"t", t}};
      const UnitQuatd u0 = detail::random_unit(meta), v0 = detail::random_unit(meta);
      if (s + t >= pi<double>) {
        rep.notes.push_back("FULL_SPHERE");
        rep.pass = true;
        break;
      }
      const SphericalCapd ca(u0, s), cb(v0, t);
      const UnitQuatd center = u0 * v0;
      const double bound = std::cos(s + t);
      detail::Reduction red(-2);
      parallel_for(rep.n, [&](long b, long e, unsigned w) {
        for (long i = b; i < e; ++i) {
          RandomStream ra(opt.seed, 2 * std::uint64_t(i)), rb(opt.seed, 2 * std::uint64_t(i) + 1);
          const UnitQuatd u = detail::draw_point(RotationSetd(ca), ra, SampleMode::Interior, nullptr);
          const UnitQuatd v = detail::draw_point(RotationSetd(cb), rb, SampleMode::Interior, nullptr);
          const double slack = bound - inner((u * v).quat(), center.quat());
          red.worst[w] = std::max(red.worst[w], slack);
          if (slack > rep.tolerance) ++red.violations[w];
        }
      });
      rep.violations = red.total_violations();
      rep.worst_slack = red.max_worst();
      rep.pass = rep.violations == 0;
      break;
    }

    case Property::CapSharpness: {
      rep.description = "common-axis boundary pairs attain the summed-radius cap boundary";
      rep.tolerance = 1e-12;
      rep.n = opt.n.value_or(10000);
      const double s = pick(opt.s, quarter), t = pick(opt.t, quarter);
      rep.params = {{"s", s}, {"t", t}};
      rep.notes.push_back("STRUCTURED_CANDIDATES");
      const UnitQuatd u0 = detail::random_unit(meta), v0 = detail::random_unit(meta);
      const UnitQuatd center = u0 * v0;
      const double target = std::cos(s + t);
      detail::Reduction red(0);
      parallel_for(rep.n, [&](long b, long e, unsigned w) {
        for (long i = b; i < e; ++i) {
          RandomStream rng(opt.seed, std::uint64_t(i));
          const Vector3d p = rng.unit_vector3();
          const UnitQuatd u = u0 * exp_pure(s * p);
          const UnitQuatd v = exp_pure(t * p) * v0;
          const double dev = std::abs(inner((u * v).quat(), center.quat()) - target);
          red.worst[w] = std::max(red.worst[w], dev);
          if (dev > rep.tolerance) ++red.violations[w];
        }
      });
      rep.violations = red.total_violations();
      rep.worst_slack = red.max_worst();
      rep.pass = rep.violations == 0;
      break;
    }

    case Property::ArcSameAxis: {
      rep.description = "same-axis arc products match the angle-sum arc in both directions";
      rep.tolerance = 1e-9;
      rep.n = opt.n.value_or(10000);
      const Vector3d c = meta.unit_vector3();
      const Arcd a(c, pick(opt.phi1, 0.0), pick(opt.delta1, quarter));
      const Arcd b(c, pick(opt.phi2, 0.2), pick(opt.delta2, quarter));
      rep.params = {{"phi1", a.phi}, {"delta1", a.delta}, {"phi2", b.phi}, {"delta2", b.delta}};
      const Arcd r = arc_product_same_axis(a, b);
      if (std::abs(r.phi - (a.phi + b.phi)) != 0 ||
          std::abs(r.delta - std::min(a.delta + b.delta, pi<double>)) != 0) {
        ++rep.violations;
        rep.notes.push_back("PARAMETER_MISMATCH");
      }
      const RotationSetd rset(r);
      detail::Reduction red(0);
      parallel_for(rep.n, [&](long bg, long e, unsigned w) {
        for (long i = bg; i < e; ++i) {
          RandomStream rng(opt.seed, std::uint64_t(i));
          // forward: products of members lie in the closed form
          const double s1 = a.phi + (2 * rng.next_unit() - 1) * a.delta;
          const double s2 = b.phi + (2 * rng.next_unit() - 1) * b.delta;
          const UnitQuatd prod = a.point(s1) * b.point(s2);
          if (!contains(rset, prod, rep.tolerance)) ++red.violations[w];
          // backward: members of the closed form factor into the operands
          const double d = wrap_angle((2 * rng.next_unit() - 1) * r.delta);
          const double d1 = a.delta + b.delta > 0 ? d * a.delta / (a.delta + b.delta) : 0.0;
          const UnitQuatd recon = a.point(a.phi + d1) * b.point(b.phi + (d - d1));
          const double err = (recon.coeffs() - r.point(r.phi + d).coeffs()).norm();
          red.worst[w] = std::max(red.worst[w], err);
          if (err > rep.tolerance) ++red.violations[w];
        }
      });
      rep.violations += red.total_violations();
      rep.worst_slack = red.max_worst();
      rep.pass = rep.violations == 0;
      break;
    }

    case Property::ArcSurfaceCap: {
      rep.description = "sampled arc-pair surface points stay inside the reported enclosing cap";
      rep.tolerance = 1e-9;
      rep.n = opt.n.value_or(10000);
      Vector3d c1 = meta.unit_vector3(), c2 = meta.unit_vector3();
      while (std::abs(c1.dot(c2)) > 1 - 1e-6) c2 = meta.unit_vector3();
      const Arcd a(c1, pick(opt.phi1, 0.3), pick(opt.delta1, quarter));
      const Arcd b(c2, pick(opt.phi2, -0.2), pick(opt.delta2, quarter));
      rep.params = {{"phi1", a.phi}, {"delta1", a.delta}, {"phi2", b.phi}, {"delta2", b.delta},
                    {"c1_dot_c2", a.axis.dot(b.axis)}};
      const ProductResultd res = arc_product_general(a, b);
      const SphericalCapd cap = *res.enclosing_cap;
      const double bound = std::cos(cap.t);
      detail::Reduction red(-2);
      parallel_for(rep.n, [&](long bg, long e, unsigned w) {
        for (long i = bg; i < e; ++i) {
          RandomStream rng(opt.seed, std::uint64_t(i));
          const double s = a.phi + (2 * rng.next_unit() - 1) * a.delta;
          const double t = b.phi + (2 * rng.next_unit() - 1) * b.delta;
          const double slack = bound - inner(res.surface->point(s, t).quat(), cap.center.quat());
          red.worst[w] = std::max(red.worst[w], slack);
          if (slack > rep.tolerance) ++red.violations[w];
        }
      });
      rep.violations = red.total_violations();
      rep.worst_slack = red.max_worst();
      if (a.delta <= pi<double> / 2 && b.delta <= pi<double> / 2) {
        // the minimizing corner must sit exactly on the enclosing-cap boundary
        const double d = a.axis.dot(b.axis);
        const UnitQuatd corner = res.surface->corner(+1, d >= 0 ? +1 : -1);
        const double dev = std::abs(inner(corner.quat(), cap.center.quat()) - std::cos(cap.t));
        if (dev > 1e-12) {
          ++rep.violations;
          rep.notes.push_back("CORNER_NOT_ATTAINED");
        }
      }
      rep.pass = rep.violations == 0;
      break;
    }

    case Property::CornerMin: {
      rep.description = "corner formula for the enclosing-cap radius matches dense grid minimization";
      rep.tolerance = 1e-6;
      rep.n = opt.n.value_or(50);
      rep.params = {};
      detail::Reduction red(0);
      parallel_for(rep.n, [&](long bg, long e, unsigned w) {
        for (long i = bg; i < e; ++i) {
          RandomStream rng(opt.seed, std::uint64_t(i));
          const double d = rng.unit_vector3().dot(rng.unit_vector3());
          const double d1 = opt.delta1.value_or(0.1 + rng.next_unit() * (pi<double> / 2 - 0.1));
          const double d2 = opt.delta2.value_or(0.1 + rng.next_unit() * (pi<double> / 2 - 0.1));
          const double eta_formula = safe_acos(corner_min_scalar(d, d1, d2));
          const double eta_grid = safe_acos(grid_min_scalar(d, d1, d2, 1024));
          const double err = std::abs(eta_formula - eta_grid);
          red.worst[w] = std::max(red.worst[w], err);
          if (err > rep.tolerance) ++red.violations[w];
          if (std::abs(d) < 1 - 1e-9 && !(eta_formula < d1 + d2)) ++red.violations[w];
        }
      });
      rep.violations = red.total_violations();
      rep.worst_slack = red.max_worst();
      rep.pass = rep.violations == 0;
      break;
    }

    case Property::AxiscapBound: {
      rep.description = "sampled axis-cap products stay inside the summed enclosing cap";
      rep.tolerance = 1e-9;
      rep.n = opt.n.value_or(10000);
      const AxisCapd a(meta.unit_vector3(), pick(opt.phi1, pi<double> / 3), pick(opt.xi1, pi<double> / 6));
      const AxisCapd b(meta.unit_vector3(), pick(opt.phi2, pi<double> / 3), pick(opt.xi2, pi<double> / 6));
      rep.params = {{"phi1", a.phi}, {"xi1", a.xi}, {"phi2", b.phi}, {"xi2", b.xi}};
      const ProductResultd res = axiscap_bound(a, b);
      if (res.has_note(ProductNote::FullSphere)) {
        rep.notes.push_back("FULL_SPHERE");
        rep.pass = true;
        break;
      }
      const SphericalCapd cap = *res.enclosing_cap;
      const double bound = std::cos(cap.t);
      detail::Reduction red(-2);
      parallel_for(rep.n, [&](long bg, long e, unsigned w) {
        for (long i = bg; i < e; ++i) {
          RandomStream ra(opt.seed, 2 * std::uint64_t(i)), rb(opt.seed, 2 * std::uint64_t(i) + 1);
          const UnitQuatd u = detail::draw_point(RotationSetd(a), ra, SampleMode::Interior, nullptr);
          const UnitQuatd v = detail::draw_point(RotationSetd(b), rb, SampleMode::Interior, nullptr);
          const double slack = bound - inner((u * v).quat(), cap.center.quat());
          red.worst[w] = std::max(red.worst[w], slack);
          if (slack > rep.tolerance) ++red.violations[w];
        }
      });
      rep.violations = red.total_violations();
      rep.worst_slack = red.max_worst();
      rep.pass = rep.violations == 0;
      break;
    }

    case Property::AxiscapSharpHalfpi: {
      rep.description = "the summed axis-cap bound is attained by an antipodal boundary pair";
      rep.tolerance = 1e-12;
      rep.n = opt.n.value_or(10000);
      const double phi = pick(opt.phi, pi<double> / 2);
      const double xi = pick(opt.xi, pi<double> / 6);
      rep.params = {{"phi", phi}, {"xi", xi}};
      rep.notes.push_back("STRUCTURED_CANDIDATES");
      const Vector3d c = meta.unit_vector3();
      const AxisCapd a(c, phi, xi);
      const double total = 2 * axiscap_enclosing_radius(phi, xi);
      const UnitQuatd center = exp_pure(phi * c) * exp_pure(phi * c);
      const double bound = std::cos(total);
      const Eigen::Matrix<double, 3, 2> e = orthogonal_complement(c);
      double gap = 2;  // min over candidates of <product, center> - cos(total)
      for (long i = 0; i < rep.n; ++i) {
        RandomStream rng(opt.seed, std::uint64_t(i));
        const double az = 2 * pi<double> * rng.next_unit();
        const Vector3d v = std::cos(az) * e.col(0) + std::sin(az) * e.col(1);
        const Vector3d m = std::cos(xi) * c + std::sin(xi) * v;
        const Vector3d mn = std::cos(xi) * c - std::sin(xi) * v;
        const UnitQuatd antipodal = a.point(m) * a.point(mn);
        const UnitQuatd aligned = a.point(m) * a.point(m);
        gap = std::min(gap, inner(antipodal.quat(), center.quat()) - bound);
        gap = std::min(gap, inner(aligned.quat(), center.quat()) - bound);
      }
      rep.worst_slack = gap;
      if (gap < -1e-9) ++rep.violations;  // candidate escaped the bound itself
      if (gap > rep.tolerance) ++rep.violations;  // bound not attained
      rep.pass = rep.violations == 0;
      break;
    }

    case Property::BchConsistency: {
      rep.description = "axis-angle composition agrees with the matrix exp/log route";
      rep.tolerance = 1e-9;
      rep.n = opt.n.value_or(10000);
      detail::Reduction red(0);
      parallel_for(rep.n, [&](long bg, long e, unsigned w) {
        for (long i = bg; i < e; ++i) {
          RandomStream rng(opt.seed, std::uint64_t(i));
          const Vector3d v1 = (rng.next_unit() * (pi<double> - 1e-3)) * rng.unit_vector3();
          const Vector3d v2 = (rng.next_unit() * (pi<double> - 1e-3)) * rng.unit_vector3();
          const Vector3d via_quat = bch(v1, v2);
          if (via_quat.norm() > pi<double> - 1e-3) continue;  // excluded near the cut locus
          const Vector3d via_matrix = log_so3(Matrix3<double>(exp_so3(v1) * exp_so3(v2)));
          const double err = (via_quat - via_matrix).norm();
          red.worst[w] = std::max(red.worst[w], err);
          if (err > rep.tolerance) ++red.violations[w];
        }
      });
      rep.violations = red.total_violations();
      rep.worst_slack = red.max_worst();
      rep.pass = rep.violations == 0;
      break;
    }

    case Property::BoundaryInProductOfBoundaries: {
      rep.description = "product boundary points factor into boundary pairs; interior pairs stay interior";
      rep.tolerance = 1e-9;
      rep.n = opt.n.value_or(10000);
      const double s = pick(opt.s, 0.7), t = pick(opt.t, 0.6);
      rep.params = {{"s", s}, {"t", t}};
      if (s + t >= pi<double> - 0.01) throw UsageError("property needs s + t < pi");
      const UnitQuatd u0 = detail::random_unit(meta), v0 = detail::random_unit(meta);
      const RotationSetd cu{SphericalCapd(u0, s)}, cv{SphericalCapd(v0, t)};
      const UnitQuatd center = u0 * v0;
      const SphericalCapd inner_cap(u0, std::max(s - 0.01, s / 2));
      detail::Reduction red(0);
      parallel_for(rep.n, [&](long bg, long e, unsigned w) {
        for (long i = bg; i < e; ++i) {
          RandomStream rng(opt.seed, std::uint64_t(i));
          if (i % 2 == 0) {
            // boundary reproduction: every sampled product-boundary point
            // factors into same-axis boundary points of the operands
            const Vector4d dir = orthogonal_complement(Vector4d(center.coeffs())) * rng.unit_vector3();
            const UnitQuatd x(Quatd(Vector4d(std::cos(s + t) * center.coeffs() + std::sin(s + t) * dir)));
            const Quatd y = u0.conjugate().quat() * x.quat() * v0.conjugate().quat();
            const Vector3d p = y.vec().normalized();
            const UnitQuatd u = u0 * exp_pure(s * p);
            const UnitQuatd v = exp_pure(t * p) * v0;
            const double err = ((u * v).coeffs() - x.coeffs()).norm();
            red.worst[w] = std::max(red.worst[w], err);
            if (err > rep.tolerance || !on_boundary(cu, u, 1e-9) || !on_boundary(cv, v, 1e-9))
              ++red.violations[w];
          } else {
            // interior x boundary never reaches the product boundary plane
            const UnitQuatd u = detail::draw_point(RotationSetd(inner_cap), rng, SampleMode::Interior, nullptr);
            const UnitQuatd v = detail::draw_point(cv, rng, SampleMode::Boundary, nullptr);
            const double margin = inner((u * v).quat(), center.quat()) - std::cos(s + t);
            if (margin <= rep.tolerance) ++red.violations[w];
          }
        }
      });
      rep.violations = red.total_violations();
      rep.worst_slack = red.max_worst();
      rep.pass = rep.violations == 0;
      break;
    }

    case Property::NecessaryFilter: {
      rep.description = "tangent-plane matching agrees with the common-axis attainment criterion on cap boundaries";
      rep.tolerance = 1e-9;
      rep.n = opt.n.value_or(10000);
      const double s = pick(opt.s, 0.7), t = pick(opt.t, 0.6);
      rep.params = {{"s", s}, {"t", t}};
      const UnitQuatd u0 = detail::random_unit(meta), v0 = detail::random_unit(meta);
      const RotationSetd cu{SphericalCapd(u0, s)}, cv{SphericalCapd(v0, t)};
      long violations = 0;
      for (long i = 0; i < rep.n; ++i) {
        RandomStream rng(opt.seed, std::uint64_t(i));
        const Vector3d m = rng.unit_vector3();
        const Vector3d n = i % 2 == 0 ? m : rng.unit_vector3();  // half constructed common-axis
        const UnitQuatd u = u0 * exp_pure(s * m);
        const UnitQuatd v = exp_pure(t * n) * v0;
        const bool filter = necessary_condition(cu, u, cv, v);
        const Quatd y = (u0.conjugate() * u).quat() * (v * v0.conjugate()).quat();
        const bool attains = std::abs(y.w() - std::cos(s + t)) <= rep.tolerance;
        if (filter != attains) ++violations;
      }
      rep.violations = violations;
      rep.worst_slack = 0;
      rep.pass = rep.violations == 0;
      break;
    }
  }

  rep.runtime_sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace qmink
