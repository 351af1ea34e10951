#pragma once

#include "qmink/cloud.hpp"
#include "qmink/parallel.hpp"
#include "qmink/rng.hpp"
#include "qmink/sets.hpp"

namespace qmink {

enum class SampleMode { Interior, Boundary };

namespace detail {

inline std::vector<std::string> sample_tag_names(const RotationSetd& set) {
  if (std::holds_alternative<SphericalCapd>(set)) return {"alpha"};
  if (std::holds_alternative<Arcd>(set)) return {"s"};
  if (std::holds_alternative<AxisCapd>(set)) return {"u", "v"};
  return {};
}

/// One draw from a set. Interior mode is uniform with respect to the natural
/// measure (caps: S^3 surface measure, via sin^2 rejection on the geodesic
/// radius; arcs: arc length; axis caps: area of the axis cap on S^2).
/// Boundary mode draws from the boundary described by on_boundary. Tags
/// receive the generating parameters named by sample_tag_names.
inline UnitQuatd draw_point(const RotationSetd& set, RandomStream& rng, SampleMode mode, double* tags) {
  if (const auto* s = std::get_if<Singletond>(&set)) {
    if (mode == SampleMode::Boundary) throw DomainError("singleton has no boundary to sample");
    return s->value;
  }
  if (std::holds_alternative<FullSphered>(set)) {
    if (mode == SampleMode::Boundary) throw DomainError("S^3 has empty boundary");
    return UnitQuatd(Quatd(rng.unit_vector4()));
  }
  if (const auto* cap = std::get_if<SphericalCapd>(&set)) {
    double alpha = cap->t;
    if (mode == SampleMode::Interior && cap->t > 0) {
      const double envelope = std::pow(std::sin(std::min(cap->t, pi<double> / 2)), 2);
      for (;;) {
        const double a = rng.next_unit() * cap->t;
        if (rng.next_unit() * envelope <= std::pow(std::sin(a), 2)) {
          alpha = a;
          break;
        }
      }
    }
    const Eigen::Matrix<double, 4, 3> basis = orthogonal_complement(Vector4d(cap->center.coeffs()));
    const Vector4d e = basis * rng.unit_vector3();
    if (tags) tags[0] = alpha;
    return UnitQuatd(Quatd(Vector4d(std::cos(alpha) * cap->center.coeffs() + std::sin(alpha) * e)));
  }
  if (const auto* arc = std::get_if<Arcd>(&set)) {
    double s;
    if (mode == SampleMode::Interior) {
      s = arc->phi + (2 * rng.next_unit() - 1) * arc->delta;
    } else {
      if (arc->delta >= pi<double>) throw DomainError("full circle has no endpoints");
      s = arc->phi + (rng.next_unit() < 0.5 ? -arc->delta : arc->delta);
    }
    if (tags) tags[0] = s;
    return arc->point(s);
  }
  const auto& x = std::get<AxisCapd>(set);
  const double z = mode == SampleMode::Interior
                       ? 1.0 - rng.next_unit() * (1.0 - std::cos(x.xi))
                       : std::cos(x.xi);
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  const double az = 2 * pi<double> * rng.next_unit() - pi<double>;
  const Eigen::Matrix<double, 3, 2> e = orthogonal_complement(x.axis);
  const Vector3d m = z * x.axis + r * (std::cos(az) * e.col(0) + std::sin(az) * e.col(1));
  if (tags) {
    tags[0] = az;
    tags[1] = safe_acos(z);
  }
  return x.point(m.normalized());
}

}  // namespace detail

/// n points of the set (Interior) or of its boundary (Boundary),
/// deterministic for a fixed seed and independent of thread count.
inline PointCloud sample(const RotationSetd& set, long n, std::uint64_t seed, SampleMode mode) {
  if (n < 1) throw DomainError("need at least one sample");
  // surface the per-type boundary errors before the parallel fill
  {
    RandomStream probe(seed, 0);
    double tmp[2];
    (void)detail::draw_point(set, probe, mode, tmp);
  }
  PointCloud cloud;
  cloud.frame = Frame::S3;
  cloud.tag_names = detail::sample_tag_names(set);
  cloud.points.resize(n, 4);
  cloud.tags.resize(n, Eigen::Index(cloud.tag_names.size()));
  parallel_for(n, [&](long begin, long end, unsigned) {
    double tags[2] = {0, 0};
    for (long i = begin; i < end; ++i) {
      RandomStream rng(seed, std::uint64_t(i));
      cloud.points.row(i) = detail::draw_point(set, rng, mode, tags).coeffs();
      for (Eigen::Index k = 0; k < cloud.tags.cols(); ++k) cloud.tags(i, k) = tags[k];
    }
  });
  return cloud;
}

}  // namespace qmink
