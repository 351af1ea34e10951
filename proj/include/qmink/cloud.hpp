#pragma once

#include <string>
#include <vector>

#include "qmink/quat.hpp"

namespace qmink {

enum class Frame { S3, R3Stereo, R3Bch };

inline const char* to_string(Frame f) {
  switch (f) {
    case Frame::S3: return "S3";
    case Frame::R3Stereo: return "R3_STEREO";
    case Frame::R3Bch: return "R3_BCH";
  }
  return "?";
}

/// Point cloud in R^4 (S3 frame, columns w,x,y,z) or R^3 (chart frames,
/// columns x,y,z), with optional per-point parameter tags.
struct PointCloud {
  Frame frame = Frame::S3;
  Eigen::MatrixXd points;                // n x 4 or n x 3
  std::vector<std::string> tag_names;
  Eigen::MatrixXd tags;                  // n x tag_names.size()
  std::size_t dropped = 0;               // points removed by a chart pole

  long size() const { return points.rows(); }
  int dim() const { return int(points.cols()); }

  UnitQuatd unit_at(long i) const { return UnitQuatd(Quatd(Vector4d(points.row(i)))); }
};

}  // namespace qmink
