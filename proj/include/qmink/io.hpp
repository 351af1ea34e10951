#pragma once

#include <fstream>
#include <functional>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "qmink/boundary.hpp"
#include "qmink/cloud.hpp"
#include "qmink/oracle.hpp"
#include "qmink/product.hpp"

namespace qmink {

using json = nlohmann::json;

inline json quat_to_json(const Quatd& q) { return json::array({q.w(), q.x(), q.y(), q.z()}); }
inline json vec3_to_json(const Vector3d& v) { return json::array({v.x(), v.y(), v.z()}); }

namespace detail {

inline Vector4d vec4_from_json(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 4) throw UsageError(std::string(what) + " must be a 4-array [w,x,y,z]");
  for (const auto& e : j)
    if (!e.is_number()) throw UsageError(std::string(what) + " must hold numbers");
  return Vector4d(j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>());
}

inline Vector3d vec3_from_json(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 3) throw UsageError(std::string(what) + " must be a 3-array [x,y,z]");
  for (const auto& e : j)
    if (!e.is_number()) throw UsageError(std::string(what) + " must hold numbers");
  return Vector3d(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

inline double number_field(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number()) throw UsageError(std::string("descriptor needs number \"") + key + '"');
  return j[key].get<double>();
}

}  // namespace detail

/// Set descriptor JSON:
///   {"type":"cap","center":[w,x,y,z],"t":r} | {"type":"arc","axis":[x,y,z],"phi":p,"delta":d}
/// | {"type":"axis_cap","axis":[x,y,z],"phi":p,"xi":x} | {"type":"singleton","q":[w,x,y,z]}
/// | {"type":"full"}
inline json set_to_json(const RotationSetd& set) {
  return std::visit(
      [](const auto& s) -> json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Singletond>) {
          return {{"type", "singleton"}, {"q", quat_to_json(s.value)}};
        } else if constexpr (std::is_same_v<T, SphericalCapd>) {
          return {{"type", "cap"}, {"center", quat_to_json(s.center)}, {"t", s.t}};
        } else if constexpr (std::is_same_v<T, Arcd>) {
          return {{"type", "arc"}, {"axis", vec3_to_json(s.axis)}, {"phi", s.phi}, {"delta", s.delta}};
        } else if constexpr (std::is_same_v<T, AxisCapd>) {
          return {{"type", "axis_cap"}, {"axis", vec3_to_json(s.axis)}, {"phi", s.phi}, {"xi", s.xi}};
        } else {
          return {{"type", "full"}};
        }
      },
      set);
}

inline RotationSetd set_from_json(const json& j) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
    throw UsageError("descriptor must be an object with a \"type\" string");
  const std::string type = j["type"].get<std::string>();
  if (type == "full") return FullSphered{};
  if (type == "singleton") {
    if (!j.contains("q")) throw UsageError("singleton descriptor needs \"q\"");
    return Singletond(UnitQuatd(Quatd(detail::vec4_from_json(j["q"], "q"))));
  }
  if (type == "cap") {
    if (!j.contains("center")) throw UsageError("cap descriptor needs \"center\"");
    return SphericalCapd(UnitQuatd(Quatd(detail::vec4_from_json(j["center"], "center"))),
                         detail::number_field(j, "t"));
  }
  if (type == "arc") {
    if (!j.contains("axis")) throw UsageError("arc descriptor needs \"axis\"");
    return Arcd(detail::vec3_from_json(j["axis"], "axis"), detail::number_field(j, "phi"),
                detail::number_field(j, "delta"));
  }
  if (type == "axis_cap") {
    if (!j.contains("axis")) throw UsageError("axis_cap descriptor needs \"axis\"");
    return AxisCapd(detail::vec3_from_json(j["axis"], "axis"), detail::number_field(j, "phi"),
                    detail::number_field(j, "xi"));
  }
  throw UsageError("unknown set type: " + type);
}

inline json cap_to_json(const SphericalCapd& c) {
  return {{"center", quat_to_json(c.center)}, {"t", c.t}};
}

inline json product_result_to_json(const ProductResultd& r) {
  json j = json::object();
  if (r.exact) j["exact"] = set_to_json(*r.exact);
  if (r.enclosing_cap) j["enclosing_cap"] = cap_to_json(*r.enclosing_cap);
  if (r.surface) {
    j["surface"] = {{"c1", vec3_to_json(r.surface->c1)},     {"c2", vec3_to_json(r.surface->c2)},
                    {"phi1", r.surface->phi1},               {"phi2", r.surface->phi2},
                    {"delta1", r.surface->delta1},           {"delta2", r.surface->delta2}};
  }
  if (!r.operand_caps.empty()) {
    j["operand_caps"] = json::array();
    for (const auto& c : r.operand_caps) j["operand_caps"].push_back(cap_to_json(c));
  }
  j["notes"] = json::array();
  for (ProductNote n : r.notes) j["notes"].push_back(to_string(n));
  return j;
}

inline json verdict_to_json(const BoundaryVerdictd& v) {
  json j = {{"status", to_string(v.status)}, {"max_slack", v.max_slack}};
  if (v.witness) j["witness"] = quat_to_json(*v.witness);
  if (!v.detail.empty()) j["detail"] = v.detail;
  return j;
}

inline json report_to_json(const VerificationReport& r) {
  json j = {{"property", r.property},   {"description", r.description}, {"n_samples", r.n},
            {"violations", r.violations}, {"worst_slack", r.worst_slack}, {"tolerance", r.tolerance},
            {"seed", r.seed},           {"runtime_sec", r.runtime_sec}, {"pass", r.pass}};
  j["notes"] = r.notes;
  j["params"] = json::object();
  for (const auto& [k, v] : r.params) j["params"][k] = v;
  return j;
}

// --- cloud export -----------------------------------------------------------

inline std::vector<std::string> cloud_columns(const PointCloud& cloud) {
  std::vector<std::string> cols =
      cloud.dim() == 4 ? std::vector<std::string>{"w", "x", "y", "z"} : std::vector<std::string>{"x", "y", "z"};
  cols.insert(cols.end(), cloud.tag_names.begin(), cloud.tag_names.end());
  return cols;
}

inline void write_cloud_csv(const PointCloud& cloud, std::ostream& os) {
  const auto cols = cloud_columns(cloud);
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << '\n';
  os << std::setprecision(17);
  for (long i = 0; i < cloud.size(); ++i) {
    for (int k = 0; k < cloud.dim(); ++k) os << (k ? "," : "") << cloud.points(i, k);
    for (Eigen::Index k = 0; k < cloud.tags.cols(); ++k) os << ',' << cloud.tags(i, k);
    os << '\n';
  }
  if (!os) throw IoError("failed writing CSV stream");
}

/// Binary little-endian PLY. Chart-frame clouds write x,y,z first so standard
/// viewers pick them up; the S3 frame appends w, and tags become extra float
/// properties.
inline void write_cloud_ply(const PointCloud& cloud, std::ostream& os) {
  std::vector<std::string> props;
  if (cloud.dim() == 4)
    props = {"x", "y", "z", "w"};
  else
    props = {"x", "y", "z"};
  props.insert(props.end(), cloud.tag_names.begin(), cloud.tag_names.end());

  os << "ply\nformat binary_little_endian 1.0\n";
  os << "element vertex " << cloud.size() << "\n";
  for (const auto& p : props) os << "property float " << p << "\n";
  os << "end_header\n";
  const auto put = [&os](double v) {
    const float f = float(v);
    os.write(reinterpret_cast<const char*>(&f), sizeof(float));
  };
  for (long i = 0; i < cloud.size(); ++i) {
    if (cloud.dim() == 4) {
      put(cloud.points(i, 1)), put(cloud.points(i, 2)), put(cloud.points(i, 3)), put(cloud.points(i, 0));
    } else {
      put(cloud.points(i, 0)), put(cloud.points(i, 1)), put(cloud.points(i, 2));
    }
    for (Eigen::Index k = 0; k < cloud.tags.cols(); ++k) put(cloud.tags(i, k));
  }
  if (!os) throw IoError("failed writing PLY stream");
}

inline PointCloud read_cloud_csv(std::istream& is) {
  std::string header;
  if (!std::getline(is, header)) throw IoError("empty CSV input");
  std::vector<std::string> cols;
  {
    std::stringstream ss(header);
    std::string c;
    while (std::getline(ss, c, ',')) cols.push_back(c);
  }
  int dim = 0;
  if (cols.size() >= 4 && cols[0] == "w" && cols[1] == "x" && cols[2] == "y" && cols[3] == "z")
    dim = 4;
  else if (cols.size() >= 3 && cols[0] == "x" && cols[1] == "y" && cols[2] == "z")
    dim = 3;
  else
    throw UsageError("CSV header must start with w,x,y,z or x,y,z");

  PointCloud cloud;
  cloud.frame = dim == 4 ? Frame::S3 : Frame::R3Stereo;
  cloud.tag_names.assign(cols.begin() + dim, cols.end());
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::vector<double> row;
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (row.size() != cols.size()) throw UsageError("CSV row width does not match header");
    rows.push_back(std::move(row));
  }
  cloud.points.resize(long(rows.size()), dim);
  cloud.tags.resize(long(rows.size()), Eigen::Index(cloud.tag_names.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (int k = 0; k < dim; ++k) cloud.points(long(i), k) = rows[i][std::size_t(k)];
    for (std::size_t k = 0; k < cloud.tag_names.size(); ++k)
      cloud.tags(long(i), Eigen::Index(k)) = rows[i][std::size_t(dim) + k];
  }
  return cloud;
}

inline void write_file(const std::string& path, const std::function<void(std::ostream&)>& writer, bool binary) {
  std::ofstream os(path, binary ? std::ios::binary : std::ios::out);
  if (!os) throw IoError("cannot open for writing: " + path);
  writer(os);
  os.flush();
  if (!os) throw IoError("failed writing: " + path);
}

}  // namespace qmink
