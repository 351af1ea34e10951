// qmink command-line front end: closed-form products of rotation sets on S^3,
// seeded verification runs, and chart point-cloud export.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qmink/qmink.hpp"

namespace {

using namespace qmink;

constexpr double kPi = pi<double>;

json preset_pair(const std::string& name) {
  if (name == "example1")
    return {{"a", {{"type", "arc"}, {"axis", {0, 1, 0}}, {"phi", 0.0}, {"delta", kPi}}},
            {"b", {{"type", "arc"}, {"axis", {0, 0, 1}}, {"phi", 0.0}, {"delta", kPi}}}};
  if (name == "example3")
    return {{"a", {{"type", "arc"}, {"axis", {0, 1, 0}}, {"phi", 0.0}, {"delta", kPi / 4}}},
            {"b", {{"type", "axis_cap"}, {"axis", {0, 0, 1}}, {"phi", kPi / 8}, {"xi", kPi / 8}}}};
  if (name == "example5")
    return {{"a", {{"type", "axis_cap"}, {"axis", {0, 1, 0}}, {"phi", kPi / 8}, {"xi", kPi / 8}}},
            {"b", {{"type", "axis_cap"}, {"axis", {0, 0, 1}}, {"phi", kPi / 8}, {"xi", kPi / 8}}}};
  throw UsageError("unknown preset: " + name + " (expected example1|example3|example5)");
}

json parse_inline(const std::string& text, const char* what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw UsageError(std::string("malformed JSON for ") + what);
  return j;
}

std::pair<json, json> descriptor_pair(const std::string& a, const std::string& b, const std::string& file,
                                      const std::string& preset) {
  if (!preset.empty()) {
    const json p = preset_pair(preset);
    return {p["a"], p["b"]};
  }
  if (!file.empty()) {
    std::ifstream is(file);
    if (!is) throw IoError("cannot open descriptor file: " + file);
    json j = json::parse(is, nullptr, false);
    if (j.is_discarded() || !j.contains("a") || !j.contains("b"))
      throw UsageError("descriptor file must hold {\"a\":..., \"b\":...}");
    return {j["a"], j["b"]};
  }
  if (a.empty() || b.empty()) throw UsageError("need --a and --b descriptors (or --file / --preset)");
  return {parse_inline(a, "--a"), parse_inline(b, "--b")};
}

std::string resolve_format(std::string format, const std::string& out) {
  if (!format.empty()) return format;
  if (out.size() >= 4 && out.substr(out.size() - 4) == ".ply") return "ply";
  return "csv";
}

void write_cloud(const PointCloud& cloud, const std::string& out, const std::string& format) {
  if (format == "ply")
    write_file(out, [&](std::ostream& os) { write_cloud_ply(cloud, os); }, true);
  else
    write_file(out, [&](std::ostream& os) { write_cloud_csv(cloud, os); }, false);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minkowski products of rotation sets on the unit 3-sphere"};
  app.require_subcommand(1);

  std::string a_text, b_text, file, preset, method = "bch", out, format, property_name_arg, report_out;
  long n = 10000;
  std::uint64_t seed = 42;
  double tol = 1e-9;

  // verify parameters; only flags the user passes are forwarded
  double s = 0, t = 0, phi = 0, phi1 = 0, phi2 = 0, xi = 0, xi1 = 0, xi2 = 0, delta1 = 0, delta2 = 0;

  CLI::App* cmd_product = app.add_subcommand("product", "closed-form product / bound of two set descriptors");
  cmd_product->add_option("--a", a_text, "inline JSON descriptor of the left operand");
  cmd_product->add_option("--b", b_text, "inline JSON descriptor of the right operand");
  cmd_product->add_option("--file", file, "JSON file holding {\"a\":...,\"b\":...}");
  cmd_product->add_option("--out", out, "also write the result JSON here");

  CLI::App* cmd_verify = app.add_subcommand("verify", "run a named verification property");
  cmd_verify->add_option("property", property_name_arg, "property name, e.g. CAP_CLOSURE")->required();
  cmd_verify->add_option("--n", n, "sample count");
  cmd_verify->add_option("--seed", seed, "RNG seed");
  auto* o_s = cmd_verify->add_option("--s", s);
  auto* o_t = cmd_verify->add_option("--t", t);
  auto* o_phi = cmd_verify->add_option("--phi", phi);
  auto* o_phi1 = cmd_verify->add_option("--phi1", phi1);
  auto* o_phi2 = cmd_verify->add_option("--phi2", phi2);
  auto* o_xi = cmd_verify->add_option("--xi", xi);
  auto* o_xi1 = cmd_verify->add_option("--xi1", xi1);
  auto* o_xi2 = cmd_verify->add_option("--xi2", xi2);
  auto* o_d1 = cmd_verify->add_option("--delta1", delta1);
  auto* o_d2 = cmd_verify->add_option("--delta2", delta2);
  cmd_verify->add_option("--out", report_out, "write the report JSON here");

  CLI::App* cmd_export = app.add_subcommand("export", "sample a product cloud and write its chart image");
  cmd_export->add_option("--a", a_text, "inline JSON descriptor of the left operand");
  cmd_export->add_option("--b", b_text, "inline JSON descriptor of the right operand");
  cmd_export->add_option("--file", file, "JSON file holding {\"a\":...,\"b\":...}");
  cmd_export->add_option("--preset", preset, "example1 | example3 | example5");
  cmd_export->add_option("--method", method, "stereo | bch")->check(CLI::IsMember({"stereo", "bch"}));
  cmd_export->add_option("--n", n, "sample count");
  cmd_export->add_option("--seed", seed, "RNG seed");
  cmd_export->add_option("--out", out, "output path")->required();
  cmd_export->add_option("--format", format, "csv | ply")->check(CLI::IsMember({"csv", "ply"}));

  CLI::App* cmd_project = app.add_subcommand("project", "project an S3 cloud CSV into a chart");
  std::string in_path;
  cmd_project->add_option("--in", in_path, "input CSV with w,x,y,z columns")->required();
  cmd_project->add_option("--method", method, "stereo | bch")->check(CLI::IsMember({"stereo", "bch"}));
  cmd_project->add_option("--out", out, "output path")->required();
  cmd_project->add_option("--format", format, "csv | ply")->check(CLI::IsMember({"csv", "ply"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(cmd_product)) {
      auto [ja, jb] = descriptor_pair(a_text, b_text, file, preset);
      const RotationSetd A = set_from_json(ja), B = set_from_json(jb);
      const ProductResultd res = product(A, B);
      json output = {{"config", {{"command", "product"}, {"a", ja}, {"b", jb}, {"tol", tol}}},
                     {"result", product_result_to_json(res)}};
      std::cout << output.dump(2) << std::endl;
      if (!out.empty())
        write_file(out, [&](std::ostream& os) { os << output.dump(2) << '\n'; }, false);
      return 0;
    }

    if (app.got_subcommand(cmd_verify)) {
      const Property prop = parse_property(property_name_arg);
      VerifyOptions vo;
      if (cmd_verify->count("--n")) vo.n = n;
      vo.seed = seed;
      if (o_s->count()) vo.s = s;
      if (o_t->count()) vo.t = t;
      if (o_phi->count()) vo.phi = phi;
      if (o_phi1->count()) vo.phi1 = phi1;
      if (o_phi2->count()) vo.phi2 = phi2;
      if (o_xi->count()) vo.xi = xi;
      if (o_xi1->count()) vo.xi1 = xi1;
      if (o_xi2->count()) vo.xi2 = xi2;
      if (o_d1->count()) vo.delta1 = delta1;
      if (o_d2->count()) vo.delta2 = delta2;
      const VerificationReport rep = verify(prop, vo);
      json output = {{"config", {{"command", "verify"}, {"property", rep.property}, {"n", rep.n},
                                 {"seed", rep.seed}, {"tol", rep.tolerance}}},
                     {"report", report_to_json(rep)}};
      std::cout << output.dump(2) << std::endl;
      if (!report_out.empty())
        write_file(report_out, [&](std::ostream& os) { os << output.dump(2) << '\n'; }, false);
      return rep.pass ? 0 : 1;
    }

    if (app.got_subcommand(cmd_export)) {
      auto [ja, jb] = descriptor_pair(a_text, b_text, file, preset);
      const RotationSetd A = set_from_json(ja), B = set_from_json(jb);
      const std::string fmt = resolve_format(format, out);
      const PointCloud s3 = product_cloud(A, B, n, seed);
      const PointCloud img = project_cloud(s3, method == "stereo" ? Frame::R3Stereo : Frame::R3Bch);
      write_cloud(img, out, fmt);
      json output = {{"config", {{"command", "export"}, {"a", ja}, {"b", jb}, {"method", method},
                                 {"n", n}, {"seed", seed}, {"out", out}, {"format", fmt}}},
                     {"n_points", img.size()},
                     {"dropped", img.dropped},
                     {"frame", to_string(img.frame)}};
      std::cout << output.dump(2) << std::endl;
      return 0;
    }

    if (app.got_subcommand(cmd_project)) {
      std::ifstream is(in_path);
      if (!is) throw IoError("cannot open: " + in_path);
      const PointCloud cloud = read_cloud_csv(is);
      const PointCloud img = project_cloud(cloud, method == "stereo" ? Frame::R3Stereo : Frame::R3Bch);
      const std::string fmt = resolve_format(format, out);
      write_cloud(img, out, fmt);
      json output = {{"config", {{"command", "project"}, {"in", in_path}, {"method", method},
                                 {"out", out}, {"format", fmt}}},
                     {"n_points", img.size()},
                     {"dropped", img.dropped},
                     {"frame", to_string(img.frame)}};
      std::cout << output.dump(2) << std::endl;
      return 0;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << std::endl;
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "usage error: " << e.what() << std::endl;
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << std::endl;
    return 3;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << std::endl;
    return 4;
  }
  return 2;
}
