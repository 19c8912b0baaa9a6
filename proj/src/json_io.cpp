#include "capbody/json_io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace capbody {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& what) {
  throw std::invalid_argument(what);
}

const json& field(const json& j, const char* key) {
  if (!j.is_object()) fail("expected a JSON object");
  const auto it = j.find(key);
  if (it == j.end()) fail(std::string("missing field \"") + key + "\"");
  return *it;
}

int int_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number_integer())
    fail(std::string("field \"") + key + "\" must be an integer");
  return v.get<int>();
}

double double_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number())
    fail(std::string("field \"") + key + "\" must be a number");
  return v.get<double>();
}

json vector_to_json(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Vector vector_from_json(const json& a, int dim, const char* what) {
  if (!a.is_array() || static_cast<int>(a.size()) != dim)
    fail(std::string(what) + " must be an array of length " +
         std::to_string(dim));
  Vector v(dim);
  for (int i = 0; i < dim; ++i) {
    if (!a[static_cast<size_t>(i)].is_number())
      fail(std::string(what) + " must contain numbers");
    v[i] = a[static_cast<size_t>(i)].get<double>();
    if (!std::isfinite(v[i])) fail(std::string(what) + " must be finite");
  }
  return v;
}

std::string status_name(VerifyStatus s) {
  switch (s) {
    case VerifyStatus::certified:
      return "certified";
    case VerifyStatus::probabilistic:
      return "probabilistic";
    case VerifyStatus::unverified:
      break;
  }
  return "unverified";
}

VerifyStatus status_from_name(const std::string& name) {
  if (name == "certified") return VerifyStatus::certified;
  if (name == "probabilistic") return VerifyStatus::probabilistic;
  if (name == "unverified") return VerifyStatus::unverified;
  fail("unknown verification status \"" + name + "\"");
}

}  // namespace

std::string symmetry_name(Symmetry s) {
  switch (s) {
    case Symmetry::origin:
      return "origin";
    case Symmetry::unconditional:
      return "unconditional";
    case Symmetry::none:
      break;
  }
  return "none";
}

Symmetry symmetry_from_name(const std::string& name) {
  if (name == "none") return Symmetry::none;
  if (name == "origin") return Symmetry::origin;
  if (name == "unconditional") return Symmetry::unconditional;
  fail("unknown symmetry \"" + name + "\"");
}

nlohmann::json instance_to_json(const SpikyBall& ball) {
  json j;
  j["dim"] = ball.dim;
  j["symmetry"] = symmetry_name(ball.symmetry);
  json verts = json::array();
  for (const auto& x : ball.vertices) verts.push_back(vector_to_json(x));
  j["vertices"] = std::move(verts);
  return j;
}

SpikyBall instance_from_json(const nlohmann::json& j, const Tolerance& tol) {
  SpikyBall ball;
  ball.dim = int_field(j, "dim");
  if (ball.dim < 2) fail("dim must be >= 2");
  const json& sym = field(j, "symmetry");
  if (!sym.is_string()) fail("field \"symmetry\" must be a string");
  ball.symmetry = symmetry_from_name(sym.get<std::string>());
  const json& verts = field(j, "vertices");
  if (!verts.is_array() || verts.empty())
    fail("field \"vertices\" must be a nonempty array");
  for (size_t i = 0; i < verts.size(); ++i)
    ball.vertices.push_back(vector_from_json(
        verts[i], ball.dim, ("vertices[" + std::to_string(i) + "]").c_str()));
  validate_instance(ball, tol);
  return ball;
}

nlohmann::json cover_to_json(const CoveringSpec& spec) {
  json j;
  j["sphere_dim"] = spec.sphere_dim;
  j["radius"] = spec.radius;
  json centers = json::array();
  for (const auto& c : spec.centers) centers.push_back(vector_to_json(c.vec()));
  j["centers"] = std::move(centers);
  j["verified"] = status_name(spec.verified);
  return j;
}

CoveringSpec cover_from_json(const nlohmann::json& j) {
  CoveringSpec spec;
  spec.sphere_dim = int_field(j, "sphere_dim");
  if (spec.sphere_dim < 1) fail("sphere_dim must be >= 1");
  spec.radius = double_field(j, "radius");
  if (!(spec.radius > 0.0) || !(spec.radius < M_PI))
    fail("cover radius must lie in (0, pi)");
  const json& centers = field(j, "centers");
  if (!centers.is_array() || centers.empty())
    fail("field \"centers\" must be a nonempty array");
  for (size_t i = 0; i < centers.size(); ++i) {
    const Vector v = vector_from_json(
        centers[i], spec.sphere_dim + 1,
        ("centers[" + std::to_string(i) + "]").c_str());
    if (std::abs(v.norm() - 1.0) > 1e-6)
      fail("centers[" + std::to_string(i) + "] is not unit length");
    spec.centers.push_back(UnitVector::normalized(v));
  }
  const json& verified = field(j, "verified");
  if (!verified.is_string()) fail("field \"verified\" must be a string");
  spec.verified = status_from_name(verified.get<std::string>());
  return spec;
}

nlohmann::json directions_to_json(const DirectionSet& dirs) {
  json j;
  j["dim"] = dirs.dim;
  json arr = json::array();
  for (const auto& u : dirs.directions) arr.push_back(vector_to_json(u.vec()));
  j["directions"] = std::move(arr);
  return j;
}

DirectionSet directions_from_json(const nlohmann::json& j) {
  DirectionSet dirs;
  dirs.dim = int_field(j, "dim");
  if (dirs.dim < 2) fail("dim must be >= 2");
  const json& arr = field(j, "directions");
  if (!arr.is_array() || arr.empty())
    fail("field \"directions\" must be a nonempty array");
  for (size_t i = 0; i < arr.size(); ++i) {
    const Vector v = vector_from_json(
        arr[i], dirs.dim, ("directions[" + std::to_string(i) + "]").c_str());
    if (std::abs(v.norm() - 1.0) > 1e-6)
      fail("directions[" + std::to_string(i) + "] is not unit length");
    dirs.push(UnitVector::normalized(v));
  }
  return dirs;
}

nlohmann::json report_to_json(const IlluminationReport& report) {
  json j;
  j["verdict"] = report.verdict;
  j["hull_full"] = report.hull_full;
  j["min_margin"] = report.min_margin;
  j["witness"] = report.witness;
  j["margins"] = report.margins;
  return j;
}

nlohmann::json cover_report_to_json(const CoverReport& report) {
  json j;
  j["status"] = status_name(report.status);
  j["min_margin"] = report.min_margin;
  j["checked_points"] = report.checked_points;
  j["note"] = report.note;
  if (report.uncovered_witness)
    j["uncovered_witness"] = vector_to_json(*report.uncovered_witness);
  return j;
}

nlohmann::json piercing_to_json(const PiercingSolution& sol) {
  json j;
  json pts = json::array();
  for (const auto& p : sol.points) pts.push_back(vector_to_json(p));
  j["points"] = std::move(pts);
  j["witness"] = sol.witness;
  j["optimal"] = sol.optimal;
  j["min_margin"] = sol.min_margin;
  return j;
}

nlohmann::json construction_to_json(const ConstructionResult& result) {
  json j;
  j["directions"] = directions_to_json(result.directions);
  j["report"] = report_to_json(result.report);
  j["method"] = result.method;
  j["stated_bound"] = result.stated_bound;
  j["piercing_count"] = result.piercing_count;
  j["cover_size"] = result.cover_size;
  if (result.phi > 0.0) j["phi"] = result.phi;
  j["two_d_sufficient"] = result.two_d_sufficient;
  return j;
}

void write_bounds_csv(std::ostream& out, const std::vector<BoundsRow>& rows) {
  out << "d,omega_pi6,omega_pi4,dumer_pi6,dumer_pi4,spiky_bound,"
         "capbody_bound,f_ratio,g_ratio\n";
  char buf[64];
  const auto put = [&](double v, char sep) {
    std::snprintf(buf, sizeof buf, "%.17g%c", v, sep);
    out << buf;
  };
  for (const auto& r : rows) {
    out << r.d << ',';
    put(r.omega_pi6, ',');
    put(r.omega_pi4, ',');
    put(r.dumer_pi6, ',');
    put(r.dumer_pi4, ',');
    put(r.spiky, ',');
    put(r.capbody, ',');
    put(r.f_ratio, ',');
    put(r.g_ratio, '\n');
  }
}

nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("invalid JSON in " + path + ": " + e.what());
  }
  return j;
}

void save_json_file(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open file for write: " + path);
  out << j.dump(2) << '\n';
}

}  // namespace capbody
