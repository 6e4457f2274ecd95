#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "casimir/errors.hpp"
#include "casimir/geometry.hpp"

namespace casimir {

namespace {

std::vector<double> generator_args(const std::string& spec, std::string& name) {
  const auto open = spec.find('(');
  const auto close = spec.rfind(')');
  if (open == std::string::npos || close == std::string::npos || close < open || close + 1 != spec.size()) {
    throw GeometryError("malformed generator '" + spec + "'");
  }
  name = spec.substr(0, open);
  std::string inner = spec.substr(open + 1, close - open - 1);
  for (char& c : inner)
    if (c == ',') c = ' ';
  std::istringstream ss(inner);
  std::vector<double> args;
  double x;
  while (ss >> x) args.push_back(x);
  if (!ss.eof()) throw GeometryError("non-numeric argument in '" + spec + "'");
  return args;
}

int as_int(double x, const std::string& spec) {
  if (x != std::floor(x)) throw GeometryError("integer argument expected in '" + spec + "'");
  return static_cast<int>(x);
}

double number(const std::string& tok, long line) {
  try {
    size_t used = 0;
    const double x = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return x;
  } catch (const std::exception&) {
    throw ParseError("expected a number, got '" + tok + "'", line);
  }
}

}  // namespace

TriangleMesh mesh_from_generator(const std::string& spec) {
  std::string name;
  const auto a = generator_args(spec, name);
  if (name == "sphere" && a.size() == 2) return generate_sphere(a[0], as_int(a[1], spec));
  if (name == "capsule" && a.size() == 3) return generate_capsule(a[0], a[1], as_int(a[2], spec));
  if (name == "tetrahedron" && a.size() == 2) return generate_tetrahedron(a[0], as_int(a[1], spec));
  throw GeometryError("unknown generator '" + spec +
                      "' (expected sphere(R,s), capsule(R,L,res) or tetrahedron(L,s))");
}

Configuration parse_geometry(std::istream& in, const std::string& base_dir) {
  std::map<std::string, std::shared_ptr<const TriangleMesh>> meshes;
  std::map<const TriangleMesh*, std::shared_ptr<const RwgBasis>> bases;
  std::vector<ObjectInstance> objects;
  std::string raw;
  long line_no = 0;

  while (std::getline(in, raw)) {
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream ss(raw);
    std::vector<std::string> tok;
    for (std::string t; ss >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    if (tok[0] != "object") throw ParseError("unknown directive '" + tok[0] + "'", line_no);
    if (tok.size() < 3) throw ParseError("object needs a label and a shape", line_no);
    const std::string label = tok[1];
    for (const auto& o : objects)
      if (o.label() == label) throw ParseError("duplicate object label '" + label + "'", line_no);

    size_t k = 2;
    std::string key;
    if (tok[k] == "mesh") {
      if (tok.size() < 4) throw ParseError("mesh needs a path", line_no);
      std::filesystem::path p(tok[3]);
      if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
      key = "file:" + p.lexically_normal().string();
      k = 4;
    } else {
      // Generator spec may contain spaces: join tokens up to the closing ')'.
      std::string spec = tok[k++];
      while (spec.find(')') == std::string::npos && k < tok.size()) spec += tok[k++];
      key = spec;
    }

    auto it = meshes.find(key);
    if (it == meshes.end()) {
      std::shared_ptr<const TriangleMesh> mesh;
      try {
        if (key.rfind("file:", 0) == 0) {
          mesh = std::make_shared<const TriangleMesh>(read_msh_file(key.substr(5)));
        } else {
          mesh = std::make_shared<const TriangleMesh>(mesh_from_generator(key));
        }
      } catch (const GeometryError& e) {
        throw ParseError(e.what(), line_no);
      }
      it = meshes.emplace(key, mesh).first;
      bases.emplace(mesh.get(), std::make_shared<const RwgBasis>(mesh));
    }

    RigidTransform t;
    Vec3 pivot = Vec3::Zero();
    while (k < tok.size()) {
      const std::string& clause = tok[k];
      if (clause == "rot") {
        if (k + 2 >= tok.size()) throw ParseError("rot needs <deg> <axis>", line_no);
        const double deg = number(tok[k + 1], line_no);
        Axis axis;
        try {
          axis = parse_axis(tok[k + 2]);
        } catch (const GeometryError& e) {
          throw ParseError(e.what(), line_no);
        }
        t = compose(RigidTransform::rotate_deg(axis, deg, pivot), t);
        k += 3;
      } else if (clause == "move") {
        if (k + 3 >= tok.size()) throw ParseError("move needs <dx> <dy> <dz>", line_no);
        const Vec3 d(number(tok[k + 1], line_no), number(tok[k + 2], line_no), number(tok[k + 3], line_no));
        t = compose(RigidTransform::translate(d), t);
        k += 4;
      } else if (clause == "pivot") {
        if (k + 3 >= tok.size()) throw ParseError("pivot needs <x> <y> <z>", line_no);
        pivot = Vec3(number(tok[k + 1], line_no), number(tok[k + 2], line_no), number(tok[k + 3], line_no));
        k += 4;
      } else {
        throw ParseError("unknown clause '" + clause + "'", line_no);
      }
    }
    objects.emplace_back(label, it->second, bases.at(it->second.get()), t);
  }
  if (objects.empty()) throw ParseError("geometry defines no objects", line_no);
  return Configuration(std::move(objects));
}

Configuration read_geometry_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open geometry file '" + path + "'", 0);
  return parse_geometry(in, std::filesystem::path(path).parent_path().string());
}

}  // namespace casimir
