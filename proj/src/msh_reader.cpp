#include <cctype>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "casimir/errors.hpp"
#include "casimir/mesh.hpp"

namespace casimir {

namespace {

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  // Next non-blank line, trailing whitespace stripped. False at end of input.
  bool next(std::string& line) {
    while (std::getline(in_, line)) {
      ++number_;
      while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.pop_back();
      size_t start = 0;
      while (start < line.size() && std::isspace(static_cast<unsigned char>(line[start]))) ++start;
      line.erase(0, start);
      if (!line.empty()) return true;
    }
    return false;
  }

  std::string expect(const char* what) {
    std::string line;
    if (!next(line)) throw ParseError(std::string("unexpected end of file, expected ") + what, number_ + 1);
    return line;
  }

  long number() const { return number_; }

 private:
  std::istream& in_;
  long number_ = 0;
};

long parse_count(const std::string& line, LineReader& r, const char* what) {
  std::istringstream ss(line);
  long n = -1;
  std::string rest;
  if (!(ss >> n) || n < 0 || (ss >> rest)) {
    throw ParseError(std::string("expected ") + what + " count, got '" + line + "'", r.number());
  }
  return n;
}

void expect_end(LineReader& r, const std::string& section) {
  const std::string end = "$End" + section.substr(1);
  const std::string line = r.expect(end.c_str());
  if (line != end) throw ParseError("expected '" + end + "', got '" + line + "'", r.number());
}

}  // namespace

TriangleMesh parse_msh(std::istream& in) {
  LineReader r(in);
  std::string line;
  bool have_format = false;
  bool have_nodes = false;
  bool have_elements = false;
  std::map<long, Vec3> nodes;
  std::vector<std::array<long, 3>> triangles;

  while (r.next(line)) {
    if (line.empty() || line[0] != '$') {
      throw ParseError("expected a section header, got '" + line + "'", r.number());
    }
    if (line == "$MeshFormat") {
      const std::string fmt = r.expect("format line");
      std::istringstream ss(fmt);
      std::string version;
      int file_type = -1, data_size = -1;
      if (!(ss >> version >> file_type >> data_size)) {
        throw ParseError("malformed format line '" + fmt + "'", r.number());
      }
      if (version.rfind("2.", 0) != 0) {
        throw ParseError("unsupported MSH version " + version + " (need 2.2)", r.number());
      }
      if (file_type != 0) throw ParseError("binary MSH files are not supported", r.number());
      expect_end(r, line);
      have_format = true;
    } else if (line == "$Nodes") {
      if (!have_format) throw ParseError("$Nodes before $MeshFormat", r.number());
      const long n = parse_count(r.expect("node count"), r, "node");
      for (long k = 0; k < n; ++k) {
        const std::string row = r.expect("node line");
        std::istringstream ss(row);
        long id;
        double x, y, z;
        if (!(ss >> id >> x >> y >> z)) throw ParseError("malformed node line '" + row + "'", r.number());
        if (!nodes.emplace(id, Vec3(x, y, z)).second) {
          throw ParseError("duplicate node id " + std::to_string(id), r.number());
        }
      }
      expect_end(r, line);
      have_nodes = true;
    } else if (line == "$Elements") {
      if (!have_nodes) throw ParseError("$Elements before $Nodes", r.number());
      const long n = parse_count(r.expect("element count"), r, "element");
      for (long k = 0; k < n; ++k) {
        const std::string row = r.expect("element line");
        std::istringstream ss(row);
        long id, type, ntags;
        if (!(ss >> id >> type >> ntags) || ntags < 0) {
          throw ParseError("malformed element line '" + row + "'", r.number());
        }
        for (long t = 0; t < ntags; ++t) {
          long tag;
          if (!(ss >> tag)) throw ParseError("missing element tag in '" + row + "'", r.number());
        }
        if (type != 2) continue;
        std::array<long, 3> tri{};
        for (auto& v : tri) {
          if (!(ss >> v)) throw ParseError("triangle needs three nodes: '" + row + "'", r.number());
          if (!nodes.count(v)) throw ParseError("unknown node id " + std::to_string(v), r.number());
        }
        triangles.push_back(tri);
      }
      expect_end(r, line);
      have_elements = true;
    } else {
      // Unknown section ($PhysicalNames, $NodeData, ...): skip to its end marker.
      const std::string end = "$End" + line.substr(1);
      const long start = r.number();
      std::string inner;
      bool closed = false;
      while (r.next(inner)) {
        if (inner == end) {
          closed = true;
          break;
        }
      }
      if (!closed) throw ParseError("section " + line + " is never closed", start);
    }
  }

  if (!have_format) throw ParseError("missing $MeshFormat section", r.number());
  if (!have_nodes) throw ParseError("missing $Nodes section", r.number());
  if (!have_elements) throw ParseError("missing $Elements section", r.number());
  if (triangles.empty()) throw ParseError("no three-node triangle elements", r.number());

  // Keep only referenced nodes, renumbered in increasing id order.
  std::map<long, int> index;
  for (const auto& t : triangles)
    for (long v : t) index.emplace(v, 0);
  std::vector<Vec3> vertices;
  std::vector<long> ids;
  vertices.reserve(index.size());
  for (auto& [id, i] : index) {
    i = static_cast<int>(vertices.size());
    vertices.push_back(nodes.at(id));
    ids.push_back(id);
  }
  std::vector<std::array<int, 3>> panels;
  panels.reserve(triangles.size());
  for (const auto& t : triangles) panels.push_back({index[t[0]], index[t[1]], index[t[2]]});
  return TriangleMesh(std::move(vertices), std::move(panels), ids);
}

TriangleMesh read_msh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open mesh file '" + path + "'", 0);
  return parse_msh(in);
}

void write_msh(std::ostream& out, const TriangleMesh& mesh) {
  out << "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n$Nodes\n" << mesh.vertex_count() << "\n";
  out << std::setprecision(17);
  for (int i = 0; i < mesh.vertex_count(); ++i) {
    const Vec3& x = mesh.vertex(i);
    out << i + 1 << " " << x.x() << " " << x.y() << " " << x.z() << "\n";
  }
  out << "$EndNodes\n$Elements\n" << mesh.panel_count() << "\n";
  for (int p = 0; p < mesh.panel_count(); ++p) {
    const auto& v = mesh.panel(p).v;
    out << p + 1 << " 2 2 0 1 " << v[0] + 1 << " " << v[1] + 1 << " " << v[2] + 1 << "\n";
  }
  out << "$EndElements\n";
}

}  // namespace casimir
