#include "afem/mesh_io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "afem/errors.hpp"

namespace afem {

namespace {

class TokenStream {
 public:
  explicit TokenStream(std::istream& in) {
    std::string line;
    while (std::getline(in, line)) {
      if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      std::istringstream ls(line);
      std::string tok;
      while (ls >> tok) {
        if (tok != "/") tokens_.push_back(std::move(tok));
      }
    }
  }

  bool done() const { return pos_ >= tokens_.size(); }

  const std::string& next() {
    if (done()) throw Error(ErrorCode::ParseError, "unexpected end of mesh file");
    return tokens_[pos_++];
  }

  void expect(const std::string& keyword) {
    const auto& tok = next();
    if (tok != keyword) throw Error(ErrorCode::ParseError, "expected '" + keyword + "', got '" + tok + "'");
  }

  long integer() {
    const auto& tok = next();
    std::size_t used = 0;
    long v = 0;
    try {
      v = std::stol(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size()) throw Error(ErrorCode::ParseError, "expected integer, got '" + tok + "'");
    return v;
  }

  double real() {
    const auto& tok = next();
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size()) throw Error(ErrorCode::ParseError, "expected number, got '" + tok + "'");
    return v;
  }

 private:
  std::vector<std::string> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

Triangulation read_mesh(std::istream& in) {
  TokenStream ts(in);
  ts.expect("vertices");
  const long nv = ts.integer();
  ts.expect("triangles");
  const long nt = ts.integer();
  ts.expect("boundary");
  const long nb = ts.integer();
  if (nv < 0 || nt < 0 || nb < 0) throw Error(ErrorCode::ParseError, "negative count in header");

  std::vector<Vec2> vertices(nv);
  for (auto& v : vertices) {
    const double x = ts.real();
    const double y = ts.real();
    v = Vec2(x, y);
  }
  std::vector<std::array<int, 3>> triangles(nt);
  for (auto& tri : triangles) {
    for (int& idx : tri) idx = static_cast<int>(ts.integer());
  }
  std::vector<BoundarySegment> boundary(nb);
  for (auto& seg : boundary) {
    seg.a = static_cast<int>(ts.integer());
    seg.b = static_cast<int>(ts.integer());
    seg.tag = static_cast<int>(ts.integer());
  }
  if (!ts.done()) throw Error(ErrorCode::ParseError, "trailing tokens after boundary section");

  for (const auto& tri : triangles) {
    for (int idx : tri) {
      if (idx < 0 || idx >= nv) throw Error(ErrorCode::InvalidIndex, "triangle vertex index out of range");
    }
  }
  orient_longest_edge_first(vertices, triangles);
  return build_mesh(std::move(vertices), std::move(triangles), boundary);
}

Triangulation read_mesh(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return read_mesh(in);
}

void write_mesh(std::ostream& out, const Triangulation& mesh) {
  out << "vertices " << mesh.num_vertices() << " / triangles " << mesh.num_triangles()
      << " / boundary " << mesh.num_boundary_edges() << '\n';
  out << std::setprecision(17);
  for (const auto& v : mesh.vertices()) out << v.x() << ' ' << v.y() << '\n';
  for (const auto& t : mesh.triangles()) out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  for (const auto& s : mesh.boundary_segments()) out << s.a << ' ' << s.b << ' ' << s.tag << '\n';
}

void write_mesh(const std::filesystem::path& path, const Triangulation& mesh) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  write_mesh(out, mesh);
}

}  // namespace afem
