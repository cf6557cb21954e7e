#include "afem/refine.hpp"

#include <algorithm>
#include <string>
#include <unordered_map>
#include <vector>

#include "afem/errors.hpp"

namespace afem {

namespace {

constexpr int kUnset = -1;

struct Refiner {
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> tris;
  std::vector<bool> alive;
  std::vector<bool> red;
  std::vector<int> sibling;
  std::unordered_map<std::uint64_t, int> midpoint;  // marked edges; kUnset until created
  std::unordered_map<std::uint64_t, BoundarySegment> boundary;

  explicit Refiner(const Triangulation& mesh)
      : vertices(mesh.vertices()),
        tris(mesh.triangles()),
        alive(mesh.num_triangles(), true),
        red(mesh.num_triangles(), false),
        sibling(mesh.green_sibling()) {
    for (const auto& seg : mesh.boundary_segments()) boundary.emplace(edge_key(seg.a, seg.b), seg);
  }

  bool is_marked(int a, int b) const { return midpoint.contains(edge_key(a, b)); }
  void mark(int a, int b) { midpoint.try_emplace(edge_key(a, b), kUnset); }

  // Replaces the green pair containing t by its parent, which keeps the
  // existing midpoint of its refinement edge. Returns the parent index or -1
  // when t is not half of an intact green pair.
  int merge_green_pair(int t) {
    const int s = sibling[t];
    if (s < 0 || sibling[s] != t || !alive[s]) return -1;
    // Green children of (a, b, c) with midpoint m of ab are (c, a, m) and (b, c, m).
    int first = -1;
    int second = -1;
    if (tris[t][2] != tris[s][2]) return -1;
    if (tris[t][0] == tris[s][1]) {
      first = t;
      second = s;
    } else if (tris[s][0] == tris[t][1]) {
      first = s;
      second = t;
    } else {
      return -1;
    }
    const int a = tris[first][1];
    const int b = tris[second][0];
    const int c = tris[first][0];
    const int m = tris[first][2];
    tris[first] = {a, b, c};
    alive[second] = false;
    sibling[first] = -1;
    sibling[second] = -1;
    midpoint[edge_key(a, b)] = m;
    return first;
  }

  // Replaces t by its four red children right away. Used for merged green
  // parents: their refinement edge already has a midpoint, and closure must
  // see the children's half edges rather than the parent's full edge.
  void split_red_now(int t) {
    const auto [a, b, c] = tris[t];
    mark(a, b);
    mark(b, c);
    mark(c, a);
    const int mab = midpoint_vertex(a, b);
    const int mbc = midpoint_vertex(b, c);
    const int mca = midpoint_vertex(c, a);
    tris[t] = {a, mab, mca};
    for (const auto& child : {std::array<int, 3>{mab, b, mbc}, std::array<int, 3>{mca, mbc, c},
                              std::array<int, 3>{mbc, mca, mab}}) {
      tris.push_back(child);
      alive.push_back(true);
      red.push_back(false);
      sibling.push_back(-1);
    }
  }

  void close() {
    std::unordered_map<std::uint64_t, std::array<int, 2>> adjacency;
    adjacency.reserve(tris.size() * 2);
    for (int t = 0; t < static_cast<int>(tris.size()); ++t) {
      if (!alive[t]) continue;
      for (int k = 0; k < 3; ++k) {
        auto [it, inserted] =
            adjacency.try_emplace(edge_key(tris[t][(k + 1) % 3], tris[t][(k + 2) % 3]), std::array<int, 2>{t, -1});
        if (!inserted) it->second[1] = t;
      }
    }

    std::vector<int> stack;
    for (int t = 0; t < static_cast<int>(tris.size()); ++t) {
      if (!alive[t]) continue;
      if (red[t]) {
        for (int k = 0; k < 3; ++k) mark(tris[t][(k + 1) % 3], tris[t][(k + 2) % 3]);
      }
    }
    for (int t = 0; t < static_cast<int>(tris.size()); ++t) {
      if (alive[t]) stack.push_back(t);
    }
    while (!stack.empty()) {
      const int t = stack.back();
      stack.pop_back();
      const auto& tri = tris[t];
      if (is_marked(tri[0], tri[1])) continue;
      if (!is_marked(tri[1], tri[2]) && !is_marked(tri[2], tri[0])) continue;
      mark(tri[0], tri[1]);
      const auto& nb = adjacency.at(edge_key(tri[0], tri[1]));
      const int other = nb[0] == t ? nb[1] : nb[0];
      if (other >= 0) stack.push_back(other);
    }
  }

  int midpoint_vertex(int a, int b) {
    int& m = midpoint.at(edge_key(a, b));
    if (m == kUnset) {
      m = static_cast<int>(vertices.size());
      vertices.push_back(0.5 * (vertices[a] + vertices[b]));
      if (const auto it = boundary.find(edge_key(a, b)); it != boundary.end()) {
        const int tag = it->second.tag;
        boundary.erase(it);
        boundary.emplace(edge_key(a, m), BoundarySegment{a, m, tag});
        boundary.emplace(edge_key(m, b), BoundarySegment{m, b, tag});
      }
    }
    return m;
  }

  Triangulation emit() {
    // Midpoints are created in triangle order for deterministic numbering.
    for (int t = 0; t < static_cast<int>(tris.size()); ++t) {
      if (!alive[t]) continue;
      for (int k = 2; k >= 0; --k) {
        const int a = tris[t][(k + 1) % 3];
        const int b = tris[t][(k + 2) % 3];
        if (is_marked(a, b)) midpoint_vertex(a, b);
      }
    }

    std::vector<std::array<int, 3>> out;
    std::vector<int> out_sibling;
    std::vector<int> new_index(tris.size(), -1);
    out.reserve(tris.size() * 2);
    for (int t = 0; t < static_cast<int>(tris.size()); ++t) {
      if (!alive[t]) continue;
      const auto [a, b, c] = tris[t];
      const bool ab = is_marked(a, b);
      const bool bc = is_marked(b, c);
      const bool ca = is_marked(c, a);
      const int base = static_cast<int>(out.size());
      if (!ab) {
        new_index[t] = base;
        out.push_back(tris[t]);
        out_sibling.push_back(sibling[t]);  // remapped below
        continue;
      }
      const int mab = midpoint.at(edge_key(a, b));
      if (bc && ca) {
        const int mbc = midpoint.at(edge_key(b, c));
        const int mca = midpoint.at(edge_key(c, a));
        out.push_back({a, mab, mca});
        out.push_back({mab, b, mbc});
        out.push_back({mca, mbc, c});
        out.push_back({mbc, mca, mab});
        out_sibling.insert(out_sibling.end(), {-1, -1, -1, -1});
      } else if (bc) {
        const int mbc = midpoint.at(edge_key(b, c));
        out.push_back({c, a, mab});
        out.push_back({mab, b, mbc});
        out.push_back({c, mab, mbc});
        out_sibling.insert(out_sibling.end(), {-1, -1, -1});
      } else if (ca) {
        const int mca = midpoint.at(edge_key(c, a));
        out.push_back({b, c, mab});
        out.push_back({mab, c, mca});
        out.push_back({a, mab, mca});
        out_sibling.insert(out_sibling.end(), {-1, -1, -1});
      } else {
        out.push_back({c, a, mab});
        out.push_back({b, c, mab});
        out_sibling.push_back(-(base + 1) - 2);  // placeholder, fixed below
        out_sibling.push_back(-(base) - 2);
      }
    }
    // Placeholders <= -2 encode fresh green pairs; values >= 0 are old indices.
    for (auto& s : out_sibling) {
      if (s <= -2) {
        s = -s - 2;
      } else if (s >= 0) {
        s = new_index[s];
      }
    }

    std::vector<BoundarySegment> segments;
    segments.reserve(boundary.size());
    for (const auto& [key, seg] : boundary) segments.push_back(seg);
    std::sort(segments.begin(), segments.end(), [](const BoundarySegment& l, const BoundarySegment& r) {
      return edge_key(l.a, l.b) < edge_key(r.a, r.b);
    });
    return Triangulation::build(std::move(vertices), std::move(out), segments, std::move(out_sibling));
  }
};

}  // namespace

Triangulation uniform_red_refine(const Triangulation& mesh) {
  Refiner r(mesh);
  std::fill(r.red.begin(), r.red.end(), true);
  r.close();
  return r.emit();
}

Triangulation rgb_refine(const Triangulation& mesh, std::span<const int> marked) {
  const int nt = static_cast<int>(mesh.num_triangles());
  for (int t : marked) {
    if (t < 0 || t >= nt) {
      throw Error(ErrorCode::InvalidMark, "triangle index " + std::to_string(t) + " outside [0, " +
                                              std::to_string(nt) + ")");
    }
  }
  if (marked.empty()) return mesh;

  Refiner r(mesh);
  std::vector<bool> handled(nt, false);
  for (int t : marked) {
    if (handled[t]) continue;
    handled[t] = true;
    const int s = r.sibling[t];
    const int parent = r.merge_green_pair(t);
    if (parent >= 0) {
      handled[s] = true;  // the sibling is refined along with t
      r.split_red_now(parent);
    } else {
      r.red[t] = true;
    }
  }
  r.close();
  return r.emit();
}

}  // namespace afem
