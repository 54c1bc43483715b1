#include "cornerlab/mesh.hpp"

#include <charconv>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

namespace cornerlab {
namespace {

using EdgeKey = std::pair<int, int>;

EdgeKey ekey(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

struct Builder {
  TriMesh m;
  std::map<EdgeKey, int> midpoint;

  int mid(int a, int b) {
    EdgeKey k = ekey(a, b);
    auto it = midpoint.find(k);
    if (it != midpoint.end()) return it->second;
    int id = int(m.nodes.size());
    m.nodes.push_back(0.5 * (m.nodes[k.first] + m.nodes[k.second]));
    midpoint.emplace(k, id);
    return id;
  }

  bool has_mid(int a, int b) const {
    return midpoint.count(ekey(a, b)) != 0;
  }

  // re-tag boundary edges whose midpoint now exists
  void split_boundary() {
    std::vector<BoundaryEdge> old = std::move(m.boundary_edges);
    m.boundary_edges.clear();
    for (const auto& e : old) {
      auto it = midpoint.find(ekey(e.a, e.b));
      if (it != midpoint.end()) {
        m.boundary_edges.push_back({e.a, it->second, e.tag});
        m.boundary_edges.push_back({it->second, e.b, e.tag});
      } else {
        m.boundary_edges.push_back(e);
      }
    }
  }

  void red_pass() {
    std::vector<std::array<int, 3>> tris = std::move(m.triangles);
    m.triangles.clear();
    for (const auto& t : tris) {
      int m01 = mid(t[0], t[1]), m12 = mid(t[1], t[2]), m20 = mid(t[2], t[0]);
      m.triangles.push_back({t[0], m01, m20});
      m.triangles.push_back({m01, t[1], m12});
      m.triangles.push_back({m20, m12, t[2]});
      m.triangles.push_back({m01, m12, m20});
    }
    split_boundary();
  }

  // red split of corner-incident triangles with red/green closure
  void grade_pass(const std::vector<char>& is_corner) {
    std::vector<std::array<int, 3>> tris = std::move(m.triangles);
    m.triangles.clear();
    std::vector<char> red(tris.size(), 0);
    for (size_t i = 0; i < tris.size(); ++i)
      for (int v : tris[i])
        if (v < int(is_corner.size()) && is_corner[v]) red[i] = 1;
    // closure: a triangle with two split edges must go red as well; new red
    // triangles add midpoints, so iterate until stable
    bool changed = true;
    while (changed) {
      changed = false;
      for (size_t i = 0; i < tris.size(); ++i)
        if (red[i])
          for (int e = 0; e < 3; ++e) mid(tris[i][e], tris[i][(e + 1) % 3]);
      for (size_t i = 0; i < tris.size(); ++i) {
        if (red[i]) continue;
        int splits = 0;
        for (int e = 0; e < 3; ++e)
          splits += has_mid(tris[i][e], tris[i][(e + 1) % 3]);
        if (splits >= 2) {
          red[i] = 1;
          changed = true;
        }
      }
    }
    for (size_t i = 0; i < tris.size(); ++i) {
      const auto& t = tris[i];
      if (red[i]) {
        int m01 = mid(t[0], t[1]), m12 = mid(t[1], t[2]), m20 = mid(t[2], t[0]);
        m.triangles.push_back({t[0], m01, m20});
        m.triangles.push_back({m01, t[1], m12});
        m.triangles.push_back({m20, m12, t[2]});
        m.triangles.push_back({m01, m12, m20});
        continue;
      }
      int split_edge = -1;
      for (int e = 0; e < 3; ++e)
        if (has_mid(t[e], t[(e + 1) % 3])) split_edge = e;
      if (split_edge < 0) {
        m.triangles.push_back(t);
      } else {
        int a = t[split_edge], b = t[(split_edge + 1) % 3],
            c = t[(split_edge + 2) % 3];
        int mm = mid(a, b);
        m.triangles.push_back({a, mm, c});
        m.triangles.push_back({mm, b, c});
      }
    }
    split_boundary();
  }
};

}  // namespace

TriMesh triangulate(const Polygon& p, int refine_levels, bool grade_corners) {
  const int n = int(p.vertices.size());
  if (n < 3 || p.edge_tags.size() != p.vertices.size())
    throw std::invalid_argument("triangulate: malformed polygon");
  if (!(p.signed_area() > 0.0))
    throw std::invalid_argument("triangulate: polygon must be CCW");
  if (refine_levels < 0)
    throw std::invalid_argument("triangulate: negative refinement level");

  Builder b;
  b.m.nodes = p.vertices;
  Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
  for (const auto& v : p.vertices) centroid += v;
  centroid /= double(n);
  b.m.nodes.push_back(centroid);
  for (int i = 0; i < n; ++i) {
    b.m.triangles.push_back({i, (i + 1) % n, n});
    b.m.boundary_edges.push_back({i, (i + 1) % n, p.edge_tags[i]});
  }

  // polygon vertices with robin edges on both sides are the physical corners
  std::vector<char> is_corner(n, 0);
  for (int i = 0; i < n; ++i)
    is_corner[i] = (p.edge_tags[(i + n - 1) % n] == EdgeTag::robin &&
                    p.edge_tags[i] == EdgeTag::robin);

  for (int lvl = 0; lvl < refine_levels; ++lvl) {
    b.red_pass();
    if (grade_corners) b.grade_pass(is_corner);
  }
  return b.m;
}

void validate_mesh(const TriMesh& m) {
  const int n = int(m.nodes.size());
  auto fail = [](const std::string& why) { throw std::runtime_error("mesh: " + why); };

  {
    std::map<std::pair<double, double>, int> seen;
    for (int i = 0; i < n; ++i)
      if (!seen.emplace(std::make_pair(m.nodes[i].x(), m.nodes[i].y()), i).second)
        fail("duplicate node coordinates");
  }

  std::map<EdgeKey, int> use;
  std::vector<char> touched(n, 0);
  for (const auto& t : m.triangles) {
    for (int v : t) {
      if (v < 0 || v >= n) fail("triangle index out of range");
      touched[v] = 1;
    }
    Eigen::Vector2d a = m.nodes[t[0]], bb = m.nodes[t[1]], c = m.nodes[t[2]];
    double area2 = (bb - a).x() * (c - a).y() - (c - a).x() * (bb - a).y();
    if (!(area2 > 0.0)) fail("non-positive triangle area");
    for (int e = 0; e < 3; ++e) use[ekey(t[e], t[(e + 1) % 3])]++;
  }
  for (int i = 0; i < n; ++i)
    if (!touched[i]) fail("isolated node");

  std::set<EdgeKey> boundary;
  for (const auto& e : m.boundary_edges) {
    if (e.a < 0 || e.a >= n || e.b < 0 || e.b >= n)
      fail("boundary index out of range");
    if (!boundary.insert(ekey(e.a, e.b)).second)
      fail("duplicate boundary edge");
  }
  for (const auto& [k, cnt] : use) {
    if (cnt == 2) {
      if (boundary.count(k)) fail("interior edge listed as boundary");
    } else if (cnt == 1) {
      if (!boundary.count(k))
        fail("boundary edge missing from the boundary list (hanging node?)");
    } else {
      fail("edge shared by more than two triangles");
    }
  }
  for (const auto& k : boundary)
    if (!use.count(k) || use.at(k) != 1)
      fail("boundary list names a non-boundary edge");
}

std::vector<int> dirichlet_nodes(const TriMesh& m) {
  std::set<int> s;
  for (const auto& e : m.boundary_edges)
    if (e.tag == EdgeTag::artificial) {
      s.insert(e.a);
      s.insert(e.b);
    }
  return {s.begin(), s.end()};
}

namespace {

void put_double(std::ostream& os, double v) {
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  os.write(buf, r.ptr - buf);
}

double get_double(std::istream& is) {
  std::string tok;
  if (!(is >> tok)) throw std::runtime_error("mesh read: unexpected end");
  double v = 0.0;
  auto r = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (r.ec != std::errc() || r.ptr != tok.data() + tok.size())
    throw std::runtime_error("mesh read: bad float '" + tok + "'");
  return v;
}

}  // namespace

void write_mesh(const TriMesh& m, std::ostream& os) {
  os << "nodes " << m.nodes.size() << "\n";
  for (const auto& nd : m.nodes) {
    put_double(os, nd.x());
    os << ' ';
    put_double(os, nd.y());
    os << "\n";
  }
  os << "triangles " << m.triangles.size() << "\n";
  for (const auto& t : m.triangles) os << t[0] << ' ' << t[1] << ' ' << t[2] << "\n";
  os << "boundary " << m.boundary_edges.size() << "\n";
  for (const auto& e : m.boundary_edges)
    os << e.a << ' ' << e.b << ' '
       << (e.tag == EdgeTag::robin ? "robin" : "artificial") << "\n";
}

TriMesh read_mesh(std::istream& is) {
  auto expect = [&](const char* word) {
    std::string tok;
    if (!(is >> tok) || tok != word)
      throw std::runtime_error(std::string("mesh read: expected '") + word + "'");
  };
  TriMesh m;
  size_t count = 0;
  expect("nodes");
  is >> count;
  m.nodes.reserve(count);
  for (size_t i = 0; i < count; ++i) {
    double x = get_double(is), y = get_double(is);
    m.nodes.push_back({x, y});
  }
  expect("triangles");
  is >> count;
  m.triangles.reserve(count);
  for (size_t i = 0; i < count; ++i) {
    std::array<int, 3> t{};
    if (!(is >> t[0] >> t[1] >> t[2]))
      throw std::runtime_error("mesh read: bad triangle");
    m.triangles.push_back(t);
  }
  expect("boundary");
  is >> count;
  m.boundary_edges.reserve(count);
  for (size_t i = 0; i < count; ++i) {
    BoundaryEdge e{};
    std::string tag;
    if (!(is >> e.a >> e.b >> tag))
      throw std::runtime_error("mesh read: bad boundary edge");
    if (tag == "robin")
      e.tag = EdgeTag::robin;
    else if (tag == "artificial")
      e.tag = EdgeTag::artificial;
    else
      throw std::runtime_error("mesh read: unknown tag '" + tag + "'");
    m.boundary_edges.push_back(e);
  }
  return m;
}

}  // namespace cornerlab
