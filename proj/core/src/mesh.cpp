#include "ehl/mesh.hpp"

#include "ehl/errors.hpp"
#include "ehl/fe.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace ehl {

namespace fe {

namespace {
constexpr GaussPoint1D kLine1[] = {{0.0, 2.0}};
constexpr GaussPoint1D kLine2[] = {{-0.5773502691896257, 1.0}, {0.5773502691896257, 1.0}};
constexpr GaussPoint1D kLine3[] = {{-0.7745966692414834, 0.5555555555555556},
                                   {0.0, 0.8888888888888888},
                                   {0.7745966692414834, 0.5555555555555556}};
constexpr GaussPoint1D kLine4[] = {{-0.8611363115940526, 0.3478548451374538},
                                   {-0.3399810435848563, 0.6521451548625461},
                                   {0.3399810435848563, 0.6521451548625461},
                                   {0.8611363115940526, 0.3478548451374538}};
constexpr GaussPoint1D kLine5[] = {{-0.9061798459386640, 0.2369268850561891},
                                   {-0.5384693101056831, 0.4786286704993665},
                                   {0.0, 0.5688888888888889},
                                   {0.5384693101056831, 0.4786286704993665},
                                   {0.9061798459386640, 0.2369268850561891}};
constexpr GaussPoint1D kLine6[] = {{-0.9324695142031521, 0.1713244923791704},
                                   {-0.6612093864662645, 0.3607615730481386},
                                   {-0.2386191860831969, 0.4679139345726910},
                                   {0.2386191860831969, 0.4679139345726910},
                                   {0.6612093864662645, 0.3607615730481386},
                                   {0.9324695142031521, 0.1713244923791704}};
constexpr double kG = 0.5773502691896257;
constexpr GaussPoint2D kQuad2x2[] = {
    {-kG, -kG, 1.0}, {kG, -kG, 1.0}, {kG, kG, 1.0}, {-kG, kG, 1.0}};
}  // namespace

std::span<const GaussPoint1D> gauss_line(int n) {
  switch (n) {
    case 1: return kLine1;
    case 2: return kLine2;
    case 3: return kLine3;
    case 4: return kLine4;
    case 5: return kLine5;
    case 6: return kLine6;
    default: throw std::invalid_argument("gauss_line: supported orders are 1..6");
  }
}

std::span<const GaussPoint2D> gauss_quad_2x2() { return kQuad2x2; }

}  // namespace fe

std::string_view to_string(BoundarySet set) {
  switch (set) {
    case BoundarySet::Dirichlet: return "dirichlet";
    case BoundarySet::Neumann: return "neumann";
    case BoundarySet::Slave: return "slave";
    case BoundarySet::Master: return "master";
  }
  return "?";
}

BoundarySet boundary_set_from_string(std::string_view name) {
  if (name == "dirichlet") return BoundarySet::Dirichlet;
  if (name == "neumann") return BoundarySet::Neumann;
  if (name == "slave") return BoundarySet::Slave;
  if (name == "master") return BoundarySet::Master;
  throw InvalidGeometry("unknown boundary set '" + std::string(name) + "'");
}

std::vector<Index> Mesh::facets_in(BoundarySet set) const {
  std::vector<Index> out;
  for (Index f = 0; f < static_cast<Index>(facets.size()); ++f)
    if (facets[f].set == set) out.push_back(f);
  return out;
}

std::vector<Index> Mesh::nodes_in(BoundarySet set) const {
  std::vector<Index> out;
  for (const Facet& f : facets)
    if (f.set == set) out.insert(out.end(), f.nodes.begin(), f.nodes.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

bool quad_has_edge(const Quad& q, Index a, Index b) {
  for (int i = 0; i < 4; ++i) {
    const Index p = q.nodes[i];
    const Index r = q.nodes[(i + 1) % 4];
    if ((p == a && r == b) || (p == b && r == a)) return true;
  }
  return false;
}

double min_detj(const Mesh& mesh, const Quad& q) {
  Eigen::Matrix<double, 2, 4> x;
  for (int a = 0; a < 4; ++a) x.col(a) = mesh.nodes[q.nodes[a]];
  double m = std::numeric_limits<double>::infinity();
  for (const auto& gp : fe::gauss_quad_2x2()) {
    const Mat2 j = fe::quad_shape_deriv(gp.xi, gp.eta) * x.transpose();
    m = std::min(m, j.determinant());
  }
  return m;
}

}  // namespace

Index Mesh::owner_of(Index f) const {
  const Facet& fc = facets.at(f);
  Index owner = -1;
  for (Index e = 0; e < num_elements(); ++e) {
    if (quad_has_edge(elements[e], fc.nodes[0], fc.nodes[1])) {
      if (owner >= 0)
        throw InvalidGeometry("facet " + std::to_string(f) + " is shared by two elements");
      owner = e;
    }
  }
  return owner;
}

void Mesh::validate() const {
  const Index nn = num_nodes();
  auto check_node = [nn](Index id) {
    if (id < 0 || id >= nn) throw InvalidGeometry("node id out of range");
  };
  for (Index e = 0; e < num_elements(); ++e) {
    for (Index id : elements[e].nodes) check_node(id);
    if (!(min_detj(*this, elements[e]) > 0.0))
      throw InvalidGeometry("element " + std::to_string(e) +
                            " has non-positive reference Jacobian");
  }
  std::set<Body> slave_bodies, master_bodies;
  std::set<std::pair<Index, Index>> slave_edges;
  for (Index f = 0; f < static_cast<Index>(facets.size()); ++f) {
    const Facet& fc = facets[f];
    for (Index id : fc.nodes) check_node(id);
    if (fc.nodes[0] == fc.nodes[1]) throw InvalidGeometry("degenerate facet");
    if (fc.set != BoundarySet::Slave && fc.set != BoundarySet::Master) continue;
    const Index owner = owner_of(f);
    if (owner < 0)
      throw InvalidGeometry("contact facet " + std::to_string(f) + " has no bulk element");
    (fc.set == BoundarySet::Slave ? slave_bodies : master_bodies)
        .insert(elements[owner].body);
    auto key = std::minmax(fc.nodes[0], fc.nodes[1]);
    if (fc.set == BoundarySet::Slave) slave_edges.insert(key);
  }
  for (const Facet& fc : facets)
    if (fc.set == BoundarySet::Master &&
        slave_edges.count(std::minmax(fc.nodes[0], fc.nodes[1])))
      throw InvalidGeometry("facet tagged both slave and master");
  if (slave_bodies.size() > 1 || master_bodies.size() > 1)
    throw InvalidGeometry("slave or master set spans several bodies");
  if (!slave_bodies.empty() && !master_bodies.empty() &&
      *slave_bodies.begin() == *master_bodies.begin())
    throw InvalidGeometry("slave and master sets belong to the same body");
}

InterfaceMesh InterfaceMesh::from_slave(const Mesh& mesh) {
  const std::vector<Index> slave = mesh.facets_in(BoundarySet::Slave);
  InterfaceMesh im;
  if (slave.empty()) return im;
  std::map<Index, Index> by_start;
  std::map<Index, int> in_degree;
  for (Index f : slave) {
    const auto& n = mesh.facets[f].nodes;
    if (!by_start.emplace(n[0], f).second)
      throw InvalidGeometry("slave facets are not a consistently oriented chain");
    in_degree[n[1]] += 1;
  }
  Index start = -1;
  for (Index f : slave) {
    const Index a = mesh.facets[f].nodes[0];
    if (!in_degree.count(a)) {
      if (start >= 0) throw InvalidGeometry("slave set is not a single chain");
      start = f;
    }
  }
  if (start < 0) throw InvalidGeometry("closed slave loops are not supported");
  Index f = start;
  im.nodes.push_back(mesh.facets[f].nodes[0]);
  while (true) {
    im.facets.push_back(f);
    const Index next_node = mesh.facets[f].nodes[1];
    im.nodes.push_back(next_node);
    auto it = by_start.find(next_node);
    if (it == by_start.end()) break;
    f = it->second;
    if (im.num_facets() > static_cast<Index>(slave.size()))
      throw InvalidGeometry("slave chain revisits a node");
  }
  if (im.num_facets() != static_cast<Index>(slave.size()))
    throw InvalidGeometry("slave set is not a single chain");
  return im;
}

namespace {

void check_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw InvalidGeometry(std::string(what) + " must be positive");
}

// Flips a quad's node order if its reference Jacobian is negative.
void orient(Mesh& mesh, Quad& q) {
  if (min_detj(mesh, q) < 0.0) std::swap(q.nodes[1], q.nodes[3]);
}

}  // namespace

Mesh generate_half_cylinder(double radius, double wall_thickness, Index n_circ,
                            Index n_thick, double clearance) {
  check_positive(radius, "radius");
  check_positive(wall_thickness, "wall thickness");
  if (!(radius > wall_thickness))
    throw InvalidGeometry("radius must exceed the wall thickness");
  if (n_circ < 8) throw InvalidGeometry("n_circ must be at least 8");
  if (n_thick < 1) throw InvalidGeometry("n_thick must be at least 1");
  if (clearance < 0.0) throw InvalidGeometry("clearance must be non-negative");

  Mesh m;
  const Vec2 centre(0.0, radius + clearance);
  const Index nr = n_thick + 1;
  auto id = [nr](Index i, Index j) { return i * nr + j; };  // j = 0 inner ... n_thick outer
  for (Index i = 0; i <= n_circ; ++i) {
    const double th = std::numbers::pi * (1.0 + static_cast<double>(i) / n_circ);
    for (Index j = 0; j <= n_thick; ++j) {
      const double r = radius - wall_thickness +
                       wall_thickness * static_cast<double>(j) / n_thick;
      m.nodes.emplace_back(centre + r * Vec2(std::cos(th), std::sin(th)));
    }
  }
  for (Index i = 0; i < n_circ; ++i)
    for (Index j = 0; j < n_thick; ++j) {
      Quad q{{id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)}, Body::Slave};
      orient(m, q);
      m.elements.push_back(q);
    }
  // Outer surface: increasing angle keeps the ring on the left.
  for (Index i = 0; i < n_circ; ++i)
    m.facets.push_back({{id(i, n_thick), id(i + 1, n_thick)}, BoundarySet::Slave});
  // Inner surface, walked backwards so the ring stays on the left.
  for (Index i = n_circ; i > 0; --i)
    m.facets.push_back({{id(i, 0), id(i - 1, 0)}, BoundarySet::Neumann});
  // End faces at the centre height.
  for (Index j = 0; j < n_thick; ++j) {
    m.facets.push_back({{id(0, j), id(0, j + 1)}, BoundarySet::Dirichlet});
    m.facets.push_back({{id(n_circ, j + 1), id(n_circ, j)}, BoundarySet::Dirichlet});
  }
  return m;
}

Mesh generate_half_cylinder(const HalfCylinderOptions& o) {
  return generate_half_cylinder(o.radius, o.wall_thickness, o.n_circ, o.n_thick,
                                o.clearance);
}

Mesh generate_pin(double radius, double height, double length, Index n_surf,
                  Index n_height, double clearance) {
  check_positive(radius, "pin radius");
  check_positive(height, "pin height");
  check_positive(length, "pin length");
  if (length > 2.0 * radius)
    throw InvalidGeometry("pin length exceeds the bottom arc diameter");
  if (n_surf < 1) throw InvalidGeometry("n_surf must be at least 1");
  if (clearance < 0.0) throw InvalidGeometry("clearance must be non-negative");
  if (n_height <= 0) n_height = std::max<Index>(1, n_surf / 2);

  const double sag = radius - std::sqrt(radius * radius - 0.25 * length * length);
  if (!(height > sag)) throw InvalidGeometry("pin height is below the bottom arc");

  Mesh m;
  const Index nx = n_surf + 1;
  auto id = [nx](Index i, Index j) { return j * nx + i; };
  for (Index j = 0; j <= n_height; ++j)
    for (Index i = 0; i <= n_surf; ++i) {
      // Equal arc-length spacing along the bottom circle.
      const double half_angle = std::asin(0.5 * length / radius);
      const double phi = -half_angle + 2.0 * half_angle * static_cast<double>(i) / n_surf;
      const double xb = radius * std::sin(phi);
      const double yb = radius - radius * std::cos(phi);
      const double xt = -0.5 * length + length * static_cast<double>(i) / n_surf;
      const double s = static_cast<double>(j) / n_height;
      m.nodes.emplace_back((1 - s) * xb + s * xt, clearance + (1 - s) * yb + s * height);
    }
  for (Index j = 0; j < n_height; ++j)
    for (Index i = 0; i < n_surf; ++i) {
      Quad q{{id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)}, Body::Slave};
      orient(m, q);
      m.elements.push_back(q);
    }
  for (Index i = 0; i < n_surf; ++i)
    m.facets.push_back({{id(i, 0), id(i + 1, 0)}, BoundarySet::Slave});
  for (Index j = 0; j < n_height; ++j)
    m.facets.push_back({{id(n_surf, j), id(n_surf, j + 1)}, BoundarySet::Neumann});
  for (Index i = n_surf; i > 0; --i)
    m.facets.push_back({{id(i, n_height), id(i - 1, n_height)}, BoundarySet::Dirichlet});
  for (Index j = n_height; j > 0; --j)
    m.facets.push_back({{id(0, j), id(0, j - 1)}, BoundarySet::Neumann});
  return m;
}

Vec2 current_normal(const Mesh& mesh, Index f, const VecX& d) {
  const Facet& fc = mesh.facets.at(f);
  if (fc.set != BoundarySet::Slave)
    throw InvalidGeometry("current_normal expects a slave facet");
  const Vec2 t = current_position(mesh, d, fc.nodes[1]) - current_position(mesh, d, fc.nodes[0]);
  const double len = t.norm();
  if (!(len > 0.0) || !std::isfinite(len))
    throw SingularGeometry("slave facet " + std::to_string(f) + " has zero length");
  return Vec2(t.y(), -t.x()) / len;
}

}  // namespace ehl
