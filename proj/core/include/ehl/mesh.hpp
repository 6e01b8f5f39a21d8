#pragma once

#include "ehl/types.hpp"

#include <array>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace ehl {

enum class BoundarySet { Dirichlet, Neumann, Slave, Master };

std::string_view to_string(BoundarySet set);
BoundarySet boundary_set_from_string(std::string_view name);

struct Quad {
  std::array<Index, 4> nodes;  // counter-clockwise in the reference configuration
  Body body = Body::Slave;

  bool operator==(const Quad&) const = default;
};

/// Two-node boundary line. Nodes are ordered so that the owning body lies on
/// the left when walking from nodes[0] to nodes[1]; the outward normal is then
/// (t_y, -t_x) for the unit tangent t.
struct Facet {
  std::array<Index, 2> nodes;
  BoundarySet set = BoundarySet::Neumann;

  bool operator==(const Facet&) const = default;
};

/// Two-body plane-strain mesh: bilinear quads plus tagged boundary facets.
class Mesh {
 public:
  std::vector<Vec2> nodes;
  std::vector<Quad> elements;
  std::vector<Facet> facets;

  Index num_nodes() const { return static_cast<Index>(nodes.size()); }
  Index num_elements() const { return static_cast<Index>(elements.size()); }
  Index num_dofs() const { return kDim * num_nodes(); }

  std::vector<Index> facets_in(BoundarySet set) const;
  /// Sorted, unique node ids touched by facets of `set`.
  std::vector<Index> nodes_in(BoundarySet set) const;

  /// Element owning facet `f` (the bulk quad having both facet nodes as an
  /// edge), or -1 when there is none. Throws if more than one owns it.
  Index owner_of(Index f) const;

  /// Checks every structural invariant; throws InvalidGeometry on failure.
  ///  - node ids in range, quads non-degenerate with det J > 0 at all 2x2 Gauss points
  ///  - each slave/master facet is an edge of exactly one quad of the matching body
  ///  - slave and master facets live on different bodies and share no facet
  void validate() const;

  bool operator==(const Mesh&) const = default;
};

/// Ordered chain of slave facets. The lubrication field lives on these nodes:
/// lubrication node i coincides with mesh node `nodes[i]`, and facet i joins
/// chain nodes i and i+1.
struct InterfaceMesh {
  std::vector<Index> nodes;   // mesh node ids along the chain
  std::vector<Index> facets;  // mesh facet ids, facets[i] joins nodes[i], nodes[i+1]

  Index num_nodes() const { return static_cast<Index>(nodes.size()); }
  Index num_facets() const { return static_cast<Index>(facets.size()); }

  /// Builds the chain from the mesh's slave facets. Requires the slave set to
  /// form a single open, consistently oriented polyline.
  static InterfaceMesh from_slave(const Mesh& mesh);
};

// ---------------------------------------------------------------------------
// Generators. Both produce the slave body only (body id Slave); rigid
// counter-surfaces are analytic and not meshed.

struct HalfCylinderOptions {
  double radius = 4.0;
  double wall_thickness = 0.1;
  Index n_circ = 512;
  Index n_thick = 2;
  /// Initial distance between the lowest outer point and the plane y = 0.
  double clearance = 0.0;
};

/// Lower half ring centred above the plane y = 0. Outer surface facets are
/// tagged slave (ordered by increasing polar angle from pi to 2 pi), the two
/// end faces at the centre height are dirichlet, the inner surface neumann.
Mesh generate_half_cylinder(double radius, double wall_thickness, Index n_circ,
                            Index n_thick, double clearance = 0.0);
Mesh generate_half_cylinder(const HalfCylinderOptions& opts);

/// Pin of width `length` and height `height` with a circular bottom of radius
/// `radius`. The bottom arc (n_surf facets, left to right) is slave, the top
/// edge dirichlet, the sides neumann. `n_height == 0` picks n_surf / 2 rows.
Mesh generate_pin(double radius, double height, double length, Index n_surf,
                  Index n_height = 0, double clearance = 0.0);

// ---------------------------------------------------------------------------

/// Current position of node `n`, given the global displacement vector.
inline Vec2 current_position(const Mesh& mesh, const VecX& d, Index n) {
  return mesh.nodes[n] + Vec2(d[kDim * n], d[kDim * n + 1]);
}

/// Outward unit normal of slave facet `f` in the deformed configuration.
Vec2 current_normal(const Mesh& mesh, Index f, const VecX& displacements);

/// Plain-text mesh format with sections NODES (id x y), ELEMS
/// (id body n1 n2 n3 n4) and FACETS (id set-name n1 n2). Ids are explicit
/// and need not be contiguous; they are remapped to dense indices on read.
Mesh read_mesh(std::istream& in);
Mesh read_mesh_file(const std::string& path);
void write_mesh(std::ostream& out, const Mesh& mesh);

}  // namespace ehl
