#include "ehl/errors.hpp"
#include "ehl/mesh.hpp"

#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <unordered_map>

namespace ehl {

namespace {

enum class Section { None, Nodes, Elems, Facets };

Index lookup(const std::unordered_map<long, Index>& ids, long id, int line) {
  auto it = ids.find(id);
  if (it == ids.end())
    throw InvalidGeometry("mesh line " + std::to_string(line) + ": unknown node id " +
                          std::to_string(id));
  return it->second;
}

}  // namespace

Mesh read_mesh(std::istream& in) {
  Mesh m;
  std::unordered_map<long, Index> node_ids;
  Section section = Section::None;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    std::string head;
    if (!(ls >> head)) continue;
    if (head == "NODES") { section = Section::Nodes; continue; }
    if (head == "ELEMS") { section = Section::Elems; continue; }
    if (head == "FACETS") { section = Section::Facets; continue; }

    long id = 0;
    try {
      id = std::stol(head);
    } catch (const std::exception&) {
      throw InvalidGeometry("mesh line " + std::to_string(line_no) + ": expected an id");
    }
    auto fail = [line_no]() {
      throw InvalidGeometry("mesh line " + std::to_string(line_no) + ": malformed record");
    };
    switch (section) {
      case Section::Nodes: {
        double x, y;
        if (!(ls >> x >> y)) fail();
        if (!node_ids.emplace(id, m.num_nodes()).second)
          throw InvalidGeometry("duplicate node id " + std::to_string(id));
        m.nodes.emplace_back(x, y);
        break;
      }
      case Section::Elems: {
        int body;
        long n[4];
        if (!(ls >> body >> n[0] >> n[1] >> n[2] >> n[3])) fail();
        if (body != 1 && body != 2) throw InvalidGeometry("body id must be 1 or 2");
        Quad q;
        q.body = static_cast<Body>(body);
        for (int a = 0; a < 4; ++a) q.nodes[a] = lookup(node_ids, n[a], line_no);
        m.elements.push_back(q);
        break;
      }
      case Section::Facets: {
        std::string set;
        long a, b;
        if (!(ls >> set >> a >> b)) fail();
        m.facets.push_back({{lookup(node_ids, a, line_no), lookup(node_ids, b, line_no)},
                            boundary_set_from_string(set)});
        break;
      }
      case Section::None:
        throw InvalidGeometry("mesh line " + std::to_string(line_no) +
                              ": record outside of a section");
    }
  }
  return m;
}

Mesh read_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open mesh file '" + path + "'");
  return read_mesh(in);
}

void write_mesh(std::ostream& out, const Mesh& m) {
  const auto old_prec = out.precision(std::numeric_limits<double>::max_digits10);
  out << "NODES\n";
  for (Index i = 0; i < m.num_nodes(); ++i)
    out << i + 1 << ' ' << m.nodes[i].x() << ' ' << m.nodes[i].y() << '\n';
  out << "ELEMS\n";
  for (Index e = 0; e < m.num_elements(); ++e) {
    const Quad& q = m.elements[e];
    out << e + 1 << ' ' << static_cast<int>(q.body);
    for (Index n : q.nodes) out << ' ' << n + 1;
    out << '\n';
  }
  out << "FACETS\n";
  for (std::size_t f = 0; f < m.facets.size(); ++f)
    out << f + 1 << ' ' << to_string(m.facets[f].set) << ' ' << m.facets[f].nodes[0] + 1
        << ' ' << m.facets[f].nodes[1] + 1 << '\n';
  out.precision(old_prec);
}

}  // namespace ehl
