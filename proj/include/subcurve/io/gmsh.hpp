// Copyright 2026 The subcurve Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include "subcurve/boundary.hpp"
#include "subcurve/ho_mesh.hpp"

namespace subcurve {

// Gmsh MSH 2.2 and 4.1, ASCII.

enum class MshVersion { V22, V41 };

struct ScalarField {
  std::string name;
  std::vector<double> values;
};

/** Named per-element and per-node values attached to a mesh file. */
struct MeshFields {
  std::vector<ScalarField> element;
  std::vector<ScalarField> node;
};

inline constexpr int kMshMaxDegree = 10;
inline constexpr int kMshPointType = 15;

namespace detail {
inline constexpr std::array<int, kMshMaxDegree> kMshLine = {
    1, 8, 26, 27, 28, 62, 63, 64, 65, 66};
inline constexpr std::array<int, kMshMaxDegree> kMshTriangle = {
    2, 9, 21, 23, 25, 42, 43, 44, 45, 46};
inline constexpr std::array<int, kMshMaxDegree> kMshTet = {
    4, 11, 29, 30, 31, 71, 72, 73, 74, 75};
}  // namespace detail

/** Gmsh element type of a degree-q simplex; dim 0 is the point. */
inline int msh_element_type(int dim, int q) {
  if (dim == 0) return kMshPointType;
  if (q < 1 || q > kMshMaxDegree)
    throw UnsupportedError("MSH supports degrees 1 to " +
                           std::to_string(kMshMaxDegree) + ", got " +
                           std::to_string(q));
  if (dim == 1) return detail::kMshLine[q - 1];
  if (dim == 2) return detail::kMshTriangle[q - 1];
  if (dim == 3) return detail::kMshTet[q - 1];
  throw UnsupportedError("MSH element dimension " + std::to_string(dim));
}

/** (dim, degree) of a Gmsh element type, or (-1, 0) when not a simplex. */
inline std::pair<int, int> msh_type_info(int type) {
  if (type == kMshPointType) return {0, 1};
  for (int q = 1; q <= kMshMaxDegree; ++q) {
    if (detail::kMshLine[q - 1] == type) return {1, q};
    if (detail::kMshTriangle[q - 1] == type) return {2, q};
    if (detail::kMshTet[q - 1] == type) return {3, q};
  }
  return {-1, 0};
}

struct MshElement {
  int type = 0;
  int dim = 0;
  int degree = 1;
  FeatureId tag = 0;
  /** Indices into MshFile::nodes in Gmsh local order. */
  std::vector<int> nodes;
};

/** Raw file contents with nodes renumbered in order of appearance. */
struct MshFile {
  MshVersion version = MshVersion::V41;
  std::vector<Vec3> nodes;
  std::vector<MshElement> elements;
  /** Element and node tags as written in the file. */
  std::vector<long> element_tags;
  std::vector<long> node_tags;
  NodeKind kind = NodeKind::Equispaced;
  MeshFields fields;
};

namespace detail {

class MshTokens {
 public:
  MshTokens(std::istream& in, std::string path)
      : in_(in), path_(std::move(path)) {}

  std::string word() {
    std::string s;
    if (!(in_ >> s)) fail("unexpected end of file");
    return s;
  }
  long integer() {
    const std::string s = word();
    char* end = nullptr;
    const long v = std::strtol(s.c_str(), &end, 10);
    if (end == s.c_str() || *end) fail("expected an integer, got '" + s + "'");
    return v;
  }
  double real() {
    const std::string s = word();
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end) fail("expected a number, got '" + s + "'");
    return v;
  }
  std::string quoted() {
    std::string s;
    in_ >> std::ws;
    if (!std::getline(in_, s)) fail("unexpected end of file");
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"')
      s = s.substr(1, s.size() - 2);
    return s;
  }
  void expect(const std::string& s) {
    const std::string w = word();
    if (w != s) fail("expected " + s + ", got " + w);
  }
  void skip_to(const std::string& end) {
    std::string w;
    while (in_ >> w)
      if (w == end) return;
    fail("missing " + end);
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw IoError(path_ + ": " + what);
  }
  bool next_section(std::string& name) {
    std::string w;
    while (in_ >> w) {
      if (!w.empty() && w[0] == '$') {
        name = w.substr(1);
        return true;
      }
    }
    return false;
  }

 private:
  std::istream& in_;
  std::string path_;
};

struct RawField {
  std::string name;
  std::vector<std::pair<long, double>> values;
};

inline RawField read_msh_data(MshTokens& tok, const std::string& end) {
  RawField f;
  const long ns = tok.integer();
  for (long i = 0; i < ns; ++i) {
    std::string s = tok.quoted();
    if (i == 0) f.name = s;
  }
  const long nr = tok.integer();
  for (long i = 0; i < nr; ++i) tok.real();
  const long ni = tok.integer();
  std::vector<long> ints;
  for (long i = 0; i < ni; ++i) ints.push_back(tok.integer());
  const long comps = ni > 1 ? ints[1] : 1;
  const long count = ni > 2 ? ints[2] : 0;
  if (comps != 1) tok.fail("only scalar data fields are supported");
  for (long i = 0; i < count; ++i) {
    const long tag = tok.integer();
    f.values.emplace_back(tag, tok.real());
  }
  tok.expect(end);
  return f;
}

/** Values by position in `tags`; NaN where the file gives none. */
inline std::vector<ScalarField> remap_fields(const std::vector<RawField>& raw,
                                             const std::vector<long>& tags) {
  std::unordered_map<long, int> index;
  for (int i = 0; i < static_cast<int>(tags.size()); ++i) index[tags[i]] = i;
  std::vector<ScalarField> out;
  for (const RawField& r : raw) {
    ScalarField f{r.name, std::vector<double>(
                              tags.size(),
                              std::numeric_limits<double>::quiet_NaN())};
    for (auto [tag, v] : r.values) {
      auto it = index.find(tag);
      if (it != index.end()) f.values[it->second] = v;
    }
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace detail

/** Parses an ASCII MSH 2.2 or 4.1 file. Physical tags become element tags;
 *  elements without one use their elementary (entity) tag. */
inline MshFile read_msh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  detail::MshTokens tok(in, path);
  MshFile out;
  std::unordered_map<long, int> node_index;
  std::map<std::pair<int, long>, FeatureId> entity_tag;
  std::vector<detail::RawField> raw_element, raw_node;
  bool have_format = false;

  auto add_element = [&](long tag, int type, FeatureId ftag,
                         const std::vector<long>& nodes) {
    auto [dim, q] = msh_type_info(type);
    if (dim < 0)
      tok.fail("unsupported element type " + std::to_string(type) +
               " (element " + std::to_string(tag) + ")");
    MshElement e{type, dim, q, ftag, {}};
    for (long n : nodes) {
      auto it = node_index.find(n);
      if (it == node_index.end())
        tok.fail("element " + std::to_string(tag) + " references missing node " +
                 std::to_string(n));
      e.nodes.push_back(it->second);
    }
    out.elements.push_back(std::move(e));
    out.element_tags.push_back(tag);
  };
  auto node_count = [](int type) {
    auto [dim, q] = msh_type_info(type);
    return dim < 0 ? -1 : dim == 0 ? 1 : simplex_size(dim, q);
  };

  std::string section;
  while (tok.next_section(section)) {
    if (section == "MeshFormat") {
      const std::string v = tok.word();
      const long file_type = tok.integer();
      tok.integer();
      if (file_type != 0) tok.fail("binary MSH files are not supported");
      if (v.rfind("2.", 0) == 0) out.version = MshVersion::V22;
      else if (v == "4.1") out.version = MshVersion::V41;
      else tok.fail("unsupported MSH version " + v);
      tok.expect("$EndMeshFormat");
      have_format = true;
    } else if (!have_format) {
      tok.fail("missing $MeshFormat");
    } else if (section == "Entities") {
      long n[4];
      for (long& k : n) k = tok.integer();
      for (int dim = 0; dim < 4; ++dim) {
        for (long i = 0; i < n[dim]; ++i) {
          const long tag = tok.integer();
          for (int c = 0; c < (dim == 0 ? 3 : 6); ++c) tok.real();
          const long np = tok.integer();
          std::vector<long> phys;
          for (long p = 0; p < np; ++p) phys.push_back(tok.integer());
          if (dim > 0) {
            const long nb = tok.integer();
            for (long b = 0; b < nb; ++b) tok.integer();
          }
          long ftag = phys.empty() ? tag : std::abs(phys[0]);
          entity_tag[{dim, tag}] = static_cast<FeatureId>(ftag);
        }
      }
      tok.expect("$EndEntities");
    } else if (section == "Nodes") {
      if (out.version == MshVersion::V22) {
        const long n = tok.integer();
        for (long i = 0; i < n; ++i) {
          const long tag = tok.integer();
          Vec3 x;
          for (int c = 0; c < 3; ++c) x[c] = tok.real();
          node_index[tag] = static_cast<int>(out.nodes.size());
          out.nodes.push_back(x);
          out.node_tags.push_back(tag);
        }
      } else {
        const long blocks = tok.integer();
        tok.integer();
        tok.integer();
        tok.integer();
        for (long b = 0; b < blocks; ++b) {
          const long edim = tok.integer();
          tok.integer();
          const long parametric = tok.integer();
          const long n = tok.integer();
          std::vector<long> tags(n);
          for (long& t : tags) t = tok.integer();
          for (long i = 0; i < n; ++i) {
            Vec3 x;
            for (int c = 0; c < 3; ++c) x[c] = tok.real();
            if (parametric)
              for (long c = 0; c < edim; ++c) tok.real();
            node_index[tags[i]] = static_cast<int>(out.nodes.size());
            out.nodes.push_back(x);
            out.node_tags.push_back(tags[i]);
          }
        }
      }
      tok.expect("$EndNodes");
    } else if (section == "Elements") {
      if (out.version == MshVersion::V22) {
        const long n = tok.integer();
        for (long i = 0; i < n; ++i) {
          const long tag = tok.integer();
          const int type = static_cast<int>(tok.integer());
          const long nt = tok.integer();
          std::vector<long> tags(nt);
          for (long& t : tags) t = tok.integer();
          const int nn = node_count(type);
          if (nn < 0)
            tok.fail("unsupported element type " + std::to_string(type) +
                     " (element " + std::to_string(tag) + ")");
          std::vector<long> nodes(nn);
          for (long& v : nodes) v = tok.integer();
          long ftag = nt > 0 && tags[0] != 0 ? tags[0] : nt > 1 ? tags[1] : 0;
          add_element(tag, type, static_cast<FeatureId>(ftag), nodes);
        }
      } else {
        const long blocks = tok.integer();
        tok.integer();
        tok.integer();
        tok.integer();
        for (long b = 0; b < blocks; ++b) {
          const int edim = static_cast<int>(tok.integer());
          const long etag = tok.integer();
          const int type = static_cast<int>(tok.integer());
          const long n = tok.integer();
          const int nn = node_count(type);
          if (nn < 0) tok.fail("unsupported element type " + std::to_string(type));
          auto it = entity_tag.find({edim, etag});
          const FeatureId ftag =
              it == entity_tag.end() ? static_cast<FeatureId>(etag) : it->second;
          for (long i = 0; i < n; ++i) {
            const long tag = tok.integer();
            std::vector<long> nodes(nn);
            for (long& v : nodes) v = tok.integer();
            add_element(tag, type, ftag, nodes);
          }
        }
      }
      tok.expect("$EndElements");
    } else if (section == "ElementData") {
      raw_element.push_back(detail::read_msh_data(tok, "$EndElementData"));
    } else if (section == "NodeData") {
      raw_node.push_back(detail::read_msh_data(tok, "$EndNodeData"));
    } else if (section == "SubcurveNodes") {
      out.kind = parse_node_kind(tok.word());
      tok.expect("$EndSubcurveNodes");
    } else {
      tok.skip_to("$End" + section);
    }
  }
  if (!have_format) tok.fail("missing $MeshFormat");
  // Elements in tag order; 4.1 files group them by entity.
  std::vector<int> perm(out.elements.size());
  for (size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
  std::stable_sort(perm.begin(), perm.end(), [&](int a, int b) {
    return out.element_tags[a] < out.element_tags[b];
  });
  std::vector<MshElement> sorted;
  std::vector<long> sorted_tags;
  for (int i : perm) {
    sorted.push_back(std::move(out.elements[i]));
    sorted_tags.push_back(out.element_tags[i]);
  }
  out.elements = std::move(sorted);
  out.element_tags = std::move(sorted_tags);
  out.fields.element = detail::remap_fields(raw_element, out.element_tags);
  out.fields.node = detail::remap_fields(raw_node, out.node_tags);
  return out;
}

namespace detail {

inline void write_msh_data(std::ostream& os, const char* section,
                           const ScalarField& f, long first_tag) {
  os << '$' << section << "\n1\n\"" << f.name << "\"\n1\n0\n3\n0\n1\n"
     << f.values.size() << '\n';
  for (size_t i = 0; i < f.values.size(); ++i)
    os << first_tag + long(i) << ' ' << f.values[i] << '\n';
  os << "$End" << section << '\n';
}

/** Gmsh local order of a curve segment stored from first to last node. */
inline std::vector<int> msh_line_nodes(const std::vector<int>& path) {
  std::vector<int> n{path.front(), path.back()};
  n.insert(n.end(), path.begin() + 1, path.end() - 1);
  return n;
}

}  // namespace detail

/**
 * Writes a degree-q mesh with its induced model: elements carry their
 * surface (or region) id as physical tag, and curve segments, feature
 * points and volume facets are written as lines, points and triangles.
 * Element fields are attached to the main elements.
 */
inline void write_msh(const HighOrderMesh& ho, const std::string& path,
                      MshVersion version = MshVersion::V41,
                      const MeshFields& fields = {}) {
  const int q = ho.degree;
  const int main_type = msh_element_type(ho.dim, q);
  const int facet_type = msh_element_type(2, q);
  const int line_type = msh_element_type(1, q);
  for (const ScalarField& f : fields.element)
    if (static_cast<int>(f.values.size()) != ho.num_elements())
      throw IoError("element field '" + f.name + "' has the wrong size");
  for (const ScalarField& f : fields.node)
    if (static_cast<int>(f.values.size()) != ho.num_nodes())
      throw IoError("node field '" + f.name + "' has the wrong size");

  struct Out {
    int dim, type;
    FeatureId tag;
    std::vector<int> nodes;
  };
  std::vector<Out> els;
  for (int e = 0; e < ho.num_elements(); ++e)
    els.push_back({ho.dim, main_type, ho.element_tags[e], ho.elements[e]});
  for (const HoFacet& f : ho.facets) els.push_back({2, facet_type, f.surface, f.nodes});
  for (const HoCurveSegment& c : ho.curves)
    els.push_back({1, line_type, c.curve, detail::msh_line_nodes(c.nodes)});
  for (const auto& [id, n] : ho.points) els.push_back({0, kMshPointType, id, {n}});
  for (const Out& o : els)
    if (o.tag == 0)
      throw IoError("MSH physical tags must be positive; dimension " +
                    std::to_string(o.dim) + " entity has id 0");

  std::ofstream os(path);
  if (!os) throw IoError("cannot write " + path);
  os.precision(17);
  const long nn = ho.num_nodes();
  const long ne = static_cast<long>(els.size());

  if (version == MshVersion::V22) {
    os << "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n";
  } else {
    os << "$MeshFormat\n4.1 0 8\n$EndMeshFormat\n";
    // One entity per (dimension, feature id), bounded by the nodes it uses.
    std::array<std::map<FeatureId, BoundingBox>, 4> ents;
    for (const Out& o : els)
      for (int n : o.nodes) ents[o.dim][o.tag].add(ho.nodes[n]);
    if (ents[ho.dim].empty() && nn > 0) ents[ho.dim][1] = bounding_box(ho.nodes);
    os << "$Entities\n";
    for (int d = 0; d < 4; ++d) os << ents[d].size() << (d < 3 ? ' ' : '\n');
    for (int d = 0; d < 4; ++d)
      for (const auto& [id, bb] : ents[d]) {
        os << id << ' ' << bb.lo.x() << ' ' << bb.lo.y() << ' ' << bb.lo.z();
        if (d > 0) os << ' ' << bb.hi.x() << ' ' << bb.hi.y() << ' ' << bb.hi.z();
        os << " 1 " << id << (d > 0 ? " 0" : "") << '\n';
      }
    os << "$EndEntities\n";
  }
  os << "$SubcurveNodes\n" << node_kind_name(ho.kind) << "\n$EndSubcurveNodes\n";

  os << "$Nodes\n";
  if (version == MshVersion::V22) {
    os << nn << '\n';
  } else {
    const FeatureId owner =
        ho.element_tags.empty() ? 1 : *std::min_element(ho.element_tags.begin(),
                                                        ho.element_tags.end());
    os << (nn > 0 ? 1 : 0) << ' ' << nn << ' ' << (nn > 0 ? 1 : 0) << ' ' << nn
       << '\n';
    if (nn > 0) {
      os << ho.dim << ' ' << owner << " 0 " << nn << '\n';
      for (long i = 1; i <= nn; ++i) os << i << '\n';
    }
  }
  for (long i = 0; i < nn; ++i) {
    const Vec3& x = ho.nodes[i];
    if (version == MshVersion::V22) os << i + 1 << ' ';
    os << x.x() << ' ' << x.y() << ' ' << x.z() << '\n';
  }
  os << "$EndNodes\n$Elements\n";
  if (version == MshVersion::V22) {
    os << ne << '\n';
    for (long i = 0; i < ne; ++i) {
      const Out& o = els[i];
      os << i + 1 << ' ' << o.type << " 2 " << o.tag << ' ' << o.tag;
      for (int n : o.nodes) os << ' ' << n + 1;
      os << '\n';
    }
  } else {
    // Blocks group elements by (dimension, id, type) in first-seen order.
    std::map<std::tuple<int, FeatureId, int>, std::vector<long>> blocks;
    std::vector<std::tuple<int, FeatureId, int>> order;
    for (long i = 0; i < ne; ++i) {
      auto key = std::make_tuple(els[i].dim, els[i].tag, els[i].type);
      auto [it, fresh] = blocks.try_emplace(key);
      if (fresh) order.push_back(key);
      it->second.push_back(i);
    }
    os << order.size() << ' ' << ne << ' ' << (ne > 0 ? 1 : 0) << ' ' << ne
       << '\n';
    for (const auto& key : order) {
      const auto& list = blocks[key];
      os << std::get<0>(key) << ' ' << std::get<1>(key) << ' ' << std::get<2>(key)
         << ' ' << list.size() << '\n';
      for (long i : list) {
        os << i + 1;
        for (int n : els[i].nodes) os << ' ' << n + 1;
        os << '\n';
      }
    }
  }
  os << "$EndElements\n";
  for (const ScalarField& f : fields.element)
    detail::write_msh_data(os, "ElementData", f, 1);
  for (const ScalarField& f : fields.node)
    detail::write_msh_data(os, "NodeData", f, 1);
  if (!os) throw IoError("failed writing " + path);
}

namespace detail {

inline int max_element_dim(const MshFile& f) {
  int d = -1;
  for (const MshElement& e : f.elements) d = std::max(d, e.dim);
  return d;
}

}  // namespace detail

/**
 * Reads a degree-q mesh written by write_msh (or any MSH file with one
 * element degree). Lines become curve segments, points become feature
 * points and, for volumes, triangles become facets. Fields are returned
 * per main element and per node when requested.
 */
inline HighOrderMesh read_ho_mesh(const std::string& path,
                                  MeshFields* fields = nullptr) {
  MshFile f = read_msh(path);
  const int dim = detail::max_element_dim(f);
  if (dim < 2) throw IoError(path + ": no triangles or tetrahedra");
  HighOrderMesh ho;
  ho.dim = dim;
  ho.kind = f.kind;
  ho.nodes = std::move(f.nodes);
  ho.degree = -1;
  std::vector<int> main_index;
  for (int i = 0; i < static_cast<int>(f.elements.size()); ++i) {
    MshElement& e = f.elements[i];
    if (e.dim == 0) {
      ho.points[e.tag] = e.nodes[0];
      continue;
    }
    if (ho.degree < 0 && e.dim == dim) ho.degree = e.degree;
    if (ho.degree >= 0 && e.degree != ho.degree)
      throw IoError(path + ": mixed element degrees");
    if (e.dim == dim) {
      ho.elements.push_back(std::move(e.nodes));
      ho.element_tags.push_back(e.tag);
      main_index.push_back(i);
    } else if (e.dim == 2) {
      ho.facets.push_back({e.tag, std::move(e.nodes)});
    } else {
      std::vector<int> path_nodes{e.nodes[0]};
      path_nodes.insert(path_nodes.end(), e.nodes.begin() + 2, e.nodes.end());
      path_nodes.push_back(e.nodes[1]);
      ho.curves.push_back({e.tag, std::move(path_nodes)});
    }
  }
  for (const HoCurveSegment& c : ho.curves)
    if (static_cast<int>(c.nodes.size()) != ho.degree + 1)
      throw IoError(path + ": mixed element degrees");
  if (fields) {
    fields->node = std::move(f.fields.node);
    fields->element.clear();
    for (const ScalarField& s : f.fields.element) {
      ScalarField m{s.name, {}};
      for (int i : main_index) m.values.push_back(s.values[i]);
      fields->element.push_back(std::move(m));
    }
  }
  return ho;
}

/** Linear mesh read from file: a surface with its model (dim 2) or a
 *  volume with its boundary features (dim 3). */
struct LoadedMesh {
  int dim = 2;
  SurfaceMesh surface;
  FeatureModel model;
  VolumeMesh volume;
  VolumeFeatures features;
};

/** Orders the edges of every curve along its chains, breaking at points. */
inline FeatureModel order_curve_edges(const SurfaceMesh& mesh,
                                      FeatureModel model) {
  std::vector<char> is_break(mesh.num_vertices(), 0);
  for (const auto& [id, v] : model.points) is_break[v] = 1;
  for (auto& [id, edges] : model.curves) {
    std::vector<int> ids;
    for (const Edge& e : edges) {
      const int k = mesh.edge_index(e.a, e.b);
      if (k < 0)
        throw MeshError("curve " + std::to_string(id) + " edge " + edge_str(e) +
                        " is not a mesh edge");
      ids.push_back(k);
    }
    std::vector<Edge> ordered;
    for (const auto& chain : detail::trace_chains(mesh, ids, is_break))
      ordered.insert(ordered.end(), chain.begin(), chain.end());
    edges = std::move(ordered);
  }
  return model;
}

/**
 * Loads a linear triangle or tet mesh. High-order elements contribute their
 * vertices only. Triangle, line and point tags become surface, curve and
 * point ids; missing curves and points of a surface are completed. The
 * model is not checked for subdivision regularity here.
 */
inline LoadedMesh load_linear_mesh(const std::string& path) {
  const MshFile f = read_msh(path);
  LoadedMesh out;
  out.dim = detail::max_element_dim(f);
  if (out.dim < 2) throw IoError(path + ": no triangles or tetrahedra");

  // Element vertices keep their file order; other nodes are dropped.
  std::vector<int> vid(f.nodes.size(), -1);
  for (const MshElement& e : f.elements)
    if (e.dim == out.dim)
      for (int k = 0; k <= e.dim; ++k) vid[e.nodes[k]] = 0;
  std::vector<Vec3> verts;
  for (size_t n = 0; n < f.nodes.size(); ++n)
    if (vid[n] == 0) {
      vid[n] = static_cast<int>(verts.size());
      verts.push_back(f.nodes[n]);
    }
  auto vertex = [&](int n, const char* what, FeatureId id) {
    if (vid[n] < 0)
      throw MeshError(std::string(what) + " " + std::to_string(id) +
                      " uses node " + std::to_string(f.node_tags[n]) +
                      " which is not a mesh vertex");
    return vid[n];
  };

  std::map<FeatureId, int> points;
  std::map<FeatureId, std::vector<Edge>> curves;
  for (const MshElement& e : f.elements) {
    if (e.dim == 0) points[e.tag] = vertex(e.nodes[0], "point", e.tag);
    if (e.dim == 1)
      curves[e.tag].emplace_back(vertex(e.nodes[0], "curve", e.tag),
                                 vertex(e.nodes[1], "curve", e.tag));
  }

  if (out.dim == 2) {
    std::vector<Tri> tris;
    FeatureModel model;
    for (const MshElement& e : f.elements) {
      if (e.dim != 2) continue;
      model.surfaces[e.tag].push_back(static_cast<int>(tris.size()));
      tris.push_back({vid[e.nodes[0]], vid[e.nodes[1]], vid[e.nodes[2]]});
    }
    out.surface = SurfaceMesh(std::move(verts), std::move(tris));
    model.points = std::move(points);
    model.curves = std::move(curves);
    model = order_curve_edges(out.surface, std::move(model));
    out.model = complete_model(out.surface, std::move(model));
  } else {
    std::vector<Tet> tets;
    for (const MshElement& e : f.elements) {
      if (e.dim == 3)
        tets.push_back({vid[e.nodes[0]], vid[e.nodes[1]], vid[e.nodes[2]],
                        vid[e.nodes[3]]});
      if (e.dim == 2)
        out.features.surfaces[e.tag].push_back(
            {vertex(e.nodes[0], "surface", e.tag),
             vertex(e.nodes[1], "surface", e.tag),
             vertex(e.nodes[2], "surface", e.tag)});
    }
    out.volume = VolumeMesh(std::move(verts), std::move(tets));
    out.features.points = std::move(points);
    out.features.curves = std::move(curves);
  }
  return out;
}

/** Writes a linear surface with its model. */
inline void write_linear_msh(const SurfaceMesh& mesh, const FeatureModel& model,
                             const std::string& path,
                             MshVersion version = MshVersion::V41) {
  HighOrderMesh ho;
  ho.nodes = mesh.vertices();
  for (const Tri& t : mesh.triangles()) ho.elements.push_back({t[0], t[1], t[2]});
  ho.element_tags = surface_tags(mesh, model);
  for (const auto& [id, edges] : model.curves)
    for (const Edge& e : edges) ho.curves.push_back({id, {e.a, e.b}});
  ho.points = model.points;
  write_msh(ho, path, version);
}

/** Writes a linear tet mesh with its boundary features. */
inline void write_linear_msh(const VolumeMesh& mesh, const VolumeFeatures& features,
                             const std::string& path,
                             MshVersion version = MshVersion::V41,
                             FeatureId region = 1) {
  HighOrderMesh ho;
  ho.dim = 3;
  ho.nodes = mesh.vertices();
  for (const Tet& t : mesh.tets())
    ho.elements.push_back({t[0], t[1], t[2], t[3]});
  ho.element_tags.assign(mesh.num_tets(), region);
  for (const auto& [id, tris] : features.surfaces)
    for (const Tri& t : tris) ho.facets.push_back({id, {t[0], t[1], t[2]}});
  for (const auto& [id, edges] : features.curves)
    for (const Edge& e : edges) ho.curves.push_back({id, {e.a, e.b}});
  ho.points = features.points;
  write_msh(ho, path, version);
}

}  // namespace subcurve
