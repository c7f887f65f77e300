#ifndef LERW_GRAPH_IO_HPP
#define LERW_GRAPH_IO_HPP

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "lerw/graph.hpp"
#include "lerw/rng.hpp"

namespace lerw {

inline nlohmann::json graph_to_json(const EmbeddedGraph& g) {
  nlohmann::json vertices = nlohmann::json::array();
  for (VertexId v = 0; v < g.size(); ++v)
    vertices.push_back({{"id", v}, {"x", g.position(v).real()}, {"y", g.position(v).imag()}});
  nlohmann::json edges = nlohmann::json::array();
  for (VertexId v = 0; v < g.size(); ++v) {
    const auto nb = g.neighbors(v);
    const auto ws = g.weights(v);
    for (std::size_t i = 0; i < nb.size(); ++i) edges.push_back({{"from", v}, {"to", nb[i]}, {"w", ws[i]}});
  }
  return {{"mesh", g.mesh()},
          {"origin", g.origin()},
          {"vertices", std::move(vertices)},
          {"edges", std::move(edges)},
          {"meta", g.meta()}};
}

/// Vertex ids must be exactly 0..n-1 (in any order).
inline EmbeddedGraph graph_from_json(const nlohmann::json& j) {
  try {
    const auto& vertices = j.at("vertices");
    std::vector<Point> positions(vertices.size());
    std::vector<bool> seen(vertices.size(), false);
    for (const auto& v : vertices) {
      const auto id = v.at("id").get<std::uint64_t>();
      if (id >= vertices.size() || seen[id])
        throw std::invalid_argument("vertex ids must be a permutation of 0..n-1");
      seen[id] = true;
      positions[id] = Point(v.at("x").get<double>(), v.at("y").get<double>());
    }
    GraphBuilder b;
    for (const auto& p : positions) b.add_vertex(p);
    for (const auto& e : j.at("edges"))
      b.add_edge(e.at("from").get<VertexId>(), e.at("to").get<VertexId>(), e.at("w").get<double>());
    b.set_origin(j.at("origin").get<VertexId>());
    b.set_mesh(j.at("mesh").get<double>());
    if (j.contains("meta")) b.meta() = j.at("meta");
    return std::move(b).build();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed graph JSON: ") + e.what());
  }
}

inline std::string graph_dump(const EmbeddedGraph& g) { return graph_to_json(g).dump(); }

/// Content hash of the serialized graph, as 16 hex digits.
inline std::string hash_hex(std::string_view bytes) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(bytes)));
  return buf;
}

inline std::string graph_hash(const EmbeddedGraph& g) { return hash_hex(graph_dump(g)); }

inline void save_graph(const EmbeddedGraph& g, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << graph_dump(g) << '\n';
}

inline EmbeddedGraph load_graph(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot read " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("malformed graph JSON in " + path.string() + ": " + e.what());
  }
  return graph_from_json(j);
}

}  // namespace lerw

#endif  // LERW_GRAPH_IO_HPP
