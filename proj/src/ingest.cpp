#include "robsub/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "robsub/random.hpp"

namespace robsub {

ParseError::ParseError(const std::filesystem::path& path, std::size_t line,
                       const std::string& what)
    : std::runtime_error(path.string() + ":" + std::to_string(line) + ": " +
                         what) {}

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(s);
  while (std::getline(in, field, sep)) out.push_back(field);
  return out;
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return in;
}

} // namespace

Graph load_snap_edges(const std::filesystem::path& path,
                      IngestWarnings* warnings) {
  std::ifstream in = open_or_throw(path);
  std::unordered_map<std::uint64_t, ElementId> remap;
  std::vector<std::pair<ElementId, ElementId>> edges;
  IngestWarnings local;
  std::string line;
  std::size_t line_number = 0;
  auto dense = [&](std::uint64_t raw) {
    auto [it, inserted] = remap.emplace(raw, static_cast<ElementId>(remap.size()));
    (void)inserted;
    return it->second;
  };
  while (std::getline(in, line)) {
    ++line_number;
    const std::string text = trim(line);
    if (text.empty() || text[0] == '#') continue;
    std::istringstream tokens(text);
    std::uint64_t u, v;
    if (!(tokens >> u >> v))
      throw ParseError(path, line_number, "expected two integer endpoints");
    std::string extra;
    if (tokens >> extra)
      throw ParseError(path, line_number, "trailing tokens after edge");
    const ElementId du = dense(u), dv = dense(v);
    if (du == dv) {
      ++local.dropped_self_loops;
      continue;
    }
    edges.emplace_back(du, dv);
  }
  // Count duplicates against the undirected edge set.
  std::vector<std::pair<ElementId, ElementId>> canon;
  canon.reserve(edges.size());
  for (auto [u, v] : edges) canon.emplace_back(std::min(u, v), std::max(u, v));
  std::sort(canon.begin(), canon.end());
  local.collapsed_duplicate_edges =
      canon.size() -
      static_cast<std::size_t>(
          std::distance(canon.begin(), std::unique(canon.begin(), canon.end())));
  if (warnings) {
    warnings->dropped_self_loops += local.dropped_self_loops;
    warnings->collapsed_duplicate_edges += local.collapsed_duplicate_edges;
  }
  return make_graph(remap.size(), edges);
}

RatingsModel load_movielens(const std::filesystem::path& ratings_path,
                            const std::filesystem::path& movies_path,
                            IngestWarnings* warnings) {
  RatingsModel model;
  std::unordered_map<std::uint64_t, ElementId> movie_index;

  {
    std::ifstream in = open_or_throw(movies_path);
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
      ++line_number;
      const std::string text = trim(line);
      if (text.empty()) continue;
      if (line_number == 1 && text.rfind("movieId", 0) == 0) continue;
      const auto fields = split(text, ',');
      if (fields.size() < 3)
        throw ParseError(movies_path, line_number,
                         "expected movieId,title,genres");
      std::uint64_t raw_id = 0;
      try {
        raw_id = std::stoull(trim(fields[0]));
      } catch (const std::exception&) {
        throw ParseError(movies_path, line_number, "bad movie id");
      }
      const ElementId idx = static_cast<ElementId>(model.movie_count());
      movie_index.emplace(raw_id, idx);
      model.vectors.emplace_back();
      std::set<std::string> labels;
      // Titles may contain commas; genres are always the final field.
      for (const auto& genre : split(trim(fields.back()), '|')) {
        const std::string g = trim(genre);
        if (!g.empty() && g != "(no genres listed)") labels.insert(g);
      }
      model.genres.push_back(std::move(labels));
    }
  }

  struct RawRating {
    ElementId movie;
    std::uint32_t user;
    double rating;
  };
  std::vector<RawRating> ratings;
  IngestWarnings local;
  {
    std::ifstream in = open_or_throw(ratings_path);
    std::string line;
    std::size_t line_number = 0;
    double sum = 0.0;
    while (std::getline(in, line)) {
      ++line_number;
      const std::string text = trim(line);
      if (text.empty()) continue;
      if (line_number == 1 && text.rfind("userId", 0) == 0) continue;
      const auto fields = split(text, ',');
      if (fields.size() < 3)
        throw ParseError(ratings_path, line_number,
                         "expected userId,movieId,rating[,timestamp]");
      std::uint32_t user = 0;
      std::uint64_t raw_movie = 0;
      double rating = 0.0;
      try {
        user = static_cast<std::uint32_t>(std::stoul(trim(fields[0])));
        raw_movie = std::stoull(trim(fields[1]));
        rating = std::stod(trim(fields[2]));
      } catch (const std::exception&) {
        throw ParseError(ratings_path, line_number, "bad rating row");
      }
      const auto it = movie_index.find(raw_movie);
      if (it == movie_index.end()) {
        ++local.dropped_unknown_movie_ratings;
        continue;
      }
      ratings.push_back({it->second, user, rating});
      sum += rating;
    }
    model.mean_rating = ratings.empty() ? 0.0 : sum / ratings.size();
  }

  for (const auto& r : ratings)
    model.vectors[r.movie].emplace_back(r.user, r.rating - model.mean_rating);
  for (auto& vec : model.vectors)
    std::sort(vec.begin(), vec.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

  if (warnings)
    warnings->dropped_unknown_movie_ratings +=
        local.dropped_unknown_movie_ratings;
  return model;
}

namespace {

std::vector<std::size_t> pick_subset(std::size_t n, std::size_t cap,
                                     std::uint64_t seed) {
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(seed);
  for (std::size_t i = n; i > 1; --i)
    std::swap(order[i - 1], order[rng.uniform_int(0, i - 1)]);
  order.resize(cap);
  std::sort(order.begin(), order.end());
  return order;
}

} // namespace

Graph subsample(const Graph& graph, std::size_t cap, std::uint64_t seed) {
  if (cap == 0 || cap >= graph.vertex_count) return graph;
  const auto kept = pick_subset(graph.vertex_count, cap, seed);
  std::unordered_map<ElementId, ElementId> remap;
  for (std::size_t i = 0; i < kept.size(); ++i)
    remap.emplace(static_cast<ElementId>(kept[i]), static_cast<ElementId>(i));
  std::vector<std::pair<ElementId, ElementId>> edges;
  for (const auto [old_u, new_u] : remap)
    for (ElementId v : graph.adjacency[old_u]) {
      const auto it = remap.find(v);
      if (it != remap.end() && old_u < v) edges.emplace_back(new_u, it->second);
    }
  return make_graph(kept.size(), edges);
}

RatingsModel subsample(const RatingsModel& model, std::size_t cap,
                       std::uint64_t seed) {
  if (cap == 0 || cap >= model.movie_count()) return model;
  const auto kept = pick_subset(model.movie_count(), cap, seed);
  RatingsModel out;
  out.mean_rating = model.mean_rating;
  for (std::size_t idx : kept) {
    out.vectors.push_back(model.vectors[idx]);
    out.genres.push_back(model.genres[idx]);
  }
  return out;
}

Graph synthetic_social_graph(std::size_t vertex_count,
                             std::size_t edges_per_vertex,
                             std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::pair<ElementId, ElementId>> edges;
  std::vector<ElementId> endpoint_pool;
  const std::size_t core = std::min(vertex_count, edges_per_vertex + 1);
  for (ElementId u = 0; u < core; ++u)
    for (ElementId v = u + 1; v < core; ++v) {
      edges.emplace_back(u, v);
      endpoint_pool.push_back(u);
      endpoint_pool.push_back(v);
    }
  for (ElementId u = static_cast<ElementId>(core); u < vertex_count; ++u) {
    for (std::size_t k = 0; k < edges_per_vertex; ++k) {
      const ElementId v =
          endpoint_pool[rng.uniform_int(0, endpoint_pool.size() - 1)];
      if (v == u) continue;
      edges.emplace_back(u, v);
      endpoint_pool.push_back(u);
      endpoint_pool.push_back(v);
    }
  }
  return make_graph(vertex_count, edges);
}

} // namespace robsub
