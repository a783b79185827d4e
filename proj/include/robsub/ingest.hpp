#ifndef ROBSUB_INGEST_HPP
#define ROBSUB_INGEST_HPP

#include <cstdint>
#include <filesystem>
#include <string>

#include "robsub/objectives.hpp"

namespace robsub {

class ParseError : public std::runtime_error {
public:
  ParseError(const std::filesystem::path& path, std::size_t line,
             const std::string& what);
};

/// Counters for tolerated input defects, exposed for test assertions.
struct IngestWarnings {
  std::size_t dropped_self_loops = 0;
  std::size_t collapsed_duplicate_edges = 0;
  std::size_t dropped_unknown_movie_ratings = 0;
};

/// Whitespace-separated integer endpoints, '#' comments.  Vertex ids are
/// remapped densely in first-seen order; the result is undirected and simple.
Graph load_snap_edges(const std::filesystem::path& path,
                      IngestWarnings* warnings = nullptr);

/// MovieLens-style CSVs: ratings as userId,movieId,rating,timestamp (header
/// auto-detected) and movies as movieId,title,genres with pipe-separated
/// genres.  Ratings whose movie is missing from the movies file are dropped
/// with a counted warning.
RatingsModel load_movielens(const std::filesystem::path& ratings_path,
                            const std::filesystem::path& movies_path,
                            IngestWarnings* warnings = nullptr);

/// Seeded vertex subsample with induced edges.  A cap of 0 or >= n is the
/// identity.
Graph subsample(const Graph& graph, std::size_t cap, std::uint64_t seed);

/// Seeded movie subsample keeping rating vectors and genres.
RatingsModel subsample(const RatingsModel& model, std::size_t cap,
                       std::uint64_t seed);

/// Preferential-attachment graph standing in for social-network datasets in
/// fixture-scale runs; deterministic per seed.
Graph synthetic_social_graph(std::size_t vertex_count,
                             std::size_t edges_per_vertex, std::uint64_t seed);

} // namespace robsub

#endif // ROBSUB_INGEST_HPP
