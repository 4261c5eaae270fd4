#pragma once

#include <string>
#include <vector>

#include "gsgd/dense_matrix.hpp"
#include "gsgd/graph.hpp"
#include "gsgd/observation.hpp"
#include "gsgd/solvers.hpp"

namespace gsgd {

// Matrix CSV: one row per line, '.' decimal, no header.
void write_matrix_csv(const std::string& path, const DenseMatrix& m);
DenseMatrix read_matrix_csv(const std::string& path);

// Graph file: first line "n e", then e lines "i j w" (0-based, i < j, w > 0).
void write_graph(const std::string& path, const SimilarityGraph& g);
SimilarityGraph read_graph(const std::string& path);

// Observation triplets: header "m n count p", then "i j value" lines.
void write_observations(const std::string& path, const ObservationSet& obs);
ObservationSet read_observations(const std::string& path);

// Entry list without the sampling-probability header (holdout splits).
void write_entries(const std::string& path, std::size_t m, std::size_t n,
                   const std::vector<ObsEntry>& entries);
std::vector<ObsEntry> read_entries(const std::string& path, std::size_t& m,
                                   std::size_t& n);

// Trace CSV: "iter,train_rmse,test_rmse,wall_ms" rows and a final
// "# reason=..." line.
void write_trace_csv(const std::string& path, const SolverTrace& trace);

std::string format_double(double v);

}  // namespace gsgd
