#include "gsgd/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "gsgd/errors.hpp"

namespace gsgd {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // binary keeps LF endings everywhere
  if (!out) throw ConfigError("cannot open for writing: " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open for reading: " + path);
  return in;
}

double parse_double(const std::string& tok, const std::string& path, std::size_t line) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ParseError(path + ":" + std::to_string(line) + ": bad number '" + tok + "'");
  }
}

std::size_t parse_index(const std::string& tok, const std::string& path,
                        std::size_t line) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(tok, &pos);
    if (pos != tok.size() || v < 0) throw std::invalid_argument(tok);
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    throw ParseError(path + ":" + std::to_string(line) + ": bad index '" + tok + "'");
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_matrix_csv(const std::string& path, const DenseMatrix& m) {
  auto out = open_out(path);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

DenseMatrix read_matrix_csv(const std::string& path) {
  auto in = open_in(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) row.push_back(parse_double(tok, path, lineno));
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParseError(path + ":" + std::to_string(lineno) + ": ragged row");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError(path + ": empty matrix file");
  DenseMatrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  return m;
}

void write_graph(const std::string& path, const SimilarityGraph& g) {
  auto out = open_out(path);
  out << g.vertex_count() << ' ' << g.edges().size() << '\n';
  for (const Edge& e : g.edges())
    out << e.i << ' ' << e.j << ' ' << format_double(e.weight) << '\n';
}

SimilarityGraph read_graph(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw ParseError(path + ": empty graph file");
  ++lineno;
  std::stringstream header(line);
  std::string tok_n;
  std::string tok_e;
  if (!(header >> tok_n >> tok_e))
    throw ParseError(path + ":1: expected header 'n e'");
  const std::size_t n = parse_index(tok_n, path, 1);
  const std::size_t ecount = parse_index(tok_e, path, 1);
  std::vector<Edge> edges;
  edges.reserve(ecount);
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string ti;
    std::string tj;
    std::string tw;
    if (!(ss >> ti >> tj >> tw))
      throw ParseError(path + ":" + std::to_string(lineno) + ": expected 'i j w'");
    edges.push_back({parse_index(ti, path, lineno), parse_index(tj, path, lineno),
                     parse_double(tw, path, lineno)});
  }
  if (edges.size() != ecount)
    throw ParseError(path + ": header announces " + std::to_string(ecount) +
                     " edges, found " + std::to_string(edges.size()));
  return SimilarityGraph(n, std::move(edges));
}

void write_observations(const std::string& path, const ObservationSet& obs) {
  auto out = open_out(path);
  out << obs.row_count() << ' ' << obs.col_count() << ' ' << obs.size() << ' '
      << format_double(obs.sampling_probability()) << '\n';
  for (const ObsEntry& e : obs.entries())
    out << e.i << ' ' << e.j << ' ' << format_double(e.value) << '\n';
}

ObservationSet read_observations(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path + ": empty observation file");
  std::stringstream header(line);
  std::string tm;
  std::string tn;
  std::string tc;
  std::string tp;
  if (!(header >> tm >> tn >> tc >> tp))
    throw ParseError(path + ":1: expected header 'm n count p'");
  const std::size_t m = parse_index(tm, path, 1);
  const std::size_t n = parse_index(tn, path, 1);
  const std::size_t count = parse_index(tc, path, 1);
  const double p = parse_double(tp, path, 1);
  std::vector<ObsEntry> entries;
  entries.reserve(count);
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string ti;
    std::string tj;
    std::string tv;
    if (!(ss >> ti >> tj >> tv))
      throw ParseError(path + ":" + std::to_string(lineno) + ": expected 'i j value'");
    entries.push_back({parse_index(ti, path, lineno), parse_index(tj, path, lineno),
                       parse_double(tv, path, lineno)});
  }
  if (entries.size() != count)
    throw ParseError(path + ": header announces " + std::to_string(count) +
                     " entries, found " + std::to_string(entries.size()));
  return ObservationSet(m, n, std::move(entries), p);
}

void write_entries(const std::string& path, std::size_t m, std::size_t n,
                   const std::vector<ObsEntry>& entries) {
  auto out = open_out(path);
  out << m << ' ' << n << ' ' << entries.size() << '\n';
  for (const ObsEntry& e : entries)
    out << e.i << ' ' << e.j << ' ' << format_double(e.value) << '\n';
}

std::vector<ObsEntry> read_entries(const std::string& path, std::size_t& m,
                                   std::size_t& n) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path + ": empty entry file");
  std::stringstream header(line);
  std::string tm;
  std::string tn;
  std::string tc;
  if (!(header >> tm >> tn >> tc))
    throw ParseError(path + ":1: expected header 'm n count'");
  m = parse_index(tm, path, 1);
  n = parse_index(tn, path, 1);
  const std::size_t count = parse_index(tc, path, 1);
  std::vector<ObsEntry> entries;
  entries.reserve(count);
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string ti;
    std::string tj;
    std::string tv;
    if (!(ss >> ti >> tj >> tv))
      throw ParseError(path + ":" + std::to_string(lineno) + ": expected 'i j value'");
    entries.push_back({parse_index(ti, path, lineno), parse_index(tj, path, lineno),
                       parse_double(tv, path, lineno)});
  }
  if (entries.size() != count)
    throw ParseError(path + ": entry count mismatch");
  return entries;
}

void write_trace_csv(const std::string& path, const SolverTrace& trace) {
  auto out = open_out(path);
  out << "iter,train_rmse,test_rmse,wall_ms\n";
  for (const TraceRecord& r : trace.records) {
    out << r.iter << ',' << format_double(r.train_rmse) << ','
        << format_double(r.test_rmse) << ',' << format_double(r.wall_ms) << '\n';
  }
  out << "# reason=" << reason_name(trace.reason) << '\n';
}

}  // namespace gsgd
