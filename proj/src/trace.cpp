#include "rbma/trace.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

namespace rbma {

namespace {

// Splits on commas and whitespace; returns at most `limit` tokens.
std::vector<std::string_view> tokenize(std::string_view line, std::size_t limit) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  auto is_sep = [](char c) { return c == ',' || c == ' ' || c == '\t' || c == '\r'; };
  while (i < line.size() && out.size() < limit) {
    while (i < line.size() && is_sep(line[i])) ++i;
    std::size_t start = i;
    while (i < line.size() && !is_sep(line[i])) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

bool parse_node(std::string_view tok, std::uint64_t& out) {
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc() && ptr == tok.data() + tok.size();
}

Trace sample_pairs(const std::vector<NodePair>& pairs, const std::vector<double>& weights,
                   std::size_t node_count, std::size_t count, std::uint64_t seed) {
  Trace trace;
  trace.node_count = node_count;
  if (count == 0) return trace;
  std::mt19937_64 rng(seed);
  std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
  trace.requests.reserve(count);
  for (std::size_t i = 0; i < count; ++i) trace.requests.push_back(pairs[pick(rng)]);
  return trace;
}

}  // namespace

ParsedTrace parse_trace(std::istream& in, std::size_t node_count) {
  ParsedTrace result;
  result.trace.node_count = node_count;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto tokens = tokenize(line, 2);
    if (tokens.empty()) continue;
    std::uint64_t src = 0, dst = 0;
    if (tokens.size() < 2 || !parse_node(tokens[0], src) || !parse_node(tokens[1], dst))
      throw Error(Errc::MalformedLine, "line " + std::to_string(line_no) + ": '" + line + "'");
    if (src >= node_count || dst >= node_count)
      throw Error(Errc::NodeOutOfRange, "line " + std::to_string(line_no) + ": node id >= " +
                                            std::to_string(node_count));
    if (src == dst) {
      ++result.skipped_self_loops;
      continue;
    }
    result.trace.requests.emplace_back(static_cast<NodeId>(src), static_cast<NodeId>(dst));
  }
  return result;
}

void write_trace(std::ostream& out, const Trace& trace) {
  for (const auto& r : trace.requests) out << r.lo << ',' << r.hi << '\n';
}

WeightMatrix read_weight_matrix(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ss(line);
    std::vector<double> row;
    std::string tok;
    while (ss >> tok) {
      double w = 0;
      auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), w);
      if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(w) || w < 0)
        throw Error(Errc::MalformedLine, "matrix line " + std::to_string(line_no) + ": bad weight '" + tok + "'");
      row.push_back(w);
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  WeightMatrix m;
  m.n = rows.size();
  for (const auto& row : rows) {
    if (row.size() != m.n)
      throw Error(Errc::MalformedLine, "matrix is not square: " + std::to_string(m.n) + " rows, row of " +
                                           std::to_string(row.size()));
    m.weights.insert(m.weights.end(), row.begin(), row.end());
  }
  return m;
}

Trace sample_from_matrix(const WeightMatrix& matrix, std::size_t count, std::uint64_t seed) {
  if (matrix.weights.size() != matrix.n * matrix.n)
    throw Error(Errc::InvalidParams, "weight matrix storage does not match n*n");
  std::vector<NodePair> pairs;
  std::vector<double> weights;
  for (NodeId i = 0; i < matrix.n; ++i) {
    for (NodeId j = i + 1; j < matrix.n; ++j) {
      double w = matrix.at(i, j) + matrix.at(j, i);
      if (w < 0 || !std::isfinite(w)) throw Error(Errc::InvalidParams, "negative or non-finite weight");
      if (w > 0) {
        pairs.emplace_back(i, j);
        weights.push_back(w);
      }
    }
  }
  if (pairs.empty()) throw Error(Errc::AllZeroMatrix, "no positive off-diagonal weight");
  return sample_pairs(pairs, weights, matrix.n, count, seed);
}

std::vector<NodePair> zipf_pair_ranking(std::size_t node_count, std::uint64_t seed) {
  std::vector<NodePair> pairs;
  pairs.reserve(node_count * (node_count - 1) / 2);
  for (NodeId i = 0; i < node_count; ++i)
    for (NodeId j = i + 1; j < node_count; ++j) pairs.emplace_back(i, j);
  // Separate stream from the sampler so the ranking does not shift with count.
  std::mt19937_64 rng(mix_seed(seed));
  std::shuffle(pairs.begin(), pairs.end(), rng);
  return pairs;
}

Trace zipf_trace(std::size_t node_count, double exponent, std::size_t count, std::uint64_t seed) {
  if (!(exponent > 0) || !std::isfinite(exponent))
    throw Error(Errc::InvalidExponent, "zipf exponent must be a finite positive real");
  if (node_count < 2) throw Error(Errc::InvalidParams, "zipf trace needs at least two nodes");
  auto pairs = zipf_pair_ranking(node_count, seed);
  std::vector<double> weights(pairs.size());
  for (std::size_t r = 0; r < weights.size(); ++r)
    weights[r] = std::pow(static_cast<double>(r + 1), -exponent);
  return sample_pairs(pairs, weights, node_count, count, seed);
}

StarInstance adversarial_star_instance(std::size_t n_items, std::size_t b, std::size_t a, double alpha,
                                       std::span<const std::uint32_t> paging_sequence) {
  if (b == 0 || a == 0 || a > b) throw Error(Errc::InvalidParams, "need 1 <= a <= b");
  if (n_items <= b) throw Error(Errc::InvalidParams, "need more items than cache slots (n_items > b)");
  if (!(alpha >= 1) || !std::isfinite(alpha)) throw Error(Errc::InvalidCost, "alpha must be >= 1");
  const auto block = static_cast<std::size_t>(std::ceil(alpha));
  StarInstance inst{Topology::star(n_items), Trace{}};
  inst.trace.node_count = n_items + 1;
  inst.trace.requests.reserve(block * paging_sequence.size());
  for (std::uint32_t item : paging_sequence) {
    if (item < 1 || item > n_items)
      throw Error(Errc::ItemOutOfRange, "item " + std::to_string(item) + " not in [1, " +
                                            std::to_string(n_items) + "]");
    inst.trace.requests.insert(inst.trace.requests.end(), block, Request(0, item));
  }
  return inst;
}

}  // namespace rbma
