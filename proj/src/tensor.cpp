#include "qmc/tensor.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>

#include "qmc/errors.hpp"

namespace qmc {

namespace {

std::size_t size_for_rank(int rank) {
  if (rank > kMaxTensorRank) {
    throw RankLimitExceeded("tensor rank " + std::to_string(rank) + " exceeds limit " +
                            std::to_string(kMaxTensorRank));
  }
  return std::size_t{1} << rank;
}

// offsets[v] = bits of v scattered onto the given positions.
std::vector<std::size_t> scatter_table(const std::vector<int>& positions) {
  std::vector<std::size_t> table(std::size_t{1} << positions.size(), 0);
  for (std::size_t v = 0; v < table.size(); ++v) {
    std::size_t off = 0;
    for (std::size_t k = 0; k < positions.size(); ++k)
      if (v >> k & 1u) off |= std::size_t{1} << positions[k];
    table[v] = off;
  }
  return table;
}

int symmetric_difference_rank(const std::vector<std::string>& a,
                              const std::vector<std::string>& b) {
  int shared = 0;
  for (const auto& name : a)
    if (std::find(b.begin(), b.end(), name) != b.end()) ++shared;
  return static_cast<int>(a.size() + b.size()) - 2 * shared;
}

}  // namespace

Tensor::Tensor() : data_{Complex(1.0)} {}

Tensor::Tensor(std::vector<std::string> indices, std::vector<Complex> data)
    : indices_(std::move(indices)), data_(std::move(data)) {
  std::set<std::string> seen;
  for (const auto& name : indices_) {
    if (!seen.insert(name).second) throw IndexCollision("duplicate index name '" + name + "'");
  }
  if (data_.size() != size_for_rank(rank())) {
    throw DimensionMismatch("tensor data length does not equal 2^rank");
  }
}

Tensor Tensor::scalar(Complex value) { return Tensor({}, {value}); }

int Tensor::position(const std::string& name) const {
  auto it = std::find(indices_.begin(), indices_.end(), name);
  return it == indices_.end() ? -1 : static_cast<int>(it - indices_.begin());
}

Complex Tensor::at(const std::vector<int>& bits) const {
  if (bits.size() != indices_.size()) throw DimensionMismatch("wrong number of index values");
  std::size_t off = 0;
  for (std::size_t k = 0; k < bits.size(); ++k)
    if (bits[k]) off |= std::size_t{1} << k;
  return data_[off];
}

Tensor Tensor::relabelled(const std::string& from, const std::string& to) const {
  auto names = indices_;
  for (auto& name : names)
    if (name == from) name = to;
  return Tensor(std::move(names), data_);
}

Tensor Tensor::permuted(const std::vector<std::string>& order) const {
  if (order.size() != indices_.size()) {
    throw DimensionMismatch("permutation must list every index exactly once");
  }
  std::vector<int> source(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    source[k] = position(order[k]);
    if (source[k] < 0) throw DimensionMismatch("unknown index '" + order[k] + "'");
  }
  const auto table = scatter_table(source);
  std::vector<Complex> data(data_.size());
  for (std::size_t v = 0; v < data.size(); ++v) data[v] = data_[table[v]];
  return Tensor(order, std::move(data));
}

Tensor contract_pair(const Tensor& a, const Tensor& b) {
  std::vector<int> a_free, a_shared, b_free, b_shared;
  std::vector<std::string> out_names;
  for (int k = 0; k < a.rank(); ++k) {
    const int in_b = b.position(a.indices()[k]);
    if (in_b >= 0) {
      a_shared.push_back(k);
      b_shared.push_back(in_b);
    } else {
      a_free.push_back(k);
      out_names.push_back(a.indices()[k]);
    }
  }
  for (int k = 0; k < b.rank(); ++k) {
    if (a.position(b.indices()[k]) < 0) {
      b_free.push_back(k);
      out_names.push_back(b.indices()[k]);
    }
  }
  const std::size_t out_size = size_for_rank(static_cast<int>(out_names.size()));
  const auto af = scatter_table(a_free), as = scatter_table(a_shared);
  const auto bf = scatter_table(b_free), bs = scatter_table(b_shared);
  const std::size_t a_free_count = af.size();
  std::vector<Complex> out(out_size);
  const auto& ad = a.data();
  const auto& bd = b.data();
  for (std::size_t fb = 0; fb < bf.size(); ++fb) {
    for (std::size_t fa = 0; fa < a_free_count; ++fa) {
      Complex sum = 0.0;
      for (std::size_t c = 0; c < as.size(); ++c) sum += ad[af[fa] | as[c]] * bd[bf[fb] | bs[c]];
      out[fa | fb * a_free_count] = sum;
    }
  }
  return Tensor(std::move(out_names), std::move(out));
}

void TensorNetwork::validate() const {
  if (nodes.empty()) throw MalformedNetwork("network has no nodes");
  std::map<std::string, int> count;
  for (const auto& node : nodes)
    for (const auto& name : node.indices()) ++count[name];
  std::set<std::string> open(open_indices.begin(), open_indices.end());
  if (open.size() != open_indices.size()) throw MalformedNetwork("open index listed twice");
  for (const auto& name : open_indices) {
    if (count[name] != 1) {
      throw MalformedNetwork("open index '" + name + "' must appear on exactly one node");
    }
  }
  for (const auto& [name, c] : count) {
    if (open.count(name)) continue;
    if (c == 1) throw MalformedNetwork("dangling index '" + name + "' is not declared open");
    if (c > 2) throw MalformedNetwork("index '" + name + "' joins more than two nodes");
  }
}

std::vector<ContractionStep> plan_order(const TensorNetwork& net) {
  net.validate();
  std::map<int, std::vector<std::string>> live;
  for (std::size_t k = 0; k < net.nodes.size(); ++k) live[static_cast<int>(k)] = net.nodes[k].indices();
  int next_id = static_cast<int>(net.nodes.size());
  std::vector<ContractionStep> plan;
  while (live.size() > 1) {
    ContractionStep best{-1, -1, -1, std::numeric_limits<int>::max()};
    for (auto i = live.begin(); i != live.end(); ++i) {
      for (auto j = std::next(i); j != live.end(); ++j) {
        const int r = symmetric_difference_rank(i->second, j->second);
        if (r < best.result_rank) best = {i->first, j->first, -1, r};
      }
    }
    std::vector<std::string> merged;
    const auto& l = live[best.lhs];
    const auto& r = live[best.rhs];
    for (const auto& n : l)
      if (std::find(r.begin(), r.end(), n) == r.end()) merged.push_back(n);
    for (const auto& n : r)
      if (std::find(l.begin(), l.end(), n) == l.end()) merged.push_back(n);
    best.result = next_id++;
    live.erase(best.lhs);
    live.erase(best.rhs);
    live[best.result] = std::move(merged);
    plan.push_back(best);
  }
  return plan;
}

Tensor execute_plan(const TensorNetwork& net, const std::vector<ContractionStep>& plan) {
  net.validate();
  std::map<int, Tensor> live;
  for (std::size_t k = 0; k < net.nodes.size(); ++k) live.emplace(static_cast<int>(k), net.nodes[k]);
  for (const auto& step : plan) {
    auto l = live.find(step.lhs);
    auto r = live.find(step.rhs);
    if (l == live.end() || r == live.end() || step.lhs == step.rhs) {
      throw MalformedNetwork("contraction plan refers to a node that is not live");
    }
    Tensor result = contract_pair(l->second, r->second);
    live.erase(l);
    live.erase(step.rhs);
    if (!live.emplace(step.result, std::move(result)).second) {
      throw MalformedNetwork("contraction plan reuses a node id");
    }
  }
  if (live.size() != 1) throw MalformedNetwork("contraction plan does not reduce to one tensor");
  return live.begin()->second.permuted(net.open_indices);
}

Tensor contract_network(const TensorNetwork& net) { return execute_plan(net, plan_order(net)); }

Tensor vector_tensor(const CVector& v, const std::vector<std::string>& names) {
  if (v.size() != static_cast<Eigen::Index>(size_for_rank(static_cast<int>(names.size())))) {
    throw DimensionMismatch("vector length does not match the number of index names");
  }
  return Tensor(names, std::vector<Complex>(v.data(), v.data() + v.size()));
}

Tensor matrix_tensor(const CMatrix& m, const std::vector<std::string>& row_names,
                     const std::vector<std::string>& col_names) {
  const std::size_t rows = size_for_rank(static_cast<int>(row_names.size()));
  const std::size_t cols = size_for_rank(static_cast<int>(col_names.size()));
  if (static_cast<std::size_t>(m.rows()) != rows || static_cast<std::size_t>(m.cols()) != cols) {
    throw DimensionMismatch("matrix shape does not match the index names");
  }
  std::vector<std::string> names = row_names;
  names.insert(names.end(), col_names.begin(), col_names.end());
  std::vector<Complex> data(rows * cols);
  for (std::size_t y = 0; y < cols; ++y)
    for (std::size_t x = 0; x < rows; ++x)
      data[x | y * rows] = m(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y));
  return Tensor(std::move(names), std::move(data));
}

CVector tensor_vector(const Tensor& t, const std::vector<std::string>& names) {
  const Tensor p = t.permuted(names);
  CVector v(static_cast<Eigen::Index>(p.data().size()));
  for (std::size_t k = 0; k < p.data().size(); ++k) v(static_cast<Eigen::Index>(k)) = p.data()[k];
  return v;
}

CMatrix tensor_matrix(const Tensor& t, const std::vector<std::string>& row_names,
                      const std::vector<std::string>& col_names) {
  std::vector<std::string> names = row_names;
  names.insert(names.end(), col_names.begin(), col_names.end());
  const Tensor p = t.permuted(names);
  const Eigen::Index rows = Eigen::Index{1} << row_names.size();
  const Eigen::Index cols = Eigen::Index{1} << col_names.size();
  CMatrix m(rows, cols);
  for (Eigen::Index y = 0; y < cols; ++y)
    for (Eigen::Index x = 0; x < rows; ++x) m(x, y) = p.data()[static_cast<std::size_t>(x | y * rows)];
  return m;
}

std::string wire_name(int qubit, int layer) {
  return "q" + std::to_string(qubit) + std::string(static_cast<std::size_t>(layer), '\'');
}

TensorNetwork circuit_network(int n_qubits, const CVector& input,
                              const std::vector<PlacedGate>& gates) {
  std::vector<int> layer(static_cast<std::size_t>(n_qubits) + 1, 0);
  auto current = [&](int q) { return wire_name(q, layer[static_cast<std::size_t>(q)]); };
  TensorNetwork net;
  std::vector<std::string> inputs;
  for (int q = 1; q <= n_qubits; ++q) inputs.push_back(current(q));
  net.nodes.push_back(vector_tensor(input, inputs));
  for (const auto& gate : gates) {
    std::vector<std::string> in, out;
    for (int q : gate.targets) {
      if (q < 1 || q > n_qubits) throw TargetOutOfRange("gate target out of range");
      in.push_back(current(q));
      ++layer[static_cast<std::size_t>(q)];
      out.push_back(current(q));
    }
    net.nodes.push_back(matrix_tensor(gate.matrix, out, in));
  }
  for (int q = 1; q <= n_qubits; ++q) net.open_indices.push_back(current(q));
  return net;
}

}  // namespace qmc
