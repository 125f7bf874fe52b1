#pragma once

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hdit {

struct PartitionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Ordered block sizes q_1..q_k with the derived totals every centering
// depends on: p = sum q_i, k, q_max and r_gap = p - q_max.
struct GroupPartition {
  std::vector<int> q;
  int p = 0;
  int k = 0;
  int q_max = 0;
  int r_gap = 0;

  explicit GroupPartition(std::vector<int> blocks) : q(std::move(blocks)) {
    k = static_cast<int>(q.size());
    if (k < 2) {
      throw PartitionError("partition needs at least two blocks");
    }
    for (int qi : q) {
      if (qi < 1) {
        throw PartitionError("every block size must be a positive integer");
      }
    }
    p = std::accumulate(q.begin(), q.end(), 0);
    q_max = *std::max_element(q.begin(), q.end());
    r_gap = p - q_max;
  }

  std::string to_string() const {
    std::ostringstream os;
    for (int i = 0; i < k; ++i) {
      if (i) os << ',';
      os << q[i];
    }
    return os.str();
  }
};

// Flag grammar "q1,q2,...,qk".
inline GroupPartition parse_partition(std::string_view text) {
  std::vector<int> blocks;
  std::string token;
  std::istringstream is{std::string(text)};
  while (std::getline(is, token, ',')) {
    try {
      size_t pos = 0;
      const int v = std::stoi(token, &pos);
      while (pos < token.size() && std::isspace(static_cast<unsigned char>(token[pos]))) ++pos;
      if (pos != token.size()) throw std::invalid_argument(token);
      blocks.push_back(v);
    } catch (const std::exception&) {
      throw PartitionError("cannot parse partition token '" + token + "'");
    }
  }
  if (blocks.empty()) {
    throw PartitionError("empty partition string");
  }
  return GroupPartition(std::move(blocks));
}

// (n, partition) pair indexing a distribution-free null law.  The LRT
// path requires p < n.
struct NullLawSpec {
  int n;
  GroupPartition partition;

  NullLawSpec(int sample_size, GroupPartition part)
      : n(sample_size), partition(std::move(part)) {
    if (partition.p >= n) {
      throw PartitionError("null law requires p < n (p=" +
                           std::to_string(partition.p) +
                           ", n=" + std::to_string(n) + ")");
    }
  }
};

}  // namespace hdit
