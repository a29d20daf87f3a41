#include "segver/subsets.hpp"

#include <limits>

#include "segver/error.hpp"

namespace segver {

std::uint64_t subset_count(int n, int k) {
  if (n < 0 || k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  unsigned __int128 c = 1;
  for (int i = 1; i <= k; ++i) {
    c = c * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
    if (c > std::numeric_limits<std::uint64_t>::max()) throw InvalidInput("subset count overflows 64 bits");
  }
  return static_cast<std::uint64_t>(c);
}

std::vector<int> unrank_subset(int n, int k, std::uint64_t rank) {
  if (k < 0 || k > n) throw InvalidInput("subset size out of range");
  if (rank >= subset_count(n, k)) throw InvalidInput("subset rank out of range");
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(k));
  int next = 0;
  for (int pos = 0; pos < k; ++pos) {
    for (int c = next;; ++c) {
      const std::uint64_t with_c = subset_count(n - c - 1, k - pos - 1);
      if (rank < with_c) {
        out.push_back(c);
        next = c + 1;
        break;
      }
      rank -= with_c;
    }
  }
  return out;
}

SubsetStream::SubsetStream(int n, int k, std::uint64_t start_rank)
    : n_(n), k_(k), rank_(start_rank), done_(false) {
  if (k < 0 || n < 0 || k > n) throw InvalidInput("subset size out of range");
  if (start_rank >= subset_count(n, k)) {
    done_ = true;
    return;
  }
  idx_ = unrank_subset(n, k, start_rank);
}

void SubsetStream::advance() {
  if (done_) return;
  ++rank_;
  int i = k_ - 1;
  while (i >= 0 && idx_[static_cast<std::size_t>(i)] == n_ - k_ + i) --i;
  if (i < 0) {
    done_ = true;
    return;
  }
  ++idx_[static_cast<std::size_t>(i)];
  for (int j = i + 1; j < k_; ++j) {
    idx_[static_cast<std::size_t>(j)] = idx_[static_cast<std::size_t>(j - 1)] + 1;
  }
}

std::vector<std::vector<int>> SubsetStream::collect() {
  std::vector<std::vector<int>> out;
  for (; !done(); advance()) out.push_back(current());
  return out;
}

}  // namespace segver
