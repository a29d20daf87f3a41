#pragma once

#include <cstdint>
#include <vector>

namespace segver {

/// Number of k-element subsets of an n-set; throws InvalidInput on overflow.
std::uint64_t subset_count(int n, int k);

/// The subset at lexicographic position `rank` among k-subsets of {0..n-1}.
std::vector<int> unrank_subset(int n, int k, std::uint64_t rank);

/// Lexicographic stream of k-element index subsets of {0, ..., n-1},
/// restartable at any rank so that contiguous rank ranges can be handed to
/// different workers.
class SubsetStream {
 public:
  SubsetStream(int n, int k, std::uint64_t start_rank = 0);

  bool done() const noexcept { return done_; }
  const std::vector<int>& current() const noexcept { return idx_; }
  std::uint64_t rank() const noexcept { return rank_; }
  void advance();

  /// All remaining subsets, for small cases and tests.
  std::vector<std::vector<int>> collect();

 private:
  int n_;
  int k_;
  std::vector<int> idx_;
  std::uint64_t rank_;
  bool done_;
};

}  // namespace segver
