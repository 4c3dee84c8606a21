#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "dynwalk/lattice.hpp"

namespace dynwalk {

// Prefix sums S_1..S_N of a step vector under single-step replacement.
//
// Steps are cut into blocks of at most B indices. Each block keeps the
// prefix sums local to the block, a count map of those local positions and an
// additive offset (the position just before the block). S_n = offset + local.
// A block contains a zero iff its map holds -offset, so interior blocks of a
// range query cost one lookup, and point updates cost O(B + N/B).
//
// Optional segment cuts force block boundaries after the given indices and
// keep one zero-block counter per segment; the scanner uses them to test
// whole schedule windows in O(1).
class PrefixState {
 public:
  struct OpCounts {
    std::uint64_t local_writes = 0;   // local prefix entries rewritten
    std::uint64_t offset_shifts = 0;  // block offsets shifted
  };

  PrefixState() = default;
  explicit PrefixState(std::span<const Direction> steps, std::size_t block_size = 0,
                       std::span<const std::size_t> cuts = {});

  std::size_t size() const { return steps_.size(); }
  std::size_t block_size() const { return block_size_; }
  std::size_t block_count() const { return blocks_.size(); }
  Direction step(std::size_t i) const;

  // S_n for 0 <= n <= N; S_0 is the origin.
  LatticePoint position(std::size_t n) const;

  // Replace step i (1-based). Returns the shift applied to S_i..S_N.
  LatticePoint point_update(std::size_t i, Direction d);

  // Some n in [a, b] with S_n = 0. Requires 1 <= a <= b <= N.
  bool has_zero_in(std::size_t a, std::size_t b) const;
  bool has_zero_anywhere() const { return zero_blocks_ > 0; }

  // Segment j covers (cut_{j-1}, cut_j], the last segment runs to N.
  std::size_t segment_count() const { return segment_zero_blocks_.size(); }
  bool segment_has_zero(std::size_t j) const { return segment_zero_blocks_.at(j) > 0; }

  std::size_t zero_block_count() const { return zero_blocks_; }
  std::size_t recount_zero_blocks() const;  // from scratch, for coherence checks

  const OpCounts& op_counts() const { return ops_; }
  void reset_op_counts() { ops_ = {}; }

 private:
  struct Block {
    std::size_t begin;  // first index (1-based)
    std::size_t end;    // one past last index
    std::size_t segment;
    LatticePoint offset;
    bool has_zero;
    std::unordered_map<LatticePoint, std::uint32_t> counts;
  };

  std::size_t block_of(std::size_t n) const;
  void set_zero_flag(Block& b, bool flag);
  static void add_local(Block& b, const LatticePoint& p);
  static void remove_local(Block& b, const LatticePoint& p);

  std::vector<Direction> steps_;
  std::vector<LatticePoint> local_;   // local_[n-1] = S_n - offset(block of n)
  std::vector<std::size_t> block_index_;  // block of index n, 1-based n -> block
  std::vector<Block> blocks_;
  std::vector<std::size_t> segment_zero_blocks_;
  std::size_t zero_blocks_ = 0;
  std::size_t block_size_ = 0;
  OpCounts ops_;
};

// Default block size ceil(sqrt(N)), at least 1.
std::size_t default_block_size(std::size_t n);

}  // namespace dynwalk
