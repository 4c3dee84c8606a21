#include "dynwalk/prefix_state.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dynwalk {

std::size_t default_block_size(std::size_t n) {
  auto b = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
  while (b * b < n) ++b;
  while (b > 1 && (b - 1) * (b - 1) >= n) --b;
  return std::max<std::size_t>(b, 1);
}

PrefixState::PrefixState(std::span<const Direction> steps, std::size_t block_size,
                         std::span<const std::size_t> cuts)
    : steps_(steps.begin(), steps.end()), local_(steps.size()), block_index_(steps.size() + 1) {
  const std::size_t n = steps_.size();
  block_size_ = block_size == 0 ? default_block_size(n) : block_size;

  std::vector<std::size_t> sorted_cuts;
  for (std::size_t c : cuts)
    if (c >= 1 && c < n) sorted_cuts.push_back(c);
  std::sort(sorted_cuts.begin(), sorted_cuts.end());
  sorted_cuts.erase(std::unique(sorted_cuts.begin(), sorted_cuts.end()), sorted_cuts.end());
  segment_zero_blocks_.assign(sorted_cuts.size() + 1, 0);

  LatticePoint pos{};
  std::size_t segment = 0;
  std::size_t begin = 1;
  while (begin <= n) {
    std::size_t end = std::min(begin + block_size_, n + 1);
    while (segment < sorted_cuts.size() && sorted_cuts[segment] < begin) ++segment;
    if (segment < sorted_cuts.size()) end = std::min(end, sorted_cuts[segment] + 1);
    Block b{begin, end, segment, pos, false, {}};
    b.counts.reserve(end - begin);
    LatticePoint local{};
    for (std::size_t i = begin; i < end; ++i) {
      local += step_vector(steps_[i - 1]);
      local_[i - 1] = local;
      block_index_[i] = blocks_.size();
      add_local(b, local);
    }
    pos += local;
    blocks_.push_back(std::move(b));
    set_zero_flag(blocks_.back(), blocks_.back().counts.contains(-blocks_.back().offset));
    begin = end;
  }
}

Direction PrefixState::step(std::size_t i) const {
  if (i < 1 || i > size()) throw std::out_of_range("step index out of range");
  return steps_[i - 1];
}

std::size_t PrefixState::block_of(std::size_t n) const { return block_index_[n]; }

void PrefixState::add_local(Block& b, const LatticePoint& p) { ++b.counts[p]; }

void PrefixState::remove_local(Block& b, const LatticePoint& p) {
  auto it = b.counts.find(p);
  if (--it->second == 0) b.counts.erase(it);
}

void PrefixState::set_zero_flag(Block& b, bool flag) {
  if (b.has_zero == flag) return;
  b.has_zero = flag;
  if (flag) {
    ++zero_blocks_;
    ++segment_zero_blocks_[b.segment];
  } else {
    --zero_blocks_;
    --segment_zero_blocks_[b.segment];
  }
}

LatticePoint PrefixState::position(std::size_t n) const {
  if (n > size())
    throw std::out_of_range("position index " + std::to_string(n) + " exceeds N = " +
                            std::to_string(size()));
  if (n == 0) return {};
  return blocks_[block_of(n)].offset + local_[n - 1];
}

LatticePoint PrefixState::point_update(std::size_t i, Direction d) {
  if (i < 1 || i > size()) throw std::out_of_range("point_update index out of range");
  const LatticePoint delta = step_vector(d) - step_vector(steps_[i - 1]);
  if (delta.is_origin()) return delta;
  steps_[i - 1] = d;

  const std::size_t bi = block_of(i);
  Block& b = blocks_[bi];
  for (std::size_t n = i; n < b.end; ++n) {
    remove_local(b, local_[n - 1]);
    local_[n - 1] += delta;
    add_local(b, local_[n - 1]);
    ++ops_.local_writes;
  }
  set_zero_flag(b, b.counts.contains(-b.offset));

  for (std::size_t j = bi + 1; j < blocks_.size(); ++j) {
    Block& c = blocks_[j];
    c.offset += delta;
    set_zero_flag(c, c.counts.contains(-c.offset));
    ++ops_.offset_shifts;
  }
  return delta;
}

bool PrefixState::has_zero_in(std::size_t a, std::size_t b) const {
  if (a < 1 || b > size() || a > b)
    throw std::invalid_argument("has_zero_in requires 1 <= a <= b <= N (got [" +
                                std::to_string(a) + ", " + std::to_string(b) + "])");
  const std::size_t ba = block_of(a);
  const std::size_t bb = block_of(b);
  auto scan = [&](std::size_t from, std::size_t to) {
    const LatticePoint target = -blocks_[block_of(from)].offset;
    for (std::size_t n = from; n <= to; ++n)
      if (local_[n - 1] == target) return true;
    return false;
  };
  if (ba == bb) {
    const Block& blk = blocks_[ba];
    if (a == blk.begin && b + 1 == blk.end) return blk.has_zero;
    return blk.has_zero && scan(a, b);
  }
  const Block& first = blocks_[ba];
  if (first.has_zero && (a == first.begin ? true : scan(a, first.end - 1))) return true;
  for (std::size_t j = ba + 1; j < bb; ++j)
    if (blocks_[j].has_zero) return true;
  const Block& last = blocks_[bb];
  return last.has_zero && (b + 1 == last.end ? true : scan(last.begin, b));
}

std::size_t PrefixState::recount_zero_blocks() const {
  std::size_t count = 0;
  LatticePoint pos{};
  for (const auto& blk : blocks_) {
    bool zero = false;
    for (std::size_t n = blk.begin; n < blk.end; ++n) {
      pos += step_vector(steps_[n - 1]);
      zero = zero || pos.is_origin();
    }
    count += zero ? 1 : 0;
  }
  return count;
}

}  // namespace dynwalk
