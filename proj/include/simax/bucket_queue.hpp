#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace simax {

// Max-priority structure for a monotone workload: integer keys in [0, key_range),
// keys only decrease, and the maximum never grows once searching starts. One
// intrusive doubly-linked list per key plus a cursor on the largest possibly
// non-empty bucket. Every operation is O(1) apart from cursor movement, which
// totals at most key_range over the life of the queue.
//
// Within a bucket the most recently inserted element is returned first.
class BucketQueue {
 public:
  struct Entry {
    std::size_t item;
    std::size_t key;
    friend bool operator==(const Entry&, const Entry&) = default;
  };

  // Items are identified by 0..capacity-1.
  BucketQueue(std::size_t capacity, std::size_t key_range);

  // Throws std::logic_error if item is already present or out of range, or if
  // key is out of range.
  void insert(std::size_t item, std::size_t key);
  // Throws std::logic_error unless item is present and new_key < its key.
  void decrease_key(std::size_t item, std::size_t new_key);
  // Throws std::logic_error if item is absent.
  void erase(std::size_t item);

  std::optional<Entry> find_max();

  bool contains(std::size_t item) const { return item < key_.size() && key_[item] != kAbsent; }
  std::size_t key_of(std::size_t item) const;
  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }
  std::size_t key_range() const noexcept { return head_.size(); }

  // Buckets stepped over by the cursor so far.
  std::uint64_t cursor_moves() const noexcept { return cursor_moves_; }

 private:
  static constexpr std::size_t kAbsent = static_cast<std::size_t>(-1);

  void link(std::size_t item, std::size_t key);
  void unlink(std::size_t item);

  std::vector<std::size_t> head_;  // per key
  std::vector<std::size_t> next_, prev_, key_;  // per item
  std::size_t size_ = 0;
  std::size_t cursor_ = 0;
  bool has_cursor_ = false;
  std::uint64_t cursor_moves_ = 0;
};

}  // namespace simax
