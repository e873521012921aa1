#include "simax/bucket_queue.hpp"

#include <string>

namespace simax {

BucketQueue::BucketQueue(std::size_t capacity, std::size_t key_range)
    : head_(key_range, kAbsent), next_(capacity, kAbsent), prev_(capacity, kAbsent), key_(capacity, kAbsent) {
  if (key_range == 0) throw std::logic_error("bucket queue needs at least one key");
}

std::size_t BucketQueue::key_of(std::size_t item) const {
  if (!contains(item)) throw std::logic_error("item " + std::to_string(item) + " is not in the queue");
  return key_[item];
}

void BucketQueue::link(std::size_t item, std::size_t key) {
  key_[item] = key;
  prev_[item] = kAbsent;
  next_[item] = head_[key];
  if (head_[key] != kAbsent) prev_[head_[key]] = item;
  head_[key] = item;
}

void BucketQueue::unlink(std::size_t item) {
  const std::size_t key = key_[item];
  if (prev_[item] != kAbsent) {
    next_[prev_[item]] = next_[item];
  } else {
    head_[key] = next_[item];
  }
  if (next_[item] != kAbsent) prev_[next_[item]] = prev_[item];
  key_[item] = kAbsent;
}

void BucketQueue::insert(std::size_t item, std::size_t key) {
  if (item >= key_.size()) throw std::logic_error("item " + std::to_string(item) + " exceeds queue capacity");
  if (key >= head_.size()) throw std::logic_error("key " + std::to_string(key) + " out of range");
  if (contains(item)) throw std::logic_error("item " + std::to_string(item) + " inserted twice");
  link(item, key);
  ++size_;
  if (!has_cursor_ || key > cursor_) {
    cursor_ = key;
    has_cursor_ = true;
  }
}

void BucketQueue::decrease_key(std::size_t item, std::size_t new_key) {
  const std::size_t old = key_of(item);
  if (new_key >= old) {
    throw std::logic_error("decrease_key on item " + std::to_string(item) + " from " + std::to_string(old) +
                           " to " + std::to_string(new_key) + " does not decrease");
  }
  unlink(item);
  link(item, new_key);
}

void BucketQueue::erase(std::size_t item) {
  key_of(item);
  unlink(item);
  --size_;
}

std::optional<BucketQueue::Entry> BucketQueue::find_max() {
  if (size_ == 0) return std::nullopt;
  while (head_[cursor_] == kAbsent) {
    --cursor_;
    ++cursor_moves_;
  }
  return Entry{head_[cursor_], cursor_};
}

}  // namespace simax
