#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

namespace bcnm {

/// Binary max-heap over integer ids in [0, capacity), each carrying a key.
/// Supports re-keying and erasure by id in O(log n). `Less(a, b)` is true
/// when key a ranks below key b.
template <class Key, class Less = std::less<Key>>
class IndexedMaxHeap {
 public:
  static constexpr std::uint32_t npos = std::numeric_limits<std::uint32_t>::max();

  explicit IndexedMaxHeap(std::uint32_t capacity = 0, Less less = Less{})
      : pos_(capacity, npos), keys_(capacity), less_(std::move(less)) {}

  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }
  bool contains(std::uint32_t id) const { return pos_[id] != npos; }
  std::uint32_t top() const { return heap_.front(); }
  const Key& key(std::uint32_t id) const { return keys_[id]; }
  const std::vector<std::uint32_t>& items() const { return heap_; }

  /// Inserts id, or re-keys it if already present.
  void set(std::uint32_t id, Key key) {
    keys_[id] = std::move(key);
    if (pos_[id] == npos) {
      pos_[id] = static_cast<std::uint32_t>(heap_.size());
      heap_.push_back(id);
      sift_up(pos_[id]);
    } else {
      sift_up(pos_[id]);
      sift_down(pos_[id]);
    }
  }

  void erase(std::uint32_t id) {
    std::uint32_t i = pos_[id];
    if (i == npos) return;
    std::uint32_t last = heap_.back();
    heap_.pop_back();
    pos_[id] = npos;
    if (last == id) return;
    place(i, last);
    sift_up(i);
    sift_down(pos_[last]);
  }

  /// True if the heap order and position index are consistent.
  bool valid() const {
    for (std::size_t i = 1; i < heap_.size(); ++i)
      if (less_(keys_[heap_[(i - 1) / 2]], keys_[heap_[i]])) return false;
    for (std::size_t i = 0; i < heap_.size(); ++i)
      if (pos_[heap_[i]] != i) return false;
    return true;
  }

 private:
  bool below(std::uint32_t a, std::uint32_t b) const { return less_(keys_[a], keys_[b]); }

  void place(std::uint32_t i, std::uint32_t id) {
    heap_[i] = id;
    pos_[id] = i;
  }

  void sift_up(std::uint32_t i) {
    std::uint32_t id = heap_[i];
    while (i > 0) {
      std::uint32_t parent = (i - 1) / 2;
      if (!below(heap_[parent], id)) break;
      place(i, heap_[parent]);
      i = parent;
    }
    place(i, id);
  }

  void sift_down(std::uint32_t i) {
    std::uint32_t id = heap_[i];
    const auto n = static_cast<std::uint32_t>(heap_.size());
    for (;;) {
      std::uint32_t child = 2 * i + 1;
      if (child >= n) break;
      if (child + 1 < n && below(heap_[child], heap_[child + 1])) ++child;
      if (!below(id, heap_[child])) break;
      place(i, heap_[child]);
      i = child;
    }
    place(i, id);
  }

  std::vector<std::uint32_t> heap_;
  std::vector<std::uint32_t> pos_;
  std::vector<Key> keys_;
  Less less_;
};

}  // namespace bcnm
