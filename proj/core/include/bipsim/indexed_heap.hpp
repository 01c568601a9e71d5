#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

namespace bipsim {

// Binary min-heap with a key -> slot index, so entries addressed by key can
// be repositioned in O(log n) after their priority changes. `KeyOf` extracts
// the key from an entry, `Less` is a strict weak order on entries.
template <typename Entry, typename Key, typename KeyOf, typename Less,
          typename KeyHash = std::hash<Key>>
class IndexedMinHeap {
 public:
  IndexedMinHeap() = default;
  explicit IndexedMinHeap(std::size_t reserve) {
    slots_.reserve(reserve);
    index_.reserve(reserve);
  }

  std::size_t size() const noexcept { return slots_.size(); }
  bool empty() const noexcept { return slots_.empty(); }
  bool contains(const Key& k) const { return index_.find(k) != index_.end(); }

  const Entry& top() const {
    if (slots_.empty()) throw std::out_of_range("IndexedMinHeap: empty");
    return slots_.front();
  }

  const Entry& at(const Key& k) const { return slots_[slot_of(k)]; }

  // Heap-ordered view; slot 0 is the minimum.
  std::span<const Entry> entries() const noexcept { return {slots_.data(), slots_.size()}; }

  void push(Entry e) {
    const Key k = key_of_(e);
    if (contains(k)) throw std::invalid_argument("IndexedMinHeap: duplicate key");
    slots_.push_back(std::move(e));
    index_[k] = slots_.size() - 1;
    sift_up(slots_.size() - 1);
  }

  Entry pop_min() {
    if (slots_.empty()) throw std::out_of_range("IndexedMinHeap: empty");
    return remove_at(0);
  }

  Entry erase(const Key& k) { return remove_at(slot_of(k)); }

  // Applies `mutate` to the entry for `k`, then restores heap order. The
  // mutation must not change the entry's key.
  template <typename Fn>
  void update(const Key& k, Fn&& mutate) {
    const std::size_t i = slot_of(k);
    mutate(slots_[i]);
    if (!sift_down(i)) sift_up(i);
  }

 private:
  std::size_t slot_of(const Key& k) const {
    auto it = index_.find(k);
    if (it == index_.end()) throw std::out_of_range("IndexedMinHeap: unknown key");
    return it->second;
  }

  Entry remove_at(std::size_t i) {
    Entry out = std::move(slots_[i]);
    index_.erase(key_of_(out));
    const std::size_t last = slots_.size() - 1;
    if (i != last) {
      slots_[i] = std::move(slots_[last]);
      index_[key_of_(slots_[i])] = i;
    }
    slots_.pop_back();
    if (i < slots_.size()) {
      if (!sift_down(i)) sift_up(i);
    }
    return out;
  }

  void place(std::size_t i, Entry e) {
    index_[key_of_(e)] = i;
    slots_[i] = std::move(e);
  }

  bool sift_up(std::size_t i) {
    bool moved = false;
    Entry e = std::move(slots_[i]);
    while (i > 0) {
      const std::size_t parent = (i - 1) / 2;
      if (!less_(e, slots_[parent])) break;
      place(i, std::move(slots_[parent]));
      i = parent;
      moved = true;
    }
    place(i, std::move(e));
    return moved;
  }

  bool sift_down(std::size_t i) {
    bool moved = false;
    Entry e = std::move(slots_[i]);
    const std::size_t n = slots_.size();
    while (true) {
      std::size_t child = 2 * i + 1;
      if (child >= n) break;
      if (child + 1 < n && less_(slots_[child + 1], slots_[child])) ++child;
      if (!less_(slots_[child], e)) break;
      place(i, std::move(slots_[child]));
      i = child;
      moved = true;
    }
    place(i, std::move(e));
    return moved;
  }

  std::vector<Entry> slots_;
  std::unordered_map<Key, std::size_t, KeyHash> index_;
  KeyOf key_of_{};
  Less less_{};
};

}  // namespace bipsim
