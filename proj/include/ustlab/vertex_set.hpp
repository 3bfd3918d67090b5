#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace ustlab {

// Fixed-universe vertex subset backed by a bitmap. Cardinality is cached.
class VertexSet {
 public:
  VertexSet() = default;
  explicit VertexSet(int universe)
      : universe_(universe), words_((universe + 63) / 64, 0) {
    if (universe < 0) throw std::invalid_argument("VertexSet: negative universe");
  }

  static VertexSet of(int universe, std::initializer_list<int> vs) {
    VertexSet s(universe);
    for (int v : vs) s.add(v);
    return s;
  }

  static VertexSet full(int universe) {
    VertexSet s(universe);
    for (int v = 0; v < universe; ++v) s.add(v);
    return s;
  }

  int universe() const { return universe_; }
  int size() const { return count_; }
  bool empty() const { return count_ == 0; }

  bool contains(int v) const {
    return (words_[static_cast<std::size_t>(v) >> 6] >> (v & 63)) & 1u;
  }

  void add(int v) {
    check(v);
    std::uint64_t& w = words_[static_cast<std::size_t>(v) >> 6];
    const std::uint64_t bit = 1ULL << (v & 63);
    if (!(w & bit)) {
      w |= bit;
      ++count_;
    }
  }

  void remove(int v) {
    check(v);
    std::uint64_t& w = words_[static_cast<std::size_t>(v) >> 6];
    const std::uint64_t bit = 1ULL << (v & 63);
    if (w & bit) {
      w &= ~bit;
      --count_;
    }
  }

  VertexSet complement() const {
    VertexSet s(universe_);
    for (std::size_t i = 0; i < words_.size(); ++i) s.words_[i] = ~words_[i];
    if (universe_ & 63) s.words_.back() &= (1ULL << (universe_ & 63)) - 1;
    s.count_ = universe_ - count_;
    return s;
  }

  bool intersects(const VertexSet& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & o.words_[i]) return true;
    return false;
  }

  // Ascending member list.
  std::vector<int> members() const {
    std::vector<int> out;
    out.reserve(count_);
    for (std::size_t i = 0; i < words_.size(); ++i) {
      std::uint64_t w = words_[i];
      while (w) {
        out.push_back(static_cast<int>(i * 64 + std::countr_zero(w)));
        w &= w - 1;
      }
    }
    return out;
  }

  bool operator==(const VertexSet& o) const {
    return universe_ == o.universe_ && words_ == o.words_;
  }

  const std::vector<std::uint64_t>& words() const { return words_; }

 private:
  void check(int v) const {
    if (v < 0 || v >= universe_) throw std::out_of_range("VertexSet: vertex out of range");
  }

  int universe_ = 0;
  int count_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace ustlab
