#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace gravplan {

/// Dense bit vector over ground atoms.
class AtomSet {
 public:
  AtomSet() = default;
  explicit AtomSet(std::size_t n) : size_(n), words_((n + 63) / 64, 0) {}

  bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i, bool v = true) {
    std::uint64_t m = std::uint64_t{1} << (i & 63);
    if (v)
      words_[i >> 6] |= m;
    else
      words_[i >> 6] &= ~m;
  }
  std::size_t size() const { return size_; }
  const std::vector<std::uint64_t>& words() const { return words_; }
  std::vector<std::uint64_t>& words() { return words_; }
  bool operator==(const AtomSet&) const = default;

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Time, numeric fluents and boolean atoms, indexed by the grounded task.
struct HybridState {
  double time = 0.0;
  std::vector<double> numeric;
  AtomSet atoms;

  bool operator==(const HybridState&) const = default;
};

}  // namespace gravplan
