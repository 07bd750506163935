#pragma once

// Open-addressing set of 32-bit ids whose keys live elsewhere (in a flat
// vector owned by the caller). Hashing and equality are supplied per call, so
// the index stores nothing but ids.

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace maltsev::detail {

  inline std::uint64_t mix64(std::uint64_t h) noexcept {
    h ^= h >> 33;
    h *= 0xff51afd7ed558ccdULL;
    h ^= h >> 33;
    h *= 0xc4ceb9fe1a85ec53ULL;
    h ^= h >> 33;
    return h;
  }

  inline std::uint64_t hash_span(std::span<std::uint32_t const> xs) noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ xs.size();
    for (auto x : xs) {
      h = mix64(h ^ x) + 0x632be59bd9b4e019ULL;
    }
    return h;
  }

  class FlatIndex {
   public:
    static constexpr std::uint32_t npos = std::numeric_limits<std::uint32_t>::max();

    FlatIndex() : _slots(16, npos), _hashes(16, 0) {}

    // Returns the stored id equal to the probe, or npos.
    template <typename Eq>
    [[nodiscard]] std::uint32_t find(std::uint64_t hash, Eq&& equal) const {
      auto mask = _slots.size() - 1;
      for (auto i = hash & mask;; i = (i + 1) & mask) {
        auto id = _slots[i];
        if (id == npos) {
          return npos;
        }
        if (_hashes[i] == hash && equal(id)) {
          return id;
        }
      }
    }

    // Inserts `id` for a key known to be absent.
    void insert(std::uint64_t hash, std::uint32_t id) {
      if (2 * (_size + 1) > _slots.size()) {
        grow();
      }
      place(hash, id);
      ++_size;
    }

    [[nodiscard]] std::size_t size() const noexcept {
      return _size;
    }

    void reserve(std::size_t n) {
      while (2 * n > _slots.size()) {
        grow();
      }
    }

   private:
    void place(std::uint64_t hash, std::uint32_t id) {
      auto mask = _slots.size() - 1;
      auto i    = hash & mask;
      while (_slots[i] != npos) {
        i = (i + 1) & mask;
      }
      _slots[i]  = id;
      _hashes[i] = hash;
    }

    void grow() {
      std::vector<std::uint32_t> slots(_slots.size() * 2, npos);
      std::vector<std::uint64_t> hashes(_slots.size() * 2, 0);
      slots.swap(_slots);
      hashes.swap(_hashes);
      for (std::size_t i = 0; i < slots.size(); ++i) {
        if (slots[i] != npos) {
          place(hashes[i], slots[i]);
        }
      }
    }

    std::vector<std::uint32_t> _slots;
    std::vector<std::uint64_t> _hashes;
    std::size_t                _size = 0;
  };

}  // namespace maltsev::detail
