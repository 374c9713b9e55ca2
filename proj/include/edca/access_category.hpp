// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace edca {

/// The four EDCA access categories, declared in descending priority.
enum class AcIndex : std::size_t { vo = 0, vi = 1, be = 2, bk = 3 };

inline constexpr std::size_t kNumAcs = 4;
inline constexpr std::array<AcIndex, kNumAcs> kAllAcs{AcIndex::vo, AcIndex::vi, AcIndex::be,
                                                       AcIndex::bk};

constexpr std::size_t index_of(AcIndex ac) noexcept { return static_cast<std::size_t>(ac); }

/// Smaller rank means higher priority (vo has rank 0).
constexpr std::size_t priority_rank(AcIndex ac) noexcept { return index_of(ac); }

constexpr bool higher_priority(AcIndex a, AcIndex b) noexcept {
  return priority_rank(a) < priority_rank(b);
}

constexpr std::string_view to_string(AcIndex ac) noexcept {
  switch (ac) {
    case AcIndex::vo: return "vo";
    case AcIndex::vi: return "vi";
    case AcIndex::be: return "be";
    case AcIndex::bk: return "bk";
  }
  return "?";
}

inline std::optional<AcIndex> parse_ac(std::string_view name) noexcept {
  for (auto ac : kAllAcs)
    if (to_string(ac) == name) return ac;
  return std::nullopt;
}

/// Fixed-size mapping AcIndex -> T.
template <typename T>
struct PerAc {
  std::array<T, kNumAcs> values{};

  constexpr T& operator[](AcIndex ac) noexcept { return values[index_of(ac)]; }
  constexpr const T& operator[](AcIndex ac) const noexcept { return values[index_of(ac)]; }

  constexpr auto begin() noexcept { return values.begin(); }
  constexpr auto end() noexcept { return values.end(); }
  constexpr auto begin() const noexcept { return values.begin(); }
  constexpr auto end() const noexcept { return values.end(); }

  friend constexpr bool operator==(const PerAc&, const PerAc&) = default;

  static constexpr PerAc filled(const T& v) {
    PerAc out;
    out.values.fill(v);
    return out;
  }
};

}  // namespace edca
