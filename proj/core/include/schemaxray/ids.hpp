#pragma once

#include <cstdint>
#include <string>

namespace sx {

// Identifier of a node in a code model. Dense local ids are assigned in
// pre-order per file; the file index occupies the high 32 bits so that ids
// stay unique across a multi-file model.
struct NodeId {
  std::uint64_t value = kInvalid;

  static constexpr std::uint64_t kInvalid = ~std::uint64_t{0};

  NodeId() = default;
  constexpr explicit NodeId(std::uint64_t v) : value(v) {}
  constexpr NodeId(std::uint32_t file, std::uint32_t local)
      : value((std::uint64_t{file} << 32) | local) {}

  constexpr bool valid() const { return value != kInvalid; }
  constexpr std::uint32_t file() const { return static_cast<std::uint32_t>(value >> 32); }
  constexpr std::uint32_t local() const { return static_cast<std::uint32_t>(value & 0xffffffffu); }

  friend constexpr bool operator==(NodeId a, NodeId b) { return a.value == b.value; }
  friend constexpr bool operator!=(NodeId a, NodeId b) { return a.value != b.value; }
  friend constexpr bool operator<(NodeId a, NodeId b) { return a.value < b.value; }
};

inline std::string to_string(NodeId id) {
  if (!id.valid()) return "-";
  return std::to_string(id.file()) + ":" + std::to_string(id.local());
}

}  // namespace sx
