#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace querygen {

// 64-bit FNV-1a. Used for every persisted identifier (subschema ids,
// query ids, prompt hashes) so ids are stable across platforms.
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

// Lower-case, zero-padded, 16 hex digits.
std::string hex64(std::uint64_t value);

inline std::string stable_hash(std::string_view bytes) {
  return hex64(fnv1a64(bytes));
}

// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t value) noexcept;

// Derives an independent stream seed from a parent seed, a label and an
// index: mix64(parent ^ mix64(fnv1a64(label) + index)).
std::uint64_t derive_seed(std::uint64_t parent, std::string_view label,
                          std::uint64_t index = 0) noexcept;

}  // namespace querygen
