#pragma once

// Content hashing, atomic file writes, and the on-disk report cache.
// Cached report bytes are returned verbatim, so a cache hit reproduces the
// original report byte for byte.

#include <filesystem>
#include <optional>
#include <string>

namespace cctlab {

// Lowercase hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& bytes);

// CCTLAB_CACHE_DIR, else $HOME/.cache/cctlab, else ./.cctlab-cache.
std::filesystem::path cache_dir();

// Writes via a sibling temp file plus rename; readers never see a partial
// file. Throws std::runtime_error when the file cannot be written.
void atomic_write_file(const std::filesystem::path& path, const std::string& bytes);

// Cached bytes for key, if present.
std::optional<std::string> cache_get(const std::string& key);

// Stores bytes under key. Best effort: a cache that cannot be written is
// treated as absent, never as a command failure.
void cache_put(const std::string& key, const std::string& bytes);

}  // namespace cctlab
