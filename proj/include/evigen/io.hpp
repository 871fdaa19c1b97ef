#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "evigen/error.hpp"

namespace evigen {

enum class IoErrorKind { Read, Write };
std::string_view to_string(IoErrorKind kind);
using IoError = Error<IoErrorKind>;

std::string read_file(const std::filesystem::path& path);

/// Writes to `<path>.tmp.<pid>` in the same directory, flushes, then renames
/// over `path`. Readers see either the old or the new bytes, never a mix.
///
/// Fault hook for tests: with EVIGEN_FAULT=stall_before_rename the call
/// blocks after the temp file is complete; with abort_before_rename it aborts.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);

/// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view bytes);

}  // namespace evigen
