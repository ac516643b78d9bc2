#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "lelab/grid.hpp"

namespace lelab {

/// CRC32 (zlib polynomial) of a byte range.
std::uint32_t crc32_bytes(const void* data, std::size_t len);
/// CRC32 of a whole file.
std::uint32_t crc32_file(const std::filesystem::path& path);

/// Writes `<stem>.f64` (little-endian doubles over the full n x n lattice, row-major)
/// and `<stem>.json` (n, h, shape, k, params, checksum). Returns the .f64 path.
std::filesystem::path write_field(const std::filesystem::path& stem, const ScalarField& f,
                                  const ProblemParams& p);

struct LoadedField {
    ScalarField field;
    ProblemParams params;
};

/// Reads a dump written by write_field; rejects checksum mismatches.
LoadedField read_field(const std::filesystem::path& stem);

}  // namespace lelab
