#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "igo/baseline_l2.hpp"
#include "igo/igo_pca.hpp"
#include "igo/orientation.hpp"

namespace igo::io {

namespace fs = std::filesystem;

/// Reads an 8- or 16-bit grayscale PGM (P2 or P5) or grayscale PNG.
/// Intensities are divided by the maximum sample value (PGM maxval,
/// 2^depth - 1 for PNG). Raises UnsupportedFormatError, TruncatedFileError,
/// ZeroDimensionError or IoError, each naming the file.
GrayImage load_image(const fs::path& path);

/// Writes a binary PGM. Intensities are clamped to [0, 1] and quantized to
/// 8 or 16 bits.
void save_pgm(const GrayImage& image, const fs::path& path, int bits = 16);

/// Rounds intensities exactly as save_pgm does, so in-memory data can match
/// what load_image would read back.
GrayImage quantize(const GrayImage& image, int bits = 16);

// Model files
// -----------
//
//   offset   size  field
//   0        8     magic "IGOPCAMD"
//   8        4     format version, uint32 little-endian (kModelFormatVersion)
//   12       4     metadata length M, uint32 little-endian
//   16       M     metadata, UTF-8 JSON object (kind, dims, k, filter, ...)
//   16+M     8     payload length L in bytes, uint64 little-endian
//   24+M     L     payload, IEEE-754 binary64 little-endian
//
// IGO payload: k eigenvalues, then the p x k basis column-major with each
// entry stored as (real, imaginary); for centred models the p complex mean
// entries follow. L = 8 (k + 2pk) for an uncentred model.
// L2 payload: k eigenvalues, the p x k real basis column-major, then the
// p-entry mean. L = 8 (k + pk + p).

inline constexpr std::uint32_t kModelFormatVersion = 1;
inline constexpr std::uint32_t kOrientationFormatVersion = 1;

using AnyModel = std::variant<IgoModel, L2Model>;

void save_model(const IgoModel& model, const fs::path& path);
void save_model(const L2Model& model, const fs::path& path);

/// Raises FormatError (bad magic or metadata), VersionError,
/// LengthMismatchError or NonFiniteError.
AnyModel load_model(const fs::path& path);
IgoModel load_igo_model(const fs::path& path);
L2Model load_l2_model(const fs::path& path);

// Orientation files share the model header layout with magic "IGOORIEN";
// the payload is p angles (binary64) followed by a ceil(p / 8)-byte validity
// bitmap, pixel k in bit (k % 8) of byte k / 8.
void save_orientation(const OrientationImage& image, const fs::path& path);
OrientationImage load_orientation(const fs::path& path);

/// Writes `bytes` to a sibling temporary file and renames it over `path`.
void write_file_atomic(const fs::path& path, std::span<const std::uint8_t> bytes);
void write_file_atomic(const fs::path& path, const std::string& text);

/// Shortest round-trip decimal form, '.' separator, locale independent.
std::string format_double(double value);

/// Accumulates a CSV document: a version comment line, a header row, then rows.
class CsvDocument {
public:
    CsvDocument(const std::string& schema, int version, std::vector<std::string> columns);

    void add_row(const std::vector<std::string>& cells);
    std::size_t rows() const noexcept { return rows_; }
    const std::string& text() const noexcept { return text_; }
    void save(const fs::path& path) const { write_file_atomic(path, text_); }

private:
    std::size_t columns_;
    std::size_t rows_ = 0;
    std::string text_;
};

}  // namespace igo::io
