#include "igo/io.hpp"

#include <png.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cctype>
#include <cstring>
#include <fstream>
#include <iterator>

#include "json.hpp"

namespace igo::io {
namespace {

using json = nlohmann::json;

constexpr std::array<char, 8> kModelMagic = {'I', 'G', 'O', 'P', 'C', 'A', 'M', 'D'};
constexpr std::array<char, 8> kOrientationMagic = {'I', 'G', 'O', 'O', 'R', 'I', 'E', 'N'};
constexpr std::array<std::uint8_t, 8> kPngSignature = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};

std::string quoted(const fs::path& path) { return "'" + path.string() + "'"; }

std::vector<std::uint8_t> read_all(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + quoted(path));
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("error reading " + quoted(path));
    return bytes;
}

// --- little-endian encoding -------------------------------------------------

class ByteWriter {
public:
    void put_u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void put_u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void put_f64(double v) { put_u64(std::bit_cast<std::uint64_t>(v)); }
    void put_bytes(const void* data, std::size_t n) {
        const auto* p = static_cast<const std::uint8_t*>(data);
        bytes_.insert(bytes_.end(), p, p + n);
    }
    std::vector<std::uint8_t>& bytes() { return bytes_; }

private:
    std::vector<std::uint8_t> bytes_;
};

std::uint32_t get_u32(const std::uint8_t* p) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
    return v;
}

std::uint64_t get_u64(const std::uint8_t* p) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    return v;
}

double get_f64(const std::uint8_t* p) { return std::bit_cast<double>(get_u64(p)); }

// --- shared container --------------------------------------------------------

std::vector<std::uint8_t> encode_container(const std::array<char, 8>& magic,
                                           std::uint32_t version, const json& metadata,
                                           const std::vector<std::uint8_t>& payload) {
    const std::string meta = metadata.dump();
    ByteWriter w;
    w.put_bytes(magic.data(), magic.size());
    w.put_u32(version);
    w.put_u32(static_cast<std::uint32_t>(meta.size()));
    w.put_bytes(meta.data(), meta.size());
    w.put_u64(payload.size());
    w.put_bytes(payload.data(), payload.size());
    return std::move(w.bytes());
}

struct Container {
    json metadata;
    std::vector<std::uint8_t> payload;
};

Container decode_container(const fs::path& path, const std::array<char, 8>& magic,
                           std::uint32_t version) {
    const auto bytes = read_all(path);
    if (bytes.size() < 16 || !std::equal(magic.begin(), magic.end(), bytes.begin())) {
        throw FormatError(quoted(path) + " does not start with the expected magic '" +
                          std::string(magic.data(), magic.size()) + "'");
    }
    const auto found = get_u32(bytes.data() + 8);
    if (found != version) {
        throw VersionError(quoted(path) + " has format version " + std::to_string(found) +
                           ", expected " + std::to_string(version));
    }
    const std::uint64_t meta_len = get_u32(bytes.data() + 12);
    if (16 + meta_len + 8 > bytes.size()) {
        throw FormatError(quoted(path) + " is too short for its metadata block");
    }
    Container c;
    try {
        c.metadata = json::parse(bytes.begin() + 16,
                                 bytes.begin() + 16 + static_cast<std::ptrdiff_t>(meta_len));
    } catch (const json::exception& e) {
        throw FormatError(quoted(path) + " has malformed metadata: " + e.what());
    }
    if (!c.metadata.is_object()) throw FormatError(quoted(path) + " metadata is not an object");
    const std::uint64_t declared = get_u64(bytes.data() + 16 + meta_len);
    const std::uint64_t available = bytes.size() - (24 + meta_len);
    if (declared != available) {
        throw LengthMismatchError(quoted(path) + " declares a " + std::to_string(declared) +
                                  "-byte payload but holds " + std::to_string(available) +
                                  " bytes");
    }
    c.payload.assign(bytes.begin() + static_cast<std::ptrdiff_t>(24 + meta_len), bytes.end());
    return c;
}

template <typename T>
T meta_field(const json& meta, const char* key, const fs::path& path) {
    try {
        return meta.at(key).get<T>();
    } catch (const json::exception&) {
        throw FormatError(quoted(path) + " metadata lacks a valid '" + key + "' field");
    }
}

void require_payload(const Container& c, std::uint64_t doubles, std::uint64_t extra,
                     const fs::path& path) {
    const std::uint64_t expected = 8 * doubles + extra;
    if (c.payload.size() != expected) {
        throw LengthMismatchError(quoted(path) + " payload has " +
                                  std::to_string(c.payload.size()) + " bytes, metadata implies " +
                                  std::to_string(expected));
    }
}

class DoubleReader {
public:
    DoubleReader(const std::vector<std::uint8_t>& payload, const fs::path& path)
        : payload_(payload), path_(path) {}

    double next() {
        const double v = get_f64(payload_.data() + pos_);
        pos_ += 8;
        if (!std::isfinite(v)) throw NonFiniteError(quoted(path_) + " contains a non-finite value");
        return v;
    }
    std::size_t position() const { return pos_; }

private:
    const std::vector<std::uint8_t>& payload_;
    const fs::path& path_;
    std::size_t pos_ = 0;
};

void require_finite(double v, const fs::path& path) {
    if (!std::isfinite(v)) {
        throw NonFiniteError("refusing to write a non-finite value to " + quoted(path));
    }
}

json filter_json(const GradientFilterSpec& f) {
    return {{"kind", to_string(f.kind)}, {"sigma", f.sigma}};
}

// --- PGM / PNG ---------------------------------------------------------------

class HeaderScanner {
public:
    HeaderScanner(const std::vector<std::uint8_t>& bytes, const fs::path& path)
        : bytes_(bytes), path_(path) {}

    // Next whitespace-delimited token, skipping '#' comments.
    std::string token() {
        for (;;) {
            while (pos_ < bytes_.size() && std::isspace(bytes_[pos_])) ++pos_;
            if (pos_ < bytes_.size() && bytes_[pos_] == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
                continue;
            }
            break;
        }
        const auto start = pos_;
        while (pos_ < bytes_.size() && !std::isspace(bytes_[pos_])) ++pos_;
        if (start == pos_) throw TruncatedFileError(quoted(path_) + " ends inside the header");
        return std::string(bytes_.begin() + static_cast<std::ptrdiff_t>(start),
                           bytes_.begin() + static_cast<std::ptrdiff_t>(pos_));
    }

    unsigned long number() {
        const auto t = token();
        unsigned long v = 0;
        const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (ec != std::errc{} || ptr != t.data() + t.size()) {
            throw UnsupportedFormatError(quoted(path_) + " has a malformed header field '" + t +
                                         "'");
        }
        return v;
    }

    std::size_t& position() { return pos_; }

private:
    const std::vector<std::uint8_t>& bytes_;
    const fs::path& path_;
    std::size_t pos_ = 0;
};

GrayImage make_image(std::size_t h, std::size_t w, std::vector<double> pixels,
                     const fs::path& path) {
    try {
        return GrayImage(h, w, std::move(pixels));
    } catch (const DimensionError& e) {
        throw DimensionError(quoted(path) + ": " + e.what());
    }
}

GrayImage load_pgm(const std::vector<std::uint8_t>& bytes, const fs::path& path) {
    const bool ascii = bytes[1] == '2';
    HeaderScanner scan(bytes, path);
    scan.position() = 2;
    const auto width = scan.number();
    const auto height = scan.number();
    const auto maxval = scan.number();
    if (width == 0 || height == 0) {
        throw ZeroDimensionError(quoted(path) + " has zero width or height");
    }
    if (maxval == 0 || maxval > 65535) {
        throw UnsupportedFormatError(quoted(path) + " has unsupported maxval " +
                                     std::to_string(maxval));
    }
    const std::size_t count = width * height;
    const double scale = static_cast<double>(maxval);
    std::vector<double> pixels(count);

    if (ascii) {
        for (std::size_t k = 0; k < count; ++k) {
            unsigned long v = 0;
            try {
                v = scan.number();
            } catch (const TruncatedFileError&) {
                throw TruncatedFileError(quoted(path) + " holds " + std::to_string(k) + " of " +
                                         std::to_string(count) + " samples");
            }
            if (v > maxval) throw FormatError(quoted(path) + " has a sample above maxval");
            pixels[k] = static_cast<double>(v) / scale;
        }
    } else {
        std::size_t pos = scan.position() + 1;  // single whitespace after maxval
        const std::size_t width_bytes = maxval < 256 ? 1 : 2;
        if (pos > bytes.size() || bytes.size() - pos < count * width_bytes) {
            throw TruncatedFileError(quoted(path) + " is missing raster data");
        }
        for (std::size_t k = 0; k < count; ++k) {
            unsigned v = bytes[pos];
            if (width_bytes == 2) v = (v << 8) | bytes[pos + 1];
            pos += width_bytes;
            if (v > maxval) throw FormatError(quoted(path) + " has a sample above maxval");
            pixels[k] = static_cast<double>(v) / scale;
        }
    }
    return make_image(height, width, std::move(pixels), path);
}

struct PngRaster {
    png_uint_32 width = 0;
    png_uint_32 height = 0;
    int bit_depth = 0;
    int color_type = 0;
    std::vector<std::uint8_t> rows;
    std::size_t row_bytes = 0;
    char error[256] = {0};
};

struct PngSource {
    const std::vector<std::uint8_t>* bytes;
    std::size_t pos;
};

void png_read_from_memory(png_structp png, png_bytep out, png_size_t n) {
    auto* src = static_cast<PngSource*>(png_get_io_ptr(png));
    if (src->pos + n > src->bytes->size()) png_error(png, "unexpected end of data");
    std::memcpy(out, src->bytes->data() + src->pos, n);
    src->pos += n;
}

void png_record_error(png_structp png, png_const_charp message) {
    auto* raster = static_cast<PngRaster*>(png_get_error_ptr(png));
    std::snprintf(raster->error, sizeof(raster->error), "%s", message);
    png_longjmp(png, 1);
}

void png_ignore_warning(png_structp, png_const_charp) {}

// Returns false on a libpng error (message in raster.error). Unsupported
// colour types are reported with an empty raster.
bool decode_png(const std::vector<std::uint8_t>& bytes, PngRaster& raster) {
    PngSource source{&bytes, 0};
    png_structp png =
        png_create_read_struct(PNG_LIBPNG_VER_STRING, &raster, png_record_error, png_ignore_warning);
    if (png == nullptr) return false;
    png_infop info = png_create_info_struct(png);
    if (info == nullptr) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        return false;
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        return false;
    }
    png_set_read_fn(png, &source, png_read_from_memory);
    png_read_info(png, info);
    raster.width = png_get_image_width(png, info);
    raster.height = png_get_image_height(png, info);
    raster.bit_depth = png_get_bit_depth(png, info);
    raster.color_type = png_get_color_type(png, info);
    if (raster.color_type != PNG_COLOR_TYPE_GRAY || raster.width == 0 || raster.height == 0) {
        png_destroy_read_struct(&png, &info, nullptr);
        return true;
    }
    if (raster.bit_depth < 8) {
        png_set_expand_gray_1_2_4_to_8(png);
        raster.bit_depth = 8;
    }
    png_read_update_info(png, info);
    raster.row_bytes = png_get_rowbytes(png, info);
    raster.rows.resize(raster.row_bytes * raster.height);
    for (png_uint_32 r = 0; r < raster.height; ++r) {
        png_read_row(png, raster.rows.data() + r * raster.row_bytes, nullptr);
    }
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return true;
}

GrayImage load_png(const std::vector<std::uint8_t>& bytes, const fs::path& path) {
    PngRaster raster;
    if (!decode_png(bytes, raster)) {
        const std::string msg = raster.error;
        if (msg.find("end of data") != std::string::npos || msg.find("Read Error") != std::string::npos) {
            throw TruncatedFileError(quoted(path) + " is a truncated PNG");
        }
        throw UnsupportedFormatError(quoted(path) + " could not be decoded as PNG: " + msg);
    }
    if (raster.width == 0 || raster.height == 0) {
        throw ZeroDimensionError(quoted(path) + " has zero width or height");
    }
    if (raster.color_type != PNG_COLOR_TYPE_GRAY) {
        throw UnsupportedFormatError(quoted(path) + " is not a grayscale PNG");
    }
    const double maxval = raster.bit_depth == 16 ? 65535.0 : 255.0;
    std::vector<double> pixels(static_cast<std::size_t>(raster.width) * raster.height);
    for (std::size_t r = 0; r < raster.height; ++r) {
        const std::uint8_t* row = raster.rows.data() + r * raster.row_bytes;
        for (std::size_t c = 0; c < raster.width; ++c) {
            unsigned v = raster.bit_depth == 16 ? (row[2 * c] << 8) | row[2 * c + 1] : row[c];
            pixels[r * raster.width + c] = static_cast<double>(v) / maxval;
        }
    }
    return make_image(raster.height, raster.width, std::move(pixels), path);
}

}  // namespace

GrayImage load_image(const fs::path& path) {
    const auto bytes = read_all(path);
    if (bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == '2' || bytes[1] == '5')) {
        return load_pgm(bytes, path);
    }
    if (bytes.size() >= kPngSignature.size() &&
        std::equal(kPngSignature.begin(), kPngSignature.end(), bytes.begin())) {
        return load_png(bytes, path);
    }
    throw UnsupportedFormatError(quoted(path) + " is neither a grayscale PGM (P2/P5) nor a PNG");
}

GrayImage quantize(const GrayImage& image, int bits) {
    if (bits != 8 && bits != 16) throw DomainError("PGM bit depth must be 8 or 16");
    const double maxval = bits == 8 ? 255.0 : 65535.0;
    GrayImage out = image;
    for (auto& v : out.pixels) v = std::round(std::clamp(v, 0.0, 1.0) * maxval) / maxval;
    return out;
}

void save_pgm(const GrayImage& image, const fs::path& path, int bits) {
    if (bits != 8 && bits != 16) throw DomainError("PGM bit depth must be 8 or 16");
    const unsigned maxval = bits == 8 ? 255 : 65535;
    std::string header = "P5\n" + std::to_string(image.width) + " " +
                         std::to_string(image.height) + "\n" + std::to_string(maxval) + "\n";
    std::vector<std::uint8_t> bytes(header.begin(), header.end());
    for (double v : image.pixels) {
        const auto s = static_cast<unsigned>(std::round(std::clamp(v, 0.0, 1.0) * maxval));
        if (bits == 16) bytes.push_back(static_cast<std::uint8_t>(s >> 8));
        bytes.push_back(static_cast<std::uint8_t>(s & 0xff));
    }
    write_file_atomic(path, bytes);
}

void save_model(const IgoModel& model, const fs::path& path) {
    const auto& basis = model.subspace.basis;
    const std::size_t p = basis.rows();
    const std::size_t k = basis.cols();
    if (p != model.pixels()) {
        throw DimensionError("model basis has " + std::to_string(p) + " rows for a " +
                             std::to_string(model.height) + "x" + std::to_string(model.width) +
                             " raster");
    }
    json meta = {{"kind", "igo"},
                 {"height", model.height},
                 {"width", model.width},
                 {"components", k},
                 {"training_count", model.training_count},
                 {"centered", model.centered()},
                 {"filter", filter_json(model.filter)},
                 {"magnitude_floor", model.magnitude_floor}};
    ByteWriter payload;
    for (double l : model.subspace.eigenvalues) {
        require_finite(l, path);
        payload.put_f64(l);
    }
    for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t r = 0; r < p; ++r) {
            const Complex v = basis(r, j);
            require_finite(v.real(), path);
            require_finite(v.imag(), path);
            payload.put_f64(v.real());
            payload.put_f64(v.imag());
        }
    }
    for (const Complex& m : model.mean) {
        require_finite(m.real(), path);
        require_finite(m.imag(), path);
        payload.put_f64(m.real());
        payload.put_f64(m.imag());
    }
    write_file_atomic(path, encode_container(kModelMagic, kModelFormatVersion, meta,
                                             payload.bytes()));
}

void save_model(const L2Model& model, const fs::path& path) {
    const auto& basis = model.subspace.basis;
    const std::size_t p = basis.rows();
    const std::size_t k = basis.cols();
    json meta = {{"kind", "l2"},
                 {"height", model.height},
                 {"width", model.width},
                 {"components", k}};
    ByteWriter payload;
    auto put = [&](double v) {
        require_finite(v, path);
        payload.put_f64(v);
    };
    for (double l : model.subspace.eigenvalues) put(l);
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t r = 0; r < p; ++r) put(basis(r, j));
    for (double m : model.mean) put(m);
    write_file_atomic(path, encode_container(kModelMagic, kModelFormatVersion, meta,
                                             payload.bytes()));
}

AnyModel load_model(const fs::path& path) {
    const auto c = decode_container(path, kModelMagic, kModelFormatVersion);
    const auto kind = meta_field<std::string>(c.metadata, "kind", path);
    const auto height = meta_field<std::size_t>(c.metadata, "height", path);
    const auto width = meta_field<std::size_t>(c.metadata, "width", path);
    const auto k = meta_field<std::size_t>(c.metadata, "components", path);
    const std::size_t p = height * width;
    if (p == 0) throw FormatError(quoted(path) + " declares an empty raster");

    if (kind == "igo") {
        const bool centered = meta_field<bool>(c.metadata, "centered", path);
        require_payload(c, k + 2 * p * k + (centered ? 2 * p : 0), 0, path);
        IgoModel m;
        m.height = height;
        m.width = width;
        m.training_count = meta_field<std::size_t>(c.metadata, "training_count", path);
        m.magnitude_floor = meta_field<double>(c.metadata, "magnitude_floor", path);
        const auto filter = c.metadata.value("filter", json::object());
        try {
            m.filter.kind = parse_filter_kind(filter.at("kind").get<std::string>());
            m.filter.sigma = filter.at("sigma").get<double>();
        } catch (const json::exception&) {
            throw FormatError(quoted(path) + " metadata lacks a valid filter description");
        } catch (const ConfigError& e) {
            throw FormatError(quoted(path) + ": " + e.what());
        }
        DoubleReader in(c.payload, path);
        m.subspace.eigenvalues.resize(k);
        for (auto& l : m.subspace.eigenvalues) l = in.next();
        m.subspace.basis = ComplexMatrix(p, k);
        for (std::size_t j = 0; j < k; ++j) {
            for (std::size_t r = 0; r < p; ++r) {
                const double re = in.next();
                const double im = in.next();
                m.subspace.basis(r, j) = Complex(re, im);
            }
        }
        if (centered) {
            m.mean.resize(p);
            for (auto& v : m.mean) {
                const double re = in.next();
                const double im = in.next();
                v = Complex(re, im);
            }
        }
        return m;
    }
    if (kind == "l2") {
        require_payload(c, k + p * k + p, 0, path);
        L2Model m;
        m.height = height;
        m.width = width;
        DoubleReader in(c.payload, path);
        m.subspace.eigenvalues.resize(k);
        for (auto& l : m.subspace.eigenvalues) l = in.next();
        m.subspace.basis = RealMatrix(p, k);
        for (std::size_t j = 0; j < k; ++j)
            for (std::size_t r = 0; r < p; ++r) m.subspace.basis(r, j) = in.next();
        m.mean.resize(p);
        for (auto& v : m.mean) v = in.next();
        return m;
    }
    throw FormatError(quoted(path) + " has unknown model kind '" + kind + "'");
}

IgoModel load_igo_model(const fs::path& path) {
    auto m = load_model(path);
    if (auto* igo = std::get_if<IgoModel>(&m)) return std::move(*igo);
    throw FormatError(quoted(path) + " holds an l2 model, expected igo");
}

L2Model load_l2_model(const fs::path& path) {
    auto m = load_model(path);
    if (auto* l2 = std::get_if<L2Model>(&m)) return std::move(*l2);
    throw FormatError(quoted(path) + " holds an igo model, expected l2");
}

void save_orientation(const OrientationImage& image, const fs::path& path) {
    const json meta = {{"kind", "orientation"}, {"height", image.height}, {"width", image.width}};
    ByteWriter payload;
    for (double a : image.angles) {
        require_finite(a, path);
        payload.put_f64(a);
    }
    std::vector<std::uint8_t> bitmap((image.size() + 7) / 8, 0);
    for (std::size_t k = 0; k < image.size(); ++k) {
        if (image.valid[k]) bitmap[k / 8] |= static_cast<std::uint8_t>(1u << (k % 8));
    }
    payload.put_bytes(bitmap.data(), bitmap.size());
    write_file_atomic(path, encode_container(kOrientationMagic, kOrientationFormatVersion, meta,
                                             payload.bytes()));
}

OrientationImage load_orientation(const fs::path& path) {
    const auto c = decode_container(path, kOrientationMagic, kOrientationFormatVersion);
    const auto height = meta_field<std::size_t>(c.metadata, "height", path);
    const auto width = meta_field<std::size_t>(c.metadata, "width", path);
    const std::size_t p = height * width;
    if (p == 0) throw FormatError(quoted(path) + " declares an empty raster");
    require_payload(c, p, (p + 7) / 8, path);
    DoubleReader in(c.payload, path);
    std::vector<double> angles(p);
    for (auto& a : angles) a = in.next();
    PixelMask mask(p);
    const std::uint8_t* bitmap = c.payload.data() + 8 * p;
    for (std::size_t k = 0; k < p; ++k) mask[k] = (bitmap[k / 8] >> (k % 8)) & 1u;
    try {
        return OrientationImage(height, width, std::move(angles), std::move(mask));
    } catch (const DomainError& e) {
        throw FormatError(quoted(path) + ": " + e.what());
    }
}

void write_file_atomic(const fs::path& path, std::span<const std::uint8_t> bytes) {
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
        if (ec) throw IoError("cannot create directory " + quoted(path.parent_path()) + ": " + ec.message());
    }
    fs::path tmp = path;
    tmp += ".tmp-" + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot create " + quoted(tmp));
        out.write(reinterpret_cast<const char*>(bytes.data()),
                  static_cast<std::streamsize>(bytes.size()));
        out.flush();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw IoError("failed writing " + quoted(tmp));
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot move temporary file onto " + quoted(path));
    }
}

void write_file_atomic(const fs::path& path, const std::string& text) {
    write_file_atomic(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()),
                                      text.size()));
}

std::string format_double(double value) {
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), ptr);
}

CsvDocument::CsvDocument(const std::string& schema, int version,
                         std::vector<std::string> columns)
    : columns_(columns.size()) {
    text_ = "# " + schema + " v" + std::to_string(version) + "\n";
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) text_ += ',';
        text_ += columns[i];
    }
    text_ += '\n';
}

void CsvDocument::add_row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_) {
        throw DimensionError("CSV row has " + std::to_string(cells.size()) + " cells, expected " +
                             std::to_string(columns_));
    }
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) text_ += ',';
        text_ += cells[i];
    }
    text_ += '\n';
    ++rows_;
}

}  // namespace igo::io
