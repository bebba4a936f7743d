#include "tumorseg/nifti.hpp"

#include <zlib.h>

#include <cmath>
#include <cstring>
#include <fstream>
#include <string>

#include "tumorseg/error.hpp"

namespace tumorseg {
namespace {

// NIfTI-1 byte offsets used here (full header is 348 bytes, data follows
// the 4-byte extender at 348 unless vox_offset says otherwise):
//   0   int32   sizeof_hdr   == 348, endianness probe
//   40  int16   dim[8]
//   70  int16   datatype
//   72  int16   bitpix
//   76  f32     pixdim[8]
//   108 f32     vox_offset
//   112 f32     scl_slope
//   116 f32     scl_inter
//   252 int16   qform_code
//   254 int16   sform_code
//   280 f32     srow_x[4] srow_y[4] srow_z[4]
//   344 char    magic[4]  "n+1\0" single file, "ni1\0" paired
constexpr std::size_t kHeaderSize = 348;
constexpr std::size_t kMinVoxOffset = 352;

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return bytes;
}

bool is_gzip(const std::vector<std::uint8_t>& bytes) {
  return bytes.size() >= 2 && bytes[0] == 0x1F && bytes[1] == 0x8B;
}

std::vector<std::uint8_t> gunzip(const std::vector<std::uint8_t>& bytes,
                                 const std::string& context) {
  z_stream zs{};
  if (inflateInit2(&zs, 15 + 32) != Z_OK) throw IoError("zlib inflateInit failed");
  std::vector<std::uint8_t> out;
  out.reserve(bytes.size() * 4);
  std::uint8_t buf[1 << 16];
  zs.next_in = const_cast<Bytef*>(bytes.data());
  zs.avail_in = static_cast<uInt>(bytes.size());
  int rc = Z_OK;
  do {
    zs.next_out = buf;
    zs.avail_out = sizeof(buf);
    rc = inflate(&zs, Z_NO_FLUSH);
    if (rc != Z_OK && rc != Z_STREAM_END) {
      inflateEnd(&zs);
      throw ParseError("corrupt gzip stream in " + context);
    }
    out.insert(out.end(), buf, buf + (sizeof(buf) - zs.avail_out));
  } while (rc != Z_STREAM_END);
  inflateEnd(&zs);
  return out;
}

std::vector<std::uint8_t> gzip_compress(const std::vector<std::uint8_t>& bytes) {
  z_stream zs{};
  // 15+16 selects the gzip wrapper; zlib's default gzip header carries
  // mtime 0, keeping outputs byte-identical across reruns.
  if (deflateInit2(&zs, 6, Z_DEFLATED, 15 + 16, 8, Z_DEFAULT_STRATEGY) != Z_OK)
    throw IoError("zlib deflateInit failed");
  std::vector<std::uint8_t> out;
  std::uint8_t buf[1 << 16];
  zs.next_in = const_cast<Bytef*>(bytes.data());
  zs.avail_in = static_cast<uInt>(bytes.size());
  int rc = Z_OK;
  do {
    zs.next_out = buf;
    zs.avail_out = sizeof(buf);
    rc = deflate(&zs, Z_FINISH);
    out.insert(out.end(), buf, buf + (sizeof(buf) - zs.avail_out));
  } while (rc != Z_STREAM_END);
  deflateEnd(&zs);
  return out;
}

template <typename T>
T byteswap_value(T v) {
  std::uint8_t* p = reinterpret_cast<std::uint8_t*>(&v);
  for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(p[i], p[sizeof(T) - 1 - i]);
  return v;
}

template <typename T>
T read_at(const std::uint8_t* base, std::size_t offset, bool swap) {
  T v;
  std::memcpy(&v, base + offset, sizeof(T));
  return swap ? byteswap_value(v) : v;
}

template <typename T>
void write_at(std::uint8_t* base, std::size_t offset, T v, bool swap) {
  if (swap) v = byteswap_value(v);
  std::memcpy(base + offset, &v, sizeof(T));
}

bool host_is_little_endian() {
  const std::uint16_t probe = 1;
  return *reinterpret_cast<const std::uint8_t*>(&probe) == 1;
}

template <typename T>
std::vector<T> decode_buffer(const std::uint8_t* data, std::size_t count, bool swap) {
  std::vector<T> out(count);
  std::memcpy(out.data(), data, count * sizeof(T));
  if (swap && sizeof(T) > 1)
    for (T& v : out) v = byteswap_value(v);
  return out;
}

// sform 3x3 rotation block: warn when the dominant component of each row
// does not sit on the diagonal (data would need reorientation that this
// toolkit deliberately does not perform).
bool sform_permutes_axes(const std::array<std::array<float, 4>, 3>& srow) {
  for (int r = 0; r < 3; ++r) {
    int arg = 0;
    float best = std::fabs(srow[r][0]);
    for (int c = 1; c < 3; ++c) {
      if (std::fabs(srow[r][c]) > best) {
        best = std::fabs(srow[r][c]);
        arg = c;
      }
    }
    if (best > 0.0f && arg != r) return true;
  }
  return false;
}

}  // namespace

int nifti_bitpix(NiftiDatatype dt) {
  switch (dt) {
    case NiftiDatatype::U8: return 8;
    case NiftiDatatype::I16: return 16;
    case NiftiDatatype::I32: return 32;
    case NiftiDatatype::F32: return 32;
    case NiftiDatatype::F64: return 64;
  }
  return 0;
}

std::size_t RawNifti::voxel_count() const {
  std::size_t n = 1;
  for (int i = 0; i < header.ndim; ++i) n *= static_cast<std::size_t>(header.dim[i]);
  return n;
}

RawNifti read_nifti(const std::filesystem::path& path) {
  std::vector<std::uint8_t> bytes = read_file_bytes(path);
  if (is_gzip(bytes)) bytes = gunzip(bytes, path.string());
  if (bytes.size() < kHeaderSize)
    throw ParseError("file too small for a NIfTI-1 header: " + path.string());
  const std::uint8_t* base = bytes.data();

  bool swap = false;
  std::int32_t sizeof_hdr = read_at<std::int32_t>(base, 0, false);
  if (sizeof_hdr != 348) {
    sizeof_hdr = byteswap_value(sizeof_hdr);
    if (sizeof_hdr != 348)
      throw ParseError("sizeof_hdr field does not decode to 348 under either endianness: " +
                       path.string());
    swap = true;
  }

  char magic[4];
  std::memcpy(magic, base + 344, 4);
  if (std::memcmp(magic, "ni1", 3) == 0)
    throw ParseError("magic 'ni1': paired .hdr/.img form is not supported: " + path.string());
  if (std::memcmp(magic, "n+1", 3) != 0 || magic[3] != '\0')
    throw ParseError("bad magic field (expected 'n+1'): " + path.string());

  RawNifti raw;
  NiftiHeader& hdr = raw.header;
  hdr.big_endian = swap == host_is_little_endian();

  hdr.ndim = read_at<std::int16_t>(base, 40, swap);
  if (hdr.ndim != 3 && hdr.ndim != 4)
    throw ParseError("dim[0] = " + std::to_string(hdr.ndim) +
                     ": only 3D and 4D images are supported: " + path.string());
  for (int i = 0; i < 7; ++i) {
    hdr.dim[i] = read_at<std::int16_t>(base, 40 + 2 * (i + 1), swap);
    if (i < hdr.ndim && hdr.dim[i] < 1)
      throw ParseError("dim[" + std::to_string(i + 1) + "] = " + std::to_string(hdr.dim[i]) +
                       " is not a valid extent: " + path.string());
  }

  const std::int16_t dt_code = read_at<std::int16_t>(base, 70, swap);
  switch (dt_code) {
    case 2: hdr.datatype = NiftiDatatype::U8; break;
    case 4: hdr.datatype = NiftiDatatype::I16; break;
    case 8: hdr.datatype = NiftiDatatype::I32; break;
    case 16: hdr.datatype = NiftiDatatype::F32; break;
    case 64: hdr.datatype = NiftiDatatype::F64; break;
    default:
      throw ParseError("datatype code " + std::to_string(dt_code) +
                       " unsupported (need uint8/int16/int32/float32/float64): " + path.string());
  }
  hdr.bitpix = read_at<std::int16_t>(base, 72, swap);
  if (hdr.bitpix != nifti_bitpix(hdr.datatype))
    throw ParseError("bitpix " + std::to_string(hdr.bitpix) + " disagrees with datatype: " +
                     path.string());

  for (int i = 0; i < 7; ++i) hdr.pixdim[i] = read_at<float>(base, 76 + 4 * (i + 1), swap);
  hdr.vox_offset = read_at<float>(base, 108, swap);
  if (hdr.vox_offset < static_cast<double>(kMinVoxOffset))
    throw ParseError("vox_offset " + std::to_string(hdr.vox_offset) +
                     " below the single-file minimum of 352: " + path.string());

  const float slope = read_at<float>(base, 112, swap);
  const float inter = read_at<float>(base, 116, swap);
  hdr.scl_slope = std::isfinite(slope) ? slope : 0.0;
  hdr.scl_inter = std::isfinite(inter) ? inter : 0.0;

  hdr.qform_code = read_at<std::int16_t>(base, 252, swap);
  hdr.sform_code = read_at<std::int16_t>(base, 254, swap);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 4; ++c)
      hdr.srow[r][c] = read_at<float>(base, 280 + 16 * r + 4 * c, swap);
  hdr.axis_permutation_warning = hdr.sform_code > 0 && sform_permutes_axes(hdr.srow);

  const std::size_t offset = static_cast<std::size_t>(hdr.vox_offset);
  const std::size_t count = raw.voxel_count();
  const std::size_t bytes_needed = count * (hdr.bitpix / 8);
  if (offset > bytes.size() || bytes.size() - offset < bytes_needed)
    throw ParseError("truncated data section (need " + std::to_string(bytes_needed) +
                     " bytes at offset " + std::to_string(offset) + "): " + path.string());

  const std::uint8_t* payload = base + offset;
  switch (hdr.datatype) {
    case NiftiDatatype::U8: raw.data = decode_buffer<std::uint8_t>(payload, count, swap); break;
    case NiftiDatatype::I16: raw.data = decode_buffer<std::int16_t>(payload, count, swap); break;
    case NiftiDatatype::I32: raw.data = decode_buffer<std::int32_t>(payload, count, swap); break;
    case NiftiDatatype::F32: raw.data = decode_buffer<float>(payload, count, swap); break;
    case NiftiDatatype::F64: raw.data = decode_buffer<double>(payload, count, swap); break;
  }

  // Nontrivial intensity rescale converts the buffer to floating point.
  const bool rescale = hdr.scl_slope != 0.0 && !(hdr.scl_slope == 1.0 && hdr.scl_inter == 0.0);
  if (rescale) {
    const double a = hdr.scl_slope, b = hdr.scl_inter;
    if (std::holds_alternative<std::vector<double>>(raw.data)) {
      for (double& v : std::get<std::vector<double>>(raw.data)) v = a * v + b;
    } else {
      std::vector<float> scaled(count);
      std::visit(
          [&](const auto& src) {
            for (std::size_t i = 0; i < count; ++i)
              scaled[i] = static_cast<float>(a * static_cast<double>(src[i]) + b);
          },
          raw.data);
      raw.data = std::move(scaled);
      raw.header.datatype = NiftiDatatype::F32;
      raw.header.bitpix = 32;
    }
    raw.header.scl_slope = 0.0;
    raw.header.scl_inter = 0.0;
  }
  return raw;
}

void write_nifti(const RawNifti& image, const std::filesystem::path& path, Endian endian) {
  const NiftiHeader& hdr = image.header;
  if (hdr.ndim != 3 && hdr.ndim != 4)
    throw ValidationError("write_nifti: only 3D and 4D images are supported");
  for (int i = 0; i < hdr.ndim; ++i) {
    if (hdr.dim[i] < 1 || hdr.dim[i] > 32767)
      throw ValidationError("write_nifti: dimension " + std::to_string(hdr.dim[i]) +
                            " overflows the 16-bit header field");
  }
  const std::size_t count = image.voxel_count();
  const std::size_t have = std::visit([](const auto& v) { return v.size(); }, image.data);
  if (have != count)
    throw ValidationError("write_nifti: buffer has " + std::to_string(have) +
                          " voxels, header implies " + std::to_string(count));

  const bool swap = (endian == Endian::Big) == host_is_little_endian();
  std::vector<std::uint8_t> bytes(kMinVoxOffset + count * (nifti_bitpix(hdr.datatype) / 8), 0);
  std::uint8_t* base = bytes.data();

  write_at<std::int32_t>(base, 0, 348, swap);
  write_at<std::int16_t>(base, 40, static_cast<std::int16_t>(hdr.ndim), swap);
  for (int i = 0; i < 7; ++i)
    write_at<std::int16_t>(base, 40 + 2 * (i + 1),
                           static_cast<std::int16_t>(i < hdr.ndim ? hdr.dim[i] : 1), swap);
  write_at<std::int16_t>(base, 70, static_cast<std::int16_t>(hdr.datatype), swap);
  write_at<std::int16_t>(base, 72, static_cast<std::int16_t>(nifti_bitpix(hdr.datatype)), swap);
  write_at<float>(base, 76, 1.0f, swap);  // pixdim[0]: qfac
  for (int i = 0; i < 7; ++i)
    write_at<float>(base, 76 + 4 * (i + 1), static_cast<float>(hdr.pixdim[i]), swap);
  write_at<float>(base, 108, static_cast<float>(kMinVoxOffset), swap);
  write_at<float>(base, 112, static_cast<float>(hdr.scl_slope), swap);
  write_at<float>(base, 116, static_cast<float>(hdr.scl_inter), swap);
  write_at<std::int16_t>(base, 252, hdr.qform_code, swap);
  write_at<std::int16_t>(base, 254, hdr.sform_code, swap);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 4; ++c) write_at<float>(base, 280 + 16 * r + 4 * c, hdr.srow[r][c], swap);
  std::memcpy(base + 344, "n+1\0", 4);
  // 4-byte extender at 348 stays zero: no extensions.

  std::visit(
      [&](const auto& src) {
        using T = typename std::decay_t<decltype(src)>::value_type;
        for (std::size_t i = 0; i < src.size(); ++i)
          write_at<T>(base, kMinVoxOffset + i * sizeof(T), src[i], swap && sizeof(T) > 1);
      },
      image.data);

  const std::string name = path.string();
  const bool want_gzip = name.size() > 3 && name.compare(name.size() - 3, 3, ".gz") == 0;
  if (want_gzip) bytes = gzip_compress(bytes);

  const std::filesystem::path tmp = name + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open file for writing: " + tmp.string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("rename failed for " + path.string() + ": " + ec.message());
}

MultimodalVolume to_multimodal(const RawNifti& raw, std::array<Modality, 4> source_order) {
  const NiftiHeader& hdr = raw.header;
  if (hdr.ndim != 4)
    throw ValidationError("to_multimodal: expected a 4D image, got " + std::to_string(hdr.ndim) +
                          "D");
  const int nx = hdr.dim[0], ny = hdr.dim[1], nz = hdr.dim[2], nm = hdr.dim[3];
  if (nm != 4)
    throw ValidationError("to_multimodal: expected 4 modalities in the 4th dimension, got " +
                          std::to_string(nm));
  const Spacing3 spacing{hdr.pixdim[2], hdr.pixdim[1], hdr.pixdim[0]};
  MultimodalVolume vol(nz, ny, nx, source_order, spacing);
  std::visit(
      [&](const auto& src) {
        std::size_t i = 0;  // file order: x fastest, then y, z, modality
        for (int m = 0; m < 4; ++m)
          for (int z = 0; z < nz; ++z)
            for (int y = 0; y < ny; ++y)
              for (int x = 0; x < nx; ++x) vol.at(m, z, y, x) = static_cast<float>(src[i++]);
      },
      raw.data);
  return vol;
}

LabelVolume to_labels(const RawNifti& raw, const std::map<std::uint8_t, std::uint8_t>& remap) {
  const NiftiHeader& hdr = raw.header;
  if (hdr.ndim != 3)
    throw ValidationError("to_labels: expected a 3D label image, got " +
                          std::to_string(hdr.ndim) + "D");
  const int nx = hdr.dim[0], ny = hdr.dim[1], nz = hdr.dim[2];
  const Spacing3 spacing{hdr.pixdim[2], hdr.pixdim[1], hdr.pixdim[0]};
  LabelVolume labels(nz, ny, nx, spacing);
  std::visit(
      [&](const auto& src) {
        std::size_t i = 0;
        for (int z = 0; z < nz; ++z)
          for (int y = 0; y < ny; ++y)
            for (int x = 0; x < nx; ++x) {
              const double v = static_cast<double>(src[i++]);
              if (!(v == std::floor(v)) || v < 0.0 || v > 255.0)
                throw ParseError("to_labels: non-integer label value " + std::to_string(v));
              std::uint8_t code = static_cast<std::uint8_t>(v);
              auto it = remap.find(code);
              if (it != remap.end()) code = it->second;
              if (code > 3)
                throw ParseError("to_labels: label code " + std::to_string(int(code)) +
                                 " outside {0,1,2,3}; supply a remap table");
              labels.at(z, y, x) = code;
            }
      },
      raw.data);
  return labels;
}

RawNifti from_multimodal(const MultimodalVolume& volume) {
  RawNifti raw;
  raw.header.ndim = 4;
  raw.header.dim = {volume.nx(), volume.ny(), volume.nz(), 4, 1, 1, 1};
  raw.header.datatype = NiftiDatatype::F32;
  raw.header.bitpix = 32;
  raw.header.pixdim = {volume.spacing().x, volume.spacing().y, volume.spacing().z, 1, 1, 1, 1};
  std::vector<float> buf(volume.data().size());
  std::size_t i = 0;
  for (int m = 0; m < 4; ++m)
    for (int z = 0; z < volume.nz(); ++z)
      for (int y = 0; y < volume.ny(); ++y)
        for (int x = 0; x < volume.nx(); ++x) buf[i++] = volume.at(m, z, y, x);
  raw.data = std::move(buf);
  return raw;
}

RawNifti from_labels(const LabelVolume& labels) {
  RawNifti raw;
  raw.header.ndim = 3;
  raw.header.dim = {labels.nx(), labels.ny(), labels.nz(), 1, 1, 1, 1};
  raw.header.datatype = NiftiDatatype::U8;
  raw.header.bitpix = 8;
  raw.header.pixdim = {labels.spacing().x, labels.spacing().y, labels.spacing().z, 1, 1, 1, 1};
  std::vector<std::uint8_t> buf(labels.codes().size());
  std::size_t i = 0;
  for (int z = 0; z < labels.nz(); ++z)
    for (int y = 0; y < labels.ny(); ++y)
      for (int x = 0; x < labels.nx(); ++x) buf[i++] = labels.at(z, y, x);
  raw.data = std::move(buf);
  return raw;
}

}  // namespace tumorseg
