#ifndef TUMORSEG_NIFTI_HPP
#define TUMORSEG_NIFTI_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <variant>
#include <vector>

#include "tumorseg/types.hpp"

namespace tumorseg {

enum class NiftiDatatype : std::int16_t {
  U8 = 2,
  I16 = 4,
  I32 = 8,
  F32 = 16,
  F64 = 64,
};

int nifti_bitpix(NiftiDatatype dt);

// Decoded subset of the 348-byte NIfTI-1 header.
struct NiftiHeader {
  int ndim = 3;                          // dim[0]; only 3 and 4 are accepted
  std::array<int, 7> dim = {1, 1, 1, 1, 1, 1, 1};        // dim[1..7]
  NiftiDatatype datatype = NiftiDatatype::F32;
  int bitpix = 32;
  double vox_offset = 352.0;
  double scl_slope = 0.0;                // 0 = no rescaling
  double scl_inter = 0.0;
  std::array<double, 7> pixdim = {1, 1, 1, 1, 1, 1, 1};  // pixdim[1..7]
  bool big_endian = false;
  std::int16_t qform_code = 0, sform_code = 0;
  std::array<std::array<float, 4>, 3> srow{};

  // Set on read when the sform implies a non-identity axis permutation;
  // processing still uses the stored axis order.
  bool axis_permutation_warning = false;
};

using NiftiBuffer = std::variant<std::vector<std::uint8_t>, std::vector<std::int16_t>,
                                 std::vector<std::int32_t>, std::vector<float>,
                                 std::vector<double>>;

struct RawNifti {
  NiftiHeader header;
  NiftiBuffer data;

  std::size_t voxel_count() const;
};

enum class Endian { Little, Big };

// Single-file NIfTI-1 reader. Endianness is auto-detected from sizeof_hdr;
// gzip containers are detected by the 0x1F 0x8B prefix regardless of
// extension. scl_slope/scl_inter are applied when slope != 0 and the pair
// is not the identity (the buffer becomes floating point in that case).
RawNifti read_nifti(const std::filesystem::path& path);

// Single-file writer, magic "n+1", data at offset 352. Paths ending in
// .gz are gzip-compressed. Dimensions must fit the header's 16-bit fields.
void write_nifti(const RawNifti& image, const std::filesystem::path& path,
                 Endian endian = Endian::Little);

// Decathlon 4D image (x, y, z, modality) -> internal [modality][z][y][x]
// layout. source_order maps position in the file's 4th dimension to a
// modality; Decathlon order is the canonical (FLAIR, T1w, T1-Gd, T2w).
MultimodalVolume to_multimodal(const RawNifti& raw,
                               std::array<Modality, 4> source_order = kCanonicalModalityOrder);

// 3D label image -> LabelVolume. remap translates foreign label codes to
// the Decathlon convention before validation; codes must land in {0,1,2,3}.
LabelVolume to_labels(const RawNifti& raw,
                      const std::map<std::uint8_t, std::uint8_t>& remap = {});

RawNifti from_multimodal(const MultimodalVolume& volume);  // float32
RawNifti from_labels(const LabelVolume& labels);           // uint8

}  // namespace tumorseg

#endif
