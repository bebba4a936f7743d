#ifndef TUMORSEG_TYPES_HPP
#define TUMORSEG_TYPES_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tumorseg/grid.hpp"

namespace tumorseg {

// The four MRI acquisition types carried by each case, in canonical order.
enum class Modality : int { Flair = 0, T1w = 1, T1Gd = 2, T2w = 3 };

constexpr std::array<Modality, 4> kCanonicalModalityOrder = {
    Modality::Flair, Modality::T1w, Modality::T1Gd, Modality::T2w};

const char* modality_token(Modality m);                       // "flair", "t1w", "t1gd", "t2w"
std::optional<Modality> modality_from_token(const std::string& token);

// Tumor subregions. WholeTumor is the union of the three labeled regions.
enum class Roi : int { Edema = 0, NonEnhancing = 1, Enhancing = 2, WholeTumor = 3 };

constexpr std::array<Roi, 4> kAllRois = {Roi::Edema, Roi::NonEnhancing, Roi::Enhancing,
                                         Roi::WholeTumor};
// Row order used by the summary tables.
constexpr std::array<Roi, 4> kTableRoiOrder = {Roi::Enhancing, Roi::NonEnhancing, Roi::Edema,
                                               Roi::WholeTumor};

const char* roi_token(Roi roi);     // filename-safe: "edema", "nonenhancing", ...
const char* roi_display(Roi roi);   // "Edema", "Non-enhancing", "Enhancing", "Whole Tumor"
std::optional<Roi> roi_from_token(const std::string& token);

// Label codes, Decathlon convention.
constexpr std::uint8_t kLabelBackground = 0;
constexpr std::uint8_t kLabelEdema = 1;
constexpr std::uint8_t kLabelNonEnhancing = 2;
constexpr std::uint8_t kLabelEnhancing = 3;

using CaseId = std::string;

// Physical voxel size per axis, units/voxel.
struct Spacing3 {
  double z = 1.0, y = 1.0, x = 1.0;
};

// In-plane pixel size, (row, col) = (y, x).
struct Spacing2 {
  double row = 1.0, col = 1.0;
};

// 4-modality 3D intensity volume, the unit of preprocessing.
// Data layout: [modality][z][y][x], row-major within a plane.
class MultimodalVolume {
 public:
  MultimodalVolume() = default;
  MultimodalVolume(int nz, int ny, int nx,
                   std::array<Modality, 4> order = kCanonicalModalityOrder,
                   Spacing3 spacing = {});

  int nz() const { return nz_; }
  int ny() const { return ny_; }
  int nx() const { return nx_; }
  static constexpr int num_modalities() { return 4; }
  Spacing3 spacing() const { return spacing_; }
  const std::array<Modality, 4>& modalities() const { return order_; }

  // Position of a modality in the stored order; throws if absent.
  int index_of(Modality m) const;

  float& at(int m, int z, int y, int x) { return data_[offset(m, z, y, x)]; }
  float at(int m, int z, int y, int x) const { return data_[offset(m, z, y, x)]; }

  std::vector<float>& data() { return data_; }
  const std::vector<float>& data() const { return data_; }

 private:
  std::size_t offset(int m, int z, int y, int x) const {
    return ((static_cast<std::size_t>(m) * nz_ + z) * ny_ + y) * static_cast<std::size_t>(nx_) + x;
  }

  int nz_ = 0, ny_ = 0, nx_ = 0;
  std::array<Modality, 4> order_ = kCanonicalModalityOrder;
  Spacing3 spacing_;
  std::vector<float> data_;
};

// Integer ROI codes for one case; dims match the paired MultimodalVolume.
class LabelVolume {
 public:
  LabelVolume() = default;
  LabelVolume(int nz, int ny, int nx, Spacing3 spacing = {});

  int nz() const { return nz_; }
  int ny() const { return ny_; }
  int nx() const { return nx_; }
  Spacing3 spacing() const { return spacing_; }

  std::uint8_t& at(int z, int y, int x) { return codes_[offset(z, y, x)]; }
  std::uint8_t at(int z, int y, int x) const { return codes_[offset(z, y, x)]; }

  std::vector<std::uint8_t>& codes() { return codes_; }
  const std::vector<std::uint8_t>& codes() const { return codes_; }

 private:
  std::size_t offset(int z, int y, int x) const {
    return (static_cast<std::size_t>(z) * ny_ + y) * static_cast<std::size_t>(nx_) + x;
  }

  int nz_ = 0, ny_ = 0, nx_ = 0;
  Spacing3 spacing_;
  std::vector<std::uint8_t> codes_;
};

// Axis-aligned pixel box, inclusive on all four sides.
struct BoundingBox {
  int row_min = 0, col_min = 0, row_max = 0, col_max = 0;

  bool contains(int r, int c) const {
    return r >= row_min && r <= row_max && c >= col_min && c <= col_max;
  }
  int height() const { return row_max - row_min + 1; }
  int width() const { return col_max - col_min + 1; }

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

// One axial plane of all four modalities, modality order preserved.
struct ModalitySlice {
  std::array<PlaneF, 4> planes;
  std::array<Modality, 4> order = kCanonicalModalityOrder;

  int rows() const { return planes[0].rows(); }
  int cols() const { return planes[0].cols(); }
  int index_of(Modality m) const;
};

enum class PackMethod : int { Combined = 0, Repeated = 1, Pca2d = 2 };

const char* pack_method_token(PackMethod m);  // "combined", "repeated", "pca"
std::optional<PackMethod> pack_method_from_token(const std::string& token);

// 3-channel 8-bit image produced by one of the channel-packing methods.
struct PackedSlice {
  std::array<PlaneU8, 3> channels;
  PackMethod method = PackMethod::Combined;
  Modality repeated_modality = Modality::T1Gd;  // used when method == Repeated
  CaseId case_id;
  int z = 0;

  int rows() const { return channels[0].rows(); }
  int cols() const { return channels[0].cols(); }
};

}  // namespace tumorseg

#endif
