#include "tumorseg/types.hpp"

#include "tumorseg/error.hpp"

namespace tumorseg {

const char* modality_token(Modality m) {
  switch (m) {
    case Modality::Flair: return "flair";
    case Modality::T1w: return "t1w";
    case Modality::T1Gd: return "t1gd";
    case Modality::T2w: return "t2w";
  }
  return "?";
}

std::optional<Modality> modality_from_token(const std::string& token) {
  for (Modality m : kCanonicalModalityOrder)
    if (token == modality_token(m)) return m;
  return std::nullopt;
}

const char* roi_token(Roi roi) {
  switch (roi) {
    case Roi::Edema: return "edema";
    case Roi::NonEnhancing: return "nonenhancing";
    case Roi::Enhancing: return "enhancing";
    case Roi::WholeTumor: return "wholetumor";
  }
  return "?";
}

const char* roi_display(Roi roi) {
  switch (roi) {
    case Roi::Edema: return "Edema";
    case Roi::NonEnhancing: return "Non-enhancing";
    case Roi::Enhancing: return "Enhancing";
    case Roi::WholeTumor: return "Whole Tumor";
  }
  return "?";
}

std::optional<Roi> roi_from_token(const std::string& token) {
  for (Roi r : kAllRois)
    if (token == roi_token(r)) return r;
  return std::nullopt;
}

const char* pack_method_token(PackMethod m) {
  switch (m) {
    case PackMethod::Combined: return "combined";
    case PackMethod::Repeated: return "repeated";
    case PackMethod::Pca2d: return "pca";
  }
  return "?";
}

std::optional<PackMethod> pack_method_from_token(const std::string& token) {
  if (token == "combined") return PackMethod::Combined;
  if (token == "repeated") return PackMethod::Repeated;
  if (token == "pca" || token == "pca2d") return PackMethod::Pca2d;
  return std::nullopt;
}

MultimodalVolume::MultimodalVolume(int nz, int ny, int nx, std::array<Modality, 4> order,
                                   Spacing3 spacing)
    : nz_(nz), ny_(ny), nx_(nx), order_(order), spacing_(spacing) {
  if (nz < 1 || ny < 1 || nx < 1)
    throw ValidationError("MultimodalVolume: all spatial dims must be >= 1");
  data_.assign(4ull * nz * ny * static_cast<std::size_t>(nx), 0.0f);
}

int MultimodalVolume::index_of(Modality m) const {
  for (int i = 0; i < 4; ++i)
    if (order_[i] == m) return i;
  throw ValidationError(std::string("modality not present in volume: ") + modality_token(m));
}

int ModalitySlice::index_of(Modality m) const {
  for (int i = 0; i < 4; ++i)
    if (order[i] == m) return i;
  throw ValidationError(std::string("modality not present in slice: ") + modality_token(m));
}

LabelVolume::LabelVolume(int nz, int ny, int nx, Spacing3 spacing)
    : nz_(nz), ny_(ny), nx_(nx), spacing_(spacing) {
  if (nz < 1 || ny < 1 || nx < 1)
    throw ValidationError("LabelVolume: all spatial dims must be >= 1");
  codes_.assign(static_cast<std::size_t>(nz) * ny * nx, 0);
}

}  // namespace tumorseg
