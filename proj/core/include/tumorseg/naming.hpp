#ifndef TUMORSEG_NAMING_HPP
#define TUMORSEG_NAMING_HPP

#include <string>

#include "tumorseg/types.hpp"

namespace tumorseg {

// Output filename conventions shared by the pipeline commands and the
// prediction-directory reader. z is zero-padded to 3 digits.

std::string slice_png_name(const CaseId& case_id, int z);                // case_z012.png
std::string mask_png_name(const CaseId& case_id, int z, Roi roi);        // case_z012_edema.png
std::string overlay_png_name(const CaseId& case_id, int z, Roi roi,
                             const std::string& model_tag);              // case_z012_edema_m.png

}  // namespace tumorseg

#endif
