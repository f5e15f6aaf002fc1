#ifndef SHIFTCONV_FORMS_FWD_HPP
#define SHIFTCONV_FORMS_FWD_HPP

namespace shiftconv {
struct HeckeCoeffTable;
struct MaassFormRecord;
struct SpectralDataset;
}  // namespace shiftconv

#endif  // SHIFTCONV_FORMS_FWD_HPP
