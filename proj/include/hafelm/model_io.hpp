#pragma once

#include <filesystem>
#include <iosfwd>

#include "hafelm/elm.hpp"

namespace hafelm {

inline constexpr int kModelFormatVersion = 1;

/// JSON model file. Doubles are written in shortest round-trip form, so a
/// loaded model predicts bit-identically to the saved one.
void save_model(const FelmModel& model, const std::filesystem::path& path);
void save_model(const FelmModel& model, std::ostream& out);
FelmModel load_model(const std::filesystem::path& path);
FelmModel load_model(std::istream& in);

}  // namespace hafelm
