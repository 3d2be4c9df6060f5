#ifndef AMI_MODEL_IO_H_
#define AMI_MODEL_IO_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>

#include "ami/multiclass.h"

namespace ami {

inline constexpr int kModelFormatVersion = 1;

using AnyModel = std::variant<LinearModel, GbdtModel, MulticlassModel>;

// Versioned JSON documents; see docs/model_format.md. Doubles are written in
// shortest round-trip form, so load(save(m)) predicts bit-identically.
std::string serialize_model(const AnyModel& model);
AnyModel parse_model(std::string_view text, const std::string& source_name = "<memory>");

void save_model(const AnyModel& model, const std::filesystem::path& path);
// FormatError (with byte offset) on malformed JSON, DataError on a version or
// schema problem.
AnyModel load_model(const std::filesystem::path& path);

// Typed loaders throw EngineTypeError when the file holds another engine.
LinearModel load_linear_model(const std::filesystem::path& path);
GbdtModel load_gbdt_model(const std::filesystem::path& path);
MulticlassModel load_multiclass_model(const std::filesystem::path& path);

}  // namespace ami

#endif  // AMI_MODEL_IO_H_
