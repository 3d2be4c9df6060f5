#ifndef AMI_SRC_JSON_CODEC_H_
#define AMI_SRC_JSON_CODEC_H_

#include <string>
#include <string_view>

#include "ami/features.h"
#include "ami/multiclass.h"
#include "ami/preprocess.h"
#include "json.hpp"

namespace ami::codec {

using Json = nlohmann::json;

// Parses text, mapping parser failures to FormatError with the byte offset.
Json parse(std::string_view text, const std::string& source_name);

// Typed accessors that raise DataError naming the missing/mistyped field.
const Json& field(const Json& j, const char* name);
double get_double(const Json& j, const char* name);
long long get_int(const Json& j, const char* name);
bool get_bool(const Json& j, const char* name);
std::string get_string(const Json& j, const char* name);

Json to_json(const LogRegConfig& c);
LogRegConfig logreg_config_from_json(const Json& j);
Json to_json(const GbdtConfig& c);
GbdtConfig gbdt_config_from_json(const Json& j);

Json to_json(const LinearModel& m);
LinearModel linear_model_from_json(const Json& j);
Json to_json(const GbdtModel& m);
GbdtModel gbdt_model_from_json(const Json& j);
Json to_json(const BinaryModel& m);
BinaryModel binary_model_from_json(const Json& j);
Json to_json(const MulticlassModel& m);
MulticlassModel multiclass_model_from_json(const Json& j);

Json to_json(const PreprocessConfig& c);
PreprocessConfig preprocess_config_from_json(const Json& j);
Json to_json(const FeatureSpace& s);
FeatureSpace feature_space_from_json(const Json& j);

}  // namespace ami::codec

#endif  // AMI_SRC_JSON_CODEC_H_
