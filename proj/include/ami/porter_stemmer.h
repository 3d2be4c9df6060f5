#ifndef AMI_PORTER_STEMMER_H_
#define AMI_PORTER_STEMMER_H_

#include <string>
#include <string_view>

namespace ami {

// Classic Porter stemmer as in Martin Porter's reference C implementation
// (including its bli->ble and logi->log rules). Expects a lowercase word;
// non-ASCII codepoints are treated as consonants. Words of one or two
// codepoints are returned unchanged.
std::string porter_stem(std::string_view word);

}  // namespace ami

#endif  // AMI_PORTER_STEMMER_H_
