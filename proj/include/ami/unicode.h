#ifndef AMI_UNICODE_H_
#define AMI_UNICODE_H_

#include <string>
#include <string_view>

namespace ami::unicode {

// Ill-formed sequences decode to U+FFFD, so decoding never fails.
std::u32string decode_utf8(std::string_view text);
std::string encode_utf8(std::u32string_view text);
void append_utf8(char32_t cp, std::string& out);

char32_t to_lower(char32_t cp);
bool is_whitespace(char32_t cp);
// General categories P* and S*.
bool is_punct_or_symbol(char32_t cp);
// Letters, marks, numbers, connector punctuation and the apostrophe.
bool is_word_char(char32_t cp);

}  // namespace ami::unicode

#endif  // AMI_UNICODE_H_
