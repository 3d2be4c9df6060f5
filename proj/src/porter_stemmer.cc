#include "ami/porter_stemmer.h"

#include "ami/unicode.h"

namespace ami {
namespace {

// b_[0..k_] is the word being stemmed; j_ marks the end of the stem for the
// suffix most recently matched by ends().
class PorterStemmer {
 public:
  explicit PorterStemmer(std::u32string word) : b_(std::move(word)) {
    k_ = static_cast<int>(b_.size()) - 1;
  }

  std::u32string run() {
    if (k_ <= 1) return b_;
    step1ab();
    if (k_ > 0) {
      step1c();
      step2();
      step3();
      step4();
      step5();
    }
    b_.resize(static_cast<std::size_t>(k_ + 1));
    return b_;
  }

 private:
  bool cons(int i) const {
    switch (b_[i]) {
      case U'a': case U'e': case U'i': case U'o': case U'u':
        return false;
      case U'y':
        return i == 0 ? true : !cons(i - 1);
      default:
        return true;
    }
  }

  // Number of VC sequences in b_[0..j_].
  int m() const {
    int n = 0;
    int i = 0;
    while (true) {
      if (i > j_) return n;
      if (!cons(i)) break;
      ++i;
    }
    ++i;
    while (true) {
      while (true) {
        if (i > j_) return n;
        if (cons(i)) break;
        ++i;
      }
      ++i;
      ++n;
      while (true) {
        if (i > j_) return n;
        if (!cons(i)) break;
        ++i;
      }
      ++i;
    }
  }

  bool vowel_in_stem() const {
    for (int i = 0; i <= j_; ++i) {
      if (!cons(i)) return true;
    }
    return false;
  }

  bool double_consonant(int j) const {
    if (j < 1) return false;
    if (b_[j] != b_[j - 1]) return false;
    return cons(j);
  }

  // consonant-vowel-consonant ending at i, last consonant not w, x or y.
  bool cvc(int i) const {
    if (i < 2 || !cons(i) || cons(i - 1) || !cons(i - 2)) return false;
    const char32_t ch = b_[i];
    return ch != U'w' && ch != U'x' && ch != U'y';
  }

  bool ends(std::u32string_view s) {
    const int length = static_cast<int>(s.size());
    if (length > k_ + 1) return false;
    if (std::u32string_view(b_).substr(k_ - length + 1, length) != s) {
      return false;
    }
    j_ = k_ - length;
    return true;
  }

  void set_to(std::u32string_view s) {
    const int length = static_cast<int>(s.size());
    b_.replace(j_ + 1, k_ - j_, s);
    k_ = j_ + length;
  }

  void r(std::u32string_view s) {
    if (m() > 0) set_to(s);
  }

  // Plurals and -ed / -ing.
  void step1ab() {
    if (b_[k_] == U's') {
      if (ends(U"sses")) {
        k_ -= 2;
      } else if (ends(U"ies")) {
        set_to(U"i");
      } else if (b_[k_ - 1] != U's') {
        --k_;
      }
    }
    if (ends(U"eed")) {
      if (m() > 0) --k_;
    } else if ((ends(U"ed") || ends(U"ing")) && vowel_in_stem()) {
      k_ = j_;
      if (ends(U"at")) {
        set_to(U"ate");
      } else if (ends(U"bl")) {
        set_to(U"ble");
      } else if (ends(U"iz")) {
        set_to(U"ize");
      } else if (double_consonant(k_)) {
        --k_;
        const char32_t ch = b_[k_];
        if (ch == U'l' || ch == U's' || ch == U'z') ++k_;
      } else if (m() == 1 && cvc(k_)) {
        set_to(U"e");
      }
    }
  }

  void step1c() {
    if (ends(U"y") && vowel_in_stem()) b_[k_] = U'i';
  }

  void step2() {
    switch (b_[k_ - 1]) {
      case U'a':
        if (ends(U"ational")) { r(U"ate"); break; }
        if (ends(U"tional")) { r(U"tion"); break; }
        break;
      case U'c':
        if (ends(U"enci")) { r(U"ence"); break; }
        if (ends(U"anci")) { r(U"ance"); break; }
        break;
      case U'e':
        if (ends(U"izer")) { r(U"ize"); break; }
        break;
      case U'l':
        if (ends(U"bli")) { r(U"ble"); break; }
        if (ends(U"alli")) { r(U"al"); break; }
        if (ends(U"entli")) { r(U"ent"); break; }
        if (ends(U"eli")) { r(U"e"); break; }
        if (ends(U"ousli")) { r(U"ous"); break; }
        break;
      case U'o':
        if (ends(U"ization")) { r(U"ize"); break; }
        if (ends(U"ation")) { r(U"ate"); break; }
        if (ends(U"ator")) { r(U"ate"); break; }
        break;
      case U's':
        if (ends(U"alism")) { r(U"al"); break; }
        if (ends(U"iveness")) { r(U"ive"); break; }
        if (ends(U"fulness")) { r(U"ful"); break; }
        if (ends(U"ousness")) { r(U"ous"); break; }
        break;
      case U't':
        if (ends(U"aliti")) { r(U"al"); break; }
        if (ends(U"iviti")) { r(U"ive"); break; }
        if (ends(U"biliti")) { r(U"ble"); break; }
        break;
      case U'g':
        if (ends(U"logi")) { r(U"log"); break; }
        break;
      default:
        break;
    }
  }

  void step3() {
    switch (b_[k_]) {
      case U'e':
        if (ends(U"icate")) { r(U"ic"); break; }
        if (ends(U"ative")) { r(U""); break; }
        if (ends(U"alize")) { r(U"al"); break; }
        break;
      case U'i':
        if (ends(U"iciti")) { r(U"ic"); break; }
        break;
      case U'l':
        if (ends(U"ical")) { r(U"ic"); break; }
        if (ends(U"ful")) { r(U""); break; }
        break;
      case U's':
        if (ends(U"ness")) { r(U""); break; }
        break;
      default:
        break;
    }
  }

  void step4() {
    switch (b_[k_ - 1]) {
      case U'a':
        if (ends(U"al")) break;
        return;
      case U'c':
        if (ends(U"ance")) break;
        if (ends(U"ence")) break;
        return;
      case U'e':
        if (ends(U"er")) break;
        return;
      case U'i':
        if (ends(U"ic")) break;
        return;
      case U'l':
        if (ends(U"able")) break;
        if (ends(U"ible")) break;
        return;
      case U'n':
        if (ends(U"ant")) break;
        if (ends(U"ement")) break;
        if (ends(U"ment")) break;
        if (ends(U"ent")) break;
        return;
      case U'o':
        if (ends(U"ion") && j_ >= 0 && (b_[j_] == U's' || b_[j_] == U't')) break;
        if (ends(U"ou")) break;
        return;
      case U's':
        if (ends(U"ism")) break;
        return;
      case U't':
        if (ends(U"ate")) break;
        if (ends(U"iti")) break;
        return;
      case U'u':
        if (ends(U"ous")) break;
        return;
      case U'v':
        if (ends(U"ive")) break;
        return;
      case U'z':
        if (ends(U"ize")) break;
        return;
      default:
        return;
    }
    if (m() > 1) k_ = j_;
  }

  void step5() {
    j_ = k_;
    if (b_[k_] == U'e') {
      const int a = m();
      if (a > 1 || (a == 1 && !cvc(k_ - 1))) --k_;
    }
    if (b_[k_] == U'l' && double_consonant(k_) && m() > 1) --k_;
  }

  std::u32string b_;
  int k_ = 0;
  int j_ = 0;
};

}  // namespace

std::string porter_stem(std::string_view word) {
  return unicode::encode_utf8(PorterStemmer(unicode::decode_utf8(word)).run());
}

}  // namespace ami
