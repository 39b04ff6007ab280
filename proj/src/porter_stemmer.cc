// Copyright 2026 The Dialsum Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dialsum/porter_stemmer.h"

namespace dialsum {
namespace {

// b_[0..k_] is the word being stemmed; j_ marks the end of the stem for the
// suffix most recently matched by Ends().
class Stemmer {
 public:
  explicit Stemmer(std::string_view word)
      : b_(word), k_(static_cast<int>(word.size()) - 1) {}

  std::string Run() {
    if (k_ <= 1) return b_;
    Step1ab();
    if (k_ > 0) {
      Step1c();
      Step2();
      Step3();
      Step4();
      Step5();
    }
    return b_.substr(0, k_ + 1);
  }

 private:
  bool Cons(int i) const {
    switch (b_[i]) {
      case 'a':
      case 'e':
      case 'i':
      case 'o':
      case 'u':
        return false;
      case 'y':
        return i == 0 ? true : !Cons(i - 1);
      default:
        return true;
    }
  }

  // Number of vowel-consonant sequences in b_[0..j_].
  int M() const {
    int n = 0;
    int i = 0;
    while (true) {
      if (i > j_) return n;
      if (!Cons(i)) break;
      ++i;
    }
    ++i;
    while (true) {
      while (true) {
        if (i > j_) return n;
        if (Cons(i)) break;
        ++i;
      }
      ++i;
      ++n;
      while (true) {
        if (i > j_) return n;
        if (!Cons(i)) break;
        ++i;
      }
      ++i;
    }
  }

  bool VowelInStem() const {
    for (int i = 0; i <= j_; ++i) {
      if (!Cons(i)) return true;
    }
    return false;
  }

  bool DoubleC(int j) const {
    if (j < 1) return false;
    if (b_[j] != b_[j - 1]) return false;
    return Cons(j);
  }

  // consonant-vowel-consonant ending at i, last consonant not w, x or y.
  bool Cvc(int i) const {
    if (i < 2 || !Cons(i) || Cons(i - 1) || !Cons(i - 2)) return false;
    const char ch = b_[i];
    return ch != 'w' && ch != 'x' && ch != 'y';
  }

  bool Ends(std::string_view s) {
    const int len = static_cast<int>(s.size());
    if (len > k_ + 1) return false;
    if (std::string_view(b_).substr(k_ - len + 1, len) != s) return false;
    j_ = k_ - len;
    return true;
  }

  void SetTo(std::string_view s) {
    b_.replace(j_ + 1, k_ - j_, s);
    k_ = j_ + static_cast<int>(s.size());
    b_.resize(k_ + 1);
  }

  void R(std::string_view s) {
    if (M() > 0) SetTo(s);
  }

  void Step1ab() {
    if (b_[k_] == 's') {
      if (Ends("sses")) {
        k_ -= 2;
      } else if (Ends("ies")) {
        SetTo("i");
      } else if (b_[k_ - 1] != 's') {
        --k_;
      }
    }
    if (Ends("eed")) {
      if (M() > 0) --k_;
    } else if ((Ends("ed") || Ends("ing")) && VowelInStem()) {
      k_ = j_;
      if (Ends("at")) {
        SetTo("ate");
      } else if (Ends("bl")) {
        SetTo("ble");
      } else if (Ends("iz")) {
        SetTo("ize");
      } else if (DoubleC(k_)) {
        --k_;
        const char ch = b_[k_];
        if (ch == 'l' || ch == 's' || ch == 'z') ++k_;
      } else if (M() == 1 && Cvc(k_)) {
        SetTo("e");
      }
    }
    b_.resize(k_ + 1);
  }

  void Step1c() {
    if (Ends("y") && VowelInStem()) b_[k_] = 'i';
  }

  // Replaces the first matching suffix (when the stem measure allows) and
  // stops at the first match either way.
  void ReplaceFirst(std::initializer_list<std::pair<std::string_view,
                                                    std::string_view>> rules) {
    for (const auto& [suffix, replacement] : rules) {
      if (Ends(suffix)) {
        R(replacement);
        return;
      }
    }
  }

  void Step2() {
    if (k_ < 1) return;
    switch (b_[k_ - 1]) {
      case 'a':
        ReplaceFirst({{"ational", "ate"}, {"tional", "tion"}});
        break;
      case 'c':
        ReplaceFirst({{"enci", "ence"}, {"anci", "ance"}});
        break;
      case 'e':
        ReplaceFirst({{"izer", "ize"}});
        break;
      case 'l':
        ReplaceFirst({{"bli", "ble"},
                      {"alli", "al"},
                      {"entli", "ent"},
                      {"eli", "e"},
                      {"ousli", "ous"}});
        break;
      case 'o':
        ReplaceFirst({{"ization", "ize"}, {"ation", "ate"}, {"ator", "ate"}});
        break;
      case 's':
        ReplaceFirst({{"alism", "al"},
                      {"iveness", "ive"},
                      {"fulness", "ful"},
                      {"ousness", "ous"}});
        break;
      case 't':
        ReplaceFirst({{"aliti", "al"}, {"iviti", "ive"}, {"biliti", "ble"}});
        break;
      case 'g':
        ReplaceFirst({{"logi", "log"}});
        break;
      default:
        break;
    }
  }

  void Step3() {
    switch (b_[k_]) {
      case 'e':
        ReplaceFirst({{"icate", "ic"}, {"ative", ""}, {"alize", "al"}});
        break;
      case 'i':
        ReplaceFirst({{"iciti", "ic"}});
        break;
      case 'l':
        ReplaceFirst({{"ical", "ic"}, {"ful", ""}});
        break;
      case 's':
        ReplaceFirst({{"ness", ""}});
        break;
      default:
        break;
    }
  }

  bool EndsAny(std::initializer_list<std::string_view> suffixes) {
    for (std::string_view s : suffixes) {
      if (Ends(s)) return true;
    }
    return false;
  }

  void Step4() {
    if (k_ < 1) return;
    bool matched = false;
    switch (b_[k_ - 1]) {
      case 'a':
        matched = EndsAny({"al"});
        break;
      case 'c':
        matched = EndsAny({"ance", "ence"});
        break;
      case 'e':
        matched = EndsAny({"er"});
        break;
      case 'i':
        matched = EndsAny({"ic"});
        break;
      case 'l':
        matched = EndsAny({"able", "ible"});
        break;
      case 'n':
        matched = EndsAny({"ant", "ement", "ment", "ent"});
        break;
      case 'o':
        if (Ends("ion") && j_ >= 0 && (b_[j_] == 's' || b_[j_] == 't')) {
          matched = true;
        } else {
          matched = Ends("ou");
        }
        break;
      case 's':
        matched = EndsAny({"ism"});
        break;
      case 't':
        matched = EndsAny({"ate", "iti"});
        break;
      case 'u':
        matched = EndsAny({"ous"});
        break;
      case 'v':
        matched = EndsAny({"ive"});
        break;
      case 'z':
        matched = EndsAny({"ize"});
        break;
      default:
        break;
    }
    if (matched && M() > 1) k_ = j_;
  }

  void Step5() {
    j_ = k_;
    if (b_[k_] == 'e') {
      const int a = M();
      if (a > 1 || (a == 1 && !Cvc(k_ - 1))) --k_;
    }
    if (b_[k_] == 'l' && DoubleC(k_) && M() > 1) --k_;
  }

  std::string b_;
  int k_;
  int j_ = 0;
};

}  // namespace

std::string PorterStem(std::string_view word) { return Stemmer(word).Run(); }

}  // namespace dialsum
