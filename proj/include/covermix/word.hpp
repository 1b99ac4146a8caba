#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "covermix/errors.hpp"

namespace covermix {

// One letter g_i^{+1} or g_i^{-1}; gen is a 0-based generator index.
struct Letter {
  std::int8_t gen = 0;
  std::int8_t sign = 1;
  friend bool operator==(const Letter&, const Letter&) = default;
  Letter inverse() const { return {gen, std::int8_t(-sign)}; }
  // dense code used for lexicographic comparisons and hashing
  std::uint8_t code() const { return std::uint8_t(gen * 2 + (sign < 0)); }
};

// Freely reduced word over the generators.  Multiplication reduces across the
// seam; construction from letters reduces everything.
class Word {
 public:
  Word() = default;
  static Word from_letters(const std::vector<Letter>& ls);
  // signed 1-based indices: +k means g_{k-1}, -k its inverse
  static Word from_indices(const std::vector<int>& idx, int rank);

  void push(Letter l);
  bool empty() const { return ls_.empty(); }
  std::size_t size() const { return ls_.size(); }
  const std::vector<Letter>& letters() const { return ls_; }

  Word inverse() const;
  friend Word operator*(const Word& u, const Word& v);
  Word pow(int n) const;

  std::vector<long long> abelianize(int rank) const;

  // strips u ... u^{-1} conjugation shells; result is cyclically reduced
  Word cyclically_reduced() const;

  // canonical necklace: lexicographically least rotation (letter codes)
  Word least_rotation() const;

  // true unless the cyclic letter sequence is a proper power
  bool primitive() const;

  std::string str(int rank = -1) const;  // e.g. "a b^-1 a"

  friend bool operator==(const Word&, const Word&) = default;
  friend auto operator<=>(const Word& u, const Word& v) {
    return u.key() <=> v.key();
  }
  std::string key() const;  // dense code string, for hashing/sets

 private:
  std::vector<Letter> ls_;
};

// Start index of the lexicographically least rotation of `ls` (Booth's
// algorithm over letter codes); 0 for sequences of length <= 1.
std::size_t least_rotation_index(const std::vector<Letter>& ls);

// True unless `ls` is a proper power as a cyclic letter sequence (or empty).
bool is_primitive(const std::vector<Letter>& ls);

}  // namespace covermix
