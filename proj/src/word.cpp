#include "covermix/word.hpp"

namespace covermix {

Word Word::from_letters(const std::vector<Letter>& ls) {
  Word w;
  for (auto l : ls) w.push(l);
  return w;
}

Word Word::from_indices(const std::vector<int>& idx, int rank) {
  Word w;
  for (int k : idx) {
    require(k != 0 && std::abs(k) <= rank, ErrKind::validation,
            "generator index out of range: " + std::to_string(k));
    w.push(Letter{std::int8_t(std::abs(k) - 1), std::int8_t(k > 0 ? 1 : -1)});
  }
  return w;
}

void Word::push(Letter l) {
  if (!ls_.empty() && ls_.back() == l.inverse())
    ls_.pop_back();
  else
    ls_.push_back(l);
}

Word Word::inverse() const {
  Word w;
  w.ls_.reserve(ls_.size());
  for (auto it = ls_.rbegin(); it != ls_.rend(); ++it)
    w.ls_.push_back(it->inverse());
  return w;
}

Word operator*(const Word& u, const Word& v) {
  Word w = u;
  for (auto l : v.ls_) w.push(l);
  return w;
}

Word Word::pow(int n) const {
  Word base = n < 0 ? inverse() : *this;
  Word w;
  for (int i = 0; i < std::abs(n); ++i) w = w * base;
  return w;
}

std::vector<long long> Word::abelianize(int rank) const {
  std::vector<long long> e(rank, 0);
  for (auto l : ls_) e.at(l.gen) += l.sign;
  return e;
}

Word Word::cyclically_reduced() const {
  std::size_t i = 0, j = ls_.size();
  while (j - i >= 2 && ls_[i] == ls_[j - 1].inverse()) { ++i; --j; }
  Word w;
  w.ls_.assign(ls_.begin() + i, ls_.begin() + j);
  return w;
}

std::size_t least_rotation_index(const std::vector<Letter>& ls) {
  std::size_t n = ls.size();
  if (n <= 1) return 0;
  // Booth's algorithm on doubled code sequence
  std::vector<std::uint8_t> s(2 * n);
  for (std::size_t i = 0; i < n; ++i) s[i] = s[i + n] = ls[i].code();
  std::vector<long> f(2 * n, -1);
  std::size_t k = 0;
  for (std::size_t j = 1; j < 2 * n; ++j) {
    std::uint8_t sj = s[j];
    long i = f[j - k - 1];
    while (i != -1 && sj != s[k + i + 1]) {
      if (sj < s[k + i + 1]) k = j - i - 1;
      i = f[i];
    }
    if (sj != s[k + i + 1]) {
      if (sj < s[k]) k = j;
      f[j - k] = -1;
    } else {
      f[j - k] = i + 1;
    }
  }
  return k;
}

Word Word::least_rotation() const {
  std::size_t n = ls_.size();
  if (n <= 1) return *this;
  std::size_t k = least_rotation_index(ls_);
  Word w;
  w.ls_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) w.ls_.push_back(ls_[(k + i) % n]);
  return w;
}

bool is_primitive(const std::vector<Letter>& ls) {
  std::size_t n = ls.size();
  if (n == 0) return false;
  for (std::size_t p = 1; p <= n / 2; ++p) {
    if (n % p) continue;
    bool period = true;
    for (std::size_t i = p; i < n && period; ++i)
      period = ls[i] == ls[i - p];
    if (period) return false;
  }
  return true;
}

bool Word::primitive() const { return is_primitive(ls_); }

std::string Word::str(int /*rank*/) const {
  if (ls_.empty()) return "1";
  std::string out;
  std::size_t i = 0;
  while (i < ls_.size()) {
    std::size_t j = i;
    while (j < ls_.size() && ls_[j] == ls_[i]) ++j;
    if (!out.empty()) out += ' ';
    out += char('a' + ls_[i].gen);
    long long e = (long long)(j - i) * ls_[i].sign;
    if (e != 1) out += '^' + std::to_string(e);
    i = j;
  }
  return out;
}

std::string Word::key() const {
  std::string k;
  k.reserve(ls_.size());
  for (auto l : ls_) k.push_back(char(l.code()));
  return k;
}

}  // namespace covermix
