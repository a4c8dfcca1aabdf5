#include "catflow/words.hpp"

#include <algorithm>
#include <stdexcept>

namespace catflow {

bool is_word(const std::string& w) {
  for (char c : w) {
    if (c != 'a' && c != 'A' && c != 'b' && c != 'B') return false;
  }
  return true;
}

bool is_reduced(const std::string& w) {
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    if (w[i + 1] == letter_inverse(w[i])) return false;
  }
  return true;
}

std::string reduce_word(const std::string& w) {
  std::string out;
  out.reserve(w.size());
  for (char c : w) {
    if (!out.empty() && out.back() == letter_inverse(c)) {
      out.pop_back();
    } else {
      out.push_back(c);
    }
  }
  return out;
}

std::string invert_word(const std::string& w) {
  std::string out;
  out.reserve(w.size());
  for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(letter_inverse(*it));
  return out;
}

std::string concat_words(const std::string& u, const std::string& v) {
  std::size_t cut = 0;
  while (cut < u.size() && cut < v.size() &&
         u[u.size() - 1 - cut] == letter_inverse(v[cut])) {
    ++cut;
  }
  std::string out = u.substr(0, u.size() - cut);
  out.append(v, cut, std::string::npos);
  return out;
}

std::size_t common_prefix_len(const std::string& u, const std::string& v) {
  std::size_t n = std::min(u.size(), v.size());
  std::size_t i = 0;
  while (i < n && u[i] == v[i]) ++i;
  return i;
}

std::size_t vertex_distance(const std::string& u, const std::string& v) {
  std::size_t p = common_prefix_len(u, v);
  return (u.size() - p) + (v.size() - p);
}

CyclicForm cyclically_reduce(const std::string& w_in) {
  std::string w = reduce_word(w_in);
  std::string conj;
  while (w.size() >= 2 && w.front() == letter_inverse(w.back())) {
    conj.push_back(w.front());
    w = w.substr(1, w.size() - 2);
  }
  return {w, conj};
}

std::string least_cyclic_rotation(const std::string& w) {
  if (w.empty()) return w;
  std::string best = w;
  std::string cur = w;
  for (std::size_t i = 1; i < w.size(); ++i) {
    std::rotate(cur.begin(), cur.begin() + 1, cur.end());
    if (cur < best) best = cur;
  }
  return best;
}

}  // namespace catflow
