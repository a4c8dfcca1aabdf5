#pragma once

#include <string>
#include <vector>

namespace catflow {

// Reduced words over {a, b, A, B} with A = a^-1, B = b^-1.
// The empty word is the identity (the root vertex of the tree).

inline char letter_inverse(char c) {
  switch (c) {
    case 'a': return 'A';
    case 'A': return 'a';
    case 'b': return 'B';
    case 'B': return 'b';
  }
  return 0;
}

bool is_word(const std::string& w);
bool is_reduced(const std::string& w);

// Freely reduce a word (cancel adjacent inverse pairs).
std::string reduce_word(const std::string& w);

// Inverse of a reduced word.
std::string invert_word(const std::string& w);

// Product of two reduced words, reduced.
std::string concat_words(const std::string& u, const std::string& v);

// Length of the longest common prefix.
std::size_t common_prefix_len(const std::string& u, const std::string& v);

// Word metric between vertices: |u^-1 v|.
std::size_t vertex_distance(const std::string& u, const std::string& v);

// Cyclic reduction w = u * core * u^-1 with core cyclically reduced.
// Returns {core, u}.
struct CyclicForm {
  std::string core;
  std::string conjugator;
};
CyclicForm cyclically_reduce(const std::string& w);

// Least rotation of all cyclic rotations of a cyclically reduced word,
// used as a conjugacy-class key.
std::string least_cyclic_rotation(const std::string& w);

}  // namespace catflow
