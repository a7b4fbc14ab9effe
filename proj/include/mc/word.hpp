#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "mc/errors.hpp"

namespace mc {

using BigInt = boost::multiprecision::cpp_int;

// Chairs are 1-based, matching the usual alphabet {1, ..., m}.
// Positions and lengths are 0-based exact big integers.
using Chair = int;

class WordExpr;
using Word = std::shared_ptr<const WordExpr>;

// Subset of chairs used by the rank/select descent. `universal` stands for
// "all chairs", so plain random access never pays for set bookkeeping.
class ChairSet {
public:
  ChairSet() : universal_(true) {}
  explicit ChairSet(const std::vector<Chair>& chairs);
  static ChairSet all() { return ChairSet(); }

  bool is_universal() const { return universal_; }
  bool contains(Chair c) const {
    if (universal_) return true;
    return c >= 1 && static_cast<size_t>(c) <= mask_.size() && mask_[c - 1];
  }
  ChairSet intersect(const std::vector<char>& keep_mask) const;
  // Preimage under an injective chair map (map[c-1] = image of c).
  ChairSet preimage(const std::vector<Chair>& map) const;
  std::vector<Chair> to_chairs(int max_chair) const;

private:
  bool universal_ = false;
  std::vector<char> mask_;  // mask_[c-1]
};

enum class NodeKind { Literal, Concat, Power, Interleave, Restrict, Relabel };

// Immutable expression DAG over chair words. Lengths and per-chair histograms
// are cached exactly; letters are never materialized unless asked for.
// Sub-expressions are shared freely; a node is safe to read concurrently.
class WordExpr {
public:
  NodeKind kind() const { return kind_; }
  const BigInt& length() const { return length_; }
  // hist()[c-1] = number of occurrences of chair c; size() == max_chair().
  const std::vector<BigInt>& hist() const { return hist_; }
  int max_chair() const { return static_cast<int>(hist_.size()); }
  int depth() const { return depth_; }

  const std::vector<Chair>& letters() const { return letters_; }        // Literal
  const std::vector<Word>& children() const { return children_; }      // Concat
  const Word& base() const { return base_; }             // Power/Interleave/Restrict/Relabel
  const BigInt& exponent() const { return exponent_; }   // Power
  Chair inter_chair() const { return inter_chair_; }     // Interleave
  const std::vector<char>& keep_mask() const { return keep_mask_; }     // Restrict
  const std::vector<Chair>& chair_map() const { return chair_map_; }    // Relabel

  // Number of letters from B in the whole word.
  BigInt count_in(const ChairSet& b) const;
  // Number of letters from B among the first `pos` letters (0 <= pos <= length).
  BigInt rank_in(const ChairSet& b, const BigInt& pos) const;
  // Position of the k-th (0-based) letter from B.
  BigInt select_pos(const ChairSet& b, const BigInt& k) const;
  // The k-th letter from B itself (cheaper than at(select_pos(...))).
  Chair kth_in(const ChairSet& b, const BigInt& k) const;

  // Letter at index i; linear mode throws OutOfRange, cyclic reduces mod length.
  Chair at(const BigInt& i) const;
  Chair at_cyclic(const BigInt& i) const;

  bool is_full(int m) const;

  // Stream letters (filtered to `b`) into sink; sink returns false to stop.
  // Subtrees with no letters from `b` are skipped, so the walk is
  // output-sensitive even below Restrict of astronomically long bases.
  void scan(const ChairSet& b, const std::function<bool(Chair)>& sink) const;

private:
  WordExpr() = default;
  friend Word literal(std::vector<Chair> letters);
  friend Word concat(std::vector<Word> parts);
  friend Word power(Word base, BigInt exponent);
  friend Word interleave(Chair c, Word base);
  friend Word restrict_to(Word base, const std::vector<Chair>& keep);
  friend Word relabel(Word base, std::vector<Chair> map);

  NodeKind kind_ = NodeKind::Literal;
  std::vector<Chair> letters_;
  std::vector<Word> children_;
  Word base_;
  BigInt exponent_;
  Chair inter_chair_ = 0;
  std::vector<char> keep_mask_;
  std::vector<Chair> chair_map_;

  BigInt length_;
  std::vector<BigInt> hist_;
  int depth_ = 1;
};

inline constexpr int kDepthCap = 10000;
inline constexpr long kMaterializeCap = 1000000;

// Node constructors. Each validates its arguments and caches length/histogram.
Word literal(std::vector<Chair> letters);
Word concat(std::vector<Word> parts);
Word power(Word base, BigInt exponent);
Word interleave(Chair c, Word base);
Word restrict_to(Word base, const std::vector<Chair>& keep);
Word relabel(Word base, std::vector<Chair> map);
// relabel with c -> c + delta on every chair the word uses.
Word shift(Word base, int delta);

struct Measure {
  BigInt length;
  std::vector<BigInt> hist;
};
Measure measure(const Word& w);

// Full letter sequence; throws TooLong(length) if length > cap.
std::vector<Chair> materialize(const Word& w, long cap = kMaterializeCap);

// The first `len` letters as an expression in the same node algebra
// (1 <= len <= length). Used by the Prop 14 padding; serializable as-is.
Word prefix(const Word& w, const BigInt& len);

// Tree equality, ignoring sharing (memoized over node pairs).
bool structural_equal(const Word& a, const Word& b);
// Flattens nested Concat and merges nested Power; drops trivial wrappers.
Word normalize(const Word& w);
// The "no two identical words" test: letter comparison when both lengths fit
// under `cap`, otherwise structural equality of normalized expressions.
bool words_identical(const Word& a, const Word& b, long cap = kMaterializeCap);

std::string letters_to_string(const std::vector<Chair>& letters);

}  // namespace mc
